"""Matrix scenario encoding and the generic variation operators.

A scenario is a 2D float array: one row per parameter (described by a
:class:`GeneSpec`) and one column per environment element (a road segment,
a wall, ...). Categorical rows hold category indices stored as floats.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

KINDS = ("categorical", "integer", "real")


@dataclass(frozen=True)
class GeneSpec:
    """Name, kind and inclusive bounds of one scenario row.

    For categorical rows ``min``/``max`` are category indices; when omitted
    they span the whole ``categories`` list.
    """

    name: str
    kind: str
    min: float = 0.0
    max: float = 0.0
    categories: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"gene {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == "categorical":
            if not self.categories:
                raise ValueError(f"gene {self.name!r}: categorical kind requires categories")
            if self.min == 0.0 and self.max == 0.0:
                object.__setattr__(self, "max", float(len(self.categories) - 1))
            if not (0 <= self.min and self.max <= len(self.categories) - 1):
                raise ValueError(f"gene {self.name!r}: category bounds outside the category list")
        if self.min > self.max:
            raise ValueError(f"gene {self.name!r}: min {self.min} > max {self.max}")

    def draw(self, rng: np.random.Generator) -> float:
        if self.kind == "real":
            return float(rng.uniform(self.min, self.max))
        return float(rng.integers(int(self.min), int(self.max) + 1))

    def contains(self, value: float) -> bool:
        if not (self.min <= value <= self.max):
            return False
        return self.kind == "real" or float(value).is_integer()


class ScenarioSpace:
    """The set of valid scenarios: row specs plus column-count bounds.

    Problems whose valid range for an entry depends on other entries of the
    same column override :meth:`entry_domain`.
    """

    def __init__(self, specs: Sequence[GeneSpec], length_bounds: tuple[int, int]):
        if not specs:
            raise ValueError("scenario space needs at least one gene spec")
        lo, hi = length_bounds
        if not (1 <= lo <= hi):
            raise ValueError(f"invalid column bounds {length_bounds}")
        self.specs = tuple(specs)
        self.length_bounds = (int(lo), int(hi))

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.specs]

    def entry_domain(self, genes: np.ndarray, row: int, col: int) -> GeneSpec:
        return self.specs[row]

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        lo, hi = self.length_bounds
        n_cols = int(rng.integers(lo, hi + 1))
        genes = np.zeros((len(self.specs), n_cols))
        for col in range(n_cols):
            for row in range(len(self.specs)):
                genes[row, col] = self.entry_domain(genes, row, col).draw(rng)
        return genes

    def violations(self, genes: np.ndarray) -> list[str]:
        """Human-readable list of broken scenario invariants (empty if valid)."""
        out = []
        if genes.ndim != 2 or genes.shape[0] != len(self.specs):
            return [f"expected {len(self.specs)} rows, got shape {genes.shape}"]
        lo, hi = self.length_bounds
        if not (lo <= genes.shape[1] <= hi):
            out.append(f"column count {genes.shape[1]} outside [{lo}, {hi}]")
        for col in range(genes.shape[1]):
            for row in range(genes.shape[0]):
                spec = self.entry_domain(genes, row, col)
                if not spec.contains(genes[row, col]):
                    out.append(f"entry ({row}, {col}) = {genes[row, col]} outside {spec.name} domain")
        return out

    def is_valid(self, genes: np.ndarray) -> bool:
        return not self.violations(genes)


def sample(specs: Sequence[GeneSpec], length_bounds: tuple[int, int],
           rng: np.random.Generator) -> np.ndarray:
    return ScenarioSpace(specs, length_bounds).sample(rng)


def one_point_crossover(a: np.ndarray, b: np.ndarray,
                        rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Swap column tails after a cut point shared by both parents.

    The cut is uniform in ``[1, min_len - 1]`` so both children keep at least
    one column from each parent; child lengths equal the parents' lengths
    swapped. Parents with fewer than two columns come back unchanged.
    """
    m = min(a.shape[1], b.shape[1])
    if m < 2:
        return a.copy(), b.copy()
    k = int(rng.integers(1, m))
    return _cross_at(a, b, k)


def _cross_at(a: np.ndarray, b: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    c1 = np.concatenate([a[:, :k], b[:, k:]], axis=1)
    c2 = np.concatenate([b[:, :k], a[:, k:]], axis=1)
    return c1, c2


def mutate_exchange(s: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    out = s.copy()
    n = s.shape[1]
    if n < 2:
        return out
    i, j = rng.choice(n, size=2, replace=False)
    out[:, [i, j]] = out[:, [j, i]]
    return out


def mutate_change_variable(s: np.ndarray, space: ScenarioSpace,
                           rng: np.random.Generator) -> np.ndarray:
    """Redraw one randomly chosen entry within its (column-dependent) domain."""
    out = s.copy()
    row = int(rng.integers(s.shape[0]))
    col = int(rng.integers(s.shape[1]))
    out[row, col] = space.entry_domain(out, row, col).draw(rng)
    return out


def mutate(s: np.ndarray, space: ScenarioSpace, rng: np.random.Generator) -> np.ndarray:
    """Apply exchange or change-of-variable mutation with equal probability."""
    if rng.random() < 0.5:
        return mutate_exchange(s, rng)
    return mutate_change_variable(s, space, rng)


def scenario_to_dict(genes: np.ndarray, names: Sequence[str]) -> dict:
    return {"genes": list(names), "scenario": genes.tolist()}


def scenario_from_dict(doc: dict) -> tuple[np.ndarray, list[str]]:
    genes = np.asarray(doc["scenario"], dtype=float)
    names = list(doc["genes"])
    if genes.ndim != 2 or genes.shape[0] != len(names):
        raise ValueError(f"scenario has shape {genes.shape} but {len(names)} gene names")
    return genes, names


def load_scenario(path: str | Path) -> tuple[np.ndarray, list[str]]:
    with open(path) as f:
        return scenario_from_dict(json.load(f))
