import numpy as np
import pytest

from scenevo import _purepy
from scenevo.evo import Evaluation, Problem
from scenevo.genome import GeneSpec, ScenarioSpace

try:
    from scenevo import _speedups
except ImportError:  # extension not built
    _speedups = None

BACKENDS = [pytest.param(_purepy, id="python")]
if _speedups is not None:
    BACKENDS.append(pytest.param(_speedups, id="cython"))


@pytest.fixture(params=BACKENDS, scope="session")
def backend(request):
    return request.param


class VectorProblem(Problem):
    """Toy problem: fitness is the sum of a real vector, novelty the mean absolute gap.

    Scenarios whose first entry exceeds ``infeasible_above`` violate a constraint.
    """

    name = "vector"

    def __init__(self, n_cols=6, infeasible_above=None):
        super().__init__(ScenarioSpace([GeneSpec("x", "real", 0.0, 1.0)], (n_cols, n_cols)))
        self.infeasible_above = infeasible_above
        self.calls = 0

    def evaluate(self, genes):
        self.calls += 1
        cv = 0.0
        if self.infeasible_above is not None and genes[0, 0] > self.infeasible_above:
            cv = float(genes[0, 0] - self.infeasible_above)
        return Evaluation(fitness=float(genes.sum()), cv=cv)

    def novelty(self, a, b):
        return float(np.mean(np.abs(a - b)))


@pytest.fixture
def vector_problem():
    return VectorProblem()


def empty_room(n=40):
    cells = np.zeros((n, n), dtype=np.uint8)
    cells[0, :] = cells[-1, :] = cells[:, 0] = cells[:, -1] = 1
    return cells
