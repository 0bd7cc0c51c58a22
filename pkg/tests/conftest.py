import pathlib
import sys

import pytest

SRC = pathlib.Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from cycres import cyc_complex, graph_core  # noqa: E402

INSTANCES = pathlib.Path(__file__).resolve().parent.parent / "instances"

WEIGHTED4 = [[2, -2, 0, 0], [0, 3, -3, 0], [-1, 0, 5, -4], [0, 0, -4, 4]]
WEIGHTED4_ECHELON = [[3, 0, -3, 0], [-2, 2, 0, 0], [0, -1, 5, -4], [0, 0, -4, 4]]
CYCLE4 = [[1, 0, 0, -1], [-1, 1, 0, 0], [0, -1, 1, 0], [0, 0, -1, 1]]
REDUCIBLE = [[1, -1, 0, 0], [-1, 1, 0, 0], [-1, -1, 3, -1], [-1, -1, -1, 3]]
ECHELON6 = [
    [1, 0, 0, 0, 0, -1],
    [0, 1, -1, 0, 0, 0],
    [-1, 0, 1, 0, 0, 0],
    [0, 0, -1, 1, 0, 0],
    [0, -1, 0, 0, 1, 0],
    [0, 0, 0, -1, -1, 2],
]
# strongly complete with pairwise distinct weights: keeps formulas honest
GENERIC4_WEIGHTS = [
    [0, 1, 2, 3],
    [4, 0, 5, 6],
    [7, 8, 0, 9],
    [10, 11, 12, 0],
]


def k4_digraph():
    return graph_core.validate_digraph(
        4, [(i, j, 1) for i in range(1, 5) for j in range(1, 5) if i != j]
    )


def generic4_matrix():
    n = 4
    a = [
        [
            GENERIC4_WEIGHTS[i][j] if i != j else sum(GENERIC4_WEIGHTS[i])
            for j in range(n)
        ]
        for i in range(n)
    ]
    return graph_core.CBMatrix(n, tuple(tuple(r) for r in a))


def complex_from_matrix(rows, omega=None):
    g = graph_core.digraph_from_matrix(rows)
    return cyc_complex.build_complex(graph_core.prepare(graph_core.laplacian(g), omega))


@pytest.fixture(scope="session")
def k4_complex():
    return cyc_complex.build_complex(graph_core.prepare(graph_core.laplacian(k4_digraph())))


@pytest.fixture(scope="session")
def cycle4_complex():
    return complex_from_matrix(CYCLE4)


@pytest.fixture(scope="session")
def generic4_complex():
    return cyc_complex.build_complex(graph_core.prepare(generic4_matrix()))


@pytest.fixture(scope="session")
def weighted4_echelon_complex():
    return complex_from_matrix(WEIGHTED4_ECHELON)
