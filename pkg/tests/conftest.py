import json
from pathlib import Path

import pytest

from kount import _kernels
from kount._rng import SeededStream
from kount.complexes import (attach_cell, generate_closure, random_complex, standard_complex,
                             suspension)

GOLDEN = Path(__file__).parent / "golden"


def printed(name):
    return json.loads((GOLDEN / "printed_matrices.json").read_text())[name]


def star3():
    return standard_complex("star", 3)


def triangle():
    return generate_closure([[1, 2, 3]])


def cycle4():
    return standard_complex("cycle", 4)


def octahedron():
    return standard_complex("cross_polytope", 2)


def disc():
    # 2-cell glued along the four edges of C4 (cell ids 5..8)
    return attach_cell(cycle4(), [5, 6, 7, 8])


def octahedron_cell():
    O = octahedron()
    tops = [i + 1 for i, x in enumerate(O.simplices) if len(x) == 3]
    return attach_cell(O, tops)


def seventy():
    return generate_closure([range(1, 6), range(5, 10), [1, 2, 8, 9]])


def suspended_octahedron():
    return suspension(octahedron())


def suite_complex(seed):
    """R(n <= 7, m <= 12): sizes drawn from the same seeded stream family."""
    rng = SeededStream(10_000 + seed)
    return random_complex(rng.integer(1, 7), rng.integer(1, 12), seed)


BACKENDS = ["numpy"] + (["numba"] if _kernels._numba is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
