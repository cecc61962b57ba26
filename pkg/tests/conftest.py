"""Shared rings of the test suite."""

import pytest

from core.ring_core import make_zmod, make_product, ideal_closure, zero_ideal, whole_ideal
from core.matrix_ring import StructuralMatrixRing


def carpet(k, generators, n, label="J"):
    return StructuralMatrixRing(n, k, ideal_closure(k, generators, label))


@pytest.fixture(scope="session")
def z9():
    return make_zmod(9)


@pytest.fixture(scope="session")
def z9z9():
    return make_product(make_zmod(9), make_zmod(9))


@pytest.fixture(scope="session")
def r3_z9(z9):
    "R_3(Z_9, 3Z_9)"
    return carpet(z9, [3], 3)


@pytest.fixture(scope="session")
def r4_z9(z9):
    "R_4(Z_9, 3Z_9)"
    return carpet(z9, [3], 4)


@pytest.fixture(scope="session")
def r4_z9z9(z9z9):
    "R_4(Z_9 x Z_9, 3Z_9 x 3Z_9)"
    return carpet(z9z9, [(3, 0), (0, 3)], 4)


@pytest.fixture(scope="session")
def m2_z3():
    "M_2(Z_3), the case J = K"
    k = make_zmod(3)
    return StructuralMatrixRing(2, k, whole_ideal(k))


@pytest.fixture(scope="session")
def nt4_z9(z9):
    "NT_4(Z_9), the case J = 0"
    return StructuralMatrixRing(4, z9, zero_ideal(z9))


@pytest.fixture(scope="session")
def r4_z4():
    "R_4(Z_4, 2Z_4), with 2-torsion"
    return carpet(make_zmod(4), [2], 4)
