import logging

import numpy as np
import pytest

from core.ring_core import ideal_closure, whole_ideal, annihilator
from core.matrix_ring import (StructuralMatrixRing, PatternViolation, elementary, mul, jordan_product, coordinates,
                              from_coordinates, ann_R, ann_formula, carpet_check)

RING_FIXTURES = ["r3_z9", "r4_z9", "r4_z9z9", "m2_z3", "nt4_z9", "r4_z4"]


def test_generators(r4_z9, m2_z3, nt4_z9):
    assert len(r4_z9.generators) == 16
    assert r4_z9.additive_group.order == 9 ** 6 * 3 ** 10
    assert len(m2_z3.generators) == 4
    assert len(nt4_z9.generators) == 6
    assert all(i > j for i, j in (g.position for g in nt4_z9.generators))
    assert [g.index for g in r4_z9.generators] == list(range(16))


def test_elementary(r4_z9):
    x = elementary(r4_z9, 1, 2, 1)
    assert x.support() == [(2, 1)]
    assert str(elementary(r4_z9, 3, 1, 4)) == "3e_1,4"
    with pytest.raises(PatternViolation):
        elementary(r4_z9, 1, 1, 4)
    with pytest.raises(IndexError):
        elementary(r4_z9, 1, 5, 1)


def test_products(r4_z9):
    e = lambda x, i, j: elementary(r4_z9, x, i, j)
    assert mul(e(1, 2, 1), e(3, 1, 3)) == e(3, 2, 3)
    assert mul(e(3, 1, 4), e(1, 4, 3)) == e(3, 1, 3)
    assert mul(e(1, 3, 2), e(1, 2, 1)) == e(1, 3, 1)
    assert mul(e(1, 2, 1), e(1, 3, 2)).is_zero()
    assert jordan_product(e(1, 3, 2), e(1, 2, 1)) == e(1, 3, 1)


def test_products_keep_the_pattern_in_debug_mode(r4_z9, caplog):
    rng = np.random.default_rng(3)
    with caplog.at_level(logging.DEBUG, logger="core.matrix_ring"):
        for _ in range(20):
            x, y = r4_z9.random_element(rng), r4_z9.random_element(rng)
            (x * y).check_pattern()
            (x.jordan(y)).check_pattern()


def test_coordinates_round_trip(r4_z9z9):
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = r4_z9z9.random_element(rng)
        assert from_coordinates(r4_z9z9, coordinates(x)) == x


def test_element_outside_pattern(r4_z9):
    grid = [[0] * 4 for _ in range(4)]
    grid[0][1] = 1
    with pytest.raises(PatternViolation) as error:
        r4_z9.element(grid)
    assert error.value.position == (1, 2)


def test_distributivity(r4_z9):
    rng = np.random.default_rng(1)
    for _ in range(10):
        x, y, z = (r4_z9.random_element(rng) for _ in range(3))
        assert x * (y + z) == x * y + x * z
        assert (x * y) * z == x * (y * z)


@pytest.mark.parametrize("ring", RING_FIXTURES)
def test_annihilator_formula(ring, request):
    r = request.getfixturevalue(ring)
    assert ann_R(r) == ann_formula(r)


def test_annihilator_of_z9_ring(r4_z9):
    assert ann_R(r4_z9).order == annihilator(r4_z9.j).order == 3


def test_carpet_check(r4_z9):
    assert carpet_check(r4_z9)
    broken = carpet_check(r4_z9, pattern={(1, 2): r4_z9.whole})
    assert not broken
    assert broken.triple == (2, 1, 2)


def test_rejects_foreign_ideal(z9, z9z9):
    with pytest.raises(ValueError):
        StructuralMatrixRing(3, z9, ideal_closure(z9z9, [(3, 0)]))
    with pytest.raises(ValueError):
        StructuralMatrixRing(1, z9, whole_ideal(z9))
