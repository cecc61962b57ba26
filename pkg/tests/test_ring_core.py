import pytest
from hypothesis import given, settings, strategies as st

from core.exact_linalg import BoundsExceeded
from core.ring_core import (AdditiveMapKK, make_ring, make_zmod, make_product, ideal_closure, ideal_sum, ideal_product,
                            zero_ideal, whole_ideal, annihilator, left_annihilator, is_two_torsion_free,
                            validate_additive_map, enumerate_additive_maps)


def z9z9_elements():
    return st.tuples(st.integers(0, 8), st.integers(0, 8))


def test_zmod_arithmetic(z9):
    assert z9.order == 9
    assert z9.element(4) * z9.element(7) == z9.element(1)
    assert z9.element(5) + z9.element(7) == z9.element(3)
    assert (3 * z9.element(3)).is_zero()
    assert str(z9.element(12)) == "3"


def test_product_ring(z9z9):
    a, b = z9z9.element((3, 0)), z9z9.element((0, 3))
    assert (a * b).is_zero()
    assert z9z9.one == z9z9.element((1, 1))
    assert z9z9.element(2) == z9z9.element((2, 2))
    assert str(a) == "(3,0)"


@settings(max_examples=200, deadline=None)
@given(z9z9_elements(), z9z9_elements(), z9z9_elements())
def test_product_ring_axioms(x, y, z):
    k = make_product(make_zmod(9), make_zmod(9))
    x, y, z = k.element(x), k.element(y), k.element(z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z
    assert x * k.one == x == k.one * x


def test_invalid_structure_constants():
    with pytest.raises(ValueError):
        make_zmod(1)
    with pytest.raises(ValueError):
        # 1 * 1 = 2 leaves no unit
        make_ring((3,), (((2,),),), (1,))


def test_table_ring_matches_zmod():
    k = make_ring((9,), (((1,),),), (1,), label="T")
    assert k == make_zmod(9)


def test_order_cap_on_ring():
    with pytest.raises(BoundsExceeded):
        make_ring((2,) * 64, [[(0,) * 64] * 64] * 64, (1,) * 64)


def test_ideals_of_z9(z9):
    j = ideal_closure(z9, [3])
    assert j.order == 3
    assert j == ideal_closure(z9, [6])
    assert j.contains(z9.element(6)) and not j.contains(z9.element(1))
    assert ideal_closure(z9, [1]).is_whole()
    assert ideal_product(j, j).is_zero()
    assert ideal_sum(j, zero_ideal(z9)) == j


def test_ideal_closure_is_two_sided(z9z9):
    j = ideal_closure(z9z9, [(3, 3)])
    # closure under multiplication by (1,0) splits the generator
    assert j.contains(z9z9.element((3, 0)))
    assert j.order == 9


def test_annihilators(z9, z9z9):
    j = ideal_closure(z9, [3])
    assert annihilator(j) == j
    assert annihilator(whole_ideal(z9)).is_zero()
    assert annihilator(zero_ideal(z9)).is_whole()
    j2 = ideal_closure(z9z9, [(3, 0)])
    ann = annihilator(j2)
    assert ann.order == 27  # 3Z_9 x Z_9
    assert ann.contains(z9z9.element((3, 1)))
    assert left_annihilator(j2) == ann.basis


def test_coordinates_round_trip(z9z9):
    j = ideal_closure(z9z9, [(3, 0), (0, 3)])
    for x in j.elements():
        assert j.combine(j.coordinates(x)) == x
    with pytest.raises(ValueError):
        j.coordinates(z9z9.element((1, 0)))


def test_two_torsion():
    assert is_two_torsion_free(make_zmod(9))
    check = is_two_torsion_free(make_zmod(4))
    assert not check
    assert check.witness == make_zmod(4).element(2)
    mixed = make_product(make_zmod(9), make_zmod(4))
    witness = is_two_torsion_free(mixed).witness
    assert not witness.is_zero() and (2 * witness).is_zero()


def test_map_from_pairs(z9):
    j, whole = ideal_closure(z9, [3]), whole_ideal(z9)
    f = AdditiveMapKK.from_pairs(j, whole, [(3, 3)], "f")
    assert f(z9.element(6)) == z9.element(6)
    g = AdditiveMapKK.from_pairs(whole, whole, [(1, 2)], "g")
    assert g(z9.element(4)) == z9.element(8)


def test_map_from_pairs_rejects_bad_input(z9):
    j, whole = ideal_closure(z9, [3]), whole_ideal(z9)
    with pytest.raises(ValueError):
        AdditiveMapKK.from_pairs(j, whole, [(3, 3), (6, 0)])
    with pytest.raises(ValueError):
        AdditiveMapKK.from_pairs(whole, whole, [(3, 3)])
    with pytest.raises(ValueError):
        AdditiveMapKK.from_pairs(j, whole, [(1, 0)])
    with pytest.raises(ValueError):
        AdditiveMapKK.from_pairs(j, whole, [(3, 1)])


def test_validate_additive_map(z9):
    j, whole = ideal_closure(z9, [3]), whole_ideal(z9)
    ill_defined = AdditiveMapKK(j, whole, (z9.element(1),))
    assert validate_additive_map(ill_defined).violation == "order"
    outside = AdditiveMapKK(j, zero_ideal(z9), (z9.element(3),))
    assert validate_additive_map(outside).violation == "codomain"
    assert validate_additive_map(outside, check_codomain=False)
    assert validate_additive_map(AdditiveMapKK.zero(j, j))


def test_enumerate_additive_maps(z9):
    j = ideal_closure(z9, [3])
    maps = list(enumerate_additive_maps(j, j))
    assert len(maps) == 3
    assert len(set(maps)) == 3
    assert all(validate_additive_map(f) for f in maps)
    with pytest.raises(BoundsExceeded):
        list(enumerate_additive_maps(whole_ideal(z9), whole_ideal(z9), bound=5))


def test_map_arithmetic(z9):
    j, whole = ideal_closure(z9, [3]), whole_ideal(z9)
    f = AdditiveMapKK.from_pairs(j, whole, [(3, 3)])
    assert (f - f).is_zero()
    assert (f + f)(z9.element(3)) == z9.element(6)
    assert (-f)(z9.element(3)) == z9.element(6)
    assert f.retarget(j).codomain == j
