import itertools

import numpy as np
import pytest

from core.ring_core import AdditiveMapKK, whole_ideal, annihilator, enumerate_additive_maps
from core.matrix_ring import elementary
from core.derivation_table import verify_jordan, verify_derivation
from core import constructions as cons


def j_map(r, image_of_generator, label="f"):
    "Map J -> K multiplying the first basis element of J by an integer."
    j = r.j
    y = j.basis_elements[0]
    return AdditiveMapKK.from_pairs(j, whole_ideal(r.k), [(y, image_of_generator * y)], label)


def zero_j(r):
    return AdditiveMapKK.zero(r.j, whole_ideal(r.k))


def a3_with(r, **nonzero):
    names = ("delta1", "delta2", "delta3", "beta1", "beta2", "beta3", "theta", "gamma")
    return cons.A3Params(**{name: nonzero.get(name, zero_j(r)) for name in names})


def test_z9z9_extremal_example(r4_z9z9):
    k, j = r4_z9z9.k, r4_z9z9.j
    whole = whole_ideal(k)
    alpha = AdditiveMapKK.from_pairs(j, whole, [((3, 0), (3, 0)), ((0, 3), 0)], "alpha")
    beta = AdditiveMapKK.from_pairs(j, whole, [((3, 0), 0), ((0, 3), (0, 3))], "beta")
    gamma = AdditiveMapKK.from_pairs(j, whole, [((3, 0), (3, 0)), ((0, 3), (0, 3))], "gamma")
    params = cons.ExtremalParams(alpha, beta, gamma)
    assert cons.validate_extremal(params)
    d = cons.build_extremal(r4_z9z9, params)
    assert verify_jordan(d)
    assert not verify_derivation(d)


def test_extremal_family_is_proper(r4_z9):
    j = r4_z9.j
    choices = list(enumerate_additive_maps(j, annihilator(j)))
    assert len(choices) == 3
    derivations = 0
    for alpha, beta, gamma in itertools.product(choices, repeat=3):
        params = cons.ExtremalParams(alpha, beta, gamma)
        assert cons.validate_extremal(params)
        d = cons.build_extremal(r4_z9, params)
        assert verify_jordan(d)
        if verify_derivation(d):
            derivations += 1
            assert params.is_zero()
    assert derivations == 1


def test_extremal_rejects_bad_parameters(r4_z9):
    # alpha(3) = 1 is not killed by 3
    alpha = AdditiveMapKK(r4_z9.j, whole_ideal(r4_z9.k), (r4_z9.k.element(1),), "alpha")
    params = cons.ExtremalParams(alpha, zero_j(r4_z9), zero_j(r4_z9))
    check = cons.validate_extremal(params)
    assert not check
    assert check.map_name == "alpha"
    with pytest.raises(cons.InvalidParameters):
        cons.build_extremal(r4_z9, params)


def test_extremal_needs_n4(r3_z9):
    params = cons.ExtremalParams(zero_j(r3_z9), zero_j(r3_z9), zero_j(r3_z9))
    with pytest.raises(ValueError):
        cons.build_extremal(r3_z9, params)


def test_a2(r3_z9):
    params = cons.A2Params(j_map(r3_z9, 1, "alpha1"), zero_j(r3_z9))
    assert cons.validate_a2(params)
    d = cons.build_a2(r3_z9, params)
    assert verify_jordan(d)


def test_a3_first_violations(r3_z9):
    assert cons.validate_a3(a3_with(r3_z9))
    check = cons.validate_a3(a3_with(r3_z9, delta2=j_map(r3_z9, 1)))
    assert not check
    assert check.index == 18
    check = cons.validate_a3(a3_with(r3_z9, beta2=j_map(r3_z9, 1)))
    assert not check
    assert check.index == 12
    assert cons.A3_RELATION_COUNT == 27


def test_a3_build_validates(r3_z9):
    params = a3_with(r3_z9, delta2=j_map(r3_z9, 1))
    with pytest.raises(cons.InvalidParameters) as error:
        cons.build_a3(r3_z9, params)
    assert error.value.check.index == 18
    assert cons.build_a3(r3_z9, a3_with(r3_z9)).is_zero()


def test_a3_build_checks_the_jordan_identity(r3_z9):
    # beta1 + beta3 = delta1 + delta3 fails: 3 + 3 != 0
    params = a3_with(r3_z9, beta1=j_map(r3_z9, 1), beta2=j_map(r3_z9, 2), beta3=j_map(r3_z9, 1))
    assert cons.validate_a3(params)
    with pytest.raises(cons.InvalidParameters) as error:
        cons.build_a3(r3_z9, params)
    check = error.value.check
    assert check.family == "A3"
    assert check.relation == "Jordan identity on the built table"
    assert {name for name, _ in check.witnesses} == {"u", "v", "lhs", "rhs"}
    assert not verify_jordan(cons.build_a3(r3_z9, params, validate=False))


def test_a3_unbalanced_diagonal_breaks_jordan(r3_z9):
    params = a3_with(r3_z9, beta1=j_map(r3_z9, 1), beta2=j_map(r3_z9, 2), beta3=j_map(r3_z9, 1))
    d = cons.build_a3(r3_z9, params, validate=False)
    u = elementary(r3_z9, 3, 1, 3)
    v = elementary(r3_z9, 1, 3, 1)
    assert d(u.jordan(v)) == elementary(r3_z9, 6, 3, 1)
    assert d(u).jordan(v) + u.jordan(d(v)) == r3_z9.zero()


def test_annihilator_derivation(r4_z9):
    k, whole = r4_z9.k, whole_ideal(r4_z9.k)
    sigma_k = AdditiveMapKK.from_pairs(whole, whole, [(1, 3)], "sigma")
    sigma_j = zero_j(r4_z9)
    params = cons.AnnihilatorParams((sigma_k, sigma_k, sigma_k, sigma_j))
    assert cons.validate_annihilator(params)
    d = cons.build_annihilator(r4_z9, params)
    assert verify_derivation(d)
    assert d(elementary(r4_z9, 1, 2, 1)) == elementary(r4_z9, 3, 4, 1)


def test_annihilator_maps_must_vanish_on_j(r4_z9):
    whole = whole_ideal(r4_z9.k)
    # sigma(1) = 3 and sigma(3) = 0, but sigma(x) = x does not vanish on J
    identity = AdditiveMapKK.from_pairs(whole, whole, [(1, 1)], "sigma")
    params = cons.AnnihilatorParams((identity,) * 3 + (zero_j(r4_z9),))
    assert not cons.validate_annihilator(params)


def test_ring_derivations_of_z9(r4_z9):
    whole = whole_ideal(r4_z9.k)
    assert cons.validate_ring(cons.RingDerivParams(AdditiveMapKK.zero(whole, whole)), r4_z9.j)
    identity = AdditiveMapKK.from_pairs(whole, whole, [(1, 1)], "pi")
    check = cons.validate_ring(cons.RingDerivParams(identity), r4_z9.j)
    assert not check
    assert check.map_name == "pi"


def test_diagonal_and_inner(r4_z9):
    d = cons.build_diagonal(r4_z9, [0, 1, 2, 3])
    assert verify_derivation(d)
    assert d(elementary(r4_z9, 1, 2, 1)) == elementary(r4_z9, 1, 2, 1)
    with pytest.raises(ValueError):
        cons.build_diagonal(r4_z9, [0, 1])


def test_almost_annihilator(r4_z9):
    alpha = j_map(r4_z9, 1, "alpha")
    beta = j_map(r4_z9, -1, "beta")
    params = cons.AlmostAnnihilatorParams(alpha, beta, zero_j(r4_z9))
    assert cons.validate_almost(params)
    # alpha = id, beta = -id is the inner derivation of -e_{4,1}
    d = cons.build_almost_annihilator(r4_z9, params)
    assert verify_jordan(d)
    assert verify_derivation(d)


def test_parameter_arithmetic(r4_z9):
    a = cons.ExtremalParams(j_map(r4_z9, 1), zero_j(r4_z9), zero_j(r4_z9))
    assert (a - a).is_zero()
    assert not (a + a).is_zero()
    assert set(a.maps()) == {"alpha", "beta", "gamma"}
    sigma = cons.AnnihilatorParams((zero_j(r4_z9),) * 2)
    assert set(sigma.maps()) == {"sigma1", "sigma2"}


def test_extremal_builder_is_additive(r4_z9):
    p1 = cons.ExtremalParams(j_map(r4_z9, 1), zero_j(r4_z9), zero_j(r4_z9))
    p2 = cons.ExtremalParams(zero_j(r4_z9), j_map(r4_z9, 2), j_map(r4_z9, 1))
    total = cons.build_extremal(r4_z9, p1 + p2)
    assert total == cons.build_extremal(r4_z9, p1) + cons.build_extremal(r4_z9, p2)


def test_diagonal_builder_is_additive(r4_z9):
    d1, d2 = [0, 1, 2, 3], [0, 4, 0, 5]
    total = cons.build_diagonal(r4_z9, [a + b for a, b in zip(d1, d2)])
    assert total == cons.build_diagonal(r4_z9, d1) + cons.build_diagonal(r4_z9, d2)


def test_annihilator_builder_is_additive(r4_z9):
    whole = whole_ideal(r4_z9.k)
    three = AdditiveMapKK.from_pairs(whole, whole, [(1, 3)], "sigma")
    six = AdditiveMapKK.from_pairs(whole, whole, [(1, 6)], "sigma")
    zero_k = AdditiveMapKK.zero(whole, whole)
    p1 = cons.AnnihilatorParams((three, three, three, zero_j(r4_z9)))
    p2 = cons.AnnihilatorParams((six, zero_k, three, zero_j(r4_z9)))
    total = cons.build_annihilator(r4_z9, p1 + p2)
    assert total == cons.build_annihilator(r4_z9, p1) + cons.build_annihilator(r4_z9, p2)


def test_almost_annihilator_builder_is_additive(r4_z9):
    p1 = cons.AlmostAnnihilatorParams(j_map(r4_z9, 1), j_map(r4_z9, -1), zero_j(r4_z9))
    p2 = cons.AlmostAnnihilatorParams(j_map(r4_z9, 2), j_map(r4_z9, -2), j_map(r4_z9, 1))
    total = cons.build_almost_annihilator(r4_z9, p1 + p2)
    assert total == cons.build_almost_annihilator(r4_z9, p1) + cons.build_almost_annihilator(r4_z9, p2)


def test_inner_builder_is_additive(r4_z9):
    rng = np.random.default_rng(3)
    for _ in range(5):
        a, b = r4_z9.random_element(rng), r4_z9.random_element(rng)
        assert cons.build_inner(a + b) == cons.build_inner(a) + cons.build_inner(b)


def test_derivations_from_builders_are_jordan(r4_z9, r3_z9):
    whole = whole_ideal(r4_z9.k)
    three = AdditiveMapKK.from_pairs(whole, whole, [(1, 3)], "sigma")
    rng = np.random.default_rng(4)
    tables = [
        cons.build_inner(r4_z9.random_element(rng)),
        cons.build_diagonal(r4_z9, [0, 1, 2, 3]),
        cons.build_annihilator(r4_z9, cons.AnnihilatorParams((three, three, three, zero_j(r4_z9)))),
        cons.build_ring(r4_z9, cons.RingDerivParams(AdditiveMapKK.zero(whole, whole))),
        cons.build_almost_annihilator(r4_z9, cons.AlmostAnnihilatorParams(j_map(r4_z9, 1), j_map(r4_z9, -1),
                                                                           j_map(r4_z9, 1))),
        cons.build_extremal(r4_z9, cons.ExtremalParams(j_map(r4_z9, 1), j_map(r4_z9, 2), zero_j(r4_z9))),
        cons.build_a2(r3_z9, cons.A2Params(j_map(r3_z9, 1), zero_j(r3_z9))),
        cons.build_inner(r3_z9.random_element(rng)),
    ]
    for d in tables[:5] + tables[7:]:
        assert verify_derivation(d), d.label
    for d in tables:
        assert verify_jordan(d), d.label
