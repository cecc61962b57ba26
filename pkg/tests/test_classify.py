import numpy as np
import pytest

from core.exact_linalg import BoundsExceeded
from core.ring_core import make_zmod, zero_ideal
from core.matrix_ring import StructuralMatrixRing, elementary
from core.derivation_table import DerivationTable, component, verify_jordan, verify_derivation
from core import classify, constructions as cons

from test_derivation_table import not_jordan_table, alpha_only
from test_constructions import j_map, zero_j


def test_m2_jordan_equals_derivations(m2_z3):
    jder = classify.solve_jordan_group(m2_z3)
    der = classify.solve_derivation_group(m2_z3)
    assert jder.order == der.order == 27
    assert jder.basis == der.basis


def test_generators_satisfy_identities(r4_z9):
    jder = classify.solve_jordan_group(r4_z9)
    der = classify.solve_derivation_group(r4_z9)
    assert all(verify_jordan(d) for d in jder.generators())
    assert all(verify_derivation(d) for d in der.generators())
    assert jder.order > der.order


def test_solver_bounds(r4_z9):
    with pytest.raises(BoundsExceeded):
        classify.solve_jordan_group(r4_z9, max_unknowns=10)


def test_extremal_parameter_group(r4_z9):
    assert classify.extremal_parameter_group(r4_z9).order == 27
    extremal = classify.extremal_subgroup(r4_z9)
    assert extremal.contains(alpha_only(r4_z9))


def test_theorem_check_z9(r4_z9):
    verdict = classify.theorem_check(r4_z9)
    assert verdict
    assert verdict.index == "1"
    orders = verdict.orders
    assert orders["jder"] == orders["der_plus_extremal"]
    assert orders["jder"] == orders["der"] * 27


def test_zero_ideal_has_no_extremal_part(nt4_z9):
    assert classify.extremal_parameter_group(nt4_z9).order == 1
    verdict = classify.theorem_check(nt4_z9)
    assert verdict
    assert verdict.orders["jder"] == verdict.orders["der"]


def test_decompose_extremal(r4_z9):
    d = alpha_only(r4_z9)
    report = classify.decompose(d)
    assert report.reconstruction_ok
    assert report.total() == d
    assert not report.extremal_residual.table.is_zero()


def test_decompose_random_jordan(r4_z9):
    rng = np.random.default_rng(11)
    jder = classify.solve_jordan_group(r4_z9)
    for _ in range(3):
        d = jder.random_element(rng)
        report = classify.decompose_any(d)
        assert report.reconstruction_ok
        assert all(s.ok for s in report.stage_checks)


def test_decompose_n3(r3_z9):
    for d in classify.solve_jordan_group(r3_z9).generators():
        report = classify.decompose_n3(d)
        assert report.reconstruction_ok
        assert report.discrepancies == []
        assert cons.validate_a2(report.a2.params)
        assert cons.validate_a3(report.a3.params)
        assert report.total() == d


def test_decompose_n3_recovers_a2(r3_z9):
    d = cons.build_a2(r3_z9, cons.A2Params(j_map(r3_z9, 1, "alpha1"), zero_j(r3_z9)))
    report = classify.decompose_n3(d)
    assert report.reconstruction_ok
    y = r3_z9.j.basis_elements[0]
    assert report.a2.params.alpha1(y) == y
    assert report.a2.params.alpha2(y).is_zero()


def test_decompose_wrong_size(r3_z9, r4_z9):
    with pytest.raises(ValueError):
        classify.decompose(DerivationTable.zero(r3_z9))
    with pytest.raises(ValueError):
        classify.decompose_n3(DerivationTable.zero(r4_z9))


def test_torsion(r4_z4):
    with pytest.raises(classify.TorsionError) as error:
        classify.decompose(DerivationTable.zero(r4_z4))
    assert error.value.witness == r4_z4.k.element(2)
    with pytest.raises(classify.TorsionError):
        classify.theorem_check(r4_z4)


def test_not_jordan(r4_z9):
    with pytest.raises(classify.NotJordanError) as error:
        classify.decompose(not_jordan_table(r4_z9))
    assert not error.value.check


def test_solver_on_smallest_ring():
    k = make_zmod(3)
    r = StructuralMatrixRing(2, k, zero_ideal(k))
    tables = [DerivationTable.from_flat(r, flat) for flat in r.table_space.elements()]
    assert all(verify_jordan(d) for d in tables)
    assert classify.solve_jordan_group(r).order == len(tables) == 3


@pytest.mark.slow
def test_solver_against_enumeration():
    "Every table of NT_3(Z_3), checked one by one."
    k = make_zmod(3)
    r = StructuralMatrixRing(3, k, zero_ideal(k))
    tables = [DerivationTable.from_flat(r, flat) for flat in r.table_space.elements()]
    jordan = [d for d in tables if verify_jordan(d)]
    leibniz = [d for d in tables if verify_derivation(d)]
    jder, der = classify.solve_jordan_group(r), classify.solve_derivation_group(r)
    assert len(jordan) == jder.order and all(jder.contains(d) for d in jordan)
    assert len(leibniz) == der.order and all(der.contains(d) for d in leibniz)


@pytest.mark.slow
def test_theorem_check_product_ring(r4_z9z9):
    verdict = classify.theorem_check(r4_z9z9)
    assert verdict
    assert verdict.index == "1"


def test_jordan_group_is_closed(r4_z9):
    jder = classify.solve_jordan_group(r4_z9)
    gens = jder.generators()
    for a, b in zip(gens, gens[1:] + gens[:1]):
        assert jder.contains(a + b) and verify_jordan(a + b)
        assert jder.contains(-a) and verify_jordan(-a)


def test_components_land_in_the_entry_ideal(r4_z9):
    tables = classify.solve_jordan_group(r4_z9).generators()[:4] + [alpha_only(r4_z9)]
    positions = r4_z9.positions()
    for d in tables:
        for src in positions:
            for dst in positions:
                f = component(d, src, dst)
                target = r4_z9.entry_ideal(*dst)
                assert all(target.contains(f(x)) for x in r4_z9.entry_ideal(*src).basis_elements)


def test_decompose_inner_plus_extremal(r4_z9):
    inner = cons.build_inner(elementary(r4_z9, 1, 3, 2))
    d = inner + alpha_only(r4_z9)
    report = classify.decompose(d)
    assert report.reconstruction_ok
    assert report.total() == d
    assert report.extremal_residual.table == alpha_only(r4_z9)
    rest = DerivationTable.zero(r4_z9)
    for c in report.components():
        if c.name != "extremal_residual":
            rest = rest + c.table
    assert rest == inner
    y = r4_z9.j.basis_elements[0]
    params = report.residual_params
    assert params.alpha(y) == y
    assert params.beta.is_zero() and params.gamma.is_zero()


def test_decompose_of_its_own_sum(r4_z9):
    rng = np.random.default_rng(12)
    jder = classify.solve_jordan_group(r4_z9)
    for _ in range(2):
        first = classify.decompose(jder.random_element(rng))
        again = classify.decompose(first.total())
        assert again.reconstruction_ok
        assert (again.residual_params - first.residual_params).is_zero()
        residual = first.extremal_residual.table
        alone = classify.decompose(residual)
        assert alone.extremal_residual.table == residual
        assert all(c.table.is_zero() for c in alone.components() if c.name != "extremal_residual")


def test_residual_ignores_added_derivations(r4_z9):
    rng = np.random.default_rng(13)
    d = classify.solve_jordan_group(r4_z9).random_element(rng)
    der = classify.solve_derivation_group(r4_z9)
    extremal = classify.extremal_subgroup(r4_z9)
    base = classify.decompose(d).extremal_residual.table
    for t in der.generators()[:4] + [der.random_element(rng)]:
        shifted = classify.decompose(d + t).extremal_residual.table
        diff = shifted - base
        assert extremal.contains(diff) and der.contains(diff)
        assert diff.is_zero()
