import math

import numpy as np
import pytest
import sympy as smp
from hypothesis import given, settings, strategies as st

from core.exact_linalg import (FiniteAbelianGroup, LinearSystem, BoundsExceeded, AmbientMismatch, span, kernel,
                               contains, subgroup_sum, is_subgroup, graph_value, smith_form, cyclic_decomposition,
                               full_subgroup, trivial_subgroup)

moduli_lists = st.lists(st.integers(1, 12), min_size=1, max_size=3)  # ambient orders at most 12**3


def brute_span(group, elements) -> set:
    found = {group.zero()}
    frontier = [group.zero()]
    while frontier:
        x = frontier.pop()
        for g in elements:
            y = x + g
            if y not in found:
                found.add(y)
                frontier.append(y)
    return found


@st.composite
def group_and_elements(draw, max_elements=3):
    group = FiniteAbelianGroup(tuple(draw(moduli_lists)))
    count = draw(st.integers(0, max_elements))
    elements = [group.element([draw(st.integers(0, m - 1)) for m in group.moduli]) for _ in range(count)]
    return group, elements


@st.composite
def well_defined_system(draw):
    group = FiniteAbelianGroup(tuple(draw(moduli_lists)))
    equations = []
    for _ in range(draw(st.integers(0, 3))):
        q = draw(st.integers(1, 12))
        row = [draw(st.integers(0, 3)) * (q // math.gcd(q, m)) for m in group.moduli]
        equations.append((row, q))
    return group, equations


@settings(max_examples=1000, deadline=None)
@given(group_and_elements())
def test_span_matches_closure(case):
    group, elements = case
    s = span(group, elements)
    expected = brute_span(group, elements)
    assert s.order == len(expected)
    assert set(s.elements()) == expected
    for x in group.elements():
        assert contains(s, x) == (x in expected)


@settings(max_examples=1000, deadline=None)
@given(group_and_elements(), st.randoms(use_true_random=False))
def test_howell_form_is_canonical(case, rnd):
    group, elements = case
    s = span(group, elements)
    shuffled = list(elements)
    rnd.shuffle(shuffled)
    if len(elements) >= 2:
        shuffled.append(elements[0] + 2 * elements[1])
    assert span(group, shuffled) == s
    assert span(group, s.generators()) == s


@settings(max_examples=1000, deadline=None)
@given(well_defined_system())
def test_kernel_is_sound_and_complete(case):
    group, equations = case
    system = LinearSystem.from_equations(group, equations)
    k = kernel(system)
    expected = {x for x in group.elements() if system.holds(x)}
    assert set(k.elements()) == expected
    assert k.order == len(expected)


@settings(max_examples=1000, deadline=None)
@given(group_and_elements(max_elements=4), st.integers(0, 4))
def test_subgroup_sum_and_inclusion(case, cut):
    group, elements = case
    a, b = span(group, elements[:cut]), span(group, elements[cut:])
    total = subgroup_sum(a, b)
    assert total == span(group, elements)
    assert is_subgroup(a, total) and is_subgroup(b, total)
    assert is_subgroup(trivial_subgroup(group), a)
    assert is_subgroup(a, full_subgroup(group))


def test_kernel_of_single_equation():
    group = FiniteAbelianGroup((9,))
    k = kernel(LinearSystem.from_equations(group, [([3], 9)]))
    assert sorted(x.coords[0] for x in k.elements()) == [0, 3, 6]


def test_ill_defined_equation_is_rejected():
    with pytest.raises(ValueError):
        LinearSystem.from_equations(FiniteAbelianGroup((3,)), [([1], 9)])


def test_homomorphism_kernel():
    group = FiniteAbelianGroup((9, 3))
    target = FiniteAbelianGroup((3,))
    system = LinearSystem.from_homomorphism(group, target, lambda x: [x.coords[0] + x.coords[1]])
    expected = {x for x in group.elements() if (x.coords[0] + x.coords[1]) % 3 == 0}
    assert set(kernel(system).elements()) == expected


def test_order_cap():
    with pytest.raises(BoundsExceeded):
        FiniteAbelianGroup((2,) * 64).check_order()
    FiniteAbelianGroup((2,) * 10).check_order()


def test_ambient_mismatch():
    a, b = FiniteAbelianGroup((9,)), FiniteAbelianGroup((3,))
    with pytest.raises(AmbientMismatch):
        span(a, [b.element([1])])
    with pytest.raises(AmbientMismatch):
        subgroup_sum(span(a, []), span(b, []))


def test_graph_value():
    group = FiniteAbelianGroup((9, 3))
    reduction = span(group, [group.element([1, 1])])  # x -> x mod 3
    assert graph_value(reduction, (4,)) == (1,)
    partial = span(group, [group.element([3, 1])])
    assert graph_value(partial, (6,)) == (2,)
    assert graph_value(partial, (1,)) is None


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_form(matrix):
    d, u, v = smith_form(matrix)
    a = np.array(matrix, dtype=object)
    assert (u.dot(a).dot(v) == d).all()
    assert abs(smp.Matrix(u.tolist()).det()) == 1
    assert abs(smp.Matrix(v.tolist()).det()) == 1
    diagonal = [d[i, i] for i in range(min(d.shape))]
    assert all(x >= 0 for x in diagonal)
    for i in range(d.shape[0]):
        for j in range(d.shape[1]):
            if i != j:
                assert d[i, j] == 0
    for x, y in zip(diagonal, diagonal[1:]):
        assert (y == 0) if x == 0 else (y % x == 0)


@settings(max_examples=200, deadline=None)
@given(group_and_elements())
def test_cyclic_decomposition(case):
    group, elements = case
    s = span(group, elements)
    basis = cyclic_decomposition(s)
    assert math.prod(basis.orders) == s.order
    assert all(d > 1 for d in basis.orders)
    for x in s.elements():
        coords = basis.coordinates(x)
        assert coords is not None
        assert basis.combine(coords) == x
    for x in group.elements():
        if not contains(s, x):
            assert basis.coordinates(x) is None
