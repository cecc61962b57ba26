# This file is part of Carpet JDer - Jordan derivations of structural matrix rings
# Copyright (C) 2026 - Kerem Basaran
# https://github.com/kbasaran
__email__ = "kbasaran@gmail.com"

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""Exact linear algebra over finite abelian groups Z_m1 + ... + Z_mk.

Subgroups are stored as Howell normal forms over Z_N where N is the lcm of
the ambient moduli. A coordinate over Z_m is embedded into Z_N as
x -> (N/m)*x, so one reduction routine serves every mixed-moduli group.
"""

import dataclasses as dtc
import functools
import itertools
import logging
import math
from typing import Callable, Iterable, Sequence

import numpy as np
import sympy as smp
from sympy.core.intfunc import igcdex

from config.app_config import DEFAULTS

logger = logging.getLogger(__name__)


class BoundsExceeded(RuntimeError):
    """A computation would go beyond one of the configured size bounds."""


class AmbientMismatch(ValueError):
    """Two objects that must share an ambient group do not."""


def _work_dtype(modulus: int):
    # products of two reduced entries must fit in int64
    return np.int64 if modulus < 2**31 else object


def _as_matrix(rows, n_cols: int, modulus: int) -> np.ndarray:
    dtype = _work_dtype(modulus)
    if len(rows) == 0:
        return np.zeros((0, n_cols), dtype=dtype)
    mat = np.array([[int(v) % modulus for v in row] for row in rows], dtype=dtype)
    if mat.ndim != 2 or mat.shape[1] != n_cols:
        raise ValueError(f"Expected rows of length {n_cols}, got shape {mat.shape}.")
    return mat


# ---- Groups and elements ----

@dtc.dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z_{m_1} + ... + Z_{m_k}. A modulus of 1 is a trivial factor."""
    moduli: tuple

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        if any(m < 1 for m in moduli):
            raise ValueError(f"Cyclic factor orders must be positive integers: {moduli}")
        object.__setattr__(self, "moduli", moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @functools.cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @functools.cached_property
    def modulus(self) -> int:
        "Exponent of the group, the common modulus N of the embedding."
        return math.lcm(*self.moduli)

    @functools.cached_property
    def scales(self) -> tuple:
        return tuple(self.modulus // m for m in self.moduli)

    def check_order(self, limit: int = None) -> None:
        limit = DEFAULTS["max_group_order"] if limit is None else limit
        if self.order >= limit:
            raise BoundsExceeded(f"Group of order {self.order} exceeds the order cap {limit}.")

    def element(self, coords) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def basis_element(self, i: int) -> "GroupElement":
        coords = [0] * self.rank
        coords[i] = 1
        return GroupElement(self, tuple(coords))

    def elements(self):
        for coords in itertools.product(*(range(m) for m in self.moduli)):
            yield GroupElement(self, coords)

    def direct_sum(self, other: "FiniteAbelianGroup") -> "FiniteAbelianGroup":
        return FiniteAbelianGroup(self.moduli + other.moduli)

    def power(self, count: int) -> "FiniteAbelianGroup":
        return FiniteAbelianGroup(self.moduli * count)

    def embed(self, coords) -> list:
        return [int(c) * s % self.modulus for c, s in zip(coords, self.scales)]

    def unembed(self, row) -> "GroupElement":
        return GroupElement(self, tuple(int(v) // s for v, s in zip(row, self.scales)))


@dtc.dataclass(frozen=True, eq=False)
class GroupElement:
    parent: FiniteAbelianGroup
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.parent.rank:
            raise ValueError(f"Element {self.coords} does not have rank {self.parent.rank}.")
        reduced = tuple(int(c) % m for c, m in zip(self.coords, self.parent.moduli))
        object.__setattr__(self, "coords", reduced)

    def _check(self, other: "GroupElement") -> None:
        if self.parent.moduli != other.parent.moduli:
            raise AmbientMismatch(f"Elements of {self.parent.moduli} and {other.parent.moduli} cannot be combined.")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.parent.moduli == other.parent.moduli and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.parent.moduli, self.coords))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.parent, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, scalar: int) -> "GroupElement":
        if not isinstance(scalar, (int, np.integer)):
            return NotImplemented
        return GroupElement(self.parent, tuple(int(scalar) * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def order(self) -> int:
        return math.lcm(*(m // math.gcd(c, m) for c, m in zip(self.coords, self.parent.moduli)))

    def __repr__(self) -> str:
        return f"GroupElement({self.coords} in {self.parent.moduli})"


# ---- Howell normal form ----

def _unit_normalizer(a: int, n: int) -> int:
    "A unit u of Z_n with u*a = gcd(a, n) mod n."
    g = math.gcd(a, n)
    m = n // g
    if m == 1:
        return 1
    u0 = int(smp.mod_inverse(a // g, m))
    for k in range(g):
        u = u0 + k * m
        if math.gcd(u, n) == 1:
            return u % n
    raise ArithmeticError(f"No unit normalizes {a} modulo {n}.")


def _gcd_ext(a: int, b: int, n: int) -> tuple:
    """
    Unimodular 2x2 step [[s, t], [u, v]] with s*a + t*b = gcd(a, b) and u*a + v*b = 0.

    All four entries are returned reduced modulo n.
    """
    s, t, g = igcdex(a, b)
    return int(s) % n, int(t) % n, (-b // g) % n, (a // g) % n


def _howell_reduce(mat: np.ndarray, n: int) -> np.ndarray:
    """
    Reduce a matrix with entries in [0, n) to Howell normal form over Z_n.

    :param mat: Working matrix. It is modified and may be reallocated.
    :param n: Modulus.
    :return: The canonical matrix, zero rows removed.
    """
    if n == 1:
        return np.zeros((0, mat.shape[1]), dtype=mat.dtype)
    r = 0
    for c in range(mat.shape[1]):
        while True:
            nz = np.flatnonzero(mat[r:, c]) + r
            if nz.size == 0:
                break
            gcds = [math.gcd(int(mat[i, c]), n) for i in nz]
            j = int(nz[int(np.argmin(gcds))])
            if j != r:
                mat[[r, j]] = mat[[j, r]]
            u = _unit_normalizer(int(mat[r, c]), n)
            if u != 1:
                mat[r] = (u * mat[r]) % n
            b = int(mat[r, c])

            below = np.flatnonzero(mat[r + 1:, c]) + r + 1
            if below.size == 0:
                break
            divisible = (mat[below, c] % b) == 0
            rest = below[~divisible]
            if divisible.any():
                rows = below[divisible]
                q = mat[rows, c] // b
                mat[rows] = (mat[rows] - q[:, None] * mat[r]) % n
            if rest.size == 0:
                break
            i = int(rest[0])
            s, t, u, v = _gcd_ext(b, int(mat[i, c]), n)
            row_r, row_i = mat[r].copy(), mat[i].copy()
            mat[r] = (s * row_r + t * row_i) % n
            mat[i] = (u * row_r + v * row_i) % n

        if r >= mat.shape[0] or mat[r, c] == 0:
            continue

        b = int(mat[r, c])
        above = np.flatnonzero(mat[:r, c] >= b)
        if above.size:
            q = mat[above, c] // b
            mat[above] = (mat[above] - q[:, None] * mat[r]) % n
        if b > 1:
            # the annihilator multiple of the pivot row has to stay in the span of the rows below
            extra = ((n // b) * mat[r]) % n
            if extra.any():
                mat = np.vstack([mat, extra[None, :]])
        r += 1

    return mat[:r].copy()


def howell_form(rows, modulus: int, n_cols: int = None) -> np.ndarray:
    """
    Canonical Howell normal form of the row span of ``rows`` over Z_modulus.

    :param rows: Integer matrix, any representatives.
    :param modulus: N >= 1.
    :param n_cols: Column count, only needed when ``rows`` is empty.
    :return: Canonical matrix with entries in [0, N). Empty when the span is trivial.
    """
    if modulus < 1:
        raise ValueError(f"Modulus must be at least 1, got {modulus}.")
    if n_cols is None:
        n_cols = len(rows[0]) if len(rows) else 0
    mat = _as_matrix(rows, n_cols, modulus)
    return _howell_reduce(mat, modulus)


def _pivots(rows: np.ndarray) -> list:
    out = []
    for row in rows:
        c = int(np.flatnonzero(row)[0])
        out.append((c, int(row[c])))
    return out


# ---- Subgroups ----

@dtc.dataclass(frozen=True, eq=False)
class SubgroupBasis:
    """A subgroup given by its Howell form in embedded coordinates.

    Build instances through ``span`` so that ``rows`` is canonical.
    """
    ambient: FiniteAbelianGroup
    rows: np.ndarray

    def __post_init__(self):
        if self.rows.ndim != 2 or self.rows.shape[1] != self.ambient.rank:
            raise ValueError(f"Basis rows of shape {self.rows.shape} do not fit rank {self.ambient.rank}.")
        self.rows.setflags(write=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubgroupBasis):
            return NotImplemented
        return (self.ambient.moduli == other.ambient.moduli
                and self.rows.shape == other.rows.shape
                and bool(np.array_equal(self.rows, other.rows)))

    def __hash__(self) -> int:
        return hash((self.ambient.moduli, tuple(map(tuple, self.rows.tolist()))))

    @functools.cached_property
    def order(self) -> int:
        n = self.ambient.modulus
        return math.prod(n // b for _, b in _pivots(self.rows))

    def generators(self) -> list:
        return [self.ambient.unembed(row) for row in self.rows]

    def is_trivial(self) -> bool:
        return self.rows.shape[0] == 0

    def contains(self, x: GroupElement) -> bool:
        return contains(self, x)

    def elements(self):
        "Every element once. Only sensible for small subgroups."
        n = self.ambient.modulus
        pivots = _pivots(self.rows)
        gens = self.generators()
        for coeffs in itertools.product(*(range(n // b) for _, b in pivots)):
            x = self.ambient.zero()
            for c, g in zip(coeffs, gens):
                x = x + c * g
            yield x

    def __repr__(self) -> str:
        return f"SubgroupBasis(order={self.order} in {self.ambient.moduli})"


def span(ambient: FiniteAbelianGroup, elements: Iterable) -> SubgroupBasis:
    """
    Subgroup generated by ``elements``.

    :param ambient: The ambient group.
    :param elements: GroupElements of ambient, or raw coordinate sequences.
    :return: Canonical basis.
    """
    rows = []
    for x in elements:
        coords = x.coords if isinstance(x, GroupElement) else tuple(x)
        if isinstance(x, GroupElement) and x.parent.moduli != ambient.moduli:
            raise AmbientMismatch(f"Element of {x.parent.moduli} is not in {ambient.moduli}.")
        rows.append(ambient.embed(coords))
    return SubgroupBasis(ambient, howell_form(rows, ambient.modulus, n_cols=ambient.rank))


def trivial_subgroup(ambient: FiniteAbelianGroup) -> SubgroupBasis:
    return span(ambient, [])


def full_subgroup(ambient: FiniteAbelianGroup) -> SubgroupBasis:
    return span(ambient, [ambient.basis_element(i) for i in range(ambient.rank)])


def subgroup_sum(a: SubgroupBasis, b: SubgroupBasis) -> SubgroupBasis:
    if a.ambient.moduli != b.ambient.moduli:
        raise AmbientMismatch(f"Cannot add subgroups of {a.ambient.moduli} and {b.ambient.moduli}.")
    n = a.ambient.modulus
    stacked = np.vstack([a.rows, b.rows]).astype(_work_dtype(n))
    return SubgroupBasis(a.ambient, _howell_reduce(stacked, n))


def subgroup_order(s: SubgroupBasis) -> int:
    return s.order


def contains(s: SubgroupBasis, x: GroupElement) -> bool:
    """Membership by reduction against the Howell rows."""
    if x.parent.moduli != s.ambient.moduli:
        raise AmbientMismatch(f"Element of {x.parent.moduli} tested against a subgroup of {s.ambient.moduli}.")
    n = s.ambient.modulus
    v = np.array(s.ambient.embed(x.coords), dtype=object)
    for row, (c, b) in zip(s.rows, _pivots(s.rows)):
        if v[c] % b:
            return False
        q = v[c] // b
        if q:
            v = (v - q * row.astype(object)) % n
    return not v.any()


def is_subgroup(a: SubgroupBasis, b: SubgroupBasis) -> bool:
    "True when a is contained in b."
    return all(contains(b, g) for g in a.generators())


def graph_value(graph: SubgroupBasis, head) -> tuple:
    """
    For a subgroup of A + B and coordinates a of A, some b with (a, b) in the subgroup.

    When the subgroup is the graph of a homomorphism A -> B, b is its value at a.

    :return: Coordinates of b, or None when no element of the subgroup starts with a.
    """
    ambient = graph.ambient
    n = ambient.modulus
    k = len(head)
    if k > ambient.rank:
        raise ValueError(f"Head of length {k} does not fit rank {ambient.rank}.")
    v = np.array(ambient.embed(tuple(head) + (0,) * (ambient.rank - k)), dtype=object)
    for row, (c, b) in zip(graph.rows, _pivots(graph.rows)):
        if c >= k:
            break
        if v[c] % b:
            return None
        q = v[c] // b
        if q:
            v = (v - q * row.astype(object)) % n
    if v[:k].any():
        return None
    return (-ambient.unembed(list(v))).coords[k:]


# ---- Linear systems ----

@dtc.dataclass(frozen=True, eq=False)
class LinearSystem:
    """Homogeneous equations sum_j a_j x_j = 0 (mod q), one modulus per equation.

    Equations are kept in blocks of (rows over Z, moduli). Each equation must be
    well defined on the domain: q divides a_j * m_j for every unknown j.
    """
    domain: FiniteAbelianGroup
    blocks: tuple = ()

    def __post_init__(self):
        blocks = []
        d = np.array(self.domain.moduli, dtype=object)
        for rows, moduli in self.blocks:
            moduli = np.asarray(moduli, dtype=object).reshape(-1)
            rows = np.asarray(rows, dtype=object).reshape(len(moduli), self.domain.rank)
            if (moduli < 1).any():
                raise ValueError("Equation moduli must be positive.")
            reduced = rows % moduli[:, None]
            bad = np.argwhere((reduced * d[None, :]) % moduli[:, None] != 0)
            if bad.size:
                e, j = (int(v) for v in bad[0])
                raise ValueError(f"Equation {list(rows[e])} mod {moduli[e]} is not well defined "
                                 f"on the factor Z_{self.domain.moduli[j]}.")
            blocks.append((reduced, moduli))
        object.__setattr__(self, "blocks", tuple(blocks))

    @classmethod
    def from_equations(cls, domain: FiniteAbelianGroup, equations: Iterable) -> "LinearSystem":
        "Build from (row, modulus) pairs."
        equations = list(equations)
        if not equations:
            return cls(domain)
        rows = [list(row) for row, _ in equations]
        moduli = [q for _, q in equations]
        return cls(domain, ((rows, moduli),))

    @classmethod
    def from_homomorphism(cls,
                          domain: FiniteAbelianGroup,
                          codomain: FiniteAbelianGroup,
                          fn: Callable[[GroupElement], Sequence[int]],
                          ) -> "LinearSystem":
        """
        Equations whose solution set is the kernel of an additive map.

        :param fn: Additive map. Returns coordinates in ``codomain``.
        """
        columns = []
        for i in range(domain.rank):
            image = list(fn(domain.basis_element(i)))
            if len(image) != codomain.rank:
                raise ValueError(f"Image of rank {len(image)} does not fit codomain rank {codomain.rank}.")
            columns.append(image)
        if not columns or codomain.rank == 0:
            return cls(domain)
        rows = np.array(columns, dtype=object).T
        return cls(domain, ((rows, list(codomain.moduli)),))

    @property
    def n_equations(self) -> int:
        return sum(len(moduli) for _, moduli in self.blocks)

    def holds(self, x: GroupElement) -> bool:
        v = np.array(x.coords, dtype=object)
        return all(not ((rows.dot(v)) % moduli).any() for rows, moduli in self.blocks)


def kernel(system: LinearSystem, chunk_rows: int = None) -> SubgroupBasis:
    """
    Solution subgroup {x : every equation holds}.

    Unknowns are lifted to Z_N with N the lcm of all moduli involved. The row
    space of the equations is accumulated block by block into a Howell form H,
    and the lifted solutions are read off the Howell form of [H^T | I].

    :param system: The equations.
    :param chunk_rows: Rows merged into the running Howell form at a time.
    :return: Canonical basis of the kernel.
    """
    domain = system.domain
    k = domain.rank
    chunk_rows = chunk_rows or DEFAULTS["howell_chunk_rows"]
    n = math.lcm(domain.modulus, *(int(q) for _, moduli in system.blocks for q in set(moduli)))
    dtype = _work_dtype(n)
    logger.debug(f"Kernel of {system.n_equations} equations in {k} unknowns over Z_{n}.")

    h = np.zeros((0, k), dtype=dtype)
    for rows, moduli in system.blocks:
        lifted = ((n // moduli)[:, None] * rows) % n
        lifted = lifted[np.any(lifted != 0, axis=1)]
        for start in range(0, lifted.shape[0], chunk_rows):
            part = lifted[start:start + chunk_rows].astype(dtype)
            h = _howell_reduce(np.vstack([h, part]), n)
    logger.debug(f"Equation span has {h.shape[0]} Howell rows.")

    hr = h.shape[0]
    graph = np.hstack([h.T, np.eye(k, dtype=dtype)]).astype(dtype) % n
    g = _howell_reduce(graph, n)
    lifted_solutions = g[np.all(g[:, :hr] == 0, axis=1)][:, hr:]
    return span(domain, [[int(c) for c in row] for row in lifted_solutions])


# ---- Smith form and cyclic decompositions ----

def smith_form(matrix) -> tuple:
    """
    Smith normal form over Z with transforms.

    :param matrix: Integer matrix of shape (m, k).
    :return: (D, U, V) as object arrays with U @ A @ V = D, D diagonal,
        each diagonal entry dividing the next and all entries non-negative.
    """
    a = np.array([[int(v) for v in row] for row in matrix], dtype=object).reshape(len(matrix), -1)
    m, k = a.shape
    u = np.array([[int(i == j) for j in range(m)] for i in range(m)], dtype=object).reshape(m, m)
    v = np.array([[int(i == j) for j in range(k)] for i in range(k)], dtype=object).reshape(k, k)

    for t in range(min(m, k)):
        while True:
            nz = [(abs(a[i, j]), i, j) for i in range(t, m) for j in range(t, k) if a[i, j] != 0]
            if not nz:
                return a, u, v
            _, i, j = min(nz)
            if i != t:
                a[[t, i]] = a[[i, t]]
                u[[t, i]] = u[[i, t]]
            if j != t:
                a[:, [t, j]] = a[:, [j, t]]
                v[:, [t, j]] = v[:, [j, t]]
            p = a[t, t]

            clean = True
            for i in range(t + 1, m):
                q = a[i, t] // p
                if q:
                    a[i] = a[i] - q * a[t]
                    u[i] = u[i] - q * u[t]
                if a[i, t]:
                    clean = False
            for j in range(t + 1, k):
                q = a[t, j] // p
                if q:
                    a[:, j] = a[:, j] - q * a[:, t]
                    v[:, j] = v[:, j] - q * v[:, t]
                if a[t, j]:
                    clean = False
            if not clean:
                continue

            offender = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, k)
                             if a[i, j] % p), None)
            if offender is not None:
                a[t] = a[t] + a[offender[0]]
                u[t] = u[t] + u[offender[0]]
                continue
            break

        if a[t, t] < 0:
            a[t] = -a[t]
            u[t] = -u[t]
    return a, u, v


@dtc.dataclass(frozen=True, eq=False)
class CyclicBasis:
    """Independent generators g_1..g_r of orders d_1..d_r.

    Every element of their span has unique coordinates c_i in Z_{d_i}.
    """
    ambient: FiniteAbelianGroup
    generators: tuple
    orders: tuple

    @functools.cached_property
    def _graph(self) -> tuple:
        n = self.ambient.modulus
        k, r = self.ambient.rank, len(self.generators)
        rows = []
        for i, (g, d) in enumerate(zip(self.generators, self.orders)):
            tail = [0] * r
            tail[i] = n // d
            rows.append(self.ambient.embed(g.coords) + tail)
        mat = howell_form(rows, n, n_cols=k + r)
        return mat, _pivots(mat)

    def coordinates(self, x: GroupElement):
        """
        Coordinates of x in this basis.

        :return: Tuple of c_i in [0, d_i), or None when x is not in the span.
        """
        n = self.ambient.modulus
        k = self.ambient.rank
        mat, pivots = self._graph
        v = np.array(self.ambient.embed(x.coords) + [0] * len(self.generators), dtype=object)
        for row, (c, b) in zip(mat, pivots):
            if c >= k:
                break
            if v[c] % b:
                return None
            q = v[c] // b
            if q:
                v = (v - q * row.astype(object)) % n
        if v[:k].any():
            return None
        return tuple(int((-w) % n) // (n // d) % d for w, d in zip(v[k:], self.orders))

    def combine(self, coeffs) -> GroupElement:
        x = self.ambient.zero()
        for c, g in zip(coeffs, self.generators):
            x = x + int(c) * g
        return x


def cyclic_decomposition(s: SubgroupBasis) -> CyclicBasis:
    """
    Direct-sum decomposition of a subgroup into cyclic factors.

    Relations among the Howell rows are collected, stacked with N*I and brought
    to Smith form; the column transform V gives new generators V^-1 h.
    """
    ambient = s.ambient
    n = ambient.modulus
    h = s.rows
    r = h.shape[0]
    if r == 0:
        return CyclicBasis(ambient, (), ())

    k = ambient.rank
    graph = howell_form(np.hstack([h, np.eye(r, dtype=h.dtype)]).tolist(), n, n_cols=k + r)
    relations = [list(row[k:]) for row in graph if not row[:k].any()]
    relations += [[n * int(i == j) for j in range(r)] for i in range(r)]
    d, _, v = smith_form(relations)
    v_inv = np.array(smp.Matrix(v.tolist()).inv().tolist(), dtype=object)

    generators, orders = [], []
    for j in range(r):
        order = int(d[j, j])
        if order == 1:
            continue
        row = [int(sum(v_inv[j, i] * int(h[i, c]) for i in range(r))) % n for c in range(k)]
        generators.append(ambient.unembed(row))
        orders.append(order)
    logger.debug(f"Cyclic decomposition of {s} has orders {orders}.")
    return CyclicBasis(ambient, tuple(generators), tuple(orders))
