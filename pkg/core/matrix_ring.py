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

"""The structural matrix ring R_n(K, J) = NT_n(K) + M_n(J).

Entry (i, j) of an element lies in I_{i,j}: K strictly below the diagonal and
J on and above it. Positions are 1-based throughout, as (row, column).
"""

import dataclasses as dtc
import functools
import itertools
import logging

import numpy as np

from core.exact_linalg import FiniteAbelianGroup, GroupElement, SubgroupBasis, LinearSystem, span, kernel
from core.ring_core import FiniteRing, RingElement, Ideal, whole_ideal, annihilator

logger = logging.getLogger(__name__)


class PatternViolation(ValueError):
    """A matrix entry outside its carpet ideal."""

    def __init__(self, message: str, position: tuple = None):
        super().__init__(message)
        self.position = position


@dtc.dataclass(frozen=True)
class Generator:
    "Canonical additive generator x*e_{i,j} of R."
    index: int
    position: tuple
    slot: int  # index of x within the basis of I_{i,j}
    element: RingElement
    order: int

    def __str__(self) -> str:
        i, j = self.position
        return f"{self.element}e_{i},{j}"


@dtc.dataclass(frozen=True, eq=False)
class StructuralMatrixRing:
    n: int
    k: FiniteRing
    j: Ideal

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"Matrix size n must be at least 2, got {self.n}.")
        if self.j.ambient != self.k:
            raise ValueError(f"Ideal {self.j.label} is not an ideal of {self.k.label}.")
        check = carpet_check(self)
        if not check:
            raise PatternViolation(f"Carpet law fails at {check.triple}.", check.triple)
        logger.debug(f"Constructed {self.label} with {len(self.generators)} generators.")

    @functools.cached_property
    def whole(self) -> Ideal:
        return whole_ideal(self.k)

    @property
    def label(self) -> str:
        return f"R_{self.n}({self.k.label}, {self.j.label})"

    def entry_ideal(self, i: int, j: int) -> Ideal:
        self.check_position(i, j)
        return self.whole if i > j else self.j

    def check_position(self, i: int, j: int) -> None:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"Position ({i},{j}) is outside a {self.n}x{self.n} matrix.")

    def positions(self) -> list:
        return [(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1)]

    @functools.cached_property
    def generators(self) -> tuple:
        "Row-major by position, then by basis index within the entry."
        gens = []
        for i, j in self.positions():
            ideal = self.entry_ideal(i, j)
            for slot, (x, order) in enumerate(zip(ideal.basis_elements, ideal.basis_orders)):
                gens.append(Generator(len(gens), (i, j), slot, x, order))
        return tuple(gens)

    @functools.cached_property
    def generators_at(self) -> dict:
        out = {p: [] for p in self.positions()}
        for g in self.generators:
            out[g.position].append(g)
        return out

    @functools.cached_property
    def additive_group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(tuple(g.order for g in self.generators))

    @functools.cached_property
    def table_space(self) -> FiniteAbelianGroup:
        "One copy of the additive group per generator: the flattened generator images."
        return self.additive_group.power(len(self.generators))

    # ---- elements ----

    def zero(self) -> "MatrixElement":
        z = self.k.zero
        return MatrixElement(self, tuple(tuple(z for _ in range(self.n)) for _ in range(self.n)))

    def element(self, entries) -> "MatrixElement":
        "Element from an n x n grid of ring elements, coordinate tuples or integers."
        if len(entries) != self.n or any(len(row) != self.n for row in entries):
            raise ValueError(f"Expected a {self.n}x{self.n} grid.")
        grid = tuple(tuple(self.k.element(v) for v in row) for row in entries)
        return MatrixElement(self, grid).check_pattern()

    def generator_element(self, g: Generator) -> "MatrixElement":
        return elementary(self, g.element, *g.position)

    @functools.cached_property
    def _position_lookup(self) -> dict:
        return {(g.position, g.slot): g.index for g in self.generators}

    def generator_product(self, a: Generator, b: Generator) -> GroupElement:
        "Coordinates of a*b, using e_{i,j} e_{k,l} = [j == k] e_{i,l}."
        (i, j), (k, l) = a.position, b.position
        if j != k:
            return self.additive_group.zero()
        return self._coords_at(a.element * b.element, i, l)

    def generator_jordan(self, a: Generator, b: Generator) -> GroupElement:
        return self.generator_product(a, b) + self.generator_product(b, a)

    def _coords_at(self, x: RingElement, i: int, j: int) -> GroupElement:
        coords = [0] * len(self.generators)
        for slot, c in enumerate(self.entry_ideal(i, j).coordinates(x)):
            coords[self._position_lookup[((i, j), slot)]] = c
        return self.additive_group.element(coords)

    def random_element(self, rng: np.random.Generator) -> "MatrixElement":
        coords = [int(rng.integers(g.order)) for g in self.generators]
        return from_coordinates(self, self.additive_group.element(coords))

    def __eq__(self, other) -> bool:
        if not isinstance(other, StructuralMatrixRing):
            return NotImplemented
        return self is other or (self.n == other.n and self.k == other.k and self.j == other.j)

    def __hash__(self) -> int:
        return hash((self.n, self.j))

    def __repr__(self) -> str:
        return f"StructuralMatrixRing({self.label})"


def _debug_checks() -> bool:
    return logger.isEnabledFor(logging.DEBUG)


@dtc.dataclass(frozen=True, eq=False)
class MatrixElement:
    parent: StructuralMatrixRing
    entries: tuple

    def check_pattern(self) -> "MatrixElement":
        r = self.parent
        for i, j in r.positions():
            x = self.entries[i - 1][j - 1]
            if i <= j and not x.is_zero() and not r.j.contains(x):
                raise PatternViolation(f"Entry {x} at ({i},{j}) is not in {r.entry_ideal(i, j).label}.", (i, j))
        return self

    def _check(self, other: "MatrixElement") -> None:
        if not isinstance(other, MatrixElement):
            raise TypeError(f"Expected a matrix element, got {type(other).__name__}.")
        if other.parent is not self.parent and other.parent != self.parent:
            raise ValueError(f"Elements of {self.parent.label} and {other.parent.label} cannot be combined.")

    def entry(self, i: int, j: int) -> RingElement:
        self.parent.check_position(i, j)
        return self.entries[i - 1][j - 1]

    def _map(self, fn) -> "MatrixElement":
        return MatrixElement(self.parent, tuple(tuple(fn(x) for x in row) for row in self.entries))

    def __add__(self, other: "MatrixElement") -> "MatrixElement":
        self._check(other)
        return MatrixElement(self.parent, tuple(tuple(a + b for a, b in zip(ra, rb))
                                                for ra, rb in zip(self.entries, other.entries)))

    def __sub__(self, other: "MatrixElement") -> "MatrixElement":
        self._check(other)
        return MatrixElement(self.parent, tuple(tuple(a - b for a, b in zip(ra, rb))
                                                for ra, rb in zip(self.entries, other.entries)))

    def __neg__(self) -> "MatrixElement":
        return self._map(lambda x: -x)

    def __rmul__(self, scalar: int) -> "MatrixElement":
        if isinstance(scalar, (int, np.integer)):
            return self._map(lambda x: int(scalar) * x)
        return NotImplemented

    def __mul__(self, other) -> "MatrixElement":
        if isinstance(other, (int, np.integer)):
            return self._map(lambda x: int(other) * x)
        self._check(other)
        n = self.parent.n
        zero = self.parent.k.zero
        rows = []
        for i in range(n):
            row = []
            for l in range(n):
                acc = zero
                for j in range(n):
                    a, b = self.entries[i][j], other.entries[j][l]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        product = MatrixElement(self.parent, tuple(rows))
        return product.check_pattern() if _debug_checks() else product

    def jordan(self, other: "MatrixElement") -> "MatrixElement":
        return self * other + other * self

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixElement):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def support(self) -> list:
        return [(i, j) for i, j in self.parent.positions() if not self.entries[i - 1][j - 1].is_zero()]

    def to_literal(self) -> str:
        "Matrix literal: rows separated by ';', entries by ','."
        return "; ".join(", ".join(str(x) for x in row) for row in self.entries)

    def __str__(self) -> str:
        terms = [f"{self.entries[i - 1][j - 1]}e_{i},{j}" for i, j in self.support()]
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"MatrixElement({self})"


# ---- Operations ----

def elementary(r: StructuralMatrixRing, x, i: int, j: int) -> MatrixElement:
    """
    The matrix x*e_{i,j}.

    :raises PatternViolation: When x is not in I_{i,j}.
    :raises IndexError: When (i, j) is outside the matrix.
    """
    r.check_position(i, j)
    x = r.k.element(x)
    if not r.entry_ideal(i, j).contains(x):
        raise PatternViolation(f"{x} is not in {r.entry_ideal(i, j).label} at position ({i},{j}).", (i, j))
    z = r.k.zero
    grid = tuple(tuple(x if (a, b) == (i, j) else z for b in range(1, r.n + 1)) for a in range(1, r.n + 1))
    return MatrixElement(r, grid)


def mul(x: MatrixElement, y: MatrixElement) -> MatrixElement:
    return x * y


def jordan_product(x: MatrixElement, y: MatrixElement) -> MatrixElement:
    "x o y = xy + yx"
    return x.jordan(y)


def coordinates(x: MatrixElement) -> GroupElement:
    """Unique coordinates of x over the canonical generators of its ring."""
    r = x.parent
    coords = []
    for i, j in r.positions():
        ideal = r.entry_ideal(i, j)
        entry = x.entries[i - 1][j - 1]
        if entry.is_zero():
            coords.extend([0] * len(ideal.basis_elements))
        else:
            try:
                coords.extend(ideal.coordinates(entry))
            except ValueError:
                raise PatternViolation(f"Entry {entry} at ({i},{j}) is not in {ideal.label}.", (i, j))
    return r.additive_group.element(coords)


def from_coordinates(r: StructuralMatrixRing, coords) -> MatrixElement:
    "Inverse of ``coordinates``."
    values = coords.coords if isinstance(coords, GroupElement) else tuple(coords)
    if len(values) != len(r.generators):
        raise ValueError(f"{len(values)} coordinates given for {len(r.generators)} generators.")
    grid = [[r.k.zero for _ in range(r.n)] for _ in range(r.n)]
    for g, c in zip(r.generators, values):
        if c:
            i, j = g.position
            grid[i - 1][j - 1] = grid[i - 1][j - 1] + int(c) * g.element
    return MatrixElement(r, tuple(tuple(row) for row in grid))


def ann_R(r: StructuralMatrixRing) -> SubgroupBasis:
    "Two-sided annihilator of R, as the kernel of x -> (x*g, g*x) over all generators g."
    group = r.additive_group
    gens = r.generators

    def conditions(x: GroupElement) -> list:
        # x is a basis vector, i.e. a single generator
        a = gens[x.coords.index(1)]
        out = []
        for g in gens:
            out.extend(r.generator_product(a, g).coords)
            out.extend(r.generator_product(g, a).coords)
        return out

    system = LinearSystem.from_homomorphism(group, group.power(2 * len(gens)), conditions)
    return kernel(system)


def ann_formula(r: StructuralMatrixRing) -> SubgroupBasis:
    "(Ann_K J) e_{n,1}"
    ann = annihilator(r.j)
    return span(r.additive_group, [coordinates(elementary(r, x, r.n, 1)) for x in ann.basis_elements])


@dtc.dataclass(frozen=True)
class CarpetCheck:
    ok: bool
    triple: tuple = None
    witness: tuple = None  # (a, b, a*b)

    def __bool__(self) -> bool:
        return self.ok


def carpet_check(r: StructuralMatrixRing, pattern: dict = None) -> CarpetCheck:
    """
    Verify I_{i,j} I_{j,l} within I_{i,l} on products of basis elements.

    :param pattern: Optional {(i, j): Ideal} overriding the ring's own carpet.
    :return: The first failing (i, j, l), scanning the shared index j outermost.
    """
    n = r.n

    def ideal_at(i, j):
        if pattern is not None and (i, j) in pattern:
            return pattern[(i, j)]
        return r.whole if i > j else r.j

    for j in range(1, n + 1):
        for i in range(1, n + 1):
            for l in range(1, n + 1):
                left, right, target = ideal_at(i, j), ideal_at(j, l), ideal_at(i, l)
                for a in left.basis_elements:
                    for b in right.basis_elements:
                        if not target.contains(a * b):
                            return CarpetCheck(False, (i, j, l), (a, b, a * b))
    return CarpetCheck(True)
