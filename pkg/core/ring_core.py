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

"""Finite associative rings with identity, their ideals and additive maps."""

import dataclasses as dtc
import functools
import itertools
import logging
import math
from typing import Callable, Iterable

import numpy as np

from config.app_config import DEFAULTS
from core.exact_linalg import (FiniteAbelianGroup, GroupElement, SubgroupBasis, CyclicBasis, LinearSystem,
                               BoundsExceeded, AmbientMismatch, span, kernel, contains, full_subgroup,
                               cyclic_decomposition, graph_value)

logger = logging.getLogger(__name__)


@dtc.dataclass(frozen=True, eq=False)
class FiniteRing:
    """Ring on the additive group Z_m1 + ... + Z_mk.

    structure_constants[i][j] holds the coordinates of g_i * g_j where g_i is
    the i-th unit vector of the additive group.
    """
    add_group: FiniteAbelianGroup
    structure_constants: tuple
    unit: tuple
    label: str = "K"

    def __post_init__(self):
        k = self.add_group.rank
        moduli = self.add_group.moduli
        try:
            sc = tuple(tuple(tuple(int(c) % m for c, m in zip(self.structure_constants[i][j], moduli))
                             for j in range(k))
                       for i in range(k))
        except (IndexError, TypeError):
            raise ValueError(f"Structure constants of {self.label} must be a {k}x{k} table of rank-{k} vectors.")
        if any(len(self.structure_constants[i][j]) != k for i in range(k) for j in range(k)):
            raise ValueError(f"Structure constants of {self.label} must be rank-{k} vectors.")
        object.__setattr__(self, "structure_constants", sc)
        unit = self.unit.coords if isinstance(self.unit, GroupElement) else tuple(self.unit)
        if len(unit) != k:
            raise ValueError(f"Unit {unit} does not have rank {k}.")
        object.__setattr__(self, "unit", tuple(int(c) % m for c, m in zip(unit, moduli)))

        for i, j in itertools.product(range(k), repeat=2):
            for scale in (moduli[i], moduli[j]):
                if any(scale * c % m for c, m in zip(sc[i][j], moduli)):
                    raise ValueError(f"Product g{i + 1}*g{j + 1} of {self.label} is not compatible "
                                     f"with the generator orders {moduli}.")
        for i in range(k):
            g = self.generator(i)
            if self.one * g != g or g * self.one != g:
                raise ValueError(f"{self.unit} is not a two-sided unit of {self.label} (fails on g{i + 1}).")
        for i, j, l in itertools.product(range(k), repeat=3):
            a, b, c = self.generator(i), self.generator(j), self.generator(l)
            if (a * b) * c != a * (b * c):
                raise ValueError(f"Multiplication of {self.label} is not associative on (g{i + 1}, g{j + 1}, g{l + 1}).")
        logger.debug(f"Constructed ring {self.label} of order {self.order}.")

    @property
    def rank(self) -> int:
        return self.add_group.rank

    @property
    def order(self) -> int:
        return self.add_group.order

    @property
    def moduli(self) -> tuple:
        return self.add_group.moduli

    @property
    def one(self) -> "RingElement":
        return RingElement(self, self.add_group.element(self.unit))

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, self.add_group.zero())

    def element(self, value) -> "RingElement":
        """Element from coordinates. A plain integer means that multiple of the unit."""
        if isinstance(value, RingElement):
            return value
        if isinstance(value, GroupElement):
            return RingElement(self, value)
        if isinstance(value, (int, np.integer)):
            return int(value) * self.one
        return RingElement(self, self.add_group.element(value))

    def generator(self, i: int) -> "RingElement":
        return RingElement(self, self.add_group.basis_element(i))

    def generators(self) -> list:
        "Additive generators of nontrivial order."
        return [self.generator(i) for i, m in enumerate(self.moduli) if m > 1]

    def elements(self):
        for value in self.add_group.elements():
            yield RingElement(self, value)

    def mul_coords(self, a: tuple, b: tuple) -> tuple:
        out = [0] * self.rank
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                for o, s in enumerate(self.structure_constants[i][j]):
                    if s:
                        out[o] += c * s
        return tuple(out)

    @functools.cached_property
    def is_commutative(self) -> bool:
        gens = self.generators()
        return all(a * b == b * a for a, b in itertools.combinations(gens, 2))

    def format_element(self, x: "RingElement") -> str:
        if self.rank == 1:
            return str(x.value.coords[0])
        return "(" + ",".join(str(c) for c in x.value.coords) + ")"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteRing):
            return NotImplemented
        return (self is other or (self.add_group == other.add_group
                                  and self.structure_constants == other.structure_constants
                                  and self.unit == other.unit))

    def __hash__(self) -> int:
        return hash((self.add_group.moduli, self.unit))

    def __repr__(self) -> str:
        return f"FiniteRing({self.label}, order={self.order})"


@dtc.dataclass(frozen=True, eq=False)
class RingElement:
    parent: FiniteRing
    value: GroupElement

    def __post_init__(self):
        if self.value.parent.moduli != self.parent.moduli:
            raise ValueError(f"{self.value} is not in the additive group of {self.parent.label}.")

    @property
    def coords(self) -> tuple:
        return self.value.coords

    def _check(self, other: "RingElement") -> None:
        if not isinstance(other, RingElement):
            raise TypeError(f"Expected a ring element, got {type(other).__name__}.")
        if other.parent is not self.parent and other.parent != self.parent:
            raise AmbientMismatch(f"Elements of {self.parent.label} and {other.parent.label} cannot be combined.")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.parent, self.value + other.value)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.parent, self.value - other.value)

    def __neg__(self) -> "RingElement":
        return RingElement(self.parent, -self.value)

    def __mul__(self, other) -> "RingElement":
        if isinstance(other, (int, np.integer)):
            return RingElement(self.parent, int(other) * self.value)
        self._check(other)
        coords = self.parent.mul_coords(self.value.coords, other.value.coords)
        return RingElement(self.parent, self.parent.add_group.element(coords))

    def __rmul__(self, other: int) -> "RingElement":
        if isinstance(other, (int, np.integer)):
            return RingElement(self.parent, int(other) * self.value)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __str__(self) -> str:
        return self.parent.format_element(self)

    def __repr__(self) -> str:
        return f"RingElement({self} in {self.parent.label})"


def mul(x: RingElement, y: RingElement) -> RingElement:
    return x * y


# ---- Constructors ----

def make_ring(moduli, structure_constants, unit, label: str = "K") -> FiniteRing:
    """
    Ring from an explicit structure-constant table.

    :param moduli: Orders of the additive generators.
    :param structure_constants: [i][j] -> coordinates of g_i * g_j.
    :param unit: Coordinates of the identity.
    :param label: Display name.
    """
    group = FiniteAbelianGroup(tuple(moduli))
    group.check_order()
    return FiniteRing(group, structure_constants, tuple(unit), label)


def make_zmod(m: int) -> FiniteRing:
    if m < 2:
        raise ValueError(f"Z_m needs m >= 2, got {m}.")
    return make_ring((m,), (((1,),),), (1,), label=f"Z_{m}")


def make_product(a: FiniteRing, b: FiniteRing) -> FiniteRing:
    "Componentwise product a x b on the concatenated additive group."
    ka, kb = a.rank, b.rank
    sc = []
    for i in range(ka + kb):
        row = []
        for j in range(ka + kb):
            if i < ka and j < ka:
                row.append(a.structure_constants[i][j] + (0,) * kb)
            elif i >= ka and j >= ka:
                row.append((0,) * ka + b.structure_constants[i - ka][j - ka])
            else:
                row.append((0,) * (ka + kb))
        sc.append(tuple(row))
    return make_ring(a.moduli + b.moduli, tuple(sc), a.unit + b.unit, label=f"{a.label} x {b.label}")


@dtc.dataclass(frozen=True)
class TorsionCheck:
    torsion_free: bool
    witness: RingElement = None

    def __bool__(self) -> bool:
        return self.torsion_free


def is_two_torsion_free(k: FiniteRing) -> TorsionCheck:
    "For a finite additive group this is the same as every modulus being odd."
    for i, m in enumerate(k.moduli):
        if m % 2 == 0:
            return TorsionCheck(False, (m // 2) * k.generator(i))
    return TorsionCheck(True)


# ---- Ideals ----

@dtc.dataclass(frozen=True, eq=False)
class Ideal:
    """Two-sided ideal stored by its canonical additive basis."""
    ambient: FiniteRing
    basis: SubgroupBasis
    label: str = "J"

    def __post_init__(self):
        if self.basis.ambient.moduli != self.ambient.moduli:
            raise AmbientMismatch(f"Ideal basis lives in {self.basis.ambient.moduli}, "
                                  f"not in the additive group of {self.ambient.label}.")
        for b in self.basis.generators():
            b = RingElement(self.ambient, b)
            for g in self.ambient.generators():
                for product in (g * b, b * g):
                    if not contains(self.basis, product.value):
                        raise ValueError(f"Span of {self.label} is not closed under multiplication "
                                         f"by {g} (witness {b}).")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    @property
    def order(self) -> int:
        return self.basis.order

    def is_zero(self) -> bool:
        return self.basis.is_trivial()

    def is_whole(self) -> bool:
        return self.order == self.ambient.order

    def contains(self, x: RingElement) -> bool:
        return contains(self.basis, x.value)

    def elements(self):
        for value in self.basis.elements():
            yield RingElement(self.ambient, value)

    @functools.cached_property
    def cyclic_basis(self) -> CyclicBasis:
        # the whole ring keeps the ring generators so coordinates read off directly
        if self.is_whole():
            gens = [i for i, m in enumerate(self.ambient.moduli) if m > 1]
            return CyclicBasis(self.ambient.add_group,
                               tuple(self.ambient.add_group.basis_element(i) for i in gens),
                               tuple(self.ambient.moduli[i] for i in gens))
        return cyclic_decomposition(self.basis)

    @property
    def basis_elements(self) -> list:
        "Independent additive generators, in canonical order."
        return [RingElement(self.ambient, g) for g in self.cyclic_basis.generators]

    @property
    def basis_orders(self) -> tuple:
        return self.cyclic_basis.orders

    def coordinates(self, x: RingElement) -> tuple:
        coords = self.cyclic_basis.coordinates(x.value)
        if coords is None:
            raise ValueError(f"{x} is not an element of {self.label}.")
        return coords

    def combine(self, coeffs) -> RingElement:
        return RingElement(self.ambient, self.cyclic_basis.combine(coeffs))

    def __repr__(self) -> str:
        return f"Ideal({self.label} of order {self.order} in {self.ambient.label})"


def zero_ideal(k: FiniteRing, label: str = "0") -> Ideal:
    return Ideal(k, span(k.add_group, []), label)


def whole_ideal(k: FiniteRing) -> Ideal:
    return Ideal(k, full_subgroup(k.add_group), k.label)


def ideal_closure(k: FiniteRing, gens: Iterable, label: str = "J") -> Ideal:
    """
    Smallest two-sided ideal containing ``gens``.

    The span is multiplied by the ring generators on both sides until it stops
    growing.
    """
    gens = [k.element(g) for g in gens]
    current = span(k.add_group, [g.value for g in gens])
    while True:
        elements = [RingElement(k, b) for b in current.generators()]
        products = [p.value for b in elements for g in k.generators() for p in (g * b, b * g)]
        grown = span(k.add_group, [b.value for b in elements] + products)
        if grown == current:
            return Ideal(k, current, label)
        current = grown


def ideal_sum(a: Ideal, b: Ideal, label: str = None) -> Ideal:
    if a.ambient != b.ambient:
        raise AmbientMismatch(f"Ideals of {a.ambient.label} and {b.ambient.label} cannot be added.")
    gens = [RingElement(a.ambient, g) for g in a.basis.generators() + b.basis.generators()]
    return ideal_closure(a.ambient, gens, label or f"{a.label}+{b.label}")


def ideal_product(a: Ideal, b: Ideal, label: str = None) -> Ideal:
    if a.ambient != b.ambient:
        raise AmbientMismatch(f"Ideals of {a.ambient.label} and {b.ambient.label} cannot be multiplied.")
    k = a.ambient
    products = [RingElement(k, x) * RingElement(k, y)
                for x in a.basis.generators() for y in b.basis.generators()]
    return ideal_closure(k, products, label or f"{a.label}{b.label}")


def _annihilator_system(j: Ideal, two_sided: bool) -> LinearSystem:
    k = j.ambient
    spanning = [RingElement(k, b) for b in j.basis.generators()]
    sides = 2 if two_sided else 1
    codomain = k.add_group.power(sides * len(spanning))

    def conditions(x: GroupElement) -> list:
        x = RingElement(k, x)
        out = []
        for b in spanning:
            out.extend((x * b).coords)
            if two_sided:
                out.extend((b * x).coords)
        return out

    return LinearSystem.from_homomorphism(k.add_group, codomain, conditions)


def annihilator(j: Ideal, label: str = None) -> Ideal:
    "Ann_K J = {x : xJ = Jx = 0}."
    return Ideal(j.ambient, kernel(_annihilator_system(j, two_sided=True)), label or f"Ann({j.label})")


def left_annihilator(j: Ideal) -> SubgroupBasis:
    "{x : xJ = 0}. Equals the two-sided annihilator when the ring is commutative."
    return kernel(_annihilator_system(j, two_sided=False))


# ---- Additive maps between ideals ----

@dtc.dataclass(frozen=True, eq=False)
class AdditiveMapKK:
    """Additive map from an ideal (or the whole ring) into another.

    The map is stored by the images of the independent basis of ``domain``.
    Images are elements of the codomain's ambient ring; whether they lie in
    ``codomain`` is what ``validate_additive_map`` reports.
    """
    domain: Ideal
    codomain: Ideal
    images: tuple
    label: str = "f"

    def __post_init__(self):
        images = tuple(self.codomain.ambient.element(v) for v in self.images)
        if len(images) != len(self.domain.basis_elements):
            raise ValueError(f"Map {self.label} needs {len(self.domain.basis_elements)} images, got {len(images)}.")
        object.__setattr__(self, "images", images)

    @classmethod
    def zero(cls, domain: Ideal, codomain: Ideal, label: str = "0") -> "AdditiveMapKK":
        return cls(domain, codomain, tuple(codomain.ambient.zero for _ in domain.basis_elements), label)

    @classmethod
    def from_function(cls, domain: Ideal, codomain: Ideal, fn: Callable, label: str = "f") -> "AdditiveMapKK":
        return cls(domain, codomain, tuple(fn(b) for b in domain.basis_elements), label)

    @classmethod
    def from_pairs(cls, domain: Ideal, codomain: Ideal, pairs: Iterable, label: str = "f") -> "AdditiveMapKK":
        """
        Map given by the images of elements spanning ``domain``.

        :param pairs: (x, f(x)) ring element pairs.
        :raises ValueError: When the pairs miss part of the domain or are not additive.
        """
        pairs = [(domain.ambient.element(x), codomain.ambient.element(v)) for x, v in pairs]
        for x, _ in pairs:
            if not domain.contains(x):
                raise ValueError(f"{x} is not in the domain {domain.label} of {label}.")
        group = domain.ambient.add_group.direct_sum(codomain.ambient.add_group)
        graph = span(group, [x.coords + v.coords for x, v in pairs])
        images = []
        for b in domain.basis_elements:
            image = graph_value(graph, b.coords)
            if image is None:
                raise ValueError(f"The images given for {label} do not determine its value at {b}.")
            images.append(image)
        # the graph projects onto the domain, so any excess order is a nonzero image of 0
        if graph.order != domain.order:
            raise ValueError(f"The images given for {label} are not additive: some multiple of zero maps to nonzero.")
        f = cls(domain, codomain, tuple(images), label)
        for x, v in pairs:
            if f(x) != v:
                raise ValueError(f"The images given for {label} are not additive: {x} -> {v} conflicts.")
        return f

    def __call__(self, x: RingElement) -> RingElement:
        out = self.codomain.ambient.zero
        for c, image in zip(self.domain.coordinates(x), self.images):
            if c:
                out = out + c * image
        return out

    def _check(self, other: "AdditiveMapKK") -> None:
        if self.domain != other.domain:
            raise AmbientMismatch(f"Maps {self.label} and {other.label} have different domains.")

    def __add__(self, other: "AdditiveMapKK") -> "AdditiveMapKK":
        self._check(other)
        return AdditiveMapKK(self.domain, self.codomain,
                             tuple(a + b for a, b in zip(self.images, other.images)), self.label)

    def __sub__(self, other: "AdditiveMapKK") -> "AdditiveMapKK":
        self._check(other)
        return AdditiveMapKK(self.domain, self.codomain,
                             tuple(a - b for a, b in zip(self.images, other.images)), self.label)

    def __neg__(self) -> "AdditiveMapKK":
        return AdditiveMapKK(self.domain, self.codomain, tuple(-a for a in self.images), self.label)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdditiveMapKK):
            return NotImplemented
        return self.domain == other.domain and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def is_zero(self) -> bool:
        return all(image.is_zero() for image in self.images)

    def retarget(self, codomain: Ideal, label: str = None) -> "AdditiveMapKK":
        "Same images, declared into another ideal of the same ring."
        return AdditiveMapKK(self.domain, codomain, self.images, label or self.label)

    def relabel(self, label: str) -> "AdditiveMapKK":
        return AdditiveMapKK(self.domain, self.codomain, self.images, label)

    def describe(self) -> list:
        "Basis element -> image pairs as strings."
        return [(str(b), str(image)) for b, image in zip(self.domain.basis_elements, self.images)]

    def __repr__(self) -> str:
        pairs = ", ".join(f"{b}->{v}" for b, v in self.describe())
        return f"AdditiveMapKK({self.label}: {pairs})"


@dtc.dataclass(frozen=True)
class MapCheck:
    ok: bool
    violation: str = None  # "codomain" | "order"
    element: RingElement = None
    label: str = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.label}: {self.violation} violated at basis element {self.element}"


def validate_additive_map(f: AdditiveMapKK, check_codomain: bool = True) -> MapCheck:
    for b, order, image in zip(f.domain.basis_elements, f.domain.basis_orders, f.images):
        if check_codomain and not f.codomain.contains(image):
            return MapCheck(False, "codomain", b, f.label)
        if not (order * image).is_zero():
            return MapCheck(False, "order", b, f.label)
    return MapCheck(True, label=f.label)


def enumerate_additive_maps(domain: Ideal, codomain: Ideal, bound: int = None):
    """
    Every additive map domain -> codomain.

    The image of a basis element of order d ranges over the codomain elements
    killed by d.

    :raises BoundsExceeded: When the number of maps is above ``bound``.
    """
    bound = DEFAULTS["max_maps"] if bound is None else bound
    targets = list(codomain.elements())
    candidates = [[c for c in targets if (d * c).is_zero()] for d in domain.basis_orders]
    total = math.prod(len(c) for c in candidates)
    if total > bound:
        raise BoundsExceeded(f"{total} additive maps {domain.label} -> {codomain.label} exceed the bound {bound}.")
    logger.debug(f"Enumerating {total} additive maps {domain.label} -> {codomain.label}.")
    for images in itertools.product(*candidates):
        yield AdditiveMapKK(domain, codomain, images)
