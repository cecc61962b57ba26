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

"""Additive self-maps of R stored by their values on the canonical generators."""

import dataclasses as dtc
import itertools
import logging

from core.exact_linalg import GroupElement, graph_value, span
from core.ring_core import AdditiveMapKK, RingElement
from core.matrix_ring import (StructuralMatrixRing, MatrixElement, Generator, coordinates, from_coordinates,
                              elementary)

logger = logging.getLogger(__name__)


@dtc.dataclass(frozen=True, eq=False)
class DerivationTable:
    parent: StructuralMatrixRing
    images: tuple
    label: str = ""

    def __post_init__(self):
        r = self.parent
        if len(self.images) != len(r.generators):
            raise ValueError(f"Table needs {len(r.generators)} images, got {len(self.images)}.")
        for g, image in zip(r.generators, self.images):
            if image.parent is not r and image.parent != r:
                raise ValueError(f"Image of {g} is not an element of {r.label}.")
            image.check_pattern()
            if not (g.order * image).is_zero():
                raise ValueError(f"Image {image} of {g} is not killed by the generator order {g.order}.")
        object.__setattr__(self, "images", tuple(self.images))

    @classmethod
    def zero(cls, r: StructuralMatrixRing, label: str = "") -> "DerivationTable":
        z = r.zero()
        return cls(r, tuple(z for _ in r.generators), label)

    @classmethod
    def from_function(cls, r: StructuralMatrixRing, fn, label: str = "") -> "DerivationTable":
        "Table whose image of each generator g is fn(g, x_e) with x_e the generator as a matrix."
        return cls(r, tuple(fn(g, r.generator_element(g)) for g in r.generators), label)

    @classmethod
    def from_pairs(cls, r: StructuralMatrixRing, pairs, label: str = "") -> "DerivationTable":
        """
        Table given by the images of elements spanning R additively.

        :param pairs: (x, D(x)) matrix pairs.
        :raises ValueError: When the pairs miss part of R or are not additive.
        """
        pairs = list(pairs)
        group = r.additive_group.direct_sum(r.additive_group)
        graph = span(group, [coordinates(x).coords + coordinates(v).coords for x, v in pairs])
        images = []
        for g in r.generators:
            image = graph_value(graph, r.additive_group.basis_element(g.index).coords)
            if image is None:
                raise ValueError(f"The images given for table {label} do not determine the image of {g}.")
            images.append(from_coordinates(r, image))
        d = cls(r, tuple(images), label)
        for x, v in pairs:
            if evaluate(d, x) != v:
                raise ValueError(f"The images given for table {label} are not additive at {x}.")
        return d

    def image(self, g) -> MatrixElement:
        return self.images[g.index if isinstance(g, Generator) else int(g)]

    def __call__(self, x: MatrixElement) -> MatrixElement:
        return evaluate(self, x)

    def _check(self, other: "DerivationTable") -> None:
        if other.parent is not self.parent and other.parent != self.parent:
            raise ValueError(f"Tables on {self.parent.label} and {other.parent.label} cannot be combined.")

    def __add__(self, other: "DerivationTable") -> "DerivationTable":
        return table_add(self, other)

    def __sub__(self, other: "DerivationTable") -> "DerivationTable":
        return table_sub(self, other)

    def __neg__(self) -> "DerivationTable":
        return table_neg(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DerivationTable):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def is_zero(self) -> bool:
        return all(image.is_zero() for image in self.images)

    def flatten(self) -> GroupElement:
        "Coordinates in the table space, generator after generator."
        coords = []
        for image in self.images:
            coords.extend(coordinates(image).coords)
        return self.parent.table_space.element(coords)

    @classmethod
    def from_flat(cls, r: StructuralMatrixRing, flat, label: str = "") -> "DerivationTable":
        values = flat.coords if isinstance(flat, GroupElement) else tuple(flat)
        size = len(r.generators)
        if len(values) != size * size:
            raise ValueError(f"Flat table of length {len(values)} does not fit {size} generators.")
        images = tuple(from_coordinates(r, values[i * size:(i + 1) * size]) for i in range(size))
        return cls(r, images, label)

    def nonzero_images(self) -> list:
        return [(g, image) for g, image in zip(self.parent.generators, self.images) if not image.is_zero()]

    def __repr__(self) -> str:
        parts = ", ".join(f"{g} -> {image}" for g, image in self.nonzero_images())
        return f"DerivationTable({parts or 'zero'})"


def evaluate(d: DerivationTable, x: MatrixElement) -> MatrixElement:
    "Additive extension from the generator images."
    if x.parent is not d.parent and x.parent != d.parent:
        raise ValueError(f"Cannot evaluate a table on {d.parent.label} at an element of {x.parent.label}.")
    out = d.parent.zero()
    for c, image in zip(coordinates(x).coords, d.images):
        if c:
            out = out + c * image
    return out


def table_add(d1: DerivationTable, d2: DerivationTable) -> DerivationTable:
    d1._check(d2)
    return DerivationTable(d1.parent, tuple(a + b for a, b in zip(d1.images, d2.images)), d1.label)


def table_sub(d1: DerivationTable, d2: DerivationTable) -> DerivationTable:
    d1._check(d2)
    return DerivationTable(d1.parent, tuple(a - b for a, b in zip(d1.images, d2.images)), d1.label)


def table_neg(d: DerivationTable) -> DerivationTable:
    return DerivationTable(d.parent, tuple(-a for a in d.images), d.label)


# ---- Components ----

@dtc.dataclass(frozen=True)
class ComponentMap:
    "x -> entry (s,t) of D(x e_{i,j}), an additive map I_{i,j} -> I_{s,t}."
    source: tuple
    target: tuple
    map: AdditiveMapKK

    def __call__(self, x: RingElement) -> RingElement:
        return self.map(x)

    def is_zero(self) -> bool:
        return self.map.is_zero()


def component(d: DerivationTable, src: tuple, dst: tuple) -> ComponentMap:
    r = d.parent
    r.check_position(*src)
    r.check_position(*dst)
    s, t = dst
    images = tuple(d.image(g).entry(s, t) for g in r.generators_at[tuple(src)])
    label = f"D^{src[0]},{src[1]}_{s},{t}"
    return ComponentMap(tuple(src), tuple(dst), AdditiveMapKK(r.entry_ideal(*src), r.entry_ideal(s, t), images, label))


# ---- Identity checks ----

@dtc.dataclass(frozen=True)
class IdentityCheck:
    ok: bool
    u: MatrixElement = None
    v: MatrixElement = None
    lhs: MatrixElement = None
    rhs: MatrixElement = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"fails at u = {self.u}, v = {self.v}: lhs = {self.lhs}, rhs = {self.rhs}"


def verify_jordan(d: DerivationTable) -> IdentityCheck:
    """
    D(u o v) = D(u) o v + u o D(v) on every unordered pair of generators.

    Both sides are biadditive, so this decides the identity on all of R.
    """
    r = d.parent
    gens = r.generators
    elements = [r.generator_element(g) for g in gens]
    for a, b in itertools.combinations_with_replacement(range(len(gens)), 2):
        u, v = elements[a], elements[b]
        lhs = evaluate(d, u.jordan(v))
        rhs = d.images[a].jordan(v) + u.jordan(d.images[b])
        if lhs != rhs:
            logger.debug(f"Jordan identity fails on ({gens[a]}, {gens[b]}).")
            return IdentityCheck(False, u, v, lhs, rhs)
    return IdentityCheck(True)


def verify_derivation(d: DerivationTable) -> IdentityCheck:
    "D(uv) = D(u)v + uD(v) on every ordered pair of generators."
    r = d.parent
    gens = r.generators
    elements = [r.generator_element(g) for g in gens]
    for a, b in itertools.product(range(len(gens)), repeat=2):
        u, v = elements[a], elements[b]
        lhs = evaluate(d, u * v)
        rhs = d.images[a] * v + u * d.images[b]
        if lhs != rhs:
            logger.debug(f"Leibniz identity fails on ({gens[a]}, {gens[b]}).")
            return IdentityCheck(False, u, v, lhs, rhs)
    return IdentityCheck(True)


# ---- Support shapes ----

@dtc.dataclass(frozen=True)
class SupportRule:
    """Allowed targets for a source position.

    ``unit_only`` rules constrain the image of 1*e_{i,j} alone, the others
    constrain every basis element of I_{i,j}.
    """
    source: tuple
    allowed: frozenset
    unit_only: bool = False
    note: str = ""


def _row(n, i):
    return {(i, t) for t in range(1, n + 1)}


def _col(n, j):
    return {(s, j) for s in range(1, n + 1)}


def _rules_jordan(n: int) -> list:
    rules = []
    for i in range(1, n):
        allowed = _row(n, i + 1) | _col(n, i)
        if i == 1:
            allowed |= {(n, 2), (n, 3)}
        elif i == n - 1:
            allowed |= {(n - 1, 1), (n - 2, 1)}
        else:
            allowed |= {(n, 1)}
        rules.append(SupportRule((i + 1, i), frozenset(allowed), note=f"x e_{i + 1},{i}"))
    allowed = _row(n, 1) | _col(n, n) | {(n - 1, 1), (n - 1, 2), (n, 1), (n, 2)}
    rules.append(SupportRule((1, n), frozenset(allowed), note=f"y e_1,{n}"))
    return rules


def _rules_normalized(n: int) -> list:
    rules = [SupportRule((2, 1), frozenset(), True, "e_2,1"),
             SupportRule((n, n - 1), frozenset(), True, f"e_{n},{n - 1}")]
    for i in range(2, n - 1):
        rules.append(SupportRule((i + 1, i), frozenset({(n, 1)}), True, f"e_{i + 1},{i}"))
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        if i - j > 1:
            rules.append(SupportRule((i, j), frozenset(), True, f"e_{i},{j}"))
    for i in range(2, n):
        rules.append(SupportRule((i, 1), frozenset({(i, 1), (n, 1)}), note=f"x e_{i},1"))
    for j in range(1, n + 1):
        rules.append(SupportRule((n, j), frozenset({(n, 1), (n, j)}), note=f"x e_{n},{j}"))
    for i in range(2, n):
        allowed = {(1, 1), (1, 2), (1, i), (n, 1), (n, 2), (n, i)}
        rules.append(SupportRule((1, i), frozenset(allowed), note=f"y e_1,{i}"))
    for i in range(2, n):
        allowed = {(i, 1), (n - 1, 1), (n, 1), (i, n), (n - 1, n), (n, n)}
        rules.append(SupportRule((i, n), frozenset(allowed), note=f"y e_{i},{n}"))
    allowed = {(1, 1), (1, 2), (1, n), (n - 1, 1), (n - 1, 2), (n - 1, n), (n, 1), (n, 2), (n, n)}
    rules.append(SupportRule((1, n), frozenset(allowed), note=f"y e_1,{n}"))
    for i, j in itertools.product(range(2, n), repeat=2):
        allowed = {(i, 1), (i, j), (n, 1), (n, j)}
        rules.append(SupportRule((i, j), frozenset(allowed), note=f"x e_{i},{j}"))
    return rules


def _rules_reduced(n: int) -> list:
    rules = []
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        if i > j:
            rules.append(SupportRule((i, j), frozenset(), note=f"x e_{i},{j}"))
    for i in range(1, n + 1):
        rules.append(SupportRule((i, i), frozenset({(n, 1)}), note=f"y e_{i},{i}"))
    for j in range(2, n - 1):
        rules.append(SupportRule((1, j), frozenset({(n, j)}), note=f"y e_1,{j}"))
    for i in range(3, n + 1):
        rules.append(SupportRule((i, n), frozenset({(i, 1)}), note=f"y e_{i},{n}"))
    return rules


# jordan: any Jordan derivation. normalized: after removing the diagonal and inner parts.
# reduced: after further removing the annihilator and ring parts.
SHAPES = {"jordan": (_rules_jordan, 4), "normalized": (_rules_normalized, 4), "reduced": (_rules_reduced, 3)}


@dtc.dataclass(frozen=True)
class SupportCheck:
    ok: bool
    shape: str
    source: str = None  # generator or unit element
    position: tuple = None
    value: RingElement = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"{self.shape}: ok"
        return f"{self.shape}: image of {self.source} has {self.value} at forbidden position {self.position}"


def support_check(d: DerivationTable, shape: str) -> SupportCheck:
    """
    Check that D vanishes outside the allowed targets of a support shape.

    :param shape: "jordan", "normalized" or "reduced".
    :raises ValueError: For an unknown shape or a matrix size below its minimum.
    """
    try:
        build_rules, n_min = SHAPES[shape]
    except KeyError:
        raise ValueError(f"Unknown support shape {shape}; expected one of {list(SHAPES)}.")
    r = d.parent
    if r.n < n_min:
        raise ValueError(f"Support shape {shape} needs n >= {n_min}, the ring has n = {r.n}.")

    for rule in build_rules(r.n):
        if rule.unit_only:
            sources = [(f"1e_{rule.source[0]},{rule.source[1]}", evaluate(d, elementary(r, r.k.one, *rule.source)))]
        else:
            sources = [(str(g), d.image(g)) for g in r.generators_at[rule.source]]
        for name, image in sources:
            for position in image.support():
                if position not in rule.allowed:
                    return SupportCheck(False, shape, name, position, image.entry(*position))
    return SupportCheck(True, shape)
