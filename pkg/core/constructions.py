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

"""Builders and validators for the derivation families of R_n(K, J).

Every builder returns a DerivationTable. Builders taking parameter maps run
the matching validator first and raise InvalidParameters on a violation.
"""

import dataclasses as dtc
import itertools
import logging
from typing import Callable

from core.ring_core import AdditiveMapKK, Ideal, annihilator, ideal_product, validate_additive_map
from core.matrix_ring import StructuralMatrixRing, MatrixElement, elementary
from core.derivation_table import DerivationTable, verify_jordan

logger = logging.getLogger(__name__)


@dtc.dataclass(frozen=True)
class ConditionCheck:
    ok: bool
    family: str
    map_name: str = None
    relation: str = None
    index: int = None  # position in a numbered relation list
    witnesses: tuple = ()  # (variable, value) pairs

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"family": self.family,
                "map": self.map_name,
                "relation": self.relation,
                "index": self.index,
                "witnesses": dict(self.witnesses),
                }

    def __str__(self) -> str:
        if self.ok:
            return f"{self.family}: ok"
        where = ", ".join(f"{name} = {value}" for name, value in self.witnesses)
        number = f" #{self.index}" if self.index is not None else ""
        return f"{self.family}: {self.map_name or 'relation'}{number} '{self.relation}' violated at {where}"


class InvalidParameters(ValueError):
    def __init__(self, check: ConditionCheck):
        super().__init__(str(check))
        self.check = check


class _MapBundle:
    "Pointwise arithmetic on parameter records whose fields are maps or tuples of maps."

    def _combine(self, other, op):
        values = {}
        for field in dtc.fields(self):
            a = getattr(self, field.name)
            b = getattr(other, field.name) if other is not None else None
            if isinstance(a, tuple):
                values[field.name] = tuple(op(x, y) for x, y in zip(a, b or a))
            else:
                values[field.name] = op(a, b)
        return type(self)(**values)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return self._combine(None, lambda a, b: -a)

    def maps(self) -> dict:
        out = {}
        for field in dtc.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, tuple):
                out.update({f"{field.name}{i + 1}": f for i, f in enumerate(value)})
            else:
                out[field.name] = value
        return out

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.maps().values())


@dtc.dataclass(frozen=True)
class ExtremalParams(_MapBundle):
    "alpha, beta, gamma: J -> Ann_K J"
    alpha: AdditiveMapKK
    beta: AdditiveMapKK
    gamma: AdditiveMapKK


@dtc.dataclass(frozen=True)
class A2Params(_MapBundle):
    "alpha1, alpha2: J -> Ann_K J, n = 3 only"
    alpha1: AdditiveMapKK
    alpha2: AdditiveMapKK


@dtc.dataclass(frozen=True)
class A3Params(_MapBundle):
    "delta_i: J -> J; beta_i, theta, gamma: J -> K; n = 3 only"
    delta1: AdditiveMapKK
    delta2: AdditiveMapKK
    delta3: AdditiveMapKK
    beta1: AdditiveMapKK
    beta2: AdditiveMapKK
    beta3: AdditiveMapKK
    theta: AdditiveMapKK
    gamma: AdditiveMapKK


@dtc.dataclass(frozen=True)
class AnnihilatorParams(_MapBundle):
    """sigma[0..n-2]: K -> Ann_K J vanishing on J, applied to the (i+1, i) entries;
    sigma[n-1]: J -> Ann_K J vanishing on J^2, applied to the (1, n) entry."""
    sigma: tuple


@dtc.dataclass(frozen=True)
class RingDerivParams(_MapBundle):
    pi: AdditiveMapKK


@dtc.dataclass(frozen=True)
class AlmostAnnihilatorParams(_MapBundle):
    "alpha, beta: J -> J; gamma: J -> K"
    alpha: AdditiveMapKK
    beta: AdditiveMapKK
    gamma: AdditiveMapKK


# ---- Shared checking machinery ----

class _Checker:
    """Variables and ideals shared by the validators of one ring."""

    def __init__(self, family: str, j: Ideal):
        self.family = family
        self.j = j
        self.k = j.ambient
        self.ann = annihilator(j)
        self.j_squared = ideal_product(j, j)
        self.xs = self.k.generators()
        self.ys = j.basis_elements

    def fail(self, map_name, relation, index=None, **witnesses) -> ConditionCheck:
        return ConditionCheck(False, self.family, map_name, relation, index,
                              tuple((name, str(value)) for name, value in witnesses.items()))

    def ok(self) -> ConditionCheck:
        return ConditionCheck(True, self.family)

    def maps(self, named: dict, codomain: Ideal = None) -> ConditionCheck:
        "Well-definedness of every map, and codomain membership when ``codomain`` is given."
        for name, f in named.items():
            if codomain is not None:
                f = f.retarget(codomain)
            check = validate_additive_map(f, check_codomain=codomain is not None)
            if not check:
                return self.fail(name, check.violation, b=check.element)
        return self.ok()

    def vanish_on_j_squared(self, named: dict) -> ConditionCheck:
        for name, f in named.items():
            for w in self.j_squared.basis_elements:
                if not f(w).is_zero():
                    return self.fail(name, f"{name}(J^2) = 0", w=w)
        return self.ok()

    def identity(self, name: str, relation: str, variables: str, holds: Callable, index=None) -> ConditionCheck:
        """
        Check ``holds`` on every combination of variables.

        :param variables: Letters drawn from "x", "w" (generators of K) and "y", "z" (basis of J).
        """
        pools = [self.xs if v in "xw" else self.ys for v in variables]
        for values in itertools.product(*pools):
            assignment = dict(zip(variables, values))
            if not holds(**assignment):
                return self.fail(name, relation, index, **assignment)
        return self.ok()


def _first_failure(checks) -> ConditionCheck:
    "Run lazily produced checks and return the first violation."
    result = None
    for check in checks:
        result = check()
        if not result:
            return result
    return result


# ---- Validators ----

def validate_extremal(p: ExtremalParams) -> ConditionCheck:
    c = _Checker("extremal", p.alpha.domain)
    a, b, g = p.alpha, p.beta, p.gamma
    named = {"alpha": a, "beta": b, "gamma": g}
    return _first_failure([
        lambda: c.maps(named, c.ann),
        lambda: c.vanish_on_j_squared(named),
        lambda: c.identity("alpha", "alpha(yx) = x alpha(y)", "xy", lambda x, y: a(y * x) == x * a(y)),
        lambda: c.identity("beta", "beta(yx) = x beta(y)", "xy", lambda x, y: b(y * x) == x * b(y)),
        lambda: c.identity("beta", "beta(xy) = beta(y) x", "xy", lambda x, y: b(x * y) == b(y) * x),
        lambda: c.identity("gamma", "gamma(xy) = gamma(y) x", "xy", lambda x, y: g(x * y) == g(y) * x),
    ])


def validate_a2(p: A2Params) -> ConditionCheck:
    c = _Checker("A2", p.alpha1.domain)
    a1, a2 = p.alpha1, p.alpha2
    named = {"alpha1": a1, "alpha2": a2}
    return _first_failure([
        lambda: c.maps(named, c.ann),
        lambda: c.vanish_on_j_squared(named),
        lambda: c.identity("alpha1", "alpha1(xy) = alpha1(y) x", "xy", lambda x, y: a1(x * y) == a1(y) * x),
        lambda: c.identity("alpha2", "alpha2(yx) = x alpha2(y)", "xy", lambda x, y: a2(y * x) == x * a2(y)),
    ])


def _a3_relations(p: A3Params, ann: Ideal, j: Ideal) -> list:
    "(text, variables, predicate) in listed order."
    d1, d2, d3 = p.delta1, p.delta2, p.delta3
    b1, b2, b3 = p.beta1, p.beta2, p.beta3
    th, ga = p.theta, p.gamma
    return [
        ("delta2(yz) = 0", "yz", lambda y, z: d2(y * z).is_zero()),
        ("beta2(y) in Ann_K J", "y", lambda y: ann.contains(b2(y))),
        ("delta1(yz) = z beta1(y) + y delta1(z) + delta1(z) y", "yz",
         lambda y, z: d1(y * z) == z * b1(y) + y * d1(z) + d1(z) * y),
        ("y beta3(z) = delta1(yz)", "yz", lambda y, z: y * b3(z) == d1(y * z)),
        ("delta1(yz) = y theta(z)", "yz", lambda y, z: d1(y * z) == y * th(z)),
        ("delta2(y) z + z delta2(y) = 0", "yz", lambda y, z: (d2(y) * z + z * d2(y)).is_zero()),
        ("z gamma(y) + theta(z) y = 0", "yz", lambda y, z: (z * ga(y) + th(z) * y).is_zero()),
        ("delta3(yz) = beta1(y) z", "yz", lambda y, z: d3(y * z) == b1(y) * z),
        ("delta3(yz) = delta3(y) z + z delta3(y) + beta3(z) y", "yz",
         lambda y, z: d3(y * z) == d3(y) * z + z * d3(y) + b3(z) * y),
        ("gamma(y) z = delta3(yz)", "yz", lambda y, z: ga(y) * z == d3(y * z)),
        ("z delta1(y) + delta3(y) z = beta1(yz) + beta3(yz)", "yz",
         lambda y, z: z * d1(y) + d3(y) * z == b1(y * z) + b3(y * z)),
        ("gamma(y) x = beta1(yx) + beta2(xy)", "xy", lambda x, y: ga(y) * x == b1(y * x) + b2(x * y)),
        ("beta1(yz + zy) = beta1(y) z + beta1(z) y", "yz",
         lambda y, z: b1(y * z + z * y) == b1(y) * z + b1(z) * y),
        ("z beta1(y) + beta3(z) y = 0", "yz", lambda y, z: (z * b1(y) + b3(z) * y).is_zero()),
        ("x theta(y) = beta2(yx) + beta3(xy)", "xy", lambda x, y: x * th(y) == b2(y * x) + b3(x * y)),
        ("theta(yz) = y theta(z) + z beta2(y)", "yz", lambda y, z: th(y * z) == y * th(z) + z * b2(y)),
        ("theta(y) z + y beta1(z) = 0", "yz", lambda y, z: (th(y) * z + y * b1(z)).is_zero()),
        ("theta(xy) = x delta1(y) + delta2(y) x", "xy", lambda x, y: th(x * y) == x * d1(y) + d2(y) * x),
        ("theta(yz) = y beta3(z)", "yz", lambda y, z: th(y * z) == y * b3(z)),
        ("z gamma(y) + beta3(z) y = 0", "yz", lambda y, z: (z * ga(y) + b3(z) * y).is_zero()),
        ("gamma(yz) = beta1(y) z", "yz", lambda y, z: ga(y * z) == b1(y) * z),
        ("gamma(yz) = gamma(y) z", "yz", lambda y, z: ga(y * z) == ga(y) * z),
        ("delta3(y) x + x delta2(y) = gamma(yx)", "xy", lambda x, y: d3(y) * x + x * d2(y) == ga(y * x)),
        ("z gamma(y) + delta1(z) y + y delta2(z) = 0", "yz",
         lambda y, z: (z * ga(y) + d1(z) * y + y * d2(z)).is_zero()),
        ("delta1(y) z + z delta3(y) + delta1(z) y + y delta3(z) = 0", "yz",
         lambda y, z: (d1(y) * z + z * d3(y) + d1(z) * y + y * d3(z)).is_zero()),
        ("delta2(y) z + z delta3(y) + theta(z) y = 0", "yz",
         lambda y, z: (d2(y) * z + z * d3(y) + th(z) * y).is_zero()),
        ("delta1(y), delta2(y), delta3(y) in J", "y", lambda y: all(j.contains(d(y)) for d in (d1, d2, d3))),
    ]


A3_RELATION_COUNT = 27


def validate_a3(p: A3Params) -> ConditionCheck:
    """
    Well-definedness of the eight maps, then relations 1..27 in listed order.

    The violation carries the number of the first failing relation.
    """
    c = _Checker("A3", p.delta1.domain)
    check = c.maps(p.maps())
    if not check:
        return check
    for index, (text, variables, holds) in enumerate(_a3_relations(p, c.ann, c.j), start=1):
        check = c.identity("A3", text, variables, holds, index)
        if not check:
            return check
    return c.ok()


def validate_annihilator(p: AnnihilatorParams) -> ConditionCheck:
    sigma = p.sigma
    j = sigma[-1].domain
    c = _Checker("annihilator", j)
    named = {f"sigma{i + 1}": f for i, f in enumerate(sigma)}
    inner = {f"sigma{i + 1}": f for i, f in enumerate(sigma[:-1])}

    def vanish_on_j() -> ConditionCheck:
        for name, f in inner.items():
            for y in c.ys:
                if not f(y).is_zero():
                    return c.fail(name, f"{name}(J) = 0", y=y)
        return c.ok()

    return _first_failure([
        lambda: c.maps(named, c.ann),
        vanish_on_j,
        lambda: c.vanish_on_j_squared({f"sigma{len(sigma)}": sigma[-1]}),
    ])


def validate_ring(p: RingDerivParams, j: Ideal) -> ConditionCheck:
    "pi must be a derivation of K that maps J into J."
    pi = p.pi
    c = _Checker("ring", j)
    return _first_failure([
        lambda: c.maps({"pi": pi}),
        lambda: c.identity("pi", "pi(xw) = pi(x) w + x pi(w)", "xw",
                           lambda x, w: pi(x * w) == pi(x) * w + x * pi(w)),
        lambda: c.identity("pi", "pi(J) in J", "y", lambda y: j.contains(pi(y))),
    ])


def validate_almost(p: AlmostAnnihilatorParams) -> ConditionCheck:
    a, b, g = p.alpha, p.beta, p.gamma
    c = _Checker("almost annihilator", a.domain)
    return _first_failure([
        lambda: c.maps({"alpha": a, "beta": b}, c.j),
        lambda: c.maps({"gamma": g}),
        lambda: c.identity("alpha", "alpha(xy) = x alpha(y)", "xy", lambda x, y: a(x * y) == x * a(y)),
        lambda: c.identity("beta", "beta(yx) = beta(y) x", "xy", lambda x, y: b(y * x) == b(y) * x),
        lambda: c.identity("gamma", "gamma(y) z = 0", "yz", lambda y, z: (g(y) * z).is_zero()),
        lambda: c.identity("gamma", "y gamma(z) = 0", "yz", lambda y, z: (y * g(z)).is_zero()),
        lambda: c.identity("gamma", "gamma(yz) = 0", "yz", lambda y, z: g(y * z).is_zero()),
        lambda: c.identity("alpha, beta", "alpha(y) z + y beta(z) = 0", "yz",
                           lambda y, z: (a(y) * z + y * b(z)).is_zero()),
    ])


# ---- Builders ----

def _require(check: ConditionCheck) -> None:
    if not check:
        logger.info(f"Rejected parameters: {check}")
        raise InvalidParameters(check)


def _require_domain(r: StructuralMatrixRing, *maps: AdditiveMapKK) -> None:
    for f in maps:
        if f.domain != r.j:
            raise ValueError(f"Map {f.label} is defined on {f.domain.label}, expected {r.j.label} of {r.label}.")


def _table(r: StructuralMatrixRing, images_at: Callable, label: str) -> DerivationTable:
    """
    Table from ``images_at(position, y)`` returning (value, target position) pairs.

    Zero values are skipped, so a target need only be meaningful where the value can be nonzero.
    """
    def image(g, _):
        out = r.zero()
        for value, (s, t) in images_at(g.position, g.element):
            if not value.is_zero():
                out = out + elementary(r, value, s, t)
        return out
    return DerivationTable.from_function(r, image, label)


def build_inner(a: MatrixElement) -> DerivationTable:
    "X -> AX - XA"
    return DerivationTable.from_function(a.parent, lambda g, x: a * x - x * a, "inner")


def build_diagonal(r: StructuralMatrixRing, d) -> DerivationTable:
    """
    X -> DX - XD for D = sum d_i e_{i,i}.

    D need not lie in R. Each image is checked to.

    :raises PatternViolation: When some d_i x - x d_j leaves I_{i,j}.
    """
    if len(d) != r.n:
        raise ValueError(f"Diagonal needs {r.n} entries, got {len(d)}.")
    d = [r.k.element(v) for v in d]
    return _table(r, lambda pos, x: [(d[pos[0] - 1] * x - x * d[pos[1] - 1], pos)], "diagonal")


def build_annihilator(r: StructuralMatrixRing, p: AnnihilatorParams) -> DerivationTable:
    "[a_ij] -> (sigma_n(a_1n) + sum sigma_i(a_{i+1,i})) e_{n,1}"
    n = r.n
    if len(p.sigma) != n:
        raise ValueError(f"Annihilator derivation of {r.label} needs {n} maps, got {len(p.sigma)}.")
    _require_domain(r, p.sigma[-1])
    _require(validate_annihilator(p))

    def images_at(pos, x):
        i, j = pos
        if (i, j) == (1, n):
            return [(p.sigma[-1](x), (n, 1))]
        if i == j + 1:
            return [(p.sigma[j - 1](x), (n, 1))]
        return []
    return _table(r, images_at, "annihilator")


def build_ring(r: StructuralMatrixRing, p: RingDerivParams) -> DerivationTable:
    "Entrywise application of pi."
    _require(validate_ring(p, r.j))
    return _table(r, lambda pos, x: [(p.pi(x), pos)], "ring")


def build_almost_annihilator(r: StructuralMatrixRing, p: AlmostAnnihilatorParams) -> DerivationTable:
    n = r.n
    _require_domain(r, p.alpha, p.beta, p.gamma)
    _require(validate_almost(p))

    def images_at(pos, y):
        i, j = pos
        if (i, j) == (1, n):
            return [(p.alpha(y), (1, 1)), (p.beta(y), (n, n)), (p.gamma(y), (n, 1))]
        if j == n and i > 1:
            return [(p.alpha(y), (i, 1))]
        if i == 1 and j < n:
            return [(p.beta(y), (n, j))]
        return []
    return _table(r, images_at, "almost annihilator")


def build_extremal(r: StructuralMatrixRing, p: ExtremalParams) -> DerivationTable:
    """
    Extremal Jordan derivation, defined for n >= 4:

        y e_{1,n}   -> alpha(y) e_{n-1,1} + beta(y) e_{n-1,2} + gamma(y) e_{n,2}
        y e_{1,n-1} -> alpha(y) e_{n,1} + beta(y) e_{n,2}
        y e_{2,n-1} -> beta(y) e_{n,1}
        y e_{2,n}   -> beta(y) e_{n-1,1} + gamma(y) e_{n,1}

    It is a derivation only when all three maps vanish.
    """
    n = r.n
    if n < 4:
        raise ValueError(f"Extremal Jordan derivations need n >= 4, got n = {n}.")
    _require_domain(r, p.alpha, p.beta, p.gamma)
    _require(validate_extremal(p))
    a, b, g = p.alpha, p.beta, p.gamma

    def images_at(pos, y):
        return {
            (1, n): lambda: [(a(y), (n - 1, 1)), (b(y), (n - 1, 2)), (g(y), (n, 2))],
            (1, n - 1): lambda: [(a(y), (n, 1)), (b(y), (n, 2))],
            (2, n - 1): lambda: [(b(y), (n, 1))],
            (2, n): lambda: [(b(y), (n - 1, 1)), (g(y), (n, 1))],
        }.get(pos, list)()
    return _table(r, images_at, "extremal")


def _require_n3(r: StructuralMatrixRing, family: str) -> None:
    if r.n != 3:
        raise ValueError(f"{family} Jordan derivations are defined for n = 3, got n = {r.n}.")


def build_a2(r: StructuralMatrixRing, p: A2Params) -> DerivationTable:
    """
    y e_{1,3} -> alpha1(y) e_{3,2} + alpha2(y) e_{2,1}
    y e_{1,2} -> alpha2(y) e_{3,1}
    y e_{2,3} -> alpha1(y) e_{3,1}
    """
    _require_n3(r, "A2")
    _require_domain(r, p.alpha1, p.alpha2)
    _require(validate_a2(p))
    a1, a2 = p.alpha1, p.alpha2

    def images_at(pos, y):
        return {
            (1, 3): lambda: [(a1(y), (3, 2)), (a2(y), (2, 1))],
            (1, 2): lambda: [(a2(y), (3, 1))],
            (2, 3): lambda: [(a1(y), (3, 1))],
        }.get(pos, list)()
    return _table(r, images_at, "A2")


def build_a3(r: StructuralMatrixRing, p: A3Params, validate: bool = True) -> DerivationTable:
    """
    y e_{1,3} -> sum delta_i(y) e_{i,i}
    y e_{i,i} -> beta_i(y) e_{3,1}
    y e_{2,3} -> theta(y) e_{2,1}
    y e_{1,2} -> gamma(y) e_{3,2}

    :param validate: Run the relation list first and the Jordan identity on the result.
        Decomposition passes False after recording a relation failure, the table itself
        being checked by reconstruction.
    """
    _require_n3(r, "A3")
    _require_domain(r, *p.maps().values())
    if validate:
        _require(validate_a3(p))
    deltas = (p.delta1, p.delta2, p.delta3)
    betas = (p.beta1, p.beta2, p.beta3)

    def images_at(pos, y):
        i, j = pos
        if (i, j) == (1, 3):
            return [(d(y), (k, k)) for k, d in enumerate(deltas, start=1)]
        if i == j:
            return [(betas[i - 1](y), (3, 1))]
        if (i, j) == (2, 3):
            return [(p.theta(y), (2, 1))]
        if (i, j) == (1, 2):
            return [(p.gamma(y), (3, 2))]
        return []
    table = _table(r, images_at, "A3")
    if validate:
        jordan = verify_jordan(table)
        if not jordan:
            # the relation list does not force beta1 + beta3 = delta1 + delta3
            raise InvalidParameters(ConditionCheck(False, "A3", None, "Jordan identity on the built table", None,
                                                   (("u", str(jordan.u)), ("v", str(jordan.v)),
                                                    ("lhs", str(jordan.lhs)), ("rhs", str(jordan.rhs)))))
    return table
