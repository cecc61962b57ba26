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

"""Groups of (Jordan) derivations and the decomposition into derivation + extremal part."""

import dataclasses as dtc
import itertools
import logging
from fractions import Fraction

import numpy as np

from config.app_config import DEFAULTS
from core.exact_linalg import (BoundsExceeded, FiniteAbelianGroup, LinearSystem, SubgroupBasis,
                               kernel, span, subgroup_sum, trivial_subgroup)
from core.ring_core import (AdditiveMapKK, annihilator, ideal_product, is_two_torsion_free)
from core.matrix_ring import StructuralMatrixRing
from core.derivation_table import DerivationTable, IdentityCheck, component, support_check, verify_jordan
from core import constructions as cons

logger = logging.getLogger(__name__)


class TorsionError(ValueError):
    "Coefficient ring has 2-torsion."
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotJordanError(ValueError):
    def __init__(self, check: IdentityCheck):
        super().__init__(f"Input is not a Jordan derivation: {check}")
        self.check = check


class StageError(RuntimeError):
    """A decomposition stage could not establish its conclusion."""
    def __init__(self, stage: str, message: str, position: tuple = None, witness=None):
        super().__init__(f"Stage '{stage}': {message}")
        self.stage = stage
        self.position = position
        self.witness = witness


KINDS = ("jordan", "leibniz", "extremal")


@dtc.dataclass(frozen=True, eq=False)
class DerivationGroup:
    ring: StructuralMatrixRing
    basis: SubgroupBasis
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown derivation group kind '{self.kind}'.")

    @property
    def order(self) -> int:
        return self.basis.order

    def generators(self) -> list:
        "Tables of the canonical basis rows."
        return [DerivationTable.from_flat(self.ring, g, self.kind) for g in self.basis.generators()]

    def tables(self):
        "Every table in the group. Only sensible for small groups."
        for flat in self.basis.elements():
            yield DerivationTable.from_flat(self.ring, flat, self.kind)

    def contains(self, d: DerivationTable) -> bool:
        return self.basis.contains(d.flatten())

    def random_element(self, rng: np.random.Generator) -> DerivationTable:
        "Uniform sample: random multiples of the basis rows."
        n = self.basis.ambient.modulus
        flat = self.basis.ambient.zero()
        for g in self.basis.generators():
            flat = flat + int(rng.integers(n)) * g
        return DerivationTable.from_flat(self.ring, flat, self.kind)

    def __repr__(self) -> str:
        return f"DerivationGroup({self.kind} of {self.ring.label}, order {self.order})"


# ---- Solver ----

def _structure_tensor(r: StructuralMatrixRing, product) -> np.ndarray:
    "T[a, b] = coordinates of product(gen_a, gen_b)."
    gens = r.generators
    size = len(gens)
    t = np.zeros((size, size, size), dtype=object)
    for a, b in itertools.product(range(size), repeat=2):
        t[a, b] = list(product(gens[a], gens[b]).coords)
    return t


def _solve(r: StructuralMatrixRing, kind: str, max_unknowns: int, max_equations: int) -> DerivationGroup:
    """
    Kernel of D(uv) - D(u)v - uD(v) (or the Jordan version) over generator pairs.

    Unknown g*G + h is coordinate h of the image of generator g.
    """
    gens = r.generators
    size = len(gens)
    orders = np.array([g.order for g in gens], dtype=object)
    max_unknowns = DEFAULTS["max_unknowns"] if max_unknowns is None else max_unknowns
    max_equations = DEFAULTS["max_equations"] if max_equations is None else max_equations

    if kind == "jordan":
        pairs = list(itertools.combinations_with_replacement(range(size), 2))
        t = _structure_tensor(r, r.generator_jordan)
    else:
        pairs = list(itertools.product(range(size), repeat=2))
        t = _structure_tensor(r, r.generator_product)

    unknowns = size * size
    n_equations = len(pairs) * size + unknowns
    if unknowns > max_unknowns:
        raise BoundsExceeded(f"{unknowns} unknowns for {r.label} exceed the bound {max_unknowns}.")
    if n_equations > max_equations:
        raise BoundsExceeded(f"{n_equations} equations for {r.label} exceed the bound {max_equations}.")
    logger.info(f"Solving for {kind} derivations of {r.label}: {unknowns} unknowns, {len(pairs)} pairs.")

    blocks = []
    step = DEFAULTS["pairs_per_block"]
    for start in range(0, len(pairs), step):
        chunk = pairs[start:start + step]
        rows = np.zeros((len(chunk) * size, unknowns), dtype=object)
        for p, (a, b) in enumerate(chunk):
            blk = rows[p * size:(p + 1) * size]
            w = t[a, b]
            for g in np.flatnonzero(w):
                for o in range(size):
                    blk[o, g * size + o] += w[g]
            blk[:, a * size:(a + 1) * size] -= t[:, b, :].T
            blk[:, b * size:(b + 1) * size] -= t[a, :, :].T
        blocks.append((rows, np.tile(orders, len(chunk))))

    # images killed by their generator's order
    wd = [(g * size + h, int(orders[g]), int(orders[h])) for g in range(size) for h in range(size)
          if orders[g] % orders[h]]
    if wd:
        rows = np.zeros((len(wd), unknowns), dtype=object)
        for e, (col, coeff, _) in enumerate(wd):
            rows[e, col] = coeff
        blocks.append((rows, [q for _, _, q in wd]))

    system = LinearSystem(r.table_space, tuple(blocks))
    basis = kernel(system)
    logger.info(f"{kind} derivations of {r.label}: order {basis.order}.")
    return DerivationGroup(r, basis, kind)


def solve_jordan_group(r: StructuralMatrixRing, max_unknowns: int = None, max_equations: int = None) -> DerivationGroup:
    return _solve(r, "jordan", max_unknowns, max_equations)


def solve_derivation_group(r: StructuralMatrixRing, max_unknowns: int = None, max_equations: int = None) -> DerivationGroup:
    return _solve(r, "leibniz", max_unknowns, max_equations)


# ---- Extremal Jordan derivations ----

_EXTREMAL_MAPS = ("alpha", "beta", "gamma")


def _extremal_params(r: StructuralMatrixRing, coords) -> cons.ExtremalParams:
    "Parameter triple from flat coordinates: map, then basis element of J, then coordinate in K."
    rank = r.k.rank
    size = len(r.j.basis_elements)
    ann = annihilator(r.j)
    maps = []
    for m, name in enumerate(_EXTREMAL_MAPS):
        images = tuple(tuple(coords[(m * size + b) * rank:(m * size + b + 1) * rank]) for b in range(size))
        maps.append(AdditiveMapKK(r.j, ann, images, name))
    return cons.ExtremalParams(*maps)


def extremal_parameter_group(r: StructuralMatrixRing) -> SubgroupBasis:
    """
    Group of valid (alpha, beta, gamma) in flat coordinates.

    It is the kernel of the linearized side conditions: order of the images,
    images in Ann_K J, vanishing on J^2 and the four module conditions.
    """
    k, j = r.k, r.j
    domain = FiniteAbelianGroup(k.moduli * (len(_EXTREMAL_MAPS) * len(j.basis_elements)))
    if domain.rank == 0:
        return trivial_subgroup(domain)
    j_squared = ideal_product(j, j).basis_elements
    ys, xs = j.basis_elements, k.generators()

    def defects(x) -> list:
        p = _extremal_params(r, x.coords)
        a, b, g = p.alpha, p.beta, p.gamma
        out = []
        for f in (a, b, g):
            for y, order in zip(ys, j.basis_orders):
                image = f(y)
                out.append(order * image)
                for z in ys:
                    out.extend([image * z, z * image])
            out.extend(f(w) for w in j_squared)
        for x_, y in itertools.product(xs, ys):
            out.extend([a(y * x_) - x_ * a(y), b(y * x_) - x_ * b(y),
                        b(x_ * y) - b(y) * x_, g(x_ * y) - g(y) * x_])
        return [c for v in out for c in v.coords]

    width = len(defects(domain.zero())) // max(k.rank, 1)
    codomain = FiniteAbelianGroup(k.moduli * width)
    params = kernel(LinearSystem.from_homomorphism(domain, codomain, defects))
    logger.debug(f"Extremal parameter group of {r.label} has order {params.order}.")
    return params


def extremal_params(r: StructuralMatrixRing, flat) -> cons.ExtremalParams:
    "Parameter triple of an element of ``extremal_parameter_group``."
    return _extremal_params(r, flat.coords if hasattr(flat, "coords") else tuple(flat))


def extremal_subgroup(r: StructuralMatrixRing) -> DerivationGroup:
    """Subgroup of extremal Jordan derivations, spanned by the tables of the parameter generators."""
    if r.n < 4:
        raise ValueError(f"Extremal Jordan derivations need n >= 4, got n = {r.n}.")
    params = extremal_parameter_group(r)
    tables = [cons.build_extremal(r, extremal_params(r, g)).flatten() for g in params.generators()]
    return DerivationGroup(r, span(r.table_space, tables), "extremal")


# ---- Decomposition ----

@dtc.dataclass
class Component:
    "One summand of a decomposition and the parameters it was built from."
    name: str
    table: DerivationTable
    parameters: dict = dtc.field(default_factory=dict)  # name -> rendered value
    params: object = None

    def to_dict(self) -> dict:
        return {"name": self.name,
                "zero": self.table.is_zero(),
                "parameters": self.parameters,
                "images": [[str(g), image.to_literal()] for g, image in self.table.nonzero_images()],
                }


@dtc.dataclass(frozen=True)
class StageCheck:
    stage: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return dtc.asdict(self)


@dtc.dataclass
class DecompositionReport:
    input: DerivationTable
    diagonal: Component = None
    inner: Component = None
    annihilator: Component = None
    ring: Component = None
    almost: Component = None
    extremal_residual: Component = None
    a2: Component = None
    a3: Component = None
    reconstruction_ok: bool = False
    stage_checks: list = dtc.field(default_factory=list)
    discrepancies: list = dtc.field(default_factory=list)

    _ORDER = ("diagonal", "inner", "annihilator", "ring", "almost", "extremal_residual", "a2", "a3")

    def components(self) -> list:
        return [c for c in (getattr(self, name) for name in self._ORDER) if c is not None]

    def total(self) -> DerivationTable:
        out = DerivationTable.zero(self.input.parent)
        for c in self.components():
            out = out + c.table
        return out

    @property
    def residual_params(self):
        "Extracted (alpha, beta, gamma) of the extremal residual, when there is one."
        return self.extremal_residual.params if self.extremal_residual else None

    def to_dict(self) -> dict:
        return {"ring": self.input.parent.label,
                "reconstruction_ok": self.reconstruction_ok,
                "stages": [s.to_dict() for s in self.stage_checks],
                "components": [c.to_dict() for c in self.components()],
                "discrepancies": list(self.discrepancies),
                }


def _describe_map(f: AdditiveMapKK) -> list:
    return [f"{b} -> {v}" for b, v in f.describe()]


class _Pipeline:
    """Runs the stages on a working table, each stage subtracting one summand."""

    def __init__(self, d: DerivationTable, report: DecompositionReport):
        self.r = d.parent
        self.work = d
        self.report = report

    def comp(self, src: tuple, dst: tuple, table: DerivationTable = None) -> AdditiveMapKK:
        return component(self.work if table is None else table, src, dst).map

    def at_one(self, src: tuple, dst: tuple, table: DerivationTable = None):
        return self.comp(src, dst, table)(self.r.k.one)

    def record(self, stage: str, ok: bool = True, detail: str = "") -> None:
        self.report.stage_checks.append(StageCheck(stage, ok, detail))
        logger.debug(f"Stage {stage}: {'ok' if ok else 'failed'} {detail}")

    def fail(self, stage: str, message: str, position: tuple = None, witness=None):
        self.record(stage, False, message)
        raise StageError(stage, message, position, witness)

    def subtract(self, name: str, table: DerivationTable, parameters: dict, params=None) -> None:
        setattr(self.report, name, Component(name, table, parameters, params))
        self.work = self.work - table

    def support(self, shape: str) -> None:
        check = support_check(self.work, shape)
        if not check:
            self.fail(f"{shape} support", str(check), check.position, check.value)
        self.record(f"{shape} support")

    def require(self, stage: str, check) -> None:
        if not check:
            self.fail(stage, str(check), witness=getattr(check, "witnesses", None))

    # -- stages --

    def diagonal(self) -> None:
        n, k = self.r.n, self.r.k
        a = [self.at_one((i + 1, i), (i + 1, i)) for i in range(1, n)]
        d = [k.zero]
        for a_k in a:
            d.append(d[-1] + a_k)
        table = cons.build_diagonal(self.r, d)
        self.subtract("diagonal", table, {"d": [str(v) for v in d]}, tuple(d))
        self.record("diagonal")

    def inner(self) -> None:
        r, n = self.r, self.r.n
        grid = [[r.k.zero] * n for _ in range(n)]
        for i in range(1, n):
            for u in range(1, n + 1):
                if u != i + 1:
                    grid[u - 1][i] = self.at_one((i + 1, i), (u, i))
        a = r.element(grid)
        table_a = cons.build_inner(a)
        after_a = self.work - table_a

        grid = [[r.k.zero] * n for _ in range(n)]
        for i in range(2, n):
            grid[i - 1][0] = -self.at_one((i + 1, i), (i + 1, 1), after_a)
        b = r.element(grid)
        table_b = cons.build_inner(b)
        self.subtract("inner", table_a + table_b, {"A": a.to_literal(), "B": b.to_literal()}, (a, b))
        self.record("inner")

    def annihilator(self) -> None:
        r, n = self.r, self.r.n
        ann = annihilator(r.j)
        sigma = [self.comp((i + 1, i), (n, 1)).retarget(ann, f"sigma{i}") for i in range(1, n)]
        sigma.append(self.comp((1, n), (n, 1)).retarget(ann, f"sigma{n}"))
        p = cons.AnnihilatorParams(tuple(sigma))
        self.require("annihilator", cons.validate_annihilator(p))
        table = cons.build_annihilator(r, p)
        self.subtract("annihilator", table, {f.label: _describe_map(f) for f in sigma}, p)
        self.record("annihilator")

    def ring(self) -> None:
        r, n = self.r, self.r.n
        theta = self.comp((2, 1), (2, 1)).relabel("pi")
        for i, j in r.positions():
            if (i, j) == (2, 1):
                continue
            other = self.comp((i, j), (i, j))
            for x in other.domain.basis_elements:
                if other(x) != theta(x):
                    self.fail("ring", f"entry maps at ({i},{j}) and (2,1) differ at {x}", (i, j), x)
        p = cons.RingDerivParams(theta)
        self.require("ring", cons.validate_ring(p, r.j))
        table = cons.build_ring(r, p)
        self.subtract("ring", table, {"pi": _describe_map(theta)}, p)
        self.record("ring")

    def almost(self) -> None:
        r, n = self.r, self.r.n
        alpha = self.comp((1, n), (1, 1)).relabel("alpha")
        beta = self.comp((1, n), (n, n)).relabel("beta")
        gamma = AdditiveMapKK.zero(r.j, r.whole, "gamma")
        p = cons.AlmostAnnihilatorParams(alpha, beta, gamma)
        self.require("almost annihilator", cons.validate_almost(p))
        table = cons.build_almost_annihilator(r, p)
        self.subtract("almost", table, {"alpha": _describe_map(alpha), "beta": _describe_map(beta)}, p)
        self.record("almost annihilator")

    def extremal(self) -> None:
        r, n = self.r, self.r.n
        ann = annihilator(r.j)

        def extract(src, dst, name):
            return self.comp(src, dst).retarget(ann, name)

        alpha = extract((1, n), (n - 1, 1), "alpha")
        beta = extract((1, n), (n - 1, 2), "beta")
        gamma = extract((1, n), (n, 2), "gamma")
        equalities = [(alpha, (1, n - 1), (n, 1)),
                      (beta, (1, n - 1), (n, 2)), (beta, (2, n - 1), (n, 1)), (beta, (2, n), (n - 1, 1)),
                      (gamma, (2, n), (n, 1))]
        for f, src, dst in equalities:
            if self.comp(src, dst) != f:
                self.fail("extremal", f"component {src} -> {dst} differs from {f.label}", src, _describe_map(f))
        p = cons.ExtremalParams(alpha, beta, gamma)
        self.require("extremal", cons.validate_extremal(p))
        table = cons.build_extremal(r, p)
        if table != self.work:
            self.fail("extremal", "residual is not the extremal table of its parameters")
        parameters = {f.label: _describe_map(f) for f in (alpha, beta, gamma)}
        self.subtract("extremal_residual", table, parameters, p)
        self.record("extremal")

    def finish(self) -> DecompositionReport:
        report = self.report
        report.reconstruction_ok = self.work.is_zero() and report.total() == report.input
        if not report.reconstruction_ok:
            self.fail("reconstruction", "components do not add up to the input")
        self.record("reconstruction")
        return report

    def split_n3(self) -> None:
        "For n = 3 the residual is the sum of an A2 and an A3 table."
        r = self.r
        ann = annihilator(r.j)
        a2 = cons.A2Params(self.comp((1, 3), (3, 2)).retarget(ann, "alpha1"),
                           self.comp((1, 3), (2, 1)).retarget(ann, "alpha2"))
        self.require("A2", cons.validate_a2(a2))
        table2 = cons.build_a2(r, a2)

        deltas = [self.comp((1, 3), (k, k)).relabel(f"delta{k}") for k in (1, 2, 3)]
        betas = [self.comp((k, k), (3, 1)).relabel(f"beta{k}") for k in (1, 2, 3)]
        theta = self.comp((2, 3), (2, 1)).relabel("theta")
        gamma = self.comp((1, 2), (3, 2)).relabel("gamma")
        a3 = cons.A3Params(*deltas, *betas, theta, gamma)
        check = cons.validate_a3(a3)
        if not check:
            logger.warning(f"A3 relation list rejects the extracted parameters: {check}")
            self.report.discrepancies.append(str(check))
        table3 = cons.build_a3(r, a3, validate=False)

        leftover = self.work - table2 - table3
        if not leftover.is_zero():
            g, image = leftover.nonzero_images()[0]
            self.fail("A2 + A3", "unexplained residual support", g.position, image.to_literal())
        self.subtract("a2", table2, {f.label: _describe_map(f) for f in a2.maps().values()}, a2)
        self.subtract("a3", table3, {f.label: _describe_map(f) for f in a3.maps().values()}, a3)
        self.record("A2 + A3", True, "; ".join(self.report.discrepancies))


def _check_preconditions(d: DerivationTable) -> None:
    r = d.parent
    torsion = is_two_torsion_free(r.k)
    if not torsion:
        raise TorsionError(f"{r.k.label} is not 2-torsion free: 2 * {torsion.witness} = 0.", torsion.witness)
    check = verify_jordan(d)
    if not check:
        raise NotJordanError(check)


def decompose(d: DerivationTable) -> DecompositionReport:
    """
    Split a Jordan derivation of R_n(K, J), n >= 4, into diagonal, inner,
    annihilator, ring, almost annihilator and extremal parts.

    Each stage reads its parameters off the current remainder and subtracts
    the table it builds. The parts are not unique; only their sum is checked.

    :raises TorsionError: K has 2-torsion.
    :raises NotJordanError: d is not a Jordan derivation.
    :raises StageError: A stage could not establish its conclusion.
    """
    r = d.parent
    if r.n < 4:
        raise ValueError(f"decompose needs n >= 4, got n = {r.n}; use decompose_n3 for n = 3.")
    _check_preconditions(d)
    logger.info(f"Decomposing a Jordan derivation of {r.label}.")
    run = _Pipeline(d, DecompositionReport(d))
    run.support("jordan")
    run.diagonal()
    run.inner()
    run.support("normalized")
    run.annihilator()
    run.ring()
    run.support("reduced")
    run.almost()
    run.extremal()
    return run.finish()


def decompose_n3(d: DerivationTable) -> DecompositionReport:
    "The n = 3 variant: the remainder after the ring stage is split into A2 and A3 parts."
    r = d.parent
    if r.n != 3:
        raise ValueError(f"decompose_n3 needs n = 3, got n = {r.n}.")
    _check_preconditions(d)
    logger.info(f"Decomposing a Jordan derivation of {r.label}.")
    run = _Pipeline(d, DecompositionReport(d))
    run.diagonal()
    run.inner()
    run.annihilator()
    run.ring()
    run.split_n3()
    return run.finish()


def decompose_any(d: DerivationTable) -> DecompositionReport:
    return decompose_n3(d) if d.parent.n == 3 else decompose(d)


# ---- Theorem check ----

@dtc.dataclass(frozen=True)
class TheoremVerdict:
    ring: str
    orders: dict  # jder, der, extremal, der_plus_extremal
    holds: bool
    index: str  # |JDer| / |Der + Extremal|
    stages: tuple = ()

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {"ring": self.ring,
                "orders": dict(self.orders),
                "verdict": self.holds,
                "index": self.index,
                "stages": [s.to_dict() for s in self.stages],
                }


def theorem_check(r: StructuralMatrixRing, max_unknowns: int = None, max_equations: int = None) -> TheoremVerdict:
    """
    Check JDer(R) = Der(R) + Extremal(R) as subgroups of the table space, and
    decompose every basis table of JDer.

    :raises TorsionError: K has 2-torsion.
    """
    if r.n < 4:
        raise ValueError(f"theorem_check needs n >= 4, got n = {r.n}.")
    torsion = is_two_torsion_free(r.k)
    if not torsion:
        raise TorsionError(f"{r.k.label} is not 2-torsion free: 2 * {torsion.witness} = 0.", torsion.witness)

    jder = solve_jordan_group(r, max_unknowns, max_equations)
    der = solve_derivation_group(r, max_unknowns, max_equations)
    extremal = extremal_subgroup(r)
    total = subgroup_sum(der.basis, extremal.basis)
    orders = {"jder": jder.order, "der": der.order, "extremal": extremal.order, "der_plus_extremal": total.order}

    stages = [StageCheck("subgroup identity", total == jder.basis,
                         f"|JDer| = {jder.order}, |Der + Extremal| = {total.order}")]
    for number, table in enumerate(jder.generators(), start=1):
        try:
            decompose(table)
            stages.append(StageCheck(f"decompose basis table {number}", True))
        except (StageError, NotJordanError) as e:
            logger.warning(f"Basis table {number} of JDer({r.label}) failed to decompose: {e}")
            stages.append(StageCheck(f"decompose basis table {number}", False, str(e)))

    holds = all(s.ok for s in stages)
    index = Fraction(jder.order, total.order)
    logger.info(f"Theorem check on {r.label}: orders {orders}, holds = {holds}.")
    return TheoremVerdict(r.label, orders, holds, str(index), tuple(stages))
