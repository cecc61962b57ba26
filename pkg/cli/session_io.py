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

"""Reading of Carpet JDer input files (.cfg) into sessions of rings, maps and tables.

The format is line oriented. A ``#`` starts a comment. Sections are headed by
``[ring]``, ``[ideal]``, ``[matrix_ring]``, ``[map NAME]``, ``[table NAME]``
and ``[run]``. Inside a section each line is either ``key = value`` or, in map
and table sections, ``lhs -> rhs``:

    [ring]
    construct = product(zmod(9), zmod(9))

    [ideal]
    generators = (3,0), (0,3)

    [matrix_ring]
    n = 4

    [map alpha]
    (3,0) -> (3,0)

    [table D]
    gen (1,4) (3,0) -> 0, 0, 0, 0; 0, 0, 0, 0; (3,0), 0, 0, 0; 0, 0, 0, 0

    [run]
    command = verify
    table = D

An element literal is an integer (that multiple of the unit) or a tuple of
coordinates. A matrix literal lists rows separated by ``;`` with entries
separated by ``,``; a single ``0`` is the zero matrix.
"""

import dataclasses as dtc
import logging
import re

from config.app_config import DEFAULTS
from core.ring_core import FiniteRing, AdditiveMapKK, make_ring, make_zmod, make_product, ideal_closure, whole_ideal
from core.matrix_ring import StructuralMatrixRing, MatrixElement, elementary
from core.derivation_table import DerivationTable

logger = logging.getLogger(__name__)

FILE_SUFFIX = ".cfg"
COMMANDS = ("verify", "solve", "decompose", "theorem-check", "build", "annihilator", "property-test", "fixtures")
FORMATS = ("text", "json")
SECTIONS = ("ring", "ideal", "matrix_ring", "map", "table", "run")
FAMILIES = ("extremal", "a2", "a3", "inner", "diagonal", "annihilator", "ring", "almost")


class ConfigError(ValueError):
    "Input file problem, located by line and column when known."

    def __init__(self, message: str, line: int = None, column: int = None):
        location = "" if line is None else f"line {line}" + ("" if column is None else f", column {column}") + ": "
        super().__init__(location + message)
        self.line = line
        self.column = column


@dtc.dataclass(frozen=True)
class Entry:
    line: int
    column: int  # of the value
    key: str
    value: str


@dtc.dataclass
class Section:
    kind: str
    name: str
    line: int
    entries: list = dtc.field(default_factory=list)

    def get(self, key: str) -> Entry:
        for entry in self.entries:
            if entry.key == key:
                return entry
        return None

    def require(self, key: str) -> Entry:
        entry = self.get(key)
        if entry is None:
            raise ConfigError(f"Section [{self.kind}] needs a '{key}' key.", self.line)
        return entry


@dtc.dataclass
class SessionConfig:
    ring: Section
    ideal: Section
    n: int
    maps: dict  # name -> Section
    tables: dict  # name -> Section
    run: Section
    command: str = None
    output_format: str = DEFAULTS["output_format"]
    max_unknowns: int = DEFAULTS["max_unknowns"]
    max_equations: int = DEFAULTS["max_equations"]
    seed: int = DEFAULTS["seed"]

    def option(self, key: str, default=None) -> str:
        entry = self.run.get(key)
        return default if entry is None else entry.value


@dtc.dataclass
class Session:
    "A built config: the ring R_n(K, J) with its named maps and tables."
    config: SessionConfig
    k: FiniteRing
    r: StructuralMatrixRing
    maps: dict
    tables: dict


# ---- Literals ----

_INT = re.compile(r"\s*(-?\d+)\s*$")
_TUPLE = re.compile(r"\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*$")


def parse_element_literal(text: str, line: int = None, column: int = None):
    "int, or a tuple of ints for a coordinate literal."
    m = _INT.match(text)
    if m:
        return int(m.group(1))
    m = _TUPLE.match(text)
    if m:
        return tuple(int(v) for v in m.group(1).split(","))
    raise ConfigError(f"Malformed element literal '{text.strip()}'.", line, column)


def split_top(text: str, sep: str) -> list:
    "Split at separators outside parentheses."
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def parse_element_list(text: str, line: int = None, column: int = None) -> list:
    if not text.strip():
        return []
    return [parse_element_literal(part, line, column) for part in split_top(text, ",")]


def parse_matrix_literal(text: str, n: int, line: int = None, column: int = None) -> list:
    "n x n grid of element literals."
    if text.strip() == "0":
        return [[0] * n for _ in range(n)]
    rows = [parse_element_list(row, line, column) for row in text.split(";")]
    if len(rows) != n or any(len(row) != n for row in rows):
        raise ConfigError(f"Matrix literal must have {n} rows of {n} entries.", line, column)
    return rows


def element_literal(x) -> str:
    "Inverse of parse_element_literal for elements of ``x.parent``."
    k = x.parent
    coords = x.coords
    if k.rank == 1 and k.unit == (1,):
        return str(coords[0])
    return "(" + ",".join(str(c) for c in coords) + ")"


def matrix_literal(x: MatrixElement) -> str:
    if x.is_zero():
        return "0"
    return "; ".join(", ".join(element_literal(v) for v in row) for row in x.entries)


# ---- Ring expressions ----

_TOKEN = re.compile(r"\s*(zmod|product|table|\(|\)|,|-?\d+)")


def _tokens(text: str, line: int, column: int) -> list:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ConfigError(f"Unexpected text '{text[pos:].strip()}' in ring expression.", line, column + pos)
        out.append((m.group(1), column + m.start(1)))
        pos = m.end()
    return out


def parse_ring_expression(text: str, line: int = None, column: int = 1) -> tuple:
    """
    ``zmod(M)``, ``product(EXPR, EXPR)`` or ``table``.

    :return: ("zmod", M), ("product", left, right) or ("table",).
    """
    tokens = _tokens(text, line, column)
    pos = 0

    def expect(value):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos][0] != value:
            found, col = tokens[pos] if pos < len(tokens) else ("end of line", column + len(text))
            raise ConfigError(f"Expected '{value}' in ring expression, found '{found}'.", line, col)
        pos += 1

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            raise ConfigError("Ring expression is incomplete.", line, column + len(text))
        word, col = tokens[pos]
        pos += 1
        if word == "table":
            return ("table",)
        if word == "zmod":
            expect("(")
            if pos >= len(tokens) or not tokens[pos][0].lstrip("-").isdigit():
                raise ConfigError("zmod needs an integer modulus.", line, col)
            m = int(tokens[pos][0])
            pos += 1
            expect(")")
            return ("zmod", m)
        if word == "product":
            expect("(")
            left = expr()
            expect(",")
            right = expr()
            expect(")")
            return ("product", left, right)
        raise ConfigError(f"Unknown ring constructor '{word}'.", line, col)

    tree = expr()
    if pos != len(tokens):
        raise ConfigError(f"Unexpected '{tokens[pos][0]}' after ring expression.", line, tokens[pos][1])
    return tree


# ---- Parsing ----

_HEADER = re.compile(r"\[\s*([a-z_]+)(?:\s+([A-Za-z_][\w-]*))?\s*\]$")
_MUL_KEY = re.compile(r"mul\(\s*(\d+)\s*,\s*(\d+)\s*\)$")
_GEN = re.compile(r"gen\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*(.+)$")


def _read_sections(text: str) -> list:
    sections = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        if not content.strip():
            continue
        stripped = content.strip()
        indent = len(content) - len(content.lstrip())
        if stripped.startswith("["):
            m = _HEADER.match(stripped)
            if not m or m.group(1) not in SECTIONS:
                raise ConfigError(f"Unknown section header '{stripped}'.", number, indent + 1)
            kind, name = m.group(1), m.group(2)
            if kind in ("map", "table") and not name:
                raise ConfigError(f"Section [{kind}] needs a name.", number, indent + 1)
            sections.append(Section(kind, name or "", number))
            continue
        if not sections:
            raise ConfigError("Content before the first section header.", number, indent + 1)
        for sep in ("->", "="):
            at = content.find(sep)
            if at >= 0:
                key = content[:at].strip()
                value = content[at + len(sep):]
                column = at + len(sep) + 1 + (len(value) - len(value.lstrip()))
                sections[-1].entries.append(Entry(number, column, key if sep == "=" else f"{key} ->", value.strip()))
                break
        else:
            raise ConfigError(f"Expected 'key = value' or 'element -> image', got '{stripped}'.", number, indent + 1)
    return sections


def _int_option(entry: Entry, minimum: int = 0) -> int:
    try:
        value = int(entry.value)
    except ValueError:
        raise ConfigError(f"'{entry.key}' needs an integer, got '{entry.value}'.", entry.line, entry.column)
    if value < minimum:
        raise ConfigError(f"'{entry.key}' must be at least {minimum}.", entry.line, entry.column)
    return value


def parse_config(text: str) -> SessionConfig:
    """
    Parse and cross-check an input file.

    Literals are checked for syntax here. Whether they are elements of the
    ring is checked by build_session.

    :raises ConfigError: At the first problem found.
    """
    sections = _read_sections(text)
    single = {}
    maps, tables = {}, {}
    for s in sections:
        if s.kind == "map":
            target = maps
        elif s.kind == "table":
            target = tables
        else:
            if s.kind in single:
                raise ConfigError(f"Section [{s.kind}] appears twice.", s.line)
            single[s.kind] = s
            continue
        if s.name in target:
            raise ConfigError(f"Section [{s.kind} {s.name}] appears twice.", s.line)
        target[s.name] = s

    for kind in ("ring", "matrix_ring"):
        if kind not in single:
            raise ConfigError(f"Missing section [{kind}].", 1)
    ring = single["ring"]
    construct = ring.require("construct")
    tree = parse_ring_expression(construct.value, construct.line, construct.column)
    if tree == ("table",):
        ring.require("moduli")
        ring.require("unit")
    for entry in ring.entries:
        if _MUL_KEY.match(entry.key):
            parse_element_literal(entry.value, entry.line, entry.column)

    ideal = single.get("ideal", Section("ideal", "", 0, [Entry(0, 0, "generators", "")]))
    gens = ideal.require("generators")
    parse_element_list(gens.value, gens.line, gens.column)

    n = _int_option(single["matrix_ring"].require("n"), minimum=2)

    for name, s in maps.items():
        domain = s.get("domain")
        if domain is not None and domain.value not in ("J", "K"):
            raise ConfigError(f"Map domain must be J or K, got '{domain.value}'.", domain.line, domain.column)
        for entry in s.entries:
            if entry.key.endswith("->"):
                parse_element_literal(entry.key[:-2], entry.line, 1)
                parse_element_literal(entry.value, entry.line, entry.column)
            elif entry.key != "domain":
                raise ConfigError(f"Unknown key '{entry.key}' in [map {name}].", entry.line)
    for name, s in tables.items():
        for entry in s.entries:
            m = _GEN.match(entry.key[:-2].strip()) if entry.key.endswith("->") else None
            if not m:
                raise ConfigError(f"Table lines read 'gen (i,j) ELT -> MATRIX', got '{entry.key}'.", entry.line, 1)
            i, j = int(m.group(1)), int(m.group(2))
            if not (1 <= i <= n and 1 <= j <= n):
                raise ConfigError(f"Position ({i},{j}) is outside a {n}x{n} matrix.", entry.line, 1)
            parse_element_literal(m.group(3), entry.line, 1)
            parse_matrix_literal(entry.value, n, entry.line, entry.column)

    run = single.get("run", Section("run", "", 0))
    config = SessionConfig(ring, ideal, n, maps, tables, run)
    _resolve_run(config)
    return config


def _resolve_run(config: SessionConfig) -> None:
    run = config.run
    for entry in run.entries:
        if entry.key == "command":
            if entry.value not in COMMANDS:
                raise ConfigError(f"Unknown command '{entry.value}'.", entry.line, entry.column)
            config.command = entry.value
        elif entry.key == "format":
            if entry.value not in FORMATS:
                raise ConfigError(f"Unknown output format '{entry.value}'.", entry.line, entry.column)
            config.output_format = entry.value
        elif entry.key in ("max_unknowns", "max_equations", "seed", "samples", "expect"):
            value = _int_option(entry)
            if hasattr(config, entry.key):
                setattr(config, entry.key, value)
        elif entry.key == "table":
            if entry.value not in config.tables:
                raise ConfigError(f"No [table {entry.value}] section.", entry.line, entry.column)
        elif entry.key == "params":
            for name in (v.strip() for v in entry.value.split(",")):
                if name not in config.maps:
                    raise ConfigError(f"No [map {name}] section.", entry.line, entry.column)
        elif entry.key == "family":
            if entry.value not in FAMILIES:
                raise ConfigError(f"Unknown derivation family '{entry.value}'.", entry.line, entry.column)
        elif entry.key == "matrix":
            parse_matrix_literal(entry.value, config.n, entry.line, entry.column)
        elif entry.key == "diagonal":
            parse_element_list(entry.value, entry.line, entry.column)
        elif entry.key != "name":
            raise ConfigError(f"Unknown key '{entry.key}' in [run].", entry.line)


# ---- Building ----

def _located(entry: Entry, fn, *args):
    "Call fn, turning value errors into ConfigErrors at ``entry``."
    try:
        return fn(*args)
    except (ValueError, IndexError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e), entry.line, entry.column)


def _table_ring(section: Section) -> FiniteRing:
    moduli_entry = section.require("moduli")
    moduli = parse_element_list(moduli_entry.value, moduli_entry.line, moduli_entry.column)
    if not moduli or any(not isinstance(m, int) or m < 1 for m in moduli):
        raise ConfigError("moduli must be a list of positive integers.", moduli_entry.line, moduli_entry.column)
    k = len(moduli)
    unit_entry = section.require("unit")
    unit = parse_element_literal(unit_entry.value, unit_entry.line, unit_entry.column)
    unit = (unit,) if isinstance(unit, int) else unit
    sc = [[(0,) * k for _ in range(k)] for _ in range(k)]
    for entry in section.entries:
        m = _MUL_KEY.match(entry.key)
        if not m:
            continue
        i, j = int(m.group(1)), int(m.group(2))
        if not (1 <= i <= k and 1 <= j <= k):
            raise ConfigError(f"{entry.key} names a generator outside 1..{k}.", entry.line, 1)
        value = parse_element_literal(entry.value, entry.line, entry.column)
        value = (value,) if isinstance(value, int) else value
        if len(value) != k:
            raise ConfigError(f"{entry.key} needs {k} coordinates.", entry.line, entry.column)
        sc[i - 1][j - 1] = value
    label = section.get("label")
    return _located(unit_entry, make_ring, tuple(moduli), sc, unit, label.value if label else "K")


def _ring_from_tree(tree: tuple, section: Section) -> FiniteRing:
    if tree[0] == "zmod":
        return make_zmod(tree[1])
    if tree[0] == "product":
        return make_product(_ring_from_tree(tree[1], section), _ring_from_tree(tree[2], section))
    return _table_ring(section)


def build_ring(config: SessionConfig) -> FiniteRing:
    construct = config.ring.require("construct")
    tree = parse_ring_expression(construct.value, construct.line, construct.column)
    k = _located(construct, _ring_from_tree, tree, config.ring)
    label = config.ring.get("label")
    if label is not None and tree != ("table",):
        k = dtc.replace(k, label=label.value)
    return k


def _map_from_section(k: FiniteRing, j, section: Section) -> AdditiveMapKK:
    domain_entry = section.get("domain")
    domain = whole_ideal(k) if domain_entry is not None and domain_entry.value == "K" else j
    pairs = []
    for entry in section.entries:
        if entry.key.endswith("->"):
            x = _located(entry, k.element, parse_element_literal(entry.key[:-2], entry.line, 1))
            v = _located(entry, k.element, parse_element_literal(entry.value, entry.line, entry.column))
            pairs.append((x, v))
    first = section.entries[0] if section.entries else Entry(section.line, 1, "", "")
    return _located(first, AdditiveMapKK.from_pairs, domain, whole_ideal(k), pairs, section.name)


def _table_from_section(r: StructuralMatrixRing, section: Section) -> DerivationTable:
    pairs, mentioned = [], set()
    for entry in section.entries:
        m = _GEN.match(entry.key[:-2].strip())
        i, j = int(m.group(1)), int(m.group(2))
        x = parse_element_literal(m.group(3), entry.line, 1)
        grid = parse_matrix_literal(entry.value, r.n, entry.line, entry.column)
        pairs.append((_located(entry, elementary, r, x, i, j),
                      _located(entry, lambda: r.element(grid))))
        mentioned.add((i, j))
    # positions without a line map to zero
    for g in r.generators:
        if g.position not in mentioned:
            pairs.append((r.generator_element(g), r.zero()))
    first = section.entries[0] if section.entries else Entry(section.line, 1, "", "")
    return _located(first, DerivationTable.from_pairs, r, pairs, section.name)


def build_session(config: SessionConfig) -> Session:
    """
    Construct K, J, R_n(K, J) and every named map and table.

    :raises ConfigError: When a literal is not an element where it is used or
        a map or table is not determined by its lines.
    """
    k = build_ring(config)
    gens = config.ideal.require("generators")
    j = _located(gens, ideal_closure, k, parse_element_list(gens.value, gens.line, gens.column), "J")
    r = _located(gens, StructuralMatrixRing, config.n, k, j)
    maps = {name: _map_from_section(k, j, s) for name, s in config.maps.items()}
    tables = {name: _table_from_section(r, s) for name, s in config.tables.items()}
    logger.info(f"Built {r.label} of order {r.additive_group.order} with {len(maps)} maps "
                f"and {len(tables)} tables.")
    return Session(config, k, r, maps, tables)


def read_session(text: str) -> Session:
    return build_session(parse_config(text))


# ---- Writing ----

def config_text(session: Session, tables: dict, command: str = "verify") -> str:
    """Input file reproducing the session's ring with ``tables`` in place of its own.

    Generators with a zero image are left out of the table sections.
    """
    config = session.config
    lines = ["[ring]"]
    lines += [f"{e.key} = {e.value}" for e in config.ring.entries]
    lines += ["", "[ideal]", f"generators = {', '.join(element_literal(x) for x in session.r.j.basis_elements)}"]
    lines += ["", "[matrix_ring]", f"n = {session.r.n}"]
    for name, d in tables.items():
        lines += ["", f"[table {name}]"]
        for g, image in zip(session.r.generators, d.images):
            if not image.is_zero():
                i, j = g.position
                lines.append(f"gen ({i},{j}) {element_literal(g.element)} -> {matrix_literal(image)}")
    lines += ["", "[run]", f"command = {command}"]
    if tables:
        lines.append(f"table = {next(iter(tables))}")
    return "\n".join(lines) + "\n"
