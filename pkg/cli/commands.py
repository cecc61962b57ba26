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

"""Command dispatch. Each command fills a Report and returns an exit code.

Exit codes: 0 when the verdict holds, 1 for a mathematical failure (a
counterexample, a violated identity, a stage that could not conclude), 2 for
usage problems, exceeded bounds and unmet preconditions.
"""

import logging
import time
from pathlib import Path

import numpy as np

from config.app_config import DEFAULTS
from core.exact_linalg import BoundsExceeded
from core.ring_core import annihilator, is_two_torsion_free
from core.matrix_ring import ann_R, ann_formula, from_coordinates
from core.derivation_table import verify_jordan, verify_derivation
from core import constructions as cons
from core.classify import (TorsionError, NotJordanError, StageError, solve_jordan_group, solve_derivation_group,
                           decompose_any, theorem_check)
from cli.session_io import (ConfigError, Session, SessionConfig, parse_config, build_session, parse_matrix_literal,
                            parse_element_list, config_text)
from cli.reports import Report, error_dict
from utils.file_io import read_config_file
from utils.paths import list_fixture_files

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def run(config: SessionConfig, command: str = None) -> tuple:
    """
    Build the session of ``config`` and run ``command`` on it.

    :param command: Overrides the command named in the [run] section.
    :return: (exit code, Report)
    """
    command = command or config.command
    report = Report(command)
    if command not in COMMANDS:
        report.error = {"type": "ConfigError", "message": f"Unknown command '{command}'.", "witness": None}
        return EXIT_USAGE, report
    start = time.perf_counter()
    try:
        session = build_session(config)
        report.ring = session.r.label
        code = COMMANDS[command](session, report)
    except (NotJordanError, StageError) as e:
        logger.warning(f"{command} failed: {e}")
        report.verdict = False
        report.error = error_dict(e)
        code = EXIT_FAILED
    except (ValueError, IndexError, KeyError, BoundsExceeded, FileNotFoundError) as e:
        # ConfigError, TorsionError and PatternViolation are ValueErrors; KeyError is an unknown family or map
        logger.warning(f"{command} stopped: {e}")
        report.error = error_dict(e)
        code = EXIT_USAGE
    logger.info(f"{command} finished with exit code {code} in {time.perf_counter() - start:.2f} s.")
    return code, report


def _pick_table(session: Session):
    config = session.config
    name = config.option("table")
    if name is None:
        if len(session.tables) != 1:
            raise ConfigError("Name the table to use with 'table = NAME' in [run].", config.run.line or None)
        name = next(iter(session.tables))
    return session.tables[name]


def _counterexample(check) -> dict:
    return {"u": check.u, "v": check.v, "lhs": check.lhs, "rhs": check.rhs}


def _check_torsion(session: Session) -> None:
    torsion = is_two_torsion_free(session.k)
    if not torsion:
        raise TorsionError(f"{session.k.label} is not 2-torsion free: 2 * {torsion.witness} = 0.", torsion.witness)


# ---- Commands ----

def cmd_verify(session: Session, report: Report) -> int:
    d = _pick_table(session)
    jordan = verify_jordan(d)
    leibniz = verify_derivation(d)
    report.verdict = jordan.ok
    report.stage("jordan identity", jordan.ok, "" if jordan else str(jordan))
    report.details = {"table": d.label,
                      "jordan": jordan.ok,
                      "derivation": leibniz.ok,
                      "proper": jordan.ok and not leibniz.ok,
                      }
    if not jordan:
        report.details["counterexample"] = _counterexample(jordan)
    elif not leibniz:
        report.details["leibniz_counterexample"] = _counterexample(leibniz)
    return EXIT_OK if jordan else EXIT_FAILED


def cmd_solve(session: Session, report: Report) -> int:
    config = session.config
    jder = solve_jordan_group(session.r, config.max_unknowns, config.max_equations)
    der = solve_derivation_group(session.r, config.max_unknowns, config.max_equations)
    report.verdict = True
    report.orders = {"jder": jder.order, "der": der.order}
    report.details = {"jder_generators": [{"index": i, "images": d} for i, d in enumerate(jder.generators(), 1)],
                      "der_generators": [{"index": i, "images": d} for i, d in enumerate(der.generators(), 1)],
                      }
    return EXIT_OK


def cmd_decompose(session: Session, report: Report) -> int:
    d = _pick_table(session)
    result = decompose_any(d)
    report.verdict = result.reconstruction_ok
    for s in result.stage_checks:
        report.stage(s.stage, s.ok, s.detail)
    data = result.to_dict()
    report.details = {"table": d.label, "components": data["components"], "discrepancies": data["discrepancies"]}
    return EXIT_OK if result.reconstruction_ok else EXIT_FAILED


def cmd_theorem_check(session: Session, report: Report) -> int:
    config = session.config
    verdict = theorem_check(session.r, config.max_unknowns, config.max_equations)
    report.verdict = verdict.holds
    report.orders = dict(verdict.orders)
    for s in verdict.stages:
        report.stage(s.stage, s.ok, s.detail)
    report.details = {"index": verdict.index}
    return EXIT_OK if verdict else EXIT_FAILED


def cmd_annihilator(session: Session, report: Report) -> int:
    r = session.r
    found, formula = ann_R(r), ann_formula(r)
    report.verdict = found == formula
    report.orders = {"ann_r": found.order, "formula": formula.order}
    report.stage("ann_R = (Ann_K J) e_n,1", report.verdict)
    report.details = {"ann_k_j": annihilator(r.j).basis_elements,
                      "generators": [from_coordinates(r, g) for g in found.generators()],
                      }
    return EXIT_OK if report.verdict else EXIT_FAILED


_FAMILIES = {
    # family: (parameter record, number of maps or None for n, validator, builder)
    "extremal": (cons.ExtremalParams, 3, cons.validate_extremal, cons.build_extremal),
    "a2": (cons.A2Params, 2, cons.validate_a2, cons.build_a2),
    "a3": (cons.A3Params, 8, cons.validate_a3, cons.build_a3),
    "annihilator": (lambda *maps: cons.AnnihilatorParams(tuple(maps)), None, cons.validate_annihilator,
                    cons.build_annihilator),
    "ring": (cons.RingDerivParams, 1, cons.validate_ring, cons.build_ring),
    "almost": (cons.AlmostAnnihilatorParams, 3, cons.validate_almost, cons.build_almost_annihilator),
}


def _build_table(session: Session, report: Report):
    "(ConditionCheck or None, table or None) for the family named in [run]."
    config, r = session.config, session.r
    run_section = config.run
    family = config.option("family")
    if family is None:
        raise ConfigError("build needs 'family = NAME' in [run].", run_section.line or None)
    report.details["family"] = family
    if family == "inner":
        matrix = run_section.require("matrix")
        grid = parse_matrix_literal(matrix.value, r.n, matrix.line, matrix.column)
        return None, cons.build_inner(r.element(grid))
    if family == "diagonal":
        diagonal = run_section.require("diagonal")
        return None, cons.build_diagonal(r, parse_element_list(diagonal.value, diagonal.line, diagonal.column))

    make_params, count, validator, builder = _FAMILIES[family]
    params_entry = run_section.require("params")
    maps = [session.maps[name.strip()] for name in params_entry.value.split(",")]
    count = r.n if count is None else count
    if len(maps) != count:
        raise ConfigError(f"Family {family} takes {count} maps, got {len(maps)}.",
                          params_entry.line, params_entry.column)
    params = make_params(*maps)
    report.details["parameters"] = params.maps()
    check = validator(params, r.j) if family == "ring" else validator(params)
    if not check:
        return check, None
    try:
        return check, builder(r, params)
    except cons.InvalidParameters as e:
        return e.check, None


def cmd_build(session: Session, report: Report) -> int:
    check, d = _build_table(session, report)
    if check is not None:
        report.stage("parameter conditions", check.ok, "" if check else str(check))
        if not check:
            report.verdict = False
            report.details["violation"] = check.to_dict()
            return EXIT_FAILED
    name = session.config.option("name", "D")
    jordan = verify_jordan(d)
    report.stage("jordan identity", jordan.ok, "" if jordan else str(jordan))
    report.verdict = jordan.ok
    report.details["derivation"] = verify_derivation(d).ok
    report.details["table"] = d
    report.attachment = config_text(session, {name: d}, command="verify")
    return EXIT_OK if jordan else EXIT_FAILED


def cmd_property_test(session: Session, report: Report) -> int:
    config, r = session.config, session.r
    if r.n < 3:
        raise ValueError(f"property-test decomposes Jordan derivations and needs n >= 3, got n = {r.n}.")
    _check_torsion(session)
    samples = int(config.option("samples", DEFAULTS["property_samples"]))
    rng = np.random.default_rng(config.seed)
    jder = solve_jordan_group(r, config.max_unknowns, config.max_equations)
    for number in range(1, samples + 1):
        d = jder.random_element(rng)
        try:
            result = decompose_any(d)
            report.stage(f"sample {number}", result.reconstruction_ok, "; ".join(result.discrepancies))
        except StageError as e:
            logger.warning(f"Sample {number} failed to decompose: {e}")
            report.stage(f"sample {number}", False, str(e))
    report.verdict = all(s["ok"] for s in report.stages)
    report.orders = {"jder": jder.order}
    report.details = {"seed": config.seed, "samples": samples}
    return EXIT_OK if report.verdict else EXIT_FAILED


COMMANDS = {"verify": cmd_verify,
            "solve": cmd_solve,
            "decompose": cmd_decompose,
            "theorem-check": cmd_theorem_check,
            "build": cmd_build,
            "annihilator": cmd_annihilator,
            "property-test": cmd_property_test,
            }


def run_fixtures(folder: Path = None) -> tuple:
    """
    Run every fixture file and compare its exit code with its 'expect' key.

    :param folder: Directory of .cfg files. The bundled fixtures when None.
    :return: (exit code, Report)
    """
    files = sorted(Path(folder).glob("*.cfg")) if folder is not None else list_fixture_files()
    report = Report("fixtures")
    if not files:
        report.error = {"type": "FileNotFoundError", "message": f"No fixture files in {folder}.", "witness": None}
        return EXIT_USAGE, report
    for path in files:
        entry = {"command": None, "exit": EXIT_USAGE, "expected": EXIT_OK, "verdict": None}
        try:
            config = parse_config(read_config_file(path))
            entry["command"] = config.command
            entry["expected"] = int(config.option("expect", EXIT_OK))
            entry["exit"], sub = run(config)
            entry["verdict"] = sub.verdict
        except ConfigError as e:
            logger.warning(f"Fixture {path.name}: {e}")
        ok = entry["exit"] == entry["expected"]
        report.stage(path.stem, ok, f"exit {entry['exit']}, expected {entry['expected']}")
        report.details[path.stem] = entry
    report.verdict = all(s["ok"] for s in report.stages)
    return (EXIT_OK if report.verdict else EXIT_FAILED), report
