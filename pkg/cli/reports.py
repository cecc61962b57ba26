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

"""Text and JSON rendering of command reports.

Every report carries the same top-level keys in the same order, so that one
input file always gives the same bytes.
"""

import dataclasses as dtc
import json
import logging

from core.ring_core import RingElement, AdditiveMapKK
from core.matrix_ring import MatrixElement
from core.derivation_table import DerivationTable, IdentityCheck
from core.constructions import ConditionCheck
from cli.session_io import element_literal, matrix_literal

logger = logging.getLogger(__name__)

INDENT = 4


@dtc.dataclass
class Report:
    command: str
    ring: str = None
    verdict: bool = None
    orders: dict = dtc.field(default_factory=dict)
    stages: list = dtc.field(default_factory=list)
    details: dict = dtc.field(default_factory=dict)
    error: dict = None
    attachment: str = None  # input file text written by build

    def stage(self, name: str, ok: bool, detail: str = "") -> None:
        self.stages.append({"stage": name, "ok": bool(ok), "detail": detail})

    def to_dict(self) -> dict:
        out = {"command": self.command,
               "ring": self.ring,
               "verdict": self.verdict,
               "orders": self.orders,
               "stages": self.stages,
               "details": self.details if self.attachment is None else {**self.details, "input_file": self.attachment},
               }
        if self.error is not None:
            out["error"] = self.error
        return to_plain(out)


def error_dict(e: Exception) -> dict:
    witness = getattr(e, "witness", None)
    check = getattr(e, "check", None)
    if witness is None and isinstance(check, IdentityCheck):
        witness = {"u": check.u, "v": check.v}
    elif witness is None and isinstance(check, ConditionCheck):
        witness = {name: value for name, value in check.witnesses}
    return {"type": type(e).__name__, "message": str(e), "witness": to_plain(witness)}


def to_plain(value):
    "JSON-ready copy of a report value. Ring and matrix elements become literals."
    if isinstance(value, RingElement):
        return element_literal(value)
    if isinstance(value, MatrixElement):
        return matrix_literal(value)
    if isinstance(value, DerivationTable):
        return [{"generator": str(g), "image": matrix_literal(image)}
                for g, image in zip(value.parent.generators, value.images) if not image.is_zero()]
    if isinstance(value, AdditiveMapKK):
        return [[element_literal(b), element_literal(v)] for b, v in zip(value.domain.basis_elements, value.images)]
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if hasattr(value, "to_dict"):
        return to_plain(value.to_dict())
    return str(value)


def render_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=INDENT) + "\n"


def _text_lines(value, depth: int) -> list:
    pad = " " * INDENT * depth
    if isinstance(value, dict):
        lines = []
        for key, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{key}:")
                lines += _text_lines(v, depth + 1)
            else:
                lines.append(f"{pad}{key}: {_scalar(v)}")
        return lines
    if isinstance(value, list):
        lines = []
        for v in value:
            if isinstance(v, (dict, list)) and v:
                sub = _text_lines(v, depth + 1)
                lines.append(f"{pad}- {sub[0].strip()}")
                lines += sub[1:]
            else:
                lines.append(f"{pad}- {_scalar(v)}")
        return lines
    return [f"{pad}{_scalar(value)}"]


def _scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    if isinstance(value, (dict, list)):
        return "none"
    return str(value)


def render_text(report: Report) -> str:
    data = report.to_dict()
    if report.attachment is not None:
        # build: a re-readable input file, with the summary as comments
        header = [f"command: {data['command']}", f"ring: {_scalar(data['ring'])}", f"verdict: {_scalar(data['verdict'])}"]
        header += [f"[{'ok' if s['ok'] else 'FAILED'}] {s['stage']}" for s in data["stages"]]
        return "".join(f"# {line}\n" for line in header) + "\n" + report.attachment
    lines = [f"command: {data['command']}",
             f"ring: {_scalar(data['ring'])}",
             f"verdict: {_scalar(data['verdict'])}",
             ]
    if data["orders"]:
        lines.append("orders:")
        lines += _text_lines(data["orders"], 1)
    if data["stages"]:
        lines.append("stages:")
        for s in data["stages"]:
            mark = "ok" if s["ok"] else "FAILED"
            lines.append(f"    [{mark}] {s['stage']}" + (f": {s['detail']}" if s["detail"] else ""))
    if data["details"]:
        lines.append("details:")
        lines += _text_lines(data["details"], 1)
    if "error" in data:
        e = data["error"]
        lines.append(f"error: {e['type']}: {e['message']}")
        if isinstance(e["witness"], dict):
            lines.append("    witness:")
            lines += _text_lines(e["witness"], 2)
        elif e["witness"] is not None:
            lines.append(f"    witness: {_scalar(e['witness'])}")
    return "\n".join(lines) + "\n"


def render(report: Report, output_format: str) -> str:
    return render_json(report) if output_format == "json" else render_text(report)
