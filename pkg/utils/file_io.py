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

import logging
from pathlib import Path

logger = logging.getLogger(__name__)


def read_config_file(config_file: Path) -> str:
    config_file = Path(config_file)
    if not config_file.is_file():
        raise FileNotFoundError(f"Input file not found: {config_file}")
    text = config_file.read_text(encoding="utf-8")
    logger.debug(f"Read {len(text)} characters from {config_file}.")
    return text


def write_report(text: str, report_file: Path) -> None:
    report_file = Path(report_file)
    report_file.parent.mkdir(parents=True, exist_ok=True)
    report_file.write_text(text, encoding="utf-8")
    logger.info(f"Report written to {report_file}.")
