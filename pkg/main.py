# Carpet JDer - Jordan derivations of structural matrix rings
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

import sys
import time

import logging
from pathlib import Path

import utils.file_io as fio

from config.app_config import APP_DEFINITIONS
from cli.session_io import ConfigError, COMMANDS, FORMATS, parse_config
from cli.commands import EXIT_USAGE, run, run_fixtures
from cli.reports import Report, error_dict, render


def parse_args(APP_DEFINITIONS, argv=None):
    import argparse

    description = (
        f"{APP_DEFINITIONS['app_name']} - {APP_DEFINITIONS['copyright']}"
        "\nThis program comes with ABSOLUTELY NO WARRANTY"
        "\nThis is free software, and you are welcome to redistribute it"
        "\nunder certain conditions. See LICENSE file for more details."
    )

    parser = argparse.ArgumentParser(prog=APP_DEFINITIONS["command"],
                                     description=description,
                                     epilog=APP_DEFINITIONS['website'],
                                     )
    parser.add_argument('command', choices=COMMANDS,
                        help="What to run on the input file.")
    parser.add_argument('-i', '--input', type=Path,
                        help="Path to a '*.cfg' input file. For 'fixtures', an optional folder of them.")
    parser.add_argument('-f', '--format', choices=FORMATS,
                        help="Report format. Overrides the input file.")
    parser.add_argument('--max-unknowns', type=int,
                        help="Solver bound on flattened unknowns.")
    parser.add_argument('--max-equations', type=int,
                        help="Solver bound on equation rows.")
    parser.add_argument('--seed', type=int,
                        help="Random seed of property-test.")
    parser.add_argument('-o', '--output', type=Path,
                        help="Write the report to this file instead of standard output.")
    parser.add_argument('-d', '--loglevel', nargs="?",
                        choices=["debug", "info", "warning", "error", "critical"],
                        help="Set logging level for Python logging. Valid values are debug, info, warning, error and critical.")

    args = parser.parse_args(argv)
    if args.command != "fixtures" and args.input is None:
        parser.error(f"the command '{args.command}' needs --input")
    return args


def setup_logging(level: str="warning", args=None):
    if args and args.loglevel:
        log_level = getattr(logging, args.loglevel.upper())
    else:
        log_level = level.upper()

    log_filename = Path.home().joinpath(".carpet_jder.log")

    file_handler = logging.FileHandler(filename=log_filename)
    stderr_handler = logging.StreamHandler(stream=sys.stderr)  # stdout carries the report
    handlers = [file_handler, stderr_handler]

    logging.basicConfig(handlers=handlers,
                        level=log_level,
                        format="%(asctime)s %(levelname)s - %(funcName)s: %(message)s",
                        force=True,
                        )
    logger = logging.getLogger()
    logger.info(f"{time.strftime('%c')} - Started logging with log level {log_level}.")

    return logger


def execute(args) -> tuple:
    "(exit code, rendered report) for parsed arguments."
    output_format = args.format or "text"
    if args.command == "fixtures":
        code, report = run_fixtures(args.input)
        return code, render(report, output_format)

    try:
        config = parse_config(fio.read_config_file(args.input))
    except (ConfigError, FileNotFoundError) as e:
        report = Report(args.command)
        report.error = error_dict(e)
        return EXIT_USAGE, render(report, output_format)

    for key in ("max_unknowns", "max_equations", "seed"):
        if getattr(args, key) is not None:
            setattr(config, key, getattr(args, key))
    output_format = args.format or config.output_format
    code, report = run(config, args.command)
    return code, render(report, output_format)


def main(argv=None):
    args = parse_args(APP_DEFINITIONS, argv)
    logger = setup_logging(args=args)

    code, text = execute(args)
    if args.output:
        fio.write_report(text, args.output)
    else:
        sys.stdout.write(text)
    logger.debug(f"Exit code {code}.")
    return code


if __name__ == "__main__":
    sys.exit(main())
