#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from pathlib import Path
from setuptools import setup

from config.app_config import APP_DEFINITIONS

ROOT = Path(__file__).resolve().parent

requirements = [line.strip() for line in (ROOT / "requirements.txt").read_text().splitlines()
                if line.strip() and not line.startswith(("pytest", "hypothesis"))]

setup(name="carpet-jder",
      version=APP_DEFINITIONS["version"],
      description=APP_DEFINITIONS["description"],
      author=APP_DEFINITIONS["author"],
      author_email=APP_DEFINITIONS["email"],
      url=APP_DEFINITIONS["website"],
      license="GPL-3.0-or-later",
      packages=["core", "cli", "config", "utils"],
      py_modules=["main"],
      install_requires=requirements,
      extras_require={"test": ["pytest", "hypothesis"]},
      python_requires=">=3.10",
      entry_points={"console_scripts": [f"{APP_DEFINITIONS['command']} = main:main"]},
      data_files=[("fixtures", [str(p.relative_to(ROOT)) for p in sorted((ROOT / "fixtures").glob("*.cfg"))])],
      )
