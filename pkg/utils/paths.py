import sys
from pathlib import Path

from config.app_config import DEFAULTS


def get_main_dir():
    if getattr(sys, 'frozen', False):
        # The application is frozen
        return Path(sys.executable).parent
    else:
        # Go up one level from utils/ to reach the project root
        return Path(__file__).parent.parent


def get_fixtures_dir() -> Path:
    return get_main_dir() / DEFAULTS["fixtures_folder"]


def list_fixture_files() -> list:
    "Bundled fixture files in a fixed order."
    return sorted(get_fixtures_dir().glob("*.cfg"))
