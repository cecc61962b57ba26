import logging

APP_DEFINITIONS = {"app_name": "Carpet JDer",
                   "command": "carpet-jder",
                   "version": "0.1.0",
                   "description": "Jordan derivations of structural matrix rings over finite rings",
                   "copyright": "Copyright (C) 2026 Kerem Basaran",
                   "author": "Kerem Basaran",
                   "author_short": "kbasaran",
                   "email": "kbasaran@gmail.com",
                   "website": "https://github.com/kbasaran",
                   }
# uncomment for release candidate builds
# APP_DEFINITIONS["version"] += "rc" + time.strftime("%y%m%d", time.localtime())

DEFAULTS = {
    "app_name": APP_DEFINITIONS["app_name"],
    "version": APP_DEFINITIONS["version"],
    "output_format": "text",
    "max_unknowns": 5000,  # flattened generator-image coordinates
    "max_equations": 1_000_000,
    "max_maps": 1_000_000,  # enumerate_additive_maps and brute-force oracles
    "max_group_order": 2**63,  # additive groups of rings
    "howell_chunk_rows": 2048,  # equation rows merged into a running Howell form at once
    "pairs_per_block": 64,  # generator pairs assembled into one block of solver equations
    "property_samples": 5,
    "seed": 0,
    "fixtures_folder": "fixtures",
}


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    logger = logging.getLogger()
    for key, val in DEFAULTS.items():
        logger.info(f"{key}: {val}")

else:
    logger = logging.getLogger(__name__)
