import configparser
import appdirs
import logging

from pathlib import Path

from hypack import settings


LOG = logging.getLogger(__name__)

SECTION = "hypack"

# Options that can be stored, and how to read them back
OPTIONS = {
    "seed": int,
    "tol": float,
    "threads": int,
}


def get_config_dir():
    path = appdirs.user_config_dir(appname="hypack")
    return Path(path)


def get_config_parser():
    config_dir = get_config_dir()
    if not config_dir.is_dir():
        raise IOError("No configuration folder detected, please run hypack config")

    config_ini = config_dir / "config.ini"
    if not config_ini.exists():
        raise IOError("config.ini not found, please run hypack config")

    config_parser = configparser.ConfigParser()
    config_parser.read(config_ini)
    return config_parser


def get_defaults():
    """Stored defaults for seed, tol and threads, falling back to settings."""
    defaults = {
        "seed": settings.DEFAULT_SEED,
        "tol": settings.DEFAULT_TOL,
        "threads": settings.DEFAULT_THREADS,
    }
    try:
        section = get_config_parser()[SECTION]
    except (IOError, KeyError):
        return defaults
    for key, kind in OPTIONS.items():
        if key in section:
            try:
                defaults[key] = kind(section[key])
            except ValueError:
                LOG.warning("Ignoring bad value %r for %s in config.ini", section[key], key)
    return defaults


def write_config_file(**kwargs):
    LOG.info("Starting config module")

    if not kwargs:
        raise IOError("No arguments given")

    config_dir = get_config_dir()

    if not config_dir.is_dir():
        LOG.info("No config directory found, creating %s", config_dir)
        config_dir.mkdir(parents=True)

    config_ini = config_dir / "config.ini"
    config_parser = configparser.ConfigParser()

    if config_ini.exists():
        LOG.info("Found existing configuration file, reading")
        config_parser.read(config_ini)
    else:
        LOG.info("No configuration file found, creating")
        config_parser[SECTION] = {}

    for key, value in kwargs.items():
        if value is None:
            continue
        if key not in OPTIONS:
            raise ValueError(f"Unknown configuration option {key!r}")
        config_parser[SECTION][key] = str(value)

    LOG.info("Writing configuration to %s", config_ini)
    with config_ini.open("w") as cfg:
        config_parser.write(cfg)
    return config_ini
