import logging
import os
import pathlib
from pkgutil import get_data

import numpy as np
import toml

from wgplate.exceptions import NoValidConfiguration

_logger = logging.getLogger(__name__)

WGPLATE_CONFIG = pathlib.Path("wgplate") / "wgplate.toml"


def config_paths():
    # latter ones will override former ones
    paths = [
        # pip install with root
        pathlib.Path("/etc") / WGPLATE_CONFIG,
        # pip install in venv
        pathlib.Path(os.getenv("VIRTUAL_ENV", "")) / "etc" / WGPLATE_CONFIG,
        # conda environment install
        pathlib.Path(os.getenv("CONDA_PREFIX", "")) / "etc" / WGPLATE_CONFIG,
        # pip install --user
        pathlib.Path(os.getenv("HOME", "")) / ".local" / "etc" / WGPLATE_CONFIG,
        # user-defined configuration
        pathlib.Path(os.getenv("HOME", "")) / ".config" / WGPLATE_CONFIG,
    ]

    path_dedups = []
    for path in paths:
        if path not in path_dedups:
            path_dedups.append(path)

    return path_dedups


def load_configuration(extra_paths=()):
    """Load the layered two-level configuration dictionary.

    The packaged default comes first, then every readable file from
    :func:`config_paths` and ``extra_paths``; later files override earlier
    ones key by key inside a section.
    """
    configs = []

    try:
        configs.append(toml.loads(get_data(__name__, "config.toml").decode("utf-8")))
    except (FileNotFoundError, OSError, toml.decoder.TomlDecodeError):
        _logger.debug("Packaged default configuration unavailable.")

    for path in list(config_paths()) + [pathlib.Path(p) for p in extra_paths]:
        try:
            configs.append(toml.load(path))
            _logger.debug(f"Configuration file {path} loaded successfully.")
        except (FileNotFoundError, IsADirectoryError, PermissionError):
            _logger.debug(f"Configuration file {path} does not exist.")
        except toml.decoder.TomlDecodeError:
            _logger.debug(f"Invalid configuration file {path}.")

    if not configs:
        raise NoValidConfiguration
    config = configs.pop(0)
    for c in configs:
        for domain, mappings in c.items():
            if domain in config:
                config[domain].update(mappings)
            else:
                config[domain] = mappings

    _logger.debug(f"Configuration loaded: {config}")
    return config


def log_ratio_rates(errors, sizes):
    # observed order between consecutive levels; nan where undefined
    errors = np.asarray(errors, dtype=float)
    sizes = np.asarray(sizes, dtype=float)
    rates = np.full(errors.shape, np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        rates[1:] = np.log(errors[:-1] / errors[1:]) / np.log(sizes[:-1] / sizes[1:])
    rates[~np.isfinite(rates)] = np.nan
    return rates
