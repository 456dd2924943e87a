import logging
import os
import sys
import numpy as np

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(name)s - %(message)s'
NO_LOG_FILE = "$NONE"

_LEVELS = {"DEBUG": logging.DEBUG,
           "INFO": logging.INFO,
           "WARN": logging.WARNING,
           "WARNING": logging.WARNING,
           "ERROR": logging.ERROR,
           "CRITICAL": logging.CRITICAL,
           "FATAL": logging.FATAL}

_loggers = {}


def get_log_level(level) -> int:
    """
    Resolves a verbosity token from a config file (DEBUG, INFO, WARN, ...) to a logging level. Integers pass through.

    Raises
    ------
    ValueError
        If the token names no logging level
    """
    if isinstance(level, int):
        return level
    try:
        return _LEVELS[str(level).strip().upper()]
    except KeyError:
        raise ValueError("Unknown log level {0!r}, expected one of {1}".format(level, ", ".join(_LEVELS)))


def _attach(logger: logging.Logger, handler: logging.Handler, level):
    handler.setLevel(get_log_level(level))
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)


def get_logger(name: str, file_path: str, file_level="INFO", screen_level="WARN") -> logging.Logger:
    """
    One logger per name, created on first request. Screen output goes to stderr so reports written to stdout stay
    machine readable.

    Parameters
    ----------
    name: str
        Usually the module name
    file_path: str
        Log file, "~" and environment variables expanded, or "$NONE" for screen output only
    file_level: str
        Verbosity of the log file
    screen_level: str
        Verbosity of stderr

    Returns
    -------
    logging.Logger
    """
    if name in _loggers:
        return _loggers[name]

    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)
    logger.propagate = False
    _attach(logger, logging.StreamHandler(sys.stderr), screen_level)
    if file_path and file_path != NO_LOG_FILE:
        _attach(logger, logging.FileHandler(os.path.expandvars(os.path.expanduser(file_path))), file_level)

    _loggers[name] = logger
    return logger


def make_rng(seed: int) -> np.random.Generator:
    """
    Creates the random generator used by every randomized check, so that a recorded seed reproduces a run exactly

    Parameters
    ----------
    seed: int
        Non-negative integer seed

    Returns
    -------
    numpy.random.Generator
    """
    return np.random.default_rng(int(seed))


def complex_pair(z) -> list:
    """
    Converts a complex number into the [re, im] pair used in reports
    """
    z = complex(z)
    return [z.real, z.imag]
