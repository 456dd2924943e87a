import os
from enum import Enum
import yaml
from torsionnodes.errors import InvalidInputError
from torsionnodes.utils import NO_LOG_FILE, get_logger

CONFIG_ENV = "TORSIONNODES_CONFIG_FILE"
CONFIG_FILE_NAMES = ("torsionnodes-test.yaml", "torsionnodes.yaml")
MAX_PARENT_LEVELS = 4
ENV_OVERRIDES = {"TORSIONNODES_LOG_FILE": "LOG_FILE",
                 "TORSIONNODES_SCREEN_VERBOSITY": "SCREEN_VERBOSITY"}


class ConfigParams(Enum):
    """
    Named parameters used for mapping configuration file content to getters
    """
    SCREEN_VERBOSITY = 'SCREEN_VERBOSITY'
    FILE_VERBOSITY = 'FILE_VERBOSITY'
    LOG_FILE = 'LOG_FILE'
    ENUMERATION_CAP = 'ENUMERATION_CAP'
    WORKERS = 'WORKERS'
    DEFAULT_SEED = 'DEFAULT_SEED'
    TOLERANCES = 'TOLERANCES'


config_logger = None
config_file = None


class Config:
    """
    A standardized source of configuration information that maps a dict of key=value pairs to getters
    """

    def __init__(self):
        self._data = dict()
        self._data[ConfigParams.LOG_FILE.value] = NO_LOG_FILE
        self._data[ConfigParams.SCREEN_VERBOSITY.value] = "WARN"
        self._data[ConfigParams.FILE_VERBOSITY.value] = "INFO"
        self._data[ConfigParams.ENUMERATION_CAP.value] = 12
        self._data[ConfigParams.WORKERS.value] = 1
        self._data[ConfigParams.DEFAULT_SEED.value] = 20240601
        self._data[ConfigParams.TOLERANCES.value] = {}

    def get(self, key):
        return self._data[key]

    def has(self, key):
        return key in self._data

    def populate(self, atts: dict):
        for prop in atts:
            if prop == ConfigParams.TOLERANCES.value:
                # Tolerance overrides accumulate across sections instead of replacing each other
                merged = dict(self._data[prop])
                merged.update(atts[prop] or {})
                self._data[prop] = merged
            else:
                self._data[prop] = atts[prop]

    def data(self):
        return self._data

    def get_screen_verbosity(self):
        return self._data[ConfigParams.SCREEN_VERBOSITY.value]

    def get_file_verbosity(self):
        return self._data[ConfigParams.FILE_VERBOSITY.value]

    def get_log_file(self):
        return self._data[ConfigParams.LOG_FILE.value]

    def get_enumeration_cap(self):
        return int(self._data[ConfigParams.ENUMERATION_CAP.value])

    def get_workers(self):
        return int(self._data[ConfigParams.WORKERS.value])

    def get_default_seed(self):
        return int(self._data[ConfigParams.DEFAULT_SEED.value])

    def get_tolerances(self):
        return dict(self._data[ConfigParams.TOLERANCES.value])


def get_config(key: str):
    """
    Returns configuration information for a class or command. The returned configuration is created by
    augmenting/overwriting the parameters defined for key 'GLOBAL' with all parameters defined for 'key'.

    The convention used throughout the project is that classes pass their class name and commands pass their command
    name as 'key', e.g. the bfun command calls get_config("bfun") which searches for the key 'BFUN'. A missing section
    is not an error: the global parameters are used.

    Parameters
    ----------
    key: str
        The key that identifies the configuration information of interest

    Returns
    ----------
    Config
        The configuration
    """
    key = key.upper()
    config = Config()
    config.populate(auto.get("GLOBAL", {}))
    if key in auto:
        config.populate(auto[key])
        config_logger.debug("%s using configuration section %s", key, key)
    else:
        config_logger.debug("%s has no configuration section, using GLOBAL", key)
    return config


def get_config_file():
    """
    The path of the configuration file that was loaded, or None if built-in defaults are in use. Reports echo this
    value so that runs can be reproduced.
    """
    return config_file


def _find_config_file():
    """
    TORSIONNODES_CONFIG_FILE if it names an existing file, otherwise the first of CONFIG_FILE_NAMES found in the
    working directory or up to MAX_PARENT_LEVELS directories above it
    """
    envfile = os.getenv(CONFIG_ENV)
    if envfile is not None and os.path.isfile(envfile):
        return envfile
    directory = os.getcwd()
    for _ in range(MAX_PARENT_LEVELS + 1):
        for name in CONFIG_FILE_NAMES:
            candidate = os.path.join(directory, name)
            if os.path.isfile(candidate):
                return candidate
        directory = os.path.dirname(directory)
    return None


def _read_config_file(path: str) -> dict:
    try:
        with open(path, 'r') as stream:
            document = yaml.safe_load(stream)
    except (OSError, yaml.YAMLError) as e:
        raise InvalidInputError("Could not read config file {0}: {1}".format(path, e), path=path)
    if not isinstance(document, dict) or not isinstance(document.get("TORSIONNODES"), dict):
        raise InvalidInputError("Config file {0} has no TORSIONNODES mapping".format(path), path=path)
    return document["TORSIONNODES"]


def load_file_based_config():
    """
    Loads the TORSIONNODES node of the discovered YAML file. torsionnodes-test.yaml takes precedence over
    torsionnodes.yaml at the same level, and TORSIONNODES_CONFIG_FILE over both. The variables in ENV_OVERRIDES then
    replace single GLOBAL keys.

    Returns
    -------
    dict
        Sections by name, always including GLOBAL; only GLOBAL (empty) when no file was found

    Raises
    ------
    InvalidInputError
        If a file was found but cannot be read or parsed
    """
    global config_logger, config_file

    found = _find_config_file()
    config = {"GLOBAL": {}}
    if found is not None:
        config = _read_config_file(found)
        config["GLOBAL"] = config.get("GLOBAL") or {}
        config_file = os.path.abspath(found)

    config["GLOBAL"].update({key: os.getenv(env) for env, key in ENV_OVERRIDES.items() if os.getenv(env) is not None})

    wrapper = Config()
    wrapper.populate(config["GLOBAL"])
    config_logger = get_logger("CONFIG",
                               wrapper.get_log_file(),
                               wrapper.get_file_verbosity(),
                               wrapper.get_screen_verbosity())
    envfile = os.getenv(CONFIG_ENV)
    if envfile is not None and found != envfile:
        config_logger.warning("%s=%s does not exist, searched for a config file instead", CONFIG_ENV, envfile)
    if found is None:
        config_logger.info("No configuration file located, using built-in defaults")
    else:
        config_logger.info("Loaded configuration file %s", config_file)
    return config


def get_global_config():
    """
    Retrieves only the global parameters.

    Returns
    ----------
    Config
        The global configuration as a Config object
    """
    config = Config()
    config.populate(auto["GLOBAL"])
    return config


auto = load_file_based_config()
