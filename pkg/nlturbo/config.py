from enum import Enum, unique
import json
import logging
import logging.config
import os
import pathlib

__version__ = '1.0.0'

SOURCE_PATH = pathlib.Path(__file__).parent.parent

CODES_PATH = SOURCE_PATH / 'codes'
LOG_CONFIG_PATH = SOURCE_PATH / 'logging.json'
CODE_SCHEMA_PATH = SOURCE_PATH / 'code_schema.json'
REPORT_SCHEMA_PATH = SOURCE_PATH / 'report_schema.json'
LOG_PATH = pathlib.Path.home() / '.nlturbo' / 'logs'
ENV_PREFIX = 'NLTURBO_'


@unique
class Group(Enum):
    General = 'General'
    Decoder = 'Decoder'
    Design = 'Design'
    Simulation = 'Simulation'


@unique
class Key(Enum):
    Threads = 'Threads'
    Decoder_Iterations = f'{Group.Decoder.value}/Iterations'
    Decoder_Algorithm = f'{Group.Decoder.value}/Algorithm'
    LLR_Cap = f'{Group.Decoder.value}/LLR_Cap'
    Early_Stop = f'{Group.Decoder.value}/Early_Stop'
    Depth_Factor = f'{Group.Design.value}/Depth_Factor'
    Exhaustive_Limit = f'{Group.Design.value}/Exhaustive_Limit'
    Search_Moves = f'{Group.Design.value}/Search_Moves'
    Restart_Interval = f'{Group.Design.value}/Restart_Interval'
    Max_Merge_Retries = f'{Group.Design.value}/Max_Merge_Retries'
    Interleaver_Retries = f'{Group.Simulation.value}/Interleaver_Retries'
    Error_Target = f'{Group.Simulation.value}/Error_Target'
    Block_Budget = f'{Group.Simulation.value}/Block_Budget'
    Bisection_Tolerance = f'{Group.Simulation.value}/Bisection_Tolerance'

    @property
    def env_name(self):
        """Name of the environment variable that overrides the key e.g. NLTURBO_THREADS for
        Threads and NLTURBO_DECODER_ITERATIONS for Decoder/Iterations"""
        return f'{ENV_PREFIX}{self.value.replace("/", "_").upper()}'


__defaults__ = {Key.Threads: os.cpu_count() or 1, Key.Decoder_Iterations: 10, Key.Decoder_Algorithm: 'log-map',
                Key.LLR_Cap: 30.0, Key.Early_Stop: True, Key.Depth_Factor: 4, Key.Exhaustive_Limit: 10_000_000,
                Key.Search_Moves: 50_000, Key.Restart_Interval: 10_000, Key.Max_Merge_Retries: 1000,
                Key.Interleaver_Retries: 20, Key.Error_Target: 100, Key.Block_Budget: 200,
                Key.Bisection_Tolerance: 1e-9}


class Setting:
    """Class handles storage and retrieval of application settings as Key-Value pairs.
    A key could belong to a group e.g Decoder (Decoder/Iterations) or be generic like the
    Threads setting. Values set in-process take precedence over environment variables
    (e.g. NLTURBO_THREADS) which take precedence over the defaults.
    """
    Key = Key
    Group = Group

    def __init__(self):
        self.local = {}

    def value(self, key):
        """Retrieves the value saved with the given key or the default value if no value is
        saved.

        :param key: setting key
        :type key: Enum
        :return: value saved with given key or default
        :rtype: Any
        """
        default = __defaults__[key]
        if key.value in self.local:
            value = self.local[key.value]
        else:
            value = os.environ.get(key.env_name, default)

        if type(default) is bool and type(value) is str:
            # environment stores boolean as string
            return False if value.lower() in ('false', '0', 'no') else True
        if type(default) is int:
            return int(value)
        if type(default) is float:
            return float(value)

        return value

    def setValue(self, key, value):
        """Set value of a setting key

        :param key: setting key
        :type key: Enum
        :param value: new value
        :type value: Any
        """
        self.local[key.value] = value

    def reset(self):
        """Clears the in-process values so environment variables and defaults apply again"""
        self.local.clear()


settings = Setting()


def setup_logging(filename):
    """
    Configure of logging file handler.

    :param filename: name of log file
    :type filename: str
    """
    try:
        LOG_PATH.mkdir(parents=True, exist_ok=True)

        with open(LOG_CONFIG_PATH, 'rt') as config_file:
            config = json.load(config_file)
            config['handlers']['file_handler']['filename'] = LOG_PATH / filename
            logging.config.dictConfig(config)
    except Exception:
        logging.basicConfig(level=logging.ERROR)
        logging.exception("Could not initialize logging with %s", LOG_CONFIG_PATH)
