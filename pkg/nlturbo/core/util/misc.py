"""
A collection of miscellaneous functions
"""
from enum import Enum, unique, IntEnum
import numpy as np


@unique
class MetricKind(Enum):
    Hamming = 'hamming'
    Directional = 'directional'
    Z = 'z'


@unique
class ChannelKind(Enum):
    Z = 'z'
    BSC = 'bsc'
    BBSC = 'bbsc'


@unique
class Algorithm(Enum):
    LogMap = 'log-map'
    MaxLogMap = 'max-log-map'


@unique
class StopReason(Enum):
    Errors = 'error_target'
    Budget = 'block_budget'


@unique
class ExitCode(IntEnum):
    Success = 0
    Usage = 1
    Validation = 2


def rng_stream(seed, *keys):
    """Creates an independent counter-based random stream keyed by a master seed and any number
    of integer keys e.g. (seed, candidate, state, retry). Streams with different keys are
    independent and the same keys always produce the same stream irrespective of the order in
    which streams are created.

    :param seed: master seed
    :type seed: int
    :param keys: stream keys
    :type keys: int
    :return: random generator
    :rtype: numpy.random.Generator
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(key) for key in keys)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
