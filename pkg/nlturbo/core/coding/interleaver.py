import logging
import math
import numpy as np
from ..util.misc import rng_stream
from ...config import settings

logger = logging.getLogger(__name__)


def measure_spread(permutation):
    """Computes the largest S such that |π(i) - π(j)| >= S for all i ≠ j with |i - j| < S,
    i.e. the minimum over pairs of max(|i - j|, |π(i) - π(j)|)

    :param permutation: permutation of [0, N)
    :type permutation: numpy.ndarray
    :return: spread
    :rtype: int
    """
    permutation = np.asarray(permutation, dtype=np.int64)
    size = permutation.size
    best = size
    distance = 1
    while distance < min(best, size):
        gap = int(np.abs(permutation[distance:] - permutation[:-distance]).min())
        best = min(best, max(distance, gap))
        distance += 1
    return best


class Interleaver:
    """Creates a symbol-wise interleaver. Interleaving maps a sequence x to y with y[i] = x[π(i)].

    :param permutation: bijection on [0, N)
    :type permutation: array_like
    :param requested_spread: spread the construction aimed for
    :type requested_spread: Union[int, None]
    :param seed: seed of the construction
    :type seed: Union[int, None]
    :raises: ValueError
    """
    def __init__(self, permutation, requested_spread=None, seed=None):
        permutation = np.array(permutation, dtype=np.int64)
        if permutation.ndim != 1 or permutation.size == 0:
            raise ValueError('interleaver permutation should be a non-empty 1D array.')
        if not np.array_equal(np.sort(permutation), np.arange(permutation.size)):
            raise ValueError(f'interleaver permutation is not a bijection on [0, {permutation.size}).')

        permutation.setflags(write=False)
        self.permutation = permutation
        self.inverse = np.argsort(permutation)
        self.inverse.setflags(write=False)
        self.spread = measure_spread(permutation)
        self.requested_spread = self.spread if requested_spread is None else requested_spread
        self.seed = seed

    @property
    def length(self):
        return self.permutation.size

    def interleave(self, values):
        """Reorders values (first axis of length N) into interleaved order

        :param values: values in natural order
        :type values: numpy.ndarray
        :return: values in interleaved order
        :rtype: numpy.ndarray
        """
        values = np.asarray(values)
        self._checkLength(values)
        return values[self.permutation]

    def deinterleave(self, values):
        """Restores the natural order of interleaved values (first axis of length N)

        :param values: values in interleaved order
        :type values: numpy.ndarray
        :return: values in natural order
        :rtype: numpy.ndarray
        """
        values = np.asarray(values)
        self._checkLength(values)
        return values[self.inverse]

    def _checkLength(self, values):
        if values.shape[0] != self.length:
            raise ValueError(f'interleaver of length {self.length} cannot reorder {values.shape[0]} values.')

    def __eq__(self, other):
        if not isinstance(other, Interleaver):
            return NotImplemented
        return np.array_equal(self.permutation, other.permutation)

    def __repr__(self):
        return f'Interleaver(length={self.length}, spread={self.spread}, seed={self.seed})'


def column_walk_feasible(length, spread):
    """Checks that the column walk construction guarantees the spread. Every column of the 2S+1
    column layout must hold at least S-1 symbols so a window shorter than S crosses at most one
    column boundary.

    :param length: number of symbols N
    :type length: int
    :param spread: spread S
    :type spread: int
    :return: indicates the construction reaches the spread
    :rtype: bool
    """
    return spread >= 1 and length >= (spread - 1) * (2 * spread + 1)


def _column_walk(length, spread, rng):
    """Spread interleaver from a 2S+1 column layout of the input (i = row * (2S+1) + column). Columns
    are read one after another, each in a random row order, and the column order steps by S or S+1
    modulo 2S+1. Reads inside a column are 2S+1 apart, reads across a column boundary differ by S or
    S+1 when the rows match and by at least S otherwise, so the spread is at least S."""
    columns = 2 * spread + 1
    step = spread + int(rng.integers(2))
    order = (int(rng.integers(columns)) + step * np.arange(columns)) % columns
    return np.concatenate([rng.permutation(np.arange(column, length, columns)) for column in order])


def _s_random_attempt(length, spread, rng):
    """One pass of the S-random construction. blocked[v] counts the last spread-1 choices within
    spread-1 of v, so a value is admissible when it is unused and unblocked."""
    available = np.ones(length, dtype=bool)
    blocked = np.zeros(length, dtype=np.int64)
    permutation = np.empty(length, dtype=np.int64)
    window = spread - 1

    for index in range(length):
        if window > 0 and index > window:
            old = permutation[index - window - 1]
            blocked[max(0, old - window): old + window + 1] -= 1

        candidates = np.flatnonzero(available & (blocked == 0))
        if candidates.size == 0:
            return None

        value = candidates[rng.integers(candidates.size)]
        permutation[index] = value
        available[value] = False
        if window > 0:
            blocked[max(0, value - window): value + window + 1] += 1

    return permutation


def make_interleaver(length, spread=None, seed=0):
    """Creates a spread interleaver: for all i ≠ j with |i - j| < S the images satisfy
    |π(i) - π(j)| >= S. Spreads up to floor(sqrt(N/2)) always use the column walk construction
    which reaches S in a single pass. Larger spreads are attempted with the S-random construction,
    when the Interleaver_Retries budget is spent the spread is lowered by one and the construction
    repeated, the achieved spread is reported by the returned interleaver. Each attempt uses its
    own random stream keyed by (seed, spread, attempt) so the permutation depends only on the
    arguments.

    :param length: number of symbols N
    :type length: int
    :param spread: spread S. None uses floor(sqrt(N/2))
    :type spread: Union[int, None]
    :param seed: seed
    :type seed: int
    :return: interleaver
    :rtype: Interleaver
    :raises: ValueError
    """
    if length < 1:
        raise ValueError(f'interleaver length should be at least 1, got {length}.')

    spread = math.isqrt(length // 2) if spread is None else int(spread)
    if spread < 0:
        raise ValueError(f'spread should be non-negative, got {spread}.')
    if spread * spread > length:
        logger.warning('spread %d is unlikely to be achievable for length %d (S² > N)', spread, length)

    retries = max(1, settings.value(settings.Key.Interleaver_Retries))
    requested = spread
    while spread > 1:
        if column_walk_feasible(length, spread):
            permutation = _column_walk(length, spread, rng_stream(seed, spread))
            logger.debug('column walk interleaver (N=%d, S=%d) built', length, spread)
            return Interleaver(permutation, requested, seed)

        for attempt in range(retries):
            permutation = _s_random_attempt(length, spread, rng_stream(seed, spread, attempt))
            if permutation is not None:
                logger.debug('S-random interleaver (N=%d, S=%d) built on attempt %d', length, spread, attempt)
                return Interleaver(permutation, requested, seed)
        logger.warning('S-random interleaver (N=%d) failed at S=%d after %d attempts, lowering S', length, spread,
                       retries)
        spread -= 1

    return Interleaver(rng_stream(seed, 1, 0).permutation(length), requested, seed)
