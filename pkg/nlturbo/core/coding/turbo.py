"""
Parallel concatenated encoder built from table trellises with periodic parity puncturing
"""
from collections import namedtuple
from fractions import Fraction
import math
from bitarray import bitarray
from bitarray.util import ba2int, int2ba
import numpy as np
from .interleaver import make_interleaver
from .tables import load_table_i
from .trellis import octal_width, octal_to_int
from ..math.misc import bits_to_symbols

DensityEstimate = namedtuple('DensityEstimate', ['density', 'stderr', 'bits'])
TableIIRow = namedtuple('TableIIRow', ['rate', 'puncture1', 'puncture2', 'ones_density', 'optimal_density'])


class PuncturePattern:
    """Creates a periodic puncture pattern for a parity stream. Bit p of the stream is deleted
    when bit (p mod period) of the mask is 1; the first mask bit is the most significant octal
    digit's high bit.

    :param mask: punctured positions as a bitarray, bit string or integer
    :type mask: Union[bitarray, str, int]
    :param period: puncture period in bits, required when mask is an integer
    :type period: Union[int, None]
    :raises: ValueError
    """
    def __init__(self, mask, period=None):
        if isinstance(mask, (int, np.integer)):
            if period is None or period < 1:
                raise ValueError('puncture period is required for an integer mask.')
            if mask < 0 or int(mask) >> period:
                raise ValueError(f'puncture mask {mask} does not fit in {period} bits.')
            mask = int2ba(int(mask), length=period, endian='big')
        else:
            mask = bitarray(mask, endian='big')
            if period is not None and len(mask) != period:
                raise ValueError(f'puncture mask has {len(mask)} bits, expected period {period}.')
        if len(mask) == 0:
            raise ValueError('puncture mask should have at least 1 bit.')

        self.mask = mask
        self.period = len(mask)
        self.keep = np.array(mask.tolist(), dtype=bool) == 0
        self.keep.setflags(write=False)

    @classmethod
    def fromOctal(cls, label, period=9):
        """Creates a puncture pattern from an octal label e.g. '277' with a 9 bit period

        :param label: octal label
        :type label: str
        :param period: puncture period in bits
        :type period: int
        :return: puncture pattern
        :rtype: PuncturePattern
        :raises: ValueError
        """
        return cls(octal_to_int(label, period), period)

    @classmethod
    def none(cls, period=9):
        return cls(0, period)

    @property
    def punctured(self):
        return self.mask.count(1)

    @property
    def value(self):
        return ba2int(self.mask)

    def octal(self):
        return format(self.value, 'o').zfill(octal_width(self.period))

    def keepMask(self, length):
        """Boolean mask of the bits kept from a parity stream of the given length

        :param length: stream length in bits
        :type length: int
        :return: True where the bit is transmitted
        :rtype: numpy.ndarray[bool]
        """
        return np.resize(self.keep, length)

    def __eq__(self, other):
        if not isinstance(other, PuncturePattern):
            return NotImplemented
        return self.mask == other.mask

    def __repr__(self):
        return f'PuncturePattern({self.octal()}, period={self.period})'


def uniform_puncture(period, punctured):
    """Creates a pattern that punctures evenly spaced positions floor(j·period/punctured) for
    j = 0 .. punctured-1

    :param period: puncture period in bits
    :type period: int
    :param punctured: number of punctured bits per period
    :type punctured: int
    :return: puncture pattern
    :rtype: PuncturePattern
    :raises: ValueError
    """
    if not 0 <= punctured < period:
        raise ValueError(f'cannot puncture {punctured} of {period} bits.')

    mask = bitarray(period, endian='big')
    mask.setall(0)
    for index in range(punctured):
        mask[index * period // punctured] = 1
    return PuncturePattern(mask)


class CodeSpec:
    """Creates a parallel concatenated code. Message symbols of k bits feed the first constituent
    encoder in natural order and the second in interleaved order; both start in state 0 and are
    not terminated. The codeword is the systematic bits (when enabled) followed by the punctured
    parity streams of encoders 1 and 2.

    :param constituent: constituent trellis of encoder 1
    :type constituent: TableTrellis
    :param interleaver: symbol interleaver of length K/k
    :type interleaver: Interleaver
    :param puncture1: puncture pattern of parity stream 1
    :type puncture1: PuncturePattern
    :param puncture2: puncture pattern of parity stream 2
    :type puncture2: PuncturePattern
    :param include_systematic: indicates the message bits are transmitted
    :type include_systematic: bool
    :param info_bits: message bits per block K
    :type info_bits: int
    :param constituent2: constituent trellis of encoder 2. None reuses encoder 1's trellis
    :type constituent2: Union[TableTrellis, None]
    :raises: ValueError
    """
    def __init__(self, constituent, interleaver, puncture1, puncture2, include_systematic=True, info_bits=None,
                 constituent2=None):
        constituent2 = constituent if constituent2 is None else constituent2
        k = constituent.k
        if constituent2.k != k:
            raise ValueError(f'constituent encoders have different input widths ({k} and {constituent2.k}).')

        info_bits = interleaver.length * k if info_bits is None else int(info_bits)
        if info_bits < k or info_bits % k:
            raise ValueError(f'K={info_bits} should be a positive multiple of k={k}.')
        if interleaver.length != info_bits // k:
            raise ValueError(f'interleaver length {interleaver.length} does not match K/k={info_bits // k} symbols.')

        self.constituent = constituent
        self.constituent2 = constituent2
        self.interleaver = interleaver
        self.puncture1 = puncture1
        self.puncture2 = puncture2
        self.include_systematic = bool(include_systematic)
        self.info_bits = info_bits

        self.keep1 = puncture1.keepMask(self.steps * constituent.n)
        self.keep2 = puncture2.keepMask(self.steps * constituent2.n)
        self.keep1.setflags(write=False)
        self.keep2.setflags(write=False)

    @property
    def k(self):
        return self.constituent.k

    @property
    def steps(self):
        return self.info_bits // self.k

    @property
    def systematic_length(self):
        return self.info_bits if self.include_systematic else 0

    @property
    def parity_lengths(self):
        return int(self.keep1.sum()), int(self.keep2.sum())

    @property
    def codeword_length(self):
        return self.systematic_length + sum(self.parity_lengths)

    def encode(self, message):
        return encode(self, message)

    def __repr__(self):
        return (f'CodeSpec(K={self.info_bits}, n={self.constituent.n}, puncture=({self.puncture1.octal()}, '
                f'{self.puncture2.octal()}), systematic={self.include_systematic})')


def encode(spec, message):
    """Encodes one block

    :param spec: code
    :type spec: CodeSpec
    :param message: K message bits
    :type message: array_like
    :return: codeword bits
    :rtype: numpy.ndarray[numpy.uint8]
    :raises: ValueError
    """
    message = np.asarray(message, dtype=np.uint8).ravel()
    if message.size != spec.info_bits:
        raise ValueError(f'message has {message.size} bits, expected K={spec.info_bits}.')

    symbols = bits_to_symbols(message, spec.k)
    parity1, _ = spec.constituent.encode(symbols)
    parity2, _ = spec.constituent2.encode(spec.interleaver.interleave(symbols))

    streams = [parity1.ravel()[spec.keep1], parity2.ravel()[spec.keep2]]
    if spec.include_systematic:
        streams.insert(0, message)
    return np.concatenate(streams).astype(np.uint8)


def rate_of(spec):
    """Computes the exact code rate K / (K·[systematic] + kept parity bits)

    :param spec: code
    :type spec: CodeSpec
    :return: code rate
    :rtype: fractions.Fraction
    """
    return Fraction(spec.info_bits, spec.codeword_length)


def _stream_ones(trellis, puncture, cycle_steps):
    column_ones = trellis.columnOnes().tolist()
    labels = trellis.num_states * trellis.topology.num_inputs
    keep = puncture.keepMask(cycle_steps * trellis.n)
    ones = sum(Fraction(column_ones[p % trellis.n], labels) for p in np.flatnonzero(keep).tolist())
    return ones, int(keep.sum())


def analytic_ones_density(spec, parity_only=False):
    """Computes the expected codeword ones density for uniform messages, assuming every
    state is equally likely: systematic bits contribute 1/2 and each kept parity position its column
    ones count over all labels

    :param spec: code
    :type spec: CodeSpec
    :param parity_only: exclude the systematic bits
    :type parity_only: bool
    :return: expected ones density
    :rtype: fractions.Fraction
    """
    period1, period2 = spec.puncture1.period, spec.puncture2.period
    cycle_steps = math.lcm(period1 // math.gcd(spec.constituent.n, period1),
                           period2 // math.gcd(spec.constituent2.n, period2))

    ones1, kept1 = _stream_ones(spec.constituent, spec.puncture1, cycle_steps)
    ones2, kept2 = _stream_ones(spec.constituent2, spec.puncture2, cycle_steps)
    ones, total = ones1 + ones2, kept1 + kept2
    if spec.include_systematic and not parity_only:
        ones += Fraction(cycle_steps * spec.k, 2)
        total += cycle_steps * spec.k

    return ones / total if total else Fraction(0)


def measure_ones_density(spec, num_blocks, rng):
    """Measures the ones density of codewords for uniformly random messages

    :param spec: code
    :type spec: CodeSpec
    :param num_blocks: number of blocks to encode
    :type num_blocks: int
    :param rng: random generator
    :type rng: numpy.random.Generator
    :return: density, its standard error and the number of coded bits
    :rtype: DensityEstimate
    :raises: ValueError
    """
    if num_blocks < 1:
        raise ValueError(f'num_blocks should be at least 1, got {num_blocks}.')

    ones = np.empty(num_blocks, dtype=np.int64)
    for block in range(num_blocks):
        message = rng.integers(0, 2, spec.info_bits, dtype=np.uint8)
        ones[block] = int(encode(spec, message).sum())

    return density_estimate(ones, spec.codeword_length)


def density_estimate(block_ones, block_length):
    """Combines per-block ones counts into a density estimate. The standard error is taken from the
    spread of the block densities, or the binomial value for a single block.

    :param block_ones: ones count of each block
    :type block_ones: array_like
    :param block_length: bits per block
    :type block_length: int
    :return: density, its standard error and the number of coded bits
    :rtype: DensityEstimate
    """
    block_ones = np.asarray(block_ones, dtype=np.int64)
    bits = block_ones.size * block_length
    density = float(block_ones.sum()) / bits
    if block_ones.size > 1:
        stderr = float(np.std(block_ones / block_length, ddof=1) / np.sqrt(block_ones.size))
    else:
        stderr = float(np.sqrt(density * (1 - density) / bits))
    return DensityEstimate(density, stderr, bits)


TABLE_II = (TableIIRow(Fraction(1, 10), '000', '000', 0.5953, 0.621),
            TableIIRow(Fraction(1, 9), '001', '002', 0.5955, 0.6197),
            TableIIRow(Fraction(1, 8), '201', '042', 0.5938, 0.6181),
            TableIIRow(Fraction(1, 7), '241', '043', 0.5915, 0.6161),
            TableIIRow(Fraction(1, 6), '243', '243', 0.5911, 0.6134),
            TableIIRow(Fraction(1, 5), '247', '263', 0.5828, 0.6094),
            TableIIRow(Fraction(1, 4), '257', '267', 0.5742, 0.6035),
            TableIIRow(Fraction(1, 3), '277', '367', 0.5599, 0.5931))


def table_ii_spec(row, info_bits=20000, spread=None, seed=1, trellis=None, interleaver=None):
    """Creates the systematic turbo code of a row of the puncture table built on the embedded
    16-state constituent code

    :param row: row index (0 → rate 1/10, 7 → rate 1/3) or a row
    :type row: Union[int, TableIIRow]
    :param info_bits: message bits per block K
    :type info_bits: int
    :param spread: interleaver spread. None uses the default spread
    :type spread: Union[int, None]
    :param seed: interleaver seed
    :type seed: int
    :param trellis: constituent trellis. None uses the embedded code with the default topology
    :type trellis: Union[TableTrellis, None]
    :param interleaver: interleaver to reuse instead of building one
    :type interleaver: Union[Interleaver, None]
    :return: code
    :rtype: CodeSpec
    """
    row = TABLE_II[row] if isinstance(row, int) else row
    trellis = load_table_i() if trellis is None else trellis
    if interleaver is None:
        interleaver = make_interleaver(info_bits // trellis.k, spread, seed)

    return CodeSpec(trellis, interleaver, PuncturePattern.fromOctal(row.puncture1, trellis.n),
                    PuncturePattern.fromOctal(row.puncture2, trellis.n), True, info_bits)
