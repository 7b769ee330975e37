import numpy as np
from .capacity import binary_entropy, z_capacity
from ..util.misc import ChannelKind


class ChannelModel:
    """Creates a memoryless binary channel. The Z-channel flips a transmitted 0 to 1 with
    probability p and never flips a 1, the BSC flips either bit with probability q and the
    BBSC passes the same input through two independent BSCs with crossovers alpha < beta.

    :param kind: channel kind
    :type kind: Union[ChannelKind, str]
    :param params: crossover probabilities, (p,) for Z, (q,) for BSC and (alpha, beta) for BBSC
    :type params: float
    :raises: ValueError
    """
    def __init__(self, kind, *params):
        self.kind = ChannelKind(kind)
        expected = 2 if self.kind == ChannelKind.BBSC else 1
        if len(params) != expected:
            raise ValueError(f'{self.kind.value} channel takes {expected} parameter(s), got {len(params)}.')

        params = tuple(float(param) for param in params)
        for param in params:
            if not 0 <= param < 1:
                raise ValueError(f'crossover probability {param} is outside [0, 1).')
        if self.kind == ChannelKind.BBSC and not params[0] < params[1]:
            raise ValueError(f'BBSC crossovers should satisfy alpha < beta, got {params}.')

        self.params = params

    @classmethod
    def z(cls, p):
        return cls(ChannelKind.Z, p)

    @classmethod
    def bsc(cls, q):
        return cls(ChannelKind.BSC, q)

    @classmethod
    def bbsc(cls, alpha, beta):
        return cls(ChannelKind.BBSC, alpha, beta)

    @property
    def crossover(self):
        if self.kind == ChannelKind.BBSC:
            raise ValueError('BBSC has two crossover probabilities, use the params attribute.')
        return self.params[0]

    def capacity(self):
        """Computes the single-user capacity of the channel

        :return: capacity in bits
        :rtype: float
        :raises: ValueError
        """
        if self.kind == ChannelKind.Z:
            return z_capacity(self.params[0])
        if self.kind == ChannelKind.BSC:
            return 1.0 - binary_entropy(self.params[0])

        raise ValueError('BBSC capacity is a region, use bbsc_region.')

    def transmit(self, codeword, rng):
        """Passes a codeword through the channel

        :param codeword: transmitted bits
        :type codeword: array_like
        :param rng: random generator
        :type rng: numpy.random.Generator
        :return: received bits, a pair (y1, y2) for the BBSC
        :rtype: Union[numpy.ndarray[numpy.uint8], Tuple[numpy.ndarray[numpy.uint8], numpy.ndarray[numpy.uint8]]]
        """
        codeword = np.asarray(codeword, dtype=np.uint8)

        if self.kind == ChannelKind.Z:
            flips = (rng.random(codeword.size) < self.params[0]).reshape(codeword.shape)
            return codeword | flips.astype(np.uint8)

        if self.kind == ChannelKind.BSC:
            return _bsc(codeword, self.params[0], rng)

        return _bsc(codeword, self.params[0], rng), _bsc(codeword, self.params[1], rng)

    def __repr__(self):
        return f'ChannelModel({self.kind.value}, {", ".join(str(p) for p in self.params)})'


def _bsc(codeword, q, rng):
    flips = (rng.random(codeword.size) < q).reshape(codeword.shape)
    return codeword ^ flips.astype(np.uint8)
