"""
Superposition coding for the two-user broadcast binary symmetric channel: user 1's low density
nonlinear codeword is XOR-ed with user 2's 50% density codeword
"""
from collections import namedtuple
import numpy as np
from .decoder import DecoderConfig, bsc_llr, turbo_decode
from .turbo import analytic_ones_density, encode, rate_of
from ..channel.capacity import star

BlockErrors = namedtuple('BlockErrors', ['bit_errors1', 'bit_errors2', 'cancellation_failure', 'genie_bit_errors1'])


def superpose(x1, x2):
    """Computes the channel input x1 ⊕ x2

    :param x1: codeword of user 1
    :type x1: array_like
    :param x2: codeword of user 2
    :type x2: array_like
    :return: channel input
    :rtype: numpy.ndarray[numpy.uint8]
    :raises: ValueError
    """
    x1 = np.asarray(x1, dtype=np.uint8)
    x2 = np.asarray(x2, dtype=np.uint8)
    if x1.shape != x2.shape:
        raise ValueError(f'codewords have different lengths ({x1.size} and {x2.size}).')
    return x1 ^ x2


class SuperpositionSpec:
    """Creates a superposition code from the codes of the two users. Both codewords must have the same
    length.

    :param spec1: code of user 1 (nonlinear, ones density p1)
    :type spec1: CodeSpec
    :param spec2: code of user 2 (ones density 0.5)
    :type spec2: CodeSpec
    :param p1: ones density of user 1's codewords. None uses the expected density of spec1
    :type p1: Union[float, None]
    :raises: ValueError
    """
    def __init__(self, spec1, spec2, p1=None):
        if spec1.codeword_length != spec2.codeword_length:
            raise ValueError(f'user codewords have different lengths ({spec1.codeword_length} and '
                             f'{spec2.codeword_length}), choose K values with equal codeword lengths.')

        self.spec1 = spec1
        self.spec2 = spec2
        self.p1 = float(analytic_ones_density(spec1)) if p1 is None else float(p1)
        if not 0 <= self.p1 <= 0.5:
            raise ValueError(f'user 1 ones density {self.p1} is outside [0, 0.5].')

    @property
    def length(self):
        return self.spec1.codeword_length

    @property
    def rates(self):
        return rate_of(self.spec1), rate_of(self.spec2)

    def encode(self, message1, message2):
        """Encodes one message per user and superposes the codewords

        :param message1: message of user 1
        :type message1: array_like
        :param message2: message of user 2
        :type message2: array_like
        :return: channel input
        :rtype: numpy.ndarray[numpy.uint8]
        """
        return superpose(encode(self.spec1, message1), encode(self.spec2, message2))


def effective_crossovers(alpha, beta, p1):
    """Crossovers seen by the decoders when the other user's codeword is treated as noise: user 1's
    first stage sees α⋆p1, user 2 sees β⋆p1 and user 1's second stage sees α

    :return: (stage 1 of user 1, user 2, stage 2 of user 1)
    :rtype: Tuple[float, float, float]
    """
    return star(alpha, p1), star(beta, p1), alpha


def decode_user2(spec2, received, beta, p1, config=None):
    """Decodes user 2's message treating user 1's codeword as noise, i.e. over BSC(β⋆p1)

    :param spec2: code of user 2
    :type spec2: CodeSpec
    :param received: bits received by user 2
    :type received: array_like
    :param beta: crossover of user 2's channel
    :type beta: float
    :param p1: ones density of user 1's codewords
    :type p1: float
    :param config: decoder config
    :type config: Union[DecoderConfig, None]
    :return: decoded message bits
    :rtype: numpy.ndarray[numpy.uint8]
    """
    config = DecoderConfig() if config is None else config
    return turbo_decode(spec2, bsc_llr(received, star(beta, p1), config.llr_cap), config)


def _decode_user1(spec1, spec2, received, alpha, p1, config, known_x2=None):
    if known_x2 is None:
        message2 = turbo_decode(spec2, bsc_llr(received, star(alpha, p1), config.llr_cap), config)
        known_x2 = encode(spec2, message2)
    else:
        message2 = None

    cleaned = np.asarray(received, dtype=np.uint8) ^ known_x2
    return turbo_decode(spec1, bsc_llr(cleaned, alpha, config.llr_cap), config), message2


def decode_user1(spec1, spec2, received, alpha, beta, p1, config=None, known_x2=None):
    """Decodes user 1's message by successive cancellation: user 2's message is decoded first over
    BSC(α⋆p1), re-encoded and removed, then user 1's code is decoded over BSC(α). Passing the
    transmitted x2 skips the first stage (genie-aided mode).

    :param spec1: code of user 1
    :type spec1: CodeSpec
    :param spec2: code of user 2
    :type spec2: CodeSpec
    :param received: bits received by user 1
    :type received: array_like
    :param alpha: crossover of user 1's channel
    :type alpha: float
    :param beta: crossover of user 2's channel
    :type beta: float
    :param p1: ones density of user 1's codewords
    :type p1: float
    :param config: decoder config
    :type config: Union[DecoderConfig, None]
    :param known_x2: user 2's transmitted codeword for genie-aided decoding
    :type known_x2: Union[array_like, None]
    :return: decoded message bits
    :rtype: numpy.ndarray[numpy.uint8]
    :raises: ValueError
    """
    if not alpha < beta:
        raise ValueError(f'successive decoding needs the stronger channel for user 1 (alpha={alpha}, beta={beta}).')

    config = DecoderConfig() if config is None else config
    message1, _ = _decode_user1(spec1, spec2, received, alpha, p1, config, known_x2)
    return message1


def simulate_block(superposition, channel, rng, config=None, genie=False):
    """Sends one block of random messages over the BBSC and decodes both users

    :param superposition: superposition code
    :type superposition: SuperpositionSpec
    :param channel: BBSC channel
    :type channel: ChannelModel
    :param rng: random generator
    :type rng: numpy.random.Generator
    :param config: decoder config
    :type config: Union[DecoderConfig, None]
    :param genie: also decode user 1 with user 2's codeword known
    :type genie: bool
    :return: bit errors of each user, whether user 1 failed to recover user 2's message and the
             genie-aided bit errors of user 1 (None when genie is False)
    :rtype: BlockErrors
    """
    config = DecoderConfig() if config is None else config
    alpha, beta = channel.params
    spec1, spec2, p1 = superposition.spec1, superposition.spec2, superposition.p1

    message1 = rng.integers(0, 2, spec1.info_bits, dtype=np.uint8)
    message2 = rng.integers(0, 2, spec2.info_bits, dtype=np.uint8)
    x2 = encode(spec2, message2)
    received1, received2 = channel.transmit(superpose(encode(spec1, message1), x2), rng)

    decoded2 = decode_user2(spec2, received2, beta, p1, config)
    decoded1, stage1 = _decode_user1(spec1, spec2, received1, alpha, p1, config)

    genie_errors = None
    if genie:
        genie1, _ = _decode_user1(spec1, spec2, received1, alpha, p1, config, x2)
        genie_errors = int(np.count_nonzero(genie1 != message1))

    return BlockErrors(int(np.count_nonzero(decoded1 != message1)), int(np.count_nonzero(decoded2 != message2)),
                       bool(np.any(stage1 != message2)), genie_errors)
