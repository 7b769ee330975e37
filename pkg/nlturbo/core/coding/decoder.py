"""
Channel likelihoods and iterative symbol-wise MAP decoding over table trellises
"""
import logging
import math
import numpy as np
from ..math.misc import symbols_to_bits
from ..util.misc import Algorithm, ChannelKind
from ...config import settings

logger = logging.getLogger(__name__)


class DecoderConfig:
    """Settings of the iterative decoder. Unset values are taken from the application settings.

    :param max_iterations: maximum number of turbo iterations
    :type max_iterations: Union[int, None]
    :param algorithm: log-map or max-log-map
    :type algorithm: Union[Algorithm, str, None]
    :param llr_cap: magnitude at which channel log-likelihood ratios saturate
    :type llr_cap: Union[float, None]
    :param early_stop: stop when an iteration changes no hard decision
    :type early_stop: Union[bool, None]
    :raises: ValueError
    """
    def __init__(self, max_iterations=None, algorithm=None, llr_cap=None, early_stop=None):
        key = settings.Key
        self.max_iterations = settings.value(key.Decoder_Iterations) if max_iterations is None else max_iterations
        self.algorithm = Algorithm(settings.value(key.Decoder_Algorithm) if algorithm is None else algorithm)
        self.llr_cap = settings.value(key.LLR_Cap) if llr_cap is None else float(llr_cap)
        self.early_stop = settings.value(key.Early_Stop) if early_stop is None else bool(early_stop)

        if self.max_iterations < 1:
            raise ValueError(f'max_iterations should be at least 1, got {self.max_iterations}.')
        if not (math.isfinite(self.llr_cap) and self.llr_cap > 0):
            raise ValueError(f'llr_cap should be a finite positive number, got {self.llr_cap}.')

    def toDict(self):
        return {'max_iterations': self.max_iterations, 'algorithm': self.algorithm.value, 'llr_cap': self.llr_cap,
                'early_stop': self.early_stop}


def bsc_llr(received, q, llr_cap):
    """Computes log(P(y|0)/P(y|1)) for a binary symmetric channel with crossover q

    :param received: received bits
    :type received: array_like
    :param q: crossover probability in [0, 1)
    :type q: float
    :param llr_cap: saturation magnitude
    :type llr_cap: float
    :return: log-likelihood ratios
    :rtype: numpy.ndarray[float]
    """
    received = np.asarray(received)
    magnitude = llr_cap if q == 0 else min(abs(math.log((1 - q) / q)), llr_cap)
    magnitude = math.copysign(magnitude, 0.5 - q)
    return np.where(received == 0, magnitude, -magnitude)


def channel_llr(channel, received, llr_cap=None):
    """Computes log(P(y|x=0)/P(y|x=1)) per received bit. On the Z-channel a received 0 can only come
    from a transmitted 0 so its ratio saturates at +llr_cap, a received 1 gives log(p).

    :param channel: Z or BSC channel
    :type channel: ChannelModel
    :param received: received bits
    :type received: array_like
    :param llr_cap: saturation magnitude. None uses the LLR_Cap setting
    :type llr_cap: Union[float, None]
    :return: log-likelihood ratios clipped to [-llr_cap, llr_cap]
    :rtype: numpy.ndarray[float]
    :raises: ValueError
    """
    llr_cap = settings.value(settings.Key.LLR_Cap) if llr_cap is None else llr_cap
    received = np.asarray(received)

    if channel.kind == ChannelKind.Z:
        p = channel.params[0]
        ones = max(math.log(p), -llr_cap) if p > 0 else -llr_cap
        return np.where(received == 0, llr_cap, ones)

    if channel.kind == ChannelKind.BSC:
        return bsc_llr(received, channel.params[0], llr_cap)

    raise ValueError('BBSC likelihoods depend on the receiver, decode each user with its effective BSC.')


def _branch_metrics(trellis, llrs, priors, systematic):
    """(T, ℓ, 2^k) log branch metrics prior + systematic + Σ L/2·(1 - 2·bit) and the symbol-only
    part prior + systematic"""
    steps = llrs.shape[0]
    num_inputs = trellis.topology.num_inputs
    signs = 1.0 - 2.0 * trellis.label_bits.reshape(-1, trellis.n)
    parity = (llrs @ signs.T / 2).reshape(steps, trellis.num_states, num_inputs)

    symbol = np.zeros((steps, num_inputs)) if priors is None else np.array(priors, dtype=float)
    if systematic is not None:
        input_signs = 1.0 - 2.0 * symbols_to_bits(np.arange(num_inputs), trellis.k).reshape(num_inputs, trellis.k)
        symbol = symbol + systematic @ input_signs.T / 2

    return parity + symbol[:, None, :], symbol


def _check_inputs(trellis, llrs, priors, systematic):
    llrs = np.asarray(llrs, dtype=float)
    if llrs.ndim == 1:
        if llrs.size % trellis.n:
            raise ValueError(f'{llrs.size} parity log-likelihood ratios is not a multiple of n={trellis.n}.')
        llrs = llrs.reshape(-1, trellis.n)
    if llrs.shape[1] != trellis.n:
        raise ValueError(f'parity log-likelihood ratios have {llrs.shape[1]} columns, expected n={trellis.n}.')

    steps = llrs.shape[0]
    if priors is not None and np.shape(priors) != (steps, trellis.topology.num_inputs):
        raise ValueError(f'symbol priors should have shape ({steps}, {trellis.topology.num_inputs}).')
    if systematic is not None:
        systematic = np.asarray(systematic, dtype=float).reshape(-1, trellis.k)
        if systematic.shape[0] != steps:
            raise ValueError(f'{systematic.shape[0]} systematic steps do not match {steps} parity steps.')

    return llrs, systematic


def bcjr(trellis, priors, llrs, config=None, systematic=None):
    """Runs the symbol-wise forward-backward (BCJR) algorithm in the log domain. Encoding starts in
    state 0 and the final state is unknown. Punctured parity positions should carry 0.

    :param trellis: constituent trellis
    :type trellis: TableTrellis
    :param priors: (T, 2^k) symbol log-priors. None means uniform
    :type priors: Union[numpy.ndarray, None]
    :param llrs: (T, n) parity log-likelihood ratios or a flat array of T·n values
    :type llrs: array_like
    :param config: decoder config, only the algorithm is used
    :type config: Union[DecoderConfig, None]
    :param systematic: (T, k) log-likelihood ratios of the systematic bits or None
    :type systematic: Union[array_like, None]
    :return: normalized symbol log-posteriors and normalized extrinsic log-probabilities (posterior
             without the prior and systematic terms), both (T, 2^k)
    :rtype: Tuple[numpy.ndarray, numpy.ndarray]
    :raises: ValueError
    """
    config = DecoderConfig() if config is None else config
    llrs, systematic = _check_inputs(trellis, llrs, priors, systematic)
    reduce = np.max if config.algorithm == Algorithm.MaxLogMap else np.logaddexp.reduce

    gamma, symbol = _branch_metrics(trellis, llrs, priors, systematic)
    steps, num_states = llrs.shape[0], trellis.num_states
    topology = trellis.topology
    incoming = gamma[:, topology.pred_state, topology.pred_input]

    alpha = np.empty((steps + 1, num_states))
    alpha[0] = -np.inf
    alpha[0, 0] = 0.0
    for t in range(steps):
        values = reduce(alpha[t][topology.pred_state] + incoming[t], axis=1)
        alpha[t + 1] = values - reduce(values)

    beta = np.empty((steps + 1, num_states))
    beta[steps] = 0.0
    next_state = topology.next_state
    for t in range(steps - 1, -1, -1):
        values = reduce(gamma[t] + beta[t + 1][next_state], axis=1)
        beta[t] = values - reduce(values)

    joint = alpha[:-1, :, None] + gamma + beta[1:][:, next_state]
    posterior = reduce(joint, axis=1)
    posterior = posterior - reduce(posterior, axis=1)[:, None]

    extrinsic = posterior - symbol
    extrinsic = extrinsic - reduce(extrinsic, axis=1)[:, None]
    return posterior, extrinsic


def viterbi(trellis, llrs, priors=None, systematic=None):
    """Finds the most likely input symbol sequence starting in state 0 with a free final state

    :param trellis: constituent trellis
    :type trellis: TableTrellis
    :param llrs: (T, n) parity log-likelihood ratios or a flat array of T·n values
    :type llrs: array_like
    :param priors: (T, 2^k) symbol log-priors. None means uniform
    :type priors: Union[numpy.ndarray, None]
    :param systematic: (T, k) log-likelihood ratios of the systematic bits or None
    :type systematic: Union[array_like, None]
    :return: decoded symbols
    :rtype: numpy.ndarray[numpy.int64]
    """
    llrs, systematic = _check_inputs(trellis, llrs, priors, systematic)
    gamma, _ = _branch_metrics(trellis, llrs, priors, systematic)
    steps = llrs.shape[0]
    topology = trellis.topology
    incoming = gamma[:, topology.pred_state, topology.pred_input]

    metric = np.full(trellis.num_states, -np.inf)
    metric[0] = 0.0
    survivor = np.empty((steps, trellis.num_states), dtype=np.int64)
    for t in range(steps):
        values = metric[topology.pred_state] + incoming[t]
        survivor[t] = np.argmax(values, axis=1)
        metric = values[np.arange(trellis.num_states), survivor[t]]

    symbols = np.empty(steps, dtype=np.int64)
    state = int(np.argmax(metric))
    for t in range(steps - 1, -1, -1):
        branch = survivor[t, state]
        symbols[t] = topology.pred_input[state, branch]
        state = topology.pred_state[state, branch]
    return symbols


def depuncture(spec, llrs):
    """Splits codeword log-likelihood ratios into the systematic and parity streams, putting 0 in the
    punctured parity positions

    :param spec: code
    :type spec: CodeSpec
    :param llrs: log-likelihood ratios in transmitted order
    :type llrs: array_like
    :return: systematic (T, k) or None, parity 1 (T, n1) and parity 2 (T, n2) in encoder order
    :rtype: Tuple[Union[numpy.ndarray, None], numpy.ndarray, numpy.ndarray]
    :raises: ValueError
    """
    llrs = np.asarray(llrs, dtype=float).ravel()
    if llrs.size != spec.codeword_length:
        raise ValueError(f'{llrs.size} log-likelihood ratios do not match the codeword length '
                         f'{spec.codeword_length}.')

    start = spec.systematic_length
    systematic = llrs[:start].reshape(-1, spec.k) if spec.include_systematic else None
    kept1, _ = spec.parity_lengths

    parity1 = np.zeros(spec.keep1.size)
    parity1[spec.keep1] = llrs[start:start + kept1]
    parity2 = np.zeros(spec.keep2.size)
    parity2[spec.keep2] = llrs[start + kept1:]
    return systematic, parity1.reshape(spec.steps, -1), parity2.reshape(spec.steps, -1)


def turbo_decode(spec, llrs, config=None):
    """Decodes one block by alternating BCJR passes over the two constituent trellises that exchange
    symbol-wise extrinsic information through the interleaver

    :param spec: code
    :type spec: CodeSpec
    :param llrs: log-likelihood ratios of the received codeword in transmitted order
    :type llrs: array_like
    :param config: decoder config
    :type config: Union[DecoderConfig, None]
    :return: decoded message bits
    :rtype: numpy.ndarray[numpy.uint8]
    """
    config = DecoderConfig() if config is None else config
    systematic, parity1, parity2 = depuncture(spec, llrs)
    interleaver = spec.interleaver
    systematic2 = None if systematic is None else interleaver.interleave(systematic)

    extrinsic2 = np.zeros((spec.steps, 1 << spec.k))
    decisions = None
    for iteration in range(config.max_iterations):
        _, extrinsic1 = bcjr(spec.constituent, extrinsic2, parity1, config, systematic)
        posterior2, extrinsic = bcjr(spec.constituent2, interleaver.interleave(extrinsic1), parity2, config,
                                     systematic2)
        extrinsic2 = interleaver.deinterleave(extrinsic)

        updated = np.argmax(interleaver.deinterleave(posterior2), axis=1)
        if config.early_stop and decisions is not None and np.array_equal(updated, decisions):
            logger.debug('decoder converged after %d iterations', iteration + 1)
            decisions = updated
            break
        decisions = updated

    return symbols_to_bits(decisions, spec.k)
