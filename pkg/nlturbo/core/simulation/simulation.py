"""
Monte Carlo bit error rate sweeps, ones density measurements, code audits and code design runs
"""
from collections import namedtuple
from fractions import Fraction
import functools
import logging
import math
import time
import numpy as np
from scipy.stats import norm
from ..channel.capacity import bbsc_region, pick_p1, z_capacity, z_crossover_for_capacity
from ..channel.model import ChannelModel
from ..coding.decoder import DecoderConfig, channel_llr, turbo_decode
from ..coding.designer import DesignParams, design_trellis
from ..coding.interleaver import make_interleaver
from ..coding.metrics import DistanceMetric, distance_report, effective_free_distance
from ..coding.superposition import simulate_block
from ..coding.tables import default_topology, load_table_i
from ..coding.trellis import ones_density
from ..coding.turbo import (TABLE_II, CodeSpec, analytic_ones_density, density_estimate, encode, rate_of, table_ii_spec,
                           uniform_puncture)
from ..io.reader import CodeDefinition, read_definition
from ..util.misc import StopReason, rng_stream
from ..util.worker import Worker
from ...config import __version__, settings

logger = logging.getLogger(__name__)

Interval = namedtuple('Interval', ['value', 'low', 'high'])

FULL_GAPS = (0.018, 0.05)
FULL_TARGET_BER = 1e-5
DENSITY_MIN_BITS = 1_000_000

Z_SWEEP_COLUMNS = ['rate', 'p', 'capacity', 'gap', 'density', 'density_stderr', 'info_bits', 'blocks', 'bit_errors',
                   'frame_errors', 'ber', 'ber_low', 'ber_high', 'fer', 'fer_low', 'fer_high', 'stop_reason']
BBSC_COLUMNS = ['alpha', 'beta', 'p1', 'user', 'rate', 'capacity', 'gap', 'info_bits', 'blocks', 'bit_errors',
                'frame_errors', 'ber', 'ber_low', 'ber_high', 'fer', 'fer_low', 'fer_high', 'stop_reason',
                'cancellation_failures', 'genie_ber']
DENSITY_COLUMNS = ['rate', 'puncture1', 'puncture2', 'density', 'density_stderr', 'bits', 'analytic', 'reference',
                   'optimal']


def format_rate(rate):
    """Writes an exact rate as 'a/b'

    :param rate: rate
    :type rate: fractions.Fraction
    :return: rate text
    :rtype: str
    """
    return f'{rate.numerator}/{rate.denominator}'


def _as_rate(value):
    return Fraction(str(value)) if isinstance(value, float) else Fraction(value)


def wilson_interval(errors, trials, confidence=0.95):
    """Computes the Wilson score interval of an error probability

    :param errors: number of errors
    :type errors: int
    :param trials: number of trials
    :type trials: int
    :param confidence: confidence level
    :type confidence: float
    :return: point estimate and interval bounds
    :rtype: Interval
    :raises: ValueError
    """
    if not 0 < confidence < 1:
        raise ValueError(f'confidence {confidence} is outside (0, 1).')
    if errors < 0 or errors > trials:
        raise ValueError(f'errors ({errors}) should be in [0, trials ({trials})].')
    if trials == 0:
        return Interval(0.0, 0.0, 1.0)

    z = norm.ppf(0.5 + confidence / 2)
    estimate = errors / trials
    z2 = z * z
    denominator = 1 + z2 / trials
    centre = (estimate + z2 / (2 * trials)) / denominator
    half_width = z * math.sqrt(estimate * (1 - estimate) / trials + z2 / (4 * trials * trials)) / denominator
    return Interval(estimate, max(0.0, centre - half_width), min(1.0, centre + half_width))


class SimReport:
    """Collects the results of one command together with the echo of its configuration. Wall times
    are recorded with every point but only written when requested, so reports of reruns with the
    same seed are identical.

    :param command: command name
    :type command: str
    :param config: configuration echo
    :type config: Dict
    """
    def __init__(self, command, config):
        self.command = command
        self.config = config
        self.points = []
        self.sections = {}

    def toDict(self, timing=False):
        """Creates the report document

        :param timing: include the wall time of each point
        :type timing: bool
        :return: report
        :rtype: Dict
        """
        report = {'command': self.command, 'version': __version__, 'config': self.config}
        if self.points:
            report['points'] = [point if timing else {k: v for k, v in point.items() if k != 'wall_time'}
                                for point in self.points]
        report.update(self.sections)
        return report

    def rows(self):
        """Flattens the report into CSV rows

        :return: rows and column names
        :rtype: Tuple[List[Dict], List[str]]
        """
        if self.command == 'density':
            rows = []
            for entry in self.sections.get('density', []):
                measured = entry['measured']
                rows.append({'rate': entry['rate'], 'puncture1': entry['puncture1'], 'puncture2': entry['puncture2'],
                             'density': measured['value'], 'density_stderr': measured['stderr'],
                             'bits': measured['bits'], 'analytic': entry['analytic'],
                             'reference': entry['reference'], 'optimal': entry['optimal']})
            return rows, DENSITY_COLUMNS

        if self.command == 'bbsc-sim':
            rows = []
            for point in self.points:
                alpha, beta = point['channel']['params']
                for index, user in enumerate(point['users']):
                    row = {'alpha': alpha, 'beta': beta, 'p1': point['p1'], 'user': index + 1,
                           'info_bits': point['info_bits'], 'blocks': point['blocks'],
                           'stop_reason': point['stop_reason'], **_flatten_errors(user)}
                    row.update(rate=user['rate'], capacity=user['capacity'], gap=user['gap'])
                    if index == 0:
                        row['cancellation_failures'] = point['cancellation_failures']
                        if 'genie_ber' in point:
                            row['genie_ber'] = point['genie_ber']['value']
                    rows.append(row)
            return rows, BBSC_COLUMNS

        rows = []
        for point in self.points:
            row = {'rate': point['rate'], 'p': point['channel']['params'][0], 'capacity': point['capacity'],
                   'gap': point['gap'], 'density': point['density']['value'],
                   'density_stderr': point['density']['stderr'], 'info_bits': point['info_bits'],
                   'blocks': point['blocks'], 'stop_reason': point['stop_reason'], **_flatten_errors(point)}
            rows.append(row)
        return rows, Z_SWEEP_COLUMNS


def _flatten_errors(entry):
    return {'bit_errors': entry['bit_errors'], 'frame_errors': entry['frame_errors'], 'ber': entry['ber']['value'],
            'ber_low': entry['ber']['low'], 'ber_high': entry['ber']['high'], 'fer': entry['fer']['value'],
            'fer_low': entry['fer']['low'], 'fer_high': entry['fer']['high']}


def _error_fields(bit_errors, frame_errors, blocks, info_bits):
    return {'bit_errors': bit_errors, 'frame_errors': frame_errors,
            'ber': wilson_interval(bit_errors, blocks * info_bits)._asdict(),
            'fer': wilson_interval(frame_errors, blocks)._asdict()}


def _density_fields(estimate):
    return {'value': estimate.density, 'stderr': estimate.stderr, 'bits': estimate.bits}


def _limits(error_target, block_budget):
    error_target = settings.value(settings.Key.Error_Target) if error_target is None else error_target
    block_budget = settings.value(settings.Key.Block_Budget) if block_budget is None else block_budget
    if error_target < 1 or block_budget < 1:
        raise ValueError(f'error target ({error_target}) and block budget ({block_budget}) should be positive.')
    return int(error_target), int(block_budget)


def crossovers_for_gaps(rate, gaps):
    """Finds the Z-channel crossovers at which the capacity exceeds the rate by each gap

    :param rate: code rate
    :type rate: Union[float, fractions.Fraction]
    :param gaps: gaps to capacity in bits
    :type gaps: Iterable[float]
    :return: crossover probabilities
    :rtype: List[float]
    :raises: ValueError
    """
    crossovers = []
    for gap in gaps:
        capacity = float(rate) + gap
        if not 0 < capacity < 1:
            raise ValueError(f'rate {float(rate):.4f} plus gap {gap} is not a Z-channel capacity in (0, 1).')
        crossovers.append(z_crossover_for_capacity(capacity))
    return crossovers


def full_block_budget(info_bits, error_target=None):
    """Computes the block budget needed to observe the error target at the BER of the full-scale
    operating points

    :param info_bits: message bits per block
    :type info_bits: int
    :param error_target: number of bit errors. None uses the Error_Target setting
    :type error_target: Union[int, None]
    :return: block budget
    :rtype: int
    """
    error_target = settings.value(settings.Key.Error_Target) if error_target is None else error_target
    return math.ceil(error_target / (FULL_TARGET_BER * info_bits))


def _z_block(spec, channel, config, seed, point, block):
    rng = rng_stream(seed, point, block)
    message = rng.integers(0, 2, spec.info_bits, dtype=np.uint8)
    codeword = encode(spec, message)
    received = channel.transmit(codeword, rng)
    decoded = turbo_decode(spec, channel_llr(channel, received, config.llr_cap), config)
    return int(np.count_nonzero(decoded != message)), int(codeword.sum())


def run_zsweep(spec, crossovers, seed=0, config=None, error_target=None, block_budget=None, threads=None,
               config_echo=None):
    """Simulates a turbo code on the Z-channel at each crossover. Blocks are drawn from streams
    keyed by (seed, point, block) and are tallied in block order until the bit error target or the
    block budget is reached, so the result does not depend on the number of workers. A rate above
    capacity is logged and reported with a negative gap.

    :param spec: code
    :type spec: CodeSpec
    :param crossovers: Z-channel crossover probabilities
    :type crossovers: Iterable[float]
    :param seed: master seed
    :type seed: int
    :param config: decoder config
    :type config: Union[DecoderConfig, None]
    :param error_target: bit errors at which a point stops. None uses the Error_Target setting
    :type error_target: Union[int, None]
    :param block_budget: maximum blocks per point. None uses the Block_Budget setting
    :type block_budget: Union[int, None]
    :param threads: number of workers. None uses the Threads setting
    :type threads: Union[int, None]
    :param config_echo: extra configuration to echo in the report
    :type config_echo: Union[Dict, None]
    :return: report with one point per crossover
    :rtype: SimReport
    :raises: ValueError
    """
    config = DecoderConfig() if config is None else config
    error_target, block_budget = _limits(error_target, block_budget)
    rate = rate_of(spec)
    crossovers = [float(p) for p in crossovers]

    echo = {'seed': seed, 'decoder': config.toDict(), 'error_target': error_target, 'block_budget': block_budget,
            'crossovers': crossovers, **(config_echo or {})}
    report = SimReport('z-sim', echo)

    for index, p in enumerate(crossovers):
        channel = ChannelModel.z(p)
        capacity = channel.capacity()
        gap = capacity - float(rate)
        if gap < 0:
            logger.warning('rate %s exceeds the capacity %.4f of Z(%g), the gap is negative', format_rate(rate),
                           capacity, p)

        start = time.perf_counter()
        job = functools.partial(_z_block, spec, channel, config, seed, index)
        bit_errors = frame_errors = blocks = 0
        block_ones = []
        stop_reason = StopReason.Budget
        for errors, ones in Worker(job, threads).run(range(block_budget)):
            blocks += 1
            bit_errors += errors
            frame_errors += errors > 0
            block_ones.append(ones)
            if bit_errors >= error_target:
                stop_reason = StopReason.Errors
                break

        density = density_estimate(block_ones, spec.codeword_length)
        point = {'rate': format_rate(rate), 'rate_value': float(rate), 'channel': {'kind': 'z', 'params': [p]},
                 'capacity': capacity, 'gap': gap, 'infeasible': gap < 0, 'density': _density_fields(density),
                 'info_bits': spec.info_bits, 'blocks': blocks, 'stop_reason': stop_reason.value,
                 **_error_fields(bit_errors, int(frame_errors), blocks, spec.info_bits),
                 'wall_time': time.perf_counter() - start}
        report.points.append(point)
        logger.info('Z(%g): %d blocks, %d bit errors, BER %.3e (%s)', p, blocks, bit_errors, point['ber']['value'],
                    stop_reason.value)

    return report


def _bbsc_block(superposition, channel, config, genie, seed, block):
    return simulate_block(superposition, channel, rng_stream(seed, block), config, genie)


def run_bbsc(superposition, alpha, beta, seed=0, config=None, genie=False, error_target=None, block_budget=None,
             threads=None, config_echo=None):
    """Simulates a superposition code on the BBSC. The point stops once both users reach the bit
    error target or the block budget runs out. Each user's gap is measured against the capacity
    region boundary at the user-1 ones density.

    :param superposition: superposition code
    :type superposition: SuperpositionSpec
    :param alpha: crossover of user 1's channel
    :type alpha: float
    :param beta: crossover of user 2's channel
    :type beta: float
    :param seed: master seed
    :type seed: int
    :param config: decoder config
    :type config: Union[DecoderConfig, None]
    :param genie: also decode user 1 with user 2's codeword known
    :type genie: bool
    :param error_target: bit errors at which the point stops. None uses the Error_Target setting
    :type error_target: Union[int, None]
    :param block_budget: maximum blocks. None uses the Block_Budget setting
    :type block_budget: Union[int, None]
    :param threads: number of workers. None uses the Threads setting
    :type threads: Union[int, None]
    :param config_echo: extra configuration to echo in the report
    :type config_echo: Union[Dict, None]
    :return: report with one point
    :rtype: SimReport
    :raises: ValueError
    """
    config = DecoderConfig() if config is None else config
    error_target, block_budget = _limits(error_target, block_budget)
    channel = ChannelModel.bbsc(alpha, beta)
    p1 = superposition.p1
    rates = superposition.rates
    boundary = bbsc_region(alpha, beta, p1)
    capacities = (boundary.r1, boundary.r2)

    echo = {'seed': seed, 'decoder': config.toDict(), 'error_target': error_target, 'block_budget': block_budget,
            'alpha': alpha, 'beta': beta, 'p1': p1, 'genie': genie, **(config_echo or {})}
    report = SimReport('bbsc-sim', echo)

    start = time.perf_counter()
    job = functools.partial(_bbsc_block, superposition, channel, config, genie, seed)
    bit_errors = [0, 0]
    frame_errors = [0, 0]
    cancellation_failures = genie_errors = blocks = 0
    stop_reason = StopReason.Budget
    for result in Worker(job, threads).run(range(block_budget)):
        blocks += 1
        for user, errors in enumerate((result.bit_errors1, result.bit_errors2)):
            bit_errors[user] += errors
            frame_errors[user] += errors > 0
        cancellation_failures += result.cancellation_failure
        if genie:
            genie_errors += result.genie_bit_errors1
        if min(bit_errors) >= error_target:
            stop_reason = StopReason.Errors
            break

    users = []
    for user, spec in enumerate((superposition.spec1, superposition.spec2)):
        gap = capacities[user] - float(rates[user])
        if gap < 0:
            logger.warning('rate %s of user %d exceeds the region boundary %.4f', format_rate(rates[user]), user + 1,
                           capacities[user])
        users.append({'rate': format_rate(rates[user]), 'capacity': capacities[user], 'gap': gap,
                      **_error_fields(bit_errors[user], int(frame_errors[user]), blocks, spec.info_bits)})

    point = {'rate': format_rate(rates[0] + rates[1]), 'rate_value': float(rates[0] + rates[1]),
             'channel': {'kind': 'bbsc', 'params': [alpha, beta]}, 'p1': p1,
             'info_bits': superposition.spec1.info_bits + superposition.spec2.info_bits, 'blocks': blocks,
             'stop_reason': stop_reason.value, 'users': users, 'cancellation_failures': int(cancellation_failures),
             'wall_time': time.perf_counter() - start}
    if genie:
        point['genie_ber'] = wilson_interval(genie_errors, blocks * superposition.spec1.info_bits)._asdict()
    report.points.append(point)
    logger.info('BBSC(%g, %g): %d blocks, BER %.3e / %.3e, %d cancellation failures', alpha, beta, blocks,
                users[0]['ber']['value'], users[1]['ber']['value'], cancellation_failures)

    return report


def _density_block(spec, seed, row, block):
    rng = rng_stream(seed, row, block)
    return int(encode(spec, rng.integers(0, 2, spec.info_bits, dtype=np.uint8)).sum())


def run_density(rows=TABLE_II, info_bits=20000, seed=0, min_bits=DENSITY_MIN_BITS, trellis=None, threads=None,
                spread=None):
    """Measures the codeword ones density of the punctured codes built on a constituent trellis with
    uniformly random messages and compares it with the expected density

    :param rows: puncture rows
    :type rows: Iterable[TableIIRow]
    :param info_bits: message bits per block
    :type info_bits: int
    :param seed: master seed
    :type seed: int
    :param min_bits: minimum number of coded bits measured per row
    :type min_bits: int
    :param trellis: constituent trellis. None uses the embedded 16-state code
    :type trellis: Union[TableTrellis, None]
    :param threads: number of workers. None uses the Threads setting
    :type threads: Union[int, None]
    :param spread: interleaver spread. None uses the default spread
    :type spread: Union[int, None]
    :return: report with a density section
    :rtype: SimReport
    """
    trellis = load_table_i() if trellis is None else trellis
    if info_bits % trellis.k:
        raise ValueError(f'info_bits ({info_bits}) should be a multiple of k ({trellis.k}).')
    interleaver = make_interleaver(info_bits // trellis.k, spread, seed)

    report = SimReport('density', {'seed': seed, 'info_bits': info_bits, 'min_bits': min_bits,
                                   'spread': interleaver.spread})
    entries = []
    for index, row in enumerate(rows):
        spec = table_ii_spec(row, info_bits, trellis=trellis, interleaver=interleaver)
        num_blocks = max(1, math.ceil(min_bits / spec.codeword_length))
        job = functools.partial(_density_block, spec, seed, index)
        estimate = density_estimate(Worker.callFromWorker(job, range(num_blocks), threads), spec.codeword_length)
        entries.append({'rate': format_rate(rate_of(spec)), 'puncture1': row.puncture1, 'puncture2': row.puncture2,
                        'measured': _density_fields(estimate), 'analytic': float(analytic_ones_density(spec)),
                        'reference': row.ones_density, 'optimal': row.optimal_density})
        logger.info('rate %s: measured density %.4f ± %.4f over %d bits', entries[-1]['rate'], estimate.density,
                    estimate.stderr, estimate.bits)

    report.sections['density'] = entries
    return report


def audit_code(filename, metric=None, max_depth=None):
    """Recomputes the distances, ones count, density and rate of a code file and compares them with the
    values the file declares. Distances are only compared when computed with the declared metric.

    :param filename: path of a trellis or turbo code file
    :type filename: str
    :param metric: distance metric. None uses the declared metric or the z metric
    :type metric: Union[MetricKind, str, None]
    :param max_depth: depth of the effective free distance search. None uses the declared depth or
                      the Depth_Factor setting
    :type max_depth: Union[int, None]
    :return: report with an audit section, the audit lists every mismatch
    :rtype: SimReport
    :raises: CodeFileError
    """
    definition = read_definition(filename)
    if isinstance(definition, CodeDefinition):
        trellis, declared, spec, declared_rate = definition.trellis, definition.declared, None, None
    else:
        spec, declared, declared_rate = definition.spec, definition.declared, definition.declared_rate
        trellis = spec.constituent

    declared_metric = declared.get('metric')
    metric = DistanceMetric(metric if metric is not None else declared_metric or 'z')
    if max_depth is None:
        max_depth = declared.get('max_depth', settings.value(settings.Key.Depth_Factor) * trellis.num_states)
    systematic = declared.get('systematic', True if spec is None else spec.include_systematic)

    distances = distance_report(trellis, metric)
    free = effective_free_distance(trellis, metric, trellis.k if systematic else 0, max_depth)
    density = ones_density(trellis)
    audit = {'file': str(filename), 'name': definition.name, 'metric': metric.kind.value, 'max_depth': max_depth,
             'systematic': systematic, 'ones': trellis.onesCount(), 'density': float(density),
             'branch_distance': distances.branch_distance, 'merge_distance': distances.merge_distance,
             'per_state_branch': distances.per_state_branch, 'per_state_merge': distances.per_state_merge,
             'effective_free_distance': free.distance, 'merged': free.merged}

    mismatches = []
    checks = ['ones']
    if declared_metric is None or declared_metric == metric.kind.value:
        checks.extend(['branch_distance', 'merge_distance', 'effective_free_distance'])
    for key in checks:
        if key in declared and declared[key] != audit[key]:
            mismatches.append({'field': key, 'declared': declared[key], 'recomputed': audit[key]})

    if spec is not None:
        rate = rate_of(spec)
        audit['rate'] = format_rate(rate)
        audit['codeword_density'] = float(analytic_ones_density(spec))
        if declared_rate is not None and declared_rate != rate:
            mismatches.append({'field': 'rate', 'declared': format_rate(declared_rate), 'recomputed': audit['rate']})

    audit['mismatches'] = mismatches
    for mismatch in mismatches:
        logger.warning('%s: declared %s %s but recomputed %s', filename, mismatch['field'], mismatch['declared'],
                       mismatch['recomputed'])

    report = SimReport('audit', {'file': str(filename), 'metric': metric.kind.value, 'max_depth': max_depth})
    report.sections['audit'] = audit
    return report


def design_code(params, topology=None, threads=None):
    """Runs the design procedure and collects the design report

    :param params: design parameters
    :type params: DesignParams
    :param topology: state transition structure. None uses the default 16-state topology
    :type topology: Union[TrellisTopology, None]
    :param threads: number of workers. None uses the Threads setting
    :type threads: Union[int, None]
    :return: design and report with a design section
    :rtype: Tuple[DesignResult, SimReport]
    :raises: InfeasibleDesignError, MergeDistanceError
    """
    topology = default_topology() if topology is None else topology
    start = time.perf_counter()
    result = design_trellis(params, topology, threads)
    logger.info('design finished in %.1f s', time.perf_counter() - start)

    report = SimReport('design', params.toDict())
    report.sections['design'] = {**result.toDict(), 'labels': result.trellis.octal(),
                                 'next_state': topology.next_state.tolist()}
    return result, report


def superposition_design_params(alpha, beta, r1, r2, k=2, d_b=0, d_m=1, metric='z', n=None, num_candidates=1,
                                rng_seed=0, max_merge_retries=None, max_depth=None):
    """Creates the design parameters of user 1's non-systematic code for the rate pair (r1, r2) on
    BBSC(alpha, beta). The target density is the p1 selected by pick_p1. Without n the table is as
    wide as the rate allows without puncturing, k/(2·r1) bits rounded up.

    :param alpha: crossover of the stronger channel
    :type alpha: float
    :param beta: crossover of the weaker channel
    :type beta: float
    :param r1: rate of user 1
    :type r1: Union[fractions.Fraction, str]
    :param r2: rate of user 2
    :type r2: Union[fractions.Fraction, float, str]
    :param k: input bits per step
    :type k: int
    :return: density interval and design parameters
    :rtype: Tuple[DensityInterval, DesignParams]
    :raises: ValueError
    """
    r1 = _as_rate(r1)
    if not 0 < r1 <= Fraction(k, 2):
        raise ValueError(f'user 1 rate {r1} is outside (0, {Fraction(k, 2)}] for a non-systematic code.')

    interval = pick_p1(alpha, beta, float(r1), float(_as_rate(r2)))
    kept = Fraction(k) / (2 * r1)
    n = math.ceil(kept) if n is None else int(n)
    if n < kept:
        raise ValueError(f'a {n}-bit table keeps fewer than the {kept} parity bits per step rate {r1} needs.')

    params = DesignParams(interval.p1, d_b, d_m, metric, n, num_candidates, rng_seed, max_merge_retries, False,
                          max_depth)
    return interval, params


def design_superposition_code(alpha, beta, r1, r2, params, topology=None, info_bits=20000, interleaver_seed=1,
                              threads=None):
    """Designs user 1's code of a superposition pair: the table is designed at the density of
    pick_p1 and both parity streams are punctured evenly down to rate r1. Low densities need wide
    tables to avoid all-zero labels, the puncturing restores the rate without moving the density.

    :param alpha: crossover of the stronger channel
    :type alpha: float
    :param beta: crossover of the weaker channel
    :type beta: float
    :param r1: rate of user 1
    :type r1: Union[fractions.Fraction, str]
    :param r2: rate of user 2
    :type r2: Union[fractions.Fraction, float, str]
    :param params: design parameters e.g. from superposition_design_params
    :type params: DesignParams
    :param topology: state transition structure. None uses the default 16-state topology
    :type topology: Union[TrellisTopology, None]
    :param info_bits: message bits per block K
    :type info_bits: int
    :param interleaver_seed: interleaver seed
    :type interleaver_seed: int
    :param threads: number of workers. None uses the Threads setting
    :type threads: Union[int, None]
    :return: design, non-systematic code of rate r1 and report with a design section
    :rtype: Tuple[DesignResult, CodeSpec, SimReport]
    :raises: ValueError, InfeasibleDesignError, MergeDistanceError
    """
    topology = default_topology() if topology is None else topology
    r1, r2 = _as_rate(r1), _as_rate(r2)
    interval = pick_p1(alpha, beta, float(r1), float(r2))
    kept = Fraction(topology.k) / (2 * r1) / params.n
    if kept > 1:
        raise ValueError(f'a {params.n}-bit table cannot reach rate {r1} without repeating parity bits.')

    period = math.lcm(params.n, kept.denominator)
    puncture = uniform_puncture(period, period - int(period * kept))
    result, report = design_code(params, topology, threads)

    spec = CodeSpec(result.trellis, make_interleaver(info_bits // topology.k, None, interleaver_seed), puncture,
                    puncture, include_systematic=False, info_bits=info_bits)
    if rate_of(spec) != r1:
        raise ValueError(f'K={info_bits} gives rate {format_rate(rate_of(spec))}, K/k should be a multiple of '
                         f'{period // math.gcd(period, params.n)} steps for rate {r1}.')

    density = float(analytic_ones_density(spec))
    logger.info('user 1 code: p1 %.4f in (%.4f, %.4f), puncture %s/%d, codeword density %.4f', interval.p1,
                interval.lower, interval.upper, puncture.octal(), period, density)
    report.sections['design']['superposition'] = {
        'alpha': alpha, 'beta': beta, 'r1': format_rate(r1), 'r2': format_rate(r2),
        'p1': interval.p1, 'p1_lower': interval.lower, 'p1_upper': interval.upper, 'period': period,
        'puncture': puncture.octal(), 'rate': format_rate(rate_of(spec)), 'codeword_density': density}
    return result, spec, report


def declared_properties(result, params):
    """Creates the self-declared properties written with a designed trellis

    :param result: design
    :type result: DesignResult
    :param params: design parameters
    :type params: DesignParams
    :return: declared properties
    :rtype: Dict
    """
    trellis = result.trellis
    max_depth = params.max_depth
    if max_depth is None:
        max_depth = settings.value(settings.Key.Depth_Factor) * trellis.num_states
    return {'ones': trellis.onesCount(), 'metric': params.metric.kind.value,
            'branch_distance': result.branch_distance, 'merge_distance': result.merge_distance,
            'effective_free_distance': result.effective_free_distance, 'max_depth': max_depth,
            'systematic': params.systematic}
