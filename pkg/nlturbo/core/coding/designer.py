"""
Randomized design of nonlinear table trellises with a target ones density
"""
from fractions import Fraction
import functools
import itertools
import logging
import math
import numpy as np
from .metrics import DistanceMetric, branch_distance, distance_report, effective_free_distance
from .trellis import StateSubTable, TableTrellis, octal_encode
from ..math.misc import popcount
from ..util.misc import rng_stream
from ..util.worker import Worker
from ...config import settings

logger = logging.getLogger(__name__)


class InfeasibleDesignError(ValueError):
    """Raised when no sub-table with the requested ones count exceeds the branch distance floor.
    The floor d_b should be lowered."""


class MergeDistanceError(ValueError):
    """Raised when no permutation draw reaches the merge distance floor within the retry budget.
    The floor d_m should be lowered."""


def _as_fraction(value):
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    return Fraction(str(value))


def target_ones(density, n, k):
    """Computes the number of ones ν to place in a 2^k x n sub-table, the nearest integer to
    density·n·2^k with half-way values rounded up

    :param density: target ones density in (0, 1)
    :type density: Union[float, fractions.Fraction]
    :param n: output bits per transition
    :type n: int
    :param k: input bits per step
    :type k: int
    :return: ones count
    :rtype: int
    :raises: ValueError
    """
    density = _as_fraction(density)
    if not 0 < density < 1:
        raise ValueError(f'target ones density {density} is outside (0, 1).')

    total = n << k
    ones = math.floor(density * total + Fraction(1, 2))
    if ones == 0 or ones == total:
        raise ValueError(f'target ones density {float(density)} gives {ones} of {total} ones, a table of all '
                         f'{"zeros" if ones == 0 else "ones"} has no distance.')
    return ones


def _min_distance(rows, metric):
    value = n_min = None
    for x, y in itertools.combinations(rows, 2):
        d = metric.distance(x, y) if metric.symmetric else min(metric.distance(x, y), metric.distance(y, x))
        if value is None or d < value:
            value, n_min = d, 1
        elif d == value:
            n_min += 1
    return value, n_min


def _spread(rows):
    return sum(popcount(row) ** 2 for row in rows)


def _exhaustive_search(ones, n, k, metric, floor):
    """Branch and bound over strictly increasing row tuples. Row order does not change the pairwise
    distances so only sorted tables are visited. Ties on distance prefer evenly spread row weights."""
    num_rows = 1 << k
    max_row = 1 << n
    weights = [popcount(row) for row in range(max_row)]
    best = {'key': (floor, -math.inf), 'rows': None}

    def _search(rows, remaining, current):
        depth = len(rows)
        left = num_rows - depth
        if left == 0:
            if remaining == 0:
                key = (current, -_spread(rows))
                if key > best['key']:
                    best['key'], best['rows'] = key, tuple(rows)
            return

        start = rows[-1] + 1 if rows else 0
        for row in range(start, max_row - left + 1):
            weight = weights[row]
            if weight > remaining or remaining - weight > (left - 1) * n:
                continue
            value = current
            for other in rows:
                d = metric.distance(other, row)
                if not metric.symmetric:
                    d = min(d, metric.distance(row, other))
                value = d if value is None else min(value, d)
                if value < best['key'][0] or value <= floor:
                    break
            else:
                _search(rows + [row], remaining - weight, value)

    _search([], ones, None)
    return best['rows']


def _random_table(ones, n, k, rng):
    cells = np.zeros((1 << k) * n, dtype=np.uint8)
    cells[rng.choice(cells.size, size=ones, replace=False)] = 1
    return cells


def _rows_from_cells(cells, n):
    weights = 1 << np.arange(n - 1, -1, -1)
    return tuple(int(v) for v in cells.reshape(-1, n).astype(np.int64) @ weights)


def _random_search(ones, n, k, metric, rng):
    """Hill climbing by swapping a one and a zero, accepting moves that do not reduce the minimum
    distance (fewer minimum pairs break ties), with a fresh random table every restart interval"""
    moves = settings.value(settings.Key.Search_Moves)
    restart = max(1, settings.value(settings.Key.Restart_Interval))

    best_rows, best_key = None, None
    cells = current_key = None
    for move in range(moves):
        if move % restart == 0:
            cells = _random_table(ones, n, k, rng)
            value, count = _min_distance(_rows_from_cells(cells, n), metric)
            current_key = (value, -count)

        one = rng.choice(np.flatnonzero(cells))
        zero = rng.choice(np.flatnonzero(cells == 0))
        cells[one], cells[zero] = 0, 1
        value, count = _min_distance(_rows_from_cells(cells, n), metric)
        key = (value, -count)
        if key >= current_key:
            current_key = key
        else:
            cells[one], cells[zero] = 1, 0

        if best_key is None or current_key > best_key:
            best_key, best_rows = current_key, _rows_from_cells(cells, n)
            if best_key[0] >= n:
                break

    return best_rows


def _search_m1(ones, n, k, metric, floor, rng):
    total = n << k
    if not 0 < ones < total:
        raise ValueError(f'ones count {ones} is outside (0, {total}).')
    if (1 << k) > (1 << n):
        return None

    exhaustive = math.comb(total, ones) <= settings.value(settings.Key.Exhaustive_Limit)
    logger.debug('searching %d x %d sub-table with %d ones (%s)', 1 << k, n, ones,
                 'exhaustive' if exhaustive else 'randomized')
    if exhaustive:
        rows = _exhaustive_search(ones, n, k, metric, floor)
    else:
        rows = _random_search(ones, n, k, metric, rng)

    return None if rows is None else StateSubTable(rows, n)


def design_m1(ones, n, k, d_b, metric, rng=None):
    """Places the ones of the first state sub-table M(1) so that its branch distance is as large as
    the search can make it. The search is exhaustive when C(n·2^k, ν) does not exceed the
    Exhaustive_Limit setting and a restarted hill climb otherwise.

    :param ones: number of ones ν
    :type ones: int
    :param n: output bits per transition
    :type n: int
    :param k: input bits per step
    :type k: int
    :param d_b: branch distance floor, the result must exceed it
    :type d_b: int
    :param metric: distance metric
    :type metric: Union[DistanceMetric, MetricKind, str]
    :param rng: random generator for the randomized search
    :type rng: Union[numpy.random.Generator, None]
    :return: sub-table with exactly ν ones and branch distance greater than d_b
    :rtype: StateSubTable
    :raises: InfeasibleDesignError
    """
    metric = metric if isinstance(metric, DistanceMetric) else DistanceMetric(metric)
    rng = rng_stream(0) if rng is None else rng

    table = _search_m1(ones, n, k, metric, d_b, rng)
    if table is None or branch_distance(table, metric) <= d_b:
        found = 'none' if table is None else branch_distance(table, metric)
        raise InfeasibleDesignError(f'no {1 << k} x {n} sub-table with {ones} ones has a {metric.kind.value} branch '
                                    f'distance greater than {d_b} (best found: {found}). Lower d_b.')
    return table


def branch_floor(ones, n, k, metric, rng=None):
    """Finds the largest branch distance the M(1) search reaches for the given shape. Any d_b below
    the returned value is feasible for design_m1.

    :param ones: number of ones ν
    :type ones: int
    :param n: output bits per transition
    :type n: int
    :param k: input bits per step
    :type k: int
    :param metric: distance metric
    :type metric: Union[DistanceMetric, MetricKind, str]
    :param rng: random generator for the randomized search
    :type rng: Union[numpy.random.Generator, None]
    :return: best branch distance, 0 when every table repeats a row
    :rtype: int
    """
    metric = metric if isinstance(metric, DistanceMetric) else DistanceMetric(metric)
    rng = rng_stream(0) if rng is None else rng
    table = _search_m1(ones, n, k, metric, -1, rng)
    return 0 if table is None else branch_distance(table, metric)


def permute_subtable(subtable, row_perm, col_perm):
    """Returns Π1 M Π2 for a row permutation Π1 and column permutation Π2. The ones count and the
    multiset of pairwise row distances are unchanged.

    :param subtable: sub-table M
    :type subtable: StateSubTable
    :param row_perm: permutation of the 2^k rows
    :type row_perm: Sequence[int]
    :param col_perm: permutation of the n columns
    :type col_perm: Sequence[int]
    :return: permuted sub-table
    :rtype: StateSubTable
    :raises: ValueError
    """
    return subtable.permuted(row_perm, col_perm)


class DesignParams:
    """Parameters of the trellis design procedure

    :param target_density: target ones density u1 of the parity labels
    :type target_density: Union[float, fractions.Fraction]
    :param d_b: branch distance floor (the M(1) branch distance must exceed it)
    :type d_b: int
    :param d_m: merge distance floor (accepted trellises reach at least d_m)
    :type d_m: int
    :param metric: distance metric
    :type metric: Union[MetricKind, str]
    :param n: output bits per transition
    :type n: int
    :param num_candidates: number of accepted trellises to rank
    :type num_candidates: int
    :param rng_seed: master seed
    :type rng_seed: int
    :param max_merge_retries: permutation draws per candidate. None uses the Max_Merge_Retries setting
    :type max_merge_retries: Union[int, None]
    :param systematic: include systematic input bits in the effective free distance
    :type systematic: bool
    :param max_depth: depth of the effective free distance search. None uses the Depth_Factor setting
    :type max_depth: Union[int, None]
    :raises: ValueError
    """
    def __init__(self, target_density, d_b, d_m, metric='z', n=9, num_candidates=1, rng_seed=0,
                 max_merge_retries=None, systematic=True, max_depth=None):
        self.target_density = _as_fraction(target_density)
        if not 0 < self.target_density < 1:
            raise ValueError(f'target ones density {target_density} is outside (0, 1).')
        if d_b < 0 or d_m < 0:
            raise ValueError(f'distance floors should be non-negative, got d_b={d_b}, d_m={d_m}.')
        if num_candidates < 1:
            raise ValueError(f'num_candidates should be at least 1, got {num_candidates}.')
        if n < 1:
            raise ValueError(f'n should be at least 1, got {n}.')

        self.d_b = int(d_b)
        self.d_m = int(d_m)
        self.metric = DistanceMetric(metric)
        self.n = int(n)
        self.num_candidates = int(num_candidates)
        self.rng_seed = int(rng_seed) & 0xFFFFFFFFFFFFFFFF
        if max_merge_retries is None:
            max_merge_retries = settings.value(settings.Key.Max_Merge_Retries)
        self.max_merge_retries = max(1, int(max_merge_retries))
        self.systematic = bool(systematic)
        self.max_depth = max_depth

    def toDict(self):
        return {'target_density': float(self.target_density), 'd_b': self.d_b, 'd_m': self.d_m,
                'metric': self.metric.kind.value, 'n': self.n, 'num_candidates': self.num_candidates,
                'rng_seed': self.rng_seed, 'max_merge_retries': self.max_merge_retries,
                'systematic': self.systematic, 'max_depth': self.max_depth}


class DesignResult:
    """Outcome of the design procedure

    :param trellis: selected trellis
    :type trellis: TableTrellis
    :param achieved_density: ν/(n·2^k)
    :type achieved_density: fractions.Fraction
    :param branch_distance: trellis branch distance
    :type branch_distance: int
    :param merge_distance: trellis merge distance
    :type merge_distance: int
    :param effective_free_distance: effective free distance of the trellis
    :type effective_free_distance: int
    :param merged: indicates the effective free distance search found a merging path pair
    :type merged: bool
    :param seed_trace: seed, candidate and retry that produced the trellis
    :type seed_trace: Dict
    """
    def __init__(self, trellis, achieved_density, branch_distance, merge_distance, effective_free_distance, merged,
                 seed_trace):
        self.trellis = trellis
        self.achieved_density = achieved_density
        self.branch_distance = branch_distance
        self.merge_distance = merge_distance
        self.effective_free_distance = effective_free_distance
        self.merged = merged
        self.seed_trace = seed_trace

    def toDict(self):
        return {'achieved_density': float(self.achieved_density),
                'achieved_density_exact': f'{self.achieved_density.numerator}/{self.achieved_density.denominator}',
                'branch_distance': self.branch_distance, 'merge_distance': self.merge_distance,
                'effective_free_distance': self.effective_free_distance, 'merged': self.merged,
                'seed_trace': self.seed_trace}


def _permutations(seed, candidate, state, retry, num_rows, n):
    rng = rng_stream(seed, candidate, state, retry)
    return rng.permutation(num_rows), rng.permutation(n)


def _design_candidate(m1, params, topology, candidate):
    """Steps 4 and 5 for one candidate: replicate M(1) with random permutations until the merge
    distance floor is reached, then measure the effective free distance"""
    num_rows = topology.num_inputs
    for retry in range(params.max_merge_retries):
        subtables = [m1]
        for state in range(1, topology.num_states):
            row_perm, col_perm = _permutations(params.rng_seed, candidate, state, retry, num_rows, params.n)
            subtables.append(m1.permuted(row_perm, col_perm))

        trellis = TableTrellis(topology, subtables)
        report = distance_report(trellis, params.metric)
        if report.merge_distance >= params.d_m:
            systematic_k = topology.k if params.systematic else 0
            free = effective_free_distance(trellis, params.metric, systematic_k, params.max_depth)
            logger.debug('candidate %d accepted after %d retries: merge=%d efd=%d', candidate, retry,
                         report.merge_distance, free.distance)
            return candidate, retry, trellis, report, free

    return candidate, None, None, None, None


def design_trellis(params, topology, threads=1):
    """Designs a nonlinear table trellis. M(1) is found once and assigned to state 0, every other
    state gets a randomly row and column permuted copy, permutations are redrawn until the merge
    distance reaches d_m, and the candidate with the largest effective free distance is returned
    (ties go to the larger merge distance, then the lower candidate index). Candidates that run out
    of permutation draws are skipped and listed in the seed trace. The result depends only on the
    rng_seed.

    :param params: design parameters
    :type params: DesignParams
    :param topology: state transition structure
    :type topology: TrellisTopology
    :param threads: number of worker processes for the candidates
    :type threads: Union[int, None]
    :return: selected design
    :rtype: DesignResult
    :raises: InfeasibleDesignError, MergeDistanceError
    """
    k = topology.k
    ones = target_ones(params.target_density, params.n, k)
    logger.info('designing %d-state trellis (k=%d, n=%d, ones=%d, %s metric, %d candidates)', topology.num_states,
                k, params.n, ones, params.metric.kind.value, params.num_candidates)

    m1 = design_m1(ones, params.n, k, params.d_b, params.metric, rng_stream(params.rng_seed))
    m1_distance = branch_distance(m1, params.metric)
    logger.info('M(1) = %s with branch distance %d', m1.octal(), m1_distance)

    job = functools.partial(_design_candidate, m1, params, topology)
    best = None
    rejected = []
    for candidate, retry, trellis, report, free in Worker(job, threads).run(range(params.num_candidates)):
        if trellis is None:
            rejected.append(candidate)
            logger.warning('candidate %d did not reach merge distance %d in %d permutation draws', candidate,
                           params.d_m, params.max_merge_retries)
            continue
        key = (free.distance, report.merge_distance, -candidate)
        if best is None or key > best[0]:
            best = (key, candidate, retry, trellis, report, free)

    if best is None:
        raise MergeDistanceError(f'none of the {params.num_candidates} candidates reached merge distance '
                                 f'{params.d_m} in {params.max_merge_retries} permutation draws. Lower d_m.')

    _, candidate, retry, trellis, report, free = best
    trace = {'seed': params.rng_seed, 'candidate': candidate, 'retry': retry, 'rejected': rejected,
             'm1': [octal_encode(row, params.n) for row in m1.rows]}
    result = DesignResult(trellis, Fraction(ones, params.n << k), report.branch_distance, report.merge_distance,
                          free.distance, free.merged, trace)
    logger.info('selected candidate %d: branch=%d merge=%d efd=%d', candidate, result.branch_distance,
                result.merge_distance, result.effective_free_distance)
    return result
