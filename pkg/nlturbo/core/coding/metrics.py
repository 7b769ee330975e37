"""
Distance metrics between output labels and the branch, merge and effective free distances of
table trellises
"""
from collections import namedtuple
import itertools
import numpy as np
from .trellis import StateSubTable
from ..math.misc import popcount
from ..util.misc import MetricKind
from ...config import settings

DistanceReport = namedtuple('DistanceReport', ['branch_distance', 'merge_distance', 'per_state_branch',
                                               'per_state_merge'])
FreeDistance = namedtuple('FreeDistance', ['distance', 'merged'])


def _as_bits(row):
    if isinstance(row, str):
        if any(char not in '01' for char in row):
            raise ValueError(f'bit row "{row}" should contain only 0 and 1.')
        return np.fromiter((int(char) for char in row), dtype=np.uint8, count=len(row))
    return np.asarray(row, dtype=np.uint8).ravel()


def _check_pair(x, y):
    x, y = _as_bits(x), _as_bits(y)
    if x.size != y.size:
        raise ValueError(f'bit rows have different lengths ({x.size} and {y.size}).')
    return x, y


def directional_distance(x, y):
    """Counts the positions where x has a 0 and y has a 1. The distance is not symmetric.

    :param x: first bit row e.g. '0011' or an array of bits
    :type x: Union[str, array_like]
    :param y: second bit row
    :type y: Union[str, array_like]
    :return: directional distance
    :rtype: int
    :raises: ValueError
    """
    x, y = _check_pair(x, y)
    return int(np.count_nonzero((x == 0) & (y == 1)))


def hamming_distance(x, y):
    """Counts the positions where x and y differ

    :param x: first bit row
    :type x: Union[str, array_like]
    :param y: second bit row
    :type y: Union[str, array_like]
    :return: Hamming distance
    :rtype: int
    :raises: ValueError
    """
    x, y = _check_pair(x, y)
    return int(np.count_nonzero(x != y))


def z_distance(x, y):
    """Computes the z-distance, the larger of the two directional distances

    :param x: first bit row
    :type x: Union[str, array_like]
    :param y: second bit row
    :type y: Union[str, array_like]
    :return: z-distance
    :rtype: int
    :raises: ValueError
    """
    x, y = _check_pair(x, y)
    return max(directional_distance(x, y), directional_distance(y, x))


class DistanceMetric:
    """Distance between integer-packed rows. Every metric is built from the two directional
    counts of a pair: a = d(x → y) and b = d(y → x).

    :param kind: metric kind
    :type kind: Union[MetricKind, str]
    """
    def __init__(self, kind):
        self.kind = MetricKind(kind)

    @staticmethod
    def components(x, y):
        """Returns the directional distances (d(x → y), d(y → x)) of integer-packed rows

        :param x: first row value
        :type x: int
        :param y: second row value
        :type y: int
        :return: directional distances
        :rtype: Tuple[int, int]
        """
        return popcount(y & ~x), popcount(x & ~y)

    def combine(self, a, b):
        """Combines directional distances (possibly summed along a path) into the metric value

        :param a: distance in the x → y direction
        :type a: int
        :param b: distance in the y → x direction
        :type b: int
        :return: metric value
        :rtype: int
        """
        if self.kind == MetricKind.Hamming:
            return a + b
        if self.kind == MetricKind.Directional:
            return a
        return max(a, b)

    def distance(self, x, y):
        return self.combine(*self.components(x, y))

    @property
    def symmetric(self):
        return self.kind != MetricKind.Directional

    def __eq__(self, other):
        if not isinstance(other, DistanceMetric):
            return NotImplemented
        return self.kind == other.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f'DistanceMetric({self.kind.value})'


def _metric(metric):
    return metric if isinstance(metric, DistanceMetric) else DistanceMetric(metric)


def _rows(rows):
    if isinstance(rows, StateSubTable):
        return rows.rows
    return tuple(int(row) for row in rows)


def _pairs(rows, metric):
    pairs = itertools.combinations(rows, 2) if metric.symmetric else itertools.permutations(rows, 2)
    return (metric.distance(x, y) for x, y in pairs)


def pairwise_distances(subtable, metric):
    """Computes the sorted multiset of distances between the rows of a sub-table. Unordered pairs
    are used for the symmetric metrics and ordered pairs for the directional metric.

    :param subtable: sub-table or sequence of row values
    :type subtable: Union[StateSubTable, Sequence[int]]
    :param metric: distance metric
    :type metric: Union[DistanceMetric, MetricKind, str]
    :return: sorted distances
    :rtype: List[int]
    """
    return sorted(_pairs(_rows(subtable), _metric(metric)))


def branch_distance(subtable, metric):
    """Computes the minimum distance between the rows of a sub-table

    :param subtable: sub-table or sequence of row values
    :type subtable: Union[StateSubTable, Sequence[int]]
    :param metric: distance metric
    :type metric: Union[DistanceMetric, MetricKind, str]
    :return: branch distance
    :rtype: int
    :raises: ValueError
    """
    rows = _rows(subtable)
    if len(rows) < 2:
        raise ValueError('branch distance needs at least 2 rows.')
    return min(_pairs(rows, _metric(metric)))


def distance_report(trellis, metric):
    """Computes the per-state branch distances (between the labels leaving a state) and merge
    distances (between the labels of the transitions entering a state) of a trellis

    :param trellis: trellis
    :type trellis: TableTrellis
    :param metric: distance metric
    :type metric: Union[DistanceMetric, MetricKind, str]
    :return: distance report
    :rtype: DistanceReport
    """
    metric = _metric(metric)
    topology = trellis.topology
    labels = trellis.labels

    per_state_branch = [branch_distance(table, metric) for table in trellis.subtables]
    per_state_merge = []
    for state in range(topology.num_states):
        incoming = labels[topology.pred_state[state], topology.pred_input[state]].tolist()
        per_state_merge.append(branch_distance(incoming, metric))

    return DistanceReport(min(per_state_branch), min(per_state_merge), per_state_branch, per_state_merge)


def merge_distance(trellis, metric):
    """Computes the merge distance of a trellis, the minimum over states of the minimum distance
    between the labels of the transitions entering the state. The returned report also carries
    the branch distances.

    :param trellis: trellis
    :type trellis: TableTrellis
    :param metric: distance metric
    :type metric: Union[DistanceMetric, MetricKind, str]
    :return: distance report
    :rtype: DistanceReport
    """
    return distance_report(trellis, metric)


def _component_tables(trellis, systematic):
    """(ℓ, ℓ, 2^k, 2^k) tables of directional counts between the step outputs of two paths in
    states (s, s') taking inputs (u, u')"""
    bits = trellis.label_bits.astype(np.int64)
    x = bits[:, None, :, None, :]
    y = bits[None, :, None, :, :]
    forward = ((1 - x) & y).sum(axis=-1)
    backward = (x & (1 - y)).sum(axis=-1)

    if systematic:
        k = trellis.k
        shifts = np.arange(k - 1, -1, -1)
        inputs = (np.arange(1 << k)[:, None] >> shifts) & 1
        u = inputs[:, None, :]
        v = inputs[None, :, :]
        forward = forward + ((1 - u) & v).sum(axis=-1)[None, None]
        backward = backward + (u & (1 - v)).sum(axis=-1)[None, None]

    return forward.tolist(), backward.tolist()


def _dominates(label, other):
    return label[0] <= other[0] and label[1] <= other[1] and label[2] <= other[2]


def _insert(label, front):
    """Adds an (a, b, depth) label to a Pareto front unless an existing label is no worse in all
    three; labels reached earlier have more depth left so depth takes part in the comparison"""
    if any(_dominates(other, label) for other in front):
        return False
    front[:] = [other for other in front if not _dominates(label, other)]
    front.append(label)
    return True


def effective_free_distance(trellis, metric, systematic_k=0, max_depth=None):
    """Searches the pair-state (product) trellis for the smallest accumulated distance between two
    paths that start in a common state with different inputs and merge again within max_depth
    steps. Each step contributes the directional counts between the two output labels and, for
    systematic codes, between the two input symbols. The directional sums are tracked separately
    along a path and combined by the metric only when the paths merge, so the z metric is the
    larger directional distance of the whole path pair.

    :param trellis: trellis
    :type trellis: TableTrellis
    :param metric: distance metric
    :type metric: Union[DistanceMetric, MetricKind, str]
    :param systematic_k: number of systematic bits per step, 0 or k
    :type systematic_k: int
    :param max_depth: maximum path length. None uses Depth_Factor x number of states
    :type max_depth: Union[int, None]
    :return: distance and whether a merging pair was found. When no pair merges within max_depth
             the distance is a lower bound
    :rtype: FreeDistance
    :raises: ValueError
    """
    metric = _metric(metric)
    num_states = trellis.num_states
    num_inputs = trellis.topology.num_inputs
    if max_depth is None:
        max_depth = settings.value(settings.Key.Depth_Factor) * num_states
    if max_depth < 2:
        raise ValueError(f'max_depth should be at least 2, got {max_depth}.')
    if systematic_k not in (0, trellis.k):
        raise ValueError(f'systematic_k should be 0 or {trellis.k}, got {systematic_k}.')

    forward, backward = _component_tables(trellis, systematic_k > 0)
    next_state = trellis.next_state.tolist()

    best = None
    seen = {}
    frontier = set()

    def _relax(target, a, b, depth, depth_frontier):
        nonlocal best
        value = metric.combine(a, b)
        if best is not None and value >= best:
            return
        if target[0] == target[1]:
            best = value
            return
        if _insert((a, b, depth), seen.setdefault(target, [])):
            depth_frontier.add((target, a, b))

    for state in range(num_states):
        for u, v in itertools.permutations(range(num_inputs), 2):
            _relax((next_state[state][u], next_state[state][v]), forward[state][state][u][v],
                   backward[state][state][u][v], 1, frontier)

    for depth in range(2, max_depth + 1):
        if not frontier:
            break
        following = set()
        for (s, t), a, b in sorted(frontier):
            if (a, b, depth - 1) not in seen[(s, t)]:
                continue
            for u in range(num_inputs):
                for v in range(num_inputs):
                    _relax((next_state[s][u], next_state[t][v]), a + forward[s][t][u][v], b + backward[s][t][u][v],
                           depth, following)
        frontier = following

    if best is not None:
        return FreeDistance(best, True)

    if frontier:
        bound = min(metric.combine(a, b) for _, a, b in frontier)
    else:
        bound = min((metric.combine(a, b) for front in seen.values() for a, b, _ in front), default=0)
    return FreeDistance(bound, False)
