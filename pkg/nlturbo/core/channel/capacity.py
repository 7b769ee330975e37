"""
Information theoretic calculators for the Z-channel and the two-user broadcast binary symmetric
channel (BBSC). All rates are in bits per channel use.
"""
from collections import namedtuple
import logging
import numpy as np
from scipy.optimize import bisect, brentq, minimize_scalar
from scipy.special import xlogy
from ...config import settings

RatePoint = namedtuple('RatePoint', ['r1', 'r2', 'p1'])
DensityInterval = namedtuple('DensityInterval', ['lower', 'upper', 'p1'])


def _check_probability(name, value, upper_inclusive=True):
    value = np.asarray(value, dtype=float)
    upper_ok = value <= 1 if upper_inclusive else value < 1
    if not np.all((value >= 0) & upper_ok):
        bound = ']' if upper_inclusive else ')'
        raise ValueError(f'{name}={value} is outside [0, 1{bound}.')
    return value


def binary_entropy(x):
    """Computes the binary entropy h(x) = -x log2(x) - (1-x) log2(1-x) with 0 log(0) = 0

    :param x: probability or array of probabilities
    :type x: Union[float, array_like]
    :return: entropy in bits
    :rtype: Union[float, numpy.ndarray]
    :raises: ValueError
    """
    x = _check_probability('x', x)
    result = -(xlogy(x, x) + xlogy(1 - x, 1 - x)) / np.log(2)
    return float(result) if result.ndim == 0 else result


def star(a, b):
    """Computes a⋆b = a(1-b) + b(1-a), the crossover of two cascaded binary symmetric channels

    :param a: first crossover probability
    :type a: Union[float, array_like]
    :param b: second crossover probability
    :type b: Union[float, array_like]
    :return: cascaded crossover probability
    :rtype: Union[float, numpy.ndarray]
    """
    return a * (1 - b) + b * (1 - a)


def z_optimal_zeros_density(p):
    """Computes the capacity-achieving zeros density of a Z-channel whose 0 → 1 crossover
    probability is p (1 → 0 never happens). The p → 0 limit is 0.5.

    :param p: crossover probability in [0, 1)
    :type p: float
    :return: optimal zeros density
    :rtype: float
    :raises: ValueError
    """
    _check_probability('p', p, upper_inclusive=False)
    if p == 0:
        return 0.5

    q = p ** (p / (1 - p))
    return q / (1 + (1 - p) * q)


def z_optimal_ones_density(p):
    """Capacity-achieving ones density of the Z-channel, always at least 0.5

    :param p: crossover probability in [0, 1)
    :type p: float
    :return: optimal ones density
    :rtype: float
    """
    return 1.0 - z_optimal_zeros_density(p)


def z_mutual_information(p, ones_density):
    """Computes I(X;Y) of the Z-channel for an input with the given ones density

    :param p: crossover probability in [0, 1)
    :type p: float
    :param ones_density: probability of transmitting a one
    :type ones_density: Union[float, array_like]
    :return: mutual information in bits
    :rtype: Union[float, numpy.ndarray]
    """
    _check_probability('p', p, upper_inclusive=False)
    zeros = 1.0 - _check_probability('ones_density', ones_density)
    result = binary_entropy(zeros * (1 - p)) - zeros * binary_entropy(p)
    return float(result) if np.ndim(result) == 0 else result


def z_capacity(p):
    """Computes the Z-channel capacity C = H(u0(1-p)) - u0 H(p) at the optimal zeros density u0

    :param p: crossover probability in [0, 1)
    :type p: float
    :return: capacity in bits
    :rtype: float
    :raises: ValueError
    """
    zeros = z_optimal_zeros_density(p)
    return binary_entropy(zeros * (1 - p)) - zeros * binary_entropy(p)


def z_capacity_numeric(p):
    """Finds the Z-channel capacity by numerically maximizing the mutual information over the input
    ones density

    :param p: crossover probability in [0, 1)
    :type p: float
    :return: capacity in bits and maximizing ones density
    :rtype: Tuple[float, float]
    """
    result = minimize_scalar(lambda u: -z_mutual_information(p, u), bounds=(0.0, 1.0), method='bounded',
                             options={'xatol': 1e-10})
    return -result.fun, result.x


def z_crossover_for_capacity(capacity):
    """Finds the crossover probability at which the Z-channel capacity equals the given value.
    This locates the operating point of a code of rate r at a gap g from capacity i.e.
    z_crossover_for_capacity(r + g).

    :param capacity: capacity in (0, 1]
    :type capacity: float
    :return: crossover probability
    :rtype: float
    :raises: ValueError
    """
    if not 0 < capacity <= 1:
        raise ValueError(f'capacity={capacity} is outside (0, 1].')
    if capacity == 1:
        return 0.0

    tol = settings.value(settings.Key.Bisection_Tolerance)
    return brentq(lambda p: z_capacity(p) - capacity, 0.0, 1.0 - 1e-12, xtol=tol * 1e-3)


def _check_bbsc(alpha, beta):
    if not 0 <= alpha < beta < 0.5:
        raise ValueError(f'BBSC crossovers should satisfy 0 <= alpha < beta < 0.5, got alpha={alpha}, beta={beta}.')


def bbsc_region(alpha, beta, p1):
    """Computes the boundary point of the BBSC capacity region for user-1 ones density p1:
    R1 = h(α⋆p1) - h(α) and R2 = 1 - h(β⋆p1)

    :param alpha: crossover of the stronger channel
    :type alpha: float
    :param beta: crossover of the weaker channel
    :type beta: float
    :param p1: ones density of user 1 in [0, 0.5]
    :type p1: float
    :return: rate pair
    :rtype: RatePoint
    :raises: ValueError
    """
    _check_bbsc(alpha, beta)
    if not 0 <= p1 <= 0.5:
        raise ValueError(f'p1={p1} is outside [0, 0.5].')

    r1 = binary_entropy(star(alpha, p1)) - binary_entropy(alpha)
    r2 = 1 - binary_entropy(star(beta, p1))
    return RatePoint(max(r1, 0.0), max(r2, 0.0), p1)


def bbsc_region_sweep(alpha, beta, points=101):
    """Traces the BBSC capacity region boundary for evenly spaced p1 in [0, 0.5]

    :param alpha: crossover of the stronger channel
    :type alpha: float
    :param beta: crossover of the weaker channel
    :type beta: float
    :param points: number of samples
    :type points: int
    :return: boundary points in increasing p1 order
    :rtype: List[RatePoint]
    """
    if points < 2:
        raise ValueError(f'region sweep needs at least 2 points, got {points}.')

    return [bbsc_region(alpha, beta, p1) for p1 in np.linspace(0.0, 0.5, points).tolist()]


def time_sharing_rates(alpha, beta, fraction):
    """Computes the rate pair achieved by time sharing between the two single-user capacities

    :param alpha: crossover of the stronger channel
    :type alpha: float
    :param beta: crossover of the weaker channel
    :type beta: float
    :param fraction: fraction of time spent serving user 1
    :type fraction: float
    :return: rate pair (p1 is None)
    :rtype: RatePoint
    """
    _check_bbsc(alpha, beta)
    if not 0 <= fraction <= 1:
        raise ValueError(f'time sharing fraction={fraction} is outside [0, 1].')

    return RatePoint(fraction * (1 - binary_entropy(alpha)), (1 - fraction) * (1 - binary_entropy(beta)), None)


def pick_p1(alpha, beta, r1, r2):
    """Finds the user-1 ones densities that support the rate pair (r1, r2) on the BBSC. Since R1
    increases and R2 decreases with p1, the supporting densities form the open interval
    (f1⁻¹(r1), f2⁻¹(r2)); the inverses are found by bisection and the midpoint is selected.

    :param alpha: crossover of the stronger channel
    :type alpha: float
    :param beta: crossover of the weaker channel
    :type beta: float
    :param r1: target rate of user 1
    :type r1: float
    :param r2: target rate of user 2
    :type r2: float
    :return: density interval and selected p1
    :rtype: DensityInterval
    :raises: ValueError
    """
    _check_bbsc(alpha, beta)
    tol = settings.value(settings.Key.Bisection_Tolerance)

    max_r1 = bbsc_region(alpha, beta, 0.5).r1
    max_r2 = bbsc_region(alpha, beta, 0.0).r2

    if r1 >= max_r1 or r2 >= max_r2:
        raise ValueError(f'rate pair ({r1}, {r2}) is outside the capacity region of BBSC({alpha}, {beta}).')

    if r1 <= 0:
        lower = 0.0
    else:
        lower = bisect(lambda p: bbsc_region(alpha, beta, p).r1 - r1, 0.0, 0.5, xtol=tol)

    if r2 <= 0:
        upper = 0.5
    else:
        upper = bisect(lambda p: bbsc_region(alpha, beta, p).r2 - r2, 0.0, 0.5, xtol=tol)

    if lower >= upper:
        raise ValueError(f'rate pair ({r1}, {r2}) is outside the capacity region of BBSC({alpha}, {beta}): '
                         f'p1 would need to exceed {lower:.9f} and stay below {upper:.9f}.')

    logging.getLogger(__name__).debug('p1 interval for (%s, %s): (%.9f, %.9f)', r1, r2, lower, upper)
    return DensityInterval(lower, upper, (lower + upper) / 2)
