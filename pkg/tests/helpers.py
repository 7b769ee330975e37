import itertools
import pathlib
import numpy as np
from scipy.special import logsumexp
from nlturbo.core.coding import StateSubTable, TableTrellis, TrellisTopology

CODES_PATH = pathlib.Path(__file__).parent.parent / 'codes'


def random_topology(rng, num_states, k):
    """Random next-state map in which every state has 2^k incoming transitions"""
    num_inputs = 1 << k
    targets = rng.permutation(np.repeat(np.arange(num_states), num_inputs))
    return TrellisTopology(targets.reshape(num_states, num_inputs), k)


def random_trellis(rng, num_states, k, n, topology=None):
    topology = random_topology(rng, num_states, k) if topology is None else topology
    subtables = [StateSubTable(rng.integers(0, 1 << n, 1 << k).tolist(), n) for _ in range(num_states)]
    return TableTrellis(topology, subtables)


def exhaustive_map(trellis, llrs, priors=None, systematic=None):
    """Symbol log-posteriors by enumerating every input sequence from state 0"""
    llrs = np.asarray(llrs, dtype=float).reshape(-1, trellis.n)
    steps, num_inputs, k = llrs.shape[0], trellis.topology.num_inputs, trellis.k
    weights = []
    sequences = list(itertools.product(range(num_inputs), repeat=steps))
    for sequence in sequences:
        state, weight = 0, 0.0
        for t, symbol in enumerate(sequence):
            bits = trellis.label_bits[state, symbol]
            weight += float(np.sum(llrs[t] / 2 * (1 - 2.0 * bits)))
            if priors is not None:
                weight += priors[t][symbol]
            if systematic is not None:
                input_bits = [(symbol >> (k - 1 - j)) & 1 for j in range(k)]
                weight += float(np.sum(np.asarray(systematic[t]) / 2 * (1 - 2.0 * np.asarray(input_bits))))
            state = trellis.next_state[state, symbol]
        weights.append(weight)

    weights = np.array(weights)
    sequences = np.array(sequences)
    posterior = np.empty((steps, num_inputs))
    for t in range(steps):
        for symbol in range(num_inputs):
            posterior[t, symbol] = logsumexp(weights[sequences[:, t] == symbol])
    return posterior - logsumexp(posterior, axis=1)[:, None]


def exhaustive_free_distance(trellis, metric, depth, systematic=False):
    """Smallest metric value over path pairs that leave a common state with different inputs and
    first merge within depth steps. Returns None when no pair merges."""
    num_inputs, k = trellis.topology.num_inputs, trellis.k
    best = None
    for start in range(trellis.num_states):
        for first, second in itertools.permutations(range(num_inputs), 2):
            for tail in itertools.product(itertools.product(range(num_inputs), repeat=2), repeat=depth - 1):
                pairs = [(first, second)] + list(tail)
                s, t, a, b = start, start, 0, 0
                for u, v in pairs:
                    x, y = int(trellis.labels[s, u]), int(trellis.labels[t, v])
                    if systematic:
                        x, y = (x << k) | u, (y << k) | v
                    a += bin(y & ~x).count('1')
                    b += bin(x & ~y).count('1')
                    s, t = trellis.next_state[s, u], trellis.next_state[t, v]
                    if s == t:
                        value = metric.combine(a, b)
                        best = value if best is None else min(best, value)
                        break
    return best
