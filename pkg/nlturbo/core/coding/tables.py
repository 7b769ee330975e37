"""
Embedded trellis data: the 16-state duo-binary nonlinear constituent code with a 62.1% target
ones density and the default recursive topology it is paired with
"""
import numpy as np
from .trellis import TrellisTopology, TableTrellis, StateSubTable
from ..math.misc import popcount

TABLE_I_N = 9
# rows are states s1s2s3s4, columns are inputs u1u2 = 00, 01, 10, 11
TABLE_I = (('534', '343', '671', '517'),
           ('476', '073', '707', '364'),
           ('346', '257', '571', '632'),
           ('137', '752', '711', '265'),
           ('754', '566', '227', '171'),
           ('370', '467', '516', '335'),
           ('743', '574', '037', '626'),
           ('566', '273', '532', '615'),
           ('465', '457', '343', '334'),
           ('752', '665', '037', '370'),
           ('274', '563', '754', '307'),
           ('723', '354', '617', '465'),
           ('435', '643', '317', '564'),
           ('153', '666', '703', '334'),
           ('327', '176', '453', '664'),
           ('466', '153', '335', '761'))
TABLE_I_ONES = 349

# output masks over the bits [s1 s2 s3 s4 u1 u2] of the default topology
DEFAULT_LINEAR_MASKS = (0o66, 0o55)


def default_topology():
    """Creates the default 16-state recursive duo-binary topology. With state s1s2s3s4 and input
    u1u2 the register update is

        s1' = u1 ⊕ u2 ⊕ s3 ⊕ s4,  s2' = s1 ⊕ u2,  s3' = s2,  s4' = s3

    i.e. feedback polynomial 1 + D³ + D⁴ with the second input bit also injected into the second
    register. Every state has four predecessors.

    :return: 16-state topology with k=2
    :rtype: TrellisTopology
    """
    next_state = np.zeros((16, 4), dtype=np.int64)
    for state in range(16):
        s1, s2, s3, s4 = (state >> 3) & 1, (state >> 2) & 1, (state >> 1) & 1, state & 1
        for symbol in range(4):
            u1, u2 = (symbol >> 1) & 1, symbol & 1
            r1 = u1 ^ u2 ^ s3 ^ s4
            r2 = s1 ^ u2
            next_state[state, symbol] = (r1 << 3) | (r2 << 2) | (s2 << 1) | s3

    return TrellisTopology(next_state, k=2)


def load_table_i(topology=None):
    """Creates the 16-state, k=2, n=9 nonlinear constituent trellis with the embedded labels

    :param topology: topology to pair the labels with. None uses the default topology
    :type topology: Union[TrellisTopology, None]
    :return: constituent trellis
    :rtype: TableTrellis
    """
    topology = default_topology() if topology is None else topology
    return TableTrellis.fromOctal(topology, TABLE_I, TABLE_I_N)


def linear_trellis(topology, masks=DEFAULT_LINEAR_MASKS):
    """Creates a table trellis whose output bits are XOR combinations of the state and input bits.
    Output bit j is the parity of masks[j] & ((state << k) | input), so the first output bit
    comes from masks[0].

    :param topology: state transition structure with a power of two number of states
    :type topology: TrellisTopology
    :param masks: one bit mask per output bit
    :type masks: Sequence[int]
    :return: linear table trellis
    :rtype: TableTrellis
    :raises: ValueError
    """
    memory = topology.num_states.bit_length() - 1
    if 1 << memory != topology.num_states:
        raise ValueError(f'linear trellis needs a power of two number of states, got {topology.num_states}.')

    width = memory + topology.k
    for mask in masks:
        if mask <= 0 or mask >> width:
            raise ValueError(f'output mask {oct(mask)} should be a non-zero {width}-bit value.')

    n = len(masks)
    subtables = []
    for state in range(topology.num_states):
        rows = []
        for symbol in range(topology.num_inputs):
            register = (state << topology.k) | symbol
            row = 0
            for mask in masks:
                row = (row << 1) | (popcount(mask & register) & 1)
            rows.append(row)
        subtables.append(StateSubTable(rows, n))

    return TableTrellis(topology, subtables)
