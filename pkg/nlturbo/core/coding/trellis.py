"""
Classes representing table-driven trellises of nonlinear constituent encoders
"""
from fractions import Fraction
import math
import numpy as np
from ..math.misc import popcount, int_to_bits, bits_to_int

MAX_OUTPUT_BITS = 32
OCTAL_DIGITS = '01234567'


def octal_width(n):
    """Number of octal digits needed for an n-bit row

    :param n: bit width
    :type n: int
    :return: number of digits
    :rtype: int
    """
    return -(-n // 3)


def octal_to_int(label, n):
    """Converts an octal label to the integer value of the n-bit row it encodes. The label must have
    exactly ceil(n/3) digits and, when n is not divisible by 3, the unused high bits of the leading
    digit must be zero.

    :param label: octal label e.g. '534'
    :type label: str
    :param n: bit width
    :type n: int
    :return: row value, most significant bit is the first output bit
    :rtype: int
    :raises: ValueError
    """
    label = str(label).strip()
    if len(label) != octal_width(n):
        raise ValueError(f'Octal label "{label}" should have {octal_width(n)} digits for a {n}-bit row.')

    value = 0
    for digit in label:
        if digit not in OCTAL_DIGITS:
            raise ValueError(f'Octal label "{label}" contains the non-octal digit "{digit}".')
        value = (value << 3) | int(digit)

    if value >> n:
        raise ValueError(f'Octal label "{label}" does not fit in {n} bits.')

    return value


def octal_decode(label, n):
    """Decodes an octal label into an n-bit row (most-significant digit first)

    :param label: octal label e.g. '534'
    :type label: str
    :param n: bit width
    :type n: int
    :return: bit row
    :rtype: numpy.ndarray[numpy.uint8]
    :raises: ValueError
    """
    return int_to_bits(octal_to_int(label, n), n)


def octal_encode(row, n=None):
    """Encodes an n-bit row as an octal label with ceil(n/3) digits

    :param row: bit row or its integer value
    :type row: Union[int, array_like]
    :param n: bit width, required when row is an integer
    :type n: Union[int, None]
    :return: octal label
    :rtype: str
    :raises: ValueError
    """
    if isinstance(row, (int, np.integer)):
        if n is None:
            raise ValueError('bit width is required to encode an integer row.')
        value = int(row)
    else:
        row = np.asarray(row)
        n = row.size if n is None else n
        if row.size != n:
            raise ValueError(f'row has {row.size} bits, expected {n}.')
        value = bits_to_int(row)

    if value < 0 or value >> n:
        raise ValueError(f'row value {value} does not fit in {n} bits.')

    return format(value, 'o').zfill(octal_width(n))


class TrellisTopology:
    """Creates the state-transition structure of a trellis. Every state has 2^k outgoing
    transitions, one per input k-tuple, and every state must have exactly 2^k incoming
    transitions.

    :param next_state: ℓ x 2^k matrix of next states indexed by (state, input)
    :type next_state: array_like
    :param k: input bits per step. None infers k from the number of columns
    :type k: Union[int, None]
    :raises: ValueError
    """
    def __init__(self, next_state, k=None):
        next_state = np.array(next_state, dtype=np.int64)
        if next_state.ndim != 2 or next_state.shape[0] < 1:
            raise ValueError('next state map should be a non-empty 2D matrix.')

        num_states, num_inputs = next_state.shape
        inferred_k = int(round(math.log2(num_inputs))) if num_inputs > 0 else -1
        if inferred_k < 0 or (1 << inferred_k) != num_inputs:
            raise ValueError(f'next state map has {num_inputs} columns which is not a power of 2.')
        if k is not None and k != inferred_k:
            raise ValueError(f'next state map has {num_inputs} columns but k={k} requires {1 << k}.')

        if next_state.min() < 0 or next_state.max() >= num_states:
            raise ValueError(f'next states should be in the range [0, {num_states}).')

        in_degree = np.bincount(next_state.ravel(), minlength=num_states)
        if np.any(in_degree != num_inputs):
            state = int(np.argmax(in_degree != num_inputs))
            raise ValueError(f'state {state} has {in_degree[state]} incoming transitions, expected {num_inputs}.')

        next_state.setflags(write=False)
        self.next_state = next_state
        self.num_states = num_states
        self.k = inferred_k

        order = np.argsort(next_state.ravel(), kind='stable')
        pred_state, pred_input = np.divmod(order, num_inputs)
        self.pred_state = pred_state.reshape(num_states, num_inputs)
        self.pred_input = pred_input.reshape(num_states, num_inputs)
        self.pred_state.setflags(write=False)
        self.pred_input.setflags(write=False)

    @property
    def num_inputs(self):
        return 1 << self.k

    def predecessors(self, state):
        """Returns the incoming transitions of a state in (state, input) lexicographic order

        :param state: target state
        :type state: int
        :return: list of (previous state, input) pairs
        :rtype: List[Tuple[int, int]]
        """
        return list(zip(self.pred_state[state].tolist(), self.pred_input[state].tolist()))

    def __eq__(self, other):
        if not isinstance(other, TrellisTopology):
            return NotImplemented
        return np.array_equal(self.next_state, other.next_state)

    def __repr__(self):
        return f'TrellisTopology(num_states={self.num_states}, k={self.k})'


class StateSubTable:
    """Creates a state sub-table M(s): the 2^k x n binary matrix whose row b holds the n output bits
    for input k-tuple b (rows in lexicographic order). Rows are stored as integers with the first
    output bit as the most significant bit.

    :param rows: row values
    :type rows: Sequence[int]
    :param n: output bits per row
    :type n: int
    :raises: ValueError
    """
    def __init__(self, rows, n):
        rows = tuple(int(row) for row in rows)
        count = len(rows)
        if count < 1 or count & (count - 1):
            raise ValueError(f'a state sub-table needs 2^k rows, got {count}.')
        if not 0 < n <= MAX_OUTPUT_BITS:
            raise ValueError(f'output width {n} is outside the supported range [1, {MAX_OUTPUT_BITS}].')
        for row in rows:
            if row < 0 or row >> n:
                raise ValueError(f'row value {row} does not fit in {n} bits.')

        self.rows = rows
        self.n = n

    @classmethod
    def fromBits(cls, matrix):
        """Creates a sub-table from a 2^k x n binary matrix

        :param matrix: binary matrix
        :type matrix: array_like
        :return: sub-table
        :rtype: StateSubTable
        """
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.uint8))
        return cls([bits_to_int(row) for row in matrix], matrix.shape[1])

    @classmethod
    def fromOctal(cls, labels, n):
        """Creates a sub-table from octal labels

        :param labels: octal labels one per input
        :type labels: Sequence[str]
        :param n: output bits per row
        :type n: int
        :return: sub-table
        :rtype: StateSubTable
        """
        return cls([octal_to_int(label, n) for label in labels], n)

    @property
    def k(self):
        return len(self.rows).bit_length() - 1

    @property
    def bits(self):
        """binary matrix of the sub-table

        :return: 2^k x n matrix
        :rtype: numpy.ndarray[numpy.uint8]
        """
        return np.array([int_to_bits(row, self.n) for row in self.rows], dtype=np.uint8)

    @property
    def ones(self):
        return sum(popcount(row) for row in self.rows)

    def octal(self):
        return [octal_encode(row, self.n) for row in self.rows]

    def permuted(self, row_perm, col_perm):
        """Returns Π1 M Π2 where row i of the result is row row_perm[i] of M and column j of the
        result is column col_perm[j] of M.

        :param row_perm: permutation of the 2^k rows
        :type row_perm: Sequence[int]
        :param col_perm: permutation of the n columns
        :type col_perm: Sequence[int]
        :return: permuted sub-table
        :rtype: StateSubTable
        :raises: ValueError
        """
        row_perm = np.asarray(row_perm, dtype=np.int64)
        col_perm = np.asarray(col_perm, dtype=np.int64)
        if row_perm.size != len(self.rows) or sorted(row_perm.tolist()) != list(range(len(self.rows))):
            raise ValueError(f'row permutation should be a permutation of {len(self.rows)} indices.')
        if col_perm.size != self.n or sorted(col_perm.tolist()) != list(range(self.n)):
            raise ValueError(f'column permutation should be a permutation of {self.n} indices.')

        return StateSubTable.fromBits(self.bits[row_perm][:, col_perm])

    def __eq__(self, other):
        if not isinstance(other, StateSubTable):
            return NotImplemented
        return self.rows == other.rows and self.n == other.n

    def __hash__(self):
        return hash((self.rows, self.n))

    def __repr__(self):
        return f'StateSubTable({self.octal()}, n={self.n})'


class TableTrellis:
    """Creates a complete constituent encoder from a topology and one sub-table per state.
    The trellis is immutable and can be shared between workers.

    :param topology: state transition structure
    :type topology: TrellisTopology
    :param subtables: one sub-table per state
    :type subtables: Sequence[StateSubTable]
    :raises: ValueError
    """
    def __init__(self, topology, subtables):
        subtables = tuple(subtables)
        if len(subtables) != topology.num_states:
            raise ValueError(f'trellis with {topology.num_states} states needs {topology.num_states} sub-tables, '
                             f'got {len(subtables)}.')

        n = subtables[0].n
        for state, table in enumerate(subtables):
            if table.n != n:
                raise ValueError(f'sub-table of state {state} has width {table.n}, expected {n}.')
            if len(table.rows) != topology.num_inputs:
                raise ValueError(f'sub-table of state {state} has {len(table.rows)} rows, expected '
                                 f'{topology.num_inputs}.')

        self.topology = topology
        self.subtables = subtables
        self.n = n
        self.labels = np.array([table.rows for table in subtables], dtype=np.int64)
        self.label_bits = np.array([table.bits for table in subtables], dtype=np.uint8)
        self.labels.setflags(write=False)
        self.label_bits.setflags(write=False)

    @classmethod
    def fromOctal(cls, topology, labels, n):
        """Creates a trellis from an ℓ x 2^k matrix of octal labels

        :param topology: state transition structure
        :type topology: TrellisTopology
        :param labels: octal labels indexed by (state, input)
        :type labels: Sequence[Sequence[str]]
        :param n: output bits per transition
        :type n: int
        :return: trellis
        :rtype: TableTrellis
        """
        return cls(topology, [StateSubTable.fromOctal(row, n) for row in labels])

    @property
    def num_states(self):
        return self.topology.num_states

    @property
    def k(self):
        return self.topology.k

    @property
    def next_state(self):
        return self.topology.next_state

    def step(self, state, symbol):
        """Performs one encoder step

        :param state: current state
        :type state: int
        :param symbol: input k-tuple as an integer (first input bit most significant)
        :type symbol: int
        :return: next state and output label value
        :rtype: Tuple[int, int]
        """
        return int(self.topology.next_state[state, symbol]), int(self.labels[state, symbol])

    def encode(self, symbols, start_state=0):
        """Encodes a sequence of input symbols starting from the given state. No termination is
        performed.

        :param symbols: input symbols
        :type symbols: array_like
        :param start_state: start state
        :type start_state: int
        :return: output bits (steps x n) and final state
        :rtype: Tuple[numpy.ndarray[numpy.uint8], int]
        """
        symbols = np.asarray(symbols, dtype=np.int64)
        next_state = self.topology.next_state
        states = np.empty(symbols.size, dtype=np.int64)
        state = start_state
        for index, symbol in enumerate(symbols.tolist()):
            states[index] = state
            state = next_state[state, symbol]

        return self.label_bits[states, symbols], int(state)

    def onesCount(self):
        return int(self.label_bits.sum())

    def columnOnes(self):
        """Number of ones in each output position over all ℓ·2^k labels

        :return: ones per output position
        :rtype: numpy.ndarray[numpy.int64]
        """
        return self.label_bits.sum(axis=(0, 1), dtype=np.int64)

    def octal(self):
        return [table.octal() for table in self.subtables]

    def __eq__(self, other):
        if not isinstance(other, TableTrellis):
            return NotImplemented
        return self.topology == other.topology and self.subtables == other.subtables

    def __repr__(self):
        return f'TableTrellis(num_states={self.num_states}, k={self.k}, n={self.n})'


def ones_density(trellis):
    """Computes the exact average ones density of the output labels, Σ ones(M(s)) / (ℓ·2^k·n)

    :param trellis: trellis
    :type trellis: TableTrellis
    :return: ones density
    :rtype: fractions.Fraction
    """
    total = trellis.num_states * trellis.topology.num_inputs * trellis.n
    return Fraction(trellis.onesCount(), total)
