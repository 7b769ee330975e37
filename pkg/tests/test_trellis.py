import unittest
from fractions import Fraction
import numpy as np
from nlturbo.core.coding import (TABLE_I, TABLE_I_ONES, StateSubTable, TableTrellis, TrellisTopology, default_topology,
                                 linear_trellis, load_table_i, octal_decode, octal_encode, octal_to_int, octal_width,
                                 ones_density)

DEFAULT_NEXT_STATE = [[0, 12, 8, 4], [8, 4, 0, 12], [9, 5, 1, 13], [1, 13, 9, 5], [2, 14, 10, 6], [10, 6, 2, 14],
                      [11, 7, 3, 15], [3, 15, 11, 7], [4, 8, 12, 0], [12, 0, 4, 8], [13, 1, 5, 9], [5, 9, 13, 1],
                      [6, 10, 14, 2], [14, 2, 6, 10], [15, 3, 7, 11], [7, 11, 15, 3]]


class TestOctal(unittest.TestCase):
    def testWidth(self):
        self.assertEqual(octal_width(9), 3)
        self.assertEqual(octal_width(2), 1)
        self.assertEqual(octal_width(10), 4)

    def testDecode(self):
        np.testing.assert_array_equal(octal_decode('534', 9), [1, 0, 1, 0, 1, 1, 1, 0, 0])
        np.testing.assert_array_equal(octal_decode('000', 9), np.zeros(9))
        np.testing.assert_array_equal(octal_decode('3', 2), [1, 1])
        self.assertEqual(octal_to_int('777', 9), 511)

        self.assertRaises(ValueError, octal_to_int, '53', 9)
        self.assertRaises(ValueError, octal_to_int, '538', 9)
        self.assertRaises(ValueError, octal_to_int, '4', 2)
        self.assertRaises(ValueError, octal_to_int, '2000', 10)

    def testEncode(self):
        self.assertEqual(octal_encode([1, 0, 1, 0, 1, 1, 1, 0, 0]), '534')
        self.assertEqual(octal_encode(0o73, 9), '073')
        self.assertEqual(octal_encode([0, 1]), '1')
        self.assertRaises(ValueError, octal_encode, 5)
        self.assertRaises(ValueError, octal_encode, 512, 9)
        self.assertRaises(ValueError, octal_encode, [1, 0, 1], 4)

        for label in ('534', '073', '761', '000'):
            self.assertEqual(octal_encode(octal_decode(label, 9)), label)


class TestTopology(unittest.TestCase):
    def testValidation(self):
        self.assertRaises(ValueError, TrellisTopology, [[0, 1, 0]])
        self.assertRaises(ValueError, TrellisTopology, [[0, 2], [1, 0]])
        self.assertRaises(ValueError, TrellisTopology, [[0, 0], [0, 1]])
        self.assertRaises(ValueError, TrellisTopology, [[0, 1], [1, 0]], k=2)
        self.assertRaises(ValueError, TrellisTopology, [])

        topology = TrellisTopology([[0, 1], [0, 1]])
        self.assertEqual(topology.k, 1)
        self.assertEqual(topology.num_states, 2)
        self.assertEqual(topology.num_inputs, 2)
        self.assertListEqual(topology.predecessors(0), [(0, 0), (1, 0)])
        self.assertListEqual(topology.predecessors(1), [(0, 1), (1, 1)])
        self.assertRaises(ValueError, topology.next_state.__setitem__, (0, 0), 1)

    def testDefaultTopology(self):
        topology = default_topology()
        self.assertEqual(topology.num_states, 16)
        self.assertEqual(topology.k, 2)
        np.testing.assert_array_equal(topology.next_state, DEFAULT_NEXT_STATE)

        for state in range(16):
            predecessors = topology.predecessors(state)
            self.assertEqual(len(predecessors), 4)
            for previous, symbol in predecessors:
                self.assertEqual(topology.next_state[previous, symbol], state)


class TestSubTable(unittest.TestCase):
    def testCreation(self):
        table = StateSubTable.fromOctal(TABLE_I[0], 9)
        self.assertEqual(table.k, 2)
        self.assertEqual(table.n, 9)
        self.assertEqual(table.ones, 22)
        self.assertListEqual(table.octal(), list(TABLE_I[0]))
        self.assertEqual(table.bits.shape, (4, 9))
        self.assertEqual(StateSubTable.fromBits(table.bits), table)
        self.assertEqual(hash(StateSubTable.fromBits(table.bits)), hash(table))

        self.assertRaises(ValueError, StateSubTable, [1, 2, 3], 9)
        self.assertRaises(ValueError, StateSubTable, [1, 2], 33)
        self.assertRaises(ValueError, StateSubTable, [1, 512], 9)

    def testPermutation(self):
        table = StateSubTable.fromBits([[1, 0, 0], [0, 1, 1]])
        permuted = table.permuted([1, 0], [2, 0, 1])
        np.testing.assert_array_equal(permuted.bits, [[1, 0, 1], [0, 1, 0]])
        self.assertEqual(permuted.ones, table.ones)

        self.assertRaises(ValueError, table.permuted, [0, 0], [0, 1, 2])
        self.assertRaises(ValueError, table.permuted, [0, 1], [0, 1])


class TestTableTrellis(unittest.TestCase):
    def setUp(self):
        self.trellis = load_table_i()

    def testTableI(self):
        trellis = self.trellis
        self.assertEqual(trellis.num_states, 16)
        self.assertEqual(trellis.k, 2)
        self.assertEqual(trellis.n, 9)
        self.assertEqual(trellis.onesCount(), TABLE_I_ONES)
        self.assertEqual(ones_density(trellis), Fraction(349, 576))
        self.assertListEqual(trellis.octal(), [list(row) for row in TABLE_I])

        per_state = [table.ones for table in trellis.subtables]
        self.assertListEqual(per_state, [22, 22, 22, 22, 22, 22, 22, 22, 21, 22, 22, 22, 21, 21, 22, 22])
        np.testing.assert_array_equal(trellis.columnOnes(), [37, 38, 39, 40, 40, 38, 41, 38, 38])

    def testStep(self):
        self.assertTupleEqual(self.trellis.step(0, 0), (0, 0o534))
        self.assertTupleEqual(self.trellis.step(0, 1), (12, 0o343))
        self.assertTupleEqual(self.trellis.step(12, 3), (2, 0o564))

    def testEncode(self):
        bits, state = self.trellis.encode([1, 3, 0])
        self.assertEqual(state, 9)
        np.testing.assert_array_equal(bits[0], octal_decode('343', 9))
        np.testing.assert_array_equal(bits[1], octal_decode('564', 9))
        np.testing.assert_array_equal(bits[2], octal_decode('346', 9))

        bits, state = self.trellis.encode([], start_state=5)
        self.assertEqual(bits.shape, (0, 9))
        self.assertEqual(state, 5)

    def testValidation(self):
        topology = TrellisTopology([[0, 1], [0, 1]])
        self.assertRaises(ValueError, TableTrellis, topology, [StateSubTable([0, 1], 2)])
        self.assertRaises(ValueError, TableTrellis, topology, [StateSubTable([0, 1], 2), StateSubTable([0, 1], 3)])
        self.assertRaises(ValueError, TableTrellis, topology, [StateSubTable([0, 1], 2),
                                                               StateSubTable([0, 1, 2, 3], 2)])

    def testLinearTrellis(self):
        trellis = linear_trellis(default_topology())
        self.assertEqual(trellis.n, 2)
        self.assertEqual(ones_density(trellis), Fraction(1, 2))
        for table in trellis.subtables:
            self.assertListEqual(sorted(table.rows), [0, 1, 2, 3])

        trellis = linear_trellis(TrellisTopology([[0, 1], [0, 1]]), [0b11])
        self.assertListEqual(trellis.octal(), [['0', '1'], ['1', '0']])
        self.assertRaises(ValueError, linear_trellis, TrellisTopology([[0, 1], [0, 1]]), [0b100])
        self.assertRaises(ValueError, linear_trellis, TrellisTopology([[0, 1], [2, 0], [1, 2]]), [1])


if __name__ == '__main__':
    unittest.main()
