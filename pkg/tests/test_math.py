import unittest
import numpy as np
from nlturbo.core.math import popcount, int_to_bits, bits_to_int, symbols_to_bits, bits_to_symbols


class TestMath(unittest.TestCase):
    def testPopcount(self):
        self.assertEqual(popcount(0), 0)
        self.assertEqual(popcount(0o534), 5)
        self.assertEqual(popcount(0o777), 9)
        self.assertEqual(popcount(1 << 40), 1)

    def testBitConversion(self):
        np.testing.assert_array_equal(int_to_bits(0o534, 9), [1, 0, 1, 0, 1, 1, 1, 0, 0])
        np.testing.assert_array_equal(int_to_bits(3, 4), [0, 0, 1, 1])
        np.testing.assert_array_equal(int_to_bits(0, 2), [0, 0])
        self.assertEqual(int_to_bits(5, 3).dtype, np.uint8)

        self.assertEqual(bits_to_int([1, 0, 1, 0, 1, 1, 1, 0, 0]), 0o534)
        self.assertEqual(bits_to_int([]), 0)
        self.assertEqual(bits_to_int(np.array([0, 0, 1], dtype=np.uint8)), 1)

    def testSymbolConversion(self):
        bits = symbols_to_bits(np.array([1, 3, 0, 2]), 2)
        np.testing.assert_array_equal(bits, [0, 1, 1, 1, 0, 0, 1, 0])
        np.testing.assert_array_equal(bits_to_symbols(bits, 2), [1, 3, 0, 2])
        np.testing.assert_array_equal(symbols_to_bits(np.array([5]), 3), [1, 0, 1])
        self.assertEqual(symbols_to_bits(np.array([], dtype=int), 2).size, 0)

        np.testing.assert_array_equal(bits_to_symbols([1, 1, 0, 1, 0, 0], 3), [6, 4])
        self.assertRaises(ValueError, bits_to_symbols, [1, 0, 1], 2)


if __name__ == '__main__':
    unittest.main()
