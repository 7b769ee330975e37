import math
import unittest
import unittest.mock as mock
import numpy as np
from nlturbo.config import settings
from nlturbo.core.coding import Interleaver, column_walk_feasible, make_interleaver, measure_spread


class TestInterleaver(unittest.TestCase):
    def tearDown(self):
        settings.reset()

    def testMeasureSpread(self):
        self.assertEqual(measure_spread(np.arange(8)), 1)
        self.assertEqual(measure_spread([3, 2, 1, 0]), 1)
        self.assertEqual(measure_spread([0, 2, 4, 1, 3]), 2)
        self.assertEqual(measure_spread([0]), 1)

    def testPermutation(self):
        interleaver = Interleaver([2, 0, 3, 1])
        self.assertEqual(interleaver.length, 4)
        np.testing.assert_array_equal(interleaver.interleave(['a', 'b', 'c', 'd']), ['c', 'a', 'd', 'b'])
        np.testing.assert_array_equal(interleaver.deinterleave(['c', 'a', 'd', 'b']), ['a', 'b', 'c', 'd'])
        np.testing.assert_array_equal(interleaver.inverse, [1, 3, 0, 2])
        self.assertEqual(interleaver.requested_spread, interleaver.spread)

        values = np.arange(8).reshape(4, 2)
        np.testing.assert_array_equal(interleaver.deinterleave(interleaver.interleave(values)), values)
        self.assertRaises(ValueError, interleaver.interleave, [1, 2, 3])
        self.assertRaises(ValueError, interleaver.permutation.__setitem__, 0, 1)

        self.assertRaises(ValueError, Interleaver, [0, 0, 1])
        self.assertRaises(ValueError, Interleaver, [1, 2, 3])
        self.assertRaises(ValueError, Interleaver, [])
        self.assertRaises(ValueError, Interleaver, [[0, 1], [1, 0]])

    def testSpreadConstruction(self):
        interleaver = make_interleaver(1000, 15, seed=4)
        self.assertEqual(interleaver.length, 1000)
        self.assertEqual(interleaver.requested_spread, 15)
        self.assertGreaterEqual(interleaver.spread, 15)
        self.assertEqual(interleaver.seed, 4)
        np.testing.assert_array_equal(np.sort(interleaver.permutation), np.arange(1000))

        permutation = interleaver.permutation
        for distance in range(1, 15):
            self.assertGreaterEqual(np.abs(permutation[distance:] - permutation[:-distance]).min(), 15)

        self.assertEqual(make_interleaver(1000, 15, seed=4), interleaver)
        self.assertNotEqual(make_interleaver(1000, 15, seed=5), interleaver)

        interleaver = make_interleaver(200, seed=1)
        self.assertEqual(interleaver.requested_spread, 10)
        self.assertGreaterEqual(interleaver.spread, 10)

    def testLargeInterleaver(self):
        interleaver = make_interleaver(10000, 70, seed=1)
        self.assertEqual(interleaver.requested_spread, 70)
        self.assertGreaterEqual(interleaver.spread, 70)
        np.testing.assert_array_equal(np.sort(interleaver.permutation), np.arange(10000))

        permutation = interleaver.permutation
        for distance in range(1, 70):
            self.assertGreaterEqual(np.abs(permutation[distance:] - permutation[:-distance]).min(), 70)
        self.assertEqual(make_interleaver(10000, 70, seed=1), interleaver)

        interleaver = make_interleaver(5000, seed=3)
        self.assertEqual(interleaver.requested_spread, 50)
        self.assertGreaterEqual(interleaver.spread, 50)

    def testColumnWalk(self):
        self.assertTrue(column_walk_feasible(10000, 70))
        self.assertTrue(column_walk_feasible(100, 7))
        self.assertFalse(column_walk_feasible(100, 8))
        self.assertFalse(column_walk_feasible(10, 0))

        for length in range(2, 120):
            spread = math.isqrt(length // 2)
            if spread < 2:
                continue
            interleaver = make_interleaver(length, spread, seed=length)
            self.assertGreaterEqual(interleaver.spread, spread)
            np.testing.assert_array_equal(np.sort(interleaver.permutation), np.arange(length))

        with mock.patch('nlturbo.core.coding.interleaver._s_random_attempt') as attempt:
            make_interleaver(2000, 31, seed=7)
            attempt.assert_not_called()

    def testSpreadFallback(self):
        settings.setValue(settings.Key.Interleaver_Retries, 2)
        with self.assertLogs('nlturbo.core.coding.interleaver', level='WARNING') as logs:
            interleaver = make_interleaver(10, 8, seed=0)

        self.assertTrue(any('lowering S' in message for message in logs.output))
        self.assertEqual(interleaver.requested_spread, 8)
        self.assertLess(interleaver.spread, 8)
        np.testing.assert_array_equal(np.sort(interleaver.permutation), np.arange(10))

        interleaver = make_interleaver(5, 0, seed=2)
        np.testing.assert_array_equal(np.sort(interleaver.permutation), np.arange(5))
        self.assertRaises(ValueError, make_interleaver, 0)
        self.assertRaises(ValueError, make_interleaver, 10, -1)


if __name__ == '__main__':
    unittest.main()
