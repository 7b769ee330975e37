from fractions import Fraction
import unittest
import unittest.mock as mock
from nlturbo.config import settings
from nlturbo.core.coding import designer
from nlturbo.core.coding import (DesignParams, InfeasibleDesignError, MergeDistanceError, StateSubTable,
                                 TrellisTopology, branch_distance, branch_floor, default_topology, design_m1,
                                 design_trellis, distance_report, effective_free_distance, pairwise_distances,
                                 permute_subtable, target_ones)
from nlturbo.core.math import popcount
from nlturbo.core.util import rng_stream

SHIFT_REGISTER = [[0, 1], [2, 3], [0, 1], [2, 3]]


class TestTargetOnes(unittest.TestCase):
    def testRounding(self):
        self.assertEqual(target_ones(0.621, 9, 2), 22)
        self.assertEqual(target_ones(Fraction(1, 2), 4, 1), 4)
        self.assertEqual(target_ones('0.3', 5, 1), 3)
        self.assertEqual(target_ones(Fraction(1, 4), 2, 1), 1)
        self.assertEqual(target_ones(Fraction(1, 8), 2, 1), 1)

    def testInvalidDensity(self):
        self.assertRaises(ValueError, target_ones, 0, 9, 2)
        self.assertRaises(ValueError, target_ones, 1, 9, 2)
        self.assertRaises(ValueError, target_ones, 0.01, 2, 1)
        self.assertRaises(ValueError, target_ones, 0.99, 2, 1)


class TestDesignM1(unittest.TestCase):
    def setUp(self):
        settings.setValue(settings.Key.Search_Moves, 2000)
        settings.setValue(settings.Key.Restart_Interval, 500)

    def tearDown(self):
        settings.reset()

    def testExhaustiveSearch(self):
        table = design_m1(4, 3, 1, 1, 'hamming')
        self.assertEqual(table.ones, 4)
        self.assertEqual(branch_distance(table, 'hamming'), 2)
        self.assertListEqual(sorted(popcount(row) for row in table.rows), [2, 2])

        table = design_m1(4, 3, 1, 1, 'z')
        self.assertEqual(table.ones, 4)
        self.assertEqual(branch_distance(table, 'z'), 2)
        self.assertListEqual(sorted(popcount(row) for row in table.rows), [1, 3])

        self.assertEqual(branch_floor(4, 3, 1, 'hamming'), 2)
        self.assertEqual(branch_floor(4, 3, 1, 'z'), 2)
        self.assertEqual(branch_floor(6, 3, 1, 'z'), 0)

    def testInfeasible(self):
        self.assertRaises(InfeasibleDesignError, design_m1, 4, 3, 1, 2, 'hamming')
        self.assertRaises(InfeasibleDesignError, design_m1, 6, 3, 1, 0, 'z')
        self.assertRaises(ValueError, design_m1, 0, 3, 1, 0, 'z')
        self.assertRaises(ValueError, design_m1, 6, 3, 1, 0, 'euclidean')

        for n, ones in ((4, 4), (5, 6), (3, 5)):
            floor = branch_floor(ones, n, 2, 'z')
            for d_b in range(floor):
                table = design_m1(ones, n, 2, d_b, 'z')
                self.assertEqual(table.ones, ones)
                self.assertGreater(branch_distance(table, 'z'), d_b)
            self.assertRaises(InfeasibleDesignError, design_m1, ones, n, 2, floor, 'z')

    def testRandomizedSearch(self):
        ones = target_ones(0.621, 9, 2)
        table = design_m1(ones, 9, 2, 1, 'z', rng_stream(5))
        self.assertEqual(table.ones, 22)
        self.assertEqual(table.k, 2)
        self.assertGreaterEqual(branch_distance(table, 'z'), 2)
        self.assertEqual(design_m1(ones, 9, 2, 1, 'z', rng_stream(5)), table)

    def testPermuteSubtable(self):
        table = StateSubTable([0o534, 0o343, 0o671, 0o517], 9)
        permuted = permute_subtable(table, [3, 1, 0, 2], [8, 7, 6, 5, 4, 3, 2, 1, 0])
        self.assertEqual(permuted.ones, table.ones)
        self.assertListEqual(pairwise_distances(permuted, 'z'), pairwise_distances(table, 'z'))
        self.assertRaises(ValueError, permute_subtable, table, [0, 1, 2], range(9))


class TestDesignTrellis(unittest.TestCase):
    def setUp(self):
        self.topology = TrellisTopology(SHIFT_REGISTER)

    def tearDown(self):
        settings.reset()

    def testParams(self):
        self.assertRaises(ValueError, DesignParams, 1.2, 1, 0)
        self.assertRaises(ValueError, DesignParams, 0.5, -1, 0)
        self.assertRaises(ValueError, DesignParams, 0.5, 1, 0, num_candidates=0)
        self.assertRaises(ValueError, DesignParams, 0.5, 1, 0, n=0)
        self.assertRaises(ValueError, DesignParams, 0.5, 1, 0, metric='euclidean')

        settings.setValue(settings.Key.Max_Merge_Retries, 7)
        params = DesignParams('0.621', 1, 0)
        self.assertEqual(params.target_density, Fraction(621, 1000))
        self.assertEqual(params.max_merge_retries, 7)
        data = params.toDict()
        self.assertEqual(data['metric'], 'z')
        self.assertAlmostEqual(data['target_density'], 0.621)

    def testPostconditions(self):
        params = DesignParams(0.5, 1, 0, metric='hamming', n=4, num_candidates=3, rng_seed=17, max_depth=6)
        with mock.patch('nlturbo.core.coding.designer.design_m1', wraps=design_m1) as search:
            result = design_trellis(params, self.topology, threads=1)
            search.assert_called_once()

        trellis = result.trellis
        m1 = trellis.subtables[0]
        self.assertEqual(result.achieved_density, Fraction(1, 2))
        self.assertListEqual(result.seed_trace['m1'], m1.octal())
        self.assertEqual(result.seed_trace['seed'], 17)
        self.assertIn(result.seed_trace['candidate'], range(3))
        for table in trellis.subtables:
            self.assertEqual(table.ones, 4)
            self.assertListEqual(pairwise_distances(table, 'hamming'), pairwise_distances(m1, 'hamming'))

        report = distance_report(trellis, 'hamming')
        self.assertGreater(result.branch_distance, 1)
        self.assertEqual(result.branch_distance, report.branch_distance)
        self.assertEqual(result.merge_distance, report.merge_distance)

        free = effective_free_distance(trellis, 'hamming', systematic_k=1, max_depth=6)
        self.assertEqual(result.effective_free_distance, free.distance)
        self.assertEqual(result.merged, free.merged)

        data = result.toDict()
        self.assertEqual(data['achieved_density_exact'], '1/2')
        self.assertEqual(data['seed_trace']['seed'], 17)

    def testDeterminism(self):
        params = DesignParams(0.5, 1, 1, metric='z', n=4, num_candidates=4, rng_seed=3, max_depth=6)
        first = design_trellis(params, self.topology, threads=1)
        second = design_trellis(params, self.topology, threads=1)
        self.assertListEqual(first.trellis.octal(), second.trellis.octal())
        self.assertDictEqual(first.seed_trace, second.seed_trace)
        self.assertGreaterEqual(first.merge_distance, 1)

        other = design_trellis(DesignParams(0.5, 1, 1, metric='z', n=4, num_candidates=4, rng_seed=4, max_depth=6),
                               self.topology, threads=1)
        self.assertEqual(other.trellis.subtables[0], first.trellis.subtables[0])

    def testRejectedCandidates(self):
        params = DesignParams(0.5, 1, 1, metric='z', n=4, num_candidates=3, rng_seed=3, max_depth=6)
        candidate_design = designer._design_candidate

        def first_fails(m1, params, topology, candidate):
            if candidate == 0:
                return candidate, None, None, None, None
            return candidate_design(m1, params, topology, candidate)

        with mock.patch('nlturbo.core.coding.designer._design_candidate', side_effect=first_fails):
            with self.assertLogs('nlturbo.core.coding.designer', level='WARNING') as logs:
                result = design_trellis(params, self.topology, threads=1)

        self.assertIn('candidate 0 did not reach merge distance 1', logs.output[0])
        self.assertListEqual(result.seed_trace['rejected'], [0])
        self.assertIn(result.seed_trace['candidate'], (1, 2))
        self.assertGreaterEqual(result.merge_distance, 1)

        with mock.patch('nlturbo.core.coding.designer._design_candidate',
                        side_effect=lambda m1, params, topology, candidate: (candidate, None, None, None, None)):
            self.assertRaises(MergeDistanceError, design_trellis, params, self.topology, 1)

    def testDuoBinaryDesign(self):
        settings.setValue(settings.Key.Search_Moves, 2000)
        settings.setValue(settings.Key.Restart_Interval, 500)
        topology = default_topology()
        for seed in range(4):
            params = DesignParams(0.621, 1, 1, metric='z', n=9, num_candidates=2, rng_seed=seed, max_depth=4)
            with mock.patch('nlturbo.core.coding.designer.design_m1', wraps=design_m1) as search:
                result = design_trellis(params, topology, threads=1)
                search.assert_called_once()

            trellis = result.trellis
            self.assertEqual(trellis.num_states, 16)
            self.assertEqual(trellis.k, 2)
            self.assertEqual(result.achieved_density, Fraction(22, 36))
            distances = pairwise_distances(trellis.subtables[0], 'z')
            for table in trellis.subtables:
                self.assertEqual(table.ones, 22)
                self.assertListEqual(pairwise_distances(table, 'z'), distances)

            report = distance_report(trellis, 'z')
            self.assertGreater(report.branch_distance, params.d_b)
            self.assertGreaterEqual(report.merge_distance, params.d_m)
            self.assertEqual(result.merge_distance, report.merge_distance)

    def testFailures(self):
        params = DesignParams(0.5, 1, 10, metric='hamming', n=4, max_merge_retries=3, max_depth=6)
        self.assertRaises(MergeDistanceError, design_trellis, params, self.topology, 1)

        params = DesignParams(0.5, 4, 0, metric='hamming', n=4, max_depth=6)
        self.assertRaises(InfeasibleDesignError, design_trellis, params, self.topology, 1)


if __name__ == '__main__':
    unittest.main()
