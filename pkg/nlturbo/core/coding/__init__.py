from .trellis import (TrellisTopology, StateSubTable, TableTrellis, octal_decode, octal_encode, octal_to_int,
                      octal_width, ones_density)
from .tables import TABLE_I, TABLE_I_ONES, DEFAULT_LINEAR_MASKS, default_topology, load_table_i, linear_trellis
from .metrics import (DistanceMetric, DistanceReport, FreeDistance, directional_distance, hamming_distance, z_distance,
                      pairwise_distances, branch_distance, merge_distance, distance_report, effective_free_distance)
from .designer import (InfeasibleDesignError, MergeDistanceError, DesignParams, DesignResult, target_ones, design_m1,
                       branch_floor, permute_subtable, design_trellis)
from .interleaver import Interleaver, column_walk_feasible, make_interleaver, measure_spread
from .turbo import (PuncturePattern, CodeSpec, DensityEstimate, TableIIRow, TABLE_II, uniform_puncture, encode,
                    rate_of, analytic_ones_density, measure_ones_density, density_estimate, table_ii_spec)
from .decoder import DecoderConfig, bsc_llr, channel_llr, bcjr, viterbi, depuncture, turbo_decode
from .superposition import (BlockErrors, SuperpositionSpec, superpose, effective_crossovers, decode_user1,
                            decode_user2, simulate_block)
