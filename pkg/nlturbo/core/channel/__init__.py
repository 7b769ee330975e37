from .capacity import (RatePoint, DensityInterval, binary_entropy, star, z_optimal_zeros_density,
                       z_optimal_ones_density, z_mutual_information, z_capacity, z_capacity_numeric,
                       z_crossover_for_capacity, bbsc_region, bbsc_region_sweep, time_sharing_rates, pick_p1)
from .model import ChannelModel
