from .simulation import (Interval, SimReport, FULL_GAPS, FULL_TARGET_BER, format_rate, wilson_interval,
                         crossovers_for_gaps, full_block_budget, run_zsweep, run_bbsc, run_density, audit_code,
                         design_code, declared_properties, superposition_design_params, design_superposition_code)
