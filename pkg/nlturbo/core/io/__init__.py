from .reader import (CodeFileError, CodeDefinition, SpecDefinition, read_code_file, read_code_spec, read_definition,
                     read_results_hdf, validate_code, parse_fraction)
from .writer import (validate_report, code_file_data, write_code_file, code_spec_data, write_code_spec,
                     write_report_json, write_sweep_csv, write_results_hdf, render_summary)
