import argparse
import csv
from fractions import Fraction
import json
import logging
import multiprocessing
import os
import pathlib
import sys
import fastjsonschema
from nlturbo.config import __version__, settings, setup_logging
from nlturbo.core.channel import (bbsc_region, bbsc_region_sweep, pick_p1, time_sharing_rates, z_capacity,
                                  z_capacity_numeric, z_optimal_ones_density)
from nlturbo.core.coding import (DecoderConfig, DesignParams, InfeasibleDesignError, MergeDistanceError,
                                 SuperpositionSpec, default_topology, load_table_i, rate_of)
from nlturbo.core.io import (CodeFileError, parse_fraction, read_code_file, read_code_spec, render_summary,
                             validate_report, write_code_file, write_code_spec, write_report_json, write_results_hdf,
                             write_sweep_csv)
from nlturbo.core.simulation import (FULL_GAPS, audit_code, crossovers_for_gaps, declared_properties, design_code,
                                     design_superposition_code, format_rate, full_block_budget, run_bbsc, run_density,
                                     run_zsweep, superposition_design_params)
from nlturbo.core.util import ExitCode, MetricKind

CAPACITY_GRID = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45]
DEFAULT_GAP = 0.08


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with the usage exit code"""
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ExitCode.Usage, f'{self.prog}: error: {message}\n')


class ValidationFailure(Exception):
    """Raised when a command completes but its result fails validation e.g. an audit mismatch"""


def log_uncaught_exceptions(exc_type, exc_value, exc_traceback):
    """
    Ensures exceptions that escape the commands are logged
    """
    logging.error('An unhandled exception occurred!', exc_info=(exc_type, exc_value, exc_traceback))
    logging.shutdown()
    sys.exit(ExitCode.Usage)


def _add_simulation_arguments(parser):
    parser.add_argument('--seed', type=int, default=0, help='master seed')
    parser.add_argument('--blocks', type=int, help='block budget per point (default: Block_Budget setting)')
    parser.add_argument('--errors', type=int, help='bit errors at which a point stops (default: Error_Target '
                                                   'setting)')
    parser.add_argument('--iterations', type=int, help='maximum decoder iterations')
    parser.add_argument('--algorithm', choices=['log-map', 'max-log-map'], help='constituent decoder algorithm')
    _add_output_arguments(parser)
    parser.add_argument('--csv', help='CSV output path (default: standard output)')
    parser.add_argument('--hdf', help='HDF5 archive with the report and interleaver permutations')
    parser.add_argument('--timing', action='store_true', help='write wall times into the JSON report')
    parser.add_argument('--summary', action='store_true', help='print a human readable summary to standard error')


def _add_output_arguments(parser):
    parser.add_argument('--out', help='JSON report path')
    parser.add_argument('--threads', type=int, help='worker processes (default: NLTURBO_THREADS or CPU count)')


def create_parser():
    """Creates the command line parser

    :return: parser
    :rtype: argparse.ArgumentParser
    """
    parser = ArgumentParser(prog='nlturbo', description='Design, audit and simulate nonlinear turbo codes with '
                                                        'arbitrary ones densities.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', required=True)

    design = commands.add_parser('design', help='design a nonlinear constituent trellis')
    target = design.add_mutually_exclusive_group(required=True)
    target.add_argument('--density', type=float, help='target ones density of the table')
    target.add_argument('--bbsc', type=float, nargs=2, metavar=('ALPHA', 'BETA'),
                        help='design user 1\'s non-systematic code of a superposition pair at the density picked '
                             'for --rates')
    design.add_argument('--rates', nargs=2, metavar=('R1', 'R2'), help='rate pair of a --bbsc design e.g. 1/10 1/7')
    design.add_argument('--db', type=int, default=1, help='branch distance floor')
    design.add_argument('--dm', type=int, default=1, help='merge distance floor')
    design.add_argument('--metric', choices=[kind.value for kind in MetricKind], default='z')
    design.add_argument('-n', '--n', type=int, help='output bits per transition (default: 9, or as wide as the rate '
                                                    'allows with --bbsc)')
    design.add_argument('--states', type=int, help='number of states, checked against the topology')
    design.add_argument('--k', type=int, help='input bits per step, checked against the topology')
    design.add_argument('--candidates', type=int, default=1, help='number of candidate trellises to rank')
    design.add_argument('--seed', type=int, default=0, help='master seed')
    design.add_argument('--retries', type=int, help='permutation draws per candidate')
    design.add_argument('--max-depth', type=int, help='depth of the effective free distance search')
    design.add_argument('--non-systematic', action='store_true', help='exclude systematic bits from the '
                                                                      'effective free distance')
    design.add_argument('--topology', help='trellis file whose next-state matrix is used (default: 16-state '
                                           'duo-binary topology)')
    design.add_argument('--out', '--code', dest='code', required=True, help='path of the trellis file to write')
    design.add_argument('--name', default='', help='name written into the trellis file')
    design.add_argument('--spec', help='turbo code file to write with --bbsc')
    design.add_argument('--info-bits', type=int, default=20000, help='message bits per block of the --spec code')
    design.add_argument('--interleaver-seed', type=int, default=1, help='interleaver seed of the --spec code')
    design.add_argument('--report', dest='out', help='JSON report path')
    design.add_argument('--threads', type=int, help='worker processes (default: NLTURBO_THREADS or CPU count)')

    audit = commands.add_parser('audit', help='recompute and check the declared properties of a code file')
    audit.add_argument('code', help='trellis or turbo code file')
    audit.add_argument('--metric', choices=[kind.value for kind in MetricKind])
    audit.add_argument('--max-depth', type=int, help='depth of the effective free distance search')
    audit.add_argument('--out', help='JSON report path')

    capacity = commands.add_parser('capacity', help='Z-channel capacity and optimal ones density')
    capacity.add_argument('--channel', choices=['z'], default='z', help='channel model')
    capacity.add_argument('--p', type=float, nargs='+', default=CAPACITY_GRID, help='crossover probabilities')
    capacity.add_argument('--numeric', action='store_true', help='add the numerically maximised mutual '
                                                                 'information')

    region = commands.add_parser('region', help='BBSC capacity region boundary')
    region.add_argument('--alpha', type=float, required=True)
    region.add_argument('--beta', type=float, required=True)
    region.add_argument('--points', type=int, default=101)
    region.add_argument('--rates', type=float, nargs=2, metavar=('R1', 'R2'),
                        help='print the user-1 ones densities supporting the rate pair instead')
    region.add_argument('--p1', type=float, help='print the rate pair of a single user-1 ones density instead')

    zsim = commands.add_parser('z-sim', help='bit error rate sweep on the Z-channel')
    zsim.add_argument('--code', required=True, help='turbo code file')
    points = zsim.add_mutually_exclusive_group()
    points.add_argument('--p', type=float, nargs='+', help='crossover probabilities')
    points.add_argument('--gap', type=float, nargs='+', help='gaps to capacity in bits (default: 0.08)')
    points.add_argument('--full', action='store_true', help='full-scale operating points with a block budget '
                                                            'sized for a BER of 1e-5')
    _add_simulation_arguments(zsim)

    bbsc = commands.add_parser('bbsc-sim', help='superposition coding on the broadcast BSC')
    bbsc.add_argument('--alpha', type=float, required=True)
    bbsc.add_argument('--beta', type=float, required=True)
    bbsc.add_argument('--spec1', required=True, help='turbo code file of user 1')
    bbsc.add_argument('--spec2', required=True, help='turbo code file of user 2')
    bbsc.add_argument('--p1', type=float, help='ones density of user 1 (default: expected density of spec1)')
    bbsc.add_argument('--genie', action='store_true', help='also decode user 1 with user 2\'s codeword known')
    _add_simulation_arguments(bbsc)

    density = commands.add_parser('density', help='measure the ones density of the punctured codes')
    density.add_argument('--code', help='trellis file (default: embedded 16-state code)')
    density.add_argument('--info-bits', type=int, default=20000)
    density.add_argument('--min-bits', type=int, default=1_000_000, help='coded bits measured per rate')
    density.add_argument('--seed', type=int, default=0)
    density.add_argument('--csv', help='CSV output path (default: standard output)')
    _add_output_arguments(density)

    return parser


def _write_csv(path, rows, columns):
    if path is None:
        write_sweep_csv(sys.stdout, rows, columns)
        return
    with open(path, 'w', encoding='utf-8', newline='') as csv_file:
        write_sweep_csv(csv_file, rows, columns)


def _print_json(data):
    json.dump(data, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write('\n')


def _emit(report, args, interleavers=None):
    data = report.toDict(getattr(args, 'timing', False))
    if args.out:
        write_report_json(args.out, data)
    else:
        validate_report(data)

    if report.points or report.command == 'density':
        rows, columns = report.rows()
        _write_csv(args.csv, rows, columns)
    elif not args.out:
        _print_json(data)

    if getattr(args, 'hdf', None):
        write_results_hdf(args.hdf, data, interleavers)
    if getattr(args, 'summary', False):
        print(render_summary(data), file=sys.stderr)


def _decoder_config(args):
    return DecoderConfig(args.iterations, args.algorithm)


def _check_topology(topology, args):
    if args.states is not None and args.states != topology.num_states:
        raise ValueError(f'--states {args.states} does not match the {topology.num_states}-state topology.')
    if args.k is not None and args.k != topology.k:
        raise ValueError(f'--k {args.k} does not match the topology with k={topology.k}.')


def design_command(args):
    topology = read_code_file(args.topology).trellis.topology if args.topology else default_topology()
    _check_topology(topology, args)
    if args.bbsc is None:
        if args.rates or args.spec:
            raise ValueError('--rates and --spec require --bbsc.')
        params = DesignParams(args.density, args.db, args.dm, args.metric, args.n or 9, args.candidates, args.seed,
                              args.retries, not args.non_systematic, args.max_depth)
        result, report = design_code(params, topology, args.threads)
        write_code_file(args.code, result.trellis, args.name, declared_properties(result, params))
        _emit(report, args)
        return

    if not args.rates:
        raise ValueError('--bbsc requires --rates R1 R2.')
    alpha, beta = args.bbsc
    r1, r2 = (parse_fraction(rate) if '/' in rate else Fraction(rate) for rate in args.rates)
    _, params = superposition_design_params(alpha, beta, r1, r2, topology.k, args.db, args.dm, args.metric, args.n,
                                            args.candidates, args.seed, args.retries, args.max_depth)
    result, spec, report = design_superposition_code(alpha, beta, r1, r2, params, topology, args.info_bits,
                                                     args.interleaver_seed, args.threads)
    write_code_file(args.code, result.trellis, args.name, declared_properties(result, params))
    if args.spec:
        trellis_path = os.path.relpath(args.code, os.path.dirname(os.path.abspath(args.spec)))
        write_code_spec(args.spec, spec, pathlib.Path(trellis_path).as_posix(), args.name,
                        format_rate(rate_of(spec)))
    _emit(report, args)


def audit_command(args):
    report = audit_code(args.code, args.metric, args.max_depth)
    _emit(report, args)
    mismatches = report.sections['audit']['mismatches']
    if mismatches:
        fields = ', '.join(mismatch['field'] for mismatch in mismatches)
        raise ValidationFailure(f'{args.code}: declared values disagree with the recomputed values ({fields}).')


def capacity_command(args):
    rows = []
    for p in args.p:
        row = {'p': p, 'capacity': z_capacity(p), 'ones_density': z_optimal_ones_density(p)}
        if args.numeric:
            row['capacity_numeric'], row['ones_density_numeric'] = z_capacity_numeric(p)
        rows.append(row)
    columns = ['p', 'capacity', 'ones_density']
    if args.numeric:
        columns.extend(['capacity_numeric', 'ones_density_numeric'])
    write_sweep_csv(sys.stdout, rows, columns)


def region_command(args):
    if args.p1 is not None:
        point = bbsc_region(args.alpha, args.beta, args.p1)
        write_sweep_csv(sys.stdout, [{'p1': args.p1, 'r1': point.r1, 'r2': point.r2}], ['p1', 'r1', 'r2'])
        return
    if args.rates:
        interval = pick_p1(args.alpha, args.beta, *args.rates)
        write_sweep_csv(sys.stdout, [interval._asdict()], ['lower', 'upper', 'p1'])
        return

    rows = []
    boundary = bbsc_region_sweep(args.alpha, args.beta, args.points)
    for index, point in enumerate(boundary):
        shared = time_sharing_rates(args.alpha, args.beta, index / (len(boundary) - 1))
        rows.append({'p1': point.p1, 'r1': point.r1, 'r2': point.r2, 'time_sharing_r1': shared.r1,
                     'time_sharing_r2': shared.r2})
    write_sweep_csv(sys.stdout, rows, ['p1', 'r1', 'r2', 'time_sharing_r1', 'time_sharing_r2'])


def zsim_command(args):
    definition = read_code_spec(args.code)
    spec = definition.spec
    block_budget = args.blocks
    if args.p:
        crossovers = args.p
    elif args.full:
        crossovers = crossovers_for_gaps(rate_of(spec), FULL_GAPS)
        block_budget = full_block_budget(spec.info_bits, args.errors) if block_budget is None else block_budget
    else:
        crossovers = crossovers_for_gaps(rate_of(spec), args.gap or [DEFAULT_GAP])

    echo = {'code': args.code, 'full': args.full}
    report = run_zsweep(spec, crossovers, args.seed, _decoder_config(args), args.errors, block_budget, args.threads,
                        echo)
    _emit(report, args, {'spec': spec.interleaver})


def bbsc_command(args):
    spec1 = read_code_spec(args.spec1).spec
    spec2 = read_code_spec(args.spec2).spec
    superposition = SuperpositionSpec(spec1, spec2, args.p1)
    echo = {'spec1': args.spec1, 'spec2': args.spec2}
    report = run_bbsc(superposition, args.alpha, args.beta, args.seed, _decoder_config(args), args.genie,
                      args.errors, args.blocks, args.threads, echo)
    _emit(report, args, {'user1': spec1.interleaver, 'user2': spec2.interleaver})


def density_command(args):
    trellis = read_code_file(args.code).trellis if args.code else load_table_i()
    report = run_density(info_bits=args.info_bits, seed=args.seed, min_bits=args.min_bits, trellis=trellis,
                         threads=args.threads)
    _emit(report, args)


COMMANDS = {'design': design_command, 'audit': audit_command, 'capacity': capacity_command,
            'region': region_command, 'z-sim': zsim_command, 'bbsc-sim': bbsc_command,
            'density': density_command}


def run(argv=None):
    """Runs a command and maps its outcome to an exit code

    :param argv: command line arguments
    :type argv: Union[List[str], None]
    :return: exit code
    :rtype: ExitCode
    """
    args = create_parser().parse_args(argv)
    logger = logging.getLogger(__name__)
    if getattr(args, 'threads', None) is not None:
        settings.setValue(settings.Key.Threads, args.threads)

    try:
        COMMANDS[args.command](args)
    except (CodeFileError, fastjsonschema.JsonSchemaException, InfeasibleDesignError, MergeDistanceError,
            ValidationFailure) as error:
        logger.error(str(error))
        return ExitCode.Validation
    except (ValueError, KeyError, OSError, csv.Error) as error:
        logger.error(str(error))
        return ExitCode.Usage

    return ExitCode.Success


def main(argv=None):
    multiprocessing.freeze_support()
    setup_logging('main.log')
    sys.excepthook = log_uncaught_exceptions

    logger = logging.getLogger(__name__)
    logger.info('Started nlturbo %s...', __version__)
    exit_code = run(argv)
    logging.shutdown()
    sys.exit(exit_code)


if __name__ == '__main__':
    main()
