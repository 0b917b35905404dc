"""
Spanning-Tree Designs - Command Line Interface.

Usage:
    softblock design --input X.csv --method softblock --seed 7 --output out/
    softblock balance --input X.csv --assignment out/assignment.csv
    softblock estimate --input X.csv --assignment out/assignment.csv \\
        --graph out/graph.csv --outcomes y.csv --estimator design --output est/
    softblock simulate --config configs/acceptance.json --output results.csv
    softblock runtime --method softblock --n-grid 500 1000 2000 --output runtime.csv
    softblock sweep --dgp twocircles --n 256 --bandwidths 0.01 0.1 1 10 100

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

import argparse
import json
import sys
from typing import Optional

from src.core.seeds import DEFAULT_SEED, random_seed
from src.designs.types import DesignMethod
from src.errors import ConfigError, DesignError
from src.estimators.types import EstimatorType
from src.log import configure_logging
from src.simulate.dgps import DGPType

FLOAT_FORMAT = '%.17g'


def _seed(value: str) -> int:
    if value.lower() == 'random':
        return random_seed()
    try:
        seed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer or 'random', got {value!r}")
    if seed < 0:
        raise argparse.ArgumentTypeError(f'seed must be nonnegative, got {seed}')
    return seed


def _bandwidth(value: str):
    if value.lower() == 'auto':
        return 'auto'
    try:
        h = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bandwidth must be 'auto' or a number, got {value!r}")
    if not h > 0:
        raise argparse.ArgumentTypeError(f'bandwidth must be positive, got {value}')
    return h


def _accept_frac(value: str) -> float:
    try:
        frac = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'accept-frac must be a number, got {value!r}')
    if not 0 < frac <= 1:
        raise argparse.ArgumentTypeError(f'accept-frac must lie in (0, 1], got {value}')
    return frac


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {value!r}')
    if number < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {value}')
    return number


def _add_input_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '-i', '--input',
        type=str,
        required=True,
        help='Covariates CSV (one row per unit)'
    )
    parser.add_argument(
        '--has-header',
        action='store_true',
        help='Covariates CSV starts with a header row'
    )


def _add_kernel_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--no-standardize',
        dest='standardize',
        action='store_false',
        help='Use covariates as given instead of standardizing them'
    )
    parser.add_argument(
        '--bandwidth',
        type=_bandwidth,
        default='auto',
        help="Gaussian bandwidth: 'auto' (median heuristic) or a positive number"
    )


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog='softblock',
        description='Spanning-tree experimental designs: assign, check balance, estimate'
    )
    parser.add_argument(
        '-v', '--verbose',
        action='count',
        default=0,
        help='More log output on stderr (-v info, -vv debug)'
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # Design command
    design_parser = subparsers.add_parser('design', help='Assign units to treatment and control')
    _add_input_args(design_parser)
    _add_kernel_args(design_parser)
    design_parser.add_argument(
        '-m', '--method',
        type=str,
        choices=DesignMethod.values(),
        default=DesignMethod.SOFTBLOCK.value,
        help='Design method (default: softblock)'
    )
    design_parser.add_argument(
        '--accept-frac',
        type=_accept_frac,
        default=0.01,
        help='Rerandomization acceptance quantile (default: 0.01)'
    )
    design_parser.add_argument(
        '-s', '--seed',
        type=_seed,
        default=DEFAULT_SEED,
        help=f"Seed, or 'random' (default: {DEFAULT_SEED})"
    )
    design_parser.add_argument(
        '--fixed-flip',
        dest='randomize_flip',
        action='store_false',
        help='SoftBlock: treat the lowest-index unit instead of flipping a coin'
    )
    design_parser.add_argument(
        '--emit-logprob',
        action='store_true',
        help='SoftBlock: add the tree log-probability to design.json'
    )
    design_parser.add_argument(
        '-o', '--output',
        type=str,
        required=True,
        help='Output directory for assignment.csv, graph.csv and design.json'
    )

    # Balance command
    balance_parser = subparsers.add_parser('balance', help='Report covariate balance of an assignment')
    _add_input_args(balance_parser)
    _add_kernel_args(balance_parser)
    balance_parser.add_argument(
        '-a', '--assignment',
        type=str,
        required=True,
        help='Assignment CSV (unit_index, arm, component_id)'
    )
    balance_parser.add_argument(
        '-o', '--output',
        type=str,
        default=None,
        help='JSON output file (default: stdout)'
    )

    # Estimate command
    estimate_parser = subparsers.add_parser('estimate', help='Estimate ATE and ITE from observed outcomes')
    _add_input_args(estimate_parser)
    estimate_parser.add_argument(
        '-a', '--assignment',
        type=str,
        required=True,
        help='Assignment CSV (unit_index, arm, component_id)'
    )
    estimate_parser.add_argument(
        '-y', '--outcomes',
        type=str,
        required=True,
        help='Outcomes CSV (one column)'
    )
    estimate_parser.add_argument(
        '--outcomes-header',
        action='store_true',
        help='Outcomes CSV starts with a header row'
    )
    estimate_parser.add_argument(
        '-g', '--graph',
        type=str,
        default=None,
        help='Support-graph CSV (i, j, weight); needed by the design and pairs estimators'
    )
    estimate_parser.add_argument(
        '-e', '--estimator',
        type=str,
        choices=EstimatorType.values(),
        default=EstimatorType.DESIGN.value,
        help='Estimator (default: design)'
    )
    estimate_parser.add_argument(
        '--no-standardize',
        dest='standardize',
        action='store_false',
        help='knn: search neighbours on the covariates as given instead of standardized ones'
    )
    estimate_parser.add_argument(
        '-k', '--k',
        type=_positive_int,
        default=5,
        help='Neighbours per arm for the knn estimator (default: 5)'
    )
    estimate_parser.add_argument(
        '-o', '--output',
        type=str,
        required=True,
        help='Output directory for ate.json and ite.csv'
    )

    # Simulate command
    simulate_parser = subparsers.add_parser('simulate', help='Run a benchmark from a JSON config')
    simulate_parser.add_argument(
        '-c', '--config',
        type=str,
        required=True,
        help='Benchmark config JSON'
    )
    simulate_parser.add_argument(
        '-o', '--output',
        type=str,
        required=True,
        help='Results CSV'
    )
    simulate_parser.add_argument(
        '-j', '--jobs',
        type=_positive_int,
        default=None,
        help='Worker processes (overrides the config)'
    )
    simulate_parser.add_argument(
        '--serial-timing',
        action='store_true',
        help='Run replications in-process when timing'
    )
    simulate_parser.add_argument(
        '--no-progress',
        dest='progress',
        action='store_false',
        help='Hide the progress bar'
    )

    # Runtime command
    runtime_parser = subparsers.add_parser('runtime', help='Time design construction against n')
    runtime_parser.add_argument(
        '-m', '--method',
        type=str,
        choices=DesignMethod.values(),
        default=DesignMethod.SOFTBLOCK.value,
        help='Design method (default: softblock)'
    )
    runtime_parser.add_argument(
        '--n-grid',
        type=_positive_int,
        nargs='+',
        default=[500, 1000, 2000, 4000, 8000],
        help='Ascending sample sizes (default: 500 1000 2000 4000 8000)'
    )
    runtime_parser.add_argument(
        '-r', '--reps',
        type=_positive_int,
        default=3,
        help='Timed designs per n (default: 3)'
    )
    runtime_parser.add_argument(
        '-d', '--dim',
        type=_positive_int,
        default=2,
        help='Covariate dimension (default: 2)'
    )
    runtime_parser.add_argument(
        '-s', '--seed',
        type=_seed,
        default=DEFAULT_SEED,
        help=f"Seed, or 'random' (default: {DEFAULT_SEED})"
    )
    runtime_parser.add_argument(
        '-o', '--output',
        type=str,
        default=None,
        help='CSV of (n, mean_ms)'
    )

    # Sweep command
    sweep_parser = subparsers.add_parser('sweep', help='SoftBlock errors across bandwidths')
    sweep_parser.add_argument(
        '--dgp',
        type=str,
        choices=DGPType.values(),
        default=DGPType.TWOCIRCLES.value,
        help='Data-generating process (default: twocircles)'
    )
    sweep_parser.add_argument(
        '-n', '--n',
        type=_positive_int,
        default=256,
        help='Sample size (default: 256)'
    )
    sweep_parser.add_argument(
        '--bandwidths',
        type=_bandwidth,
        nargs='+',
        default=[0.01, 0.1, 1.0, 10.0, 100.0],
        help='Bandwidths to compare'
    )
    sweep_parser.add_argument(
        '-r', '--reps',
        type=_positive_int,
        default=10,
        help='Replications per bandwidth (default: 10)'
    )
    sweep_parser.add_argument(
        '-s', '--seed',
        type=_seed,
        default=DEFAULT_SEED,
        help=f"Seed, or 'random' (default: {DEFAULT_SEED})"
    )
    sweep_parser.add_argument(
        '-o', '--output',
        type=str,
        default=None,
        help='CSV output (default: stdout)'
    )

    return parser


def cmd_design(args) -> int:
    """Handle design command."""
    from src.core.dataset import load_covariates, standardize
    from src.designs.base import DesignConfig
    from src.designs.designer import ExperimentDesigner

    X = load_covariates(args.input, has_header=args.has_header)
    config = DesignConfig(
        bandwidth=args.bandwidth,
        standardize=args.standardize,
        randomize_flip=args.randomize_flip,
        accept_frac=args.accept_frac,
    )
    designer = ExperimentDesigner(method=args.method, config=config)
    design = designer.design(X, seed=args.seed)

    if args.emit_logprob:
        if design.method is DesignMethod.SOFTBLOCK:
            from src.dpp.trees import support_tree_log_probability
            design = design.with_metadata(
                tree_log_probability=support_tree_log_probability(
                    standardize(X) if args.standardize else X, design
                )
            )
        else:
            print(f'⚠️ --emit-logprob only applies to softblock, ignored for {args.method}',
                  file=sys.stderr)

    design.save(args.output)
    n1, n0 = design.group_sizes
    print(f'✅ {args.method} design: {n1} treated, {n0} control, seed {design.seed}', file=sys.stderr)
    print(f'   Saved to {args.output}', file=sys.stderr)
    return 0


def cmd_balance(args) -> int:
    """Handle balance command."""
    from src.balance.report import balance_report
    from src.core.dataset import load_assignment, load_covariates

    X = load_covariates(args.input, has_header=args.has_header)
    assignment = load_assignment(args.assignment)
    bandwidth = None if args.bandwidth == 'auto' else args.bandwidth
    report = balance_report(X, assignment, bandwidth=bandwidth, standardize=args.standardize)

    if args.output:
        report.save(args.output)
        print(f'✅ Saved to {args.output}', file=sys.stderr)
    else:
        print(report.to_json())
    return 0


def cmd_estimate(args) -> int:
    """Handle estimate command."""
    from src.core.dataset import load_assignment, load_covariates, load_outcomes
    from src.designs.design import Design
    from src.estimators.effects import estimate_effects, save_effects
    from src.graph.spanning_tree import load_support_graph

    X = load_covariates(args.input, has_header=args.has_header)
    assignment = load_assignment(args.assignment)
    y = load_outcomes(args.outcomes, has_header=args.outcomes_header)
    estimator = EstimatorType.parse(args.estimator)

    if args.graph:
        edges, weights = load_support_graph(args.graph, assignment.n)
        method = DesignMethod.MATCHED_PAIRS if estimator is EstimatorType.PAIRS else DesignMethod.SOFTBLOCK
        design = Design.from_support_graph(assignment, edges, weights, method=method)
    else:
        design = Design(assignment=assignment, method=DesignMethod.BERNOULLI, seed=0)

    effects = estimate_effects(estimator, design, X, y, k=args.k, standardize=args.standardize)
    save_effects(effects, args.output)
    print(f'✅ {estimator.value} ATE = {effects.ate:.6g}', file=sys.stderr)
    print(f'   Saved to {args.output}', file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    """Handle simulate command."""
    from src.simulate.benchmark import BenchmarkConfig, run_benchmark

    try:
        config = BenchmarkConfig.from_json(args.config)
    except ConfigError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 2
    if args.jobs is not None:
        config.n_jobs = args.jobs
    if args.serial_timing:
        config.serial_timing = True

    progress = args.progress and sys.stderr.isatty()
    table = run_benchmark(config, output=args.output, progress=progress)
    print(f'📊 {table.n_succeeded} cells succeeded, {table.n_failed} failed, '
          f'{len(table.skipped)} skipped', file=sys.stderr)
    print(f'   Saved to {args.output}', file=sys.stderr)
    return 0 if table.n_succeeded > 0 else 1


def cmd_runtime(args) -> int:
    """Handle runtime command."""
    from src.simulate.benchmark import runtime_scaling

    result = runtime_scaling(args.method, args.n_grid, reps=args.reps, dimension=args.dim, seed=args.seed)
    frame = result.to_frame()
    if args.output:
        frame.to_csv(args.output, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    for n, ms in result.points:
        print(f'   n={n:>6}  {ms:10.3f} ms', file=sys.stderr)
    print(f'📈 log-log slope: {result.slope:.3f}', file=sys.stderr)
    print(json.dumps({'method': result.method.value, 'slope': result.slope}))
    return 0


def cmd_sweep(args) -> int:
    """Handle sweep command."""
    from src.simulate.benchmark import bandwidth_sensitivity

    bandwidths = [h for h in args.bandwidths if h != 'auto']
    if not bandwidths:
        raise ConfigError('sweep needs numeric bandwidths')
    frame = bandwidth_sensitivity(args.dgp, args.n, bandwidths, reps=args.reps, seed=args.seed)
    if args.output:
        frame.to_csv(args.output, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        print(f'✅ Saved to {args.output}', file=sys.stderr)
    else:
        sys.stdout.write(frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n'))
    return 0


COMMANDS = {
    'design': cmd_design,
    'balance': cmd_balance,
    'estimate': cmd_estimate,
    'simulate': cmd_simulate,
    'runtime': cmd_runtime,
    'sweep': cmd_sweep,
}


def main(argv: Optional[list] = None) -> int:
    """Main entry point for CLI."""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command is None:
        parser.print_help()
        return 0

    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except DesignError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
