# Command-line front end
import argparse
import logging
import sys

from pyEntangle.core.grover import grover_table
from pyEntangle.core.hhl import DEFAULT_ROTATION_CONSTANT
from pyEntangle.core.sweep import SweepConfig, hhl_sweep, rank2_curve, write_meta, write_table
from pyEntangle.internal.errors import DimensionError, ValidationError

log = logging.getLogger('pyEntangle')
__all__ = ['main', 'build_parser']

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _common_flags():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--output-dir', default='.', help='directory receiving data files (default: .)')
    parent.add_argument('--grid-points', type=int, default=101, help='number of b0^2 grid points (default: 101)')
    parent.add_argument('--c', type=float, default=DEFAULT_ROTATION_CONSTANT,
                        help='rotation constant C (default: {:.6f})'.format(DEFAULT_ROTATION_CONSTANT))
    parent.add_argument('--format', choices=['csv', 'tsv'], default='csv', help='data file format (default: csv)')
    parent.add_argument('--workers', type=int, default=1, help='threads used for the b0^2 sweep (default: 1)')
    parent.add_argument('--verbose', action='store_true', help='log debug output')
    return parent


def build_parser():
    parser = argparse.ArgumentParser(prog='pyentangle',
                                     description='Entanglement flow through simulated Grover and HHL circuits')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    common = _common_flags()

    grover = subparsers.add_parser('grover-table', parents=[common],
                                   help='three-tangle and concurrences of every Grover stage')
    grover.add_argument('--n', type=int, default=3, help='number of qubits (default: 3)')
    grover.add_argument('--target', type=int, default=7, help='marked basis index (default: 7)')
    grover.add_argument('--iterations', type=int, default=None,
                        help='oracle/diffuser rounds (default: floor(pi sqrt(N) / 4))')
    grover.set_defaults(handler=cmd_grover_table)

    sweep = subparsers.add_parser('hhl-sweep', parents=[common], help='tangles of the HHL stages over b0^2')
    sweep.set_defaults(handler=cmd_hhl_sweep)

    curve = subparsers.add_parser('rank2-curve', parents=[common],
                                  help='characteristic curves of the rank-2 mixture')
    curve.add_argument('--x1', type=float, default=0.3, help='amplitude x1 in [0, 1] (default: 0.3)')
    curve.add_argument('--theta-steps', type=int, default=629, help='theta grid size over [0, 2 pi] (default: 629)')
    curve.add_argument('--p-steps', type=int, default=101, help='p grid size over [0, 1] (default: 101)')
    curve.set_defaults(handler=cmd_rank2_curve)

    verify = subparsers.add_parser('verify', parents=[common], help='cross-validate simulation and closed forms')
    verify.add_argument('--closed-form-c', type=float, default=None,
                        help='rotation constant handed only to the closed forms')
    verify.add_argument('--seed', type=int, default=0, help='seed for the randomized checks (default: 0)')
    verify.set_defaults(handler=cmd_verify)

    return parser


def _flags(args):
    return {key: value for key, value in sorted(vars(args).items()) if key not in ('handler', 'command')}


def _finish(config, args, paths):
    from pyEntangle import __version__

    paths.append(write_meta(config, args.command, _flags(args), __version__))
    for path in paths:
        print('wrote {}'.format(path))
    return EXIT_OK


def cmd_grover_table(args, config):
    table = grover_table(args.n, args.target, args.iterations)
    print(table.to_string(index=False))
    return _finish(config, args, [write_table(table, config, 'grover_table')])


def cmd_hhl_sweep(args, config):
    tangles, pi_tangles = hhl_sweep(config)
    print('b0^2 grid of {} points, C = {:.17g}'.format(config.grid_points, config.rotation_constant))
    paths = [write_table(tangles, config, 'fig4a'), write_table(pi_tangles, config, 'fig4b')]
    return _finish(config, args, paths)


def cmd_rank2_curve(args, config):
    if not 0.0 <= args.x1 <= 1.0:
        raise ValidationError('x1 must lie in [0, 1], received {}'.format(args.x1))
    frame = rank2_curve(args.x1, args.theta_steps, args.p_steps)
    marks = frame.loc[frame['p_mark'] != '', ['p', 'p_mark']].drop_duplicates()
    for _, row in marks.iterrows():
        print('{} = {:.17g}'.format(row['p_mark'], row['p']))
    return _finish(config, args, [write_table(frame, config, 'rank2_curves')])


def cmd_verify(args, config):
    from pyEntangle.core.verification import run_verification

    report = run_verification(config, closed_form_constant=args.closed_form_c, seed=args.seed)
    print('{:<34} {:>12} {:>10}  {}'.format('check', 'discrepancy', 'tolerance', 'status'))
    for line in report.lines():
        print(line)
    print('max discrepancy {:.3e}'.format(report.max_discrepancy))

    if not report.passed:
        names = ', '.join(check.name for check in report.failures)
        print('verification failed: {}'.format(names), file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def main(argv=None):
    """Entry point of the ``pyentangle`` command.

    Returns:
        0 on success, 1 on a failed verification or an I/O error, 2 on a usage error

    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')

    try:
        config = SweepConfig.from_args(args)
        return args.handler(args, config)
    except (ValidationError, DimensionError) as exc:
        parser.print_usage(sys.stderr)
        print('{}: error: {}'.format(parser.prog, exc.value), file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print('{}: cannot write output: {}'.format(parser.prog, exc), file=sys.stderr)
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
