# run_lzs.py
"""
LZS Simulator Launcher

Usage:
    python run_lzs.py steady --config fig2.cfg --dphi 0 --phirf 0
    python run_lzs.py sweep --config config/runs/fig4.cfg --out m.csv --format both
    python run_lzs.py verify
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from core.errors import ConfigError, LZSError

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

# Lazy logger initialization
_logger = None


def get_logger():
    global _logger
    if _logger is None:
        from utils.logger import setup_logger
        _logger = setup_logger("launcher")
    return _logger


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _crossing(text: str):
    from runners.simulation_runner import parse_crossing
    try:
        return parse_crossing(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='lzs-sim',
        description='LZS interference simulator for a driven multilevel flux qubit',
    )
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    def model_command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument('--config', required=True,
                       help='run configuration file or bundled name (e.g. fig2.cfg, fig4)')
        p.add_argument('--model', help='override the model named in the config')
        return p

    def point(p: argparse.ArgumentParser):
        p.add_argument('--dphi', type=float, required=True, help='static flux detuning (mPhi0)')
        p.add_argument('--phirf', type=float, required=True, help='drive amplitude (mPhi0)')

    def grid_output(p: argparse.ArgumentParser):
        p.add_argument('--out', help='output file (study: output directory)')
        p.add_argument('--format', choices=('csv', 'pgm', 'both'), default='csv')
        p.add_argument('--threads', type=int, help='row workers (falls back to LZS_THREADS)')

    p = model_command('rate', 'print the LZ rate of one channel at one point')
    point(p)
    p.add_argument('--crossing', type=_crossing, default=(0, 2), help='level pair, e.g. 02')

    p = model_command('steady', 'print stationary populations at one point')
    point(p)

    p = model_command('dynamics', 'relax from the ground state and write a trajectory CSV')
    point(p)
    p.add_argument('--out', help='trajectory CSV path')
    p.add_argument('--dt', type=float, help='RK4 step (ns), defaults to the stable step')
    p.add_argument('--tmax', type=float, help='horizon (ns), defaults to the relaxation horizon')

    p = model_command('sweep', 'left-well population map')
    grid_output(p)
    p.add_argument('--mirror', action='store_true', help='reflect onto negative detuning')

    p = model_command('ratemap', 'LZ rate map of one channel')
    grid_output(p)
    p.add_argument('--crossing', type=_crossing, default=(0, 2), help='level pair, e.g. 02')
    p.add_argument('--mirror', action='store_true', help='reflect onto negative detuning')

    p = model_command('study', 'sweeps over drive frequencies and dephasing rates')
    grid_output(p)
    p.add_argument('--omegas', type=_floats, help='comma-separated drive frequencies (GHz)')
    p.add_argument('--gamma2s', type=_floats, help='comma-separated dephasing rates (GHz)')

    sub.add_parser('verify', help='run the built-in oracle checks')
    return parser


def resolve_config_path(name: str) -> Path:
    """A path as given, else a bundled configuration of that name"""
    from core.run_config import bundled_config_path

    path = Path(name)
    if path.exists():
        return path
    bundled = bundled_config_path(name)
    return bundled if bundled.exists() else path


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def run_command(args: argparse.Namespace) -> int:
    if args.command == 'verify':
        from core.verification import run_verification
        results = run_verification()
        for result in results:
            print(result.summary())
        return EXIT_OK if all(r.passed for r in results) else EXIT_RUNTIME

    from core.run_config import load_config
    from runners.simulation_runner import STUDY_GAMMA2S, STUDY_OMEGAS, SimulationRunner
    from utils.helpers import ensure_directories, get_thread_count

    config = load_config(resolve_config_path(args.config))
    threads = get_thread_count(getattr(args, 'threads', None))
    ensure_directories()
    runner = SimulationRunner(config, threads=threads, model=args.model)

    if args.command == 'rate':
        print(_fmt(runner.rate(args.crossing, args.dphi, args.phirf)))
    elif args.command == 'steady':
        p = runner.steady(args.dphi, args.phirf)
        print(' '.join(_fmt(v) for v in p.as_array()))
        print(f"p_left {_fmt(p.left)}")
    elif args.command == 'dynamics':
        print(runner.dynamics(args.dphi, args.phirf, args.out, args.tmax, args.dt))
    elif args.command == 'sweep':
        for path in runner.sweep(args.out, args.format, args.mirror):
            print(path)
    elif args.command == 'ratemap':
        for path in runner.ratemap(args.crossing, args.out, args.format, args.mirror):
            print(path)
    elif args.command == 'study':
        paths = runner.study(args.out, args.format,
                             args.omegas or STUDY_OMEGAS, args.gamma2s or STUDY_GAMMA2S)
        for path in paths:
            print(path)
    return EXIT_OK


def cli_main(argv: Optional[List[str]] = None) -> int:
    """
    Parse argv and run one command

    Returns:
        0 on success, 1 on a runtime error, 2 on a usage or config error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        return run_command(args)
    except ConfigError as e:
        get_logger().debug(f"Config error: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (LZSError, OSError) as e:
        get_logger().debug(f"Fatal error: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def main():
    """Main entry point"""
    try:
        sys.exit(cli_main())
    except KeyboardInterrupt:
        print("Interrupted", file=sys.stderr)
        sys.exit(EXIT_RUNTIME)


if __name__ == "__main__":
    main()
