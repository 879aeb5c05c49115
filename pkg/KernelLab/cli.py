#!/usr/bin/env python3
"""
KernelLab Command Line Interface

Batch front-end for kernel, prexactness and topology computations on
finitely presented linear categories.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from KernelLab import __version__
from KernelLab.sdk import SessionConfig, run_command
from KernelLab.sdk.config import COMMANDS


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser for the kernellab CLI."""
    parser = argparse.ArgumentParser(
        prog='kernellab',
        description='KernelLab: canonical and homological kernels of linear categories',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Canonical kernel of x at R in the dual numbers
  kernellab sigma --category dualnumbers --object R --morphism x

  # Local prexactness of a functor
  kernellab prexact --functor theta_k2

  # All topologies on the Noy skeleton of the dual numbers
  kernellab topologies --category noy-dualnumbers

  # Frobenius image dimensions in characteristic 2
  kernellab fr-plus --field F2 --window-len 3
        """
    )

    parser.add_argument('command', choices=COMMANDS, help='Computation to run')

    # Category and functor
    parser.add_argument('--category', '-c', type=str, help='Category name under KernelLab/data or a .cat path')
    parser.add_argument('--functor', '-f', type=str, help='Functor declared in the category file')
    parser.add_argument('--field', type=str, help='Base field: Q or Fp (must match the category)')

    # Objects and morphisms
    parser.add_argument('--object', type=str, help='Object A, e.g. R or "R + R"')
    parser.add_argument('--morphism', '-m', type=str, help='Morphism expression, e.g. "2*x - id" or "a ; b"')
    parser.add_argument('--target-morphism', type=str, help='Second morphism (noy-hom, kb-hom, compose)')
    parser.add_argument('--source', type=str, help='Source object')
    parser.add_argument('--target', type=str, help='Target object')

    # Window
    parser.add_argument('--window-len', type=int, help='Longest word in the test window')
    parser.add_argument('--window-dots', type=int, help='Dot budget of the test window')
    parser.add_argument('--degree-lo', type=int, default=0, help='Lowest complex degree (default: 0)')
    parser.add_argument('--degree-hi', type=int, default=1, help='Highest complex degree (default: 1)')
    parser.add_argument('--skeleton', type=str, nargs='+', default=[], help='Explicit window objects')
    parser.add_argument('--assert-complete', action='store_true',
                        help='Treat the window as complete (flagged in the report)')

    # Output
    parser.add_argument('--out', '-o', type=str, help='Write the report to this path (.csv adds a row table)')
    parser.add_argument('--json', action='store_true', help='Machine-readable report')
    parser.add_argument('--seed', type=int, help='Seed for sampled instances')

    parser.add_argument('--version', action='version', version=f'KernelLab {__version__}')
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose output')

    return parser


def setup_logging(verbose: bool = False):
    """Set up logging on stderr; stdout carries only the report."""
    level = logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr
    )


def build_config(args: argparse.Namespace) -> SessionConfig:
    return SessionConfig.from_env(
        command=args.command,
        category=args.category,
        functor=args.functor,
        field=args.field,
        object=args.object,
        morphism=args.morphism,
        target_morphism=args.target_morphism,
        source=args.source,
        target=args.target,
        window_len=args.window_len,
        window_dots=args.window_dots,
        degree_lo=args.degree_lo,
        degree_hi=args.degree_hi,
        skeleton=args.skeleton,
        assert_complete=args.assert_complete,
        out=args.out,
        json_output=args.json,
        seed=args.seed,
        verbose=args.verbose,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    setup_logging(args.verbose)

    try:
        config = build_config(args)
    except ValidationError as e:
        print("Configuration errors:", file=sys.stderr)
        for error in e.errors():
            print(f"  - {error['msg']}", file=sys.stderr)
        return 1

    report = run_command(config)
    if config.out is not None:
        report.save(config.out, config.json_output)
    sys.stdout.write(report.render(config.json_output))
    if report.exit_code == 1:
        for note in report.notes:
            print(f"Error: {note}", file=sys.stderr)
    return report.exit_code


if __name__ == '__main__':
    sys.exit(main())
