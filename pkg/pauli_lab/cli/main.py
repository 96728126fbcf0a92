# cli/main.py
"""
Entry point: python -m pauli_lab.cli.main <command> [flags]

Exit codes: 0 when everything ran and every executed check passed, 1 when a
verify check failed, 2 on a domain error or bad input.
"""
import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

from ..common.utils import parse_count, setup_logging
from ..core.errors import PauliLabError
from ..models.reports import envelope
from ..models.run_config import RunConfig, load_defaults
from .commands import COMMANDS
from .output import emit

logger = logging.getLogger(__name__)


def _count(text: str) -> int:
    try:
        return parse_count(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pauli_lab", description="Pauli measurement lattice toolkit.")
    parser.add_argument("command", choices=sorted(COMMANDS), help="What to run.")
    parser.add_argument("--n", type=int, default=None, help="Number of qubits.")
    parser.add_argument("--k", type=int, default=None, help="Level, repetition count or walk length.")
    parser.add_argument("--seed", type=_count, default=None, help="Seed (default from configs/defaults.json).")
    parser.add_argument("--budget", type=_count, default=None, help="Search budget in nodes; accepts 2e9.")
    parser.add_argument("--format", choices=("json", "csv", "text"), default=None, help="Output format.")
    parser.add_argument("--out", default=None, help="Output path (enumerate: the fixture file).")
    parser.add_argument("--suite", default=None, help="verify: formulas, phases, spectra, mixing, games or all.")
    parser.add_argument("--graph", default=None, help="spectra: gwp, gw, b, sn or random.")
    parser.add_argument("--name", default=None, help="game: z1, z_half or agreement.")
    parser.add_argument("--strategy", default=None, help="game: quantum, random, constant or deterministic.")
    parser.add_argument("--mode", default=None, help="game: exact or mc; spectra: closed-form.")
    parser.add_argument("--samples", type=_count, default=None, help="Monte Carlo samples.")
    parser.add_argument("--n-max", dest="n_max", type=int, default=None, help="verify: cap on object-level n.")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    setup_logging("pauli_lab")
    args = build_parser().parse_args(argv)
    defaults = load_defaults()
    cfg = RunConfig(
        command=args.command,
        n=args.n,
        k=args.k,
        seed=args.seed if args.seed is not None else defaults.seed,
        budget=args.budget if args.budget is not None else defaults.budget,
        format=args.format or defaults.format,
        out=args.out,
        suite=args.suite,
        graph=args.graph,
        name=args.name,
        strategy=args.strategy,
        mode=args.mode,
        samples=args.samples if args.samples is not None else defaults.samples,
        n_max=args.n_max,
    )
    logger.info(f"pauli_lab {cfg.command} (seed={cfg.seed}, budget={cfg.budget})")
    try:
        result = COMMANDS[cfg.command](cfg, defaults)
        emit(envelope(result.report, result.payload, cfg), cfg.format, None if result.to_stdout else cfg.out)
    except PauliLabError as e:
        logger.error(f"{cfg.command} failed: {e}")
        return 2
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
