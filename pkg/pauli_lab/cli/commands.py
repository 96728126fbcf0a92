# cli/commands.py
"""One function per subcommand; each turns a RunConfig into a report payload."""
import logging
import os
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from pydantic import BaseModel

from ..core.counting import count_level
from ..core.errors import ContractError
from ..core.fixtures import write_certificate, write_subspaces
from ..core.gf2 import enumerate_isotropic
from ..models.reports import CountReport, SolveReport
from ..models.run_config import RunConfig, RunDefaults

logger = logging.getLogger(__name__)

CERTIFICATE_DIR = "certificates"
GRAPHS = ("gwp", "gw", "b", "sn", "random")


@dataclass
class CommandResult:
    report: str
    payload: BaseModel
    exit_code: int = 0
    # enumerate writes its fixture to --out, so its report goes to stdout
    to_stdout: bool = False


def _need(cfg: RunConfig, *fields: str) -> None:
    missing = [f"--{f.replace('_', '-')}" for f in fields if getattr(cfg, f) is None]
    if missing:
        logger.error(f"{cfg.command}: missing {', '.join(missing)}")
        raise ContractError(f"{cfg.command} needs {', '.join(missing)}")


def _certificate_path(cfg: RunConfig, problem: str) -> str:
    folder = os.path.dirname(os.path.abspath(cfg.out)) if cfg.out else CERTIFICATE_DIR
    return os.path.join(folder, f"{problem}_n{cfg.n}.txt")


def _with_certificate(cfg: RunConfig, report: SolveReport) -> SolveReport:
    path = _certificate_path(cfg, report.problem)
    write_certificate(path, report.n, report.certificate)
    report.certificate_path = path
    return report


def cmd_count(cfg: RunConfig, defaults: RunDefaults) -> CommandResult:
    _need(cfg, "n", "k")
    enumerated: Optional[int] = len(enumerate_isotropic(cfg.n, cfg.k)) if cfg.n <= 4 else None
    return CommandResult("count", CountReport(n=cfg.n, k=cfg.k, closed_form=count_level(cfg.n, cfg.k), enumerated=enumerated))


def cmd_enumerate(cfg: RunConfig, defaults: RunDefaults) -> CommandResult:
    _need(cfg, "n", "k", "out")
    subspaces = enumerate_isotropic(cfg.n, cfg.k)
    write_subspaces(cfg.out, cfg.n, subspaces)
    report = CountReport(
        n=cfg.n, k=cfg.k, closed_form=count_level(cfg.n, cfg.k), enumerated=len(subspaces), fixture_path=cfg.out,
    )
    return CommandResult("count", report, to_stdout=True)


def cmd_spectra(cfg: RunConfig, defaults: RunDefaults) -> CommandResult:
    from ..core import graphs, spectra

    graph = cfg.graph or "gw"
    if graph not in GRAPHS:
        raise ContractError(f"unknown graph {graph!r}; choose from {GRAPHS}")
    if graph == "random":
        h = defaults.hitting
        return CommandResult("spectrum", spectra.spectrum(graphs.random_regular_graph(h.vertices, h.degree, cfg.seed)))
    _need(cfg, "n")
    n = cfg.n
    if cfg.mode == "closed-form":
        if graph not in ("gwp", "gw"):
            raise ContractError("closed forms are shipped for gwp and gw only")
        return CommandResult("spectrum", spectra.closed_form_report(graph, n))
    if graph == "gwp":
        report = spectra.spectrum(graphs.build_gw_prime(n), n)
        if n >= 3:
            report.notes.append(spectra.gw_prime_lambda_note(n))
    elif graph == "gw":
        report = spectra.spectrum(graphs.build_gw(n), n)
    elif graph == "sn":
        report = spectra.spectrum(graphs.build_sn(n), n)
    else:
        b = graphs.build_b_n2(n)
        report = spectra.bipartite_spectrum(b, n)
        if n in (3, 4):
            analysis = spectra.bbt_analysis(n, b)
            report.notes.append(
                f"ratio {analysis.spectral_ratio:.6f} = {analysis.ratio_constant:.4f} * 2^(-n/2); "
                f"Gram spectrum matches the predicted sums: {analysis.matches}"
            )
    return CommandResult("spectrum", report)


def cmd_pval(cfg: RunConfig, defaults: RunDefaults) -> CommandResult:
    from ..core.hv_solvers import pval_exact, pval_level2

    _need(cfg, "n")
    if cfg.k == 2:
        report = pval_level2(cfg.n, cfg.budget, cfg.seed)
    else:
        report = pval_exact(cfg.n, cfg.budget, cfg.seed)
    return CommandResult("solve", _with_certificate(cfg, report))


def cmd_cval(cfg: RunConfig, defaults: RunDefaults) -> CommandResult:
    from ..core.inconsistency import cval_exact

    _need(cfg, "n")
    return CommandResult("solve", _with_certificate(cfg, cval_exact(cfg.n, cfg.budget, cfg.seed)))


def cmd_game(cfg: RunConfig, defaults: RunDefaults) -> CommandResult:
    from ..core.games import game_by_name
    from ..core.strategies import Strategy, game_result

    name = cfg.name or "z1"
    if name != "z1":
        _need(cfg, "n")
    n = 2 if name == "z1" else cfg.n
    game = game_by_name(name, n, cfg.k or 1)
    strategy = Strategy.by_name(cfg.strategy or "quantum", n, cfg.seed)
    return CommandResult("game", game_result(game, strategy, cfg.mode or "exact", cfg.samples, cfg.seed))


def cmd_walks(cfg: RunConfig, defaults: RunDefaults) -> CommandResult:
    from ..core.walks import walk_pipeline

    return CommandResult("walks", walk_pipeline(cfg.n or 2, cfg.k or 2, cfg.seed, cfg.budget))


def cmd_verify(cfg: RunConfig, defaults: RunDefaults) -> CommandResult:
    from ..verify.suites import SuiteContext, run_suite

    ctx = SuiteContext(
        n_max=cfg.n_max if cfg.n_max is not None else 4,
        seed=cfg.seed,
        budget=cfg.budget,
        samples=cfg.samples,
        mixing_trials=defaults.mixing_trials,
        walks=defaults.walks,
        hitting=defaults.hitting,
    )
    report = run_suite(cfg.suite or "all", ctx)
    return CommandResult("verify", report, exit_code=0 if report.passed else 1)


COMMANDS: Dict[str, Callable[[RunConfig, RunDefaults], CommandResult]] = {
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "spectra": cmd_spectra,
    "pval": cmd_pval,
    "cval": cmd_cval,
    "game": cmd_game,
    "walks": cmd_walks,
    "verify": cmd_verify,
}
