# core/hv_solvers.py
"""
Hidden-variable assignments and the Pval solvers.

Pval is solved as a maximum independent set on the stabilizer orthogonality
graph S_n: an independent set picks at most one outcome per measurement and
only pairwise consistent outcomes, which is a partial assignment.
"""
import logging
import math
import time
from itertools import combinations
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..models.reports import SolveReport
from .counting import count_level
from .errors import CertificateError, ContractError
from .gf2 import Subspace, perp, rref, sp_bits
from .graphs import (
    LabeledGraph,
    build_sn,
    clique_cover_by_measurement,
    is_clique_cover,
    outcome_graph,
    outcome_inconsistency,
)
from .lattice import Measurement, Outcome, consistent, get_lattice
from .mis import BranchAndBoundMIS, greedy_independent_set, is_independent, max_independent_set
from .spectra import bbt_analysis

logger = logging.getLogger(__name__)


class PartialAssignment:
    """Measurement -> Outcome on a subset of maximal measurements, pairwise consistent."""

    def __init__(self, n: int, entries: Optional[Mapping[Measurement, Outcome]] = None):
        self.n = n
        self.entries: Dict[Measurement, Outcome] = {}
        for m, o in (entries or {}).items():
            self.insert(m, o)

    def insert(self, m: Measurement, o: Outcome) -> None:
        if o.base != m:
            raise ContractError(f"outcome belongs to {o.base}, not {m}")
        if m.n != self.n or not m.is_maximal():
            raise ContractError("partial assignments live on maximal measurements of L^n")
        for other in self.entries.values():
            if not consistent(other, o):
                logger.error(f"Inconsistent insert at {m}")
                raise ContractError(f"outcome on {m} is inconsistent with the one on {other.base}")
        self.entries[m] = o

    def __len__(self) -> int:
        return len(self.entries)

    def pval(self) -> Fraction:
        return Fraction(len(self.entries), count_level(self.n, self.n))

    def outcomes(self) -> List[Outcome]:
        return [self.entries[m] for m in sorted(self.entries, key=lambda m: m.rows)]


@dataclass(frozen=True)
class ContextualAssignment:
    """A total assignment: one outcome code per maximal measurement, in lattice order."""
    n: int
    choices: Tuple[int, ...]

    def __post_init__(self):
        lattice = get_lattice(self.n)
        if len(self.choices) != len(lattice):
            raise ContractError(f"need {len(lattice)} choices at n={self.n}, got {len(self.choices)}")
        if any(not 0 <= c < lattice.outcome_count for c in self.choices):
            raise ContractError("outcome code out of range")

    @classmethod
    def constant(cls, n: int, code: int = 0) -> "ContextualAssignment":
        return cls(n, (code,) * len(get_lattice(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "ContextualAssignment":
        lattice = get_lattice(n)
        return cls(n, tuple(int(c) for c in rng.integers(0, lattice.outcome_count, size=len(lattice))))

    @classmethod
    def from_outcomes(cls, n: int, mapping: Mapping[Measurement, Outcome]) -> "ContextualAssignment":
        lattice = get_lattice(n)
        choices = [0] * len(lattice)
        for m, o in mapping.items():
            choices[lattice.index_of(m)] = o.code
        if len(mapping) != len(lattice):
            raise ContractError("contextual assignments are total")
        return cls(n, tuple(choices))

    def outcome(self, m: Measurement) -> Outcome:
        lattice = get_lattice(self.n)
        return lattice.outcome(lattice.index_of(m), self.choices[lattice.index_of(m)])

    def value_table(self) -> np.ndarray:
        return get_lattice(self.n).value_table(self.choices)

    def as_outcomes(self) -> List[Outcome]:
        lattice = get_lattice(self.n)
        return [lattice.outcome(i, c) for i, c in enumerate(self.choices)]


# ---------------------------------------------------------------------------
# Pval
# ---------------------------------------------------------------------------

def validate_partial_certificate(n: int, certificate: Sequence[Outcome]) -> PartialAssignment:
    """Rebuild a PartialAssignment from outcomes; raises CertificateError on any conflict."""
    if len({o.base for o in certificate}) != len(certificate):
        raise CertificateError("certificate names a measurement twice")
    try:
        return PartialAssignment(n, {o.base: o for o in certificate})
    except ContractError as exc:
        raise CertificateError(f"certificate does not re-validate: {exc}") from exc


def _solve_sn(graph: LabeledGraph, n: int, budget: int, seed: int) -> Tuple[List[int], int, int, int, bool, float]:
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    warm = greedy_independent_set(graph.adjacency, rng, restarts=5)
    result = max_independent_set(graph.adjacency, budget, seed_set=warm)
    if not is_independent(graph.adjacency, result.best):
        raise CertificateError("independent set certificate failed the edge scan")
    return result.best, result.lower, result.upper, result.nodes, result.closed, time.perf_counter() - start


def pval_exact(n: int, budget: int, seed: int = 0xC0FFEE) -> SolveReport:
    """α(S_n) with certificate; Pval = α / |L^n_n|."""
    graph = build_sn(n)
    total = count_level(n, n)
    best, lower, upper, nodes, closed, elapsed = _solve_sn(graph, n, budget, seed)
    certificate = [graph.vertices[i] for i in best]
    validate_partial_certificate(n, certificate)
    from .fixtures import format_outcome

    report = SolveReport(
        problem="pval",
        n=n,
        optimum=lower / total if closed else None,
        optimum_exact=f"{lower}/{total}" if closed else None,
        lower=lower / total,
        upper=upper / total,
        certificate=[format_outcome(o) for o in certificate],
        nodes=nodes,
        wall_time=elapsed,
        proof_closed=closed,
        details={"alpha_lower": lower, "alpha_upper": upper, "maximal_count": total},
    )
    logger.info(f"Pval(L^{n}) in [{report.lower:.4f}, {report.upper:.4f}], closed={closed}")
    return report


@dataclass(frozen=True)
class FailedDomain:
    """Candidate domain (maximal measurement indices) and a sub-collection with no consistent total assignment."""
    measurements: Tuple[int, ...]
    contradiction: Tuple[int, ...]
    alpha: int


@dataclass
class CompletenessProof:
    n: int
    base_n: int
    alpha: int
    maximal_count: int
    closed: bool
    nodes: int
    complete_consistent_exists: bool
    note: str
    domain_size: int = 0
    failed_domains: List[FailedDomain] = field(default_factory=list)


def _assignable(adjacency: np.ndarray, count: int, contexts: Sequence[int], budget: int) -> int:
    """How many of the given measurements one consistent partial assignment can cover."""
    idx = [i * count + c for i in contexts for c in range(count)]
    result = BranchAndBoundMIS(adjacency[np.ix_(idx, idx)]).solve(budget)
    if not result.closed:
        raise CertificateError(f"search over {len(contexts)} measurements did not close within {budget} nodes")
    return result.lower


def _contradiction_core(adjacency: np.ndarray, count: int, domain: Sequence[int],
                        budget: int) -> Tuple[Tuple[int, ...], int]:
    # Deletion filter: every measurement left in the core is needed for the contradiction.
    core = list(domain)
    for m in domain:
        trial = [c for c in core if c != m]
        if _assignable(adjacency, count, trial, budget) < len(trial):
            core = trial
    return tuple(core), _assignable(adjacency, count, core, budget)


def failed_domains(n: int, size: int, budget: int = 10_000_000) -> List[FailedDomain]:
    """
    Every set of `size` maximal measurements of L^n, each paired with a minimal
    sub-collection on which no consistent total assignment exists. Raises
    CertificateError if some candidate domain can be assigned after all.
    """
    lattice = get_lattice(n)
    adjacency = outcome_inconsistency(lattice)
    count = lattice.outcome_count
    cores: List[Tuple[Tuple[int, ...], int]] = []
    failed: List[FailedDomain] = []
    for domain in combinations(range(len(lattice)), size):
        members = set(domain)
        known = next((core for core in cores if members.issuperset(core[0])), None)
        if known is None:
            if _assignable(adjacency, count, domain, budget) == size:
                logger.error(f"Candidate domain {domain} admits a consistent total assignment")
                raise CertificateError(f"measurements {domain} admit a consistent total assignment")
            known = _contradiction_core(adjacency, count, domain, budget)
            cores.append(known)
        failed.append(FailedDomain(domain, known[0], known[1]))
    logger.info(f"{len(failed)} candidate domains of size {size} on L^{n} fail, through {len(cores)} distinct contradictions")
    return failed


def no_complete_consistent(n: int, budget: int = 10_000_000) -> CompletenessProof:
    """
    Machine check that no assignment is both complete and consistent for n >= 2.
    The n = 2 instance is solved exactly, and every domain one measurement larger
    than the optimum is shown to fail with an explicit contradiction; larger n
    inherit it by restricting to a copy of L^2 inside L^n.
    """
    if n < 1:
        raise ContractError(f"n must be >= 1, got {n}")
    base = 1 if n == 1 else 2
    report = pval_exact(base, budget)
    alpha = report.details["alpha_upper"]
    total = report.details["maximal_count"]
    exists = alpha == total
    if n == 1:
        note = "L^1 has only trivial meets; the all-zero assignment is complete and consistent"
    else:
        note = (
            f"α(S_2) = {alpha} < {total} with the search closed, so no complete consistent assignment exists on L^2; "
            "restricting a complete consistent assignment of L^n to measurements extending a fixed maximal "
            "measurement on the last n-2 qubits would give one on L^2"
        )
    proof = CompletenessProof(n, base, alpha, total, report.proof_closed, report.nodes, exists, note)
    if report.proof_closed and not exists:
        proof.domain_size = alpha + 1
        proof.failed_domains = failed_domains(base, alpha + 1, budget)
    return proof


# ---------------------------------------------------------------------------
# The level-2 scenario and square subspaces
# ---------------------------------------------------------------------------

def hyperbolic_planes(n: int) -> List[Tuple[int, ...]]:
    size = 1 << (2 * n)
    planes = set()
    for a in range(1, size):
        for b in range(a + 1, size):
            if sp_bits(a, b, n):
                planes.add(rref((a, b)))
    return sorted(planes)


def square_subspaces(n: int) -> List[Subspace]:
    """Non-degenerate subspaces of dimension 2(n-1): perpendiculars of hyperbolic planes."""
    if n < 2:
        raise ContractError(f"square subspaces need n >= 2, got {n}")
    return [perp(Subspace(n, rows)) for rows in hyperbolic_planes(n)]


@dataclass
class SquareAveraging:
    n: int
    square_count: int
    planes_per_square: int
    containment: List[int]
    uniform: bool
    local_alpha: int
    upper_bound: Fraction


def square_averaging(n: int, local_alpha: Optional[int] = None, budget: int = 1_000_000) -> SquareAveraging:
    """Bound Pval of the level-2 scenario by averaging the L^2 optimum over square subspaces."""
    if n < 3:
        raise ContractError(f"square averaging needs n >= 3, got {n}")
    lattice = get_lattice(n)
    planes = lattice.level(2)
    squares = square_subspaces(n)
    containment = [0] * len(planes)
    inside_first: List[Measurement] = []
    for s_idx, square in enumerate(squares):
        for p_idx, plane in enumerate(planes):
            if plane.subspace.is_subspace_of(square):
                containment[p_idx] += 1
                if s_idx == 0:
                    inside_first.append(plane)
    if local_alpha is None:
        local = max_independent_set(outcome_graph(inside_first, "square").adjacency, budget)
        if not local.closed:
            raise CertificateError("local L^2 optimum inside a square did not close")
        local_alpha = local.lower
    uniform = len(set(containment)) == 1
    # each plane of the domain is counted once per square containing it
    bound = Fraction(len(squares) * local_alpha, containment[0] * len(planes)) if uniform else Fraction(1)
    return SquareAveraging(n, len(squares), len(inside_first), containment, uniform, local_alpha, min(bound, Fraction(1)))


def pval_level2(n: int, budget: int, seed: int = 0xC0FFEE) -> SolveReport:
    """Pval of the scenario whose maximal measurements are L^n_2."""
    if n not in (2, 3):
        raise ContractError(f"pval_level2 runs at n in (2, 3), got {n}")
    if n == 2:
        report = pval_exact(2, budget, seed)
        report.problem = "pval_level2"
        return report
    start = time.perf_counter()
    planes = get_lattice(n).level(2)
    graph = outcome_graph(planes, "level2")
    rng = np.random.default_rng(seed)
    found = greedy_independent_set(graph.adjacency, rng, restarts=3)
    if not is_independent(graph.adjacency, found):
        raise CertificateError("level-2 certificate failed the edge scan")
    averaging = square_averaging(n)
    from .fixtures import format_outcome

    lower = Fraction(len(found), len(planes))
    upper = averaging.upper_bound
    return SolveReport(
        problem="pval_level2",
        n=n,
        lower=float(lower),
        upper=float(upper),
        certificate=[format_outcome(graph.vertices[i]) for i in found],
        wall_time=time.perf_counter() - start,
        proof_closed=lower == upper,
        details={
            "squares": averaging.square_count,
            "planes_per_square": averaging.planes_per_square,
            "containment": averaging.containment[0],
            "containment_uniform": averaging.uniform,
            "upper_exact": f"{upper.numerator}/{upper.denominator}",
            "lower_exact": f"{lower.numerator}/{lower.denominator}",
        },
    )


def pval_spectral_bound(n: int) -> float:
    """4 (λ / Δ(B_{n,2}))^2 from the measured B_{n,2} spectrum."""
    analysis = bbt_analysis(n)
    value = 4 * analysis.lambda_sq / analysis.delta_sq
    logger.info(f"Pval spectral bound at n={n}: {value:.4f}")
    return value


# ---------------------------------------------------------------------------
# θ(S_n)
# ---------------------------------------------------------------------------

@dataclass
class ThetaCertificate:
    n: int
    theta: int
    cover_size: int
    cover_valid: bool
    representation_sums: List[float] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((abs(s - self.theta) for s in self.representation_sums), default=0.0)


def theta_sn(n: int, samples: int = 100, seed: int = 0xC0FFEE) -> ThetaCertificate:
    """θ(S_n) = |L^n_n|: a clique cover from above and the stabilizer representation from below."""
    graph = build_sn(n)
    cover = clique_cover_by_measurement(graph)
    valid = is_clique_cover(graph, cover)
    theta = count_level(n, n)
    sums: List[float] = []
    if n <= 2:
        from .matrix_sim import outcome_state, random_state, representation_sum

        states = [outcome_state(o) for o in graph.vertices]
        rng = np.random.default_rng(seed)
        sums = [representation_sum(states, random_state(n, rng)) for _ in range(samples)]
    cert = ThetaCertificate(n, theta, len(cover), valid, sums)
    if not valid or len(cover) != theta or cert.max_deviation > 1e-9:
        logger.error(f"θ(S_{n}) certificate failed: cover {len(cover)}, deviation {cert.max_deviation:.2e}")
        raise CertificateError(f"θ(S_{n}) certificate does not close")
    return cert


@dataclass
class AlphaThetaRatio:
    n: int
    alpha_lower: int
    alpha_upper: int
    theta: int

    @property
    def ratio_interval(self) -> Tuple[float, float]:
        return self.alpha_lower / self.theta, self.alpha_upper / self.theta

    @property
    def measured_exponent(self) -> float:
        """-log2(α/θ) / n at the upper end."""
        return -math.log2(self.alpha_upper / self.theta) / self.n


def stabilizer_alpha_theta(n: int, budget: int) -> AlphaThetaRatio:
    report = pval_exact(n, budget)
    theta = theta_sn(n, samples=10).theta
    return AlphaThetaRatio(n, report.details["alpha_lower"], report.details["alpha_upper"], theta)


__all__ = [
    "AlphaThetaRatio",
    "CompletenessProof",
    "ContextualAssignment",
    "FailedDomain",
    "PartialAssignment",
    "SquareAveraging",
    "ThetaCertificate",
    "hyperbolic_planes",
    "failed_domains",
    "no_complete_consistent",
    "pval_exact",
    "pval_level2",
    "pval_spectral_bound",
    "square_averaging",
    "square_subspaces",
    "stabilizer_alpha_theta",
    "theta_sn",
    "validate_partial_certificate",
]
