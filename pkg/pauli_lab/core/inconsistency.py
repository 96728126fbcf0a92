# core/inconsistency.py
"""
Cval, the shared split search at n = 2, and contradiction-triangle accounting.

For a contextual assignment f and a direction w, Cval(f, w) = m_w (1 - m_w)
where m_w is the minority share of the values f(x)(w) over the maximal
measurements x above w. With T measurements above w and `ones` of them
reading 1 this is ones * (T - ones) / T^2, whichever side is the minority.
"""
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..models.reports import BoundChainReport, SolveReport
from .counting import count_level, degree_Gw, item4_ratio, question_count_Q, v_count_Gw
from .errors import ContractError
from .hv_solvers import ContextualAssignment
from .lattice import PauliLattice, get_lattice
from .spectra import half_graph_lambda

logger = logging.getLogger(__name__)


def _fiber_size(lattice: PauliLattice) -> int:
    return int(lattice.membership[:, 1].sum())


def ones_per_direction(f: ContextualAssignment) -> np.ndarray:
    """ones[w - 1]: how many maximal measurements above w read 1 at w."""
    values = f.value_table().astype(np.int64)
    return values[:, 1:].sum(axis=0)


def cval_per_w(f: ContextualAssignment) -> np.ndarray:
    """Cval(f, w) for w = 1 .. 4^n - 1."""
    total = _fiber_size(get_lattice(f.n))
    ones = ones_per_direction(f)
    return ones * (total - ones) / float(total * total)


def cval_of(f: ContextualAssignment) -> Fraction:
    """E_w Cval(f, w) as an exact fraction."""
    total = _fiber_size(get_lattice(f.n))
    ones = ones_per_direction(f)
    return Fraction(int((ones * (total - ones)).sum()), total * total * len(ones))


# ---------------------------------------------------------------------------
# Split search on L^2
# ---------------------------------------------------------------------------

class _BudgetExhausted(Exception):
    pass


@dataclass
class SplitResult:
    """Fewest non-unanimous directions over all contextual assignments of L^2."""
    best: int
    lower: int
    choices: Tuple[int, ...]
    nodes: int
    closed: bool
    wall_time: float

    @property
    def val_syn(self) -> Fraction:
        return 1 - Fraction(4 * self.best, 90)

    @property
    def val_syn_upper(self) -> Fraction:
        return 1 - Fraction(4 * self.lower, 90)

    @property
    def cval(self) -> Fraction:
        return Fraction(2, 9) * Fraction(self.best, 15)

    @property
    def cval_lower(self) -> Fraction:
        return Fraction(2, 9) * Fraction(self.lower, 15)


def split_count(choices) -> int:
    """Directions of L^2 whose three maximal measurements are not unanimous."""
    ones = ones_per_direction(ContextualAssignment(2, tuple(choices)))
    return int(((ones != 0) & (ones != 3)).sum())


class SplitSearch:
    def __init__(self):
        lattice = get_lattice(2)
        self.lattice = lattice
        size = len(lattice)
        codes = lattice.outcome_count
        self.members: List[np.ndarray] = []
        self.values: List[List[Tuple[int, ...]]] = []
        for i in range(size):
            ws = np.flatnonzero(lattice.membership[i])
            ws = ws[ws != 0]
            self.members.append(ws)
            self.values.append([tuple(int(v) for v in lattice.values(i, c)[ws]) for c in range(codes)])
        self.order = self._overlap_order()
        self.state = [-1] * lattice.size
        self.current = [0] * size
        self.best = size
        self.best_choices: Tuple[int, ...] = (0,) * size
        self.nodes = 0
        self.budget = 0

    def _overlap_order(self) -> List[int]:
        """Each next measurement shares as many directions as possible with those already placed."""
        placed = [0]
        seen = set(int(w) for w in self.members[0])
        rest = set(range(1, len(self.members)))
        while rest:
            nxt = max(sorted(rest), key=lambda i: sum(int(w) in seen for w in self.members[i]))
            placed.append(nxt)
            seen.update(int(w) for w in self.members[nxt])
            rest.discard(nxt)
        return placed

    def _descend(self, pos: int, broken: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted()
        if pos == len(self.order):
            self.best = broken
            self.best_choices = tuple(self.current)
            logger.debug(f"split search: {broken} split directions after {self.nodes} nodes")
            return
        i = self.order[pos]
        codes = (0,) if pos == 0 else range(self.lattice.outcome_count)
        ws = self.members[i]
        for code in codes:
            saved = [self.state[w] for w in ws]
            added = 0
            for w, v in zip(ws, self.values[i][code]):
                s = self.state[w]
                if s == -1:
                    self.state[w] = v
                elif s != 2 and s != v:
                    self.state[w] = 2
                    added += 1
            if broken + added < self.best:
                self.current[i] = code
                self._descend(pos + 1, broken + added)
            for w, s in zip(ws, saved):
                self.state[w] = s

    def solve(self, budget: int, start: Optional[Tuple[int, ...]] = None) -> SplitResult:
        t0 = time.perf_counter()
        self.budget = budget
        self.nodes = 0
        if start is not None:
            self.best = split_count(start)
            self.best_choices = tuple(start)
        closed = True
        try:
            self._descend(0, 0)
        except _BudgetExhausted:
            closed = False
            logger.warning(f"split search stopped at the node budget {budget}; best {self.best}")
        # no complete consistent assignment exists on L^2, so at least one direction splits
        lower = self.best if closed else 1
        return SplitResult(self.best, lower, self.best_choices, self.nodes, closed, time.perf_counter() - t0)


def split_search(budget: int, seed: int = 0xC0FFEE) -> SplitResult:
    """Exact minimum split count on L^2, warm-started from local search."""
    warm = local_search_cval(2, seed=seed, restarts=4)
    result = SplitSearch().solve(budget, start=warm.choices)
    logger.info(
        f"split search: k in [{result.lower}, {result.best}], {result.nodes} nodes, closed={result.closed}"
    )
    return result


# ---------------------------------------------------------------------------
# Local search for any n
# ---------------------------------------------------------------------------

@dataclass
class LocalSearchResult:
    n: int
    choices: Tuple[int, ...]
    objective: int
    cval: Fraction
    sweeps: int


def _code_values(lattice: PauliLattice) -> Tuple[np.ndarray, np.ndarray]:
    """members (N x (2^n - 1)) and values (N x codes x (2^n - 1)) at nonzero member vectors."""
    size = len(lattice)
    members = np.asarray([np.flatnonzero(lattice.membership[i])[1:] for i in range(size)], dtype=np.int64)
    values = np.zeros((size, lattice.outcome_count, members.shape[1]), dtype=np.int64)
    rows = np.arange(size)[:, None]
    for code in range(lattice.outcome_count):
        table = lattice.value_table([code] * size)
        values[:, code, :] = table[rows, members]
    return members, values


def local_search_cval(n: int, seed: int = 0xC0FFEE, restarts: int = 2, max_sweeps: int = 50) -> LocalSearchResult:
    """Coordinate descent on sum_w ones_w (T - ones_w); an upper bound on the minimum Cval."""
    lattice = get_lattice(n)
    members, values = _code_values(lattice)
    total = _fiber_size(lattice)
    rng = np.random.default_rng(seed)
    size = len(lattice)
    best: Optional[LocalSearchResult] = None
    for _ in range(restarts):
        choices = rng.integers(0, lattice.outcome_count, size=size)
        ones = np.zeros(lattice.size, dtype=np.int64)
        np.add.at(ones, members.ravel(), values[np.arange(size), choices].ravel())
        sweeps = 0
        improved = True
        while improved and sweeps < max_sweeps:
            improved = False
            sweeps += 1
            for i in rng.permutation(size):
                ws = members[i]
                base = ones[ws] - values[i, choices[i]]
                trial = base[None, :] + values[i]
                scores = (trial * (total - trial)).sum(axis=1)
                code = int(np.argmin(scores))
                if scores[code] < scores[choices[i]]:
                    choices[i] = code
                    ones[ws] = trial[code]
                    improved = True
        objective = int((ones * (total - ones)).sum())
        if best is None or objective < best.objective:
            cval = Fraction(objective, total * total * (lattice.size - 1))
            best = LocalSearchResult(n, tuple(int(c) for c in choices), objective, cval, sweeps)
    logger.info(f"local search Cval(L^{n}) <= {float(best.cval):.6f}")
    return best


def cval_exact(n: int, budget: int, seed: int = 0xC0FFEE) -> SolveReport:
    """Cval(L^n): exact at n = 1, 2; a local-search upper bound for 3 <= n <= 4."""
    if not 1 <= n <= 4:
        raise ContractError(f"cval runs for 1 <= n <= 4, got {n}")
    from .fixtures import format_outcome

    start = time.perf_counter()
    if n == 1:
        f = ContextualAssignment.constant(1)
        return SolveReport(
            problem="cval", n=1, optimum=0.0, optimum_exact="0/1", lower=0.0, upper=0.0,
            certificate=[format_outcome(o) for o in f.as_outcomes()], proof_closed=True,
            wall_time=time.perf_counter() - start,
            details={"note": "one maximal measurement above each direction"},
        )
    if n == 2:
        result = split_search(budget, seed)
        f = ContextualAssignment(2, result.choices)
        if cval_of(f) != result.cval:
            raise ContractError("split search certificate disagrees with its own Cval")
        upper, lower = result.cval, result.cval_lower
        return SolveReport(
            problem="cval",
            n=2,
            optimum=float(upper) if result.closed else None,
            optimum_exact=f"{upper.numerator}/{upper.denominator}" if result.closed else None,
            lower=float(lower),
            upper=float(upper),
            certificate=[format_outcome(o) for o in f.as_outcomes()],
            nodes=result.nodes,
            wall_time=time.perf_counter() - start,
            proof_closed=result.closed,
            details={
                "split_directions": result.best,
                "split_lower": result.lower,
                "per_w_values": sorted({str(Fraction(x).limit_denominator(81)) for x in cval_per_w(f)}),
                "constant_baseline": str(cval_of(ContextualAssignment.constant(2))),
            },
        )
    found = local_search_cval(n, seed)
    f = ContextualAssignment(n, found.choices)
    return SolveReport(
        problem="cval",
        n=n,
        lower=0.0,
        upper=float(found.cval),
        certificate=[format_outcome(o) for o in f.as_outcomes()],
        wall_time=time.perf_counter() - start,
        proof_closed=False,
        details={
            "upper_exact": f"{found.cval.numerator}/{found.cval.denominator}",
            "constant_baseline": str(cval_of(ContextualAssignment.constant(n))),
            "sweeps": found.sweeps,
        },
    )


# ---------------------------------------------------------------------------
# Contradiction triangles
# ---------------------------------------------------------------------------

@dataclass
class TriangleCount:
    n: int
    total: int
    per_w: np.ndarray
    inconsistent_pairs: int
    questions: int
    aggregate_bound: float
    per_w_bounds: np.ndarray
    cval_per_w: Optional[np.ndarray] = field(repr=False, default=None)

    @property
    def own_loss(self) -> Fraction:
        return Fraction(self.inconsistent_pairs, self.questions)

    @property
    def double_count_agrees(self) -> bool:
        return self.total == (1 << (self.n // 2 - 1)) * self.inconsistent_pairs

    @property
    def aggregate_holds(self) -> bool:
        return self.total + 1e-9 >= self.aggregate_bound

    @property
    def per_w_violations(self) -> int:
        return int((self.per_w > self.per_w_bounds + 1e-9).sum())


def per_w_triangle_bound(n: int, c: np.ndarray) -> np.ndarray:
    """2 |V(G_w)| (Δ c + λ sqrt(c)) for per-direction values c."""
    vertices, degree, lam = v_count_Gw(n), degree_Gw(n), half_graph_lambda(n)
    return 2 * vertices * (degree * c + lam * np.sqrt(c))


def contradiction_triangles(f: ContextualAssignment) -> TriangleCount:
    """Directions w with two distance-n/2 maximal measurements whose outcomes disagree at w."""
    n = f.n
    if n % 2 or n > 4:
        logger.error(f"contradiction triangles requested at n={n}")
        raise ContractError(f"contradiction triangles need n in (2, 4), got {n}")
    half = n // 2
    lattice = get_lattice(n)
    values = f.value_table()
    at_half = lattice.distances == half
    per_w = np.zeros(lattice.size - 1, dtype=np.int64)
    for w in range(1, lattice.size):
        idx = lattice.fiber(w)
        vals = values[idx, w]
        pairs = at_half[np.ix_(idx, idx)] & (vals[:, None] != vals[None, :])
        per_w[w - 1] = int(pairs.sum())
    inconsistent = int((lattice.inconsistent_pairs(f.choices) & at_half).sum())
    questions = question_count_Q(n)
    own_loss = Fraction(inconsistent, questions)
    c = cval_per_w(f)
    count = TriangleCount(
        n=n,
        total=int(per_w.sum()),
        per_w=per_w,
        inconsistent_pairs=inconsistent,
        questions=questions,
        aggregate_bound=float(own_loss * questions * (1 << (half - 1))),
        per_w_bounds=per_w_triangle_bound(n, c),
        cval_per_w=c,
    )
    if not count.double_count_agrees:
        logger.warning(f"triangle double count differs at n={n}: {count.total} vs {inconsistent} pairs")
    return count


def triangle_histogram(count: TriangleCount) -> Dict[int, int]:
    values, freq = np.unique(count.per_w, return_counts=True)
    return {int(v): int(k) for v, k in zip(values, freq)}


# ---------------------------------------------------------------------------
# Lower-bound chain for Cval
# ---------------------------------------------------------------------------

def _chain_terms(n: int, val_syn: float) -> Dict[str, float]:
    if n % 2 or not 2 <= n <= 4:
        raise ContractError(f"the Cval chain runs at n in (2, 4), got {n}")
    q, maximal = question_count_Q(n), count_level(n, n)
    degree, lam = degree_Gw(n), half_graph_lambda(n)
    lemma = (1 - val_syn) * q * 2 ** (n / 2 - 1) / (2 * maximal * ((1 << n) - 1) * degree) - lam / (2 * degree)
    prop = (1 - val_syn) / 4 - lam / (2 * degree)
    return {
        "Q": float(q),
        "maximal_count": float(maximal),
        "gw_vertices": float(v_count_Gw(n)),
        "gw_degree": float(degree),
        "gw_lambda": float(lam),
        "item4_ratio": float(item4_ratio(n)),
        "item4_floor": float(2 ** (n / 2)),
        "val_syn": float(val_syn),
        "lemma_value": lemma,
        "prop_value": prop,
        "quarter_gap": 0.25 - prop,
    }


def cval_lower_chain(n: int, val_syn: float, cval: float, val_syn_is_upper_bound: bool = False) -> BoundChainReport:
    """
    Evaluate Cval >= (1 - Val_syn) Q 2^{n/2-1} / (2 |L^n_n| (2^n - 1) Δ) - λ / (2Δ)
    and the coarser (1 - Val_syn) / 4 - λ / (2Δ), against a Cval value.
    `val_syn` must be exact or an upper bound for the chain to be a lower bound.
    """
    terms = _chain_terms(n, val_syn)
    terms["cval"] = float(cval)
    notes: List[str] = []
    item4 = terms["item4_ratio"] >= terms["item4_floor"]
    holds = cval + 1e-12 >= max(terms["lemma_value"], terms["prop_value"]) and item4
    if max(terms["lemma_value"], terms["prop_value"]) <= 0:
        notes.append("chain value is non-positive: the bound is vacuous at this n")
    if val_syn_is_upper_bound:
        notes.append("Val_syn enters as an upper bound, not an exact value")
    logger.info(f"Cval chain n={n}: lemma {terms['lemma_value']:.4f}, prop {terms['prop_value']:.4f}, cval {cval:.4f}")
    return BoundChainReport(name="cval_chain", n=n, terms=terms, holds=holds, notes=notes)


def assignment_chain(f: ContextualAssignment) -> BoundChainReport:
    """The chain instantiated with f's own synchronous loss and f's own Cval."""
    count = contradiction_triangles(f)
    own_val = 1 - float(count.own_loss)
    report = cval_lower_chain(f.n, own_val, float(cval_of(f)))
    report.name = "cval_chain_assignment"
    report.terms["triangles"] = float(count.total)
    report.terms["per_w_violations"] = float(count.per_w_violations)
    report.holds = report.holds and count.per_w_violations == 0 and count.aggregate_holds
    return report


def chain_trend(reports: List[BoundChainReport]) -> List[Tuple[int, float]]:
    """(n, 1/4 - chain value) pairs, for the decay display across n."""
    return [(r.n, r.terms["quarter_gap"]) for r in sorted(reports, key=lambda r: r.n)]


__all__ = [
    "LocalSearchResult",
    "SplitResult",
    "SplitSearch",
    "TriangleCount",
    "assignment_chain",
    "chain_trend",
    "contradiction_triangles",
    "cval_exact",
    "cval_lower_chain",
    "cval_of",
    "cval_per_w",
    "local_search_cval",
    "ones_per_direction",
    "per_w_triangle_bound",
    "split_count",
    "split_search",
    "triangle_histogram",
]
