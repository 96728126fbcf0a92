# core/spectra.py
"""
Spectra of the lattice graphs, dual polar eigenvalue recurrences, the B_{n,2}
Gram analysis, big-integer bound arithmetic, and the mixing lemmas.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..models.reports import BoundChainReport, SpectrumReport
from .counting import (
    delta_sq_exact,
    delta_sq_floor,
    distance_class_size,
    lambda_sq_bound,
    lambda_sq_upper_sum,
    q_binomial,
    sandwich_holds,
    summation_exponent,
    summation_lemma_holds,
)
from .errors import CapacityError, CertificateError, ContractError, UnsupportedCaseError
from .graphs import BipartiteGraph, LabeledGraph, build_b_n2

logger = logging.getLogger(__name__)

MAX_SPECTRUM_VERTICES = 10_000
SNAP_TOLERANCE = 1e-6


def snap_integers(values: np.ndarray, tol: float = SNAP_TOLERANCE) -> Tuple[np.ndarray, bool]:
    rounded = np.rint(values)
    close = np.abs(values - rounded) <= tol
    return np.where(close, rounded, values), bool(close.all())


def distinct_values(values: Sequence[float], tol: float = SNAP_TOLERANCE) -> List[float]:
    """Distinct values, sorted descending, merged within tol."""
    out: List[float] = []
    for v in sorted(values, reverse=True):
        if not out or abs(out[-1] - v) > tol:
            out.append(float(v))
    return out


def spectral_parameter(values: Sequence[float]) -> float:
    """Second largest element of {|l| : l in Spec}; the largest when there is only one."""
    magnitudes = distinct_values([abs(v) for v in values])
    if not magnitudes:
        return 0.0
    return magnitudes[1] if len(magnitudes) > 1 else magnitudes[0]


def _report(tag: str, n: Optional[int], values: np.ndarray, vertex_count: int, method: str = "numeric",
            residual: float = 0.0, notes: Optional[List[str]] = None) -> SpectrumReport:
    snapped, integral = snap_integers(np.asarray(values, dtype=float))
    ordered = sorted((float(v) for v in snapped), reverse=True)
    top = ordered[0] if ordered else 0.0
    lam = spectral_parameter(ordered)
    return SpectrumReport(
        graph=tag,
        n=n,
        vertex_count=vertex_count,
        eigenvalues=ordered,
        max_eigenvalue=top,
        spectral_parameter=lam,
        spectral_ratio=lam / top if top else 0.0,
        method=method,
        residual=residual,
        integral=integral,
        notes=notes or [],
    )


def spectrum(graph: LabeledGraph, n: Optional[int] = None) -> SpectrumReport:
    """Adjacency spectrum via a dense symmetric eigensolver, snapped to integers within 1e-6."""
    size = len(graph)
    if size > MAX_SPECTRUM_VERTICES:
        logger.error(f"Spectrum requested for {size} vertices")
        raise CapacityError(f"spectrum is capped at {MAX_SPECTRUM_VERTICES} vertices, got {size}")
    a = graph.adjacency.astype(float)
    values, vectors = linalg.eigh(a)
    residual = float(np.linalg.norm(a @ vectors - vectors * values, axis=0).max()) if size else 0.0
    scale = max(1.0, float(np.abs(values).max())) if size else 1.0
    if residual > 1e-8 * scale:
        logger.warning(f"{graph.name}: eigen residual {residual:.2e} above tolerance")
    logger.debug(f"{graph.name}: spectrum computed, residual {residual:.2e}")
    return _report(graph.name, n, values, size, residual=residual)


# ---------------------------------------------------------------------------
# Dual polar graphs C_m(2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionArray:
    m: int
    b: Tuple[int, ...]
    c: Tuple[int, ...]
    a: Tuple[int, ...]


def intersection_array(m: int) -> IntersectionArray:
    if m < 1:
        raise ContractError(f"dual polar rank must be >= 1, got {m}")
    b = tuple((1 << (i + 1)) * ((1 << (m - i)) - 1) for i in range(m + 1))
    c = tuple((1 << i) - 1 for i in range(m + 1))
    a = tuple(b[0] - b[i] - c[i] for i in range(m + 1))
    return IntersectionArray(m, b, c, a)


def distance_one_eigenvalue(m: int, h: int) -> int:
    """θ_h = 2[m-h] - [h] with [j] = 2^j - 1."""
    return 2 * ((1 << (m - h)) - 1) - ((1 << h) - 1)


def shipped_indices(m: int) -> Tuple[int, ...]:
    return tuple(sorted({0, 1, m // 2, (m + 1) // 2} & set(range(m + 1))))


def dual_polar_eigenvalues(m: int, i: int) -> List[int]:
    """P_{h,i} of C_m(2) for h = 0..m, by the three-term recurrence."""
    if not 0 <= i <= m:
        raise ContractError(f"need 0 <= i <= m, got i={i}, m={m}")
    if i not in shipped_indices(m):
        logger.error(f"P_(h,{i}) of C_{m}(2) is not shipped")
        raise UnsupportedCaseError(f"only i in {shipped_indices(m)} are shipped for m={m}, got i={i}")
    arr = intersection_array(m)
    column = []
    for h in range(m + 1):
        theta = distance_one_eigenvalue(m, h)
        prev, cur = Fraction(0), Fraction(1)
        for j in range(i):
            back = arr.b[j - 1] * prev if j > 0 else 0
            prev, cur = cur, ((theta - arr.a[j]) * cur - back) / arr.c[j + 1]
        if cur.denominator != 1:
            raise CertificateError(f"recurrence produced a non-integer P_({h},{i}) = {cur}")
        column.append(int(cur))
    if column[0] != distance_class_size(m, i):
        raise CertificateError(f"P_(0,{i}) = {column[0]} disagrees with the valency {distance_class_size(m, i)}")
    return column


def gw_prime_closed_form(n: int) -> List[int]:
    """Distinct eigenvalues of G'_w ≅ C^1_{n-1}(2): {2[n-1-k] - [k]}."""
    return sorted(set(dual_polar_eigenvalues(n - 1, 1)), reverse=True)


def gw_closed_form(n: int) -> List[int]:
    """Distinct eigenvalues of G_w ≅ C^{n/2}_{n-1}(2)."""
    if n % 2:
        raise ContractError(f"G_w needs an even n, got {n}")
    return sorted(set(dual_polar_eigenvalues(n - 1, n // 2)), reverse=True)


def half_graph_lambda(n: int) -> int:
    """|(-1)^{n/2} {n-1 choose n/2}_2 2^{C(n/2, 2)}|, with the q-binomial reading."""
    half = n // 2
    return q_binomial(n - 1, half) * (1 << math.comb(half, 2))


def gw_prime_lambda_note(n: int) -> str:
    m = n - 1
    k1 = abs(distance_one_eigenvalue(m, 1))
    km = abs(distance_one_eigenvalue(m, m))
    return (
        f"largest non-principal |eigenvalue| of C^1_{m}(2) is the k=m term {km}, "
        f"not the k=1 term {k1}; spectral ratio {km}/{distance_one_eigenvalue(m, 0)}"
    )


def closed_form_report(tag: str, n: int) -> SpectrumReport:
    values = gw_prime_closed_form(n) if tag == "gwp" else gw_closed_form(n)
    notes = [gw_prime_lambda_note(n)] if tag == "gwp" and n >= 3 else []
    return _report(tag, n, np.asarray(values, dtype=float), 0, method="closed-form", notes=notes)


# ---------------------------------------------------------------------------
# B_{n,2}
# ---------------------------------------------------------------------------

@dataclass
class GramAnalysis:
    n: int
    eigenvalues: List[float]
    predicted: List[int]
    delta_sq: float
    lambda_sq: float
    delta_sq_formula: int
    left_degree: int
    right_degree: int
    biregular: bool
    matches: bool
    notes: List[str] = field(default_factory=list)

    @property
    def spectral_ratio(self) -> float:
        return math.sqrt(self.lambda_sq / self.delta_sq)

    @property
    def ratio_constant(self) -> float:
        """C with ratio = C * 2^{-n/2}."""
        return self.spectral_ratio * 2 ** (self.n / 2)


def gram_eigenvalues(b: BipartiteGraph) -> np.ndarray:
    """Eigenvalues of the Gram matrix on the smaller side."""
    m = b.biadjacency.astype(float)
    gram = m @ m.T if m.shape[0] <= m.shape[1] else m.T @ m
    return linalg.eigvalsh(gram)


def bbt_predicted(n: int) -> List[int]:
    """sum_i {n-i choose 2}_2 P_{h,i} of C_n(2) for h = 0..n."""
    columns = {i: dual_polar_eigenvalues(n, i) for i in range(n - 1)}
    return [sum(q_binomial(n - i, 2) * columns[i][h] for i in range(n - 1)) for h in range(n + 1)]


def bbt_analysis(n: int, graph: Optional[BipartiteGraph] = None) -> GramAnalysis:
    if n not in (3, 4):
        raise CapacityError(f"numeric B_(n,2) analysis runs at n in (3, 4), got {n}")
    b = graph if graph is not None else build_b_n2(n)
    values, _ = snap_integers(gram_eigenvalues(b))
    numeric = distinct_values(values)
    predicted = bbt_predicted(n)
    expected = distinct_values([float(p) for p in predicted])
    matches = len(numeric) == len(expected) and all(
        abs(x - y) <= 1e-6 * max(1.0, abs(y)) for x, y in zip(numeric, expected)
    )
    if not matches:
        logger.warning(f"B_({n},2) Gram spectrum {numeric} differs from prediction {expected}")
    return GramAnalysis(
        n=n,
        eigenvalues=numeric,
        predicted=predicted,
        delta_sq=numeric[0],
        lambda_sq=numeric[1],
        delta_sq_formula=delta_sq_exact(n),
        left_degree=int(b.left_degrees[0]),
        right_degree=int(b.right_degrees[0]),
        biregular=b.is_biregular(),
        matches=matches,
    )


def bipartite_spectrum(b: BipartiteGraph, n: Optional[int] = None) -> SpectrumReport:
    """Spectrum of B: ±sqrt of the Gram eigenvalues, padded with zeros."""
    gram, _ = snap_integers(gram_eigenvalues(b))
    roots = np.sqrt(np.clip(gram, 0.0, None))
    total = len(b.left) + len(b.right)
    values = np.concatenate([roots, -roots, np.zeros(total - 2 * len(roots))])
    return _report(b.name, n, values, total, notes=["computed from the Gram matrix of the smaller side"])


# ---------------------------------------------------------------------------
# Big-integer arithmetic behind the B_{n,2} bounds
# ---------------------------------------------------------------------------

def b_n2_bounds(n: int) -> BoundChainReport:
    if not 4 <= n <= 20:
        raise ContractError(f"bound arithmetic runs for 4 <= n <= 20, got {n}")
    notes: List[str] = []
    summation = summation_lemma_holds(n)
    sandwich = all(sandwich_holds(n, m) for m in range(n + 1))
    peak = summation_exponent(n, n - 2) == summation_exponent(n, n - 3)
    lam_sum, lam_bound = lambda_sq_upper_sum(n), lambda_sq_bound(n)
    delta, floor = delta_sq_exact(n), delta_sq_floor(n)
    lambda_ok = lam_sum <= lam_bound
    delta_ok = delta >= floor
    holds = summation and sandwich and peak
    if n > 8:
        holds = holds and lambda_ok and delta_ok
    else:
        notes.append("n <= 8: the Δ^2 floor and λ^2 bound are evaluated but outside their hypothesis")
    return BoundChainReport(
        name="b_n2_bounds",
        n=n,
        terms={
            "summation_lhs": float(sum(1 << summation_exponent(n, i) for i in range(n - 1))),
            "summation_rhs": float(3 * (1 << summation_exponent(n, n - 3))),
            "lambda_sq_sum": float(lam_sum),
            "lambda_sq_bound": float(lam_bound),
            "delta_sq": float(delta),
            "delta_sq_floor": float(floor),
            "sandwich": float(sandwich),
            "peak_equal": float(peak),
        },
        holds=holds,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Mixing lemmas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixingResult:
    lhs: float
    rhs: float

    @property
    def violated(self) -> bool:
        return self.lhs > self.rhs + 1e-9


def _mask(indices, size: int) -> np.ndarray:
    arr = np.asarray(indices)
    if arr.dtype == bool:
        if arr.shape != (size,):
            raise ContractError("subset mask has the wrong length")
        return arr
    if arr.size and (arr.min() < 0 or arr.max() >= size):
        raise ContractError("subset contains vertices outside the graph")
    mask = np.zeros(size, dtype=bool)
    mask[arr.astype(int)] = True
    return mask


def mixing_check(graph: LabeledGraph, s, t, lam: float) -> MixingResult:
    """|E(S,T) - Δ|S||T|/|V|| against λ sqrt(|S||T|)."""
    size = len(graph)
    sm, tm = _mask(s, size), _mask(t, size)
    edges = float(sm.astype(float) @ graph.adjacency.astype(float) @ tm.astype(float))
    ns, nt = int(sm.sum()), int(tm.sum())
    lhs = abs(edges - graph.degree * ns * nt / size)
    return MixingResult(lhs, lam * math.sqrt(ns * nt))


def bipartite_mixing_check(b: BipartiteGraph, s, t, lam: float) -> MixingResult:
    """|E(S,T)/E - αβ| against λ/sqrt(Δ_R Δ_L) sqrt(αβ(1-α)(1-β)), S on the left, T on the right."""
    if not b.is_biregular():
        raise ContractError(f"{b.name} is not biregular")
    sm, tm = _mask(s, len(b.left)), _mask(t, len(b.right))
    edges = float(sm.astype(float) @ b.biadjacency.astype(float) @ tm.astype(float))
    alpha, beta = sm.mean(), tm.mean()
    lhs = abs(edges / b.edge_count() - alpha * beta)
    scale = lam / math.sqrt(float(b.left_degrees[0]) * float(b.right_degrees[0]))
    return MixingResult(lhs, scale * math.sqrt(alpha * beta * (1 - alpha) * (1 - beta)))


def random_mixing_trials(graph, lam: float, trials: int, seed: int, bipartite: bool = False) -> Tuple[int, float]:
    """(violations, worst lhs/rhs) over random subset pairs of random sizes."""
    rng = np.random.default_rng(seed)
    violations, worst = 0, 0.0
    for _ in range(trials):
        if bipartite:
            s = rng.random(len(graph.left)) < rng.random()
            t = rng.random(len(graph.right)) < rng.random()
            result = bipartite_mixing_check(graph, s, t, lam)
        else:
            s = rng.random(len(graph)) < rng.random()
            t = rng.random(len(graph)) < rng.random()
            result = mixing_check(graph, s, t, lam)
        violations += result.violated
        if result.rhs > 0:
            worst = max(worst, result.lhs / result.rhs)
    if violations:
        logger.warning(f"{violations} mixing violations in {trials} trials")
    return violations, worst


def t_value(alpha: float, theta: float, v_count: int) -> float:
    """T(G) = log(θ/α) / log|V|."""
    if alpha < 1 or v_count < 2:
        raise ContractError(f"t_value needs alpha >= 1 and |V| >= 2, got alpha={alpha}, |V|={v_count}")
    if theta < alpha:
        logger.error(f"θ={theta} below α={alpha}")
        raise CertificateError(f"θ={theta} is below α={alpha}; certificates are inconsistent")
    return math.log(theta / alpha) / math.log(v_count)


__all__ = [
    "GramAnalysis",
    "IntersectionArray",
    "MixingResult",
    "b_n2_bounds",
    "bbt_analysis",
    "bbt_predicted",
    "bipartite_mixing_check",
    "bipartite_spectrum",
    "closed_form_report",
    "distance_one_eigenvalue",
    "dual_polar_eigenvalues",
    "gw_closed_form",
    "gw_prime_closed_form",
    "half_graph_lambda",
    "intersection_array",
    "mixing_check",
    "random_mixing_trials",
    "snap_integers",
    "spectral_parameter",
    "spectrum",
    "t_value",
]
