# core/matrix_sim.py
"""
Dense matrix realization of the n-qubit Pauli group (n <= 3).

This is the ground-truth oracle for phases and outcomes: operators are built
as explicit Kronecker products and every identity the combinatorial layer
relies on can be checked against them.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from .errors import CapacityError, ContractError, DimensionMismatchError
from .gf2 import GF2Vector, intersect, sp_bits
from .lattice import Measurement, Outcome, conventional_exponent_bits, outcome_eval_bits, outcomes

logger = logging.getLogger(__name__)

MAX_SIM_QUBITS = 3
TOLERANCE = 1e-9

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

DenseOperator = np.ndarray
StateVector = np.ndarray


def _require_small(n: int) -> None:
    if n > MAX_SIM_QUBITS:
        logger.error(f"Matrix simulation requested at n={n}, cap is {MAX_SIM_QUBITS}")
        raise CapacityError(f"matrix simulation is capped at n <= {MAX_SIM_QUBITS}, got n={n}")


@lru_cache(maxsize=None)
def _xz_bits(bits: int, n: int) -> DenseOperator:
    v = GF2Vector(bits, n)
    out = np.ones((1, 1), dtype=complex)
    for xb, zb in zip(v.x_bits(), v.z_bits()):
        factor = (_X if xb else _I) @ (_Z if zb else _I)
        out = np.kron(out, factor)
    out.setflags(write=False)
    return out


def xz_matrix(x: GF2Vector) -> DenseOperator:
    """XZ(x) = X^{x_1} Z^{x_{n+1}} ⊗ ... ⊗ X^{x_n} Z^{x_{2n}}."""
    _require_small(x.n)
    return _xz_bits(x.bits, x.n)


@lru_cache(maxsize=None)
def _phase_bits(bits: int, n: int) -> DenseOperator:
    out = (1j ** conventional_exponent_bits(bits, n)) * _xz_bits(bits, n)
    out.setflags(write=False)
    return out


def conventional_phase_matrix(x: GF2Vector) -> DenseOperator:
    """A(x) = i^{x_1 . x_2} XZ(x); Hermitian, squares to I."""
    _require_small(x.n)
    return _phase_bits(x.bits, x.n)


def commute_check(a: GF2Vector, b: GF2Vector) -> bool:
    """True iff the matrix commutator of XZ(a) and XZ(b) vanishes."""
    if a.n != b.n:
        raise DimensionMismatchError(f"vectors live in different spaces (n={a.n} vs n={b.n})")
    ma, mb = xz_matrix(a), xz_matrix(b)
    return bool(np.allclose(ma @ mb, mb @ ma, atol=TOLERANCE))


def commute_agrees(a: GF2Vector, b: GF2Vector) -> bool:
    return commute_check(a, b) == (sp_bits(a.bits, b.bits, a.n) == 0)


def product_sign(a: GF2Vector, b: GF2Vector) -> int:
    """The bit s with A(a) A(b) = (-1)^s A(a + b), for commuting a, b."""
    if sp_bits(a.bits, b.bits, a.n):
        raise ContractError(f"{a} and {b} anticommute; their product is not ±A(a+b)")
    lhs = conventional_phase_matrix(a) @ conventional_phase_matrix(b)
    rhs = conventional_phase_matrix(a + b)
    if np.allclose(lhs, rhs, atol=TOLERANCE):
        return 0
    if np.allclose(lhs, -rhs, atol=TOLERANCE):
        return 1
    raise ContractError(f"A({a}) A({b}) is not ±A(a+b)")


def is_hermitian(m: DenseOperator) -> bool:
    return bool(np.allclose(m, m.conj().T, atol=TOLERANCE))


def is_unitary(m: DenseOperator) -> bool:
    return bool(np.allclose(m @ m.conj().T, np.eye(m.shape[0]), atol=TOLERANCE))


def projector(o: Outcome) -> DenseOperator:
    """P_o = prod_b (I + (-1)^{o(b)} A(b)) / 2 over the canonical basis of o.base."""
    n = o.base.n
    _require_small(n)
    dim = 1 << n
    out = np.eye(dim, dtype=complex)
    for value, row in zip(o.values, o.base.rows):
        sign = -1 if value else 1
        out = out @ ((np.eye(dim) + sign * _phase_bits(row, n)) / 2)
    return out


def eigenspace_projectors(s: Measurement) -> Dict[Outcome, DenseOperator]:
    return {o: projector(o) for o in outcomes(s)}


def projector_rank(p: DenseOperator) -> int:
    return int(round(float(np.trace(p).real)))


def outcome_state(o: Outcome) -> StateVector:
    """Unit vector spanning the rank-1 eigenspace of a maximal measurement's outcome."""
    if not o.base.is_maximal():
        raise ContractError("outcome_state needs a maximal measurement")
    p = projector(o)
    column = int(np.argmax(np.linalg.norm(p, axis=0)))
    v = p[:, column]
    return v / np.linalg.norm(v)


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    dim = 1 << n
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def representation_sum(states: List[StateVector], psi: StateVector) -> float:
    """sum_v |<psi|u_v>|^2, the orthonormal-representation value of psi."""
    stacked = np.stack(states)
    return float(np.sum(np.abs(stacked.conj() @ psi) ** 2))


# ---------------------------------------------------------------------------
# Entangled strategy
# ---------------------------------------------------------------------------

def max_entangled_state(n: int) -> StateVector:
    """2^{-n/2} sum_i |e_i>|e_i> on n + n qubits."""
    _require_small(n)
    dim = 1 << n
    psi = np.zeros(dim * dim, dtype=complex)
    psi[np.arange(dim) * dim + np.arange(dim)] = 1 / np.sqrt(dim)
    return psi


def twisted_outcome(o: Outcome) -> Outcome:
    """b -> (-1)^{b_1 . b_2} f(b): the answer Bob reports for his measured outcome."""
    n = o.base.n
    return Outcome(o.base, tuple(v ^ conventional_exponent_bits(r, n) for v, r in zip(o.values, o.base.rows)))


def tau_expectation(z: GF2Vector) -> float:
    """<psi| A(z) ⊗ A(z) |psi> on the maximally entangled state."""
    psi = max_entangled_state(z.n)
    a = conventional_phase_matrix(z)
    return float(np.real(psi.conj() @ np.kron(a, a) @ psi))


def joint_answer_distribution(x: Measurement, y: Measurement) -> Dict[Tuple[Outcome, Outcome], float]:
    """Probability of each (Alice answer, Bob reported answer) pair."""
    if x.n != y.n:
        raise DimensionMismatchError(f"questions live over n={x.n} and n={y.n}")
    n = x.n
    _require_small(n)
    psi = max_entangled_state(n)
    bob = {g: projector(g) for g in outcomes(y)}
    table: Dict[Tuple[Outcome, Outcome], float] = {}
    for f in outcomes(x):
        pa = projector(f)
        for g, pb in bob.items():
            p = float(np.real(psi.conj() @ np.kron(pa, pb) @ psi))
            if p > TOLERANCE:
                table[(f, twisted_outcome(g))] = p
    return table


def agreement_probability(x: Measurement, y: Measurement) -> float:
    """Exact probability that the reported answers agree on x ∩ y."""
    rows = intersect(x.subspace, y.subspace).rows
    total = 0.0
    for (f, g), p in joint_answer_distribution(x, y).items():
        if all(outcome_eval_bits(f, r) == outcome_eval_bits(g, r) for r in rows):
            total += p
    return total


@dataclass(frozen=True)
class QuantumRun:
    win_probability: float
    samples: Tuple[Tuple[Outcome, Outcome], ...]
    alice_marginal: Dict[Outcome, float]


def quantum_strategy_z1(x: Measurement, y: Measurement, seed: int, samples: int = 0) -> QuantumRun:
    """Shared-entanglement strategy on a Z_1 question, sampled and exact."""
    if x.n != 2 or y.n != 2 or not (x.is_maximal() and y.is_maximal()):
        raise ContractError("Z_1 questions are pairs of maximal measurements in L^2")
    if intersect(x.subspace, y.subspace).dim != 1:
        raise ContractError("Z_1 questions share exactly one dimension")
    table = joint_answer_distribution(x, y)
    keys = list(table)
    probs = np.array([table[k] for k in keys])
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    drawn: Tuple[Tuple[Outcome, Outcome], ...] = ()
    if samples:
        idx = rng.choice(len(keys), size=samples, p=probs)
        drawn = tuple(keys[i] for i in idx)
    marginal: Dict[Outcome, float] = {}
    for (f, _), p in table.items():
        marginal[f] = marginal.get(f, 0.0) + p
    return QuantumRun(agreement_probability(x, y), drawn, marginal)


__all__ = [
    "MAX_SIM_QUBITS",
    "QuantumRun",
    "agreement_probability",
    "commute_agrees",
    "commute_check",
    "conventional_phase_matrix",
    "eigenspace_projectors",
    "is_hermitian",
    "is_unitary",
    "joint_answer_distribution",
    "max_entangled_state",
    "outcome_state",
    "product_sign",
    "projector",
    "projector_rank",
    "quantum_strategy_z1",
    "random_state",
    "representation_sum",
    "tau_expectation",
    "twisted_outcome",
    "xz_matrix",
]
