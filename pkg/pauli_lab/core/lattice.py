# core/lattice.py
"""
The semilattice L^n as Pauli measurements.

An outcome of a measurement S is stored by its values on the canonical basis
of S. Every other value follows from the phase rule
    f(x + y) = w(x, y) + f(x) + f(y),
where w is read off the conventional-phase multiplication table
    A(u) A(v) = i^{c(u, v)} A(u + v),   A(x) = i^{x_1 . x_2} XZ(x),
with the dot products inside the phase taken in Z_2.
"""
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import ContractError, DimensionMismatchError
from .gf2 import (
    GF2Vector,
    IsotropicSubspace,
    SymplecticMap,
    canonicalize,
    enumerate_isotropic,
    intersect,
    parity,
    parity_table,
    sp_bits,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Measurement:
    """A Pauli measurement: the isotropic subspace of its jointly measured observables."""
    subspace: IsotropicSubspace

    @classmethod
    def from_strings(cls, *vectors: str) -> "Measurement":
        return cls(canonicalize([GF2Vector.from_string(v) for v in vectors]))

    @property
    def n(self) -> int:
        return self.subspace.n

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def rows(self) -> Tuple[int, ...]:
        return self.subspace.rows

    def is_maximal(self) -> bool:
        return self.dim == self.n

    # Inclusion order on L^n; two measurements may be incomparable.
    def __le__(self, other: "Measurement") -> bool:
        return self.subspace.is_subspace_of(other.subspace)

    def __lt__(self, other: "Measurement") -> bool:
        return self != other and self <= other

    def __ge__(self, other: "Measurement") -> bool:
        return other <= self

    def __gt__(self, other: "Measurement") -> bool:
        return other < self

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.subspace.basis) + "}"


@dataclass(frozen=True)
class Outcome:
    """A linear/antilinear function on base, stored by its values on the canonical basis."""
    base: Measurement
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.base.dim:
            raise DimensionMismatchError(
                f"outcome carries {len(self.values)} values for a dim-{self.base.dim} measurement"
            )
        if any(v not in (0, 1) for v in self.values):
            raise DimensionMismatchError(f"outcome values must be bits, got {self.values}")

    @classmethod
    def from_code(cls, base: Measurement, code: int) -> "Outcome":
        k = base.dim
        return cls(base, tuple((code >> (k - 1 - i)) & 1 for i in range(k)))

    @property
    def code(self) -> int:
        out = 0
        for v in self.values:
            out = (out << 1) | v
        return out

    def bit_string(self) -> str:
        return "".join(str(v) for v in self.values)


# ---------------------------------------------------------------------------
# Phase rule
# ---------------------------------------------------------------------------

def conventional_exponent_bits(bits: int, n: int) -> int:
    """e(x) = x_1 . x_2 evaluated in Z_2."""
    return parity((bits >> n) & bits & ((1 << n) - 1))


def phase_exponent_bits(u: int, v: int, n: int) -> int:
    """c(u, v) in Z_4 with A(u) A(v) = i^c A(u + v)."""
    low = (1 << n) - 1
    cross = parity((u & low) & (v >> n))
    c = conventional_exponent_bits(u, n) + conventional_exponent_bits(v, n) - conventional_exponent_bits(u ^ v, n)
    return (c + 2 * cross) % 4


def phase_exponent(u: GF2Vector, v: GF2Vector) -> int:
    if u.n != v.n:
        raise DimensionMismatchError(f"vectors live in different spaces (n={u.n} vs n={v.n})")
    return phase_exponent_bits(u.bits, v.bits, u.n)


def phase_w_bits(u: int, v: int, n: int) -> int:
    if sp_bits(u, v, n):
        logger.error(f"phase_w called on anticommuting pair {GF2Vector(u, n)}, {GF2Vector(v, n)}")
        raise ContractError(f"phase_w needs commuting inputs; {GF2Vector(u, n)} and {GF2Vector(v, n)} anticommute")
    return phase_exponent_bits(u, v, n) // 2


def phase_w(x: GF2Vector, y: GF2Vector) -> int:
    """The bit w with f(x + y) = w + f(x) + f(y) for every outcome containing x and y."""
    if x.n != y.n:
        raise DimensionMismatchError(f"vectors live in different spaces (n={x.n} vs n={y.n})")
    return phase_w_bits(x.bits, y.bits, x.n)


def phase_offset(subspace: IsotropicSubspace, coeff_code: int) -> int:
    """Value of the all-zero outcome at the vector with the given coefficient code."""
    acc = 0
    value = 0
    k = subspace.dim
    for i, row in enumerate(subspace.rows):
        if (coeff_code >> (k - 1 - i)) & 1:
            value ^= phase_w_bits(acc, row, subspace.n)
            acc ^= row
    return value


def outcome_eval_bits(o: Outcome, bits: int) -> int:
    code = o.base.subspace.coefficients(bits)
    if code is None:
        raise ContractError(f"{GF2Vector(bits, o.base.n)} is not in the outcome's measurement")
    return parity(code & o.code) ^ phase_offset(o.base.subspace, code)


def outcome_eval(o: Outcome, v: GF2Vector) -> int:
    """f(v), folding phase_w along the canonical decomposition of v."""
    if v.n != o.base.n:
        raise DimensionMismatchError(f"vector over n={v.n} evaluated on a measurement over n={o.base.n}")
    return outcome_eval_bits(o, v.bits)


def outcome_table(o: Outcome) -> Dict[int, int]:
    """Every vector of the base mapped to its value."""
    sub = o.base.subspace
    return {bits: parity(code & o.code) ^ phase_offset(sub, code) for code, bits in enumerate(sub.elements)}


def outcomes(s: Measurement) -> List[Outcome]:
    return [Outcome(s, values) for values in product((0, 1), repeat=s.dim)]


def restrict(o: Outcome, t: Measurement) -> Outcome:
    """The outcome of t inherited from o."""
    if not t <= o.base:
        logger.error(f"restrict: {t} is not below {o.base}")
        raise ContractError("restriction target is not below the outcome's measurement")
    return Outcome(t, tuple(outcome_eval_bits(o, r) for r in t.rows))


def meet(x: Measurement, y: Measurement) -> Measurement:
    return Measurement(intersect(x.subspace, y.subspace))


def consistent(o1: Outcome, o2: Outcome) -> bool:
    """Agreement on every common coarse-graining, i.e. on the canonical basis of base_1 ∩ base_2."""
    if o1.base.n != o2.base.n:
        raise DimensionMismatchError(f"outcomes live over n={o1.base.n} and n={o2.base.n}")
    common = meet(o1.base, o2.base)
    return all(outcome_eval_bits(o1, r) == outcome_eval_bits(o2, r) for r in common.rows)


def disagreement_count(o1: Outcome, o2: Outcome) -> int:
    """|{w in base_1 ∩ base_2 : f_1(w) != f_2(w)}| for an inconsistent pair."""
    if consistent(o1, o2):
        logger.error("disagreement_count called on a consistent pair")
        raise ContractError("disagreement_count needs an inconsistent pair")
    common = meet(o1.base, o2.base).subspace
    return sum(outcome_eval_bits(o1, v) != outcome_eval_bits(o2, v) for v in common.elements)


def distance(x: Measurement, y: Measurement) -> int:
    """d(x, y) = n - dim(x ∩ y) on maximal measurements."""
    if not (x.is_maximal() and y.is_maximal()):
        logger.error(f"distance called on non-maximal measurements (dims {x.dim}, {y.dim})")
        raise ContractError("distance is defined on maximal measurements only")
    if x.n != y.n:
        raise DimensionMismatchError(f"measurements live over n={x.n} and n={y.n}")
    return x.n - intersect(x.subspace, y.subspace).dim


# ---------------------------------------------------------------------------
# Sign corrections under symplectic maps
# ---------------------------------------------------------------------------

def sign_correction(phi: SymplecticMap, bits: int) -> int:
    """
    s(v) with s(e_j) = 0 on the standard basis and
    (-1)^{s(v)} A(φv) obeying the multiplication table of A(v).
    """
    n = phi.n
    width = 2 * n
    acc = 0
    sign = 0
    for pos in range(width):
        e = 1 << (width - 1 - pos)
        if bits & e:
            shifted = phase_exponent_bits(phi.apply(acc), phi.apply(e), n) - phase_exponent_bits(acc, e, n)
            sign ^= (shifted % 4) // 2
            acc ^= e
    return sign


def pull_back_outcome(phi: SymplecticMap, image: Outcome, x: Measurement) -> Outcome:
    """The outcome g of x with g(v) = image(φv) + s(v)."""
    if phi.apply_subspace(x.subspace) != image.base.subspace:
        raise ContractError("image outcome does not live on φ(x)")
    values = tuple(outcome_eval_bits(image, phi.apply(r)) ^ sign_correction(phi, r) for r in x.rows)
    return Outcome(x, values)


# ---------------------------------------------------------------------------
# Vectorised view of L^n
# ---------------------------------------------------------------------------

class PauliLattice:
    """
    Indexed maximal measurements of L^n with cached membership, coefficient and
    phase tables over all 4^n coordinate vectors.
    """

    def __init__(self, n: int):
        self.n = n
        self.size = 1 << (2 * n)
        self.maximal: List[Measurement] = [Measurement(s) for s in enumerate_isotropic(n, n)]
        self.index: Dict[Tuple[int, ...], int] = {m.rows: i for i, m in enumerate(self.maximal)}
        self.outcome_count = 1 << n
        logger.info(f"PauliLattice n={n}: {len(self.maximal)} maximal measurements")

    def __len__(self) -> int:
        return len(self.maximal)

    def level(self, k: int) -> List[Measurement]:
        return [Measurement(s) for s in enumerate_isotropic(self.n, k)]

    def index_of(self, m: Measurement) -> int:
        return self.index[m.rows]

    @cached_property
    def membership(self) -> np.ndarray:
        table = np.zeros((len(self.maximal), self.size), dtype=bool)
        for i, m in enumerate(self.maximal):
            table[i, list(m.subspace.elements)] = True
        return table

    @cached_property
    def coefficient_codes(self) -> np.ndarray:
        table = np.full((len(self.maximal), self.size), -1, dtype=np.int16)
        for i, m in enumerate(self.maximal):
            table[i, list(m.subspace.elements)] = np.arange(len(m.subspace.elements))
        return table

    @cached_property
    def phase_offsets(self) -> np.ndarray:
        table = np.zeros((len(self.maximal), self.size), dtype=np.int8)
        for i, m in enumerate(self.maximal):
            sub = m.subspace
            for code, bits in enumerate(sub.elements):
                table[i, bits] = phase_offset(sub, code)
        return table

    def values(self, i: int, code: int) -> np.ndarray:
        """Values of outcome `code` of maximal i at every vector; 0 outside the measurement."""
        coeffs = self.coefficient_codes[i]
        member = coeffs >= 0
        table = parity_table(self.n)[np.where(member, coeffs, 0) & code] ^ self.phase_offsets[i]
        return np.where(member, table, 0).astype(np.int8)

    def value_table(self, choices: Sequence[int]) -> np.ndarray:
        """(N x 4^n) values of the assignment choosing outcome choices[i] on maximal i."""
        choices = np.asarray(choices, dtype=np.int64)
        coeffs = self.coefficient_codes.astype(np.int64)
        member = coeffs >= 0
        linear = parity_table(self.n)[np.where(member, coeffs, 0) & choices[:, None]]
        return np.where(member, linear ^ self.phase_offsets, 0).astype(np.int8)

    def sign_table(self, choices: Sequence[int]) -> np.ndarray:
        """+1/-1 at member vectors according to the chosen outcome, 0 elsewhere."""
        values = self.value_table(choices)
        return np.where(self.membership, 1 - 2 * values, 0).astype(np.int16)

    @cached_property
    def intersection_sizes(self) -> np.ndarray:
        m = self.membership.astype(np.float32)
        return np.rint(m @ m.T).astype(np.int64)

    @cached_property
    def distances(self) -> np.ndarray:
        dims = np.log2(self.intersection_sizes).round().astype(np.int64)
        return self.n - dims

    def fiber(self, bits: int) -> np.ndarray:
        """Indices of maximal measurements above w = span{bits}."""
        return np.flatnonzero(self.membership[:, bits])

    def level_one_vectors(self) -> List[int]:
        return list(range(1, self.size))

    def inconsistent_pairs(self, choices: Sequence[int]) -> np.ndarray:
        """Boolean (N x N): chosen outcomes disagree somewhere on the intersection."""
        signs = self.sign_table(choices).astype(np.float32)
        agreement = np.rint(signs @ signs.T).astype(np.int64)
        return agreement != self.intersection_sizes

    def outcome(self, i: int, code: int) -> Outcome:
        return Outcome.from_code(self.maximal[i], code)


@lru_cache(maxsize=None)
def get_lattice(n: int) -> PauliLattice:
    return PauliLattice(n)


__all__ = [
    "Measurement",
    "Outcome",
    "PauliLattice",
    "consistent",
    "disagreement_count",
    "distance",
    "get_lattice",
    "meet",
    "outcome_eval",
    "outcome_table",
    "outcomes",
    "phase_exponent",
    "phase_offset",
    "phase_w",
    "pull_back_outcome",
    "restrict",
    "sign_correction",
]
