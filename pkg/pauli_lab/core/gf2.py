# core/gf2.py
"""
Exact linear algebra over Z_2^{2n} with the symplectic form.

Vectors are bit-packed into Python ints. Bit string b_0 ... b_{2n-1} is read
most-significant first: the first n bits are the X part x_1, the last n bits
the Z part x_2, and qubit 1 sits leftmost in each half.
"""
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import CapacityError, ContractError, DimensionMismatchError, IsotropyError

logger = logging.getLogger(__name__)

MAX_QUBITS = 32
ENUMERATION_CAP = 4


def parity(bits: int) -> int:
    return bin(bits).count("1") & 1


def swap_halves(bits: int, n: int) -> int:
    """J(v): exchange the X and Z halves, so <a, b> = parity(a & J(b))."""
    low = (1 << n) - 1
    return (bits >> n) | ((bits & low) << n)


def sp_bits(a: int, b: int, n: int) -> int:
    return parity(a & swap_halves(b, n))


@dataclass(frozen=True, order=True)
class GF2Vector:
    """coord(P) of a Pauli word on n qubits."""
    bits: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise DimensionMismatchError(f"qubit count must lie in [1, {MAX_QUBITS}], got {self.n}")
        if not 0 <= self.bits < (1 << (2 * self.n)):
            raise DimensionMismatchError(f"bits {self.bits:#x} do not fit 2n = {2 * self.n} positions")

    @classmethod
    def from_string(cls, text: str) -> "GF2Vector":
        """Parse '10|01' (X part | Z part); the bar is optional."""
        cleaned = text.replace(" ", "")
        if "|" in cleaned:
            x_part, z_part = cleaned.split("|")
            if len(x_part) != len(z_part):
                raise DimensionMismatchError(f"halves of {text!r} differ in length")
            cleaned = x_part + z_part
        if not cleaned or len(cleaned) % 2 or set(cleaned) - {"0", "1"}:
            raise DimensionMismatchError(f"{text!r} is not an even-length bit string")
        return cls(int(cleaned, 2), len(cleaned) // 2)

    @classmethod
    def from_parts(cls, x_bits: Sequence[int], z_bits: Sequence[int]) -> "GF2Vector":
        if len(x_bits) != len(z_bits):
            raise DimensionMismatchError("X and Z parts must have equal length")
        value = 0
        for bit in list(x_bits) + list(z_bits):
            value = (value << 1) | (bit & 1)
        return cls(value, len(x_bits))

    @property
    def x_part(self) -> int:
        return self.bits >> self.n

    @property
    def z_part(self) -> int:
        return self.bits & ((1 << self.n) - 1)

    def x_bits(self) -> Tuple[int, ...]:
        return tuple((self.x_part >> (self.n - 1 - j)) & 1 for j in range(self.n))

    def z_bits(self) -> Tuple[int, ...]:
        return tuple((self.z_part >> (self.n - 1 - j)) & 1 for j in range(self.n))

    def is_zero(self) -> bool:
        return self.bits == 0

    def __add__(self, other: "GF2Vector") -> "GF2Vector":
        _check_same_n(self, other)
        return GF2Vector(self.bits ^ other.bits, self.n)

    __xor__ = __add__

    def to_string(self) -> str:
        raw = format(self.bits, f"0{2 * self.n}b")
        return f"{raw[:self.n]}|{raw[self.n:]}"

    def to_hex(self) -> str:
        return encode_hex(self.bits, self.n)

    def __str__(self) -> str:
        return self.to_string()


def encode_hex(bits: int, n: int) -> str:
    width = -(-2 * n // 4)
    return format(bits, f"0{width}x")


def decode_hex(text: str, n: int) -> int:
    value = int(text, 16)
    if value >= 1 << (2 * n):
        raise DimensionMismatchError(f"hex row {text!r} exceeds 2n = {2 * n} bits")
    return value


def _check_same_n(a: GF2Vector, b: GF2Vector) -> None:
    if a.n != b.n:
        logger.error(f"Dimension mismatch: n={a.n} vs n={b.n}")
        raise DimensionMismatchError(f"vectors live in different spaces (n={a.n} vs n={b.n})")


def symplectic_product(a: GF2Vector, b: GF2Vector) -> int:
    """<a, b> = a_1 . b_2 + a_2 . b_1 over Z_2."""
    _check_same_n(a, b)
    return parity((a.x_part & b.z_part) ^ (a.z_part & b.x_part))


# ---------------------------------------------------------------------------
# Row reduction on int bitsets
# ---------------------------------------------------------------------------

def rref(rows: Iterable[int]) -> Tuple[int, ...]:
    """Fully reduced row-echelon form; pivot = highest set bit, leftmost first."""
    basis: List[int] = []
    for row in rows:
        for b in basis:
            if (row >> (b.bit_length() - 1)) & 1:
                row ^= b
        if row:
            pivot = row.bit_length() - 1
            basis = [b ^ row if (b >> pivot) & 1 else b for b in basis]
            basis.append(row)
    basis.sort(reverse=True)
    return tuple(basis)


def reduce_against(value: int, rows: Sequence[int]) -> int:
    for row in rows:
        if (value >> (row.bit_length() - 1)) & 1:
            value ^= row
    return value


def nullspace(rows: Sequence[int], width: int) -> Tuple[int, ...]:
    """Basis of {v : parity(v & r) = 0 for every r}, in canonical form."""
    reduced = rref(rows)
    pivots = {r.bit_length() - 1 for r in reduced}
    kernel = []
    for free in range(width):
        if free in pivots:
            continue
        v = 1 << free
        for r in reduced:
            if (r >> free) & 1:
                v |= 1 << (r.bit_length() - 1)
        kernel.append(v)
    return rref(kernel)


def solve_linear(rows: Sequence[int], rhs: Sequence[int]) -> Optional[int]:
    """One solution of parity(v & rows[i]) = rhs[i], free variables at 0."""
    augmented = rref((row << 1) | (t & 1) for row, t in zip(rows, rhs))
    solution = 0
    for row in augmented:
        if row == 1:
            return None
        if row & 1:
            solution |= 1 << (row.bit_length() - 2)
    return solution


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of Z_2^{2n} stored by its canonical RREF rows."""
    n: int
    rows: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return 2 * self.n

    @property
    def basis(self) -> Tuple[GF2Vector, ...]:
        return tuple(GF2Vector(r, self.n) for r in self.rows)

    @property
    def pivot_columns(self) -> Tuple[int, ...]:
        """Pivot positions counted from the left, strictly increasing."""
        return tuple(self.width - r.bit_length() for r in self.rows)

    @cached_property
    def pivot_mask(self) -> int:
        mask = 0
        for r in self.rows:
            mask |= 1 << (r.bit_length() - 1)
        return mask

    @cached_property
    def elements(self) -> Tuple[int, ...]:
        """All 2^dim vectors, indexed by coefficient code (row i <-> bit dim-1-i)."""
        out = []
        for coeffs in product((0, 1), repeat=self.dim):
            v = 0
            for c, r in zip(coeffs, self.rows):
                if c:
                    v ^= r
            out.append(v)
        return tuple(out)

    def coefficients(self, bits: int) -> Optional[int]:
        """Coefficient code of bits over the canonical rows, or None if outside."""
        code = 0
        remainder = bits
        for r in self.rows:
            code <<= 1
            if (remainder >> (r.bit_length() - 1)) & 1:
                remainder ^= r
                code |= 1
        return code if remainder == 0 else None

    def contains(self, v) -> bool:
        bits = v.bits if isinstance(v, GF2Vector) else v
        return reduce_against(bits, self.rows) == 0

    def is_subspace_of(self, other: "Subspace") -> bool:
        if self.n != other.n:
            return False
        return all(other.contains(r) for r in self.rows)

    def is_isotropic(self) -> bool:
        return find_anticommuting_pair(self.rows, self.n) is None

    def to_hex_rows(self) -> List[str]:
        return [encode_hex(r, self.n) for r in self.rows]


@dataclass(frozen=True, order=True)
class IsotropicSubspace(Subspace):
    """An element of L^n: a canonical subspace on which the form vanishes."""

    def __post_init__(self):
        if self.dim > self.n:
            raise IsotropyError(f"dim {self.dim} exceeds n={self.n}; no isotropic subspace is that large")
        witness = find_anticommuting_pair(self.rows, self.n)
        if witness is not None:
            a, b = (GF2Vector(w, self.n) for w in witness)
            raise IsotropyError(f"basis rows {a} and {b} anticommute", witness=(a, b))


def find_anticommuting_pair(rows: Sequence[int], n: int) -> Optional[Tuple[int, int]]:
    for i, a in enumerate(rows):
        for b in rows[i + 1:]:
            if sp_bits(a, b, n):
                return a, b
    return None


def _common_n(vectors: Sequence[GF2Vector]) -> int:
    if not vectors:
        raise ContractError("canonicalize needs a nonempty generating set")
    n = vectors[0].n
    for v in vectors[1:]:
        _check_same_n(vectors[0], v)
    return n


def span(vectors: Sequence[GF2Vector]) -> Subspace:
    n = _common_n(vectors)
    return Subspace(n, rref(v.bits for v in vectors))


def canonicalize(vectors: Sequence[GF2Vector]) -> IsotropicSubspace:
    """Canonical isotropic subspace spanned by vectors; rejects non-isotropic spans."""
    n = _common_n(vectors)
    witness = find_anticommuting_pair([v.bits for v in vectors], n)
    if witness is not None:
        a, b = (GF2Vector(w, n) for w in witness)
        logger.error(f"Isotropy violation while canonicalizing: <{a}, {b}> = 1")
        raise IsotropyError(f"span is not isotropic: <{a}, {b}> = 1", witness=(a, b))
    return IsotropicSubspace(n, rref(v.bits for v in vectors))


def isotropic_from_rows(rows: Iterable[int], n: int) -> IsotropicSubspace:
    return IsotropicSubspace(n, rref(rows))


def zero_subspace(n: int) -> IsotropicSubspace:
    return IsotropicSubspace(n, ())


def full_space(n: int) -> Subspace:
    return Subspace(n, tuple(1 << (2 * n - 1 - j) for j in range(2 * n)))


def _check_same_space(a: Subspace, b: Subspace) -> None:
    if a.n != b.n:
        logger.error(f"Dimension mismatch: subspaces over n={a.n} and n={b.n}")
        raise DimensionMismatchError(f"subspaces live in different spaces (n={a.n} vs n={b.n})")


def perp(a: Subspace) -> Subspace:
    """{v : <v, w> = 0 for all w in a}; dimension 2n - dim a."""
    return Subspace(a.n, nullspace([swap_halves(r, a.n) for r in a.rows], a.width))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same_space(a, b)
    return Subspace(a.n, rref(a.rows + b.rows))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """a ∩ b, computed as (a^⊥ + b^⊥)^⊥."""
    _check_same_space(a, b)
    meet = perp(subspace_sum(perp(a), perp(b)))
    if isinstance(a, IsotropicSubspace) or isinstance(b, IsotropicSubspace):
        return IsotropicSubspace(meet.n, meet.rows)
    return meet


# ---------------------------------------------------------------------------
# Symplectic bases and maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymplecticBasis:
    n: int
    pairs: Tuple[Tuple[GF2Vector, GF2Vector], ...]

    def validate(self) -> bool:
        xs = [p[0] for p in self.pairs]
        zs = [p[1] for p in self.pairs]
        for i in range(len(self.pairs)):
            for j in range(len(self.pairs)):
                if symplectic_product(xs[i], zs[j]) != int(i == j):
                    return False
                if i != j and (symplectic_product(xs[i], xs[j]) or symplectic_product(zs[i], zs[j])):
                    return False
        return True

    def coordinates(self, v: GF2Vector) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """(c, d) with v = sum c_j x_j + sum d_j z_j."""
        cs = tuple(symplectic_product(v, z) for _, z in self.pairs)
        ds = tuple(symplectic_product(v, x) for x, _ in self.pairs)
        return cs, ds


def _solve_partner(xs: Sequence[int], index: int, zs: Sequence[int], n: int) -> int:
    rows = [swap_halves(x, n) for x in xs] + [swap_halves(z, n) for z in zs]
    rhs = [int(k == index) for k in range(len(xs))] + [0] * len(zs)
    partner = solve_linear(rows, rhs)
    if partner is None:
        raise ContractError("no symplectic partner exists; input vectors are dependent")
    return partner


def complete_symplectic_pairs(xs: Sequence[int], n: int, fixed: Sequence[int] = ()) -> List[int]:
    """Partners z_j with <x_k, z_j> = δ_jk, <z_i, z_j> = 0, and z_j ⊥ every vector in fixed."""
    zs: List[int] = []
    for j in range(len(xs)):
        rows = [swap_halves(x, n) for x in xs] + [swap_halves(z, n) for z in zs] + [swap_halves(f, n) for f in fixed]
        rhs = [int(k == j) for k in range(len(xs))] + [0] * (len(zs) + len(fixed))
        partner = solve_linear(rows, rhs)
        if partner is None:
            raise ContractError("no symplectic partner exists; input vectors are dependent")
        zs.append(partner)
    return zs


def extend_to_symplectic_basis(a: IsotropicSubspace) -> SymplecticBasis:
    """Symplectic Gram-Schmidt; the first dim(a) x-vectors are a's canonical rows."""
    n = a.n
    xs = list(a.rows)
    zs: List[int] = []
    for j in range(len(xs)):
        zs.append(_solve_partner(xs, j, zs, n))
    while len(xs) < n:
        complement = perp(Subspace(n, rref(xs + zs)))
        fresh = complement.rows[0]
        xs.append(fresh)
        zs.append(_solve_partner(xs, len(xs) - 1, zs, n))
    pairs = tuple((GF2Vector(x, n), GF2Vector(z, n)) for x, z in zip(xs, zs))
    return SymplecticBasis(n, pairs)


def standard_x(n: int, qubit: int) -> int:
    return 1 << (2 * n - 1 - qubit)


def standard_z(n: int, qubit: int) -> int:
    return 1 << (n - 1 - qubit)


@dataclass(frozen=True)
class SymplecticMap:
    """Linear map of Z_2^{2n}, stored by the images of the 2n standard basis vectors (MSB first)."""
    n: int
    images: Tuple[int, ...]

    def apply(self, bits: int) -> int:
        out = 0
        width = 2 * self.n
        for pos in range(width):
            if (bits >> (width - 1 - pos)) & 1:
                out ^= self.images[pos]
        return out

    def apply_vector(self, v: GF2Vector) -> GF2Vector:
        return GF2Vector(self.apply(v.bits), self.n)

    def apply_subspace(self, s: Subspace) -> Subspace:
        rows = rref(self.apply(r) for r in s.rows)
        if isinstance(s, IsotropicSubspace):
            return IsotropicSubspace(self.n, rows)
        return Subspace(self.n, rows)

    def is_symplectic(self) -> bool:
        width = 2 * self.n
        for i in range(width):
            for j in range(i + 1, width):
                e_i = 1 << (width - 1 - i)
                e_j = 1 << (width - 1 - j)
                if sp_bits(self.images[i], self.images[j], self.n) != sp_bits(e_i, e_j, self.n):
                    return False
        return len(rref(self.images)) == width

    def compose(self, inner: "SymplecticMap") -> "SymplecticMap":
        """self ∘ inner."""
        return SymplecticMap(self.n, tuple(self.apply(img) for img in inner.images))

    @classmethod
    def from_pairs(cls, n: int, source: Sequence[Tuple[int, int]], target: Sequence[Tuple[int, int]]) -> "SymplecticMap":
        """Map sending the symplectic basis source[j] = (x_j, z_j) onto target[j]."""
        width = 2 * n
        images = []
        for pos in range(width):
            e = 1 << (width - 1 - pos)
            image = 0
            for (x, z), (tx, tz) in zip(source, target):
                if sp_bits(e, z, n):
                    image ^= tx
                if sp_bits(e, x, n):
                    image ^= tz
            images.append(image)
        return cls(n, tuple(images))

    @classmethod
    def identity(cls, n: int) -> "SymplecticMap":
        width = 2 * n
        return cls(n, tuple(1 << (width - 1 - pos) for pos in range(width)))


class QuotientMap:
    """
    The isomorphism L^n ∩ ↑w ≅ L^{n-1} for a dim-1 w, realized through a
    symplectic basis of w^⊥/w.
    """

    def __init__(self, w: IsotropicSubspace):
        if w.dim != 1:
            logger.error(f"quotient_reduce needs a dim-1 subspace, got dim {w.dim}")
            raise ContractError(f"quotient_reduce needs dim w = 1, got {w.dim}")
        if w.n < 2:
            raise ContractError("quotient_reduce needs n >= 2")
        self.w = w
        self.n = w.n
        basis = extend_to_symplectic_basis(w)
        self._anchor = basis.pairs[0][0].bits
        self._pairs = [(x.bits, z.bits) for x, z in basis.pairs[1:]]
        self._perp = perp(w)

    def vector_image(self, bits: int) -> int:
        if not self._perp.contains(bits):
            raise ContractError(f"{GF2Vector(bits, self.n)} is not in w^perp")
        xs = [sp_bits(bits, z, self.n) for _, z in self._pairs]
        zs = [sp_bits(bits, x, self.n) for x, _ in self._pairs]
        return GF2Vector.from_parts(xs, zs).bits

    def vector_lift(self, bits: int) -> int:
        m = self.n - 1
        image = GF2Vector(bits, m)
        out = 0
        for bit, (x, _) in zip(image.x_bits(), self._pairs):
            if bit:
                out ^= x
        for bit, (_, z) in zip(image.z_bits(), self._pairs):
            if bit:
                out ^= z
        return out

    def forward(self, x: IsotropicSubspace) -> IsotropicSubspace:
        if not self.w.is_subspace_of(x):
            raise ContractError("subspace does not lie above w")
        return IsotropicSubspace(self.n - 1, rref(self.vector_image(r) for r in x.rows))

    def inverse(self, y: IsotropicSubspace) -> IsotropicSubspace:
        if y.n != self.n - 1:
            raise DimensionMismatchError(f"image lives over n={y.n}, expected {self.n - 1}")
        rows = [self.vector_lift(r) for r in y.rows] + [self._anchor]
        return IsotropicSubspace(self.n, rref(rows))


def quotient_reduce(w: IsotropicSubspace) -> QuotientMap:
    return QuotientMap(w)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def parity_table(width: int) -> np.ndarray:
    values = np.arange(1 << width, dtype=np.int64)
    table = np.zeros(1 << width, dtype=np.int8)
    while values.any():
        table ^= (values & 1).astype(np.int8)
        values >>= 1
    return table


def all_vectors(n: int) -> np.ndarray:
    return np.arange(1 << (2 * n), dtype=np.int64)


@lru_cache(maxsize=None)
def _enumerate_level(n: int, k: int) -> Tuple[IsotropicSubspace, ...]:
    if k == 0:
        return (zero_subspace(n),)
    previous = _enumerate_level(n, k - 1)
    vectors = all_vectors(n)
    table = parity_table(2 * n)
    found: Dict[Tuple[int, ...], IsotropicSubspace] = {}
    for a in previous:
        ok = (vectors & a.pivot_mask) == 0
        ok &= vectors != 0
        for r in a.rows:
            ok &= table[vectors & swap_halves(r, n)] == 0
        for v in vectors[ok]:
            rows = rref(a.rows + (int(v),))
            if rows not in found:
                found[rows] = IsotropicSubspace(n, rows)
    ordered = tuple(found[key] for key in sorted(found))
    logger.debug(f"Enumerated {len(ordered)} isotropic subspaces at n={n}, k={k}")
    return ordered


def enumerate_isotropic(n: int, k: int) -> List[IsotropicSubspace]:
    """All k-dim isotropic subspaces of Z_2^{2n}, lexicographic on canonical rows."""
    if n < 1:
        raise DimensionMismatchError(f"n must be >= 1, got {n}")
    if n > ENUMERATION_CAP:
        logger.error(f"Enumeration requested at n={n}, cap is {ENUMERATION_CAP}")
        raise CapacityError(f"enumeration is capped at n <= {ENUMERATION_CAP}, got n={n}")
    if not 0 <= k <= n:
        raise ContractError(f"need 0 <= k <= n, got k={k}, n={n}")
    return list(_enumerate_level(n, k))


def iter_rref_forms(width: int, k: int) -> Iterable[Tuple[int, ...]]:
    """Every k x width matrix in reduced row-echelon form; one per k-dim subspace of Z_2^width."""
    for pivots in combinations(range(width), k):
        pivot_set = set(pivots)
        free_slots = []
        for i, p in enumerate(pivots):
            free_slots.extend((i, col) for col in range(p + 1, width) if col not in pivot_set)
        for fill in product((0, 1), repeat=len(free_slots)):
            rows = [1 << (width - 1 - p) for p in pivots]
            for bit, (i, col) in zip(fill, free_slots):
                if bit:
                    rows[i] |= 1 << (width - 1 - col)
            yield tuple(rows)


def count_vector_subspaces(width: int, k: int) -> int:
    """Number of k-dim subspaces of Z_2^width, counted one canonical form at a time."""
    if width > 8:
        raise CapacityError(f"brute-force subspace counting is capped at width 8, got {width}")
    return sum(1 for _ in iter_rref_forms(width, k))


def random_vector(n: int, rng: np.random.Generator) -> GF2Vector:
    return GF2Vector(int(rng.integers(0, 1 << (2 * n), dtype=np.uint64)), n)


__all__ = [
    "GF2Vector",
    "IsotropicSubspace",
    "QuotientMap",
    "Subspace",
    "SymplecticBasis",
    "SymplecticMap",
    "all_vectors",
    "canonicalize",
    "complete_symplectic_pairs",
    "count_vector_subspaces",
    "enumerate_isotropic",
    "extend_to_symplectic_basis",
    "intersect",
    "isotropic_from_rows",
    "parity",
    "parity_table",
    "perp",
    "quotient_reduce",
    "rref",
    "solve_linear",
    "sp_bits",
    "span",
    "swap_halves",
    "symplectic_product",
    "zero_subspace",
]
