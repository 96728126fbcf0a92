# core/fixtures.py
"""
Text formats for subspaces and outcomes.

    n=<int>
    <hex row>,<hex row>,...            (subspace file)
    <hex row>,<hex row>,... <bits>     (outcome / certificate file)

Rows must be in canonical (reduced row echelon) form so the value bits line up
with the canonical basis. The zero subspace is written as "-".
"""
import logging
import os
from typing import Any, Iterable, List, Sequence, Tuple

from .errors import ContractError, DimensionMismatchError
from .gf2 import IsotropicSubspace, Subspace, decode_hex, encode_hex, isotropic_from_rows
from .lattice import Measurement, Outcome

logger = logging.getLogger(__name__)

EMPTY = "-"


def format_subspace(s: Subspace) -> str:
    return ",".join(encode_hex(r, s.n) for r in s.rows) or EMPTY


def parse_subspace(text: str, n: int) -> IsotropicSubspace:
    text = text.strip()
    if text == EMPTY:
        return isotropic_from_rows((), n)
    rows = tuple(decode_hex(part, n) for part in text.split(","))
    sub = isotropic_from_rows(rows, n)
    if sub.rows != rows:
        logger.error(f"Non-canonical subspace line {text!r}")
        raise ContractError(f"subspace rows {text!r} are not in canonical form")
    return sub


def format_outcome(o: Outcome) -> str:
    return f"{format_subspace(o.base.subspace)} {o.bit_string() or EMPTY}"


def parse_outcome(text: str, n: int) -> Outcome:
    parts = text.split()
    if len(parts) != 2:
        raise DimensionMismatchError(f"outcome line needs '<rows> <bits>', got {text!r}")
    base = Measurement(parse_subspace(parts[0], n))
    bits = "" if parts[1] == EMPTY else parts[1]
    if any(ch not in "01" for ch in bits):
        raise DimensionMismatchError(f"outcome bits must be 0/1, got {bits!r}")
    return Outcome(base, tuple(int(ch) for ch in bits))


def format_payload(v: Any) -> str:
    """Vertex payload for adjacency sidecars: outcomes, measurements and walks."""
    if isinstance(v, Outcome):
        return format_outcome(v)
    if isinstance(v, Measurement):
        return format_subspace(v.subspace)
    if isinstance(v, (tuple, list)):
        return "|".join(format_payload(x) for x in v)
    return str(v)


def _read_lines(path: str) -> Tuple[int, List[str]]:
    with open(path, "r", encoding="utf-8") as f:
        lines = [line.strip() for line in f if line.strip() and not line.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise DimensionMismatchError(f"{path}: first line must be 'n=<int>'")
    return int(lines[0][2:]), lines[1:]


def _write_lines(path: str, n: int, lines: Iterable[str]) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"n={n}\n")
        for line in lines:
            f.write(line + "\n")


def read_subspaces(path: str) -> Tuple[int, List[IsotropicSubspace]]:
    n, lines = _read_lines(path)
    return n, [parse_subspace(line, n) for line in lines]


def write_subspaces(path: str, n: int, subspaces: Sequence[Subspace]) -> None:
    _write_lines(path, n, (format_subspace(s) for s in subspaces))
    logger.info(f"Wrote {len(subspaces)} subspaces to {path}")


def read_outcomes(path: str) -> Tuple[int, List[Outcome]]:
    n, lines = _read_lines(path)
    return n, [parse_outcome(line, n) for line in lines]


def write_outcomes(path: str, n: int, items: Sequence[Outcome]) -> None:
    _write_lines(path, n, (format_outcome(o) for o in items))
    logger.info(f"Wrote {len(items)} outcomes to {path}")


def write_certificate(path: str, n: int, lines: Sequence[str]) -> None:
    """Certificates already carry formatted outcome lines."""
    _write_lines(path, n, lines)
    logger.info(f"Wrote certificate ({len(lines)} lines) to {path}")
