from pathlib import Path

import pytest

from pauli_lab.core.errors import ContractError, DimensionMismatchError, IsotropyError
from pauli_lab.core.fixtures import (
    format_outcome,
    format_payload,
    format_subspace,
    parse_outcome,
    parse_subspace,
    read_outcomes,
    read_subspaces,
    write_certificate,
    write_outcomes,
    write_subspaces,
)
from pauli_lab.core.gf2 import enumerate_isotropic, zero_subspace
from pauli_lab.core.lattice import Measurement, Outcome, consistent, disagreement_count, outcomes

OUTCOMES = Path(__file__).parent / "fixtures" / "outcomes"


def test_subspace_lines():
    assert format_subspace(zero_subspace(2)) == "-"
    assert parse_subspace("-", 2) == zero_subspace(2)
    s = parse_subspace("8,4", 2)
    assert s.rows == (8, 4)
    assert format_subspace(s) == "8,4"


def test_outcome_lines():
    o = parse_outcome("8,1 10", 2)
    assert o.values == (1, 0)
    assert format_outcome(o) == "8,1 10"
    zero = Outcome(Measurement(zero_subspace(2)), ())
    assert format_outcome(zero) == "- -"
    assert parse_outcome("- -", 2) == zero


@pytest.mark.parametrize("line", ["8,4", "8,4 0x", "8,4 00 extra"])
def test_malformed_outcome_lines(line):
    with pytest.raises(DimensionMismatchError):
        parse_outcome(line, 2)


def test_read_every_one_qubit_outcome():
    n, items = read_outcomes(str(OUTCOMES / "n1_all.txt"))
    assert n == 1
    assert len(items) == 6
    measurements = {o.base for o in items}
    assert len(measurements) == 3
    assert all(len(outcomes(m)) == 2 for m in measurements)


def test_consistent_fixture():
    n, (a, b) = read_outcomes(str(OUTCOMES / "n2_consistent.txt"))
    assert n == 2
    assert consistent(a, b)


def test_inconsistent_fixture():
    _, (a, b) = read_outcomes(str(OUTCOMES / "n2_inconsistent.txt"))
    assert not consistent(a, b)
    assert disagreement_count(a, b) == 1


def test_non_canonical_rows_are_rejected():
    with pytest.raises(ContractError):
        read_outcomes(str(OUTCOMES / "n2_non_canonical.txt"))


def test_anticommuting_rows_are_rejected():
    with pytest.raises(IsotropyError):
        read_outcomes(str(OUTCOMES / "n1_anticommuting.txt"))


def test_missing_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("8,4 00\n")
    with pytest.raises(DimensionMismatchError):
        read_outcomes(str(path))


def test_subspace_file_round_trip(tmp_path):
    path = tmp_path / "out" / "l2.txt"
    level = enumerate_isotropic(2, 2)
    write_subspaces(str(path), 2, level)
    lines = path.read_text().splitlines()
    assert lines[0] == "n=2"
    assert len(lines) == 16
    n, read_back = read_subspaces(str(path))
    assert n == 2
    assert read_back == level


def test_outcome_and_certificate_files(tmp_path):
    _, items = read_outcomes(str(OUTCOMES / "n1_all.txt"))
    path = tmp_path / "copy.txt"
    write_outcomes(str(path), 1, items)
    assert read_outcomes(str(path))[1] == items
    cert = tmp_path / "certs" / "pval_n1.txt"
    write_certificate(str(cert), 1, [format_outcome(o) for o in items[::2]])
    assert cert.read_text().splitlines() == ["n=1", "2 0", "1 0", "3 0"]


def test_payload_formats():
    m = Measurement.from_strings("10|00", "01|00")
    o = Outcome(m, (0, 1))
    assert format_payload(m) == "8,4"
    assert format_payload(o) == "8,4 01"
    assert format_payload(((0, 1), (2, 3))) == "0|1|2|3"
    assert format_payload(7) == "7"
