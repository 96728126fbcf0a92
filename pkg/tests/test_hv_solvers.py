from fractions import Fraction
from itertools import combinations, product
from math import comb

import pytest

from pauli_lab.core.errors import CertificateError, ContractError
from pauli_lab.core.hv_solvers import (
    ContextualAssignment,
    PartialAssignment,
    hyperbolic_planes,
    no_complete_consistent,
    pval_exact,
    pval_level2,
    pval_spectral_bound,
    square_averaging,
    square_subspaces,
    stabilizer_alpha_theta,
    theta_sn,
    validate_partial_certificate,
)
from pauli_lab.core.lattice import Measurement, Outcome, consistent, get_lattice

BUDGET = 1_000_000

XI_IX = Measurement.from_strings("10|00", "01|00")
XI_IZ = Measurement.from_strings("10|00", "00|01")


def test_partial_assignment_rejects_inconsistent_insert():
    partial = PartialAssignment(2, {XI_IX: Outcome(XI_IX, (0, 0))})
    partial.insert(XI_IZ, Outcome(XI_IZ, (0, 1)))
    assert len(partial) == 2
    assert partial.pval() == Fraction(2, 15)
    with pytest.raises(ContractError):
        PartialAssignment(2, {XI_IX: Outcome(XI_IX, (0, 0)), XI_IZ: Outcome(XI_IZ, (1, 0))})


def test_partial_assignment_needs_matching_maximal_base():
    partial = PartialAssignment(2)
    with pytest.raises(ContractError):
        partial.insert(XI_IX, Outcome(XI_IZ, (0, 0)))
    line = Measurement.from_strings("10|00")
    with pytest.raises(ContractError):
        partial.insert(line, Outcome(line, (0,)))


def test_contextual_assignment(lattice2, rng):
    constant = ContextualAssignment.constant(2)
    assert len(constant.as_outcomes()) == 15
    assert constant.value_table().shape == (15, 16)
    drawn = ContextualAssignment.random(2, rng)
    rebuilt = ContextualAssignment.from_outcomes(2, {o.base: o for o in drawn.as_outcomes()})
    assert rebuilt == drawn
    assert drawn.outcome(lattice2.maximal[4]).code == drawn.choices[4]


@pytest.mark.parametrize("choices", [(0,) * 14, (4,) + (0,) * 14])
def test_contextual_assignment_validation(choices):
    with pytest.raises(ContractError):
        ContextualAssignment(2, choices)


def test_contextual_assignment_is_total():
    with pytest.raises(ContractError):
        ContextualAssignment.from_outcomes(2, {XI_IX: Outcome(XI_IX, (0, 0))})


def test_certificate_validation():
    with pytest.raises(CertificateError):
        validate_partial_certificate(2, [Outcome(XI_IX, (0, 0)), Outcome(XI_IX, (1, 0))])
    with pytest.raises(CertificateError):
        validate_partial_certificate(2, [Outcome(XI_IX, (0, 0)), Outcome(XI_IZ, (1, 0))])
    ok = validate_partial_certificate(2, [Outcome(XI_IX, (0, 0))])
    assert len(ok) == 1


def test_pval_one_qubit():
    report = pval_exact(1, BUDGET)
    assert report.proof_closed
    assert report.optimum == pytest.approx(1.0)
    assert report.optimum_exact == "3/3"


def test_pval_two_qubits():
    report = pval_exact(2, BUDGET)
    assert report.proof_closed
    assert report.optimum_exact == "12/15"
    assert report.lower == report.upper == pytest.approx(0.8)
    assert report.details["alpha_lower"] == 12
    assert report.details["maximal_count"] == 15
    assert len(report.certificate) == 12


def test_no_complete_consistent():
    assert no_complete_consistent(1).complete_consistent_exists
    proof = no_complete_consistent(3)
    assert proof.base_n == 2
    assert proof.closed
    assert not proof.complete_consistent_exists
    with pytest.raises(ContractError):
        no_complete_consistent(0)


def test_every_larger_domain_fails():
    assert no_complete_consistent(1).failed_domains == []
    proof = no_complete_consistent(2, BUDGET)
    assert proof.domain_size == proof.alpha + 1 == 13
    domains = [d.measurements for d in proof.failed_domains]
    assert len(domains) == comb(15, 13)
    assert set(domains) == set(combinations(range(15), 13))
    for failed in proof.failed_domains:
        assert set(failed.contradiction) <= set(failed.measurements)
        assert failed.alpha < len(failed.contradiction)


@pytest.mark.slow
def test_contradictions_have_no_consistent_pick():
    lattice = get_lattice(2)
    cores = {d.contradiction for d in no_complete_consistent(2, BUDGET).failed_domains}
    for core in cores:
        choices = [[lattice.outcome(i, c) for c in range(lattice.outcome_count)] for i in core]
        for pick in product(*choices):
            assert any(not consistent(a, b) for a, b in combinations(pick, 2))


def test_hyperbolic_planes_and_squares():
    assert len(hyperbolic_planes(1)) == 1
    assert len(hyperbolic_planes(2)) == 20
    squares = square_subspaces(2)
    assert len(squares) == 20
    assert all(s.dim == 2 for s in squares)
    with pytest.raises(ContractError):
        square_subspaces(1)


@pytest.mark.slow
def test_square_averaging_at_three():
    result = square_averaging(3)
    assert result.uniform
    assert result.local_alpha == 12
    assert result.upper_bound == Fraction(4, 5)


def test_square_averaging_with_known_local_optimum():
    assert square_averaging(3, local_alpha=12).upper_bound == Fraction(4, 5)


def test_pval_level2_at_two_is_pval():
    report = pval_level2(2, BUDGET)
    assert report.problem == "pval_level2"
    assert report.optimum_exact == "12/15"


@pytest.mark.slow
def test_pval_level2_at_three():
    report = pval_level2(3, BUDGET)
    assert report.details["upper_exact"] == "4/5"
    assert report.lower <= report.upper
    with pytest.raises(ContractError):
        pval_level2(4, BUDGET)


def test_pval_spectral_bound():
    assert pval_spectral_bound(3) == pytest.approx(4 * 12 / 21)


@pytest.mark.parametrize("n,theta", [(1, 3), (2, 15)])
def test_theta_sn(n, theta):
    cert = theta_sn(n, samples=20, seed=1)
    assert cert.theta == theta
    assert cert.cover_size == theta
    assert cert.cover_valid
    assert cert.max_deviation < 1e-9


def test_stabilizer_alpha_theta():
    ratio = stabilizer_alpha_theta(2, BUDGET)
    assert ratio.ratio_interval == pytest.approx((0.8, 0.8))
