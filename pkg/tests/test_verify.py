import pytest

from pauli_lab.core.errors import ContractError
from pauli_lab.verify.suites import SUITE_NAMES, SuiteContext, run_suite


@pytest.fixture
def small():
    return SuiteContext(n_max=2, samples=20_000, mixing_trials=100, walks=20_000)


def statuses(report):
    return {c.name: c.status for c in report.checks}


def test_formulas(small):
    report = run_suite("formulas", small)
    assert report.passed
    found = statuses(report)
    assert found["level_sizes_n2"] == "pass"
    assert found["gw_degree_n2"] == "pass-with-note"
    assert "question_count_n4" not in found


def test_phases(small):
    report = run_suite("phases", small)
    assert report.passed
    assert set(statuses(report)) == {"phase_w_matrix_n2", "phase_exponent_n2", "cocycle_n2", "outcome_projectors_n2"}


def test_spectra(small):
    report = run_suite("spectra", small)
    assert report.passed
    found = statuses(report)
    assert found["gw_ratio_n2"] == "pass"
    assert found["theta_s2"] == "pass"


def test_unknown_suite(small):
    with pytest.raises(ContractError):
        run_suite("everything", small)


@pytest.mark.slow
def test_everything_at_one_qubit():
    report = run_suite("all", SuiteContext(n_max=1, samples=20_000, mixing_trials=100, walks=20_000))
    assert report.passed
    assert {c.suite for c in report.checks} == set(SUITE_NAMES)


@pytest.mark.slow
def test_games_at_two_qubits(small):
    report = run_suite("games", small)
    assert report.passed
    assert statuses(report)["pval_l2"] == "pass"
