import math

import networkx as nx
import numpy as np
import pytest

from pauli_lab.core.errors import CapacityError, CertificateError, ContractError, UnsupportedCaseError
from pauli_lab.core.graphs import LabeledGraph, build_b_n2, build_gw, build_gw_prime
from pauli_lab.core.spectra import (
    b_n2_bounds,
    bbt_analysis,
    bipartite_spectrum,
    closed_form_report,
    distinct_values,
    dual_polar_eigenvalues,
    gw_closed_form,
    gw_prime_closed_form,
    half_graph_lambda,
    intersection_array,
    mixing_check,
    random_mixing_trials,
    snap_integers,
    spectral_parameter,
    spectrum,
    t_value,
)


@pytest.fixture(scope="module")
def petersen():
    g = nx.petersen_graph()
    return LabeledGraph("petersen", list(g.nodes), nx.to_numpy_array(g, dtype=np.int8).astype(bool))


def test_triangle_spectrum():
    report = spectrum(build_gw_prime(2), n=2)
    assert report.eigenvalues == pytest.approx([2.0, -1.0, -1.0])
    assert report.integral
    assert report.spectral_parameter == pytest.approx(1.0)
    assert report.spectral_ratio == pytest.approx(0.5)
    assert report.multiplicities() == [(2.0, 1), (-1.0, 2)]


def test_petersen_spectrum(petersen):
    report = spectrum(petersen)
    assert distinct_values(report.eigenvalues) == pytest.approx([3.0, 1.0, -2.0])
    assert report.spectral_parameter == pytest.approx(2.0)


@pytest.mark.slow
def test_gw_spectrum_matches_closed_form():
    report = spectrum(build_gw(4), n=4)
    assert distinct_values(report.eigenvalues) == pytest.approx([float(v) for v in gw_closed_form(4)])
    assert report.max_eigenvalue == pytest.approx(56.0)
    prime = spectrum(build_gw_prime(4), n=4)
    assert distinct_values(prime.eigenvalues) == pytest.approx([float(v) for v in gw_prime_closed_form(4)])


def test_snap_and_parameter_helpers():
    snapped, integral = snap_integers(np.array([1.0000000001, -2.4]))
    assert snapped[0] == 1.0
    assert not integral
    assert spectral_parameter([3.0]) == 3.0
    assert spectral_parameter([]) == 0.0


def test_intersection_array():
    arr = intersection_array(2)
    assert arr.b == (6, 4, 0)
    assert arr.c == (0, 1, 3)
    assert arr.a == (0, 1, 3)


@pytest.mark.parametrize("n,expected", [
    (2, [2, -1]),
    (3, [6, 1, -3]),
    (4, [14, 5, -1, -7]),
])
def test_gw_prime_closed_form(n, expected):
    assert gw_prime_closed_form(n) == expected


def test_gw_closed_form():
    assert gw_closed_form(2) == [2, -1]
    assert gw_closed_form(4) == [56, 14, 2, -4]
    with pytest.raises(ContractError):
        gw_closed_form(3)


def test_principal_eigenvalue_is_the_valency():
    for m in range(1, 7):
        for i in (0, 1):
            column = dual_polar_eigenvalues(m, i)
            assert column[0] == (1 if i == 0 else 2 * ((1 << m) - 1))


def test_recurrence_outside_shipped_indices():
    with pytest.raises(UnsupportedCaseError):
        dual_polar_eigenvalues(6, 2)
    with pytest.raises(ContractError):
        dual_polar_eigenvalues(3, 4)


@pytest.mark.parametrize("n,expected", [(2, 1), (4, 14)])
def test_half_graph_lambda(n, expected):
    assert half_graph_lambda(n) == expected


def test_closed_form_report_notes_erratum():
    report = closed_form_report("gwp", 4)
    assert report.method == "closed-form"
    assert report.spectral_parameter == pytest.approx(7.0)
    assert report.spectral_ratio == pytest.approx(0.5)
    assert report.notes


def test_bbt_analysis_at_three():
    result = bbt_analysis(3)
    assert result.delta_sq == pytest.approx(21.0)
    assert result.delta_sq_formula == 21
    assert result.matches
    assert result.biregular
    assert (result.left_degree, result.right_degree) == (7, 3)
    assert result.ratio_constant <= 8
    with pytest.raises(CapacityError):
        bbt_analysis(5)


def test_bipartite_spectrum_is_symmetric():
    b = build_b_n2(3)
    report = bipartite_spectrum(b, n=3)
    assert report.vertex_count == 135 + 315
    assert report.max_eigenvalue == pytest.approx(math.sqrt(21))
    assert report.eigenvalues[-1] == pytest.approx(-math.sqrt(21))


@pytest.mark.parametrize("n", range(4, 21))
def test_bound_arithmetic(n):
    report = b_n2_bounds(n)
    assert report.holds
    assert report.terms["summation_lhs"] <= report.terms["summation_rhs"]


def test_bound_arithmetic_range():
    with pytest.raises(ContractError):
        b_n2_bounds(3)


def test_mixing_on_whole_vertex_set():
    g = build_gw_prime(2)
    result = mixing_check(g, [0, 1, 2], [0, 1, 2], lam=1.0)
    assert result.lhs == pytest.approx(0.0)
    assert not result.violated


def test_random_mixing_trials(petersen):
    violations, worst = random_mixing_trials(petersen, lam=2.0, trials=300, seed=5)
    assert violations == 0
    assert worst <= 1.0 + 1e-9


def test_random_bipartite_mixing_trials():
    b = build_b_n2(3)
    result = bbt_analysis(3, graph=b)
    violations, _ = random_mixing_trials(b, lam=math.sqrt(result.lambda_sq), trials=100, seed=9, bipartite=True)
    assert violations == 0


def test_mixing_subset_out_of_range():
    with pytest.raises(ContractError):
        mixing_check(build_gw_prime(2), [0, 3], [0], lam=1.0)


def test_t_value():
    assert t_value(12, 15, 60) == pytest.approx(math.log(1.25) / math.log(60))
    assert t_value(12, 15, 60) == pytest.approx(0.0545, abs=1e-4)
    with pytest.raises(CertificateError):
        t_value(15, 12, 60)
    with pytest.raises(ContractError):
        t_value(0, 1, 60)
