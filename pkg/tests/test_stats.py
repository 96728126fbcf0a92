from fractions import Fraction

import pytest
from pydantic import ValidationError

from pauli_lab.core.stats import exact_estimate, mc_estimate, uniformity_pvalue, wilson_interval
from pauli_lab.models.reports import ValueEstimate


def test_wilson_interval_brackets_the_mean():
    low, high = wilson_interval(50, 100)
    assert low < 0.5 < high
    assert wilson_interval(0, 10)[0] == pytest.approx(0.0, abs=1e-12)
    assert wilson_interval(10, 10)[1] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        wilson_interval(0, 0)


def test_estimates():
    exact = exact_estimate(Fraction(4, 5))
    assert exact.exact == "4/5"
    assert exact.contains(0.8)
    mc = mc_estimate(450, 1000, seed=1)
    assert mc.contains(0.45)
    assert not mc.contains(0.9)


def test_exact_values_carry_no_interval():
    with pytest.raises(ValidationError):
        ValueEstimate(value=1.0, exact="1/1", ci_low=0.9)


def test_uniformity():
    assert uniformity_pvalue([250, 250, 250, 250]) == pytest.approx(1.0)
    assert uniformity_pvalue([1000, 0, 0, 0]) < 1e-6
