"""
Tests for information measures, Blahut-Arimoto and the rate bounds.

Covers:
- entropy / mutual information / divergences on hand-computed laws
- channel capacity of BSCs and channels with unused outputs
- capacity bounds, including tightness at p = 0
- Plotkin and Elias-Bassalygo thresholds
"""
import math

import numpy as np
import pytest

from awtc.channel import Dmc
from awtc.errors import DomainError
from awtc.infotheory import (
    JointPmf,
    Pmf,
    achievable_rates,
    blahut_arimoto,
    capacity_bounds,
    conditional_entropy,
    eb_threshold,
    entropy,
    extended_relative_entropy,
    fig1_rows,
    h2,
    information_density,
    joint_from_channel,
    linear_failure_region,
    mutual_information,
    output_marginal,
    plotkin_bound,
    relative_entropy,
    renyi_divergence,
)

# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------


def test_binary_entropy():
    assert h2(0.5) == 1.0
    assert h2(0.0) == h2(1.0) == 0.0
    assert h2(0.11) == pytest.approx(0.4999162, abs=1e-6)
    with pytest.raises(DomainError):
        h2(1.2)


def test_entropy_and_pmf_validation():
    assert entropy(Pmf.uniform(8)) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        Pmf(np.array([0.5, 0.6]))


def test_mutual_information_extremes():
    assert mutual_information(JointPmf(np.eye(4) / 4)) == pytest.approx(2.0)
    independent = JointPmf(np.full((2, 3), 1 / 6))
    assert mutual_information(independent) == pytest.approx(0.0, abs=1e-12)
    assert conditional_entropy(JointPmf(np.full((2, 2), 0.25))) == pytest.approx(1.0)


def test_relative_entropy_support():
    p = Pmf(np.array([0.5, 0.5]))
    q = Pmf(np.array([1.0, 0.0]))
    assert relative_entropy(p, q) == math.inf
    assert relative_entropy(q, p) == pytest.approx(1.0)
    partial = extended_relative_entropy(np.array([0.25, 0.0]), np.array([0.5, 0.5]))
    assert partial == pytest.approx(-0.25)


def test_renyi_order_two():
    p = Pmf(np.array([0.75, 0.25]))
    q = Pmf.uniform(2)
    expected = math.log2(0.75**2 / 0.5 + 0.25**2 / 0.5)
    assert renyi_divergence(p, q, 2.0) == pytest.approx(expected)
    with pytest.raises(DomainError):
        renyi_divergence(p, q, 1.0)


def test_channel_laws(bsc03):
    qu = Pmf(np.array([0.8, 0.2]))
    assert output_marginal(qu, bsc03).probs == pytest.approx([0.62, 0.38])
    joint = joint_from_channel(Pmf.uniform(2), bsc03)
    assert mutual_information(joint) == pytest.approx(1 - h2(0.3))
    assert information_density(Pmf.uniform(2), bsc03, [0, 1], [0, 1]) == pytest.approx(
        2 * math.log2(0.7 / 0.5)
    )


# ---------------------------------------------------------------------------
# Capacity
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("p", [0.0, 0.05, 0.11, 0.3, 0.5])
def test_blahut_arimoto_bsc(p):
    capacity, law = blahut_arimoto(Dmc.bsc(p))
    assert capacity == pytest.approx(1 - h2(p), abs=1e-8)
    assert law.probs == pytest.approx([0.5, 0.5], abs=1e-4)


def test_blahut_arimoto_ignores_unused_outputs():
    w = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    capacity, _ = blahut_arimoto(w)
    assert capacity == pytest.approx(1.0, abs=1e-9)


def test_blahut_arimoto_z_channel():
    # Z channel with flip 1/2: capacity log2(5/4)
    capacity, law = blahut_arimoto(np.array([[1.0, 0.0], [0.5, 0.5]]))
    assert capacity == pytest.approx(math.log2(1.25), abs=1e-8)
    assert law.probs[1] == pytest.approx(0.4, abs=1e-3)


def test_blahut_arimoto_rejects_non_stochastic():
    with pytest.raises(DomainError):
        blahut_arimoto(np.array([[0.5, 0.2]]))


# ---------------------------------------------------------------------------
# Rate bounds
# ---------------------------------------------------------------------------


def test_bounds_tight_at_p_zero():
    rows = fig1_rows(0.0, 101)
    assert len(rows) == 101
    for row in rows:
        assert row["lower"] == pytest.approx(1 - row["r"], abs=1e-9)
        assert row["upper"] == pytest.approx(1 - row["r"], abs=1e-9)


def test_lower_never_exceeds_upper():
    for p in np.linspace(0.0, 0.5, 12):
        for r in np.linspace(0.0, 1.0, 12):
            lower, upper = capacity_bounds(float(p), float(r))
            assert lower <= upper + 1e-12


def test_bounds_domain():
    with pytest.raises(DomainError):
        capacity_bounds(0.6, 0.1)
    with pytest.raises(DomainError):
        capacity_bounds(0.1, 1.1)


def test_eb_threshold_below_plotkin():
    for r in np.linspace(0.01, 0.49, 49):
        assert eb_threshold(float(r)) <= 1 - 2 * r + 1e-12
    assert eb_threshold(0.0) == pytest.approx(1.0)
    assert eb_threshold(0.5) == eb_threshold(0.9) == 0.0
    with pytest.raises(DomainError):
        eb_threshold(-0.1)


def test_plotkin_bound():
    assert plotkin_bound(0.25) == 0.5
    with pytest.raises(DomainError):
        plotkin_bound(0.0)


def test_linear_failure_region():
    # H2(0.05) ~ 0.286 < r = 0.4 and the capacity lower bound is positive
    assert linear_failure_region(0.05, 0.4)
    assert not linear_failure_region(0.3, 0.1)
    # no positive capacity: nothing to miss
    assert not linear_failure_region(0.11, 0.6)


def test_achievable_rates():
    rate, key_rate = achievable_rates(0.0, 0.25, 0.05, 0.01)
    assert rate == pytest.approx(0.7)
    assert key_rate == pytest.approx(0.26)
    with pytest.raises(DomainError):
        achievable_rates(0.0, 0.25, 0.0, 0.01)
