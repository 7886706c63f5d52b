import logging
import math

import numpy as np
import pytest

from ramseypy import log
from ramseypy.exceptions import InvalidParameter, UnsupportedRegime, UnsupportedState
from ramseypy.core import randomized
from ramseypy.core.randomized import RcConfig
from ramseypy.core.dynamics import BasisPair
from ramseypy.core.estimation import ProtocolConfig
from ramseypy.core.noise import SpectralModel
from ramseypy.core.numerics import log_grid
from . import fdv

log.setup_logging(default_level="DEBUG")


@pytest.fixture
def gaussian_model():
    return SpectralModel(cutoff="gaussian")


@pytest.fixture
def small_grid():
    return log_grid(0.05, 0.5, 6)


@pytest.mark.parametrize(
    "kwargs",
    [dict(eta=0.0), dict(K=0), dict(seed=-1), dict(dimension=4), dict(epsilon=-1.0)],
)
def test_rc_config_rejects(kwargs):
    with pytest.raises(InvalidParameter):
        RcConfig(**kwargs)


def test_rc_config_from_prms():
    rc = RcConfig.from_prms(K=5, eta=None)
    assert rc.K == 5
    assert rc.eta == 0.1
    assert rc.dimension == 1


def test_epsilon_for(gaussian_model):
    assert RcConfig(eta=0.1).epsilon_for(gaussian_model) == pytest.approx(10.0)
    assert RcConfig(eta=0.1, epsilon=10.0).epsilon_for(gaussian_model) == 10.0
    with pytest.raises(InvalidParameter):
        RcConfig(eta=0.1, epsilon=5.0).epsilon_for(gaussian_model)


def test_sample_layout_is_deterministic(gaussian_model):
    rc = RcConfig(eta=0.5, seed=3)
    first = randomized.sample_layout(5, rc, gaussian_model, index=2)
    again = randomized.sample_layout(5, rc, gaussian_model, index=2)
    other = randomized.sample_layout(5, rc, gaussian_model, index=3)
    assert np.array_equal(first.positions, again.positions)
    assert not np.array_equal(first.positions, other.positions)
    assert first.positions.shape == (5, 1)
    with pytest.raises(InvalidParameter):
        randomized.sample_layout(0, rc, gaussian_model)


def test_dimension_mismatch_is_rejected(gaussian_model):
    with pytest.raises(InvalidParameter):
        randomized.spatial_means(gaussian_model, RcConfig(dimension=2), 0.1)


def test_spatial_means_at_zero_time(gaussian_model):
    means = randomized.spatial_means(gaussian_model, RcConfig(), 0.0)
    assert means.kappa0_bar == means.kappa1_bar == means.xi_bar == 0.0
    assert means.kappa0_const == pytest.approx(fdv.kappa0_const_gauss_s3)


def test_spatial_means_short_time_constants(gaussian_model):
    eta, tau = 0.05, 0.01
    means = randomized.spatial_means(gaussian_model, RcConfig(eta=eta), tau)
    s = gaussian_model.ohmicity
    assert means.kappa0_const == pytest.approx(fdv.kappa0_const_gauss_s3)
    assert means.xi_const == pytest.approx(math.gamma(s / 2 + 1) / 24.0)
    assert means.kappa0_bar / tau ** 2 == pytest.approx(means.kappa0_const, rel=1e-2)
    assert means.xi_bar / (eta ** (s + 2) * tau ** 3) == pytest.approx(means.xi_const, rel=1e-2)
    assert 0.0 < means.kappa1_bar < means.kappa0_bar


def test_spatial_means_planar(gaussian_model):
    model = gaussian_model.with_(dimension=2)
    means = randomized.spatial_means(model, RcConfig(eta=0.3, dimension=2), 0.2)
    assert means.xi_const is None
    assert 0.0 < means.kappa1_bar < means.kappa0_bar


def test_short_time_second_cumulants_match_integrals(gaussian_model):
    rc = RcConfig(eta=0.05)
    tau = 0.01
    closed = randomized.short_time_second_cumulants(gaussian_model, rc, tau)
    numeric = randomized.second_cumulant_integrals(gaussian_model, rc, tau)
    assert numeric.F1 == pytest.approx(closed.F1, rel=0.03)
    assert numeric.G1 == pytest.approx(closed.G1, rel=0.03)
    assert numeric.F2 == pytest.approx(closed.F2, rel=0.05)
    assert numeric.G2 == pytest.approx(closed.G2, rel=0.05)
    assert numeric.FG2 == pytest.approx(closed.FG2, rel=0.05)


def test_second_cumulants_reject(gaussian_model):
    planar = gaussian_model.with_(dimension=3)
    with pytest.raises(UnsupportedRegime):
        randomized.second_cumulant_integrals(planar, RcConfig(dimension=3), 0.1)
    with pytest.raises(UnsupportedRegime):
        randomized.short_time_second_cumulants(SpectralModel(), RcConfig(), 0.1)
    zero = randomized.second_cumulant_integrals(gaussian_model, RcConfig(), 0.0)
    assert zero.F1 == zero.G2 == 0.0


def test_combine_single_flip_has_no_decay_variance():
    cumulants = randomized.SpatialSecondCumulants(0.1, 0.1, 1.0, 1.0, 1.0, 1.0, 1.0)
    var_gamma, var_phi0, _ = cumulants.combine(BasisPair([1, 1, 1, 1], [-1, 1, 1, 1]))
    assert var_gamma == 0.0
    assert var_phi0 > 0.0


def test_averaged_element_factor_diagonal_pair(gaussian_model):
    ones = np.ones(4, dtype=int)
    factor = randomized.averaged_element_factor(
        gaussian_model, RcConfig(), BasisPair(ones, ones), 0.3, 0.2
    )
    assert factor == pytest.approx(1.0)


def test_averaged_element_factor_single_flip(gaussian_model):
    rc = RcConfig(eta=0.2)
    t = 0.3
    pair = BasisPair([1, 1, 1, 1], [-1, 1, 1, 1])
    means = randomized.spatial_means(gaussian_model, rc, t)
    factor = randomized.averaged_element_factor(
        gaussian_model, rc, pair, 0.0, t, second_order=False
    )
    assert abs(factor) == pytest.approx(math.exp(-4.0 * means.kappa0_bar))
    assert np.angle(factor) == pytest.approx(-12.0 * means.xi_bar)


def test_validity_check(gaussian_model):
    rc = RcConfig(eta=0.1)
    assert randomized.validity_check(rc, 100, 0.01, gaussian_model).valid
    outside = randomized.validity_check(rc, 100, 0.1, gaussian_model)
    assert not outside.valid
    assert outside.cond_i == pytest.approx(0.1)


def test_required_samples():
    value = randomized.required_samples(2.0, 0.5, fdv.two_sided_epsilon)
    assert value == fdv.required_samples_expected
    assert randomized.required_samples(0.0, 0.5, 0.05) == 1
    with pytest.raises(InvalidParameter):
        randomized.required_samples(2.0, 0.0, 0.05)
    with pytest.raises(InvalidParameter):
        randomized.required_samples(2.0, 0.5, 1.0)


def test_ghz_rc_is_deterministic(gaussian_model, small_grid):
    config = ProtocolConfig(4, state="ghz", model=gaussian_model)
    rc = RcConfig(eta=0.5, K=3)
    first = randomized.ghz_rc(config, rc, small_grid)
    again = randomized.ghz_rc(config, rc, small_grid)
    assert np.array_equal(first.delta_b, again.delta_b)
    assert np.all(np.isfinite(first.delta_b))
    assert first.dispersion is not None
    assert len(first.reference) == len(small_grid)


def test_ghz_rc_single_layout_warns(gaussian_model, small_grid, caplog):
    config = ProtocolConfig(4, state="ghz", model=gaussian_model)
    with caplog.at_level(logging.WARNING):
        curve = randomized.ghz_rc(config, RcConfig(eta=0.5, K=1), small_grid)
    assert curve.dispersion is None
    assert "single layout" in caplog.text


def test_oats_rc_single_layout_has_no_dispersion(gaussian_model, small_grid, caplog):
    config = ProtocolConfig(4, state="oats", model=gaussian_model)
    rc = RcConfig(eta=0.5, K=1)
    assert rc.K == 1
    with caplog.at_level(logging.WARNING):
        curve = randomized.oats_rc(config, rc, small_grid)
    assert curve.dispersion is None
    assert "single layout" in caplog.text


def test_oats_rc_is_deterministic(gaussian_model, small_grid):
    config = ProtocolConfig(4, state="oats", model=gaussian_model)
    rc = RcConfig(eta=0.5, K=2)
    first = randomized.oats_rc(config, rc, small_grid)
    again = randomized.oats_rc(config, rc, small_grid)
    assert np.array_equal(first.delta_b, again.delta_b)
    assert first.tau_opt > 0.0


def test_rc_curves_reject_states(gaussian_model):
    css = ProtocolConfig(4, state="css", model=gaussian_model)
    with pytest.raises(UnsupportedState):
        randomized.ghz_rc(css, RcConfig())
    with pytest.raises(UnsupportedState):
        randomized.oats_rc(css, RcConfig())
    with pytest.raises(UnsupportedState):
        randomized.reference_time_range(css)


@pytest.mark.parametrize("grid", [[0.1], [0.2, 0.1], [0.0, 0.1]])
def test_time_grid_rejects(gaussian_model, grid):
    config = ProtocolConfig(4, state="ghz", model=gaussian_model)
    with pytest.raises(InvalidParameter):
        randomized.ghz_rc(config, RcConfig(K=1), grid)


def test_reference_time_range_ghz(gaussian_model):
    n = 100
    config = ProtocolConfig(n, state="ghz", model=gaussian_model)
    lo, hi = randomized.reference_time_range(config)
    tau = 1.0 / math.sqrt(2.0 * 0.25 * n * fdv.kappa0_const_gauss_s3)
    assert math.sqrt(lo * hi) == pytest.approx(tau, rel=1e-3)
    assert hi / lo == pytest.approx(900.0)


def test_ghz_reference_at_small_time(gaussian_model):
    config = ProtocolConfig(10, state="ghz", model=gaussian_model)
    t = 1.0e-3
    value = randomized.ghz_reference(config, t)
    assert value == pytest.approx(1.0 / (10 * math.sqrt(t)), rel=1e-4)
