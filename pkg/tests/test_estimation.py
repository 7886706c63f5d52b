import math

import numpy as np
import pytest

from ramseypy import log
from ramseypy.exceptions import InvalidParameter, UnsupportedRegime, UnsupportedState
from ramseypy.core import estimation
from ramseypy.core.estimation import ProtocolConfig
from ramseypy.core.coefficients import ClusterCoefficients, TransitGeometry, decay_phase_map
from ramseypy.core.noise import SpectralModel
from ramseypy.core.numerics import fit_power_law
from ramseypy.parameters.internal_settings import get_headers_curve
from . import fdv

log.setup_logging(default_level="DEBUG")


@pytest.fixture
def css_config():
    return ProtocolConfig(100, state="css", model=SpectralModel())


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_qubits=10, state="dicke"),
        dict(n_qubits=1),
        dict(n_qubits=10, T=0.0),
        dict(n_qubits=10, state="oats", theta=4.0),
        dict(n_qubits=10, geometry=TransitGeometry.collective(4)),
    ],
)
def test_protocol_config_rejects(kwargs):
    with pytest.raises(InvalidParameter):
        ProtocolConfig(**kwargs)


def test_protocol_config_from_prms_and_with():
    config = ProtocolConfig.from_prms(model=SpectralModel(), N=8, regime="even-odd", x=0.5)
    assert config.geometry.regime == "even_odd"
    bigger = config.with_(n_qubits=12)
    assert bigger.geometry.n_qubits == 12
    assert bigger.geometry.x == 0.5
    positional = ProtocolConfig(4, geometry=TransitGeometry.from_positions(fdv.positions))
    with pytest.raises(InvalidParameter):
        positional.with_(n_qubits=6)


def test_angles():
    assert ProtocolConfig(10).angles() == (0.0, 0.0)
    config = ProtocolConfig(10, state="oats", theta=0.2)
    theta, beta = config.angles()
    assert theta == 0.2
    assert beta == pytest.approx(estimation.optimal_angles(10).beta_opt)


def test_css_reaches_standard_quantum_limit_at_short_times(css_config):
    t = 1.0e-4
    value = estimation.css_uncertainty(css_config, t)
    sql = 1.0 / math.sqrt(css_config.n_qubits * css_config.T * t)
    assert value == pytest.approx(sql, rel=1e-3)


def test_css_even_odd_and_dense_reduce_to_collective():
    n, chi, psi, b, t = 8, 0.05, 0.02, 0.3, 0.6
    collective = estimation.css_moments_collective(chi, psi, n, b, t)
    even_odd = estimation.css_moments_even_odd(chi, chi, psi, psi, n, b, t)
    dense = estimation.css_moments_dense(np.full((n, n), chi), np.full((n, n), psi), b, t)
    for moments in (even_odd, dense):
        assert moments.jy_mean == pytest.approx(collective.jy_mean, rel=1e-12)
        assert moments.jy2_mean == pytest.approx(collective.jy2_mean, rel=1e-12)
        assert moments.d_jy_mean_db == pytest.approx(collective.d_jy_mean_db, rel=1e-12)


def test_css_dense_matches_even_odd():
    n, b, t = 6, 0.2, 0.4
    cluster = ClusterCoefficients(t, 0.02, 0.008, 0.01, -0.004)
    chi, psi = decay_phase_map(cluster.dense(n))
    dense = estimation.css_moments_dense(chi, psi, b, t)
    even_odd = estimation.css_moments_even_odd(
        cluster.chi_s, cluster.chi_d, cluster.psi_s, cluster.psi_d, n, b, t
    )
    assert dense.jy_mean == pytest.approx(even_odd.jy_mean, rel=1e-12)
    assert dense.jy2_mean == pytest.approx(even_odd.jy2_mean, rel=1e-12)


@pytest.mark.parametrize("regime", ["collective", "even_odd"])
def test_oats_clustered_matches_dense(regime):
    n, theta, beta, b, t = 8, 0.3, 1.2, 0.2, 0.5
    if regime == "collective":
        cluster = ClusterCoefficients(t, 0.01, 0.01, 0.005, 0.005)
    else:
        cluster = ClusterCoefficients(t, 0.01, 0.004, 0.005, -0.002)
    chi, psi = decay_phase_map(cluster.dense(n, regime))
    dense = estimation.oats_moments(chi, psi, theta, beta, b, t)
    clustered = estimation.oats_moments_clustered(cluster, n, regime, theta, beta, b, t)
    assert clustered.jy_mean == pytest.approx(dense.jy_mean, rel=1e-10)
    assert clustered.jy2_mean == pytest.approx(dense.jy2_mean, rel=1e-10)


def test_oats_rejects():
    with pytest.raises(InvalidParameter):
        estimation.oats_moments(np.zeros((3, 3)), np.zeros((3, 3)), 0.1, 0.1, 0.0, 1.0)
    cluster = ClusterCoefficients(0.5, 0.01, 0.01, 0.0, 0.0)
    with pytest.raises(UnsupportedRegime):
        estimation.oats_moments_clustered(cluster, 4, "positions", 0.1, 0.1, 0.0, 1.0)


def test_ghz_is_not_a_curve_state():
    config = ProtocolConfig(10, state="ghz")
    with pytest.raises(UnsupportedState):
        estimation.delta_b(config, 0.1)
    with pytest.raises(UnsupportedState):
        estimation.css_uncertainty(config, 0.1)
    with pytest.raises(UnsupportedState):
        estimation.short_time_optimum(config)


def test_delta_b_rejects_nonpositive_time(css_config):
    with pytest.raises(InvalidParameter):
        estimation.delta_b(css_config, 0.0)


def test_optimal_angles_squeeze():
    n = 20
    result = estimation.optimal_angles(n)
    assert result.variance < n / 4
    assert 0.0 < result.beta_opt <= math.pi / 2
    assert result.variance == pytest.approx(estimation.oats_variance(n, result.theta_opt))
    assert estimation.oats_variance(n, result.theta_opt, 0.0) > result.variance
    with pytest.raises(InvalidParameter):
        estimation.optimal_angles(2)


def test_oats_variance_without_twist_is_projection_noise():
    assert estimation.oats_variance(10, 0.0, 0.3) == pytest.approx(2.5)


def test_propagate():
    moments = estimation.MomentPair(0.0, 4.0, 2.0)
    assert estimation.propagate(moments, 4.0) == pytest.approx(0.5)
    flat = estimation.MomentPair(0.0, 4.0, 0.0)
    assert estimation.propagate(flat, 4.0) == math.inf
    with pytest.raises(InvalidParameter):
        estimation.propagate(moments, 0.0)


def test_short_time_optimum_css(css_config):
    optimum = estimation.short_time_optimum(css_config)
    expected = 1.0 / (math.sqrt(fdv.chi0_sq_s3) * math.sqrt(css_config.n_qubits))
    assert optimum.tau_opt == pytest.approx(expected)
    positional = ProtocolConfig(4, geometry=TransitGeometry.from_positions(fdv.positions))
    with pytest.raises(UnsupportedRegime):
        estimation.short_time_optimum(positional)


def test_optimize_time_css_agrees_with_short_time():
    config = ProtocolConfig(1000, state="css", model=SpectralModel())
    curve = estimation.optimize_time(config)
    optimum = estimation.short_time_optimum(config)
    assert not curve.boundary
    assert curve.tau_opt == pytest.approx(optimum.tau_opt, rel=0.05)
    assert curve.delta_b_opt == pytest.approx(optimum.delta_b_opt, rel=0.05)


def test_suggest_time_range_falls_back():
    positional = ProtocolConfig(4, geometry=TransitGeometry.from_positions(fdv.positions))
    lo, hi = estimation.suggest_time_range(positional)
    assert lo < hi


def test_curve_to_frame(css_config):
    curve = estimation.optimize_time(css_config, t_range=(1e-3, 1.0), grid=12)
    frame = curve.to_frame(scale=2.0)
    h = get_headers_curve()
    assert list(frame.columns) == [h.time, h.delta_b]
    assert len(frame) == 12
    assert frame[h.delta_b].iloc[0] == pytest.approx(2.0 * curve.delta_b[0])


def test_asymptotic_annotations(css_config):
    notes = estimation.asymptotic_annotations(css_config)
    assert notes["tau_opt"] == pytest.approx(1.0 / math.sqrt(6.0 * 100))
    assert "theta_opt" in notes


@pytest.mark.slowtest
@pytest.mark.timeout(300)
def test_css_scaling_exponents():
    base = ProtocolConfig(1000, state="css", model=SpectralModel())
    points_tau, points_db = [], []
    for n in (1e3, 3e3, 1e4, 3e4, 1e5):
        curve = estimation.optimize_time(base.with_(n_qubits=int(n)))
        points_tau.append((n, curve.tau_opt))
        points_db.append((n, curve.delta_b_opt))
    assert fit_power_law(points_tau).exponent == pytest.approx(-0.5, abs=0.02)
    assert fit_power_law(points_db).exponent == pytest.approx(-0.25, abs=0.02)


@pytest.mark.slowtest
@pytest.mark.timeout(300)
def test_even_odd_optimum_near_optimal_transit():
    values = []
    xs = np.linspace(0.4, 1.1, 15)
    for x in xs:
        config = ProtocolConfig(
            10000, geometry=TransitGeometry.even_odd(10000, x), model=SpectralModel()
        )
        values.append(estimation.optimize_time(config).delta_b_opt)
    assert abs(xs[int(np.argmin(values))] - fdv.x_opt_s3) <= 0.1


def test_css_without_bath_phases_lies_below(css_config):
    for t in np.linspace(0.05, 1.5, 20):
        full = estimation.css_uncertainty(css_config, t)
        classical = estimation.css_uncertainty(css_config, t, quantum=False)
        assert classical <= full * (1 + 1e-12)
    t = 1.0e-4
    assert estimation.css_uncertainty(css_config, t, quantum=False) == pytest.approx(
        estimation.css_uncertainty(css_config, t), rel=1e-6
    )


def test_css_moments_without_bath_phases_zero_psi():
    geometry = TransitGeometry.from_positions(fdv.positions)
    config = ProtocolConfig(4, geometry=geometry, b=0.4, model=SpectralModel())
    t = 0.8
    chi, psi = decay_phase_map(estimation._coefficients_at(config, t))
    classical = estimation.css_moments(config, t, quantum=False)
    expected = estimation.css_moments_dense(chi, np.zeros_like(psi), config.b, t)
    assert classical.jy_mean == pytest.approx(expected.jy_mean, rel=1e-12)
    assert classical.jy2_mean == pytest.approx(expected.jy2_mean, rel=1e-12)


def test_concurrence_dips_reject():
    with pytest.raises(UnsupportedRegime):
        estimation.concurrence_dips(
            ProtocolConfig(10, geometry=TransitGeometry.even_odd(10, 1.0), model=SpectralModel())
        )
    with pytest.raises(UnsupportedState):
        estimation.concurrence_dips(ProtocolConfig(10, state="oats", model=SpectralModel()))
    with pytest.raises(InvalidParameter):
        estimation.concurrence_dips(ProtocolConfig(10, model=SpectralModel()), count=0)


def test_first_concurrence_dip(css_config):
    (dip,) = estimation.concurrence_dips(css_config, count=1)
    assert dip.k == 1
    assert dip.t_zero == pytest.approx(fdv.t_first_dip_s3, abs=2e-3)
    assert dip.concurrence <= 1e-6
    assert dip.revival > 0.0
    assert dip.delta_b_min <= estimation.delta_b(css_config, dip.t_zero)
    assert set(dip.as_row()) >= {"t_zero", "t_min", "offset"}


@pytest.mark.slowtest
@pytest.mark.timeout(120)
def test_css_without_bath_phases_bounds_curve_on_dense_grid():
    config = ProtocolConfig(100, state="css", model=SpectralModel())
    times = np.linspace(0.02, 5.0, 200)
    full = np.array([estimation.css_uncertainty(config, t) for t in times])
    classical = np.array([estimation.css_uncertainty(config, t, quantum=False) for t in times])
    assert np.all(np.isfinite(classical))
    assert np.all(classical <= full * (1 + 1e-12))


@pytest.mark.slowtest
@pytest.mark.timeout(120)
def test_concurrence_zeros_track_delta_b_minima():
    config = ProtocolConfig(100, state="css", model=SpectralModel())
    dips = estimation.concurrence_dips(config, count=5)
    assert len(dips) == 5
    t_zero = np.array([dip.t_zero for dip in dips])
    assert np.all(np.diff(t_zero) > 0)
    for dip in dips:
        assert dip.concurrence <= 1e-6
        assert dip.revival > 0.0
    offsets = np.array([dip.offset for dip in dips])
    assert np.all(offsets < 1e-2 * np.diff(t_zero).min())
    # the rising decay pulls the first minima onto their zeros
    assert np.all(np.diff(offsets[2:]) < 0)


@pytest.mark.slowtest
@pytest.mark.timeout(600)
def test_oats_scaling_exponent():
    base = ProtocolConfig(1000, state="oats", model=SpectralModel())
    points = []
    for n in (1e3, 3e3, 1e4, 3e4, 1e5):
        points.append((n, estimation.optimize_time(base.with_(n_qubits=int(n))).delta_b_opt))
    exponent = fit_power_law(points).exponent
    assert exponent == pytest.approx(fdv.oats_delta_b_exponent, abs=0.02)
