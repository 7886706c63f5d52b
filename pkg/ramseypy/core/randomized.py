"""Randomized coupling: the qubit positions are re-drawn from an isotropic
zero-mean Gaussian of width epsilon on every run.

With eta = v / (epsilon w_c) the transit time of a pair is |z_n - z_m| / eta
for standard normal coordinates z, so every spatial average depends on the
layout distribution through eta only. Spatial means are available for
D = 1, 2, 3; the second cumulants are derived for D = 1.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ramseypy.parameters import prms
from ramseypy.exceptions import InvalidParameter, UnsupportedRegime, UnsupportedState
from ramseypy.core.numerics import (
    RngStream,
    gauss_legendre_panels,
    integrate_semi_infinite,
    log_grid,
    normal_quantile,
    refine_grid_minimum,
    special_value,
)
from ramseypy.core.noise import SpectralModel, angular_factor, thermal_factor
from ramseypy.core.coefficients import (
    PairKernel,
    TransitGeometry,
    bath_weight,
    decay_phase_map,
    pair_coefficients,
    sin_defect,
)
from ramseypy.core.estimation import UncertaintyCurve, oats_moments, oats_variance

# spatial kernels are below double precision this many eta away from
# their ridge (band) or from the origin (box)
_BAND_HALF_WIDTH = 8.0
_BOX_EDGE = 12.0
_GAUSSIAN_UPPER = 8.0


@dataclass(frozen=True)
class RcConfig:
    """Sampling parameters of the randomized-coupling protocol.

    ``epsilon`` is a length. Left as ``None`` it follows from ``eta`` as
    v / (eta w_c) of the bath it is used with; when given it must agree.

    ``K`` is the number of sampled layouts. K = 1 is accepted: the curve is
    the single layout, logged as a warning and returned without dispersion.
    Dispersion bars need K >= 2.
    """

    eta: float = 0.1
    K: int = 20
    seed: int = 7
    dimension: int = 1
    epsilon: float = None

    def __post_init__(self):
        if not self.eta > 0:
            raise InvalidParameter("eta must be positive")
        if self.K < 1:
            raise InvalidParameter("K must be at least 1")
        if self.seed < 0:
            raise InvalidParameter("seed must be non-negative")
        if self.dimension not in (1, 2, 3):
            raise InvalidParameter("dimension must be 1, 2 or 3")
        if self.epsilon is not None and not self.epsilon > 0:
            raise InvalidParameter("epsilon must be positive")

    @classmethod
    def from_prms(cls, **overrides):
        r = prms.Randomized
        kwargs = dict(
            eta=float(r.eta),
            K=int(r.K),
            seed=int(r.seed),
            dimension=int(prms.Model.dimension),
        )
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)

    def epsilon_for(self, model):
        expected = model.speed / (self.eta * model.omega_c)
        if self.epsilon is None:
            return expected
        if not math.isclose(self.epsilon, expected, rel_tol=1e-9):
            raise InvalidParameter(
                f"epsilon={self.epsilon:.6g} disagrees with eta: "
                f"v / (eta w_c) = {expected:.6g}"
            )
        return self.epsilon


@dataclass(frozen=True)
class SpatialMeans:
    """Layout averages of the coefficients at time t: ``kappa0_bar`` (any
    diagonal kappa_nn), ``kappa1_bar`` and ``xi_bar`` (any pair n != m).

    ``kappa0_const`` and ``xi_const`` are the short-time constants of the
    Gaussian cutoff: kappa0_bar ~ kappa0_const (w_c t)^2 and
    xi_bar ~ xi_const eta^(s+2) (w_c t)^3.
    """

    t: float
    eta: float
    kappa0_bar: float
    kappa1_bar: float
    xi_bar: float
    kappa0_const: float = None
    xi_const: float = None


@dataclass(frozen=True)
class SpatialSecondCumulants:
    """Layout (co)variances of the pair coefficients at time t.

    F1 = Var kappa_nm, F2 = Cov(kappa_nm, kappa_nl), G1 = Var xi_nm,
    G2 = Cov(xi_nm, xi_nl) and FG2 = Cov(kappa_nm, xi_nl) for distinct
    n, m, l.
    """

    t: float
    eta: float
    F1: float
    F2: float
    G1: float
    G2: float
    FG2: float

    def combine(self, pair):
        """(Var gamma, Var phi0, Cov(gamma, phi0)) of a basis pair, with
        gamma at decay weight 1"""
        a = pair.alpha.astype(float)
        b = pair.beta.astype(float)
        d = a - b
        q = float(d @ d)
        s = float(d.sum())
        var_gamma = 2.0 * (q * q - float(np.sum(d ** 4))) * self.F1 + 4.0 * float(
            np.sum(d ** 2 * ((s - d) ** 2 - q + d ** 2))
        ) * self.F2

        e = np.outer(b, b) - np.outer(a, a)
        rows = e.sum(axis=1)
        rows_sq = (e ** 2).sum(axis=1)
        var_phi0 = 2.0 * float(np.sum(e ** 2)) * self.G1 + 4.0 * float(
            np.sum(rows ** 2 - rows_sq)
        ) * self.G2

        cov = 4.0 * float(np.sum(d * ((s - d) * rows - e @ d))) * self.FG2
        return var_gamma, var_phi0, cov


@dataclass(frozen=True)
class Validity:
    cond_i: float
    cond_ii: float
    valid: bool
    threshold: float


# ----------------------------------------------------------------------------
# layouts
# ----------------------------------------------------------------------------


def _check_dimensions(model, rc):
    if rc.dimension != model.dimension:
        raise InvalidParameter(
            f"layouts are drawn in D={rc.dimension} but the bath has D={model.dimension}"
        )


def sample_layout(n_qubits, rc, model=None, index=0):
    """Positions of N qubits drawn i.i.d. from the isotropic Gaussian of
    width epsilon per axis.

    Args:
        n_qubits (int): number of qubits.
        rc (RcConfig): sampling parameters.
        model (SpectralModel): fixes epsilon = v / (eta w_c) (defaults from
            prms).
        index (int): layout number; layout ``index`` always comes from
            stream (seed, index).

    Returns:
        TransitGeometry (positional)
    """
    if n_qubits < 1:
        raise InvalidParameter("need at least one qubit")
    model = model or SpectralModel.from_prms()
    epsilon = rc.epsilon_for(model)
    if rc.dimension != 1:
        logging.warning(
            f"sampling in D={rc.dimension}: only the spatial means are derived "
            "beyond D=1"
        )
    generator = RngStream(rc.seed, index).generator()
    positions = generator.normal(0.0, epsilon, size=(n_qubits, rc.dimension))
    return TransitGeometry.from_positions(positions)


# ----------------------------------------------------------------------------
# spatial means
# ----------------------------------------------------------------------------


def _spatial_envelope(dimension, u, eta):
    """E{f_D(u x_nm)} / f_D(0) over Gaussian layouts"""
    y = u / eta
    if dimension == 2:
        # the sinc kernel averaged over a planar Gaussian
        return float(special.dawsn(y)) / y if y > 0 else 1.0
    return math.exp(-y * y)


def _period(tau):
    return math.pi / tau if tau > 1.0 else None


def _short_time_means(model):
    if model.cutoff != "gaussian" or not model.zero_temperature:
        return None, None
    s = model.ohmicity
    half_f0 = 0.5 * angular_factor(model.dimension, 0.0)
    kappa0 = half_f0 * model.alpha * special_value("gamma", ((s + 1) / 2,)) / 8.0
    if model.dimension == 2:
        return kappa0, None
    xi = half_f0 * model.alpha * s * special_value("gamma", (s / 2,)) / 48.0
    return kappa0, xi


def spatial_means(model, rc, t, spec=None):
    """kappa0_bar, kappa1_bar and xi_bar at time t.

    kappa0_bar = (f_D(0)/4) int J (1 - cos wt) / w^2 coth, kappa1_bar adds the
    layout envelope (exp(-u^2 / eta^2) for D = 1, 3) and
    xi_bar = (f_D(0)/4) int J (wt - sin wt) / w^2 times the envelope.

    Returns:
        SpatialMeans
    """
    if t < 0:
        raise InvalidParameter("t must be >= 0")
    _check_dimensions(model, rc)
    kappa0_const, xi_const = _short_time_means(model)
    if t == 0:
        return SpatialMeans(t, rc.eta, 0.0, 0.0, 0.0, kappa0_const, xi_const)

    dim, eta = model.dimension, rc.eta
    tau = model.omega_c * t
    f0 = angular_factor(dim, 0.0)

    def kappa1_integrand(u):
        if u == 0.0:
            return 0.0
        h = 2.0 * (math.sin(0.5 * u * tau) / tau) ** 2
        return (
            bath_weight(model, u)
            * h
            * thermal_factor(model, u * model.omega_c)
            * _spatial_envelope(dim, u, eta)
        )

    def xi_integrand(u):
        if u == 0.0:
            return 0.0
        h = sin_defect(u * tau) / tau ** 3
        return bath_weight(model, u) * h * _spatial_envelope(dim, u, eta)

    # the sinc envelope decays as a power law, the Gaussian ones by u ~ 10 eta
    scale = 1.0 if dim == 2 else min(1.0, 10.0 * eta)
    kappa0, _ = pair_coefficients(model, 0.0, t, spec)
    kappa1 = 0.25 * f0 * tau ** 2 * integrate_semi_infinite(
        kappa1_integrand, spec, scale=scale, period=_period(tau)
    )
    xi = 0.25 * f0 * tau ** 3 * integrate_semi_infinite(
        xi_integrand, spec, scale=scale, period=_period(tau)
    )
    return SpatialMeans(t, eta, kappa0, kappa1, xi, kappa0_const, xi_const)


# ----------------------------------------------------------------------------
# second cumulants
# ----------------------------------------------------------------------------


def _log_sinh(z):
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore"):
        small = np.log(np.sinh(np.minimum(z, 20.0)))
    large = z - math.log(2.0) + np.log1p(-np.exp(-2.0 * np.maximum(z, 20.0)))
    return np.where(z > 20.0, large, small)


def _spatial_kernel(u, v, eta, c):
    """2 exp(-(u^2 + v^2) / eta^2) sinh^2(c u v / (2 eta^2))"""
    eta2 = eta * eta
    exponent = -(u * u + v * v) / eta2 + 2.0 * _log_sinh(0.5 * c * u * v / eta2)
    return 2.0 * np.exp(exponent)


def _amplitudes(model, u, tau):
    """decay and phase amplitudes a_f(u), a_g(u) of the pair integrals"""
    w = bath_weight(model, u)
    a_f = w * 2.0 * np.sin(0.5 * u * tau) ** 2 * thermal_factor(model, u * model.omega_c)
    a_g = w * sin_defect(u * tau)
    return a_f, a_g


def _bath_upper(model, spec):
    if model.cutoff == "gaussian":
        return _GAUSSIAN_UPPER
    if spec is not None:
        return spec.truncation_multiplier
    return prms.Quadrature.truncation_multiplier


def _band_integrals(model, eta, tau, upper, order):
    """Var kappa_nm and Var xi_nm: the kernel with c = 2 lives on a band of
    width ~eta around u = u'"""
    width = min(1.0, math.pi / max(tau, 1e-300))
    # the inner integral varies on the scale eta only near the origin
    near = min(upper, 2.0 * _BAND_HALF_WIDTH * eta)
    u, wu = gauss_legendre_panels(0.0, near, min(width, eta), order)
    if near < upper:
        u_far, w_far = gauss_legendre_panels(near, upper, width, order)
        u, wu = np.concatenate([u, u_far]), np.concatenate([wu, w_far])
    panels = max(8, math.ceil(2.0 * _BAND_HALF_WIDTH * eta * tau / math.pi))
    x, wx = np.polynomial.legendre.leggauss(order)

    # inner variable u' = u + eta * y with y in [max(-8, -u/eta), 8]
    y_lo = np.maximum(-_BAND_HALF_WIDTH, -u / eta)
    span = (_BAND_HALF_WIDTH - y_lo) / panels
    offsets = np.arange(panels)
    mid = y_lo[:, None, None] + span[:, None, None] * (offsets[None, :, None] + 0.5)
    y = (mid + 0.5 * span[:, None, None] * x[None, None, :]).reshape(len(u), -1)
    wy = np.broadcast_to(
        (0.5 * span[:, None, None] * wx[None, None, :]), (len(u), panels, order)
    ).reshape(len(u), -1)

    v = u[:, None] + eta * y
    kernel = _spatial_kernel(u[:, None], v, eta, 2.0) * eta * wy
    f_u, g_u = _amplitudes(model, u, tau)
    f_v, g_v = _amplitudes(model, v, tau)
    f1 = 0.25 * float(np.sum(wu * f_u * np.sum(kernel * f_v, axis=1)))
    g1 = 0.25 * float(np.sum(wu * g_u * np.sum(kernel * g_v, axis=1)))
    return f1, g1


def _box_integrals(model, eta, tau, upper, order):
    """Cov(kappa_nm, kappa_nl) and friends: the kernel with c = 1 is
    confined to u, u' < ~12 eta"""
    edge = min(_BOX_EDGE * eta, upper)
    width = min(eta, math.pi / max(tau, 1e-300))
    u, wu = gauss_legendre_panels(0.0, edge, width, order)
    kernel = _spatial_kernel(u[:, None], u[None, :], eta, 1.0) * np.outer(wu, wu)
    f, g = _amplitudes(model, u, tau)
    f2 = 0.25 * float(f @ kernel @ f)
    g2 = 0.25 * float(g @ kernel @ g)
    fg2 = 0.25 * float(f @ kernel @ g)
    return f2, g2, fg2


def second_cumulant_integrals(model, rc, t, spec=None, order=16):
    """F1, F2, G1, G2 and FG2 at time t by product Gauss-Legendre quadrature
    over the two bath frequencies.

    Returns:
        SpatialSecondCumulants
    """
    if t < 0:
        raise InvalidParameter("t must be >= 0")
    _check_dimensions(model, rc)
    if model.dimension != 1:
        raise UnsupportedRegime("second cumulants are derived for D = 1")
    if t == 0:
        return SpatialSecondCumulants(t, rc.eta, 0.0, 0.0, 0.0, 0.0, 0.0)
    tau = model.omega_c * t
    upper = _bath_upper(model, spec)
    f1, g1 = _band_integrals(model, rc.eta, tau, upper, order)
    f2, g2, fg2 = _box_integrals(model, rc.eta, tau, upper, order)
    return SpatialSecondCumulants(t, rc.eta, f1, f2, g1, g2, fg2)


def spatial_second_cumulants(model, rc, t, pair, spec=None):
    """(Var gamma, Var phi0, Cov(gamma, phi0)) of the basis pair over
    layouts, gamma at decay weight 1"""
    return second_cumulant_integrals(model, rc, t, spec).combine(pair)


def short_time_second_cumulants(model, rc, t):
    """Leading short-time, small-eta forms of F1, F2, G1, G2, FG2 for the
    Gaussian cutoff."""
    if model.cutoff != "gaussian":
        raise UnsupportedRegime("closed second cumulants need the Gaussian cutoff")
    if model.dimension != 1:
        raise UnsupportedRegime("second cumulants are derived for D = 1")
    s, alpha, eta = model.ohmicity, model.alpha, rc.eta
    tau = model.omega_c * t
    root_pi = math.sqrt(math.pi)

    def gamma(x):
        return special_value("gamma", (x,))

    def series(a):
        return special_value("hyp2f1", (a, a, 0.5, 0.25)) - 1.0

    a2 = alpha * alpha
    f1 = a2 * eta * root_pi * gamma(s + 0.5) * tau ** 4 / 2 ** (s + 6.5)
    g1 = a2 * eta * root_pi * gamma(s + 1.5) * tau ** 6 / (144.0 * 2 ** (s + 3.5))
    a = (s + 1) / 2
    f2 = a2 * tau ** 4 * eta ** (2 * s + 2) * gamma(a) ** 2 * series(a) / 64.0
    a = s / 2 + 1
    g2 = a2 * tau ** 6 * eta ** (2 * s + 4) * gamma(a) ** 2 * series(a) / 576.0
    fg2 = (
        a2
        * tau ** 5
        * eta ** (2 * s + 3)
        * gamma((s + 1) / 2)
        * gamma(s / 2 + 1)
        * (2 ** s * (1 + 3 ** -(s + 1)) - 1)
        / 192.0
    )
    return SpatialSecondCumulants(t, eta, f1, f2, g1, g2, fg2)


def averaged_element_factor(model, rc, pair, b, t, decay_weight=1.0, second_order=True, spec=None):
    """E{exp(-w gamma + i phi0)} times the signal phase, to second cumulant
    order in the layout fluctuations:

    exp(-w gamma_bar + i phi0_bar + (w^2 Var gamma - Var phi0) / 2 - i w Cov)
    """
    means = spatial_means(model, rc, t, spec)
    d = (pair.alpha - pair.beta).astype(float)
    q, s = float(d @ d), float(d.sum())
    gamma_bar = q * means.kappa0_bar + (s * s - q) * means.kappa1_bar
    phi0_bar = 4.0 * (pair.m_prime ** 2 - pair.m ** 2) * means.xi_bar
    signal = 0.5 * b * t * float(pair.beta.sum() - pair.alpha.sum())

    w = decay_weight
    var_gamma = var_phi0 = cov = 0.0
    if second_order:
        var_gamma, var_phi0, cov = spatial_second_cumulants(model, rc, t, pair, spec)
    real = -w * gamma_bar + 0.5 * (w * w * var_gamma - var_phi0)
    imag = phi0_bar + signal - w * cov
    return complex(np.exp(complex(real, imag)))


def validity_check(rc, n_qubits, t, model, threshold=None):
    """First-order cumulants are trusted while eta (w_c t)^2 N and
    eta^(s+1) (w_c t)^2 N^2 both stay below ``threshold``."""
    if threshold is None:
        threshold = prms.Randomized.validity_threshold
    tau = model.omega_c * t
    cond_i = rc.eta * tau ** 2 * n_qubits
    cond_ii = rc.eta ** (model.ohmicity + 1) * tau ** 2 * n_qubits ** 2
    valid = cond_i < threshold and cond_ii < threshold
    if not valid:
        logging.info(
            f"randomized-coupling cumulants outside validity: "
            f"{cond_i:.3g}, {cond_ii:.3g} (threshold {threshold})"
        )
    return Validity(cond_i, cond_ii, valid, threshold)


# ----------------------------------------------------------------------------
# Monte Carlo uncertainty curves
# ----------------------------------------------------------------------------


def _time_grid(t_grid):
    if t_grid is None:
        e = prms.Estimation
        return log_grid(e.t_lo, e.t_hi, int(e.grid))
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or len(times) < 2:
        raise InvalidParameter("a time grid needs at least 2 points")
    if np.any(times <= 0) or np.any(np.diff(times) <= 0):
        raise InvalidParameter("times must be positive and increasing")
    return times


def ghz_reference(config, t):
    """Delta b of the GHZ probe without residual spatial correlations:
    sqrt(exp(w N kappa0_bar(t))) / (N sqrt(T t)), w = ghz_decay_weight"""
    n = config.n_qubits
    w = prms.Randomized.ghz_decay_weight
    kappa0, _ = pair_coefficients(config.model, 0.0, t)
    with np.errstate(over="ignore"):
        growth = float(np.exp(0.5 * w * n * kappa0))
    return growth / (n * math.sqrt(config.T * t))


def oats_reference(config, t):
    """Delta b of the OATS probe without residual spatial correlations:
    Delta b^2 = [N (e^(4 kappa0_bar) - 1) + 4 a0] / (N^2 T t h0^2)"""
    n = config.n_qubits
    theta, beta = config.angles()
    kappa0, _ = pair_coefficients(config.model, 0.0, t)
    a0 = oats_variance(n, theta, beta)
    h0 = math.cos(theta / 2) ** (n - 1)
    with np.errstate(over="ignore"):
        variance = n * float(np.expm1(4.0 * kappa0)) + 4.0 * a0
    return math.sqrt(variance / (n * n * config.T * t * h0 * h0))


def reference_time_range(config, width=30.0):
    """log window around the short-time optimum of the eta = 0 curve"""
    model = config.model
    probe = 1.0e-3
    kappa0_const = pair_coefficients(model, 0.0, probe / model.omega_c)[0] / probe ** 2
    n = config.n_qubits
    if config.state == "ghz":
        w = prms.Randomized.ghz_decay_weight
        tau = 1.0 / math.sqrt(2.0 * w * n * kappa0_const)
    elif config.state == "oats":
        theta, beta = config.angles()
        tau = math.sqrt(oats_variance(n, theta, beta) / (n * kappa0_const))
    else:
        raise UnsupportedState("reference curves exist for GHZ and OATS probes")
    return tau / width / model.omega_c, tau * width / model.omega_c


def _curve(times, delta, dispersion, reference):
    best = refine_grid_minimum(times, delta)
    return UncertaintyCurve(
        times=times,
        delta_b=np.asarray(delta, dtype=float),
        tau_opt=best.x_opt,
        delta_b_opt=best.f_opt,
        dispersion=dispersion,
        reference=reference,
        boundary=best.boundary,
    )


def ghz_rc(config, rc, t_grid=None, mapper=map):
    """GHZ uncertainty curve averaged over K sampled layouts.

    Layout i is drawn from stream (seed, i); y_i(t) = exp(w sum_nm kappa_nm)
    and Delta b = sqrt(mean y) / (N sqrt(T t)). The dispersion propagates the
    standard error of mean y.

    Args:
        config (ProtocolConfig): a GHZ protocol.
        rc (RcConfig): sampling parameters.
        t_grid (array): interrogation times (defaults to the prms grid).
        mapper (callable): ``map``-like callable used over the layouts; it
            must return results in input order.

    Returns:
        UncertaintyCurve with ``reference`` set to the eta = 0 curve.
    """
    if config.state != "ghz":
        raise UnsupportedState("ghz_rc needs a GHZ probe")
    model = config.model
    _check_dimensions(model, rc)
    times = _time_grid(t_grid)
    n = config.n_qubits
    w = prms.Randomized.ghz_decay_weight

    def layout_values(index):
        kernel = PairKernel(model, sample_layout(n, rc, model, index), times[-1])
        exponents = np.array([w * kernel.kappa_sum(t) for t in times])
        with np.errstate(over="ignore"):
            return np.exp(exponents)

    y = np.array(list(mapper(layout_values, range(rc.K))))
    y_bar = y.mean(axis=0)
    scale = 1.0 / (n * np.sqrt(config.T * times))
    delta = np.sqrt(y_bar) * scale
    dispersion = None
    if rc.K >= 2:
        sigma = y.std(axis=0, ddof=1) / math.sqrt(rc.K)
        dispersion = sigma / (2.0 * np.sqrt(y_bar)) * scale
    else:
        logging.warning("a single layout carries no dispersion")
    reference = np.array([ghz_reference(config, t) for t in times])
    return _curve(times, delta, dispersion, reference)


def oats_rc(config, rc, t_grid=None, mapper=map):
    """OATS uncertainty curve averaged over K sampled layouts at b t = 0.

    Per layout the OATS moments follow from the positional chi and Psi
    matrices; variances and slopes are averaged separately and combined as
    Delta b = sqrt(mean Var J_y) / (sqrt(T / t) |mean slope|).

    Args:
        config (ProtocolConfig): an OATS protocol (None angles select the
            noiseless optimum).
        rc (RcConfig): sampling parameters.
        t_grid (array): interrogation times (defaults to the prms grid).
        mapper (callable): order-preserving ``map``-like callable.

    Returns:
        UncertaintyCurve with ``reference`` set to the eta = 0 curve.
    """
    if config.state != "oats":
        raise UnsupportedState("oats_rc needs an OATS probe")
    model = config.model
    _check_dimensions(model, rc)
    times = _time_grid(t_grid)
    n = config.n_qubits
    theta, beta = config.angles()
    if config.b != 0:
        logging.debug("oats_rc evaluates at b t = 0; ignoring b")

    def layout_values(index):
        kernel = PairKernel(model, sample_layout(n, rc, model, index), times[-1])
        out = np.empty((2, len(times)))
        for j, t in enumerate(times):
            chi, psi = decay_phase_map(kernel.at(t))
            moments = oats_moments(chi, psi, theta, beta, 0.0, t)
            out[0, j] = moments.variance
            out[1, j] = moments.d_jy_mean_db
        return out

    data = np.array(list(mapper(layout_values, range(rc.K))))
    var, slope = data[:, 0, :], data[:, 1, :]
    var_bar = np.maximum(var.mean(axis=0), 0.0)
    slope_bar = slope.mean(axis=0)
    with np.errstate(divide="ignore"):
        delta = np.sqrt(var_bar) / (np.sqrt(config.T / times) * np.abs(slope_bar))
    dispersion = None
    if rc.K >= 2:
        root_k = math.sqrt(rc.K)
        sigma_v = var.std(axis=0, ddof=1) / root_k
        sigma_s = slope.std(axis=0, ddof=1) / root_k
        with np.errstate(divide="ignore", invalid="ignore"):
            dispersion = delta * np.sqrt(
                (sigma_v / (2.0 * var_bar)) ** 2 + (sigma_s / slope_bar) ** 2
            )
    else:
        logging.warning("a single layout carries no dispersion")
    reference = np.array([oats_reference(config, t) for t in times])
    return _curve(times, delta, dispersion, reference)


def required_samples(sigma, delta_e, epsilon_conf):
    """Smallest K with z_{1 - eps/2} sigma / sqrt(K) <= delta_e"""
    if delta_e <= 0:
        raise InvalidParameter("delta_e must be positive")
    if not 0 < epsilon_conf < 1:
        raise InvalidParameter("epsilon_conf must lie in (0, 1)")
    if sigma < 0:
        raise InvalidParameter("sigma must be non-negative")
    z = normal_quantile(1.0 - epsilon_conf / 2.0)
    value = (z * sigma / delta_e) ** 2
    # a bound that lands on an integer up to roundoff is not rounded up
    return max(1, math.ceil(value - 1e-9 * max(1.0, value)))
