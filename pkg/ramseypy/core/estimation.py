"""Ramsey uncertainty curves and optimal operating points.

CSS moments are exact (collective, even-odd and arbitrary chi, Psi
matrices). OATS moments decompose exactly over the one or two measured
qubits and treat the bath-induced twist of the remaining qubits to second
cumulant order; they reduce to the Kitagawa-Ueda expressions without noise.
``concurrence_dips`` locates the two-qubit concurrence zeros of a collective
CSS against the neighbouring minima of Delta b.

Observables use the single-qubit coherence exp(-chi_nn / 2).
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd
from scipy import optimize

from ramseypy.parameters import prms
from ramseypy.parameters.internal_settings import get_headers_curve
from ramseypy.exceptions import InvalidParameter, UnsupportedRegime, UnsupportedState
from ramseypy.core.numerics import log_grid, minimize_on_log_grid
from ramseypy.core.noise import SpectralModel
from ramseypy.core.coefficients import (
    TransitGeometry,
    cluster_coefficients,
    decay_phase_map,
    dynamic_coefficients,
    numeric_short_time_constants,
    short_time_constants,
)
from ramseypy.core.dynamics import two_qubit_concurrence

STATES = ("css", "oats", "ghz")


@dataclass(frozen=True)
class ProtocolConfig:
    """N probes, total time T, signal b, probe state and bath.

    ``theta`` and ``beta`` are the OATS twist and rotation angles; ``None``
    selects the noiseless optimum.
    """

    n_qubits: int
    T: float = 1.0
    b: float = 0.0
    state: str = "css"
    theta: float = None
    beta: float = None
    geometry: TransitGeometry = None
    model: SpectralModel = field(default_factory=SpectralModel)

    def __post_init__(self):
        object.__setattr__(self, "state", str(self.state).lower())
        if self.state not in STATES:
            raise InvalidParameter(f"unknown state: {self.state}")
        if self.n_qubits < 2:
            raise InvalidParameter("N must be at least 2")
        if self.T <= 0:
            raise InvalidParameter("T must be positive")
        for name in ("theta", "beta"):
            value = getattr(self, name)
            if value is not None and not 0 <= value <= math.pi:
                raise InvalidParameter(f"{name} must lie in [0, pi]")
        if self.geometry is None:
            object.__setattr__(self, "geometry", TransitGeometry.collective(self.n_qubits))
        elif self.geometry.n_qubits != self.n_qubits:
            raise InvalidParameter("geometry and N disagree")

    @classmethod
    def from_prms(cls, model=None, geometry=None, **overrides):
        p = dict(prms.Protocol.to_dict())
        p.update({k: v for k, v in overrides.items() if v is not None})
        n = int(p["N"])
        if geometry is None:
            regime = p.get("regime", "collective")
            geometry = TransitGeometry(regime, n, x=float(p.get("x", 0.0) or 0.0))
        return cls(
            n_qubits=n,
            T=float(p["T"]),
            b=float(p["b"]),
            state=p["state"],
            theta=p.get("theta"),
            beta=p.get("beta"),
            geometry=geometry,
            model=model or SpectralModel.from_prms(),
        )

    def with_(self, **changes):
        if "n_qubits" in changes and "geometry" not in changes:
            g = self.geometry
            if g.regime == "positions":
                raise InvalidParameter("cannot resize a positional geometry")
            changes["geometry"] = TransitGeometry(g.regime, changes["n_qubits"], x=g.x)
        return replace(self, **changes)

    def angles(self):
        if self.state != "oats":
            return 0.0, 0.0
        if self.theta is None or self.beta is None:
            opt = optimal_angles(self.n_qubits)
            theta = opt.theta_opt if self.theta is None else self.theta
            beta = opt.beta_opt if self.beta is None else self.beta
            return theta, beta
        return self.theta, self.beta


@dataclass
class UncertaintyCurve:
    times: np.ndarray
    delta_b: np.ndarray
    tau_opt: float
    delta_b_opt: float
    dispersion: np.ndarray = None
    reference: np.ndarray = None
    boundary: bool = False

    def to_frame(self, scale=1.0):
        """DataFrame with uncertainties multiplied by ``scale`` (use
        sqrt(T / omega_c) for the reported units)"""
        h = get_headers_curve()
        frame = pd.DataFrame({h.time: self.times, h.delta_b: scale * self.delta_b})
        if self.dispersion is not None:
            frame[h.dispersion] = scale * np.asarray(self.dispersion)
        if self.reference is not None:
            frame[h.reference] = scale * np.asarray(self.reference)
        return frame


@dataclass(frozen=True)
class AngleResult:
    theta_opt: float
    beta_opt: float
    A: float
    B: float
    delta: float
    variance: float
    theta_asymptotic: float
    beta_asymptotic: float


@dataclass(frozen=True)
class MomentPair:
    jy_mean: float
    jy2_mean: float
    d_jy_mean_db: float

    @property
    def variance(self):
        return self.jy2_mean - self.jy_mean ** 2


# ----------------------------------------------------------------------------
# noiseless squeezing
# ----------------------------------------------------------------------------


def _ku_terms(n, theta):
    a = 1.0 - math.cos(theta) ** (n - 2)
    b = 4.0 * math.sin(theta / 2) * math.cos(theta / 2) ** (n - 2)
    delta = 0.5 * math.atan2(b, a) if (a or b) else 0.0
    return a, b, delta


def oats_variance(n_qubits, theta, beta=None):
    """Noiseless Delta J_y^2 of the twisted and rotated CSS.

    N/4 {1 + (N-1)/4 [A + sqrt(A^2 + B^2) cos(2 beta + 2 delta)]}; ``beta=None``
    uses beta_opt = pi/2 - delta.
    """
    n = n_qubits
    a, b, delta = _ku_terms(n, theta)
    root = math.hypot(a, b)
    if beta is None:
        # A - sqrt(A^2 + B^2) without cancellation
        bracket = -(b * b) / (a + root) if root > 0 else 0.0
    else:
        bracket = a + root * math.cos(2 * beta + 2 * delta)
    return n / 4 * (1 + (n - 1) / 4 * bracket)


@functools.lru_cache(maxsize=256)
def optimal_angles(n_qubits, grid=200):
    """Twist and rotation angles minimizing the noiseless OATS variance.

    beta_opt = pi/2 - delta(theta) exactly; theta_opt by minimizing the
    variance along that line. The asymptotic forms are returned beside.
    """
    n = n_qubits
    if n < 3:
        raise InvalidParameter("optimal_angles needs N >= 3")
    theta_asym = 12 ** (1 / 6) * 2 ** (2 / 3) * n ** (-2 / 3)
    beta_asym = math.pi / 2 - 3 ** (-1 / 6) * n ** (-1 / 3) - 3 ** (1 / 6) / 2 * n ** (-2 / 3)

    lo = theta_asym / 30
    hi = min(math.pi - 1e-9, 30 * theta_asym)
    res = minimize_on_log_grid(
        lambda th: oats_variance(n, th), log_grid(lo, hi, grid), xtol=1e-10
    )
    theta = res.x_opt
    a, b, delta = _ku_terms(n, theta)
    return AngleResult(
        theta_opt=theta,
        beta_opt=math.pi / 2 - delta,
        A=a,
        B=b,
        delta=delta,
        variance=res.f_opt,
        theta_asymptotic=theta_asym,
        beta_asymptotic=beta_asym,
    )


# ----------------------------------------------------------------------------
# CSS moments
# ----------------------------------------------------------------------------


def css_moments_collective(chi, psi, n_qubits, b, t):
    n = n_qubits
    sb, cb = math.sin(b * t), math.cos(b * t)
    single = 0.5 * n * math.exp(-chi / 2) * math.cos(psi) ** (n - 1)
    pair = 1.0 - math.exp(-2 * chi) * math.cos(2 * b * t) * math.cos(2 * psi) ** (n - 2)
    jy2 = n / 4 + n * (n - 1) / 8 * pair
    return MomentPair(single * sb, jy2, single * t * cb)


def css_moments_even_odd(chi_s, chi_d, psi_s, psi_d, n_qubits, b, t):
    n = n_qubits
    h = n // 2
    sb, cb, c2b = math.sin(b * t), math.cos(b * t), math.cos(2 * b * t)
    single = (
        0.5 * n * math.exp(-chi_s / 2)
        * math.cos(psi_s) ** (h - 1) * math.cos(psi_d) ** h
    )
    decay = math.exp(-chi_s)
    same = 0.5 * decay * (
        math.exp(chi_s)
        - math.exp(-chi_s) * c2b * math.cos(2 * psi_s) ** (h - 2) * math.cos(2 * psi_d) ** h
    )
    cross = 0.5 * decay * (
        math.exp(chi_d) * math.cos(psi_s - psi_d) ** (n - 2)
        - math.exp(-chi_d) * c2b * math.cos(psi_s + psi_d) ** (n - 2)
    )
    pair_sum = n * (h - 1) * same + n * n / 2 * cross
    return MomentPair(single * sb, n / 4 + pair_sum / 4, single * t * cb)


def css_moments_dense(chi, psi, b, t):
    """Exact CSS moments for arbitrary symmetric chi and Psi matrices"""
    chi = np.asarray(chi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    n = chi.shape[0]
    decay = np.exp(-np.diag(chi) / 2)
    off = ~np.eye(n, dtype=bool)

    cos_psi = np.where(off, np.cos(psi), 1.0)
    x = float(np.sum(decay * np.prod(cos_psi, axis=1))) / 2

    c2b = math.cos(2 * b * t)
    pair_sum = 0.0
    for i in range(n):
        keep = off[i].copy()
        minus = np.cos(psi[i][None, :] - psi)
        plus = np.cos(psi[i][None, :] + psi)
        for j in range(n):
            if j == i:
                continue
            keep_j = keep.copy()
            keep_j[j] = False
            term = 0.5 * (
                math.exp(chi[i, j]) * np.prod(minus[j][keep_j])
                - math.exp(-chi[i, j]) * c2b * np.prod(plus[j][keep_j])
            )
            pair_sum += decay[i] * decay[j] * term
    return MomentPair(
        x * math.sin(b * t), n / 4 + pair_sum / 4, x * t * math.cos(b * t)
    )


def _coefficients_at(config, t):
    """cluster coefficients for collective / even-odd, dense otherwise"""
    g = config.geometry
    if g.is_clustered:
        return cluster_coefficients(config.model, g, t)
    return dynamic_coefficients(config.model, g, t)


def css_moments(config, t, quantum=True):
    """CSS moments at time t. With ``quantum=False`` the bath phases Psi are
    set to zero, leaving only the classical dephasing chi."""
    g = config.geometry
    coeffs = _coefficients_at(config, t)
    if g.regime == "collective":
        psi_s = coeffs.psi_s if quantum else 0.0
        return css_moments_collective(coeffs.chi_s, psi_s, g.n_qubits, config.b, t)
    if g.regime == "even_odd":
        psi_s, psi_d = (coeffs.psi_s, coeffs.psi_d) if quantum else (0.0, 0.0)
        return css_moments_even_odd(
            coeffs.chi_s, coeffs.chi_d, psi_s, psi_d, g.n_qubits, config.b, t
        )
    chi, psi = decay_phase_map(coeffs)
    if not quantum:
        psi = np.zeros_like(psi)
    return css_moments_dense(chi, psi, config.b, t)


def css_uncertainty(config, t, quantum=True):
    """Delta b of a CSS Ramsey run at interrogation time t.

    ``quantum=False`` gives the curve without bath-induced phases. For the
    collective regime it lies below the full curve at every t.
    """
    if config.state != "css":
        raise UnsupportedState("css_uncertainty needs a CSS state")
    if t <= 0:
        raise InvalidParameter("t must be positive")
    return propagate(css_moments(config, t, quantum), config.T / t)


# ----------------------------------------------------------------------------
# OATS moments
# ----------------------------------------------------------------------------


def _tau_tables(beta):
    half = 0.5 * math.sin(beta)
    plus = {
        (1, 1): -1j * half,
        (1, -1): math.cos(beta / 2) ** 2,
        (-1, 1): math.sin(beta / 2) ** 2,
        (-1, -1): 1j * half,
    }
    minus = {(sp, s): np.conj(plus[(s, sp)]) for (sp, s) in plus}
    return plus, minus


def _twist_cumulants(c_sum, c_sq, others, theta, beta):
    """G, R0, I0 of the phase sum_l c_l sigma_z^l over ``others`` spectator
    qubits of the twisted state"""
    ch, sh = math.cos(theta / 2), math.sin(theta / 2)
    if others >= 2:
        k1 = 0.5 * math.sin(beta) ** 2 * (1 - math.cos(theta) ** (others - 2)) + math.sin(
            2 * beta
        ) * sh * ch ** (others - 2)
        lean = (others - 1) * math.sin(beta) * sh * ch ** (others - 2)
    else:
        k1 = 0.0
        lean = 0.0
    g = c_sq + (c_sum ** 2 - c_sq) * k1
    r0 = 0.5 * c_sum * (math.cos(beta) + lean)
    i0 = 0.5 * c_sum * math.sin(beta) * ch ** max(others - 1, 0)
    return g, r0, i0


def _single_factor(c_sum, c_sq, others, theta, beta):
    """P_n: <sigma_y^n> = sin(bt) e^{-chi_nn/2} P_n"""
    g, r0, i0 = _twist_cumulants(c_sum, c_sq, others, theta, beta)
    ch = math.cos(theta / 2) ** others
    return 0.5 * np.exp(-g / 2) * (
        ch * (math.cos(beta / 2) ** 2 * np.exp(-theta * r0) + math.sin(beta / 2) ** 2 * np.exp(theta * r0))
        + math.sin(beta) * np.sin(theta * i0)
    )


def _pair_factor(c_sum, c_sq, others, theta, beta, aligned):
    """Q+ (aligned) or Q- of a measured pair"""
    g, r0, i0 = _twist_cumulants(c_sum, c_sq, others, theta, beta)
    plus, minus = _tau_tables(beta)
    second = plus if aligned else minus
    total = 0.0
    for s1p, s1, s2p, s2 in itertools.product((1, -1), repeat=4):
        weight = plus[(s1p, s1)] * second[(s2p, s2)]
        sigma, sigma_p = s1 + s2, s1p + s2p
        total = total + (
            weight
            * np.exp(0.25j * theta * (s1p * s2p - s1 * s2))
            * math.cos(theta * (sigma_p - sigma) / 4) ** others
            * np.exp(-g / 2 + 0.5 * theta * ((sigma - sigma_p) * r0 + 1j * (sigma + sigma_p) * i0))
        )
    return total / 4


def _pair_correlator(q_minus, q_plus, chi_nn, chi_mm, chi_nm, b, t):
    """<sigma_y^n sigma_y^m>"""
    return np.exp(-(chi_nn + chi_mm) / 2) * (
        np.exp(chi_nm) * 2 * np.real(q_minus)
        - np.exp(-chi_nm) * 2 * np.real(np.exp(2j * b * t) * q_plus)
    )


def oats_moments(chi, psi, theta, beta, b, t):
    """OATS moments for arbitrary symmetric chi and Psi matrices.

    Args:
        chi, psi (ndarray): N x N decay and phase matrices at time t.
        theta, beta (float): twist and rotation angles.
        b (float): signal frequency.
        t (float): interrogation time.

    Returns:
        MomentPair
    """
    chi = np.asarray(chi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    n = chi.shape[0]
    if n < 4:
        raise InvalidParameter("oats_moments needs N >= 4")
    p0 = psi - np.diag(np.diag(psi))
    rows = p0.sum(axis=1)
    squares = (p0 ** 2).sum(axis=1)

    single = _single_factor(rows, squares, n - 1, theta, beta)
    x = float(np.sum(np.exp(-np.diag(chi) / 2) * single))

    gram = p0 @ p0
    pair_sq = p0 ** 2
    c_minus = rows[:, None] - rows[None, :]
    c_plus = rows[:, None] + rows[None, :] - 2 * p0
    s_minus = squares[:, None] + squares[None, :] - 2 * gram - 2 * pair_sq
    s_plus = squares[:, None] + squares[None, :] + 2 * gram - 2 * pair_sq
    q_minus = _pair_factor(c_minus, s_minus, n - 2, theta, beta, aligned=False)
    q_plus = _pair_factor(c_plus, s_plus, n - 2, theta, beta, aligned=True)
    diag = np.diag(chi)
    corr = _pair_correlator(q_minus, q_plus, diag[:, None], diag[None, :], chi, b, t)
    np.fill_diagonal(corr, 0.0)
    jy2 = n / 4 + float(np.sum(corr)) / 4
    return MomentPair(x * math.sin(b * t), jy2, x * t * math.cos(b * t))


def oats_moments_clustered(coeffs, n_qubits, regime, theta, beta, b, t):
    """OATS moments for collective and even-odd geometries in O(1).

    ``coeffs`` is a ClusterCoefficients instance at time t.
    """
    n = n_qubits
    cs, cd = coeffs.chi_s, coeffs.chi_d
    ps, pd_ = coeffs.psi_s, coeffs.psi_d
    if regime == "collective":
        single = _single_factor((n - 1) * ps, (n - 1) * ps ** 2, n - 1, theta, beta)
        x = n * math.exp(-cs / 2) * single
        q_minus = _pair_factor(0.0, 0.0, n - 2, theta, beta, aligned=False)
        q_plus = _pair_factor(
            2 * ps * (n - 2), 4 * ps ** 2 * (n - 2), n - 2, theta, beta, aligned=True
        )
        pair_sum = n * (n - 1) * _pair_correlator(q_minus, q_plus, cs, cs, cs, b, t)
    elif regime == "even_odd":
        h = n // 2
        c_sum = (h - 1) * ps + h * pd_
        c_sq = (h - 1) * ps ** 2 + h * pd_ ** 2
        x = n * math.exp(-cs / 2) * _single_factor(c_sum, c_sq, n - 1, theta, beta)

        q_minus = _pair_factor(0.0, 0.0, n - 2, theta, beta, aligned=False)
        q_plus = _pair_factor(
            2 * ps * (h - 2) + 2 * pd_ * h,
            4 * ps ** 2 * (h - 2) + 4 * pd_ ** 2 * h,
            n - 2, theta, beta, aligned=True,
        )
        same = _pair_correlator(q_minus, q_plus, cs, cs, cs, b, t)

        q_minus = _pair_factor(0.0, (n - 2) * (ps - pd_) ** 2, n - 2, theta, beta, aligned=False)
        q_plus = _pair_factor(
            (n - 2) * (ps + pd_), (n - 2) * (ps + pd_) ** 2, n - 2, theta, beta, aligned=True
        )
        cross = _pair_correlator(q_minus, q_plus, cs, cs, cd, b, t)
        pair_sum = n * (h - 1) * same + n * n / 2 * cross
    else:
        raise UnsupportedRegime(f"no clustered OATS formulas for {regime}")
    x = float(np.real(x))
    jy2 = n / 4 + float(np.real(pair_sum)) / 4
    return MomentPair(x * math.sin(b * t), jy2, x * t * math.cos(b * t))


def oats_moments_for(config, t):
    theta, beta = config.angles()
    g = config.geometry
    coeffs = _coefficients_at(config, t)
    if g.is_clustered:
        return oats_moments_clustered(coeffs, g.n_qubits, g.regime, theta, beta, config.b, t)
    chi, psi = decay_phase_map(coeffs)
    return oats_moments(chi, psi, theta, beta, config.b, t)


# ----------------------------------------------------------------------------
# error propagation and time optimization
# ----------------------------------------------------------------------------


def propagate(moments, nu):
    """Delta b = Delta J_y / (sqrt(nu) |d<J_y>/db|); +inf where the slope
    vanishes"""
    if nu <= 0:
        raise InvalidParameter("nu must be positive")
    slope = abs(moments.d_jy_mean_db)
    if slope == 0 or not np.isfinite(slope):
        logging.debug("vanishing signal slope: returning inf")
        return math.inf
    var = moments.variance
    if var < 0:
        if var < -1e-12 * max(1.0, abs(moments.jy2_mean)):
            logging.warning(f"negative variance {var:.3e} from truncated moments")
            return math.inf
        logging.debug(f"clamping roundoff variance {var:.3e} to 0")
        var = 0.0
    return math.sqrt(var) / (math.sqrt(nu) * slope)


def delta_b(config, t):
    """Delta b at interrogation time t for CSS or OATS states"""
    if t <= 0:
        raise InvalidParameter("t must be positive")
    if config.state == "css":
        return css_uncertainty(config, t)
    if config.state == "oats":
        return propagate(oats_moments_for(config, t), config.T / t)
    raise UnsupportedState("GHZ probes are evaluated by the randomized-coupling path")


def suggest_time_range(config, width=30.0):
    """Log window around the short-time optimum, falling back to prms"""
    if config.geometry.is_clustered:
        try:
            tau = short_time_optimum(config).tau_opt / config.model.omega_c
            return tau / width, tau * width
        except (UnsupportedRegime, InvalidParameter) as e:
            logging.debug(f"no short-time estimate: {e}")
    return prms.Estimation.t_lo, prms.Estimation.t_hi


def optimize_time(config, t_range=None, grid=None, xtol=None, func=None):
    """Delta b on a log grid of times with the minimum refined in ln t.

    Args:
        config (ProtocolConfig): the protocol.
        t_range (tuple): (t_lo, t_hi); defaults to a window around the
            short-time optimum.
        grid (int): number of grid points.
        xtol (float): refinement tolerance in ln t.
        func (callable): alternative Delta b(t).

    Returns:
        UncertaintyCurve
    """
    if t_range is None:
        t_range = suggest_time_range(config)
    t_lo, t_hi = t_range
    if t_lo <= 0:
        raise InvalidParameter("t_lo must be positive")
    grid = grid or prms.Estimation.grid
    xtol = xtol or prms.Estimation.refine_xtol
    func = func or functools.partial(delta_b, config)
    times = log_grid(t_lo, t_hi, grid)
    res = minimize_on_log_grid(func, times, xtol=xtol)
    return UncertaintyCurve(
        times=times,
        delta_b=res.values,
        tau_opt=res.x_opt,
        delta_b_opt=res.f_opt,
        boundary=res.boundary,
    )


# ----------------------------------------------------------------------------
# short-time optimum and quoted asymptotics
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ShortTimeOptimum:
    a0: float
    a2: float
    h0: float
    tau_opt: float
    delta_b_opt: float


def _constants_for(model, x):
    if model.cutoff == "exponential" and model.dimension == 1:
        return short_time_constants(model, x)
    return numeric_short_time_constants(model, x)


def short_time_optimum(config):
    """Optimum of Delta b^2 ~ (a0 + a2 u^2) / (T t h0^2 N^2 / 4), u = w_c t.

    tau_opt is the dimensionless w_c tau; delta_b_opt carries the
    sqrt(w_c / T) factor.
    """
    g = config.geometry
    n = config.n_qubits
    if not g.is_clustered:
        raise UnsupportedRegime("short-time optimum needs a clustered geometry")
    constants = _constants_for(config.model, g.x if g.regime == "even_odd" else 0.0)
    chi_s0_sq = constants.chi0_sq
    if g.regime == "collective":
        cross = n * (n - 1) * chi_s0_sq
    else:
        h = n // 2
        cross = n * (h - 1) * chi_s0_sq + n * n / 2 * constants.chi_d0_sq

    if config.state == "oats":
        theta, beta = config.angles()
        a0 = oats_variance(n, theta, beta)
    elif config.state == "css":
        theta, a0 = 0.0, n / 4
    else:
        raise UnsupportedState("short-time optimum covers CSS and OATS probes")
    a2 = 0.25 * (n * chi_s0_sq + cross * 0.5 * (1 + math.cos(theta) ** (n - 2)))
    h0 = math.cos(theta / 2) ** (n - 1)
    u = math.sqrt(a0 / a2)
    value = math.sqrt(config.model.omega_c / config.T) * math.sqrt(2) * (a0 * a2) ** 0.25 / (h0 * n / 2)
    return ShortTimeOptimum(a0, a2, h0, u, value)


def asymptotic_annotations(config):
    """Quoted large-N optima (units: tau in 1/w_c, delta_b in sqrt(w_c/T))"""
    g = config.geometry
    n = config.n_qubits
    constants = _constants_for(config.model, g.x if g.regime == "even_odd" else 0.0)
    chi0 = math.sqrt(constants.chi0_sq)
    notes = {}
    if config.state == "css" and g.regime == "collective":
        notes["tau_opt"] = 1 / (chi0 * math.sqrt(n))
        notes["delta_b_opt"] = math.sqrt(2 * chi0) * n ** -0.25
    elif config.state == "css" and g.regime == "even_odd":
        total = constants.chi0_sq + constants.chi_d0_sq
        notes["tau_opt_quoted"] = 2 ** 0.25 * total ** -0.5 * n ** -0.5
        notes["tau_opt"] = math.sqrt(2) * total ** -0.5 * n ** -0.5
        notes["delta_b_opt"] = 2 ** 0.25 * total ** 0.25 * n ** -0.25
    elif config.state == "oats" and g.regime == "collective":
        notes["tau_opt"] = 3 ** (1 / 3) * 2 ** -0.5 / chi0 * n ** (-5 / 6)
        notes["delta_b_exponent"] = -5 / 12
    notes["theta_opt"] = 12 ** (1 / 6) * 2 ** (2 / 3) * n ** (-2 / 3)
    return notes


# ----------------------------------------------------------------------------
# concurrence zeros and Delta b minima
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ConcurrenceDip:
    k: int
    t_zero: float
    t_min: float
    concurrence: float
    revival: float
    delta_b_min: float

    @property
    def offset(self):
        return abs(self.t_zero - self.t_min)

    def as_row(self):
        return dict(
            k=self.k,
            t_zero=self.t_zero,
            t_min=self.t_min,
            offset=self.offset,
            concurrence=self.concurrence,
            revival=self.revival,
            delta_b_min=self.delta_b_min,
        )


def _phase_crossing(config, target, start, t_max):
    """first t after ``start`` with Psi_s(t) = target"""
    g = config.geometry
    step = 0.1 / config.model.omega_c

    def excess(t):
        return cluster_coefficients(config.model, g, t).psi_s - target

    lo, hi = start, start + step
    while excess(hi) < 0:
        lo, hi = hi, hi + step
        if hi > t_max:
            raise InvalidParameter(f"Psi_s stays below {target:.4g} up to t={t_max:.4g}")
    return optimize.brentq(excess, lo, hi, xtol=1.0e-13)


def concurrence_dips(config, count=5, samples=41, t_max=None, xtol=1.0e-10):
    """Zeros of the two-qubit concurrence of a collective CSS and the
    neighbouring minima of Delta b.

    The k-th zero sits at Psi_s(t) = k pi, where the reduced state is a
    dephased product. The minimum of Delta b is searched between
    Psi_s = (k - 1/3) pi and (k + 1/3) pi, and ``revival`` is the largest
    concurrence sampled on that interval.

    Returns:
        list of ConcurrenceDip
    """
    g = config.geometry
    if g.regime != "collective":
        raise UnsupportedRegime("concurrence dips are defined for the collective regime")
    if config.state != "css":
        raise UnsupportedState("concurrence dips compare against the CSS Delta b")
    if count < 1:
        raise InvalidParameter("count must be at least 1")
    omega_c = config.model.omega_c
    t_max = 100.0 / omega_c if t_max is None else t_max

    def concurrence(t):
        return two_qubit_concurrence(config.model, config.n_qubits, t, config.b, g)

    dips = []
    start = 1.0e-3 / omega_c
    for k in range(1, count + 1):
        t_lo = _phase_crossing(config, (k - 1 / 3) * math.pi, start, t_max)
        t_zero = _phase_crossing(config, k * math.pi, t_lo, t_max)
        t_hi = _phase_crossing(config, (k + 1 / 3) * math.pi, t_zero, t_max)
        res = optimize.minimize_scalar(
            lambda t: delta_b(config, t),
            bounds=(t_lo, t_hi),
            method="bounded",
            options={"xatol": xtol},
        )
        revival = max(concurrence(t) for t in np.linspace(t_lo, t_hi, samples))
        dip = ConcurrenceDip(k, t_zero, float(res.x), concurrence(t_zero), revival, float(res.fun))
        logging.debug(f"dip {k}: t_zero={dip.t_zero:.6g} t_min={dip.t_min:.6g} offset={dip.offset:.3g}")
        dips.append(dip)
        start = t_hi
    return dips
