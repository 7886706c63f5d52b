"""Dynamic coefficients kappa, xi, vartheta of the spin-boson bath for
collective, even-odd and positional qubit geometries.

Times are measured in units of 1/w_c, and all integrals are carried out in
the dimensionless frequency u = w / w_c, where J(w) dw / w^2 becomes
alpha u^(s-2) K(u) du.
"""

import functools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ramseypy.parameters import prms
from ramseypy.exceptions import InvalidParameter, UnsupportedRegime
from ramseypy.core.numerics import (
    QuadratureSpec,
    gauss_legendre_panels,
    integrate_semi_infinite,
)
from ramseypy.core.noise import (
    angular_factor,
    classical_quantum_spectra,
    filter_functions,
    thermal_factor,
)

REGIMES = ("collective", "even_odd", "positions")
_REGIME_ALIASES = {"even-odd": "even_odd", "eo": "even_odd", "coll": "collective"}

# below this u*tau, u*tau - sin(u*tau) is taken from its Taylor series
_SIN_DEFECT_SERIES = 5.0e-2
# Gaussian-cutoff integrands are below double precision beyond this u
_GAUSSIAN_UPPER = 8.0


def normalize_regime(name):
    name = str(name).lower()
    name = _REGIME_ALIASES.get(name, name)
    if name not in REGIMES:
        raise InvalidParameter(f"unknown regime: {name}")
    return name


@dataclass(frozen=True)
class TransitGeometry:
    """Where the qubits sit.

    ``even_odd`` puts qubit n in cluster n % 2, with the two clusters at
    dimensionless transit time ``x``. ``positions`` holds an (N, D) array of
    lengths; transit times follow as x_nm = w_c |r_n - r_m| / v.
    """

    regime: str
    n_qubits: int
    x: float = 0.0
    positions: np.ndarray = field(default=None, compare=False)
    dimension: int = 1

    def __post_init__(self):
        object.__setattr__(self, "regime", normalize_regime(self.regime))
        if self.n_qubits < 1:
            raise InvalidParameter("need at least one qubit")
        if self.regime == "even_odd":
            if self.x < 0:
                raise InvalidParameter("even-odd transit time x must be >= 0")
            if self.n_qubits % 2:
                raise InvalidParameter("even-odd regime needs an even N")
        if self.regime == "positions":
            if self.positions is None:
                raise InvalidParameter("positional geometry needs positions")
            r = np.asarray(self.positions, dtype=float)
            if r.ndim == 1:
                r = r[:, None]
            if r.shape[0] != self.n_qubits:
                raise InvalidParameter(
                    f"got {r.shape[0]} positions for {self.n_qubits} qubits"
                )
            object.__setattr__(self, "positions", r)
            object.__setattr__(self, "dimension", r.shape[1])

    @classmethod
    def collective(cls, n_qubits):
        return cls("collective", n_qubits)

    @classmethod
    def even_odd(cls, n_qubits, x):
        return cls("even_odd", n_qubits, x=float(x))

    @classmethod
    def from_positions(cls, positions):
        r = np.asarray(positions, dtype=float)
        return cls("positions", len(r), positions=r)

    @property
    def is_clustered(self):
        return self.regime in ("collective", "even_odd")

    def clusters(self):
        n = np.arange(self.n_qubits)
        if self.regime == "even_odd":
            return n % 2
        return np.zeros(self.n_qubits, dtype=int)

    def transit_matrix(self, model=None):
        """x_nm = w_c |r_n - r_m| / v"""
        if self.regime == "collective":
            return np.zeros((self.n_qubits, self.n_qubits))
        if self.regime == "even_odd":
            c = self.clusters()
            return self.x * (c[:, None] != c[None, :])
        scale = 1.0 if model is None else model.omega_c / model.speed
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return scale * np.sqrt(np.sum(diff ** 2, axis=-1))


@dataclass(frozen=True)
class CoefficientSet:
    """Dense N x N coefficient matrices at time t."""

    t: float
    kappa: np.ndarray
    xi: np.ndarray
    vartheta: np.ndarray = None

    def __post_init__(self):
        kappa = np.asarray(self.kappa, dtype=float)
        xi = np.asarray(self.xi, dtype=float)
        if kappa.shape != xi.shape or kappa.ndim != 2 or kappa.shape[0] != kappa.shape[1]:
            raise InvalidParameter("kappa and xi must be square matrices of equal size")
        vartheta = self.vartheta
        vartheta = np.zeros_like(kappa) if vartheta is None else np.asarray(vartheta, float)
        if vartheta.shape != kappa.shape:
            raise InvalidParameter("vartheta has the wrong shape")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "vartheta", vartheta)

    @property
    def n_qubits(self):
        return self.kappa.shape[0]

    @classmethod
    def zeros(cls, n_qubits, t=0.0):
        z = np.zeros((n_qubits, n_qubits))
        return cls(t, z, z.copy())


@dataclass(frozen=True)
class ClusterCoefficients:
    """Two-valued coefficients of a clustered geometry: ``_s`` for pairs in
    the same cluster (and the diagonal), ``_d`` for pairs across clusters.
    For the collective regime the two values coincide."""

    t: float
    kappa_s: float
    kappa_d: float
    xi_s: float
    xi_d: float

    @property
    def chi_s(self):
        return 4.0 * self.kappa_s

    @property
    def chi_d(self):
        return 4.0 * self.kappa_d

    @property
    def psi_s(self):
        return 4.0 * self.xi_s

    @property
    def psi_d(self):
        return 4.0 * self.xi_d

    def dense(self, n_qubits, regime="even_odd"):
        if normalize_regime(regime) == "collective":
            c = np.zeros(n_qubits, dtype=int)
        else:
            c = np.arange(n_qubits) % 2
        same = c[:, None] == c[None, :]
        kappa = np.where(same, self.kappa_s, self.kappa_d)
        xi = np.where(same, self.xi_s, self.xi_d)
        return CoefficientSet(self.t, kappa, xi)

    def as_dict(self):
        return dict(
            t=self.t,
            kappa_s=self.kappa_s,
            kappa_d=self.kappa_d,
            xi_s=self.xi_s,
            xi_d=self.xi_d,
            chi_s=self.chi_s,
            chi_d=self.chi_d,
            psi_s=self.psi_s,
            psi_d=self.psi_d,
        )


@dataclass(frozen=True)
class ShortTimeConstants:
    """kappa(t) ~ kappa2 (w_c t)^2 and xi(t) ~ xi3 (w_c t)^3 at transit time x,
    plus the decay/phase constants chi0^2, Psi0^3 (x = 0) and chi_d0^2,
    Psi_d0^3 (at x)."""

    x: float
    kappa2: float
    xi3: float
    chi0_sq: float
    psi0_cu: float
    chi_d0_sq: float
    psi_d0_cu: float

    @property
    def chi_s0_sq(self):
        return self.chi0_sq

    @property
    def psi_s0_cu(self):
        return self.psi0_cu


def _sin_defect_series(v):
    v2 = v * v
    return v * v2 * (1.0 / 6.0 - v2 * (1.0 / 120.0 - v2 * (1.0 / 5040.0 - v2 / 362880.0)))


def sin_defect(v):
    """v - sin v without cancellation (scalar or array)"""
    if np.ndim(v) == 0:
        if v < _SIN_DEFECT_SERIES:
            return _sin_defect_series(v)
        return v - math.sin(v)
    v = np.asarray(v, dtype=float)
    return np.where(v < _SIN_DEFECT_SERIES, _sin_defect_series(v), v - np.sin(v))


def bath_weight(model, u):
    """alpha u^(s-2) K(u)"""
    if np.ndim(u) != 0:
        u = np.asarray(u, dtype=float)
        return model.alpha * u ** (model.ohmicity - 2.0) * model.cutoff_function(
            u * model.omega_c
        )
    if model.cutoff == "gaussian":
        k = math.exp(-u * u)
    else:
        k = math.exp(-u)
    return model.alpha * u ** (model.ohmicity - 2.0) * k


def _period(tau, x):
    longest = max(tau, x)
    return math.pi / longest if longest > 1.0 else None


@functools.lru_cache(maxsize=4096)
def _pair_coefficients(model, x, tau, spec):
    clamp = prms.Quadrature.transit_clamp
    if x > clamp:
        logging.debug(f"transit time {x:.3g} beyond {clamp:.3g}: cross terms set to 0")
        return 0.0, 0.0

    dim = model.dimension
    omega_c = model.omega_c

    def kappa_integrand(u):
        if u == 0.0:
            return 0.0
        # 1 - cos(u tau) = 2 sin^2(u tau / 2), divided by tau^2
        h = 2.0 * (math.sin(0.5 * u * tau) / tau) ** 2
        return (
            bath_weight(model, u)
            * h
            * angular_factor(dim, u * x)
            * thermal_factor(model, u * omega_c)
        )

    def xi_integrand(u):
        if u == 0.0:
            return 0.0
        h = sin_defect(u * tau) / tau ** 3
        return bath_weight(model, u) * h * angular_factor(dim, u * x)

    period = _period(tau, x)
    kappa = 0.25 * tau ** 2 * integrate_semi_infinite(kappa_integrand, spec, period=period)
    xi = 0.25 * tau ** 3 * integrate_semi_infinite(xi_integrand, spec, period=period)
    return kappa, xi


def pair_coefficients(model, x, t, spec=None):
    """(kappa_nm, xi_nm) for one pair at transit time x and time t.

    Args:
        model (SpectralModel): the bath.
        x (float): dimensionless transit time w_c t_nm.
        t (float): evolution time (units of 1/w_c).
        spec (QuadratureSpec): tolerances.

    Returns:
        tuple of floats
    """
    if t < 0:
        raise InvalidParameter("t must be >= 0")
    if x < 0:
        raise InvalidParameter("x must be >= 0")
    if t == 0:
        return 0.0, 0.0
    if spec is None:
        spec = QuadratureSpec.from_prms()
    return _pair_coefficients(model, float(x), float(model.omega_c * t), spec)


def cluster_coefficients(model, geometry, t, spec=None):
    """Scalar coefficients of a collective or even-odd geometry."""
    if not geometry.is_clustered:
        raise UnsupportedRegime("cluster coefficients need a collective or even-odd geometry")
    kappa_s, xi_s = pair_coefficients(model, 0.0, t, spec)
    if geometry.regime == "collective":
        kappa_d, xi_d = kappa_s, xi_s
    else:
        kappa_d, xi_d = pair_coefficients(model, geometry.x, t, spec)
    return ClusterCoefficients(t, kappa_s, kappa_d, xi_s, xi_d)


def dynamic_coefficients(model, geometry, t, spec=None):
    """Dense kappa, xi, vartheta matrices (vartheta vanishes for the
    isotropic spin-boson bath).

    Args:
        model (SpectralModel): the bath.
        geometry (TransitGeometry): the qubit layout.
        t (float): evolution time (units of 1/w_c).
        spec (QuadratureSpec): tolerances.

    Returns:
        CoefficientSet
    """
    if t < 0:
        raise InvalidParameter("t must be >= 0")
    if geometry.is_clustered:
        return cluster_coefficients(model, geometry, t, spec).dense(
            geometry.n_qubits, geometry.regime
        )

    transit = geometry.transit_matrix(model)
    n = geometry.n_qubits
    kappa = np.zeros((n, n))
    xi = np.zeros((n, n))
    diag = pair_coefficients(model, 0.0, t, spec)
    for i in range(n):
        kappa[i, i], xi[i, i] = diag
        for j in range(i + 1, n):
            kappa[i, j], xi[i, j] = pair_coefficients(model, transit[i, j], t, spec)
            kappa[j, i], xi[j, i] = kappa[i, j], xi[i, j]
    return CoefficientSet(t, kappa, xi)


class PairKernel:
    """kappa and xi of every pair of a fixed geometry on one set of composite
    Gauss-Legendre nodes.

    The angular factors f_D(u x_nm) are tabulated once; each time point then
    costs two matrix-vector products. Panels are narrow enough to resolve
    the fastest oscillation up to ``t_max``.
    """

    def __init__(self, model, geometry, t_max, order=16, spec=None):
        if t_max <= 0:
            raise InvalidParameter("t_max must be positive")
        if spec is None:
            spec = QuadratureSpec.from_prms()
        self.model = model
        self.n_qubits = geometry.n_qubits
        self.t_max = float(t_max)
        self._upper = np.triu_indices(self.n_qubits, 1)

        transit = np.concatenate([[0.0], geometry.transit_matrix(model)[self._upper]])
        far = transit > prms.Quadrature.transit_clamp
        longest = max(model.omega_c * self.t_max, float(transit[~far].max()))
        width = min(1.0, math.pi / longest)
        if model.cutoff == "gaussian":
            upper = _GAUSSIAN_UPPER
        else:
            upper = spec.truncation_multiplier
        u, w = gauss_legendre_panels(0.0, upper, width, order)

        base = 0.25 * w * bath_weight(model, u)
        self._u = u
        self._base_kappa = base * thermal_factor(model, u * model.omega_c)
        self._base_xi = base
        self._angular = angular_factor(
            model.dimension, np.outer(u, np.where(far, 0.0, transit))
        )
        self._angular[:, far] = 0.0
        logging.debug(f"pair kernel: {len(u)} nodes x {len(transit)} transit times")

    def pair_values(self, t):
        """(kappa, xi) arrays: the diagonal value first, then the upper
        triangle in row-major order"""
        if t < 0 or t > self.t_max * (1.0 + 1e-12):
            raise InvalidParameter(f"t={t} outside [0, {self.t_max}]")
        v = self._u * (self.model.omega_c * t)
        kappa = (self._base_kappa * 2.0 * np.sin(0.5 * v) ** 2) @ self._angular
        xi = (self._base_xi * sin_defect(v)) @ self._angular
        return kappa, xi

    def _dense(self, values):
        out = np.empty((self.n_qubits, self.n_qubits))
        i, j = self._upper
        out[i, j] = values[1:]
        out[j, i] = values[1:]
        np.fill_diagonal(out, values[0])
        return out

    def at(self, t):
        kappa, xi = self.pair_values(t)
        return CoefficientSet(t, self._dense(kappa), self._dense(xi))

    def kappa_sum(self, t):
        """sum over all n, m of kappa_nm"""
        kappa, _ = self.pair_values(t)
        return self.n_qubits * kappa[0] + 2.0 * float(np.sum(kappa[1:]))


def decay_phase_map(coeffs):
    """chi = 4 kappa, Psi = 4 (xi + vartheta)"""
    return 4.0 * coeffs.kappa, 4.0 * (coeffs.xi + coeffs.vartheta)


def short_time_constants(model, x=0.0):
    """Closed short-time constants for the exponential cutoff (D = 1).

    kappa2(x) = alpha Gamma(s+1)/4 cos[(s+1) atan x] / (1+x^2)^((s+1)/2)
    xi3(x) = alpha Gamma(s+2)/12 cos[(s+2) atan x] / (1+x^2)^(s/2+1)
    """
    if model.cutoff != "exponential":
        raise UnsupportedRegime(
            "closed short-time constants exist for the exponential cutoff only; "
            "use numeric_short_time_constants"
        )
    if model.dimension != 1:
        raise UnsupportedRegime("closed short-time constants are derived for D = 1")
    if x < 0:
        raise InvalidParameter("x must be >= 0")

    def kappa2(y):
        s, a = model.ohmicity, math.atan(y)
        return model.alpha * math.gamma(s + 1) / 4 * math.cos((s + 1) * a) / (1 + y * y) ** ((s + 1) / 2)

    def xi3(y):
        s, a = model.ohmicity, math.atan(y)
        return model.alpha * math.gamma(s + 2) / 12 * math.cos((s + 2) * a) / (1 + y * y) ** (s / 2 + 1)

    return _constants(x, kappa2, xi3)


def numeric_short_time_constants(model, x=0.0, spec=None):
    """Short-time constants for any cutoff and dimension, by quadrature of
    the t -> 0 limits of the coefficient integrands."""
    if x < 0:
        raise InvalidParameter("x must be >= 0")
    dim = model.dimension

    def kappa2(y):
        def integrand(u):
            if u == 0.0:
                return 0.0
            return (
                bath_weight(model, u)
                * 0.5 * u * u
                * angular_factor(dim, u * y)
                * thermal_factor(model, u * model.omega_c)
            )

        return 0.25 * integrate_semi_infinite(integrand, spec, period=_period(0.0, y))

    def xi3(y):
        def integrand(u):
            return bath_weight(model, u) * u ** 3 / 6.0 * angular_factor(dim, u * y)

        return 0.25 * integrate_semi_infinite(integrand, spec, period=_period(0.0, y))

    return _constants(x, kappa2, xi3)


def _constants(x, kappa2, xi3):
    k0, x0 = kappa2(0.0), xi3(0.0)
    kx, xx = (k0, x0) if x == 0 else (kappa2(x), xi3(x))
    return ShortTimeConstants(
        x=x,
        kappa2=kx,
        xi3=xx,
        chi0_sq=4.0 * k0,
        psi0_cu=4.0 * x0,
        chi_d0_sq=4.0 * kx,
        psi_d0_cu=4.0 * xx,
    )


@dataclass(frozen=True)
class OptimalTransit:
    x_opt: float
    kappa2_min: float
    x_closed: float = None


def optimal_transit_time(model, xtol=1.0e-10):
    """Transit time minimizing the short-time cross decay kappa2(x).

    The exponential cutoff has the closed value tan(pi / (s + 2)).
    """
    closed = None
    if model.cutoff == "exponential" and model.dimension == 1:
        closed = math.tan(math.pi / (model.ohmicity + 2))

        def kappa2(y):
            return short_time_constants(model, y).kappa2

        upper = math.tan(min(2 * math.pi / (model.ohmicity + 2), 0.5 * math.pi - 1e-3))
    else:

        def kappa2(y):
            return numeric_short_time_constants(model, y).kappa2

        upper = 5.0
    res = optimize.minimize_scalar(
        kappa2, bounds=(0.0, upper), method="bounded", options={"xatol": xtol}
    )
    return OptimalTransit(float(res.x), float(res.fun), closed)


def frequency_domain_kappa(model, x, t, spec=None):
    """kappa_nm = (1/32 pi) int_0^inf F+(w, t) S+(w) dw with the folded spectra"""

    def integrand(omega):
        if omega == 0.0:
            return 0.0
        s_plus, _ = classical_quantum_spectra(model, x, omega)
        return filter_functions(omega, t).f_plus * s_plus

    period = _period(model.omega_c * t, x)
    period = None if period is None else period * model.omega_c
    value = integrate_semi_infinite(integrand, spec, scale=model.omega_c, period=period)
    return value / (32.0 * math.pi)


def frequency_domain_xi(model, x, t, spec=None):
    """xi_nm = (1/16 pi) int_0^inf Im F-(w, t) S-(w) dw with the folded spectra"""

    def integrand(omega):
        if omega == 0.0:
            return 0.0
        _, s_minus = classical_quantum_spectra(model, x, omega)
        return filter_functions(omega, t).f_minus.imag * s_minus

    period = _period(model.omega_c * t, x)
    period = None if period is None else period * model.omega_c
    value = integrate_semi_infinite(integrand, spec, scale=model.omega_c, period=period)
    return value / (16.0 * math.pi)
