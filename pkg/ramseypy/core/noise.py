"""The bath: spectral density, filter functions, angular factors, folded
spectra and the spatially averaged two-point correlator."""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from ramseypy.parameters import prms
from ramseypy.exceptions import InvalidParameter, UnsupportedRegime
from ramseypy.core.numerics import integrate_semi_infinite, special_value

CUTOFFS = ("gaussian", "exponential")
_CUTOFF_ALIASES = {"gauss": "gaussian", "exp": "exponential"}


def normalize_cutoff(name):
    name = str(name).lower()
    name = _CUTOFF_ALIASES.get(name, name)
    if name not in CUTOFFS:
        raise InvalidParameter(f"unknown cutoff: {name}")
    return name


@dataclass(frozen=True)
class SpectralModel:
    """Spin-boson bath with J(w) = alpha w_c (w/w_c)^s K(w, w_c).

    ``inv_temperature`` may be ``inf`` (zero temperature, coth = 1).
    """

    alpha: float = 1.0
    ohmicity: float = 3.0
    cutoff: str = "exponential"
    omega_c: float = 1.0
    speed: float = 1.0
    inv_temperature: float = math.inf
    dimension: int = 1

    def __post_init__(self):
        object.__setattr__(self, "cutoff", normalize_cutoff(self.cutoff))
        if self.alpha <= 0:
            raise InvalidParameter("alpha must be positive")
        if self.ohmicity <= 1:
            raise InvalidParameter("only supra-Ohmic baths (s > 1) are supported")
        if self.omega_c <= 0 or self.speed <= 0:
            raise InvalidParameter("omega_c and speed must be positive")
        if self.inv_temperature <= 0:
            raise InvalidParameter("inv_temperature must be positive (inf allowed)")
        if self.dimension not in (1, 2, 3):
            raise InvalidParameter("dimension must be 1, 2 or 3")

    @classmethod
    def from_prms(cls, **overrides):
        kwargs = dict(prms.Model.to_dict())
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        kwargs["inv_temperature"] = float(kwargs["inv_temperature"])
        kwargs["dimension"] = int(kwargs["dimension"])
        return cls(**kwargs)

    def with_(self, **changes):
        return replace(self, **changes)

    @property
    def zero_temperature(self):
        return math.isinf(self.inv_temperature)

    def cutoff_function(self, omega):
        u = np.asarray(omega, dtype=float) / self.omega_c
        if self.cutoff == "gaussian":
            return np.exp(-(u ** 2))
        return np.exp(-u)


@dataclass(frozen=True)
class FilterPair:
    f_plus: float
    f_minus: complex


def spectral_density(model, omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise InvalidParameter("spectral_density is defined for omega >= 0")
    u = omega / model.omega_c
    value = model.alpha * model.omega_c * u ** model.ohmicity * model.cutoff_function(omega)
    return value if value.ndim else float(value)


def scaled_spectral_density(model, u):
    """J(u w_c) / w_c for scalar dimensionless frequency u >= 0"""
    if model.cutoff == "gaussian":
        k = math.exp(-u * u)
    else:
        k = math.exp(-u)
    return model.alpha * u ** model.ohmicity * k


def thermal_factor(model, omega):
    """coth(beta w / 2); 1 at zero temperature"""
    if model.zero_temperature:
        return 1.0
    if np.ndim(omega) == 0:
        return 1.0 / math.tanh(0.5 * model.inv_temperature * omega)
    return 1.0 / np.tanh(0.5 * model.inv_temperature * np.asarray(omega, dtype=float))


def filter_functions(omega, t, threshold=None):
    """F+(w, t) = 2(1 - cos wt)/w^2 and F-(w, t) = (1 - e^{iwt} + iwt)/w^2.

    Below |wt| < threshold the removable singularity is replaced by its
    Taylor series.
    """
    if threshold is None:
        threshold = prms.Quadrature.series_threshold
    x = omega * t
    if abs(x) < threshold:
        t2 = t * t
        f_plus = t2 * (1.0 - x * x / 12.0 + x ** 4 / 360.0)
        f_minus = t2 * complex(0.5 - x * x / 24.0, x / 6.0 - x ** 3 / 120.0)
        return FilterPair(f_plus, f_minus)
    w2 = omega * omega
    f_plus = 4.0 * math.sin(0.5 * x) ** 2 / w2
    f_minus = complex(1.0 - math.cos(x), x - math.sin(x)) / w2
    return FilterPair(f_plus, f_minus)


def angular_factor(dimension, u):
    """f_D(u): 2 cos u (D=1), 2 sin(u)/u (D=2), 4 pi sin(u)/u (D=3).

    Accepts a scalar (fast path for quadrature integrands) or an array.
    """
    if dimension not in (1, 2, 3):
        raise InvalidParameter("dimension must be 1, 2 or 3")
    if np.ndim(u) == 0:
        if u < 0:
            raise InvalidParameter("angular_factor needs u >= 0")
        if dimension == 1:
            return 2.0 * math.cos(u)
        sinc = math.sin(u) / u if u != 0 else 1.0
    else:
        u = np.asarray(u, dtype=float)
        if np.any(u < 0):
            raise InvalidParameter("angular_factor needs u >= 0")
        if dimension == 1:
            return 2.0 * np.cos(u)
        sinc = np.sinc(u / math.pi)
    if dimension == 2:
        return 2.0 * sinc
    return 4.0 * math.pi * sinc


def classical_quantum_spectra(model, x, omega):
    """Classical and quantum spectra S+(w), S-(w) of a qubit pair with
    transit time x (units of 1/w_c), folded onto w >= 0.

    The delta comb over bath modes is collapsed into J(w); both signs of
    frequency are summed, so that kappa = (1/32 pi) int_0^inf F+ S+ dw.
    """
    j = spectral_density(model, omega)
    f = angular_factor(model.dimension, omega * x / model.omega_c)
    s_minus = 4.0 * math.pi * j * f
    return s_minus * thermal_factor(model, omega), s_minus


def averaged_correlator(model, eta, t):
    """Spatial average of <B_n(t) B_m(0)> for Gaussian layouts (D = 1),
    in the large-dispersion closed form. Units of w_c^2."""
    _check_averaged_correlator(model, eta)
    s = model.ohmicity
    y = eta * model.omega_c * t
    z = -(y ** 2) / 4.0
    real = special_value("gamma", ((s + 1) / 2,)) * special_value(
        "hyp1f1", ((s + 1) / 2, 0.5, z)
    )
    imag = -y * special_value("gamma", (s / 2 + 1,)) * special_value(
        "hyp1f1", ((s + 2) / 2, 1.5, z)
    )
    prefactor = 0.5 * model.alpha * eta ** (s + 1) * model.omega_c ** 2
    return prefactor * complex(real, imag)


def averaged_correlator_quadrature(model, eta, t, spec=None):
    """int_0^inf J(w) exp(-w^2 eps^2 / v^2) exp(-iwt) dw by direct quadrature"""
    _check_averaged_correlator(model, eta)
    tau = model.omega_c * t

    def envelope(u):
        return scaled_spectral_density(model, u) * math.exp(-((u / eta) ** 2))

    period = math.pi / tau if tau > 0 else None
    # the envelope lives on u < ~10 eta
    scale = min(1.0, 10.0 * eta)
    real = integrate_semi_infinite(
        lambda u: envelope(u) * math.cos(u * tau), spec, scale=scale, period=period
    )
    imag = -integrate_semi_infinite(
        lambda u: envelope(u) * math.sin(u * tau), spec, scale=scale, period=period
    )
    return model.omega_c ** 2 * complex(real, imag)


def _check_averaged_correlator(model, eta):
    if eta <= 0:
        raise InvalidParameter("eta must be positive")
    if model.dimension != 1:
        raise UnsupportedRegime("the averaged correlator is available for D = 1")
    if model.cutoff != "gaussian":
        raise UnsupportedRegime(
            "the averaged correlator closed form needs a Gaussian cutoff"
        )
    if not model.zero_temperature:
        logging.warning("averaged correlator assumes coth = 1 (low temperature)")
