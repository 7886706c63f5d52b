"""Numerical kernel: semi-infinite quadrature, special functions, power-law
fitting, grid minimization and reproducible Gaussian sampling.

All frequency integrals of the package are routed through
``integrate_semi_infinite`` so that truncation, oscillation breakpoints and
convergence failures are handled in one place.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special, stats

from ramseypy.parameters import prms
from ramseypy.exceptions import (
    InvalidParameter,
    QuadratureError,
    SpecialFunctionError,
)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and truncation for integrals over [0, inf).

    The upper limit is ``truncation_multiplier * scale`` where ``scale`` is the
    cutoff frequency of the integrand.
    """

    relative_tolerance: float = 1.0e-10
    absolute_tolerance: float = 1.0e-14
    max_subdivisions: int = 400
    truncation_multiplier: float = 50.0
    max_breakpoints: int = 100
    failure_tolerance: float = 1.0e-6

    def __post_init__(self):
        if self.relative_tolerance <= 0 or self.absolute_tolerance <= 0:
            raise InvalidParameter("quadrature tolerances must be positive")
        if self.truncation_multiplier < 10:
            raise InvalidParameter("truncation_multiplier must be at least 10")
        if self.max_subdivisions < 1:
            raise InvalidParameter("max_subdivisions must be positive")

    @classmethod
    def from_prms(cls, **overrides):
        q = prms.Quadrature
        kwargs = dict(
            relative_tolerance=q.relative_tolerance,
            absolute_tolerance=q.absolute_tolerance,
            max_subdivisions=int(q.max_subdivisions),
            truncation_multiplier=q.truncation_multiplier,
            max_breakpoints=int(q.max_breakpoints),
            failure_tolerance=q.failure_tolerance,
        )
        kwargs.update(overrides)
        return cls(**kwargs)


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    r_squared: float

    def __call__(self, n):
        return self.prefactor * np.power(n, self.exponent)


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream_index) pair naming one reproducible random sequence.

    Streams with different indices are statistically independent, so one
    stream can be handed to each worker without any shared state.
    """

    seed: int
    stream_index: int = 0

    def __post_init__(self):
        if self.seed < 0 or self.stream_index < 0:
            raise InvalidParameter("seed and stream_index must be non-negative")

    def generator(self):
        return np.random.default_rng(
            np.random.SeedSequence([int(self.seed), int(self.stream_index)])
        )


def _breakpoints(upper, period, max_breakpoints):
    """integer multiples of ``period`` inside (0, upper), thinned to at most
    ``max_breakpoints`` points (spacing stays an integer multiple)"""
    if period is None or period <= 0 or not np.isfinite(period):
        return None
    count = int(upper / period)
    if count < 1:
        return None
    stride = max(1, math.ceil(count / max_breakpoints))
    points = np.arange(stride, count + 1, stride) * period
    points = points[points < upper]
    if len(points) == 0:
        return None
    return points


def integrate_semi_infinite(integrand, spec=None, scale=1.0, period=None):
    """Integrate ``integrand`` over [0, truncation_multiplier * scale].

    Args:
        integrand (callable): real function of one float.
        spec (QuadratureSpec): tolerances (defaults from prms).
        scale (float): cutoff frequency of the integrand.
        period (float): if given, the interval is split at integer multiples
            of this value (use pi/max(t, t_nm) for oscillatory kernels).

    Returns:
        float

    Raises:
        QuadratureError: if the adaptive routine fails and its error estimate
            exceeds the accepted failure tolerance.
    """
    if spec is None:
        spec = QuadratureSpec.from_prms()
    upper = spec.truncation_multiplier * scale
    points = _breakpoints(upper, period, spec.max_breakpoints)
    limit = spec.max_subdivisions
    if points is not None:
        limit = max(limit, 4 * len(points))

    result = integrate.quad(
        integrand,
        0.0,
        upper,
        epsabs=spec.absolute_tolerance,
        epsrel=spec.relative_tolerance,
        limit=limit,
        points=points,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3:
        message = result[3]
        accepted = abs(abserr) <= max(
            spec.failure_tolerance * abs(value), 10 * spec.absolute_tolerance
        )
        if not accepted or not np.isfinite(value):
            raise QuadratureError(
                f"quadrature did not converge (abserr={abserr:.3e}): {message}",
                abserr=abserr,
            )
        logging.debug(f"quadrature accepted with abserr={abserr:.3e}: {message}")
    return value


def gauss_legendre_panels(lower, upper, width, order=16):
    """Nodes and weights of composite Gauss-Legendre quadrature on
    [lower, upper], split into equal panels no wider than ``width``.

    Used where one set of nodes serves many integrands at once (a matrix of
    transit times, a grid of times).
    """
    if not upper > lower:
        raise InvalidParameter(f"need lower < upper (got {lower}, {upper})")
    if width <= 0:
        raise InvalidParameter("panel width must be positive")
    if order < 2:
        raise InvalidParameter("Gauss-Legendre order must be at least 2")
    count = max(1, math.ceil((upper - lower) / width))
    edges = np.linspace(lower, upper, count + 1)
    x, w = np.polynomial.legendre.leggauss(int(order))
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    return (mid + half * x).ravel(), (half * w).ravel()


def _is_pole(x):
    return x <= 0 and float(x).is_integer()


def special_value(kind, arguments):
    """Evaluate a real special function.

    Args:
        kind (str): "gamma", "hyp1f1" or "hyp2f1".
        arguments (tuple): (x,), (a, b, z) or (a, b, c, z).

    Returns:
        float
    """
    arguments = tuple(float(a) for a in arguments)
    if kind == "gamma":
        (x,) = arguments
        if _is_pole(x):
            raise SpecialFunctionError(f"gamma has a pole at {x}")
        value = special.gamma(x)
    elif kind == "hyp1f1":
        a, b, z = arguments
        if _is_pole(b):
            raise SpecialFunctionError(f"hyp1f1 undefined for b={b}")
        value = special.hyp1f1(a, b, z)
    elif kind == "hyp2f1":
        a, b, c, z = arguments
        if abs(z) >= 1:
            raise SpecialFunctionError(f"hyp2f1 series does not converge at z={z}")
        if _is_pole(c):
            raise SpecialFunctionError(f"hyp2f1 undefined for c={c}")
        value = special.hyp2f1(a, b, c, z)
    else:
        raise InvalidParameter(f"unknown special function: {kind}")

    if not np.isfinite(value):
        raise SpecialFunctionError(f"{kind}{arguments} is not finite")
    return float(value)


def fit_power_law(points):
    """Least-squares straight line through (ln N, ln y).

    Args:
        points: iterable of (N, y) pairs.

    Returns:
        PowerLawFit
    """
    points = list(points)
    if len(points) < 3:
        raise InvalidParameter("fit_power_law needs at least 3 points")
    n, y = (np.asarray(v, dtype=float) for v in zip(*points))
    if np.any(n <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise InvalidParameter("fit_power_law needs positive, finite values")

    log_n, log_y = np.log(n), np.log(y)
    fit = stats.linregress(log_n, log_y)
    residuals = log_y - (fit.intercept + fit.slope * log_n)
    ss_res = float(np.sum(residuals ** 2))
    ss_tot = float(np.sum((log_y - log_y.mean()) ** 2))
    if ss_tot <= 1e-30:
        r_squared = 1.0
    else:
        r_squared = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return PowerLawFit(
        exponent=float(fit.slope),
        prefactor=float(np.exp(fit.intercept)),
        r_squared=r_squared,
    )


def sample_standard_normals(stream, count):
    if count < 1:
        raise InvalidParameter("count must be at least 1")
    return stream.generator().standard_normal(int(count))


def log_grid(lo, hi, count):
    if lo <= 0 or hi <= lo:
        raise InvalidParameter(f"need 0 < lo < hi (got {lo}, {hi})")
    if count < 2:
        raise InvalidParameter("a grid needs at least 2 points")
    return np.geomspace(lo, hi, int(count))


@dataclass(frozen=True)
class GridMinimum:
    x_opt: float
    f_opt: float
    values: np.ndarray
    boundary: bool


def minimize_on_log_grid(func, grid, xtol=1.0e-6, values=None):
    """Minimum of ``func`` over a positive grid, refined between the
    neighbours of the best grid point by bounded Brent (golden-section with
    parabolic steps) in ln x.

    A minimum sitting on the first or last grid point is returned unrefined
    with ``boundary=True``.
    """
    grid = np.asarray(grid, dtype=float)
    if values is None:
        values = np.array([func(x) for x in grid], dtype=float)
    finite = np.where(np.isfinite(values), values, np.inf)
    index = int(np.argmin(finite))
    if not np.isfinite(finite[index]):
        raise InvalidParameter("function is not finite anywhere on the grid")

    if index == 0 or index == len(grid) - 1:
        logging.warning(
            f"minimum at grid boundary x={grid[index]:.6g}; widen the range"
        )
        return GridMinimum(grid[index], finite[index], values, True)

    lo, hi = np.log(grid[index - 1]), np.log(grid[index + 1])
    res = optimize.minimize_scalar(
        lambda u: func(np.exp(u)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": xtol},
    )
    x_opt, f_opt = float(np.exp(res.x)), float(res.fun)
    if not f_opt <= finite[index]:
        x_opt, f_opt = float(grid[index]), float(finite[index])
    return GridMinimum(x_opt, f_opt, values, False)


def refine_grid_minimum(grid, values):
    """Grid minimum refined to the vertex of the parabola in ln x through
    the best point and its two neighbours.

    For curves that are too expensive to re-evaluate (Monte Carlo averages).
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    finite = np.where(np.isfinite(values), values, np.inf)
    index = int(np.argmin(finite))
    if not np.isfinite(finite[index]):
        raise InvalidParameter("values are not finite anywhere on the grid")
    if index == 0 or index == len(grid) - 1:
        logging.warning(
            f"minimum at grid boundary x={grid[index]:.6g}; widen the range"
        )
        return GridMinimum(grid[index], finite[index], values, True)

    x = np.log(grid[index - 1 : index + 2])
    y = finite[index - 1 : index + 2]
    unrefined = GridMinimum(grid[index], finite[index], values, False)
    if not np.all(np.isfinite(y)):
        return unrefined
    c2, c1, c0 = np.polyfit(x, y, 2)
    if c2 <= 0:
        return unrefined
    vertex = float(np.clip(-c1 / (2 * c2), x[0], x[2]))
    f_vertex = float(np.polyval((c2, c1, c0), vertex))
    if not f_vertex <= finite[index]:
        return unrefined
    return GridMinimum(float(np.exp(vertex)), f_vertex, values, False)


def normal_quantile(p):
    """standard normal quantile z_p"""
    if not 0 < p < 1:
        raise InvalidParameter("probability must be in (0, 1)")
    return float(stats.norm.ppf(p))
