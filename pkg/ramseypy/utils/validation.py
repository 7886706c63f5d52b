"""The oracle suite behind ``ramseypy validate``.

Each check compares one computation against an independent route to the
same number (a closed form, a second representation or a Monte Carlo
oracle) and reports value, target, tolerance and the verdict. The quick
suite runs in seconds; ``full=True`` adds the large-N scaling fits, the
OATS cumulant moments against enumeration and the concurrence dips.
"""

import logging
import math

import numpy as np
import pandas as pd

from ramseypy.parameters.internal_settings import get_headers_validation
from ramseypy.core.numerics import RngStream, fit_power_law
from ramseypy.core.noise import (
    SpectralModel,
    averaged_correlator,
    averaged_correlator_quadrature,
)
from ramseypy.core.coefficients import (
    TransitGeometry,
    decay_phase_map,
    dynamic_coefficients,
    frequency_domain_kappa,
    frequency_domain_xi,
    optimal_transit_time,
    pair_coefficients,
    short_time_constants,
)
from ramseypy.core.dynamics import (
    BasisPair,
    element_factor,
    exact_expectations,
    qni_enumerate,
    qni_formula,
    ru_decay_oracle,
    spin_table,
)
from ramseypy.core.estimation import (
    ProtocolConfig,
    concurrence_dips,
    css_moments_collective,
    oats_moments,
    optimal_angles,
    optimize_time,
)
from ramseypy.core.randomized import required_samples


class _Report:
    def __init__(self):
        self.rows = []

    def relative(self, check, value, target, tolerance):
        passed = abs(value - target) <= tolerance * abs(target)
        self._add(check, value, target, tolerance, passed)

    def absolute(self, check, value, target, tolerance):
        passed = abs(value - target) <= tolerance
        self._add(check, value, target, tolerance, passed)

    def at_most(self, check, value, limit):
        self._add(check, value, limit, 0.0, value <= limit)

    def _add(self, check, value, target, tolerance, passed):
        level = logging.DEBUG if passed else logging.WARNING
        logging.log(level, f"{check}: {value:.10g} vs {target:.10g} (tol {tolerance:g})")
        self.rows.append((check, float(value), float(target), float(tolerance), bool(passed)))

    def frame(self):
        h = get_headers_validation()
        columns = [h.check, h.value, h.target, h.tolerance, h.passed]
        return pd.DataFrame(self.rows, columns=columns)


def _short_time(report):
    tau = 1.0e-3
    for s in (2.0, 3.0, 4.0):
        model = SpectralModel(ohmicity=s, cutoff="exponential")
        origin = short_time_constants(model, 0.0)
        for x in (0.0, 0.5, 1.0, 2.0):
            closed = short_time_constants(model, x)
            kappa, xi = pair_coefficients(model, x, tau)
            # cos[(s+2) atan x] vanishes at s=4, x=1: fall back to the x=0 scale
            report.absolute(
                f"kappa2 s={s:g} x={x:g}",
                kappa / tau ** 2,
                closed.kappa2,
                5e-3 * max(abs(closed.kappa2), 1e-3 * origin.kappa2),
            )
            report.absolute(
                f"xi3 s={s:g} x={x:g}",
                xi / tau ** 3,
                closed.xi3,
                5e-3 * max(abs(closed.xi3), 1e-3 * origin.xi3),
            )


def _frequency_domain(report):
    model = SpectralModel()
    for x, t in ((0.0, 0.7), (1.3, 2.0)):
        kappa, xi = pair_coefficients(model, x, t)
        report.relative(f"kappa time/frequency x={x:g}", frequency_domain_kappa(model, x, t), kappa, 1e-6)
        report.relative(f"xi time/frequency x={x:g}", frequency_domain_xi(model, x, t), xi, 1e-6)


def _optimal_transit(report):
    result = optimal_transit_time(SpectralModel(ohmicity=3.0))
    report.absolute("argmin kappa2(x)", result.x_opt, math.tan(math.pi / 5), 1e-4)


def _css_exact(report):
    n, b, t = 6, 0.3, 0.5
    model = SpectralModel()
    coeffs = dynamic_coefficients(model, TransitGeometry.collective(n), t)
    jy, jy2 = exact_expectations("css", coeffs, b, t)
    closed = css_moments_collective(4 * coeffs.kappa[0, 0], 4 * coeffs.xi[0, 0], n, b, t)
    report.relative("CSS <J_y> exact/closed", jy, closed.jy_mean, 1e-8)
    report.relative("CSS <J_y^2> exact/closed", jy2, closed.jy2_mean, 1e-8)


def _random_unitary(report, samples):
    n, t = 4, 0.8
    positions = np.array([0.0, 0.4, 1.1, 2.5])
    coeffs = dynamic_coefficients(SpectralModel(), TransitGeometry.from_positions(positions), t)
    table = spin_table(n)
    generator = RngStream(11).generator()
    for k in range(5):
        i, j = generator.integers(0, 2 ** n, size=2)
        pair = BasisPair(table[i], table[j])
        target = math.exp(-element_factor(pair, coeffs, 0.0, t).gamma)
        mean, stderr = ru_decay_oracle(pair, coeffs, samples, RngStream(11, k + 1), True)
        report.absolute(f"random unitary pair {k}", mean.real, target, 3 * stderr + 1e-12)


def _averaged_correlator(report):
    model = SpectralModel(cutoff="gaussian")
    eta = 0.01
    for t in (0.0, 50.0, 200.0):
        closed = averaged_correlator(model, eta, t)
        quad = averaged_correlator_quadrature(model, eta, t)
        report.absolute(f"averaged correlator t={t:g}", abs(closed - quad), 0.0, 1e-8)


def _qni(report):
    for n in range(2, 9, 2):
        general = qni_enumerate("general", n)
        report.absolute(f"QNI general N={n}", general.enumerated, qni_formula("general", n), 0)
        even_odd = qni_enumerate("even_odd", n)
        report.absolute(f"QNI even-odd N={n}", even_odd.by_case, qni_formula("even_odd", n), 0)


def _sample_size(report):
    epsilon = 2 * 0.024997895148220435  # two-sided tail of z = 1.96
    report.absolute("required samples", required_samples(2.0, 0.5, epsilon), 62, 0)


def _css_scaling(report):
    sizes = [1.0e3, 3.0e3, 1.0e4, 3.0e4, 1.0e5]
    base = ProtocolConfig.from_prms(model=SpectralModel(), state="css", regime="collective")
    points_tau, points_db = [], []
    for n in sizes:
        curve = optimize_time(base.with_(n_qubits=int(n)))
        points_tau.append((n, curve.tau_opt))
        points_db.append((n, curve.delta_b_opt))
    report.absolute("CSS tau_opt exponent", fit_power_law(points_tau).exponent, -0.5, 0.02)
    report.absolute("CSS delta_b_opt exponent", fit_power_law(points_db).exponent, -0.25, 0.02)


def _oats_scaling(report):
    sizes = [1.0e3, 3.0e3, 1.0e4, 3.0e4, 1.0e5]
    base = ProtocolConfig.from_prms(model=SpectralModel(), state="oats", regime="collective")
    points = [(n, optimize_time(base.with_(n_qubits=int(n))).delta_b_opt) for n in sizes]
    report.absolute("OATS delta_b_opt exponent", fit_power_law(points).exponent, -5 / 12, 0.02)


def oats_exact_deviations(sizes=(4, 6, 8, 10, 12), t=0.01, b=1.0):
    """relative deviation of the OATS cumulant moments from enumeration,
    per N: (N, <J_y>, <J_y^2>)"""
    model = SpectralModel()
    rows = []
    for n in sizes:
        coeffs = dynamic_coefficients(model, TransitGeometry.collective(n), t)
        angles = optimal_angles(n)
        theta, beta = angles.theta_opt, angles.beta_opt
        jy, jy2 = exact_expectations("oats", coeffs, b, t, theta=theta, beta=beta)
        chi, psi = decay_phase_map(coeffs)
        moments = oats_moments(chi, psi, theta, beta, b, t)
        rows.append(
            (n, abs(moments.jy_mean / jy - 1.0), abs(moments.jy2_mean / jy2 - 1.0))
        )
    return rows


def _oats_exact(report):
    for n, jy_error, jy2_error in oats_exact_deviations():
        report.at_most(f"OATS <J_y> cumulant/exact N={n}", jy_error, 1e-3)
        report.at_most(f"OATS <J_y^2> cumulant/exact N={n}", jy2_error, 1e-3)


def _concurrence_dips(report):
    config = ProtocolConfig.from_prms(model=SpectralModel(), N=100, state="css", regime="collective")
    dips = concurrence_dips(config, count=5)
    for dip in dips:
        report.absolute(f"concurrence zero k={dip.k}", dip.concurrence, 0.0, 1e-6)
        report.at_most(f"delta_b minimum k={dip.k} offset", dip.offset, 1e-2)
    # the rising decay pulls the first minima onto their zeros
    for before, after in zip(dips[2:], dips[3:]):
        report.at_most(f"offset k={after.k} / k={before.k}", after.offset / before.offset, 1.0)


def validation_engine(**kwargs):
    """run the oracle checks; returns ([frame], "validation")"""
    full = kwargs.get("full", False)
    samples = int(kwargs.get("samples", 20_000))
    report = _Report()
    _short_time(report)
    _frequency_domain(report)
    _optimal_transit(report)
    _css_exact(report)
    _random_unitary(report, samples)
    _averaged_correlator(report)
    _qni(report)
    _sample_size(report)
    if full:
        _css_scaling(report)
        _oats_scaling(report)
        _oats_exact(report)
        _concurrence_dips(report)
    return [report.frame()], "validation"
