import math

import numpy as np
import pytest

from ramseypy import log
from ramseypy.exceptions import (
    EnumerationTooLarge,
    InvalidParameter,
    NotPositiveSemidefinite,
    UnsupportedRegime,
    UnsupportedState,
)
from ramseypy.core import dynamics
from ramseypy.core.dynamics import BasisPair
from ramseypy.core.coefficients import (
    ClusterCoefficients,
    CoefficientSet,
    TransitGeometry,
    cluster_coefficients,
    dynamic_coefficients,
    decay_phase_map,
)
from ramseypy.core.estimation import (
    css_moments_collective,
    css_moments_dense,
    oats_moments,
    oats_variance,
)
from ramseypy.core.noise import SpectralModel
from ramseypy.core.numerics import RngStream
from . import fdv

log.setup_logging(default_level="DEBUG")


@pytest.fixture
def collective_coeffs():
    return ClusterCoefficients(0.5, 0.1, 0.1, 0.02, 0.02).dense(4, "collective")


@pytest.fixture
def positional_coeffs():
    geometry = TransitGeometry.from_positions(fdv.positions)
    return dynamic_coefficients(SpectralModel(), geometry, 0.8)


def test_spin_table_ordering():
    table = dynamics.spin_table(2)
    assert table.tolist() == [[1, 1], [1, -1], [-1, 1], [-1, -1]]
    assert dynamics.flip_mask(3, 0) == 4
    assert dynamics.flip_mask(3, 1, 2) == 3


def test_basis_pair_rejects():
    with pytest.raises(InvalidParameter):
        BasisPair([1, 1], [1, 1, 1])
    with pytest.raises(InvalidParameter):
        BasisPair([1, 0], [1, 1])


def test_basis_pair_labels():
    pair = BasisPair.from_indices(0, 15, 4)
    assert pair.m == 2
    assert pair.m_prime == -2
    assert pair.theta == pytest.approx(math.pi)
    assert pair.m_even == 1
    assert pair.m_prime_odd == -1


def test_element_factor_ghz_pair(collective_coeffs):
    n, b, t = 4, 0.3, 0.5
    ones = np.ones(n, dtype=int)
    factor = dynamics.element_factor(BasisPair(ones, -ones), collective_coeffs, b, t)
    assert factor.gamma == pytest.approx(4 * n ** 2 * 0.1)
    assert factor.phi0 == pytest.approx(0.0)
    assert factor.phi1 == 0.0
    assert factor.signal_phase == pytest.approx(-n * b * t)


def test_element_factor_observable_weight_halves_decay(positional_coeffs):
    pair = BasisPair.from_indices(5, 10, 4)
    t = positional_coeffs.t
    bare = dynamics.element_factor(pair, positional_coeffs, 0.2, t)
    observed = dynamics.element_factor(pair, positional_coeffs, 0.2, t, decay_weight=0.5)
    assert observed.gamma == pytest.approx(0.5 * bare.gamma)
    assert observed.phi0 == pytest.approx(bare.phi0)
    assert observed.signal_phase == pytest.approx(bare.signal_phase)


def test_collective_purity_decay_is_monotone():
    model = SpectralModel()
    n = 6
    geometry = TransitGeometry.collective(n)
    # kappa grows until omega_c t = sqrt(3) for s = 3 at zero temperature
    times = np.linspace(0.05, 1.6, 24)
    coeffs = [cluster_coefficients(model, geometry, t).dense(n, "collective") for t in times]
    kappa = np.array([c.kappa[0, 0] for c in coeffs])
    assert np.all(np.diff(kappa) > 0)
    rng = np.random.default_rng(3)
    for _ in range(10):
        k, l = rng.integers(0, 2 ** n, size=2)
        pair = BasisPair.from_indices(int(k), int(l), n)
        modulus = np.array(
            [abs(dynamics.element_factor(pair, c, 0.3, c.t).factor) for c in coeffs]
        )
        assert np.all(np.diff(modulus) <= 1e-12)


def test_element_factor_rejects_size(collective_coeffs):
    with pytest.raises(InvalidParameter):
        dynamics.element_factor(BasisPair([1, 1], [1, -1]), collective_coeffs, 0.0, 1.0)


def test_ghz_evolve(collective_coeffs):
    rho = dynamics.ghz_evolve(4, collective_coeffs, 0.0, 0.5)
    assert np.trace(rho).real == pytest.approx(1.0)
    assert abs(rho[0, 1]) == pytest.approx(0.5 * math.exp(-4 * 16 * 0.1))


def test_qni_even_odd_four_qubits():
    count = dynamics.qni_enumerate("even-odd", 4)
    assert count.enumerated == fdv.qni_even_odd_4["enumerated"]
    assert count.by_case == fdv.qni_even_odd_4["by_case"]
    assert count.formula == fdv.qni_even_odd_4["formula"]
    assert not count.flagged
    assert count.as_row()["N"] == 4


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_qni_general_and_collective_match_formulas(n):
    general = dynamics.qni_enumerate("general", n)
    assert general.by_case == general.formula == 2 ** (n + 1)
    collective = dynamics.qni_enumerate("collective", n)
    assert collective.by_case == collective.formula == 2 * math.comb(2 * n, n)


@pytest.mark.parametrize("n", [2, 6, 8])
def test_qni_even_odd_by_case_matches_formula(n):
    count = dynamics.qni_enumerate("even_odd", n)
    assert count.by_case == count.formula


def test_qni_above_limit_is_flagged():
    count = dynamics.qni_enumerate("general", 10, limit=fdv.qni_limit_small)
    assert count.flagged
    assert count.enumerated is None
    assert count.formula == 2 ** 11


def test_qni_rejects():
    with pytest.raises(InvalidParameter):
        dynamics.qni_enumerate("even_odd", 5)
    with pytest.raises(InvalidParameter):
        dynamics.qni_enumerate("ring", 4)
    with pytest.raises(InvalidParameter):
        dynamics.qni_enumerate("general", 0)


@pytest.mark.parametrize("state", ["css", "ghz"])
def test_initial_state_is_normalized(state):
    psi = dynamics.initial_state(state, 4)
    assert np.vdot(psi, psi).real == pytest.approx(1.0)


def test_initial_state_variants():
    psi = dynamics.initial_state("oats", 5, theta=0.4, beta=1.1)
    assert np.vdot(psi, psi).real == pytest.approx(1.0)
    psi_y = dynamics.initial_state("css", 3, axis="y")
    assert np.vdot(psi_y, psi_y).real == pytest.approx(1.0)
    with pytest.raises(InvalidParameter):
        dynamics.initial_state("css", 3, axis="z")
    with pytest.raises(UnsupportedState):
        dynamics.initial_state("dicke", 3)


def test_exact_css_matches_closed_form():
    n, b, t = 6, 0.3, 0.5
    coeffs = dynamic_coefficients(SpectralModel(), TransitGeometry.collective(n), t)
    jy, jy2 = dynamics.exact_expectations("css", coeffs, b, t)
    closed = css_moments_collective(4 * coeffs.kappa[0, 0], 4 * coeffs.xi[0, 0], n, b, t)
    assert jy == pytest.approx(closed.jy_mean, rel=1e-8)
    assert jy2 == pytest.approx(closed.jy2_mean, rel=1e-8)


def test_exact_css_matches_dense_moments(positional_coeffs):
    b, t = 0.7, positional_coeffs.t
    jy, jy2 = dynamics.exact_expectations("css", positional_coeffs, b, t)
    chi, psi = decay_phase_map(positional_coeffs)
    dense = css_moments_dense(chi, psi, b, t)
    assert jy == pytest.approx(dense.jy_mean, rel=1e-8)
    assert jy2 == pytest.approx(dense.jy2_mean, rel=1e-8)


@pytest.mark.parametrize("beta", [0.0, math.pi / 2])
def test_exact_noiseless_oats_matches_variance(beta):
    n, theta = 6, 0.3
    coeffs = CoefficientSet.zeros(n)
    jy, jy2 = dynamics.exact_expectations("oats", coeffs, 0.0, 1.0, theta=theta, beta=beta)
    assert jy2 - jy ** 2 == pytest.approx(oats_variance(n, theta, beta), rel=1e-10)
    zeros = np.zeros((n, n))
    moments = oats_moments(zeros, zeros, theta, beta, 0.0, 1.0)
    assert moments.variance == pytest.approx(oats_variance(n, theta, beta), rel=1e-10)


def test_exact_expectations_rejects():
    with pytest.raises(EnumerationTooLarge):
        dynamics.exact_expectations("css", CoefficientSet.zeros(15), 0.0, 1.0)
    with pytest.raises(InvalidParameter):
        dynamics.exact_expectations(np.ones(3), CoefficientSet.zeros(2), 0.0, 1.0)


def test_reduced_state_matches_collective_closed_form():
    n, kappa, xi, b, t = 5, 0.05, 0.03, 0.4, 0.7
    coeffs = ClusterCoefficients(t, kappa, kappa, xi, xi).dense(n, "collective")
    reduced = dynamics.reduced_two_qubit_state("css", coeffs, b, t, qubits=(1, 3))
    closed = dynamics.collective_two_qubit_state(kappa, xi, n, b, t)
    assert np.allclose(reduced, closed, atol=1e-12)
    assert np.trace(reduced).real == pytest.approx(1.0)


def test_reduced_state_rejects_pair(collective_coeffs):
    with pytest.raises(InvalidParameter):
        dynamics.reduced_two_qubit_state("css", collective_coeffs, 0.0, 1.0, qubits=(2, 2))


def test_wootters_concurrence_limits():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / math.sqrt(2)
    assert dynamics.wootters_concurrence(np.outer(bell, bell.conj())) == pytest.approx(1.0)
    product = np.zeros((4, 4))
    product[0, 0] = 1.0
    assert dynamics.wootters_concurrence(product) == pytest.approx(0.0)
    with pytest.raises(InvalidParameter):
        dynamics.wootters_concurrence(np.eye(2))


def werner(p):
    singlet = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2)
    return p * np.outer(singlet, singlet) + (1 - p) * np.eye(4) / 4


def test_wootters_concurrence_werner():
    assert dynamics.wootters_concurrence(werner(1.0)) == pytest.approx(1.0)
    assert dynamics.wootters_concurrence(werner(0.6)) == pytest.approx(0.4)
    assert dynamics.wootters_concurrence(werner(0.2)) == 0.0
    # separable boundary: sqrt-spectrum 1/2, 1/6, 1/6, 1/6
    assert dynamics.wootters_concurrence(werner(1 / 3)) == 0.0


def test_two_qubit_concurrence():
    model = SpectralModel()
    assert dynamics.two_qubit_concurrence(model, 4, 0.0, 0.0) == pytest.approx(0.0)
    value = dynamics.two_qubit_concurrence(model, 4, 0.8, 0.0)
    assert 0.0 <= value <= 1.0
    with pytest.raises(UnsupportedRegime):
        dynamics.two_qubit_concurrence(model, 4, 0.8, 0.0, TransitGeometry.even_odd(4, 1.0))


def test_random_unitary_oracle_agrees(positional_coeffs):
    n, t = 4, positional_coeffs.t
    pair = BasisPair.from_indices(3, 12, n)
    target = math.exp(-dynamics.element_factor(pair, positional_coeffs, 0.0, t).gamma)
    mean, stderr = dynamics.ru_decay_oracle(pair, positional_coeffs, 20000, RngStream(11, 1), True)
    assert abs(mean.real - target) <= 4 * stderr + 1e-12


def test_random_unitary_oracle_rejects():
    pair = BasisPair([1, 1], [-1, 1])
    indefinite = CoefficientSet(0.1, np.array([[1.0, 2.0], [2.0, 1.0]]), np.zeros((2, 2)))
    with pytest.raises(NotPositiveSemidefinite):
        dynamics.ru_decay_oracle(pair, indefinite, 10, RngStream(1))
    twisted = CoefficientSet(0.1, np.eye(2), np.zeros((2, 2)), np.ones((2, 2)))
    with pytest.raises(InvalidParameter):
        dynamics.ru_decay_oracle(pair, twisted, 10, RngStream(1))
