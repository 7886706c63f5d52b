"""Exact reduced dynamics in the joint sigma_z eigenbasis.

Basis state k of N qubits has spins S[k, n] = 1 - 2 * bit(k, N-1-n), so
k = 0 is all up and qubit 0 is the most significant bit. Every density
matrix element <k| rho(t) |l> is the initial element times an
``ElementFactor`` built from the dynamic coefficients.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ramseypy.parameters import prms
from ramseypy.exceptions import (
    EnumerationTooLarge,
    InvalidParameter,
    NotPositiveSemidefinite,
    UnsupportedRegime,
    UnsupportedState,
)
from ramseypy.core.numerics import sample_standard_normals
from ramseypy.core.coefficients import TransitGeometry, cluster_coefficients

QNI_REGIMES = ("general", "collective", "even_odd")
STATES = ("css", "oats", "ghz")
CONCURRENCE_FLOOR = 1.0e-12

_SIGMA_Y2 = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)


def spin_table(n_qubits):
    """(2^N, N) array of +-1 spins"""
    k = np.arange(2 ** n_qubits)[:, None]
    shifts = n_qubits - 1 - np.arange(n_qubits)[None, :]
    return 1 - 2 * ((k >> shifts) & 1)


def flip_mask(n_qubits, *qubits):
    mask = 0
    for n in qubits:
        mask |= 1 << (n_qubits - 1 - n)
    return mask


@dataclass(frozen=True)
class BasisPair:
    """A pair of z-basis configurations (alpha, beta) labelling the matrix
    element <alpha| rho |beta>."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=int)
        b = np.asarray(self.beta, dtype=int)
        if a.shape != b.shape or a.ndim != 1:
            raise InvalidParameter("alpha and beta must be vectors of equal length")
        if not (np.all(np.abs(a) == 1) and np.all(np.abs(b) == 1)):
            raise InvalidParameter("basis entries must be +1 or -1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_indices(cls, k, l, n_qubits):
        table = spin_table(n_qubits)
        return cls(table[k], table[l])

    @property
    def n_qubits(self):
        return len(self.alpha)

    @property
    def m(self):
        return self.alpha.sum() / 2

    @property
    def m_prime(self):
        return self.beta.sum() / 2

    @property
    def theta(self):
        """angle with N cos(theta) = sum alpha_n beta_n"""
        return float(np.arccos(np.clip(self.alpha @ self.beta / self.n_qubits, -1, 1)))

    @property
    def m_even(self):
        return self.alpha[0::2].sum() / 2

    @property
    def m_odd(self):
        return self.alpha[1::2].sum() / 2

    @property
    def m_prime_even(self):
        return self.beta[0::2].sum() / 2

    @property
    def m_prime_odd(self):
        return self.beta[1::2].sum() / 2


@dataclass(frozen=True)
class ElementFactor:
    gamma: float
    phi0: float
    phi1: float
    signal_phase: float

    @property
    def factor(self):
        return complex(
            np.exp(-self.gamma + 1j * (self.signal_phase + self.phi0 + self.phi1))
        )


def _factors(s_left, s_right, coeffs, b, t, decay_weight):
    """element factors for the rows of two (K, N) spin arrays"""
    d = s_left - s_right
    gamma = decay_weight * np.einsum("ij,jk,ik->i", d, coeffs.kappa, d)
    phi0 = np.einsum("ij,jk,ik->i", s_right, coeffs.xi, s_right) - np.einsum(
        "ij,jk,ik->i", s_left, coeffs.xi, s_left
    )
    phi1 = np.einsum("ij,jk,ik->i", s_right, coeffs.vartheta, s_left) - np.einsum(
        "ij,jk,ik->i", s_left, coeffs.vartheta, s_right
    )
    signal = 0.5 * b * t * (s_right.sum(axis=1) - s_left.sum(axis=1))
    return gamma, phi0, phi1, signal


def element_factor(pair, coeffs, b, t, decay_weight=1.0):
    """Evolution factor of <alpha| rho |beta>.

    gamma = w sum (a_n - b_n)(a_m - b_m) kappa_nm, phi0 = sum (b_n b_m - a_n a_m) xi_nm,
    phi1 = sum (b_n a_m - a_n b_m) vartheta_nm and the signal phase
    (b t / 2) sum (b_n - a_n).

    The default w = 1 is the bare coherence decay. Observables use w = 0.5
    (see exact_expectations and reduced_two_qubit_state), so a single qubit
    dephases as exp(-chi_nn / 2).
    """
    if pair.n_qubits != coeffs.n_qubits:
        raise InvalidParameter(
            f"pair has {pair.n_qubits} qubits, coefficients {coeffs.n_qubits}"
        )
    gamma, phi0, phi1, signal = _factors(
        pair.alpha[None, :], pair.beta[None, :], coeffs, b, t, decay_weight
    )
    return ElementFactor(float(gamma[0]), float(phi0[0]), float(phi1[0]), float(signal[0]))


def ghz_evolve(n_qubits, coeffs, b, t):
    """2 x 2 matrix on span{|up...up>, |down...down>}"""
    if coeffs.n_qubits != n_qubits:
        raise InvalidParameter("coefficient matrices do not match N")
    ones = np.ones(n_qubits, dtype=int)
    f = element_factor(BasisPair(ones, -ones), coeffs, b, t).factor
    return np.array([[0.5, 0.5 * f], [0.5 * np.conj(f), 0.5]])


@dataclass(frozen=True)
class QniCount:
    regime: str
    n_qubits: int
    enumerated: int
    formula: int
    by_case: int
    flagged: bool

    def as_row(self):
        return dict(
            regime=self.regime,
            N=self.n_qubits,
            enumerated=self.enumerated,
            formula=self.formula,
            by_case=self.by_case,
            flagged=self.flagged,
        )


def qni_formula(regime, n_qubits):
    if regime == "general":
        return 2 ** (n_qubits + 1)
    if regime == "collective":
        return 2 * math.comb(2 * n_qubits, n_qubits)
    return 2 * math.comb(n_qubits, n_qubits // 2) ** 2


def _signature_counts(table, regime):
    """histogram of the structural signature of each basis state"""
    if regime == "collective":
        keys = [tuple(row) for row in table.sum(axis=1, keepdims=True)]
    else:
        keys = [tuple(row) for row in np.stack(
            [table[:, 0::2].sum(axis=1), table[:, 1::2].sum(axis=1)], axis=1
        )]
    counts = {}
    for key in keys:
        counts[key] = counts.get(key, 0) + 1
    return counts


def qni_enumerate(regime, n_qubits, limit=None):
    """Count matrix elements whose bath-induced phases vanish for every
    admissible coefficient set.

    general: phi0 = phi1 = 0 for arbitrary symmetric xi and antisymmetric
    vartheta, i.e. beta = +-alpha. collective: beta sum = +-alpha sum.
    even_odd: the per-cluster sums flip together, (M'_e, M'_o) = +-(M_e, M_o).

    ``enumerated`` counts distinct pairs, ``by_case`` adds the two sign
    cases separately (pairs satisfying both are counted twice).
    """
    regime = regime.replace("-", "_")
    if regime not in QNI_REGIMES:
        raise InvalidParameter(f"unknown QNI regime: {regime}")
    if n_qubits < 1:
        raise InvalidParameter("need at least one qubit")
    if regime == "even_odd" and n_qubits % 2:
        raise InvalidParameter("even-odd regime needs an even N")
    if limit is None:
        limit = prms.Enumeration.qni_limit

    formula = qni_formula(regime, n_qubits)
    if n_qubits > limit:
        logging.warning(f"N={n_qubits} above enumeration limit {limit}: formula only")
        return QniCount(regime, n_qubits, None, formula, None, True)

    table = spin_table(n_qubits)
    if regime == "general":
        enumerated = 0
        by_case = 0
        for row in table:
            products = table * row[None, :]
            plus = np.all(products == 1, axis=1)
            minus = np.all(products == -1, axis=1)
            enumerated += int(np.count_nonzero(plus | minus))
            by_case += int(np.count_nonzero(plus) + np.count_nonzero(minus))
    else:
        counts = _signature_counts(table, regime)
        enumerated = 0
        by_case = 0
        for key, c in counts.items():
            mirror = tuple(-v for v in key)
            c_mirror = counts.get(mirror, 0)
            by_case += c * (c + c_mirror)
            enumerated += c * c if mirror == key else c * (c + c_mirror)
    return QniCount(regime, n_qubits, enumerated, formula, by_case, False)


def _check_enumerable(n_qubits, what):
    limit = prms.Enumeration.exact_limit
    if n_qubits > limit:
        raise EnumerationTooLarge(
            f"{what} enumerates 2^{n_qubits} states (limit N={limit}); "
            "use the closed-form estimation paths"
        )


def initial_state(state, n_qubits, theta=0.0, beta=0.0, axis="x"):
    """Pure initial state vector in the z basis.

    css: product state along +x (or +y); ghz: (|up..up> + |down..down>)/sqrt 2;
    oats: exp(-i beta J_x) exp(-i theta J_z^2 / 2) acting on the +x CSS.
    """
    state = state.lower()
    dim = 2 ** n_qubits
    if state == "ghz":
        psi = np.zeros(dim, dtype=complex)
        psi[0] = psi[-1] = 1 / math.sqrt(2)
        return psi
    if state == "css":
        if axis == "x":
            return np.full(dim, 2 ** (-n_qubits / 2), dtype=complex)
        if axis == "y":
            table = spin_table(n_qubits)
            down = np.count_nonzero(table == -1, axis=1)
            return 2 ** (-n_qubits / 2) * 1j ** down
        raise InvalidParameter(f"unsupported CSS axis: {axis}")
    if state == "oats":
        m = spin_table(n_qubits).sum(axis=1) / 2
        psi = 2 ** (-n_qubits / 2) * np.exp(-0.5j * theta * m ** 2)
        c, s = math.cos(beta / 2), math.sin(beta / 2)
        rotation = np.array([[c, -1j * s], [-1j * s, c]])
        psi = psi.reshape((2,) * n_qubits)
        for n in range(n_qubits):
            psi = np.moveaxis(np.tensordot(rotation, psi, axes=([1], [n])), 0, n)
        return psi.reshape(dim)
    raise UnsupportedState(f"unknown state: {state}")


def _evolved_elements(psi, table, mask, coeffs, b, t, decay_weight):
    """rho_{k, k^mask}(t) for every k"""
    partner = np.arange(len(psi)) ^ mask
    gamma, phi0, phi1, signal = _factors(
        table, table[partner], coeffs, b, t, decay_weight
    )
    factor = np.exp(-gamma + 1j * (signal + phi0 + phi1))
    return psi * np.conj(psi[partner]) * factor


def exact_expectations(state, coeffs, b, t, theta=0.0, beta=0.0, decay_weight=0.5, axis="x"):
    """<J_y(t)> and <J_y(t)^2> by summing element factors over the full
    z basis.

    Args:
        state (str or array): "css", "oats", "ghz" or a state vector.
        coeffs (CoefficientSet): coefficients at time t.
        b (float): signal frequency.
        t (float): evolution time.
        theta, beta (float): OATS twist and rotation angles.
        decay_weight (float): weight of kappa in the single-qubit decay
            (0.5 gives the e^{-chi_nn / 2} coherence of the observables).

    Returns:
        tuple (jy_mean, jy2_mean)
    """
    n = coeffs.n_qubits
    _check_enumerable(n, "exact_expectations")
    if isinstance(state, str):
        psi = initial_state(state, n, theta, beta, axis)
    else:
        psi = np.asarray(state, dtype=complex)
        if psi.shape != (2 ** n,):
            raise InvalidParameter("state vector does not match N")
    table = spin_table(n)

    jy = 0.0
    for q in range(n):
        rho = _evolved_elements(psi, table, flip_mask(n, q), coeffs, b, t, decay_weight)
        jy += 0.5 * float(np.real(np.sum(rho * 1j * table[:, q])))

    pair_sum = 0.0
    for q in range(n):
        for r in range(q + 1, n):
            rho = _evolved_elements(
                psi, table, flip_mask(n, q, r), coeffs, b, t, decay_weight
            )
            pair_sum += float(np.real(np.sum(-rho * table[:, q] * table[:, r])))
    jy2 = n / 4 + 0.5 * pair_sum
    return jy, jy2


def reduced_two_qubit_state(state, coeffs, b, t, qubits=(0, 1), decay_weight=0.5, **state_kwargs):
    """4 x 4 reduced state of two qubits by enumeration over the others."""
    n = coeffs.n_qubits
    _check_enumerable(n, "reduced_two_qubit_state")
    q1, q2 = qubits
    if q1 == q2 or not (0 <= q1 < n and 0 <= q2 < n):
        raise InvalidParameter(f"bad qubit pair {qubits}")
    psi = initial_state(state, n, **state_kwargs) if isinstance(state, str) else np.asarray(state, complex)
    table = spin_table(n)

    index = np.arange(2 ** n)
    local = 2 * ((index >> (n - 1 - q1)) & 1) + ((index >> (n - 1 - q2)) & 1)
    rho = np.zeros((4, 4), dtype=complex)
    for a in range(4):
        rows = index[local == a]
        for c in range(4):
            mask = flip_mask(n, *[q for q, bit in ((q1, 2), (q2, 1)) if (a ^ c) & bit])
            partner = rows ^ mask
            gamma, phi0, phi1, signal = _factors(
                table[rows], table[partner], coeffs, b, t, decay_weight
            )
            factor = np.exp(-gamma + 1j * (signal + phi0 + phi1))
            rho[a, c] = np.sum(psi[rows] * np.conj(psi[partner]) * factor)
    return rho


def collective_two_qubit_state(kappa, xi, n_qubits, b, t):
    """Closed partial sum for a +x CSS under collective dephasing.

    rho_ab = 1/4 e^{i (bt/2) D} e^{-kappa (d1 + d2)^2 / 2}
    e^{i xi [(b1+b2)^2 - (a1+a2)^2]} cos(2 xi D)^(N-2), D = (b1+b2) - (a1+a2)
    """
    spins = spin_table(2)
    rho = np.zeros((4, 4), dtype=complex)
    for a in range(4):
        sa = spins[a].sum()
        for c in range(4):
            sc = spins[c].sum()
            delta = sc - sa
            rho[a, c] = (
                0.25
                * np.exp(0.5j * b * t * delta)
                * math.exp(-0.5 * kappa * delta ** 2)
                * np.exp(1j * xi * (sc ** 2 - sa ** 2))
                * math.cos(2 * xi * delta) ** (n_qubits - 2)
            )
    return rho


def wootters_concurrence(rho):
    """max(0, l1 - l2 - l3 - l4) from the spectrum of rho (sy x sy) rho* (sy x sy)"""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidParameter("concurrence needs a 4 x 4 density matrix")
    flipped = _SIGMA_Y2 @ rho.conj() @ _SIGMA_Y2
    eig = np.real(np.linalg.eigvals(rho @ flipped))
    eig = np.where(eig < 1.0e-14, 0.0, eig)
    lam = np.sort(np.sqrt(eig))[::-1]
    c = float(lam[0] - lam[1] - lam[2] - lam[3])
    # roundoff on the separable boundary
    return c if c > CONCURRENCE_FLOOR else 0.0


def two_qubit_concurrence(model, n_qubits, t, b, geometry=None, spec=None):
    """Concurrence of any two qubits of a +x CSS under collective dephasing."""
    if geometry is None:
        geometry = TransitGeometry.collective(n_qubits)
    if geometry.regime != "collective":
        raise UnsupportedRegime("two-qubit concurrence is implemented for collective noise")
    coeffs = cluster_coefficients(model, geometry, t, spec)
    rho = collective_two_qubit_state(coeffs.kappa_s, coeffs.xi_s, n_qubits, b, t)
    return wootters_concurrence(rho)


def ru_decay_oracle(pair, coeffs, samples, stream, return_error=False):
    """Monte Carlo mean of exp(i sum (beta_n - alpha_n) Phi_n) with Gaussian
    phases of covariance 2 kappa. Its expectation is exp(-gamma)."""
    if np.any(coeffs.vartheta != 0):
        raise InvalidParameter("the random-unitary oracle needs vartheta = 0")
    if pair.n_qubits != coeffs.n_qubits:
        raise InvalidParameter("pair and coefficients disagree on N")
    cov = 2.0 * coeffs.kappa
    w, v = np.linalg.eigh(cov)
    floor = -1.0e-10 * max(1.0, float(np.max(np.abs(w))))
    if np.min(w) < floor:
        raise NotPositiveSemidefinite(f"kappa has eigenvalue {np.min(w):.3e}")
    if np.min(w) < 0:
        logging.debug(f"clamping eigenvalue {np.min(w):.3e} to 0")
    root = v * np.sqrt(np.clip(w, 0.0, None))[None, :]

    n = pair.n_qubits
    z = sample_standard_normals(stream, samples * n).reshape(samples, n)
    direction = root.T @ (pair.beta - pair.alpha)
    values = np.exp(1j * (z @ direction))
    mean = complex(values.mean())
    if not return_error:
        return mean
    stderr = float(np.std(values.real, ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return mean, stderr
