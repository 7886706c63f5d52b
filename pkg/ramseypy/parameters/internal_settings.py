"""Internal settings and definitions and functions for getting them."""

import collections


class HeaderDict(collections.UserDict):
    """Sub-classing dict to allow for tab-completion."""

    def __setitem__(self, key, value):
        if key == "data":
            raise KeyError("protected key")
        super().__setitem__(key, value)
        self.__dict__[key] = value


headers_coefficients = HeaderDict()
headers_curve = HeaderDict()
headers_concurrence = HeaderDict()
headers_qni = HeaderDict()
headers_sweep = HeaderDict()
headers_fit = HeaderDict()
headers_validation = HeaderDict()

# times in units of 1/omega_c, uncertainties as delta_b * sqrt(T / omega_c)

headers_coefficients["time"] = "t"
headers_coefficients["kappa_same"] = "kappa_s"
headers_coefficients["kappa_cross"] = "kappa_d"
headers_coefficients["xi_same"] = "xi_s"
headers_coefficients["xi_cross"] = "xi_d"
headers_coefficients["chi_same"] = "chi_s"
headers_coefficients["chi_cross"] = "chi_d"
headers_coefficients["psi_same"] = "psi_s"
headers_coefficients["psi_cross"] = "psi_d"

headers_curve["time"] = "t"
headers_curve["delta_b"] = "delta_b"
headers_curve["dispersion"] = "dispersion"
headers_curve["reference"] = "delta_b_eta0"

headers_concurrence["time"] = "t"
headers_concurrence["concurrence"] = "concurrence"
headers_concurrence["delta_b"] = "delta_b"

headers_qni["regime"] = "regime"
headers_qni["n_qubits"] = "N"
headers_qni["enumerated"] = "enumerated"
headers_qni["formula"] = "formula"
headers_qni["by_case"] = "by_case"
headers_qni["flagged"] = "flagged"

headers_sweep["tau_opt"] = "tau_opt"
headers_sweep["delta_b_opt"] = "delta_b_opt"
headers_sweep["boundary"] = "boundary"

headers_fit["quantity"] = "quantity"
headers_fit["exponent"] = "exponent"
headers_fit["prefactor"] = "prefactor"
headers_fit["r_squared"] = "r_squared"
headers_fit["x_opt"] = "x_opt"

headers_validation["check"] = "check"
headers_validation["value"] = "value"
headers_validation["target"] = "target"
headers_validation["tolerance"] = "tolerance"
headers_validation["passed"] = "passed"


def get_headers_coefficients():
    """Returns a dictionary containing the header-strings for the
    dynamic-coefficient tables"""
    return headers_coefficients


def get_headers_curve():
    """Returns a dictionary containing the header-strings for uncertainty curves"""
    return headers_curve


def get_headers_concurrence():
    return headers_concurrence


def get_headers_qni():
    return headers_qni


def get_headers_sweep():
    """Returns a dictionary containing the header-strings for optimal-point
    sweeps (the swept axis name is prepended by the engine)"""
    return headers_sweep


def get_headers_fit():
    return headers_fit


def get_headers_validation():
    return headers_validation
