# -*- coding: utf-8 -*-

"""ramseypy: Ramsey metrology with N qubits under correlated Gaussian
spin-boson dephasing."""

import logging
import warnings
from ramseypy.parameters import prmreader
from ramseypy.parameters import prms
from ramseypy.core import numerics, noise, coefficients, dynamics, estimation, randomized
import ramseypy._version

__version__ = ramseypy._version.__version__

__all__ = [
    "numerics",
    "noise",
    "coefficients",
    "dynamics",
    "estimation",
    "randomized",
    "prmreader",
    "prms",
]

logging.getLogger(__name__).addHandler(logging.NullHandler())

try:
    prmreader._read_prm_file(prmreader._get_prm_file())
except FileNotFoundError:
    warnings.warn("Could not find the config-file")
except UserWarning:
    warnings.warn("Could not read the config-file")
