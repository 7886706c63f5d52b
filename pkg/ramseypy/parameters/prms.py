"""ramseypy parameters"""

import os
import sys
import box

# locations etc for reading custom parameters
script_dir = os.path.abspath(os.path.dirname(__file__))
cur_dir = os.path.abspath(os.path.dirname(sys.argv[0]))
user_dir = os.path.expanduser("~")

# --------------------------
# Paths
# --------------------------
Paths = {
    "outdatadir": cur_dir,
    "filelogdir": cur_dir,
}
Paths = box.Box(Paths)

# --------------------------
# Quadrature
# --------------------------
Quadrature = {
    "relative_tolerance": 1.0e-10,
    "absolute_tolerance": 1.0e-14,
    "max_subdivisions": 400,
    "truncation_multiplier": 50.0,
    "max_breakpoints": 100,
    # accept a non-converged quadrature if its error estimate is below this
    # fraction of the result
    "failure_tolerance": 1.0e-6,
    "series_threshold": 1.0e-4,
    "transit_clamp": 1.0e3,
}
Quadrature = box.Box(Quadrature)

# --------------------------
# Model (bath)
# --------------------------
Model = {
    "alpha": 1.0,
    "ohmicity": 3.0,
    "cutoff": "exponential",
    "omega_c": 1.0,
    "speed": 1.0,
    "inv_temperature": float("inf"),
    "dimension": 1,
}
Model = box.Box(Model)

# --------------------------
# Protocol
# --------------------------
Protocol = {
    "N": 100,
    "T": 1.0,
    "b": 0.0,
    "state": "css",
    "theta": None,  # None -> optimal angles
    "beta": None,
    "regime": "collective",
    "x": 0.0,
}
Protocol = box.Box(Protocol)

# --------------------------
# Estimation
# --------------------------
Estimation = {
    "grid": 60,
    "t_lo": 1.0e-4,
    "t_hi": 1.0,
    "refine_xtol": 1.0e-6,
}
Estimation = box.Box(Estimation)

# --------------------------
# Randomized coupling
# --------------------------
Randomized = {
    "eta": 0.1,
    "K": 20,
    "seed": 7,
    "validity_threshold": 0.1,
    "ghz_decay_weight": 0.25,
    "mc_samples": 100_000,
}
Randomized = box.Box(Randomized)

# --------------------------
# Enumeration
# --------------------------
Enumeration = {
    "qni_limit": 12,
    "exact_limit": 14,
}
Enumeration = box.Box(Enumeration)

# --------------------------
# Output
# --------------------------
Output = {
    "float_format": "%.11e",
    "workers": 4,
    "progress": False,
}
Output = box.Box(Output)

# --------------------------
# Other non-config
# --------------------------

_prm_default_name = ".ramseypy_prms_default.conf"
_prm_globtxt = ".ramseypy_prms*.conf"
