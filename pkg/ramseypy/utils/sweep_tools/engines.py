"""Engines that turn a scenario into tables.

Every engine takes keyword arguments and returns ``(frames, barn)``: a list
of pandas DataFrames and the name of the output they belong to. Uncertainties
are reported as delta_b * sqrt(T / omega_c), times in units of 1/omega_c.
"""

import functools
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np
import pandas as pd
from tqdm.auto import tqdm

from ramseypy.parameters import prms
from ramseypy.parameters.internal_settings import (
    get_headers_coefficients,
    get_headers_concurrence,
    get_headers_fit,
    get_headers_qni,
    get_headers_sweep,
)
from ramseypy.exceptions import InvalidParameter, UnsupportedState
from ramseypy.core.numerics import fit_power_law, log_grid
from ramseypy.core.coefficients import TransitGeometry, cluster_coefficients
from ramseypy.core.dynamics import qni_enumerate, two_qubit_concurrence
from ramseypy.core.estimation import delta_b, optimize_time
from ramseypy.core.randomized import (
    ghz_rc,
    ghz_reference,
    oats_rc,
    oats_reference,
    reference_time_range,
)

SWEEP_AXES = ("N", "x", "eta")


def ordered_map(func, items, workers=None, desc=None):
    """``map`` over a thread pool, results in input order.

    A progress bar is shown when ``prms.Output.progress`` is set.
    """
    items = list(items)
    workers = int(prms.Output.workers if workers is None else workers)
    if workers <= 1 or len(items) <= 1:
        results = map(func, items)
        return _collect(results, len(items), desc)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return _collect(executor.map(func, items), len(items), desc)


def _collect(results, total, desc):
    if prms.Output.progress:
        results = tqdm(results, total=total, desc=desc, file=sys.stdout, leave=False)
    return list(results)


def report_scale(config):
    """factor turning delta_b into delta_b * sqrt(T / omega_c)"""
    return math.sqrt(config.T / config.model.omega_c)


def time_grid(t_lo=None, t_hi=None, grid=None):
    e = prms.Estimation
    return log_grid(
        e.t_lo if t_lo is None else t_lo,
        e.t_hi if t_hi is None else t_hi,
        int(e.grid if grid is None else grid),
    )


def coefficients_engine(**kwargs):
    """dynamic coefficients of a collective or even-odd geometry vs t"""
    model = kwargs["model"]
    geometry = kwargs["geometry"]
    times = kwargs["times"]
    logging.debug(f"coefficients_engine: {geometry.regime}, {len(times)} times")
    h = get_headers_coefficients()
    rows = ordered_map(
        lambda t: cluster_coefficients(model, geometry, t).as_dict(),
        times,
        desc="coefficients",
    )
    frame = pd.DataFrame(rows)
    frame = frame.rename(
        columns={
            "t": h.time,
            "kappa_s": h.kappa_same,
            "kappa_d": h.kappa_cross,
            "xi_s": h.xi_same,
            "xi_d": h.xi_cross,
            "chi_s": h.chi_same,
            "chi_d": h.chi_cross,
            "psi_s": h.psi_same,
            "psi_d": h.psi_cross,
        }
    )
    return [frame], "coefficients"


def curve_engine(**kwargs):
    """Delta b(t) of a CSS or OATS probe with the optimum refined"""
    config = kwargs["config"]
    times = kwargs["times"]
    logging.debug(f"curve_engine: {config.state}, N={config.n_qubits}")
    values = np.array(ordered_map(functools.partial(delta_b, config), times, desc="curve"))
    curve = optimize_time(
        config,
        t_range=(times[0], times[-1]),
        grid=len(times),
        func=_lookup(times, values, functools.partial(delta_b, config)),
    )
    return [curve.to_frame(report_scale(config)), optimum_frame(curve, config)], "curve"


def optimum_frame(curve, config):
    """one-row table with the refined optimum of a curve"""
    h = get_headers_sweep()
    return pd.DataFrame(
        {
            h.tau_opt: [curve.tau_opt],
            h.delta_b_opt: [report_scale(config) * curve.delta_b_opt],
            h.boundary: [curve.boundary],
        }
    )


def _lookup(times, values, func):
    """func with the grid values served from a table"""
    table = dict(zip(np.asarray(times, dtype=float).tolist(), values.tolist()))

    def wrapped(t):
        hit = table.get(float(t))
        return func(t) if hit is None else hit

    return wrapped


def rc_engine(**kwargs):
    """Monte Carlo randomized-coupling curve with the eta = 0 reference"""
    config = kwargs["config"]
    rc = kwargs["rc"]
    times = kwargs["times"]
    mapper = functools.partial(ordered_map, desc="layouts")
    if config.state == "ghz":
        curve = ghz_rc(config, rc, times, mapper=mapper)
    elif config.state == "oats":
        curve = oats_rc(config, rc, times, mapper=mapper)
    else:
        raise UnsupportedState("randomized coupling curves exist for GHZ and OATS probes")
    return [curve.to_frame(report_scale(config)), optimum_frame(curve, config)], "curve"


def concurrence_engine(**kwargs):
    """two-qubit concurrence and Delta b on one time grid"""
    config = kwargs["config"]
    times = kwargs["times"]
    h = get_headers_concurrence()

    def row(t):
        c = two_qubit_concurrence(config.model, config.n_qubits, t, config.b, config.geometry)
        return c, delta_b(config, t)

    rows = ordered_map(row, times, desc="concurrence")
    frame = pd.DataFrame(
        {
            h.time: times,
            h.concurrence: [r[0] for r in rows],
            h.delta_b: [report_scale(config) * r[1] for r in rows],
        }
    )
    return [frame], "concurrence"


def qni_engine(**kwargs):
    regime = kwargs["regime"]
    sizes = kwargs["sizes"]
    h = get_headers_qni()
    rows = [qni_enumerate(regime, n).as_row() for n in sizes]
    frame = pd.DataFrame(rows)
    frame = frame.rename(columns={"N": h.n_qubits})
    return [frame], "qni"


def _swept(config, rc, axis, value):
    if axis == "N":
        return config.with_(n_qubits=int(value)), rc
    if axis == "x":
        g = config.geometry
        if g.regime != "even_odd":
            raise InvalidParameter("sweeping x needs the even-odd regime")
        return config.with_(geometry=TransitGeometry.even_odd(config.n_qubits, value)), rc
    return config, replace(rc, eta=float(value), epsilon=None)


def sweep_engine(**kwargs):
    """Optimal operating point along one axis (N, x or eta).

    Returns the point table and, with ``fit=True``, a power-law fit of
    tau_opt and delta_b_opt against N or eta (the best transit time for an
    x sweep). GHZ and randomized OATS probes use the Monte Carlo curves, or
    the eta = 0 reference curves with ``reference=True``.
    """
    config = kwargs["config"]
    axis = kwargs["axis"]
    values = list(kwargs["values"])
    rc = kwargs.get("rc")
    times = kwargs.get("times")
    fit = kwargs.get("fit", False)
    reference = kwargs.get("reference", False)
    if axis not in SWEEP_AXES:
        raise InvalidParameter(f"unknown sweep axis: {axis}")
    if axis == "eta" and rc is None:
        raise InvalidParameter("an eta sweep needs randomized-coupling settings")
    h = get_headers_sweep()

    def point(value):
        swept_config, swept_rc = _swept(config, rc, axis, value)
        randomized = swept_config.state == "ghz" or (rc is not None and swept_config.state == "oats")
        if randomized and reference:
            func = functools.partial(
                ghz_reference if swept_config.state == "ghz" else oats_reference, swept_config
            )
            t_range = (
                reference_time_range(swept_config) if times is None else (times[0], times[-1])
            )
            grid = None if times is None else len(times)
            curve = optimize_time(swept_config, t_range=t_range, grid=grid, func=func)
        elif randomized:
            if swept_rc is None:
                raise InvalidParameter("GHZ sweeps need randomized-coupling settings")
            grid = times if times is not None else time_grid()
            mapper = functools.partial(ordered_map, workers=1)
            if swept_config.state == "ghz":
                curve = ghz_rc(swept_config, swept_rc, grid, mapper=mapper)
            else:
                curve = oats_rc(swept_config, swept_rc, grid, mapper=mapper)
        else:
            t_range = None if times is None else (times[0], times[-1])
            grid = None if times is None else len(times)
            curve = optimize_time(swept_config, t_range=t_range, grid=grid)
        return curve.tau_opt, report_scale(swept_config) * curve.delta_b_opt, curve.boundary

    rows = ordered_map(point, values, desc=f"sweep {axis}")
    frame = pd.DataFrame(
        {
            axis: values,
            h.tau_opt: [r[0] for r in rows],
            h.delta_b_opt: [r[1] for r in rows],
            h.boundary: [r[2] for r in rows],
        }
    )
    frames = [frame]
    if fit:
        frames.append(fit_frame(frame, axis))
    return frames, "sweep"


def fit_frame(frame, axis):
    """power-law fits of the sweep columns against N or eta; for an x sweep
    the grid point with the smallest delta_b_opt"""
    h = get_headers_sweep()
    f = get_headers_fit()
    if axis == "x":
        best = frame.loc[frame[h.delta_b_opt].idxmin()]
        return pd.DataFrame({f.x_opt: [best[axis]], h.delta_b_opt: [best[h.delta_b_opt]]})
    records = []
    for quantity in (h.tau_opt, h.delta_b_opt):
        result = fit_power_law(zip(frame[axis], frame[quantity]))
        records.append(
            {
                f.quantity: quantity,
                f.exponent: result.exponent,
                f.prefactor: result.prefactor,
                f.r_squared: result.r_squared,
            }
        )
    return pd.DataFrame(records)
