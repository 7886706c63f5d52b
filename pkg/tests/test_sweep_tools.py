import hashlib
import json
import os
import tempfile

import numpy as np
import pandas as pd
import pytest

from ramseypy import log
from ramseypy.parameters import prms
from ramseypy.parameters.internal_settings import (
    get_headers_coefficients,
    get_headers_concurrence,
    get_headers_fit,
    get_headers_qni,
    get_headers_sweep,
)
from ramseypy.exceptions import InvalidParameter, ManifestError, UnsupportedState
from ramseypy.core.coefficients import TransitGeometry
from ramseypy.core.estimation import ProtocolConfig
from ramseypy.core.noise import SpectralModel
from ramseypy.core.randomized import RcConfig
from ramseypy.utils.sweep_tools import dumpers, engines
from . import fdv

log.setup_logging(default_level="DEBUG")


@pytest.fixture()
def clean_dir():
    new_path = tempfile.mkdtemp()
    return new_path


@pytest.fixture
def css_config():
    return ProtocolConfig(50, state="css", model=SpectralModel())


@pytest.mark.parametrize("workers", [1, 4])
def test_ordered_map_keeps_order(workers):
    assert engines.ordered_map(lambda v: v * v, range(10), workers=workers) == [
        v * v for v in range(10)
    ]


def test_ordered_map_with_progress_bar():
    progress = prms.Output.progress
    prms.Output.progress = True
    try:
        assert engines.ordered_map(str, [3, 1, 2], workers=2) == ["3", "1", "2"]
    finally:
        prms.Output.progress = progress


def test_time_grid():
    grid = engines.time_grid(1e-3, 1.0, 4)
    assert len(grid) == 4
    assert grid[-1] == pytest.approx(1.0)
    assert len(engines.time_grid()) == prms.Estimation.grid


def test_coefficients_engine():
    times = engines.time_grid(0.1, 1.0, 3)
    frames, barn = engines.coefficients_engine(
        model=SpectralModel(), geometry=TransitGeometry.even_odd(4, 0.5), times=times
    )
    h = get_headers_coefficients()
    frame = frames[0]
    assert barn == "coefficients"
    assert len(frame) == 3
    assert set(frame.columns) == set(h.values())
    assert np.allclose(frame[h.chi_same], 4.0 * frame[h.kappa_same])


def test_curve_engine(css_config):
    times = engines.time_grid(1e-3, 1.0, 10)
    frames, barn = engines.curve_engine(config=css_config, times=times)
    curve, optimum = frames
    h = get_headers_sweep()
    assert barn == "curve"
    assert len(curve) == 10
    assert len(optimum) == 1
    assert optimum[h.delta_b_opt].iloc[0] <= curve["delta_b"].min() * (1 + 1e-9)


def test_concurrence_engine():
    config = ProtocolConfig(4, state="css", model=SpectralModel())
    times = engines.time_grid(0.1, 1.0, 4)
    frames, barn = engines.concurrence_engine(config=config, times=times)
    h = get_headers_concurrence()
    assert barn == "concurrence"
    assert list(frames[0].columns) == [h.time, h.concurrence, h.delta_b]
    assert frames[0][h.concurrence].between(0.0, 1.0).all()


def test_qni_engine():
    frames, barn = engines.qni_engine(regime="even_odd", sizes=[2, 4])
    h = get_headers_qni()
    frame = frames[0]
    assert barn == "qni"
    assert frame[h.n_qubits].tolist() == [2, 4]
    row = frame.iloc[1]
    assert row[h.enumerated] == fdv.qni_even_odd_4["enumerated"]
    assert row[h.by_case] == fdv.qni_even_odd_4["by_case"]


def test_rc_engine_needs_ghz_or_oats(css_config):
    with pytest.raises(UnsupportedState):
        engines.rc_engine(config=css_config, rc=RcConfig(), times=engines.time_grid(0.1, 1, 3))


def test_sweep_engine_css_exponents():
    config = ProtocolConfig(1000, state="css", model=SpectralModel())
    frames, barn = engines.sweep_engine(
        config=config, axis="N", values=[1000, 4000, 16000, 64000], fit=True
    )
    points, fit = frames
    f = get_headers_fit()
    h = get_headers_sweep()
    assert barn == "sweep"
    assert points["N"].tolist() == [1000, 4000, 16000, 64000]
    exponents = dict(zip(fit[f.quantity], fit[f.exponent]))
    assert exponents[h.tau_opt] == pytest.approx(-0.5, abs=0.05)
    assert exponents[h.delta_b_opt] == pytest.approx(-0.25, abs=0.05)


def test_sweep_engine_x_reports_best_transit():
    config = ProtocolConfig(
        200, geometry=TransitGeometry.even_odd(200, 0.0), model=SpectralModel()
    )
    frames, _ = engines.sweep_engine(config=config, axis="x", values=[0.0, 0.7, 2.0], fit=True)
    points, best = frames
    f = get_headers_fit()
    assert len(points) == 3
    assert best[f.x_opt].iloc[0] in (0.0, 0.7, 2.0)


def test_sweep_engine_rejects(css_config):
    with pytest.raises(InvalidParameter):
        engines.sweep_engine(config=css_config, axis="T", values=[1.0])
    with pytest.raises(InvalidParameter):
        engines.sweep_engine(config=css_config, axis="eta", values=[0.1, 0.2])
    with pytest.raises(InvalidParameter):
        engines.sweep_engine(config=css_config, axis="x", values=[0.1, 0.2])


def test_sweep_engine_ghz_reference():
    config = ProtocolConfig(10, state="ghz", model=SpectralModel(cutoff="gaussian"))
    frames, _ = engines.sweep_engine(
        config=config, axis="N", values=[1000, 10000, 100000], rc=RcConfig(), reference=True, fit=True
    )
    h = get_headers_sweep()
    f = get_headers_fit()
    assert not frames[0][h.boundary].any()
    exponents = dict(zip(frames[1][f.quantity], frames[1][f.exponent]))
    assert exponents[h.tau_opt] == pytest.approx(-0.5, abs=0.05)


def test_csv_dumper_writes_comment_line(clean_dir):
    out = os.path.join(clean_dir, "sub", "curve.csv")
    frames = [pd.DataFrame({"t": [0.1, 0.2], "delta_b": [1.0, 2.0]}), pd.DataFrame({"a": [1]})]
    written = dumpers.csv_dumper(frames=frames, out=out, digest="abc", names=["optimum"], barn="curve")
    assert written == dumpers.output_paths(out, 2, ["optimum"])
    assert written[1].endswith("curve_optimum.csv")
    with open(out, "rb") as f:
        data = f.read()
    assert data.startswith(b"# ramseypy curve manifest-sha256=abc\nt,delta_b\n")
    assert b"\r\n" not in data
    frame = pd.read_csv(out, comment="#")
    assert frame["delta_b"].tolist() == [1.0, 2.0]


def test_output_paths_without_names():
    paths = dumpers.output_paths("run.csv", 3, ["optimum"])
    assert paths == ["run.csv", "run_optimum.csv", "run_2.csv"]


def test_manifest_round_trip(clean_dir):
    out = os.path.join(clean_dir, "curve.csv")
    scenario = {"N": 10, "beta_temp": float("inf"), "seed": np.int64(7)}
    manifest = dumpers.build_manifest("css", scenario, [out], ["careful"])
    assert manifest["scenario"]["beta_temp"] == "inf"
    assert manifest["seed"] == 7
    assert manifest["outputs"] == ["curve.csv"]
    path, digest = dumpers.manifest_dumper(manifest=manifest, out=out)
    with open(path, "rb") as f:
        assert hashlib.sha256(f.read()).hexdigest() == digest
    assert dumpers.read_manifest(path)["subcommand"] == "css"


def test_read_manifest_rejects(clean_dir):
    broken = os.path.join(clean_dir, "broken.json")
    with open(broken, "w") as f:
        f.write("{not json")
    with pytest.raises(ManifestError):
        dumpers.read_manifest(broken)
    partial = os.path.join(clean_dir, "partial.json")
    with open(partial, "w") as f:
        json.dump({"subcommand": "css"}, f)
    with pytest.raises(ManifestError):
        dumpers.read_manifest(partial)
    with pytest.raises(ManifestError):
        dumpers.read_manifest(os.path.join(clean_dir, "missing.json"))
