"""Writing engine output: CSV tables with a provenance comment and a JSON
manifest describing the run."""

import hashlib
import json
import logging
import os
import platform

import numpy as np
import pandas as pd
import scipy

from ramseypy import _version
from ramseypy.parameters import prms
from ramseypy.exceptions import ManifestError

MANIFEST_SUFFIX = ".manifest.json"


def manifest_path(out):
    return f"{out}{MANIFEST_SUFFIX}"


def side_path(out, name):
    """path of an extra table written next to ``out``"""
    root, ext = os.path.splitext(out)
    return f"{root}_{name}{ext or '.csv'}"


def _jsonable(value):
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return _jsonable(float(value))
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def build_manifest(subcommand, scenario, outputs=(), warnings=()):
    """Everything needed to re-run a scenario and to know what produced it.

    No timestamps: the same scenario always gives the same manifest.
    """
    return {
        "subcommand": subcommand,
        "scenario": _jsonable(dict(scenario)),
        "seed": _jsonable(scenario.get("seed")),
        "outputs": [os.path.basename(o) for o in outputs],
        "warnings": list(warnings),
        "versions": {
            "ramseypy": _version.__version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
        },
    }


def manifest_dumper(**kwargs):
    """write the manifest and return (path, sha256 of its bytes)"""
    manifest = kwargs["manifest"]
    out = kwargs["out"]
    path = manifest_path(out)
    text = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    data = text.encode("utf-8")
    _ensure_dir(path)
    with open(path, "wb") as f:
        f.write(data)
    digest = hashlib.sha256(data).hexdigest()
    logging.info(f"manifest -> {path} ({digest[:12]})")
    return path, digest


def read_manifest(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            manifest = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ManifestError(f"could not read manifest {path}: {e}") from e
    for key in ("subcommand", "scenario"):
        if key not in manifest:
            raise ManifestError(f"{path} is not a manifest (missing '{key}')")
    return manifest


def csv_dumper(**kwargs):
    """Dump the frames of one engine run.

    The first frame goes to ``out``, the others to ``<out stem>_<name>.csv``
    with names from ``names``. Every file starts with a ``#`` line naming
    the manifest hash, then the header line; floats use
    ``prms.Output.float_format``.
    """
    frames = kwargs["frames"]
    out = kwargs["out"]
    digest = kwargs.get("digest", "")
    names = list(kwargs.get("names") or [])
    barn = kwargs.get("barn", "")

    written = []
    for index, frame in enumerate(frames):
        if index == 0:
            path = out
        else:
            name = names[index - 1] if index - 1 < len(names) else str(index)
            path = side_path(out, name)
        _ensure_dir(path)
        body = frame.to_csv(
            index=False, float_format=prms.Output.float_format, lineterminator="\n"
        )
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(f"# ramseypy {barn} manifest-sha256={digest}\n")
            f.write(body)
        logging.info(f"> {path}")
        written.append(path)
    return written


def output_paths(out, n_frames, names=()):
    """the paths csv_dumper will write, for listing in the manifest"""
    names = list(names)
    paths = [out]
    for index in range(1, n_frames):
        name = names[index - 1] if index - 1 < len(names) else str(index)
        paths.append(side_path(out, name))
    return paths


def _ensure_dir(path):
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
