"""Command line interface: ``ramseypy <subcommand> [--key value ...]``.

Every computing subcommand resolves a scenario (prms < user prm file <
``--config`` < flags), runs one engine, and writes the CSV table(s) plus a
manifest that ``ramseypy rerun`` can replay.
"""

import contextlib
import json
import logging
import pathlib
import sys

import click
import numpy as np

from ramseypy import log
from ramseypy.parameters import prmreader, prms
from ramseypy.parameters.internal_settings import get_headers_validation
from ramseypy.exceptions import (
    ConfigFileNotRead,
    ConfigFileNotWritten,
    Error,
    InvalidParameter,
    ManifestError,
    UnsupportedRegime,
    UnsupportedState,
)
from ramseypy.core.numerics import log_grid
from ramseypy.core.noise import SpectralModel
from ramseypy.core.coefficients import TransitGeometry
from ramseypy.core.estimation import ProtocolConfig, suggest_time_range
from ramseypy.core.randomized import RcConfig, reference_time_range
from ramseypy.utils.sweep_tools import dumpers, engines
from ramseypy.utils.validation import validation_engine
import ramseypy._version

VERSION = ramseypy._version.__version__

USAGE_ERRORS = (
    InvalidParameter,
    UnsupportedRegime,
    UnsupportedState,
    ConfigFileNotRead,
    ManifestError,
)

# scenario keys and how to read them back from a config file or manifest
SCENARIO_KEYS = {
    "N": int,
    "T": float,
    "b": float,
    "state": str,
    "theta": float,
    "beta": float,
    "regime": str,
    "x": float,
    "s": float,
    "alpha": float,
    "cutoff": str,
    "beta_temp": float,
    "dimension": int,
    "eta": float,
    "epsilon": float,
    "K": int,
    "seed": int,
    "t_lo": float,
    "t_hi": float,
    "grid": int,
    "out": str,
    "sweep_axis": str,
    "sweep": str,
    "fit": bool,
    "reference": bool,
    "full": bool,
    "samples": int,
}

SUBCOMMAND_STATES = {
    "css": "css",
    "oats": "oats",
    "ghz-rc": "ghz",
    "oats-rc": "oats",
    "concurrence": "css",
}

RC_SUBCOMMANDS = ("ghz-rc", "oats-rc")


def _convert(key, value):
    if value is None:
        return None
    kind = SCENARIO_KEYS[key]
    try:
        if kind is bool:
            if isinstance(value, str):
                return value.lower() in ("1", "true", "yes")
            return bool(value)
        if kind is int:
            as_float = float(value)
            if not as_float.is_integer():
                raise ValueError(f"{value} is not an integer")
            return int(as_float)
        return kind(value)
    except (TypeError, ValueError) as e:
        raise InvalidParameter(f"bad value for '{key}': {value!r} ({e})") from e


def _read_config(path):
    """scenario dict from a JSON config file or a manifest; also returns the
    manifest's subcommand (None for a plain config)"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigFileNotRead(f"could not read config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigFileNotRead(f"{path} must hold a JSON object")
    subcommand = None
    if "scenario" in data and "subcommand" in data:
        subcommand = data["subcommand"]
        data = data["scenario"]
    unknown = sorted(set(data) - set(SCENARIO_KEYS))
    if unknown:
        raise InvalidParameter(f"unknown config keys in {path}: {', '.join(unknown)}")
    return subcommand, {k: _convert(k, v) for k, v in data.items()}


def _defaults(subcommand):
    m, p, e, r = prms.Model, prms.Protocol, prms.Estimation, prms.Randomized
    scenario = {
        "N": int(p.N),
        "T": float(p.T),
        "b": float(p.b),
        "state": SUBCOMMAND_STATES.get(subcommand, p.state),
        "theta": p.theta,
        "beta": p.beta,
        "regime": p.regime,
        "x": float(p.x),
        "s": float(m.ohmicity),
        "alpha": float(m.alpha),
        "cutoff": "gaussian" if subcommand in RC_SUBCOMMANDS else m.cutoff,
        "beta_temp": float(m.inv_temperature),
        "dimension": int(m.dimension),
        "eta": float(r.eta),
        "epsilon": None,
        "K": int(r.K),
        "seed": int(r.seed),
        "t_lo": None,
        "t_hi": None,
        "grid": int(e.grid),
        "out": str(pathlib.Path(prms.Paths.outdatadir) / f"{subcommand}.csv"),
        "sweep_axis": None,
        "sweep": None,
        "fit": False,
        "reference": False,
    }
    if subcommand == "validate":
        scenario.update(full=False, samples=20_000)
    return scenario


def resolve_scenario(subcommand, config=None, **flags):
    """Merge defaults, the config file and the given flags into one scenario"""
    scenario = _defaults(subcommand)
    if config is not None:
        _, from_file = _read_config(config)
        scenario.update(from_file)
    scenario.update({k: _convert(k, v) for k, v in flags.items() if v is not None})
    if subcommand in SUBCOMMAND_STATES:
        scenario["state"] = SUBCOMMAND_STATES[subcommand]
    return scenario


def parse_axis(spec, axis):
    """``lo:hi:count`` into sweep values: linear for x, geometric for N and eta"""
    try:
        lo, hi, count = spec.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError as e:
        raise InvalidParameter(f"sweep spec must read lo:hi:count (got {spec!r})") from e
    if count < 2 or hi <= lo:
        raise InvalidParameter(f"sweep spec needs lo < hi and count >= 2 (got {spec!r})")
    if axis == "x":
        return np.linspace(lo, hi, count).tolist()
    values = log_grid(lo, hi, count)
    if axis == "N":
        return [int(round(v)) for v in values]
    return values.tolist()


def _sweep_flags(sweep_n, sweep_x, sweep_eta):
    given = [(a, v) for a, v in (("N", sweep_n), ("x", sweep_x), ("eta", sweep_eta)) if v]
    if len(given) > 1:
        raise InvalidParameter("give at most one of --sweep-N, --sweep-x, --sweep-eta")
    if not given:
        return {}
    axis, spec = given[0]
    return {"sweep_axis": axis, "sweep": spec}


def build_model(scenario):
    return SpectralModel.from_prms(
        alpha=scenario["alpha"],
        ohmicity=scenario["s"],
        cutoff=scenario["cutoff"],
        inv_temperature=scenario["beta_temp"],
        dimension=scenario["dimension"],
    )


def build_config(scenario, model=None):
    return ProtocolConfig.from_prms(
        model=model or build_model(scenario),
        N=scenario["N"],
        T=scenario["T"],
        b=scenario["b"],
        state=scenario["state"],
        theta=scenario["theta"],
        beta=scenario["beta"],
        regime=scenario["regime"],
        x=scenario["x"],
    )


def build_rc(scenario):
    return RcConfig.from_prms(
        eta=scenario["eta"],
        K=scenario["K"],
        seed=scenario["seed"],
        dimension=scenario["dimension"],
        epsilon=scenario["epsilon"],
    )


def _fill_time_range(scenario, config, randomized):
    """pin t_lo and t_hi in the scenario so the manifest replays the grid"""
    if scenario["t_lo"] is not None and scenario["t_hi"] is not None:
        return
    if randomized:
        t_lo, t_hi = reference_time_range(config)
    else:
        t_lo, t_hi = suggest_time_range(config)
    if scenario["t_lo"] is None:
        scenario["t_lo"] = float(t_lo)
    if scenario["t_hi"] is None:
        scenario["t_hi"] = float(t_hi)


def _times(scenario):
    return engines.time_grid(scenario["t_lo"], scenario["t_hi"], scenario["grid"])


def _run_engine(subcommand, scenario):
    """the engine call for one subcommand; returns (frames, barn, names)"""
    if subcommand == "validate":
        frames, barn = validation_engine(full=scenario["full"], samples=scenario["samples"])
        return frames, barn, []

    if subcommand == "qni":
        sizes = [scenario["N"]]
        if scenario["sweep_axis"] == "N":
            sizes = parse_axis(scenario["sweep"], "N")
        regime = scenario["regime"].replace("-", "_")
        frames, barn = engines.qni_engine(regime=regime, sizes=sizes)
        return frames, barn, []

    model = build_model(scenario)

    if subcommand == "coeffs":
        geometry = TransitGeometry(scenario["regime"], scenario["N"], x=scenario["x"])
        config = ProtocolConfig(n_qubits=scenario["N"], geometry=geometry, model=model)
        _fill_time_range(scenario, config, False)
        frames, barn = engines.coefficients_engine(
            model=model, geometry=geometry, times=_times(scenario)
        )
        return frames, barn, []

    config = build_config(scenario, model)
    rc = build_rc(scenario)
    randomized = subcommand in RC_SUBCOMMANDS or (
        subcommand == "sweep" and config.state == "ghz"
    )

    if scenario["sweep_axis"]:
        axis = scenario["sweep_axis"]
        values = parse_axis(scenario["sweep"], axis)
        if axis == "N" and config.geometry.regime == "even_odd":
            values = [2 * max(1, round(n / 2)) for n in values]
        if axis == "eta" and config.state == "css":
            raise InvalidParameter("an eta sweep needs a GHZ or OATS probe")
        use_rc = randomized or axis == "eta" or subcommand in RC_SUBCOMMANDS
        times = None
        if scenario["t_lo"] is not None and scenario["t_hi"] is not None:
            times = _times(scenario)
        frames, barn = engines.sweep_engine(
            config=config,
            axis=axis,
            values=values,
            rc=rc if use_rc else None,
            times=times,
            fit=scenario["fit"],
            reference=scenario["reference"],
        )
        return frames, barn, ["fit"]

    if subcommand == "sweep":
        raise InvalidParameter("sweep needs one of --sweep-N, --sweep-x, --sweep-eta")

    _fill_time_range(scenario, config, randomized)
    times = _times(scenario)
    if subcommand in RC_SUBCOMMANDS:
        frames, barn = engines.rc_engine(config=config, rc=rc, times=times)
    elif subcommand == "concurrence":
        frames, barn = engines.concurrence_engine(config=config, times=times)
        return frames, barn, []
    else:
        frames, barn = engines.curve_engine(config=config, times=times)
    return frames, barn, ["optimum"]


class _WarningCollector(logging.Handler):
    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.messages = []

    def emit(self, record):
        self.messages.append(record.getMessage().strip())


@contextlib.contextmanager
def _collect_warnings():
    root = logging.getLogger()
    collector = _WarningCollector()
    root.addHandler(collector)
    logging.captureWarnings(True)
    try:
        yield collector
    finally:
        root.removeHandler(collector)


def execute(subcommand, scenario):
    """Run one scenario and write its data files and manifest.

    Returns:
        (list of written data paths, manifest path, frames)
    """
    out = scenario["out"]
    with _collect_warnings() as collector:
        frames, barn, names = _run_engine(subcommand, scenario)
    warnings = sorted(set(collector.messages))
    for message in warnings:
        click.echo(f"[ramseypy] warning: {message}")

    outputs = dumpers.output_paths(out, len(frames), names)
    manifest = dumpers.build_manifest(subcommand, scenario, outputs, warnings)
    manifest_file, digest = dumpers.manifest_dumper(manifest=manifest, out=out)
    written = dumpers.csv_dumper(frames=frames, out=out, digest=digest, names=names, barn=barn)
    return written, manifest_file, frames


def _guarded(subcommand, scenario_func):
    """run, report and map exceptions to exit codes (1 usage, 2 numerical);
    returns the engine frames"""
    try:
        scenario = scenario_func()
        written, manifest_file, frames = execute(subcommand, scenario)
    except USAGE_ERRORS as e:
        click.echo(f"[ramseypy] ({subcommand}) error: {e}", err=True)
        sys.exit(1)
    except Error as e:
        click.echo(f"[ramseypy] ({subcommand}) numerical failure: {e}", err=True)
        sys.exit(2)
    for path in written:
        click.echo(f"[ramseypy] ({subcommand}) -> {path}")
    click.echo(f"[ramseypy] ({subcommand}) manifest -> {manifest_file}")
    return frames


# ----------------------------------------------------------------------------
# options
# ----------------------------------------------------------------------------


def _options(*decorators):
    def apply(func):
        for decorator in reversed(decorators):
            func = decorator(func)
        return func

    return apply


_config_option = click.option(
    "--config", "config", default=None, help="JSON scenario file or run manifest."
)
_debug_option = click.option("--debug", "-d", is_flag=True, help="Run in debug mode.")

_bath_options = _options(
    click.option("--s", "s", type=float, default=None, help="Ohmicity (s > 1)."),
    click.option("--alpha", "alpha", type=float, default=None, help="Coupling strength."),
    click.option("--cutoff", "cutoff", default=None, help="exponential (exp) or gaussian (gauss)."),
    click.option("--beta-temp", "beta_temp", type=float, default=None, help="Inverse temperature in 1/omega_c (inf allowed)."),
    click.option("--dimension", "dimension", type=int, default=None, help="Spatial dimension D (1, 2 or 3)."),
)

_protocol_options = _options(
    click.option("--N", "N", type=int, default=None, help="Number of qubits."),
    click.option("--T", "T", type=float, default=None, help="Total time budget."),
    click.option("--b", "b", type=float, default=None, help="Signal value."),
    click.option("--theta", "theta", type=float, default=None, help="OATS twist angle."),
    click.option("--beta", "beta", type=float, default=None, help="OATS rotation angle."),
    click.option("--regime", "regime", default=None, help="collective or even-odd."),
    click.option("--x", "x", type=float, default=None, help="Even-odd transit time."),
)

_grid_options = _options(
    click.option("--t-lo", "t_lo", type=float, default=None, help="First time (1/omega_c)."),
    click.option("--t-hi", "t_hi", type=float, default=None, help="Last time (1/omega_c)."),
    click.option("--grid", "grid", type=int, default=None, help="Number of log-spaced times."),
    click.option("--out", "out", default=None, help="Output CSV path."),
)

_rc_options = _options(
    click.option("--eta", "eta", type=float, default=None, help="v / (epsilon omega_c)."),
    click.option("--epsilon", "epsilon", type=float, default=None, help="Layout width (must agree with eta)."),
    click.option("--K", "K", type=int, default=None, help="Number of sampled layouts."),
    click.option("--seed", "seed", type=int, default=None, help="Master seed."),
)

_sweep_options = _options(
    click.option("--sweep-N", "sweep_n", default=None, help="lo:hi:count (geometric)."),
    click.option("--sweep-x", "sweep_x", default=None, help="lo:hi:count (linear)."),
    click.option("--sweep-eta", "sweep_eta", default=None, help="lo:hi:count (geometric)."),
    click.option("--fit", "fit", is_flag=True, default=None, help="Add a power-law fit table."),
    click.option("--reference", "reference", is_flag=True, default=None, help="Use the eta = 0 curves for GHZ/OATS-RC sweeps."),
)


def _scenario_command(subcommand, kwargs):
    config = kwargs.pop("config", None)
    if kwargs.pop("debug", False):
        log.setup_logging(default_level="DEBUG")
        click.echo(f"[ramseypy] ({subcommand}) debug mode on")
    # unset flags must not mask values from --config
    for flag in ("fit", "reference", "full"):
        if not kwargs.get(flag):
            kwargs.pop(flag, None)

    def scenario():
        sweep_flags = _sweep_flags(
            kwargs.pop("sweep_n", None), kwargs.pop("sweep_x", None), kwargs.pop("sweep_eta", None)
        )
        return resolve_scenario(subcommand, config, **kwargs, **sweep_flags)

    return _guarded(subcommand, scenario)


class _Group(click.Group):
    """click group whose usage errors exit with 1"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            return super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
        except click.UsageError as e:
            e.show()
            sys.exit(1)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)


@click.group("ramseypy", cls=_Group)
def cli():
    pass


@click.command()
@_config_option
@_debug_option
@_protocol_options
@_bath_options
@_grid_options
def coeffs(**kwargs):
    """Dynamic coefficients (kappa, xi, chi, Psi) against time."""
    _scenario_command("coeffs", kwargs)


@click.command()
@_config_option
@_debug_option
@_protocol_options
@_bath_options
@_grid_options
@_sweep_options
def css(**kwargs):
    """Delta b curve of a coherent spin state (or its optimum along a sweep).

    Example:

        ramseypy css --regime even-odd --N 20000 --sweep-x 0:3:60 --out eo.csv
    """
    _scenario_command("css", kwargs)


@click.command()
@_config_option
@_debug_option
@_protocol_options
@_bath_options
@_grid_options
@_sweep_options
def oats(**kwargs):
    """Delta b curve of a one-axis twisted state."""
    _scenario_command("oats", kwargs)


@click.command("ghz-rc")
@_config_option
@_debug_option
@_protocol_options
@_bath_options
@_grid_options
@_rc_options
@_sweep_options
def ghz_rc(**kwargs):
    """GHZ Delta b under randomized coupling: Monte Carlo curve, dispersion
    and the eta = 0 reference."""
    _scenario_command("ghz-rc", kwargs)


@click.command("oats-rc")
@_config_option
@_debug_option
@_protocol_options
@_bath_options
@_grid_options
@_rc_options
@_sweep_options
def oats_rc(**kwargs):
    """OATS Delta b under randomized coupling."""
    _scenario_command("oats-rc", kwargs)


@click.command()
@_config_option
@_debug_option
@_protocol_options
@_bath_options
@_grid_options
def concurrence(**kwargs):
    """Two-qubit concurrence and Delta b of a collective CSS on one grid."""
    _scenario_command("concurrence", kwargs)


@click.command()
@_config_option
@_debug_option
@click.option("--N", "N", type=int, default=None, help="Number of qubits.")
@click.option("--regime", "regime", default=None, help="general, collective or even-odd.")
@click.option("--sweep-N", "sweep_n", default=None, help="lo:hi:count (geometric).")
@click.option("--out", "out", default=None, help="Output CSV path.")
def qni(**kwargs):
    """Count the quantum-noise-insensitive matrix elements."""
    kwargs.update(sweep_x=None, sweep_eta=None)
    _scenario_command("qni", kwargs)


@click.command()
@_config_option
@_debug_option
@click.option("--state", "state", default=None, help="css, oats or ghz.")
@_protocol_options
@_bath_options
@_grid_options
@_rc_options
@_sweep_options
def sweep(**kwargs):
    """Optimal tau and Delta b along one axis (N, x or eta).

    Example:

        ramseypy sweep --state oats --sweep-N 1000:100000:9 --fit
    """
    _scenario_command("sweep", kwargs)


@click.command()
@_config_option
@_debug_option
@click.option("--full", "full", is_flag=True, default=None, help="Include the large-N scaling, OATS enumeration and concurrence-dip checks.")
@click.option("--samples", "samples", type=int, default=None, help="Random-unitary samples per check.")
@click.option("--out", "out", default=None, help="Output CSV path.")
def validate(**kwargs):
    """Run the oracle suite; exits with 2 if any check fails."""
    frames = _scenario_command("validate", kwargs)
    h = get_headers_validation()
    report = frames[0]
    failed = report.loc[~report[h.passed].astype(bool), h.check].tolist()
    if failed:
        click.echo(f"[ramseypy] (validate) {len(failed)} check(s) failed:")
        for name in failed:
            click.echo(f"[ramseypy]   - {name}")
        sys.exit(2)
    click.echo(f"[ramseypy] (validate) all {len(report)} checks passed")


@click.command()
@click.argument("manifest")
@click.option("--out", "out", default=None, help="Write to another path.")
def rerun(manifest, out):
    """Re-run the scenario recorded in a manifest."""
    try:
        recorded = dumpers.read_manifest(manifest)
        subcommand = recorded["subcommand"]
        _, scenario = _read_config(manifest)
    except USAGE_ERRORS as e:
        click.echo(f"[ramseypy] (rerun) error: {e}", err=True)
        sys.exit(1)
    if out is not None:
        scenario["out"] = out
    base = _defaults(subcommand)
    base.update(scenario)
    click.echo(f"[ramseypy] (rerun) {subcommand}")
    _guarded(subcommand, lambda: base)


# ----------------------------------------------------------------------------
# info and setup
# ----------------------------------------------------------------------------


def _version():
    click.echo(f"[ramseypy] version: {VERSION}")


def _configloc():
    _, config_file = prmreader.get_user_dir_and_dst()
    click.echo(f"[ramseypy] -> {config_file}")
    if not config_file.is_file():
        click.echo("[ramseypy] File does not exist!")
    return config_file


def _dump_params():
    click.echo("[ramseypy] dumping parameters to screen:\n")
    prmreader.info()


def _check_import_ramseypy():
    try:
        import ramseypy  # noqa: F401
        from ramseypy.core import coefficients, randomized  # noqa: F401

        return True
    except ImportError as e:
        click.echo(f"[ramseypy] import failed: {e}")
        return False


def _check_config_file():
    config_file = prmreader.get_user_dir_and_dst()[1]
    if not config_file.is_file():
        click.echo(f"[ramseypy] no user prm file ({config_file}); run 'ramseypy setup'")
        return False
    try:
        prm_dict = prmreader._read_prm_file_without_updating(config_file)
    except ConfigFileNotRead as e:
        click.echo(f"[ramseypy] could not read {config_file}: {e}")
        return False
    missing = [s for s in prmreader.SAVEABLE_SECTIONS if s not in (prm_dict or {})]
    for section in missing:
        click.echo(f"{section}: MISSING")
    return not missing


def _check_quadrature():
    from ramseypy.core.coefficients import pair_coefficients, short_time_constants

    model = SpectralModel()
    tau = 1.0e-3
    kappa, _ = pair_coefficients(model, 0.0, tau)
    closed = short_time_constants(model, 0.0).kappa2
    return abs(kappa / tau ** 2 - closed) <= 5e-3 * closed


def _check():
    click.echo(" checking ".center(80, "="))
    failed_checks = 0
    number_of_checks = 0

    def sub_check(check_type, check_func):
        click.echo(f"[ramseypy] * - Checking {check_type}")
        if check_func():
            click.echo("[ramseypy] -> succeeded!")
            failed = 0
        else:
            click.echo("[ramseypy] -> failed!!!!")
            failed = 1
        click.echo(80 * "-")
        return failed

    check_types = ["ramseypy imports", "configuration (prm) file", "quadrature"]
    check_funcs = [_check_import_ramseypy, _check_config_file, _check_quadrature]

    for ct, cf in zip(check_types, check_funcs):
        try:
            failed_checks += sub_check(ct, cf)
        except Exception as e:
            click.echo(f"[ramseypy] check raised an exception ({e})")
            failed_checks += 1
        number_of_checks += 1
    succeeded_checks = number_of_checks - failed_checks
    if failed_checks > 0:
        click.echo(f"[ramseypy] Failed {failed_checks} out of {number_of_checks} checks.")
    else:
        click.echo(f"[ramseypy] Succeeded {succeeded_checks} out of {number_of_checks} checks.")
    click.echo(80 * "=")


@click.command()
@click.option("--version", "-v", is_flag=True, help="Print version information.")
@click.option("--configloc", "-l", is_flag=True, help="Print full path to the config file.")
@click.option("--params", "-p", is_flag=True, help="Dump all parameters to screen.")
@click.option("--check", "-c", is_flag=True, help="Do a sanity check to see if things works as they should.")
def info(version, configloc, params, check):
    """This will give you some valuable information about your ramseypy."""
    complete_info = True

    if check:
        complete_info = False
        _check()

    if version:
        complete_info = False
        _version()

    if configloc:
        complete_info = False
        _configloc()

    if params:
        complete_info = False
        _dump_params()

    if complete_info:
        _version()
        _configloc()


@click.command()
@click.option("--dry-run", "-dr", is_flag=True, default=False, help="Only print what would be written.")
@click.option("--root-dir", "-d", default=None, help="Write the prm file here instead of the home directory.")
@click.option("--testuser", "-t", default=None, help="Fake name for fake user (for testing).")
def setup(dry_run, root_dir, testuser):
    """Write your ramseypy configuration (prm) file."""
    click.echo("[ramseypy] (setup)")
    init_filename = prmreader.create_custom_init_filename(testuser)
    user_dir, dst_file = prmreader.get_user_dir_and_dst(init_filename)
    if root_dir:
        user_dir = pathlib.Path(root_dir)
        dst_file = user_dir / init_filename
    click.echo(f"[ramseypy] (setup) writing configurations to {dst_file}")
    if dry_run:
        click.echo("[ramseypy] (setup) dry run: nothing written")
        return
    try:
        user_dir.mkdir(parents=True, exist_ok=True)
        prmreader._write_prm_file(dst_file)
    except (ConfigFileNotWritten, OSError) as e:
        click.echo(f"[ramseypy] (setup) could not write {dst_file}: {e}", err=True)
        sys.exit(1)
    click.echo("[ramseypy] (setup) OK!")


cli.add_command(coeffs)
cli.add_command(css)
cli.add_command(oats)
cli.add_command(ghz_rc)
cli.add_command(oats_rc)
cli.add_command(concurrence)
cli.add_command(qni)
cli.add_command(sweep)
cli.add_command(validate)
cli.add_command(rerun)
cli.add_command(info)
cli.add_command(setup)


if __name__ == "__main__":
    cli()
