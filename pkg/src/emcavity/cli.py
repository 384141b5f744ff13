"""`emcavity` command line interface.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical
error.  Diagnostics go to stderr; data goes to files or stdout only.
Every file-writing subcommand also emits `<out>.manifest.json` recording
the command line, config hash, seed, version and timestamp.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import time

import click
import numpy as np

from . import __version__
from .config import Background, ConfigError, load_config
from .constants import TWO_PI
from .core import intracavity_photon_number, enhanced_coupling, thermal_occupation
from .errors import BracketError, DataError, DomainError, NumericalError
from .fitting import (
    ComplexTrace,
    OmitModelParams,
    ReflectionModelParams,
    fit_omit,
    fit_reflection,
    load_trace,
    reflection_model,
    save_trace,
    synthesize_trace,
)
from .linear_response import SpectrumRequest, optomechanical_damping, spectrum
from .tripartite import critical_coupling as _critical_coupling
from .tripartite import sweep as _sweep
from . import device as dev

_FMT = "%.17e"


def _fmt(x) -> str:
    return _FMT % float(x)


def _write_manifest(out_path: str, config_path: str | None, seed: int | None, outputs):
    entry = {
        "command_line": sys.argv,
        "config_sha256": None,
        "seed": seed,
        "tool_version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "outputs": list(outputs),
    }
    if config_path:
        with open(config_path, "rb") as fh:
            entry["config_sha256"] = hashlib.sha256(fh.read()).hexdigest()
    with open(out_path + ".manifest.json", "w") as fh:
        json.dump(entry, fh, indent=2)
        fh.write("\n")


def _require(params, block: str):
    value = getattr(params, block)
    if value is None:
        raise ConfigError(f"{block}: block required by this subcommand")
    return value


def _enhanced_g(params) -> float:
    coupling = _require(params, "coupling")
    return coupling.g


@click.group()
@click.version_option(version=__version__, prog_name="emcavity")
@click.option(
    "--threads",
    type=int,
    default=None,
    envvar="EMCAVITY_THREADS",
    help="Cap internal parallelism (evaluation is currently sequential).",
)
@click.pass_context
def cli(ctx, threads):
    """Cavity-electromechanics toolkit: spectra, entanglement, fitting,
    device integrals."""
    ctx.ensure_object(dict)
    if threads is not None and threads < 1:
        raise click.UsageError("--threads must be >= 1")
    ctx.obj["threads"] = threads


@cli.command()
@click.option("--f-hz", type=float, required=True, help="Mode frequency in Hz.")
@click.option("--t-k", type=float, required=True, help="Bath temperature in K.")
def thermal(f_hz, t_k):
    """Bose-Einstein thermal occupation of a mode."""
    n = thermal_occupation(TWO_PI * f_hz, t_k)
    click.echo(_fmt(n))


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--f-start-hz", type=float, required=True)
@click.option("--f-stop-hz", type=float, required=True)
@click.option("--points", type=int, default=2001, show_default=True)
@click.option("--model", type=click.Choice(["bare", "omit"]), default="bare", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def reflect(config_path, f_start_hz, f_stop_hz, points, model, out_path):
    """Reflection spectrum over a lab-frame frequency grid.

    The bare model is evaluated at the absolute frequency; the omit model
    is evaluated in the frame rotating at the pump (grid minus f_p).
    """
    if points < 2 or f_stop_hz <= f_start_hz:
        raise click.UsageError("need points >= 2 and f_stop_hz > f_start_hz")
    params = load_config(config_path)
    cavity = _require(params, "cavity")
    f_grid = np.linspace(f_start_hz, f_stop_hz, points)
    omega = TWO_PI * f_grid
    if model == "omit":
        mech = _require(params, "mech")
        pump = _require(params, "pump")
        g = _enhanced_g(params)
        detuning = pump.detuning(cavity)
        request = SpectrumRequest(
            omega_grid=omega - pump.omega_p, cavity=cavity, mech=mech, g=g, detuning=detuning
        )
    else:
        request = SpectrumRequest(omega_grid=omega, cavity=cavity)
    spec = spectrum(request, model=model)
    _write_spectrum_csv(out_path, f_grid, spec.values)
    _write_manifest(out_path, config_path, None, [out_path])
    click.echo(f"wrote {out_path}", err=True)


def _write_spectrum_csv(path, f_hz, values):
    with open(path, "w", newline="") as fh:
        fh.write("f_hz,re,im,mag_db,phase_rad\n")
        mag = np.abs(values)
        with np.errstate(divide="ignore"):
            mag_db = 20.0 * np.log10(mag)
        phase = np.angle(values)
        for f, v, m, p in zip(f_hz, values, mag_db, phase):
            fh.write(f"{_fmt(f)},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(m)},{_fmt(p)}\n")


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--f-hz", type=float, required=True, help="Probe frequency in Hz (lab frame).")
def omit(config_path, f_hz):
    """OMIT reflection at a single probe frequency."""
    params = load_config(config_path)
    cavity = _require(params, "cavity")
    mech = _require(params, "mech")
    pump = _require(params, "pump")
    from .linear_response import omit_reflection

    r = omit_reflection(
        TWO_PI * f_hz - pump.omega_p, cavity, mech, _enhanced_g(params), pump.detuning(cavity)
    )
    click.echo(
        f"re={_fmt(r.real)} im={_fmt(r.imag)} "
        f"mag_db={_fmt(20 * np.log10(abs(r)))} phase_rad={_fmt(np.angle(r))}"
    )


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--detuning-hz", type=float, required=True, help="Pump detuning Delta/2pi in Hz.")
def damping(config_path, detuning_hz):
    """Optomechanical damping rate gamma_opt/2pi at the given detuning."""
    params = load_config(config_path)
    cavity = _require(params, "cavity")
    mech = _require(params, "mech")
    g = _enhanced_g(params)
    rate = optomechanical_damping(TWO_PI * detuning_hz, g, cavity.kappa, mech.omega_m)
    click.echo(_fmt(rate / TWO_PI))


@cli.group()
def tripartite():
    """Electro-magno-mechanical entanglement engine."""


def _parse_axis(spec_str: str):
    try:
        name_hz, rng = spec_str.split("=", 1)
        start, stop, count = rng.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise click.UsageError(
            f"axis must look like g_b_hz=START:STOP:POINTS, got {spec_str!r}"
        )
    if not name_hz.endswith("_hz"):
        raise click.UsageError(f"axis name must end in _hz, got {name_hz!r}")
    name = name_hz[: -len("_hz")]
    if name not in ("g_b", "g_c", "delta_a", "delta_c"):
        raise click.UsageError(f"cannot sweep {name!r}")
    if count < 1:
        raise click.UsageError("axis needs at least 1 point")
    return name, np.linspace(start, stop, count)


@tripartite.command("sweep")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--axis", "axis1", required=True, help="e.g. g_b_hz=0:5e6:200")
@click.option("--axis2", default=None, help="Optional second axis.")
@click.option("--omega-hz", type=float, default=0.0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def tripartite_sweep(config_path, axis1, axis2, omega_hz, out_path):
    """Sweep couplings/detunings; per-point stability and entanglement."""
    params = load_config(config_path)
    p = _require(params, "tripartite")
    axes = dict([_parse_axis(axis1)])
    if axis2 is not None:
        name2, grid2 = _parse_axis(axis2)
        if name2 in axes:
            raise click.UsageError("axis2 must differ from axis")
        axes[name2] = grid2
    axes_rad = {k: TWO_PI * v for k, v in axes.items()}
    rows = _sweep(p, axes_rad, omega=TWO_PI * omega_hz)
    with open(out_path, "w", newline="") as fh:
        names = list(axes)
        fh.write(",".join(f"{n}_hz" for n in names))
        fh.write(",stable,max_re_eig_hz,zeta_minus,log_negativity\n")
        for overrides, res in rows:
            vals = [_fmt(overrides[n] / TWO_PI) for n in names]
            vals.append("true" if res.stable else "false")
            vals.append(_fmt(res.max_re_eigenvalue / TWO_PI))
            vals.append("" if res.zeta_minus is None else _fmt(res.zeta_minus))
            vals.append("" if res.log_negativity is None else _fmt(res.log_negativity))
            fh.write(",".join(vals) + "\n")
    _write_manifest(out_path, config_path, None, [out_path])
    click.echo(f"wrote {out_path} ({len(rows)} rows)", err=True)


@tripartite.command("critical")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--axis", type=click.Choice(["g_b", "g_c"]), required=True)
@click.option("--bracket-hz", required=True, help="Comma-separated pair, e.g. 0,5e6")
def tripartite_critical(config_path, axis, bracket_hz):
    """Locate the stability boundary along one coupling axis."""
    try:
        lo, hi = (float(x) for x in bracket_hz.split(","))
    except ValueError:
        raise click.UsageError(f"--bracket-hz must be two comma-separated numbers")
    params = load_config(config_path)
    p = _require(params, "tripartite")
    g_crit = _critical_coupling(p, axis, (TWO_PI * lo, TWO_PI * hi))
    click.echo(_fmt(g_crit / TWO_PI))


@cli.group()
def fit():
    """Nonlinear least-squares fits of reflection traces."""


def _fit_json(result, extra=None):
    p = result.params
    doc = {"params": {}, "residual_norm": result.residual_norm}
    if isinstance(p, ReflectionModelParams):
        doc["params"] = {
            "amplitude": p.amplitude,
            "tau_s": p.tau,
            "phi_rad": p.phi,
            "f_c_hz": p.omega_c / TWO_PI,
            "kappa_in_hz": p.kappa_in / TWO_PI,
            "kappa_ex_hz": p.kappa_ex / TWO_PI,
            "delta_hz": p.delta / TWO_PI,
        }
    else:
        doc["params"] = {
            "g_hz": p.g / TWO_PI,
            "gamma_hz": p.gamma / TWO_PI,
            "f_m_hz": p.omega_m / TWO_PI,
            "detuning_hz": p.detuning / TWO_PI,
        }
    doc["convergence"] = {
        "converged": result.converged,
        "iterations": result.iterations,
        "rank_deficient": result.rank_deficient,
        "message": result.message,
    }
    doc["param_uncertainties"] = result.param_uncertainties
    if extra:
        doc.update(extra)
    return doc


@fit.command("reflect")
@click.option("--in", "in_path", required=True, type=click.Path())
@click.option(
    "--format", "fmt", type=click.Choice(["re_im", "db_phase"]), default="re_im", show_default=True
)
@click.option("--out", "out_path", required=True, type=click.Path())
def fit_reflect_cmd(in_path, fmt, out_path):
    """Fit the extended one-sided-cavity model to a complex trace."""
    trace = load_trace(in_path, fmt)
    result = fit_reflection(trace)
    with open(out_path, "w") as fh:
        json.dump(_fit_json(result), fh, indent=2)
        fh.write("\n")
    _write_manifest(out_path, None, None, [out_path])
    click.echo(f"wrote {out_path}", err=True)


@fit.command("omit")
@click.option("--in", "in_path", required=True, type=click.Path())
@click.option(
    "--format", "fmt", type=click.Choice(["re_im", "db_phase"]), default="re_im", show_default=True
)
@click.option("--cavity", "cavity_path", required=True, type=click.Path(), help="fit.json from fit reflect")
@click.option("--f-m-hz", type=float, required=True, help="Mechanical frequency guess in Hz.")
@click.option("--g-hz", type=float, default=1e3, show_default=True, help="Coupling guess in Hz.")
@click.option("--gamma-hz", type=float, default=100.0, show_default=True)
@click.option("--detuning-hz", type=float, default=None, help="Pump detuning; default f_m_hz.")
@click.option("--fit-detuning", is_flag=True, default=False)
@click.option("--out", "out_path", required=True, type=click.Path())
def fit_omit_cmd(in_path, fmt, cavity_path, f_m_hz, g_hz, gamma_hz, detuning_hz, fit_detuning, out_path):
    """Fit the OMIT model with cavity parameters held fixed.

    The trace frequency column is the probe-pump detuning (rotating frame).
    """
    trace = load_trace(in_path, fmt)
    try:
        with open(cavity_path) as fh:
            cav_doc = json.load(fh)["params"]
        cavity = ReflectionModelParams(
            amplitude=cav_doc["amplitude"],
            tau=cav_doc["tau_s"],
            phi=cav_doc["phi_rad"],
            omega_c=TWO_PI * cav_doc["f_c_hz"],
            kappa_in=TWO_PI * cav_doc["kappa_in_hz"],
            kappa_ex=TWO_PI * cav_doc["kappa_ex_hz"],
            delta=TWO_PI * cav_doc["delta_hz"],
        )
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DataError(f"cannot read cavity fit {cavity_path}: {exc}") from exc
    if detuning_hz is None:
        detuning_hz = f_m_hz
    guess = OmitModelParams(
        g=TWO_PI * g_hz,
        gamma=TWO_PI * gamma_hz,
        omega_m=TWO_PI * f_m_hz,
        detuning=TWO_PI * detuning_hz,
    )
    result = fit_omit(trace, cavity, guess, fit_detuning=fit_detuning)
    with open(out_path, "w") as fh:
        json.dump(_fit_json(result), fh, indent=2)
        fh.write("\n")
    _write_manifest(out_path, None, None, [out_path])
    click.echo(f"wrote {out_path}", err=True)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--snr-db", type=float, default=None, help="Omit for a noiseless trace.")
@click.option("--seed", type=int, default=None, help="Required with --snr-db.")
@click.option("--f-start-hz", type=float, default=None)
@click.option("--f-stop-hz", type=float, default=None)
@click.option("--points", type=int, default=2001, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def synth(config_path, snr_db, seed, f_start_hz, f_stop_hz, points, out_path):
    """Synthesize a reflection trace (cavity + background model).

    The default grid spans omega_c +/- 10 kappa with 2001 points.
    """
    if snr_db is not None and seed is None:
        raise click.UsageError("--seed is required when --snr-db is given")
    params = load_config(config_path)
    cavity = _require(params, "cavity")
    bg = params.background or Background()
    if f_start_hz is None or f_stop_hz is None:
        f_c = cavity.omega_c / TWO_PI
        span = 10.0 * cavity.kappa / TWO_PI
        f_start_hz = f_c - span if f_start_hz is None else f_start_hz
        f_stop_hz = f_c + span if f_stop_hz is None else f_stop_hz
    model = ReflectionModelParams(
        amplitude=bg.amplitude,
        tau=bg.tau,
        phi=bg.phi,
        omega_c=cavity.omega_c,
        kappa_in=cavity.kappa_in,
        kappa_ex=cavity.kappa_ex,
        delta=bg.delta,
    )
    trace = synthesize_trace(
        lambda w: reflection_model(w, model),
        np.linspace(f_start_hz, f_stop_hz, points),
        snr_db=snr_db,
        seed=seed,
    )
    save_trace(trace, out_path)
    _write_manifest(out_path, config_path, seed, [out_path])
    click.echo(f"wrote {out_path}", err=True)


@cli.group()
def device():
    """Design integrals over exported field samples."""


@device.command("meff")
@click.option("--volume", "volume_path", required=True, type=click.Path())
def device_meff(volume_path):
    """Effective mass of the sampled mechanical mode (kg)."""
    vol = dev.load_volume_csv(volume_path)
    click.echo(_fmt(dev.effective_mass(vol)))


@device.command("cap")
@click.option("--volume", "volume_path", required=True, type=click.Path())
@click.option("--voltage-v", type=float, default=1.0, show_default=True)
def device_cap(volume_path, voltage_v):
    """Motional capacitance from the stored field energy (F)."""
    vol = dev.load_volume_csv(volume_path)
    click.echo(_fmt(dev.capacitance_from_energy(vol, voltage_v)))


@device.command("g0")
@click.option("--volume", "volume_path", required=True, type=click.Path())
@click.option("--surface", "surface_paths", multiple=True, required=True, type=click.Path())
@click.option("--lumped", "lumped_path", required=True, type=click.Path())
@click.option("--f-m-hz", type=float, required=True, help="Mechanical mode frequency in Hz.")
@click.option("--voltage-v", type=float, default=1.0, show_default=True)
def device_g0(volume_path, surface_paths, lumped_path, f_m_hz, voltage_v):
    """Moving-boundary single-photon coupling rate.

    Resonator frequency comes from the lumped LC model with the motional
    capacitance, omega_c = 1/sqrt(L (C_s + C_m)).
    """
    vol = dev.load_volume_csv(volume_path)
    surfaces = [dev.load_surface_csv(p) for p in surface_paths]
    lumped = dev.load_lumped_json(lumped_path)
    from .core import zero_point_fluctuation

    m_eff = dev.effective_mass(vol)
    c_m = dev.capacitance_from_energy(vol, voltage_v)
    eta = dev.participation_ratio(c_m, lumped.stray_capacitance)
    omega_c = dev.lc_frequency(lumped, c_m)
    x_zpf = zero_point_fluctuation(m_eff, TWO_PI * f_m_hz)
    g0 = dev.coupling_rate_moving_boundary(surfaces, vol, eta, omega_c, x_zpf)
    doc = {
        "m_eff_kg": m_eff,
        "x_zpf_m": x_zpf,
        "c_m_f": c_m,
        "eta": eta,
        "f_c_hz": omega_c / TWO_PI,
        "g0_hz": g0 / TWO_PI,
    }
    click.echo(json.dumps(doc, indent=2))


def main(argv=None) -> int:
    """Dispatch with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False, obj={})
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return 1
    except (DataError, FileNotFoundError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except (NumericalError, DomainError, BracketError) as exc:
        click.echo(f"numerical error: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
