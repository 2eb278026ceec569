import functools
import math
import os
import subprocess
import sys
from typing import Optional, Tuple

import click
import numpy as np
import pandas as pd
from click_aliases import ClickAliasedGroup
from prettytable import PrettyTable


############## HELPERS ##############
def _print_msg(msg: str) -> None:
    """
    Helper function to print messages in CLI-specific format. Currently just a wrapper around print(),
    could easily be extended to include color/formatted output.

    Parameters
    ----------
    msg: str
        Message to print to the console.
    """
    print(f"{msg}")


def _run_bash_command(command: str) -> Tuple[str, str]:
    """
    Helper function to split a bash command on spaces and execute it using subprocess.

    Returns
    -------
    Tuple[str, str]
        Tuple returning the stdout and stderr from running the shell command.
    """
    out = subprocess.run(command.split(" "), capture_output=True)
    return str(out.stdout, "utf-8"), str(out.stderr, "utf-8")


def _help() -> str:
    """
    Syntactic sugar to call `mg --help` when a user calls `mg help`.
    """
    stdout, _ = _run_bash_command("mg --help")
    return stdout


def _exit_codes(command):
    """
    Map library errors onto the CLI's exit codes: 2 for configuration errors, 3 for numerical failures,
    5 for files that cannot be read or written. Acceptance failures (exit code 4) are signalled by the
    commands themselves.
    """
    from molgrating.constants import ExitCode
    from molgrating.errors import ConfigError, DomainError, NumericalError, ValidationError

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (ConfigError, DomainError, ValidationError) as e:
            _print_msg(f"configuration error: {e}")
            sys.exit(int(ExitCode.CONFIG_ERROR))
        except NumericalError as e:
            _print_msg(f"numerical error: {e}")
            sys.exit(int(ExitCode.NUMERICAL_ERROR))
        except OSError as e:
            _print_msg(f"i/o error: {e}")
            sys.exit(int(ExitCode.IO_ERROR))

    return wrapper


def _load_config(config: Optional[str], default: str, overrides: dict):
    """Load `config` (a file path or the name of a packaged config) and apply CLI overrides."""
    from molgrating.config import RunConfig

    name = config if config is not None else default
    run_config = RunConfig.from_file(name) if os.path.isfile(name) else RunConfig.from_name(name)
    overrides = {key: value for key, value in overrides.items() if value is not None}
    return run_config.with_overrides(overrides) if overrides else run_config


def _metadata(command: str, run_config, **extra) -> dict:
    from molgrating.results import library_versions

    metadata = {"command": command, "config": run_config.resolved(), "versions": library_versions()}
    metadata.update(extra)
    return metadata


def _write(table, directory: str, filename: str) -> str:
    path = os.path.join(directory, filename)
    table.write(path)
    _print_msg(f"wrote {path}")
    return path


def _safe_ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    """numerator / denominator, nan where the denominator is negligible (e.g. at the zeros of a point amplitude)."""
    numerator, denominator = np.asarray(numerator), np.asarray(denominator)
    significant = denominator > 1e-12 * np.max(denominator)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(significant, numerator / denominator, np.nan)


# options shared by the physics commands
def _common_options(command):
    command = click.option("--config", type=str, default=None, help="Config file or packaged config name.")(command)
    command = click.option("--out", type=str, default=None, help="Output directory (overrides output.directory).")(
        command
    )
    command = click.option(
        "--normalized", is_flag=True, default=False, help="Divide out the velocity prefactor of the amplitudes."
    )(command)
    command = click.option("--max-workers", type=int, default=None, help="Threads used for K2 grid evaluation.")(
        command
    )
    command = click.option("--verbose", is_flag=True, default=False, help="Print progress information.")(command)
    return command


def _overrides(out, normalized, max_workers) -> dict:
    # flags only override the config when given
    return {"output.directory": out, "output.normalized": True if normalized else None, "output.max_workers": max_workers}


############ CLICK API ##############
@click.group(cls=ClickAliasedGroup)
def cli():
    """
    The CLI tool for molgrating: diffraction of atoms and weakly bound dimers by transmission gratings.
    """
    pass


@cli.command(aliases=["h"])
def help() -> None:
    """
    Print the help message for mg.
    """
    _print_msg(_help())


@cli.command(aliases=["b"])
@_common_options
@click.option("--point", is_flag=True, default=False, help="Only compute the point-particle curve.")
@_exit_codes
def bar(config, out, normalized, max_workers, verbose, point) -> None:
    """
    Single-bar intensities |t_bar|^2 of the dimer and of a point particle over the K2 grid, plus the values at
    the grating's order positions. Writes bar.csv and bar_orders.csv.

    Parameters
    ----------
    config: str
        Config file or packaged config name (default: he2_grating).
    point: bool
        Skip the molecular amplitude.
    """
    from molgrating.amplitudes.bar import dimer_bar_amplitude, point_bar_amplitude
    from molgrating.results import ResultTable
    from molgrating.utils.grid_helpers import evaluate_on_grid

    run_config = _load_config(config, "he2_grating", _overrides(out, normalized, max_workers))
    geometry, beam = run_config.grating(), run_config.beam()
    k2_grid, normalized = run_config.k2_grid(), run_config.get("output.normalized")
    workers = run_config.get("output.max_workers")

    data = {"K2": k2_grid, "angle_mrad": 1e3 * beam.diffraction_angle(k2_grid)}
    data["I_point"] = np.abs(point_bar_amplitude(k2_grid, geometry.bar, beam, normalized)) ** 2

    n_max = int(math.floor(np.max(np.abs(k2_grid)) * geometry.period / (2 * math.pi)))
    orders = np.arange(n_max + 1)
    order_k2 = np.array([geometry.order_wavenumber(n) for n in orders])
    order_data = {"n": orders, "K2_n": order_k2}
    order_data["I_point"] = np.abs(point_bar_amplitude(order_k2, geometry.bar, beam, normalized)) ** 2

    extra = {}
    if not point:
        model = run_config.dimer_model()
        amplitude = functools.partial(dimer_bar_amplitude, bar=geometry.bar, beam=beam, model=model, normalized=normalized)
        data["I_dimer"] = np.abs(evaluate_on_grid(amplitude, k2_grid, max_workers=workers, progress=verbose)) ** 2
        data["ratio"] = _safe_ratio(data["I_dimer"], data["I_point"])
        order_data["I_dimer"] = np.abs(evaluate_on_grid(amplitude, order_k2)) ** 2
        order_data["ratio"] = _safe_ratio(order_data["I_dimer"], order_data["I_point"])
        extra["model"] = model.get_model_params()

    directory = run_config.get("output.directory")
    _write(ResultTable(pd.DataFrame(data), _metadata("bar", run_config, **extra)), directory, "bar.csv")
    _write(ResultTable(pd.DataFrame(order_data), _metadata("bar", run_config, **extra)), directory, "bar_orders.csv")

    table = PrettyTable(list(order_data.keys()))
    for row in pd.DataFrame(order_data).itertuples(index=False):
        table.add_row([f"{v:.6g}" if isinstance(v, float) else v for v in row])
    _print_msg(str(table))


@cli.command(aliases=["p"])
@_common_options
@click.option("--point", is_flag=True, default=False, help="Only compute the point-particle pattern.")
@_exit_codes
def pattern(config, out, normalized, max_workers, verbose, point) -> None:
    """
    Coherent N-bar pattern |t_coh|^2 over the K2 grid and the order table with peak heights relative to the
    first order. Writes pattern.csv and pattern_orders.csv.
    """
    from molgrating.grating import pattern as grating_pattern
    from molgrating.grating import relative_peak_heights
    from molgrating.results import ResultTable

    run_config = _load_config(config, "he2_grating", _overrides(out, normalized, max_workers))
    geometry, beam, k2_grid = run_config.grating(), run_config.beam(), run_config.k2_grid()
    normalized, workers = run_config.get("output.normalized"), run_config.get("output.max_workers")

    patterns = {"point": grating_pattern(geometry, beam, None, k2_grid, normalized=normalized, verbose=verbose)}
    extra = {}
    if not point:
        model = run_config.dimer_model()
        patterns["dimer"] = grating_pattern(
            geometry, beam, model, k2_grid, normalized=normalized, max_workers=workers, verbose=verbose
        )
        extra["model"] = model.get_model_params()

    data = {"K2": k2_grid, "angle_mrad": 1e3 * beam.diffraction_angle(k2_grid)}
    order_data = {"n": [o.n for o in patterns["point"].orders], "K2_n": [o.k2 for o in patterns["point"].orders]}
    for label, result in patterns.items():
        data[f"I_{label}"] = result.intensity
        order_data[f"I_{label}"] = [o.intensity for o in result.orders]
        if len(result.orders) > 1:
            order_data[f"I_{label}/I_1"] = [ratio for _, ratio in relative_peak_heights(result)]

    directory = run_config.get("output.directory")
    _write(ResultTable(pd.DataFrame(data), _metadata("pattern", run_config, **extra)), directory, "pattern.csv")
    _write(
        ResultTable(pd.DataFrame(order_data), _metadata("pattern", run_config, reference_order=1, **extra)),
        directory,
        "pattern_orders.csv",
    )

    table = PrettyTable(list(order_data.keys()))
    for row in pd.DataFrame(order_data).itertuples(index=False):
        table.add_row([f"{v:.6g}" if isinstance(v, float) else v for v in row])
    _print_msg(str(table))


@cli.command(name="fit-width", aliases=["fit"])
@_common_options
@_exit_codes
def fit_width(config, out, normalized, max_workers, verbose) -> None:
    """
    Fit the bar widening delta for which a point particle reproduces the dimer's single-bar intensity for
    |K2| <= grid.fit_k2_max. Prints delta and the residual; writes fit_width.csv with the compared curves.
    """
    from molgrating.amplitudes.bar import point_bar_amplitude
    from molgrating.amplitudes.fit import fit_effective_width
    from molgrating.grating import effective_grating
    from molgrating.grating import pattern as grating_pattern
    from molgrating.grating import relative_peak_heights
    from molgrating.results import ResultTable

    run_config = _load_config(config, "he2_width_fit", _overrides(out, normalized, max_workers))
    geometry, beam, model = run_config.grating(), run_config.beam(), run_config.dimer_model()

    fit = fit_effective_width(
        model,
        geometry.bar,
        beam,
        run_config.get("grid.fit_k2_max"),
        samples=run_config.get("grid.fit_samples"),
        verbose=verbose,
    )

    widened = effective_grating(geometry, fit.delta)
    ratios = relative_peak_heights(
        grating_pattern(widened, beam, None, np.array([0.0, geometry.order_wavenumber(5)]), normalized=True)
    )

    table = PrettyTable(["Quantity", "Value"])
    table.add_rows(
        [
            ["bar width a [nm]", f"{fit.bar_width:.6g}"],
            ["delta [nm]", f"{fit.delta:.6f}"],
            ["effective width a + delta [nm]", f"{fit.effective_width:.6f}"],
            ["<|x2|> [nm]", f"{model.size_measures().mean_abs_x2:.6f}"],
            ["residual", f"{fit.residual:.6g}"],
            ["relative residual", f"{fit.relative_residual:.6g}"],
        ]
    )
    _print_msg(str(table))
    _print_msg("effective-grating order ratios: " + ", ".join(f"I_{n}/I_1={r:.4g}" for n, r in ratios))

    data = {
        "K2": fit.k2_grid,
        "I_dimer": fit.dimer_intensity,
        "I_point_fit": fit.point_intensity,
        "I_point_bare": np.abs(point_bar_amplitude(fit.k2_grid, geometry.bar, beam, normalized=True)) ** 2,
    }
    summary = {
        "delta": fit.delta,
        "effective_width": fit.effective_width,
        "residual": fit.residual,
        "relative_residual": fit.relative_residual,
        "bounds": list(fit.bounds),
        "effective_grating_ratios": [[n, r] for n, r in ratios],
    }
    metadata = _metadata("fit-width", run_config, model=model.get_model_params(), fit=summary)
    _write(ResultTable(pd.DataFrame(data), metadata), run_config.get("output.directory"), "fit_width.csv")


@cli.command(aliases=["s"])
@_common_options
@click.option(
    "--c3-sweep", type=str, default=None, help="Comma-separated C3 values (meV nm^3) for an I_2/I_1 sweep."
)
@_exit_codes
def surface(config, out, normalized, max_workers, verbose, c3_sweep) -> None:
    """
    Atomic diffraction including the van der Waals attraction of the slit walls: geometric pattern, pattern
    with the configured C3 and wedge angle, and the same with the walls perpendicular. Writes surface.csv,
    surface_orders.csv and optionally surface_c3_sweep.csv.
    """
    from molgrating.constants import CONSTANTS, DEFAULT_C3
    from molgrating.dataclasses import BeamState, SurfaceSpec
    from molgrating.grating import relative_peak_heights
    from molgrating.results import ResultTable
    from molgrating.surface import atomic_pattern_with_surface
    from molgrating.surface import c3_sweep as run_c3_sweep

    run_config = _load_config(config, "he2_grating", _overrides(out, normalized, max_workers))
    geometry, k2_grid, workers = run_config.grating(), run_config.k2_grid(), run_config.get("output.max_workers")

    # the surface model describes single atoms; a dimer mass in the config is replaced by the atom's
    beam = BeamState(total_mass=CONSTANTS.helium4_mass, velocity=run_config.beam().velocity)
    spec = run_config.surface_spec() or SurfaceSpec(c3=DEFAULT_C3, geometry=geometry, velocity=beam.velocity)

    variants = {
        "geometric": (geometry, spec.with_changes(c3=0.0)),
        "surface": (geometry, spec),
        "surface_alpha0": (geometry.with_changes(wedge_angle=0.0), spec),
    }
    patterns = {
        label: atomic_pattern_with_surface(geom, beam, s, k2_grid, max_workers=workers, verbose=verbose)
        for label, (geom, s) in variants.items()
    }

    data = {"K2": k2_grid, "angle_mrad": 1e3 * beam.diffraction_angle(k2_grid)}
    order_data = {"n": [o.n for o in patterns["geometric"].orders]}
    for label, result in patterns.items():
        data[f"I_{label}"] = result.intensity
        order_data[f"I_{label}"] = [o.intensity for o in result.orders]
        if len(result.orders) > 1:
            order_data[f"I_{label}/I_1"] = [ratio for _, ratio in relative_peak_heights(result)]

    extra = {"surface": {"c3": spec.c3, "cutoff_distance": spec.cutoff_distance, "atom_mass": beam.total_mass}}
    directory = run_config.get("output.directory")
    _write(ResultTable(pd.DataFrame(data), _metadata("surface", run_config, **extra)), directory, "surface.csv")
    _write(
        ResultTable(pd.DataFrame(order_data), _metadata("surface", run_config, **extra)), directory, "surface_orders.csv"
    )

    table = PrettyTable(list(order_data.keys()))
    for row in pd.DataFrame(order_data).itertuples(index=False):
        table.add_row([f"{v:.6g}" if isinstance(v, float) else v for v in row])
    _print_msg(str(table))

    if c3_sweep is not None:
        from molgrating.errors import ConfigError

        try:
            values = [float(v) for v in c3_sweep.split(",") if v.strip()]
        except ValueError as e:
            raise ConfigError(f"--c3-sweep must be a comma-separated list of numbers: {e}") from e
        sweep = run_c3_sweep(spec.for_beam(beam), values, verbose=verbose)
        sweep_data = pd.DataFrame(sweep, columns=["C3", "I_2/I_1"])
        _write(ResultTable(sweep_data, _metadata("surface", run_config, **extra)), directory, "surface_c3_sweep.csv")
        _print_msg(sweep_data.to_string(index=False))


@cli.command(name="verify-ags", aliases=["ags"])
@click.option("--seeds", type=int, default=None, help="Number of random models to check (default 100).")
@click.option("--seed", type=int, default=0, help="First seed of the random models.")
@click.option("--dim", type=int, default=None, help="Matrix dimension (default: cycle through 4..16).")
@click.option("--tol", type=float, default=None, help="Residual tolerance (default 1e-10).")
@click.option("--out", type=str, default=None, help="Directory for verify_ags.csv; nothing is written if omitted.")
@click.option("--verbose", is_flag=True, default=False, help="Print every model's residuals.")
@_exit_codes
def verify_ags(seeds, seed, dim, tol, out, verbose) -> None:
    """
    Check the transition-operator identities on random finite models. Exits with status 4 if any residual
    exceeds its tolerance.

    Parameters
    ----------
    seeds: int
        Number of random models.
    seed: int
        First seed; models use seed, seed + 1, ...
    dim: int
        Matrix dimension; 1 adds the closed-form scalar T-matrix check.
    tol: float
        Tolerance before conditioning adjustment.
    """
    from molgrating.ags import DEFAULT_IDENTITY_TOLERANCE, verify_many
    from molgrating.constants import DEFAULT_AGS_SEED_COUNT, ExitCode
    from molgrating.results import ResultTable, library_versions

    seeds = seeds if seeds is not None else DEFAULT_AGS_SEED_COUNT
    tol = tol if tol is not None else DEFAULT_IDENTITY_TOLERANCE

    results = verify_many(list(range(seed, seed + seeds)), dim=dim, tol=tol)

    rows, failures = [], 0
    for model_seed, model_dim, report in results:
        failures += len(report.failures)
        row = {"seed": model_seed, "dim": model_dim, "condition_product": report.condition_product}
        row.update(report.residuals)
        row["tolerance"] = report.tolerance
        row["passed"] = report.all_passed
        rows.append(row)
        if verbose or not report.all_passed:
            status = "ok" if report.all_passed else f"FAILED {report.failures}"
            _print_msg(f"seed={model_seed} dim={model_dim} max residual={max(report.residuals.values()):.3e} {status}")

    data = pd.DataFrame(rows)
    labels = [c for c in data.columns if c not in ("seed", "dim", "condition_product", "tolerance", "passed")]
    table = PrettyTable(["Identity", "Max residual", "Failures"])
    for label in labels:
        table.add_row([label, f"{data[label].max():.3e}", int((data[label] >= data["tolerance"]).sum())])
    _print_msg(str(table))
    _print_msg(f"models checked: {len(rows)}, failed identities: {failures}")

    if out is not None:
        metadata = {"command": "verify-ags", "versions": library_versions(), "seed": seed, "seeds": seeds, "tol": tol}
        metadata["dim"] = dim
        _write(ResultTable(data, metadata), out, "verify_ags.csv")

    if failures > 0:
        sys.exit(int(ExitCode.ACCEPTANCE_FAILURE))


@cli.command(name="model-info", aliases=["info"])
@click.option("--config", type=str, default=None, help="Config file or packaged config name.")
@_exit_codes
def model_info(config) -> None:
    """
    Print the configured dimer model: decay constant, binding energy, size measures and sample form factors.
    """
    from molgrating.units import binding_from_kappa

    run_config = _load_config(config, "he2_grating", {})
    model = run_config.dimer_model()
    sizes = model.size_measures()

    table = PrettyTable(["Quantity", "Value"])
    params = model.get_model_params()
    table.add_row(["model", model.label])
    if "kappa" in params:
        table.add_row(["kappa [nm^-1]", f"{params['kappa']:.6g}"])
        implied = binding_from_kappa(params["kappa"], run_config.get("dimer.constituent_mass"))
        table.add_row(["binding energy implied by kappa [ueV]", f"{implied:.6g}"])
    if model.binding_energy is not None:
        table.add_row(["binding energy (metadata) [ueV]", f"{model.binding_energy:.6g}"])
    table.add_row(["<r> [nm]", f"{sizes.mean_r:.6g}"])
    table.add_row(["<|x2|> [nm]", f"{sizes.mean_abs_x2:.6g}"])
    table.add_row(["diameter estimate 2<r> [nm]", f"{sizes.diameter_estimate:.6g}"])
    for q in (0.05, 0.1, 0.5, 1.0):
        table.add_row([f"F(q={q} nm^-1)", f"{model.form_factor(q):.6g}"])
    _print_msg(str(table))


def main():
    """
    Entrypoint for the molgrating CLI tool implemented using Click.
    """
    cli.add_command(help)
    cli.add_command(bar)
    cli.add_command(pattern)
    cli.add_command(fit_width)
    cli.add_command(surface)
    cli.add_command(verify_ags)
    cli.add_command(model_info)
    cli()
