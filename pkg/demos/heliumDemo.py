#!/usr/bin/env python3
import argparse
import time

import numpy as np
from prettytable import PrettyTable

import molgrating as mg
from molgrating.constants import HE2_MASS
from molgrating.grating import order_intensity_ratios, order_table


def compare_orders(geometry, beam, model, n_max, verbose=False):
    """Order-by-order intensities of He2 next to those of a point particle of the same mass"""
    point = order_table(geometry, beam, None, n_max, normalized=True)
    dimer = order_table(geometry, beam, model, n_max, normalized=True)

    table = PrettyTable(["n", "K2_n [nm^-1]", "I_point", "I_dimer", "I_dimer/I_point"])
    for p, d in zip(point, dimer):
        ratio = d.intensity / p.intensity if p.intensity > 1e-12 * point[0].intensity else float("nan")
        table.add_row([p.n, f"{p.k2:.4f}", f"{p.intensity:.4g}", f"{d.intensity:.4g}", f"{ratio:.4g}"])
    print(table)

    if verbose:
        k2_grid = np.array([geometry.order_wavenumber(n) for n in range(n_max + 1)])
        point_pattern = mg.pattern(geometry, beam, None, k2_grid, normalized=True)
        dimer_pattern = mg.pattern(geometry, beam, model, k2_grid, normalized=True)
        for n, ratio in order_intensity_ratios(dimer_pattern, point_pattern):
            print(f"  order {n}: dimer keeps {ratio:.3f} of the point intensity")


def effective_width(geometry, beam, model, k2_max, verbose=False):
    """A point particle diffracted by bars widened by delta mimics the dimer at small K2"""
    fit = mg.fit_effective_width(model, geometry.bar, beam, k2_max, verbose=verbose)
    sizes = model.size_measures()
    print(f"delta = {fit.delta:.3f} nm  (<|x2|> = {sizes.mean_abs_x2:.3f} nm, relative residual {fit.relative_residual:.2e})")

    widened = mg.effective_grating(geometry, fit.delta)
    ratios = mg.relative_peak_heights(mg.pattern(widened, beam, None, np.array([0.0, 0.3]), normalized=True))
    print("effective grating: " + ", ".join(f"I_{n}/I_1={r:.4g}" for n, r in ratios))


def surface_sweep(geometry, velocity, c3_values, verbose=False):
    """Second-order intensity of single He atoms as the van der Waals coefficient is switched on"""
    atom = mg.BeamState(total_mass=mg.CONSTANTS.helium4_mass, velocity=velocity)
    spec = mg.SurfaceSpec(c3=0.0, geometry=geometry).for_beam(atom)
    for c3, ratio in mg.c3_sweep(spec, c3_values, verbose=verbose):
        print(f"C3 = {c3:.3f} meV nm^3: I_2/I_1 = {ratio:.4e}")


def check_identities(seeds, verbose=False):
    """Transition-operator identities on random finite models"""
    failures = 0
    for seed in range(seeds):
        model = mg.random_model(seed)
        report = mg.verify_identities(model)
        failures += len(report.failures)
        if verbose or not report.all_passed:
            print(f"seed {seed} (dim {model.dim}): max residual {max(report.residuals.values()):.2e}")
    print(f"{seeds} models, {failures} failed identities")


if __name__ == "__main__":
    # parse arguments
    start_time = time.time()
    parser = argparse.ArgumentParser(description="Diffraction of He atoms and He2 dimers by a transmission grating")
    parser.add_argument("--verbose", default=False, action="store_true", help="Print verbose output")
    parser.add_argument("--task", type=str, help="The task to run. One of orders, width, surface, identities")
    parser.add_argument("--period", type=float, default=50.0, help="Grating period (nm)")
    parser.add_argument("--slit-width", type=float, default=25.0, help="Slit width (nm)")
    parser.add_argument("--bars", type=int, default=100, help="Number of illuminated bars")
    parser.add_argument("--velocity", type=float, default=1000.0, help="Beam velocity (m/s)")
    parser.add_argument("--x2", type=float, default=2.8, help="Target <|x2|> of the dimer (nm)")
    parser.add_argument("--seeds", type=int, default=20, help="Number of random models for the identities task")

    args = parser.parse_args()

    if args.task is None:
        print("Please provide a task")
        exit(1)

    geometry = mg.GratingGeometry(period=args.period, slit_width=args.slit_width, bar_count=args.bars)
    beam = mg.BeamState(total_mass=HE2_MASS, velocity=args.velocity)
    model = mg.calibrate_to_x2(args.x2)

    if args.task == "orders":
        compare_orders(geometry, beam, model, n_max=6, verbose=args.verbose)

    elif args.task == "width":
        effective_width(geometry, beam, model, k2_max=0.15, verbose=args.verbose)

    elif args.task == "surface":
        surface_sweep(geometry, args.velocity, [0.0, 0.05, 0.1, 0.2], verbose=args.verbose)

    elif args.task == "identities":
        check_identities(args.seeds, verbose=args.verbose)

    else:
        print("Unknown task")
        exit(1)

    end_time = time.time()
    print("Elapsed time:", end_time - start_time)
