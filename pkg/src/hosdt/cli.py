"""Command-line driver: transforms, field comparison, and the sphere studies."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from . import studies
from .edt import averaged_init
from .evaluation import add_order_m_noise, analytic_sphere, binarize, error_norms, minimize_l1_shift
from .grid import BinaryGrid
from .io import read_volume, write_volume, write_study_csv
from .sweep import SolverConfig, run

__all__ = ["main", "entrypoint"]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hosdt",
        description="High-order signed distance transforms of binary volumes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="binary volume -> signed distance field")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--order", type=int, choices=(1, 5), default=5)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--band", type=float, default=math.inf)
    p.add_argument("--no-shift", action="store_true")
    p.add_argument("--report", default=None, help="write a JSON solver report here")

    p = sub.add_parser("init", help="binary volume -> averaged exact-distance field")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("sphere", help="write an analytic sphere field or mask")
    p.add_argument("--size", type=int, required=True, help="voxels per axis")
    p.add_argument("--extent", type=float, required=True, help="physical size, mm")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--center", type=float, nargs="+", default=None,
                   help="mm coordinates; default is the domain center (3-D)")
    p.add_argument("--binarize", action="store_true")
    p.add_argument("--noise-order", type=int, default=None)
    p.add_argument("--output", required=True)

    p = sub.add_parser("compare", help="banded error norms between two fields")
    p.add_argument("--a", required=True, help="computed field")
    p.add_argument("--b", required=True, help="reference field")
    p.add_argument("--band", type=float, required=True)
    p.add_argument("--minimize-shift", action="store_true")

    p = sub.add_parser("study", help="run a sphere study and write its outputs")
    p.add_argument("study", choices=("order", "convergence", "noise"))
    p.add_argument("--output-dir", default=".")
    p.add_argument("--order", type=int, choices=(1, 5), default=5)
    p.add_argument("--band", type=float, default=None, help="narrowband, mm")
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--extent", type=float, default=None)
    p.add_argument("--spacings", default=None, help="comma-separated mm values")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--iterations", type=int, default=100,
                   help="convergence study: fixed iteration count")
    return parser


def _read_binary(path) -> BinaryGrid:
    volume = read_volume(path)
    if not isinstance(volume, BinaryGrid):
        raise ValueError(f"expected a u8 binary volume at {path}")
    return volume


def _cmd_transform(args) -> int:
    image = _read_binary(args.input)
    config = SolverConfig(
        order=args.order,
        delta=args.tol,
        max_iterations=args.max_iters,
        narrowband_width=args.band,
        shift_correction=not args.no_shift,
    )
    phi, report = run(image, config)
    write_volume(args.output, phi)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(
                {
                    "error_history": report.error_history,
                    "iterations": report.iterations_run,
                    "converged": report.converged,
                    "shifts": report.shift_history,
                },
                fh,
                indent=2,
            )
            fh.write("\n")
    return 0


def _cmd_init(args) -> int:
    image = _read_binary(args.input)
    write_volume(args.output, averaged_init(image))
    return 0


def _cmd_sphere(args) -> int:
    if args.center is not None:
        center = tuple(args.center)
        dims = (args.size,) * len(center)
    else:
        dims = (args.size,) * 3
        center = (args.extent / 2.0,) * 3
    spacing = (args.extent / args.size,) * len(dims)
    field = analytic_sphere(dims, spacing, center, args.radius)
    if args.noise_order is not None:
        field = add_order_m_noise(field, args.noise_order, spacing[0])
    if args.binarize:
        write_volume(args.output, binarize(field))
    else:
        write_volume(args.output, field)
    return 0


def _cmd_compare(args) -> int:
    a = read_volume(args.a)
    b = read_volume(args.b)
    if isinstance(a, BinaryGrid) or isinstance(b, BinaryGrid):
        raise ValueError("compare expects two f64 fields")
    if args.minimize_shift:
        corrected, a_star = minimize_l1_shift(a, b, args.band)
        l1, linf = error_norms(corrected, b, args.band)
        print(f"{l1!r},{linf!r},{a_star!r}")
    else:
        l1, linf = error_norms(a, b, args.band)
        print(f"{l1!r},{linf!r}")
    return 0


def _parse_spacings(text, default):
    if text is None:
        return default
    return tuple(float(tok) for tok in text.split(",") if tok)


def _cmd_study(args) -> int:
    outdir = args.output_dir
    os.makedirs(outdir, exist_ok=True)
    if args.study == "order":
        spacings = _parse_spacings(args.spacings, (8.0, 4.0, 2.0, 1.0))
        band = 15.0 if args.band is None else args.band  # measurement band
        solves = studies.order_study(
            spacings=spacings,
            radius=25.0 if args.radius is None else args.radius,
            extent=100.0 if args.extent is None else args.extent,
            order=args.order,
            max_iterations=100 if args.max_iters is None else args.max_iters,
            delta=args.tol,
        )
        records = studies.order_study_records(solves, band)
        write_study_csv(os.path.join(outdir, "order_study.csv"), records)
    elif args.study == "convergence":
        spacings = _parse_spacings(args.spacings, (4.0, 2.0, 1.0))
        band = 15.0 if args.band is None else args.band
        histories = studies.convergence_study(
            spacings=spacings,
            radius=25.0 if args.radius is None else args.radius,
            extent=100.0 if args.extent is None else args.extent,
            band=band,
            order=args.order,
            iterations=args.iterations,
        )
        path = os.path.join(outdir, "convergence_study.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["h", "iteration", "error"])
            for h in spacings:
                for i, err in enumerate(histories[h], start=1):
                    writer.writerow([repr(float(h)), i, repr(float(err))])
    else:  # noise
        spacings = _parse_spacings(args.spacings, (0.1,))
        result = studies.noise_study(
            spacing=spacings[0],
            radius=2.5 if args.radius is None else args.radius,
            extent=10.0 if args.extent is None else args.extent,
            band=1.5 if args.band is None else args.band,
            order=args.order,
            max_iterations=20 if args.max_iters is None else args.max_iters,
            delta=args.tol,
        )
        for name, field in result["fields"].items():
            write_volume(os.path.join(outdir, f"{name}.hosdt"), field)
        with open(os.path.join(outdir, "noise_norms.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["field", "l1", "linf", "band"])
            for name, (l1, linf) in result["norms"].items():
                writer.writerow([name, repr(l1), repr(linf), repr(result["band"])])
    return 0


_COMMANDS = {
    "transform": _cmd_transform,
    "init": _cmd_init,
    "sphere": _cmd_sphere,
    "compare": _cmd_compare,
    "study": _cmd_study,
}


def main(argv=None) -> int:
    """Parse arguments and dispatch; returns the process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
