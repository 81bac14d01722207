"""Command-line front end.

Subcommands: ``tableau`` (extended/compact dumps), ``stability`` (region
scan to CSV plus intercept/pole/hole report), ``integrate`` (trajectory to
CSV), ``converge`` (observed-order study). Exit codes: 0 success, 2
usage or spec errors, 3 numerical failures (divergence, Newton). Output
is deterministic: identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import problems as problems_mod
from . import __version__
from .errors import (DegenerateRayError, DimensionError, FsrkError,
                     PoleProximityError, SpecFileError, StageSolveError)
from .gark import build_compact, build_extended, compact_text
from .integrator import convergence_order, integrate
from .serialize import dump_json, extended_to_dict, load_scheme
from .stability import (GridSpec, RayRestriction, default_grid, detect_holes,
                        poles, product_stability, real_axis_intercept,
                        region_metadata, region_to_csv, scan_region)

USAGE_ERROR = 2
NUMERICAL_ERROR = 3


def _parse_ray(text: str) -> RayRestriction:
    try:
        weights = tuple(float(w) for w in text.split(","))
    except ValueError:
        raise SpecFileError(f"cannot parse ray weights {text!r}") from None
    return RayRestriction(weights=weights)


def _parse_grid(text: str) -> GridSpec:
    # re_min:re_max:n_re[,im_min:im_max:n_im]
    try:
        parts = text.split(",")
        re_part = parts[0].split(":")
        re_min, re_max, n_re = float(re_part[0]), float(re_part[1]), int(re_part[2])
        if len(parts) > 1:
            im_part = parts[1].split(":")
            im_min, im_max, n_im = (float(im_part[0]), float(im_part[1]),
                                    int(im_part[2]))
        else:
            extent = max(abs(re_min), abs(re_max))
            im_min, im_max, n_im = -extent, extent, n_re
    except (IndexError, ValueError):
        raise SpecFileError(
            f"cannot parse grid {text!r}; expected re_min:re_max:n[,im_min:im_max:n]"
        ) from None
    return GridSpec(re_min=re_min, re_max=re_max, im_min=im_min, im_max=im_max,
                    n_re=n_re, n_im=n_im)


def _parse_params(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise SpecFileError(f"problem parameter {item!r} must be key=value")
        key, value = item.split("=", 1)
        try:
            out[key] = int(value)
        except ValueError:
            try:
                out[key] = float(value)
            except ValueError:
                out[key] = value
    return out


def _build_problem(name: str, params: dict, t_end: float | None):
    if name and name.startswith("@"):
        # declarative parameter file: {"problem": ..., <parameters>}
        with open(name[1:]) as handle:
            doc = json.load(handle)
        name = doc.pop("problem", None)
        doc.update(params)
        params = doc
    if name == "brusselator":
        mol = problems_mod.BrusselatorMOL(**params)
        return mol.problem(t_end=t_end if t_end is not None else 80.0)
    if name == "linear":
        total = params.pop("total", -20.0)
        fractions = params.pop("fractions", "0.5:0.5")
        if isinstance(fractions, str):
            fractions = [float(f) for f in fractions.split(":")]
        if params:
            raise SpecFileError(f"unknown linear-problem parameters {sorted(params)}")
        lin = problems_mod.linear_split(total, fractions)
        return lin.problem(t_span=(0.0, t_end if t_end is not None else 1.0))
    raise SpecFileError(f"unknown problem {name!r}; available: brusselator, "
                        "linear, @<parameter-file.json>")


def cmd_tableau(args) -> int:
    fsrk_scheme = load_scheme(args.spec)
    if args.format in ("compact", "text"):
        out = compact_text(build_compact(fsrk_scheme))
    elif args.format == "extended":
        doc = extended_to_dict(build_extended(fsrk_scheme))
        out = dump_json(doc)
    else:  # json: extended document plus the compact weight row
        ext = build_extended(fsrk_scheme)
        compact = build_compact(fsrk_scheme)
        doc = extended_to_dict(ext)
        doc["compact_weights"] = list(map(str, compact.weights))
        out = dump_json(doc)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(out if out.endswith("\n") else out + "\n")
    else:
        print(out, end="" if out.endswith("\n") else "\n")
    return 0


def cmd_stability(args) -> int:
    fsrk_scheme = load_scheme(args.spec)
    ray = _parse_ray(args.ray)
    rfun = product_stability(fsrk_scheme)
    workers = int(os.environ.get("FSRK_WORKERS", "1"))
    grid = _parse_grid(args.grid) if args.grid else default_grid(rfun, ray)
    scan = scan_region(rfun, ray, grid, workers=workers)
    try:
        scan.intercept = real_axis_intercept(rfun, ray)
    except DegenerateRayError:
        scan.intercept = None
    holes = detect_holes(scan)
    if args.out:
        region_to_csv(scan, args.out)
        meta = region_metadata(scan)
        meta["holes"] = [
            {"bounding_box": list(h.bounding_box), "cells": h.cell_count}
            for h in holes
        ]
        dump_json(meta, args.out + ".meta.json")
    pole_list = poles(rfun)
    if scan.intercept is None:
        print("intercept: none (no stable neighbourhood of 0)")
    elif math.isinf(scan.intercept):
        print("intercept: -inf (stable along the sampled ray)")
    else:
        print(f"intercept: {scan.intercept:.6g}")
    print(f"poles: {len(pole_list)}")
    for p in pole_list:
        print(f"  z = {p.location.real:.6g}{p.location.imag:+.6g}j  "
              f"(operator {p.operator + 1}, stage {p.stage + 1}, "
              f"multiplicity {p.multiplicity})")
    print(f"holes: {len(holes)}")
    for h in holes:
        box = ", ".join(f"{v:.4g}" for v in h.bounding_box)
        print(f"  hole bbox [{box}], cells {h.cell_count}")
    return 0


def cmd_integrate(args) -> int:
    fsrk_scheme = load_scheme(args.spec)
    problem = _build_problem(args.problem, _parse_params(args.problem_params),
                             args.T)
    result = integrate(fsrk_scheme, problem, args.dt,
                       snapshot_stride=args.stride)
    if args.out:
        result.to_csv(args.out)
        dump_json(result.metadata(), args.out + ".meta.json")
    print(f"steps: {result.step_count}")
    print(f"t_final: {result.t_final:.10g}")
    print(f"newton_iterations: {result.newton_iterations}")
    print(f"diverged: {result.diverged}")
    if result.diverged:
        print(f"blow_up_time: {result.blow_up_time:.10g}")
        return NUMERICAL_ERROR
    return 0


def cmd_converge(args) -> int:
    fsrk_scheme = load_scheme(args.spec)
    dts = [float(v) for v in args.dts.split(",")]
    if len(dts) < 3:
        raise SpecFileError("need at least 3 step sizes (comma-separated)")
    problem = _build_problem(args.problem, _parse_params(args.problem_params),
                             args.T)
    if args.problem == "linear":
        params = _parse_params(args.problem_params)
        lin = problems_mod.linear_split(
            params.get("total", -20.0),
            [float(f) for f in str(params.get("fractions", "0.5:0.5")).split(":")],
        )
        reference = lin.exact
    else:
        fine = integrate(fsrk_scheme, problem, min(dts) / 64.0,
                         snapshot_stride=10 ** 9)
        reference = fine.final_state
    study = convergence_order(fsrk_scheme, problem, reference, dts)
    for dt, err in zip(study.dts, study.errors):
        print(f"dt={dt:.6g}  error={err:.6e}")
    print(f"observed_order: {study.order:.3f}")
    if study.at_precision_floor:
        print("warning: smallest errors sit at the precision floor")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsrk",
        description="Fractional-step Runge-Kutta tableaux, stability, integration",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_tab = sub.add_parser("tableau", help="dump the extended/compact tableau")
    p_tab.add_argument("spec", help="scheme spec file (JSON)")
    p_tab.add_argument("--format", choices=("extended", "compact", "text", "json"),
                       default="compact")
    p_tab.add_argument("--out")
    p_tab.set_defaults(func=cmd_tableau)

    p_stab = sub.add_parser("stability", help="scan a stability region along a ray")
    p_stab.add_argument("spec")
    p_stab.add_argument("--ray", required=True,
                        help="comma-separated eigenvalue weights w1,...,wN")
    p_stab.add_argument("--grid", help="re_min:re_max:n[,im_min:im_max:n]")
    p_stab.add_argument("--out", help="region CSV path (+ .meta.json sidecar)")
    p_stab.set_defaults(func=cmd_stability)

    p_int = sub.add_parser("integrate", help="run a time integration")
    p_int.add_argument("spec")
    p_int.add_argument("--problem", required=True,
                       help="brusselator, linear, or @parameter-file.json")
    p_int.add_argument("--problem-params", help="key=value,... problem parameters")
    p_int.add_argument("--dt", type=float, required=True)
    p_int.add_argument("--T", type=float, help="final time (default: problem span)")
    p_int.add_argument("--stride", type=int, default=1,
                       help="snapshot every N steps")
    p_int.add_argument("--out", help="trajectory CSV path (+ .meta.json sidecar)")
    p_int.set_defaults(func=cmd_integrate)

    p_conv = sub.add_parser("converge", help="observed-order study")
    p_conv.add_argument("spec")
    p_conv.add_argument("--problem", required=True)
    p_conv.add_argument("--problem-params")
    p_conv.add_argument("--dts", required=True, help="comma-separated step sizes")
    p_conv.add_argument("--T", type=float)
    p_conv.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return USAGE_ERROR if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (SpecFileError, DimensionError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (StageSolveError, PoleProximityError, DegenerateRayError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except FsrkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
