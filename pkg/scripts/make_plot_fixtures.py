#!/usr/bin/env python3
"""Regenerate the CSV fixtures consumed by the frontend plotting package.

Produces, via the fsrk CLI:
  * three region scans of the Strang(Heun, SDIRK22) scheme under the
    50-50 / 10-90 / 90-10 eigenvalue splits (overlaid, they give the
    nested stability curves);
  * the Ruth(RK3, SDIRK23) scan whose stability region has a hole near
    z = -1.9;
  * two Brusselator end-state trajectories at dt = 0.2, diffusion
    integrated once with the A-stable SDIRK (gamma = 1/2) and once with
    the L-stable one (gamma = 1 + 1/sqrt(2)).

Run from the repository root: python3 scripts/make_plot_fixtures.py
"""

import pathlib
import sys

from fsrk.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
OUT = ROOT / "frontend" / "fixtures"

REGION_JOBS = [
    ("strang_heun_sdirk22.json", "10,10", "region_50_50.csv"),
    ("strang_heun_sdirk22.json", "2,18", "region_10_90.csv"),
    ("strang_heun_sdirk22.json", "18,2", "region_90_10.csv"),
]
REGION_GRID = "-2.1:0.1:201,-1.1:1.1:201"
HOLE_GRID = "-4:0.5:201,-2.5:2.5:201"

SNAPSHOT_JOBS = [
    ("strang_sdirkA_heun.json", "snapshot_a_stable.csv"),
    ("strang_sdirkL_heun.json", "snapshot_l_stable.csv"),
]


def run(argv):
    print("fsrk " + " ".join(argv))
    code = main(argv)
    if code != 0:
        sys.exit(code)


def build():
    OUT.mkdir(parents=True, exist_ok=True)
    for spec, ray, name in REGION_JOBS:
        run(["stability", str(SPECS / spec), "--ray", ray,
             f"--grid={REGION_GRID}", "--out", str(OUT / name)])
    run(["stability", str(SPECS / "ruth_rk3_sdirk23.json"), "--ray", "1,1",
         f"--grid={HOLE_GRID}", "--out", str(OUT / "region_hole.csv")])
    for spec, name in SNAPSHOT_JOBS:
        run(["integrate", str(SPECS / spec), "--problem", "brusselator",
             "--problem-params", "nx=101", "--dt", "0.2", "--T", "80",
             "--stride", "100", "--out", str(OUT / name)])


if __name__ == "__main__":
    build()
