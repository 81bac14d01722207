"""Linear stability analysis of fractional-step Runge-Kutta schemes.

The stability function of a scheme on the split linear test equation
dy/dt = sum_l lambda_l y factors into the product over (stage, operator)
of the sub-integrator stability functions with arguments scaled by the
splitting fractions:

    R(z_1, ..., z_N) = prod_k prod_l R_{k,l}(alpha[k][l] * z_l).

Region scans, real-axis intercepts, and hole detection all operate on a
single-variable restriction R(w_1 x, ..., w_N x) where the weights model
the per-operator eigenvalue proportions.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import numpy as np
from scipy import ndimage

from .errors import DegenerateRayError, DimensionError
from .gark import FSRKScheme
from .rational import Number
from .tableau import ButcherTableau, ScalarStabilityFunction, cached_stability_function

_EIG_TOL = 1e-12


@dataclass(frozen=True)
class StabilityFactor:
    """One sub-integration's contribution: R_{k,l}(alpha * z_l)."""

    stage: int
    operator: int
    scale: Number
    rfun: ScalarStabilityFunction
    tableau: ButcherTableau

    def __call__(self, z_l):
        return self.rfun(float(self.scale) * np.asarray(z_l, dtype=complex))


@dataclass(frozen=True)
class ProductStabilityFunction:
    """Product-form stability function; factors in application order (k outer, l inner)."""

    factors: tuple[StabilityFactor, ...]
    operators: int
    scheme_name: str = ""

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.operators:
            raise DimensionError(
                f"need {self.operators} spectral arguments, got shape {z.shape}"
            )
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.ones(z.shape[:-1], dtype=complex)
            for f in self.factors:
                out = out * f(z[..., f.operator])
        if out.shape == ():
            return complex(out)
        return out

    def on_ray(self, ray: "RayRestriction"):
        """Single-variable callable x -> R(w_1 x, ..., w_N x), vectorized."""
        weights = np.asarray(ray.weights, dtype=float)
        if len(weights) != self.operators:
            raise DimensionError("ray weight count must match operator count")

        def restricted(x):
            x = np.asarray(x, dtype=complex)
            z = np.multiply.outer(x, weights)
            return self(z)

        return restricted

    def pole_inventory(self) -> "list[Pole]":
        """Factor singularities in each operator's own z-plane."""
        return poles(self)


@dataclass(frozen=True)
class RayRestriction:
    """Eigenvalue-proportion weights pinning a 1-D slice of the z-space."""

    weights: tuple[float, ...]

    def __post_init__(self):
        if not any(w != 0 for w in self.weights):
            raise DimensionError("ray needs at least one nonzero weight")


def product_stability(s: FSRKScheme) -> ProductStabilityFunction:
    factors = []
    for k in range(s.stages):
        for ell in range(s.operators):
            t = s.integrators[k][ell]
            factors.append(StabilityFactor(
                stage=k, operator=ell,
                scale=s.splitting.alpha[k][ell],
                rfun=cached_stability_function(t),
                tableau=t,
            ))
    return ProductStabilityFunction(
        factors=tuple(factors), operators=s.operators, scheme_name=s.name,
    )


# -- poles ------------------------------------------------------------------

@dataclass(frozen=True)
class Pole:
    """Singularity of one factor in its operator's z-plane."""

    location: complex
    operator: int
    stage: int
    multiplicity: int = 1


def poles(f: ProductStabilityFunction) -> list[Pole]:
    """All factor singularities: z = 1/(alpha * mu) over nonzero eigenvalues mu of A.

    Eigenvalue multiplicities within a factor are merged; the list is
    sorted by real part. Explicit factors and skipped (alpha == 0)
    sub-integrations contribute nothing.
    """
    found: list[Pole] = []
    for fac in f.factors:
        alpha = float(fac.scale)
        if alpha == 0 or fac.tableau.is_explicit:
            continue
        eigs = np.linalg.eigvals(fac.tableau.a_array())
        scale = max(1.0, float(np.abs(eigs).max()))
        locations: list[tuple[complex, int]] = []
        for mu in eigs:
            if abs(mu) <= _EIG_TOL * scale:
                continue
            z = 1.0 / (alpha * complex(mu))
            for idx, (loc, mult) in enumerate(locations):
                if abs(z - loc) <= 1e-9 * max(1.0, abs(loc)):
                    locations[idx] = (loc, mult + 1)
                    break
            else:
                locations.append((z, 1))
        for loc, mult in locations:
            found.append(Pole(location=loc, operator=fac.operator,
                              stage=fac.stage, multiplicity=mult))
    return sorted(found, key=lambda p: (p.location.real, p.location.imag))


def poles_on_ray(f: ProductStabilityFunction, ray: RayRestriction) -> list[complex]:
    """Pole positions in the ray variable: location / w_l, weight permitting."""
    out = []
    for p in poles(f):
        w = ray.weights[p.operator]
        if w != 0:
            out.append(p.location / w)
    return sorted(set(out), key=lambda z: (z.real, z.imag))


# -- region scans ------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int = 801
    n_im: int = 801

    def __post_init__(self):
        if self.n_re < 2 or self.n_im < 2:
            raise DimensionError("grid resolution must be at least 2x2")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise DimensionError("grid ranges must be increasing")

    @property
    def re(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.n_re)

    @property
    def im(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.n_im)

    def contains(self, z: complex) -> bool:
        return (self.re_min <= z.real <= self.re_max
                and self.im_min <= z.imag <= self.im_max)


@dataclass
class RegionScan:
    """|R| sampled on a grid along a ray, with the stable set labelled.

    ``abs_r[i, j]`` corresponds to z = re[j] + 1i*im[i]. Component label
    0 marks unstable points; stable 4-connected components are numbered
    from 1.
    """

    grid: GridSpec
    ray: RayRestriction
    abs_r: np.ndarray
    stable: np.ndarray
    components: np.ndarray
    n_components: int
    poles_in_grid: list[complex] = field(default_factory=list)
    scheme_name: str = ""
    intercept: float | None = None


def _eval_rows(args):
    f, ray, re, im_chunk = args
    x = re[None, :] + 1j * im_chunk[:, None]
    restricted = f.on_ray(ray)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = np.abs(restricted(x))
    return np.nan_to_num(vals, nan=np.inf, posinf=np.inf)


def scan_region(
    f: ProductStabilityFunction,
    ray: RayRestriction,
    grid: GridSpec,
    workers: int | None = None,
) -> RegionScan:
    """Sample |R| on the grid; label the stable set with 4-connected components.

    Stability is the strict condition |R| < 1. Workers > 1 split the grid
    by row chunks across processes; the result is identical either way.
    """
    if workers is None:
        workers = int(os.environ.get("FSRK_WORKERS", "1"))
    re, im = grid.re, grid.im
    if workers > 1:
        chunks = np.array_split(im, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_eval_rows, [(f, ray, re, ch) for ch in chunks]))
        abs_r = np.vstack(parts)
    else:
        abs_r = _eval_rows((f, ray, re, im))
    stable = abs_r < 1.0
    four_conn = ndimage.generate_binary_structure(2, 1)
    components, n_components = ndimage.label(stable, structure=four_conn)
    in_grid = [p for p in poles_on_ray(f, ray) if grid.contains(p)]
    return RegionScan(
        grid=grid, ray=ray, abs_r=abs_r, stable=stable,
        components=components, n_components=int(n_components),
        poles_in_grid=in_grid, scheme_name=f.scheme_name,
    )


def default_grid(
    f: ProductStabilityFunction,
    ray: RayRestriction,
    resolution: int = 801,
    fallback_extent: float = 10.0,
) -> GridSpec:
    """Auto-sized grid: 1.5x the most negative on-ray pole or intercept estimate."""
    candidates = [p.real for p in poles_on_ray(f, ray) if p.real < 0]
    if not candidates:
        try:
            intercept = real_axis_intercept(f, ray)
            if math.isfinite(intercept):
                candidates.append(intercept)
        except DegenerateRayError:
            pass
    x_max = 1.5 * abs(min(candidates)) if candidates else fallback_extent
    return GridSpec(
        re_min=-x_max, re_max=1.0, im_min=-x_max, im_max=x_max,
        n_re=resolution, n_im=resolution,
    )


# -- real-axis intercept ------------------------------------------------------

def real_axis_intercept(
    f: ProductStabilityFunction,
    ray: RayRestriction,
    x_limit: float = 1e7,
    rel_tol: float = 1e-6,
    samples_per_octave: int = 512,
    puncture_cells: int = 4,
) -> float:
    """Most negative x* with |R| < 1 on (x*, 0), pole punctures excluded.

    Scans the negative real axis leftward in octaves, brackets the first
    genuine |R| = 1 crossing, and bisects it to ``rel_tol`` relative
    accuracy. Unstable runs narrower than ``puncture_cells`` sample
    spacings that straddle an on-ray pole are skipped. Returns ``-inf``
    when no crossing exists out to ``x_limit`` (stable along the whole
    sampled axis). Raises DegenerateRayError when no stable neighbourhood
    of 0 exists.
    """
    restricted = f.on_ray(ray)

    def magnitude(x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            vals = np.abs(restricted(np.asarray(x, dtype=complex)))
        return np.nan_to_num(vals, nan=np.inf, posinf=np.inf)

    ray_poles = [p.real for p in poles_on_ray(f, ray)
                 if p.real < 0 and abs(p.imag) < 1e-9 * max(1.0, abs(p.real))]

    # verify a stable neighbourhood of zero before the octave walk
    probe = -np.logspace(-12, -6, 13)
    if not (magnitude(probe) < 1.0).any():
        raise DegenerateRayError(
            f"{f.scheme_name or 'scheme'}: |R| >= 1 everywhere in (-1e-6, 0) "
            f"along ray {ray.weights}"
        )

    def refine(lo, hi):
        # |R(hi)| < 1 <= |R(lo)|, lo < hi < 0
        while (hi - lo) > rel_tol * max(1.0, abs(lo)):
            mid = 0.5 * (lo + hi)
            if magnitude(mid) < 1.0:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    prev_x = 0.0
    lo = -2.0 ** -16
    while abs(lo) <= x_limit:
        xs = np.linspace(prev_x if prev_x < 0 else lo / samples_per_octave,
                         lo, samples_per_octave)
        vals = magnitude(xs)
        bad = np.where(vals >= 1.0)[0]
        skip_until = None
        for idx in bad:
            if skip_until is not None and xs[idx] >= skip_until:
                continue
            spacing = abs(xs[1] - xs[0])
            run_end = idx
            while run_end + 1 < len(xs) and vals[run_end + 1] >= 1.0:
                run_end += 1
            width = (run_end - idx + 1) * spacing
            straddles_pole = any(
                xs[run_end] - spacing <= p <= xs[idx] + spacing for p in ray_poles
            )
            if (run_end + 1 < len(xs) and straddles_pole
                    and width <= puncture_cells * spacing):
                skip_until = xs[run_end] - spacing
                continue
            left = xs[idx]
            right = xs[idx - 1] if idx > 0 else prev_x
            if right >= 0:
                raise DegenerateRayError(
                    f"{f.scheme_name or 'scheme'}: |R| >= 1 at the first sample "
                    f"below 0 along ray {ray.weights}"
                )
            return refine(left, right)
        prev_x = lo
        lo *= 2.0
    return float("-inf")


# -- holes ---------------------------------------------------------------------

@dataclass(frozen=True)
class Hole:
    """A bounded unstable island enclosed by the main stable region."""

    bounding_box: tuple[float, float, float, float]
    nearest_pole: complex | None
    max_abs_r: float
    cell_count: int

    def contains(self, z: complex) -> bool:
        re_min, re_max, im_min, im_max = self.bounding_box
        return re_min <= z.real <= re_max and im_min <= z.imag <= im_max


def detect_holes(scan: RegionScan) -> list[Hole]:
    """Unstable components fully enclosed by the stable component nearest the origin.

    Components touching the grid boundary are open sea, not holes.
    """
    if not scan.stable.any():
        return []
    re, im = scan.grid.re, scan.grid.im
    rr, cc = np.nonzero(scan.stable)
    dist = re[cc] ** 2 + im[rr] ** 2
    seed = np.argmin(dist)
    main_label = scan.components[rr[seed], cc[seed]]
    main = scan.components == main_label

    four_conn = ndimage.generate_binary_structure(2, 1)
    unstable_labels, n_unstable = ndimage.label(~scan.stable, structure=four_conn)

    holes = []
    for label in range(1, n_unstable + 1):
        comp = unstable_labels == label
        rows, cols = np.nonzero(comp)
        if (rows.min() == 0 or cols.min() == 0
                or rows.max() == comp.shape[0] - 1
                or cols.max() == comp.shape[1] - 1):
            continue
        ring = ndimage.binary_dilation(comp, structure=four_conn) & ~comp
        if not ring.any() or not main[ring].all():
            continue
        box = (float(re[cols.min()]), float(re[cols.max()]),
               float(im[rows.min()]), float(im[rows.max()]))
        centre = complex((box[0] + box[1]) / 2, (box[2] + box[3]) / 2)
        nearest = min(scan.poles_in_grid, key=lambda p: abs(p - centre), default=None)
        finite = scan.abs_r[comp]
        finite = finite[np.isfinite(finite)]
        holes.append(Hole(
            bounding_box=box,
            nearest_pole=nearest,
            max_abs_r=float(finite.max()) if finite.size else float("inf"),
            cell_count=int(comp.sum()),
        ))
    return holes


# -- CSV contract -----------------------------------------------------------------

REGION_CSV_HEADER = ("re", "im", "absR", "stable", "component")


def region_to_csv(scan: RegionScan, path) -> None:
    """One line per grid point: re, im, absR, stable, component."""
    re, im = scan.grid.re, scan.grid.im
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(REGION_CSV_HEADER)
        for i in range(scan.grid.n_im):
            for j in range(scan.grid.n_re):
                val = scan.abs_r[i, j]
                writer.writerow([
                    repr(float(re[j])), repr(float(im[i])),
                    "inf" if not np.isfinite(val) else repr(float(val)),
                    int(scan.stable[i, j]), int(scan.components[i, j]),
                ])


def region_metadata(scan: RegionScan) -> dict:
    """Sidecar document for a region CSV: scheme, ray, grid, poles, intercept."""
    return {
        "scheme": scan.scheme_name,
        "ray_weights": list(scan.ray.weights),
        "grid": {
            "re_min": scan.grid.re_min, "re_max": scan.grid.re_max,
            "im_min": scan.grid.im_min, "im_max": scan.grid.im_max,
            "n_re": scan.grid.n_re, "n_im": scan.grid.n_im,
        },
        "poles": [[p.real, p.imag] for p in scan.poles_in_grid],
        "intercept": scan.intercept,
        "components": scan.n_components,
    }
