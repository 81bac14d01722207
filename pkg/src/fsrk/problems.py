"""Built-in additively split test problems.

Two families: the scalar linear test equation dy/dt = sum_l lambda_l y and
the method-of-lines Brusselator reaction-diffusion system on [0, 1] with
pinned Dirichlet boundaries.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .integrator import AdditiveODEProblem


@dataclass(frozen=True)
class LinearSplitProblem:
    """dy/dt = sum_l lambda_l y with per-operator rates lambda_l."""

    lambdas: tuple[complex, ...]
    y0: complex = 1.0

    def problem(self, t_span=(0.0, 1.0)) -> AdditiveODEProblem:
        dtype = complex if any(isinstance(l, complex) and l.imag != 0
                               for l in self.lambdas) else float
        operators = tuple(
            (lambda t, y, lam=dtype(lam): lam * y) for lam in self.lambdas
        )
        jacobians = tuple(
            (lambda t, y, lam=dtype(lam): lam * np.eye(y.size))
            for lam in self.lambdas
        )
        return AdditiveODEProblem(
            operators=operators,
            jacobians=jacobians,
            y0=np.array([self.y0], dtype=dtype),
            t_span=t_span,
            name=f"linear{tuple(self.lambdas)}",
        )

    def exact(self, t: float):
        rate = sum(self.lambdas)
        return np.array([self.y0 * np.exp(rate * t)])


def linear_split(total: float, fractions: Sequence[float]) -> LinearSplitProblem:
    """Split a total rate into per-operator parts: lambda_l = total * fraction_l."""
    fracs = [float(f) for f in fractions]
    if abs(sum(fracs) - 1.0) > 1e-12:
        raise DimensionError(f"fractions must sum to 1, got {sum(fracs)}")
    return LinearSplitProblem(lambdas=tuple(total * f for f in fracs))


# -- Brusselator -------------------------------------------------------------

@dataclass(frozen=True)
class BrusselatorMOL:
    """Central-difference Brusselator on nx grid points over [0, 1].

    State layout is species-major: [T_1..T_nx, C_1..C_nx]. Dirichlet
    values T = a, C = b/a are pinned by zeroing the boundary rows of both
    operators; the initial condition already satisfies them.
    """

    nx: int = 101
    a: float = 0.6
    b: float = 2.0
    d1: float = 1.0 / 40.0
    d2: float = 1.0 / 40.0

    def __post_init__(self):
        if self.nx < 3:
            raise DimensionError("need at least 3 grid points")

    @property
    def dx(self) -> float:
        return 1.0 / (self.nx - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.nx)

    @property
    def dimension(self) -> int:
        return 2 * self.nx

    def initial_state(self) -> np.ndarray:
        x = self.x
        temp = self.a + x * (1.0 - x)
        conc = self.b / self.a + x**2 * (1.0 - x)
        return np.concatenate([temp, conc])

    def diffusion(self, t, y) -> np.ndarray:
        nx = self.nx
        out = np.zeros_like(y)
        inv_dx2 = 1.0 / self.dx**2
        for offset, d in ((0, self.d1), (nx, self.d2)):
            u = y[offset:offset + nx]
            out[offset + 1:offset + nx - 1] = (
                d * inv_dx2 * (u[:-2] - 2.0 * u[1:-1] + u[2:])
            )
        return out

    def reaction(self, t, y) -> np.ndarray:
        nx = self.nx
        temp = y[:nx]
        conc = y[nx:]
        out = np.zeros_like(y)
        tt_cc = temp[1:-1] ** 2 * conc[1:-1]
        out[1:nx - 1] = self.a - (self.b + 1.0) * temp[1:-1] + tt_cc
        out[nx + 1:2 * nx - 1] = self.b * temp[1:-1] - tt_cc
        return out

    def diffusion_matrix(self) -> np.ndarray:
        """Dense second-difference operator with zero first/last rows, per species."""
        nx = self.nx
        m = np.zeros((nx, nx))
        inv_dx2 = 1.0 / self.dx**2
        for i in range(1, nx - 1):
            m[i, i - 1] = inv_dx2
            m[i, i] = -2.0 * inv_dx2
            m[i, i + 1] = inv_dx2
        jac = np.zeros((2 * nx, 2 * nx))
        jac[:nx, :nx] = self.d1 * m
        jac[nx:, nx:] = self.d2 * m
        return jac

    def diffusion_jacobian(self, t, y) -> np.ndarray:
        return self.diffusion_matrix()

    def reaction_jacobian(self, t, y) -> np.ndarray:
        nx = self.nx
        temp = y[:nx]
        conc = y[nx:]
        jac = np.zeros((2 * nx, 2 * nx))
        idx = np.arange(1, nx - 1)
        tc = temp[idx] * conc[idx]
        tt = temp[idx] ** 2
        jac[idx, idx] = -(self.b + 1.0) + 2.0 * tc
        jac[idx, nx + idx] = tt
        jac[nx + idx, idx] = self.b - 2.0 * tc
        jac[nx + idx, nx + idx] = -tt
        return jac

    def problem(self, t_end: float = 80.0) -> AdditiveODEProblem:
        """Two-operator problem: diffusion first, reaction second."""
        return AdditiveODEProblem(
            operators=(self.diffusion, self.reaction),
            jacobians=(self.diffusion_jacobian, self.reaction_jacobian),
            y0=self.initial_state(),
            t_span=(0.0, t_end),
            name=f"brusselator(nx={self.nx})",
        )

    def split(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return y[:self.nx], y[self.nx:]


def brusselator(nx: int = 101, t_end: float = 80.0, **params) -> AdditiveODEProblem:
    return BrusselatorMOL(nx=nx, **params).problem(t_end=t_end)


def diffusion_spectrum(mol: BrusselatorMOL) -> np.ndarray:
    """Closed-form eigenvalues of the pinned diffusion operator, ascending.

    Per species with coefficient d: -(4 d / dx^2) sin^2(j pi / (2 (nx-1))),
    j = 1 .. nx-2, plus one zero per boundary row.
    """
    nx = mol.nx
    j = np.arange(1, nx - 1)
    modes = np.sin(j * np.pi / (2 * (nx - 1))) ** 2
    eigs = []
    for d in (mol.d1, mol.d2):
        eigs.append(-(4.0 * d / mol.dx**2) * modes)
        eigs.append(np.zeros(2))
    return np.sort(np.concatenate(eigs))


def reaction_spectrum(mol: BrusselatorMOL, state: np.ndarray) -> np.ndarray:
    """Eigenvalues of the per-point 2x2 reaction Jacobian at every interior point.

    The block at point i is [[-(b+1)+2 T C, T^2], [b - 2 T C, -T^2]];
    eigenvalues come from the closed-form trace/determinant formula.
    """
    if state.size != mol.dimension:
        raise DimensionError(
            f"state has {state.size} entries, expected {mol.dimension}"
        )
    temp, conc = mol.split(np.asarray(state, dtype=float))
    t_i = temp[1:-1]
    c_i = conc[1:-1]
    trace = -(mol.b + 1.0) + 2.0 * t_i * c_i - t_i**2
    det = t_i**2  # algebraic simplification of the 2x2 determinant
    disc = np.sqrt((trace**2 - 4.0 * det).astype(complex))
    return np.concatenate([(trace + disc) / 2.0, (trace - disc) / 2.0])


def reaction_spectrum_extent(mol: BrusselatorMOL, states) -> complex:
    """Eigenvalue with the most negative real part over a collection of states."""
    best = None
    for state in states:
        eigs = reaction_spectrum(mol, state)
        candidate = eigs[np.argmin(eigs.real)]
        if best is None or candidate.real < best.real:
            best = candidate
    return best


# -- declarative parameter files ----------------------------------------------

def problem_from_dict(doc: dict):
    """Resolve a problem parameter document.

    ``{"problem": "brusselator", "nx": 101, ...}`` gives a BrusselatorMOL;
    ``{"problem": "linear", "total": -20, "fractions": [0.5, 0.5]}`` gives
    a LinearSplitProblem.
    """
    kind = doc.get("problem")
    params = {k: v for k, v in doc.items() if k != "problem"}
    if kind == "brusselator":
        return BrusselatorMOL(**params)
    if kind == "linear":
        return linear_split(params["total"], params["fractions"])
    raise DimensionError(f"unknown problem kind {kind!r}")


def spectrum_to_csv(eigenvalues, path) -> None:
    """Write eigenvalues as CSV rows (index, re, im)."""
    values = np.asarray(eigenvalues, dtype=complex)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "re", "im"])
        for k, z in enumerate(values):
            writer.writerow([k, repr(float(z.real)), repr(float(z.imag))])
