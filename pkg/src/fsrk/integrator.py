"""Fractional-step time stepping for additively split ODE systems.

One step advances the state through every (stage, operator) cell of the
scheme in sequence: operator l at stage k is integrated by its own
Runge-Kutta tableau over the effective step alpha[k][l] * dt, starting
from the operator's own accumulated time t_n + sum(alpha[<k][l]) * dt.
Negative fractions are backward sub-steps and receive no special casing;
zero fractions are exact identities.

Implicit (diagonally implicit) stages are solved by damped-free Newton
iteration with analytic Jacobians when the problem supplies them and
forward finite differences otherwise.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DimensionError, StageSolveError, UnsupportedTableauError
from .gark import FSRKScheme

NEWTON_TOL = 1e-10
NEWTON_MAX_ITERS = 25
#: stage states larger than this multiple of the base state indicate a
#: near-singular stage matrix (pole proximity of a backward sub-step)
STAGE_AMPLIFICATION_LIMIT = 1e4
DIVERGENCE_THRESHOLD = 1e10


@dataclass(frozen=True)
class AdditiveODEProblem:
    """An N-additively split ODE: dy/dt = sum_l f_l(t, y), y(t0) = y0.

    ``jacobians`` may be None (finite differences everywhere) or a tuple
    with None entries for individual operators. Evaluators must be pure;
    independent trajectories may call them concurrently.
    """

    operators: tuple[Callable, ...]
    y0: np.ndarray
    t_span: tuple[float, float]
    jacobians: Optional[tuple[Optional[Callable], ...]] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "y0", np.atleast_1d(np.asarray(self.y0)))
        if self.jacobians is not None and len(self.jacobians) != len(self.operators):
            raise DimensionError("one Jacobian slot per operator (None allowed)")

    @property
    def n_operators(self) -> int:
        return len(self.operators)

    @property
    def dimension(self) -> int:
        return self.y0.size

    def jacobian(self, ell: int) -> Optional[Callable]:
        if self.jacobians is None:
            return None
        return self.jacobians[ell]


@dataclass
class IntegrationResult:
    """Trajectory snapshots plus step/Newton statistics and divergence state."""

    times: np.ndarray
    states: np.ndarray
    step_count: int
    newton_iterations: int
    diverged: bool
    blow_up_time: float | None
    dt: float
    t_final: float
    scheme_name: str = ""
    problem_name: str = ""

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def state_at(self, t: float) -> np.ndarray:
        """Snapshot nearest to t (snapshots are exact step states, no interpolation)."""
        return self.states[int(np.argmin(np.abs(self.times - t)))]

    def to_csv(self, path) -> None:
        """One line per snapshot: t, y_1 ... y_n."""
        n = self.states.shape[1]
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["t"] + [f"y_{i + 1}" for i in range(n)])
            for t, row in zip(self.times, self.states):
                writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])

    def metadata(self) -> dict:
        return {
            "scheme": self.scheme_name,
            "problem": self.problem_name,
            "dt": self.dt,
            "t_final": self.t_final,
            "steps": self.step_count,
            "newton_iterations": self.newton_iterations,
            "diverged": self.diverged,
            "blow_up_time": self.blow_up_time,
        }


def finite_difference_jacobian(f: Callable, t: float, y: np.ndarray) -> np.ndarray:
    """Forward-difference Jacobian with per-component step sqrt(eps)*(1+|y_i|)."""
    y = np.asarray(y)
    base = f(t, y)
    n = y.size
    jac = np.empty((n, n), dtype=np.result_type(base, y))
    sqrt_eps = math.sqrt(np.finfo(float).eps)
    for j in range(n):
        h = sqrt_eps * (1.0 + abs(y[j]))
        shifted = y.copy()
        shifted[j] += h
        jac[:, j] = (f(t, shifted) - base) / h
    return jac


def solve_implicit_stage(
    f: Callable,
    jac: Optional[Callable],
    base: np.ndarray,
    t_stage: float,
    h_diag: float,
    guess: Optional[np.ndarray] = None,
    tol: float = NEWTON_TOL,
    max_iters: int = NEWTON_MAX_ITERS,
) -> tuple[np.ndarray, int]:
    """Solve the stage equation Y = base + h_diag * f(t_stage, Y) by Newton.

    ``h_diag`` is the effective step times the diagonal tableau entry and
    may be negative (backward sub-steps). Returns (Y, iterations).
    Raises StageSolveError on non-convergence or when the update blows
    past the amplification guard, which signals a nearly singular stage
    matrix.
    """
    y = base.copy() if guess is None else guess.copy()
    scale = 1.0 + float(np.linalg.norm(base, ord=np.inf))
    eye = np.eye(base.size)
    residual_norm = math.inf
    for iteration in range(1, max_iters + 1):
        residual = y - base - h_diag * f(t_stage, y)
        residual_norm = float(np.linalg.norm(residual, ord=np.inf))
        if residual_norm <= tol * scale:
            return y, iteration
        j_f = jac(t_stage, y) if jac is not None else finite_difference_jacobian(f, t_stage, y)
        try:
            delta = np.linalg.solve(eye - h_diag * j_f, residual)
        except np.linalg.LinAlgError as exc:
            raise StageSolveError(
                f"singular stage matrix: {exc}", residual=residual_norm
            ) from exc
        y = y - delta
        if not np.all(np.isfinite(y)) or (
            float(np.linalg.norm(y, ord=np.inf)) > STAGE_AMPLIFICATION_LIMIT * scale
        ):
            raise StageSolveError(
                "stage state blew past the amplification guard "
                f"(|Y| > {STAGE_AMPLIFICATION_LIMIT:.0e} * (1 + |y|)); "
                "the stage matrix is nearly singular",
                residual=residual_norm,
            )
    raise StageSolveError(
        f"Newton stalled after {max_iters} iterations "
        f"(residual {residual_norm:.3e})",
        residual=residual_norm,
    )


@dataclass(frozen=True, eq=False)
class _SubStep:
    """Precompiled sub-integration: operator index plus float tableau data."""

    stage: int
    operator: int
    alpha: float
    frac_before: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    diag: np.ndarray
    explicit: bool


@lru_cache(maxsize=64)
def _compile(s: FSRKScheme) -> tuple[_SubStep, ...]:
    plan = []
    for k in range(s.stages):
        for ell in range(s.operators):
            t = s.integrators[k][ell]
            if not t.is_lower_triangular:
                raise UnsupportedTableauError(
                    f"{t.name}: only diagonally implicit (lower-triangular) "
                    "tableaux are supported for stepping"
                )
            alpha = float(s.splitting.alpha[k][ell])
            frac_before = float(sum(s.splitting.alpha[i][ell] for i in range(k)))
            a = t.a_array()
            plan.append(_SubStep(
                stage=k, operator=ell, alpha=alpha, frac_before=frac_before,
                a=a, b=t.b_array(), c=t.c_array(), diag=np.diag(a).copy(),
                explicit=t.is_explicit,
            ))
    return tuple(plan)


def _rk_substep(sub: _SubStep, f, jac, t_op: float, y: np.ndarray, h: float):
    """One Runge-Kutta step of length h on a single operator; returns (y_next, newton_iters)."""
    stages = sub.b.size
    k_vals = np.empty((stages, y.size), dtype=y.dtype)
    iters = 0
    for i in range(stages):
        base = y if i == 0 else y + h * (sub.a[i, :i] @ k_vals[:i])
        t_stage = t_op + sub.c[i] * h
        if sub.diag[i] == 0.0:
            k_vals[i] = f(t_stage, base)
        else:
            stage_state, used = solve_implicit_stage(
                f, jac, base, t_stage, h * sub.diag[i]
            )
            iters += used
            k_vals[i] = f(t_stage, stage_state)
    return y + h * (sub.b @ k_vals), iters


def step(
    s: FSRKScheme,
    problem: AdditiveODEProblem,
    t: float,
    y: np.ndarray,
    dt: float,
) -> np.ndarray:
    """Advance the state by one fractional step of length dt."""
    _check_operator_counts(s, problem)
    y_next, _ = _run_plan(_compile(s), problem, t, y, dt)
    return y_next


def _check_operator_counts(s, problem):
    if s.operators != problem.n_operators:
        raise DimensionError(
            f"scheme has {s.operators} operators, problem has {problem.n_operators}"
        )


def _run_plan(plan, problem, t, y, dt):
    y = np.asarray(y)
    total_iters = 0
    for sub in plan:
        if sub.alpha == 0.0:
            continue
        f = problem.operators[sub.operator]
        jac = problem.jacobian(sub.operator)
        t_op = t + sub.frac_before * dt
        h = sub.alpha * dt
        try:
            y, iters = _rk_substep(sub, f, jac, t_op, y, h)
        except StageSolveError as exc:
            raise exc.at(sub.stage + 1, sub.operator + 1) from None
        total_iters += iters
    return y, total_iters


def integrate(
    s: FSRKScheme,
    problem: AdditiveODEProblem,
    dt: float,
    t_end: float | None = None,
    snapshot_stride: int = 1,
    divergence_threshold: float = DIVERGENCE_THRESHOLD,
) -> IntegrationResult:
    """Repeated stepping from t0 with trajectory snapshots every ``snapshot_stride`` steps.

    The span is covered by round(span / dt) whole steps; the realized
    final time is reported in the result. Blows past
    ``divergence_threshold`` in sup norm set the divergence flag and
    truncate the trajectory. Stage-solve failures propagate.
    """
    t0, t1 = problem.t_span
    if t_end is not None:
        t1 = t_end
    span = t1 - t0
    if dt <= 0:
        raise DimensionError("dt must be positive")
    n_steps = int(round(span / dt)) if span > 0 else 0
    y = problem.y0.astype(float if not np.iscomplexobj(problem.y0) else complex)
    _check_operator_counts(s, problem)
    plan = _compile(s)

    times = [t0]
    states = [y.copy()]
    newton_total = 0
    diverged = False
    blow_up = None
    steps_done = 0
    for step_index in range(1, n_steps + 1):
        t = t0 + (step_index - 1) * dt
        y, iters = _run_plan(plan, problem, t, y, dt)
        newton_total += iters
        steps_done = step_index
        bad = not np.all(np.isfinite(y))
        if bad or float(np.max(np.abs(y))) > divergence_threshold:
            diverged = True
            blow_up = t0 + step_index * dt
            times.append(blow_up)
            states.append(y.copy())
            break
        if step_index % snapshot_stride == 0 or step_index == n_steps:
            times.append(t0 + step_index * dt)
            states.append(y.copy())
    return IntegrationResult(
        times=np.array(times),
        states=np.array(states),
        step_count=steps_done,
        newton_iterations=newton_total,
        diverged=diverged,
        blow_up_time=blow_up,
        dt=dt,
        t_final=float(times[-1]),
        scheme_name=s.name,
        problem_name=problem.name,
    )


@dataclass
class ConvergenceStudy:
    """Observed order from a least-squares fit of log(error) vs log(dt)."""

    order: float
    dts: np.ndarray
    errors: np.ndarray
    at_precision_floor: bool = False


def convergence_order(
    s: FSRKScheme,
    problem: AdditiveODEProblem,
    reference: Callable[[float], np.ndarray] | np.ndarray,
    dts: Sequence[float],
) -> ConvergenceStudy:
    """Integrate at each dt and fit the error slope at the final time.

    ``reference`` is either an exact-solution callable t -> y or a frozen
    end-state array. Needs at least 3 step sizes. Errors within 100x
    machine epsilon of the solution scale set the precision-floor flag.
    """
    if len(dts) < 3:
        raise DimensionError("need at least 3 step sizes for a slope")
    t1 = problem.t_span[1]
    target = reference(t1) if callable(reference) else np.asarray(reference)
    errors = []
    for dt in dts:
        result = integrate(s, problem, dt, snapshot_stride=10 ** 9)
        errors.append(float(np.linalg.norm(result.final_state - target, ord=np.inf)))
    errors_arr = np.array(errors)
    scale = max(1.0, float(np.linalg.norm(target, ord=np.inf)))
    floor = bool((errors_arr < 100 * np.finfo(float).eps * scale).any())
    slope = float(np.polyfit(np.log(np.asarray(dts, dtype=float)),
                             np.log(np.maximum(errors_arr, 1e-300)), 1)[0])
    return ConvergenceStudy(
        order=slope, dts=np.asarray(dts, dtype=float),
        errors=errors_arr, at_precision_floor=floor,
    )
