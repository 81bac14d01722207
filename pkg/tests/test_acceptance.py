"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Criterion 5's fine-step reference trajectory (the dominating cost) is
computed once per session. Run ``pytest tests/test_acceptance.py -v -s``
to see the report lines and timings.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from fsrk import (AdditiveODEProblem, adjoint, ark_stability_eval,
                  build_compact, build_extended, catalogue,
                  catalogue_splitting, check_internal_consistency,
                  convergence_order, diffusion_spectrum, integrate,
                  linear_split, scheme, step)
from fsrk.integrator import finite_difference_jacobian
from fsrk.problems import BrusselatorMOL, reaction_spectrum_extent
from fsrk.splitting import catalogue_splitting_names
from fsrk.stability import (GridSpec, RayRestriction, detect_holes, poles,
                            product_stability, real_axis_intercept,
                            scan_region)
from fsrk.tableau import catalogue_names, validate

from conftest import (FIVE_SCHEMES, pole_avoiding_tuples, strang_heun_heun,
                      strang_sdirk_heun)
from test_gark import WORKED_COMPACT, WORKED_WEIGHTS, worked_example_scheme

SECTION_43_RAY = RayRestriction(weights=(1.0, 0.001))
DIFFUSION_EXTREME = -1000.75  # reported extreme diffusion eigenvalue


class Budget:
    """Context manager printing the criterion verdict and enforcing runtime."""

    def __init__(self, label, seconds):
        self.label = label
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, *rest):
        elapsed = time.perf_counter() - self.start
        verdict = "PASS" if exc_type is None else "FAIL"
        print(f"\nACCEPTANCE {self.label}: {verdict} "
              f"({elapsed:.2f}s, budget {self.seconds:.0f}s)")
        if exc_type is None:
            assert elapsed < self.seconds, (
                f"{self.label} exceeded runtime budget: {elapsed:.1f}s"
            )
        return False


def test_criterion_1_golden_compact_tableau():
    """Worked-example compact tableau reproduced exactly, rational arithmetic."""
    with Budget("1 (golden tableau)", 1.0):
        ct = build_compact(worked_example_scheme())
        assert ct.total_stages == 11
        assert ct.matrix == WORKED_COMPACT
        assert ct.weights == WORKED_WEIGHTS
        assert all(isinstance(w, Fraction) for w in ct.weights)


def test_criterion_2_stability_evaluator_equivalence():
    """Product form vs resolvent form at 100 pole-avoiding tuples per scheme."""
    with Budget("2 (evaluator equivalence)", 10.0):
        for name, build in sorted(FIVE_SCHEMES.items()):
            s = build()
            rfun = product_stability(s)
            ext = build_extended(s)
            for z in pole_avoiding_tuples(rfun, 100, seed=17):
                product_val = complex(rfun(z))
                ark_val = ark_stability_eval(ext, z)
                err = abs(product_val - ark_val) / max(1.0, abs(ark_val))
                assert err <= 1e-10, f"{name} at z={z}: {err:.2e}"


def test_criterion_3_integrator_stability_oracle():
    """One step on diagonal linear problems equals per-mode product stability."""
    with Budget("3 (integrator oracle)", 5.0):
        rng = np.random.default_rng(23)
        dt = 0.17
        for name, build in sorted(FIVE_SCHEMES.items()):
            s = build()
            modes = rng.uniform(-4.0, -0.05, size=(s.operators, 8))
            operators = tuple(
                (lambda t, y, lam=modes[ell]: lam * y)
                for ell in range(s.operators)
            )
            jacobians = tuple(
                (lambda t, y, lam=modes[ell]: np.diag(lam))
                for ell in range(s.operators)
            )
            problem = AdditiveODEProblem(
                operators=operators, jacobians=jacobians,
                y0=np.ones(8), t_span=(0.0, 1.0))
            y1 = step(s, problem, 0.0, problem.y0, dt)
            rfun = product_stability(s)
            for mode in range(8):
                expected = complex(rfun(modes[:, mode] * dt)).real
                err = abs(y1[mode] - expected) / max(1.0, abs(expected))
                assert err <= 1e-10, f"{name} mode {mode}: {err:.2e}"


def test_criterion_4_step_size_threshold():
    """Strang(Heun,Heun) under the z2 = 0.001 z1 ray predicts dt* = 0.004."""
    with Budget("4 (step-size threshold)", 5.0):
        rfun = product_stability(strang_heun_heun())
        intercept = real_axis_intercept(rfun, SECTION_43_RAY)
        dt_star = intercept / DIFFUSION_EXTREME
        assert dt_star == pytest.approx(0.004, rel=0.05), (
            f"intercept {intercept:.6f} -> dt* {dt_star:.6f}"
        )


@pytest.fixture(scope="session")
def brusselator_runs():
    """Coarse runs at 0.004001 / 0.0039 plus the 0.0039/64 reference."""
    start = time.perf_counter()
    mol = BrusselatorMOL(nx=101)
    s = strang_heun_heun()
    problem = mol.problem(t_end=80.0)
    unstable = integrate(s, problem, 0.004001, snapshot_stride=10**9)
    stable = integrate(s, problem, 0.0039, snapshot_stride=10**9)
    reference = integrate(s, problem, 0.0039 / 64.0, snapshot_stride=4096,
                          t_end=stable.t_final)
    return unstable, stable, reference, time.perf_counter() - start


def test_criterion_5_brusselator_reproduction(brusselator_runs):
    """Instability at dt=0.004001, stability at dt=0.0039 vs dt/64 reference."""
    unstable, stable, reference, fixture_seconds = brusselator_runs
    budget = Budget("5 (Brusselator)", 300.0)
    budget.seconds = 300.0 - fixture_seconds
    print(f"\n  runs + dt/64 reference took {fixture_seconds:.1f}s")
    with budget:
        # stable branch: final states at the identical time 80.0007
        assert not stable.diverged
        assert reference.t_final == pytest.approx(stable.t_final, abs=1e-9)
        dev_stable = float(np.max(np.abs(stable.final_state
                                         - reference.final_state)))
        assert dev_stable < 0.05, f"stable-run deviation {dev_stable:.3e}"
        # unstable branch: divergence flag, or deviation beyond 1e1 by t=80
        dev_unstable = float(np.max(np.abs(
            unstable.final_state - reference.state_at(unstable.t_final))))
        print(f"\n  dt=0.004001 deviation at t=80: {dev_unstable:.3f} "
              f"(stable-run deviation {dev_stable:.2e})")
        assert unstable.diverged or dev_unstable > 1e1, (
            f"no divergence flag and deviation {dev_unstable:.3f} <= 1e1"
        )


def test_brusselator_instability_factor(brusselator_runs):
    """The dt=0.004001 run exhibits the oscillatory instability: its deviation
    from the fine-step reference exceeds 1 sup-norm by t=80 and dwarfs the
    stable run's deviation."""
    unstable, stable, reference, _ = brusselator_runs
    dev_unstable = float(np.max(np.abs(
        unstable.final_state - reference.state_at(unstable.t_final))))
    dev_stable = float(np.max(np.abs(stable.final_state
                                     - reference.final_state)))
    assert dev_unstable > 1.0
    assert dev_unstable > 1e5 * dev_stable


def test_criterion_6_l_stable_vs_a_stable():
    """A-stable SDIRK(1/2) intercept near -2008; L-stable variant has none."""
    with Budget("6 (L-stable vs A-stable)", 30.0):
        a_stable = product_stability(strang_sdirk_heun("1/2"))
        intercept = real_axis_intercept(a_stable, SECTION_43_RAY)
        assert intercept == pytest.approx(-2008.0, rel=0.02), intercept
        l_stable = product_stability(strang_sdirk_heun(1 + 1 / math.sqrt(2)))
        flag = real_axis_intercept(l_stable, SECTION_43_RAY)
        assert flag == float("-inf")


def test_criterion_7_hole_and_pole_inventory():
    """Ruth(RK3, SDIRK23): pole at 1/((-2/3) gamma) inside exactly one hole;
    swapped operators move the nearest left pole to about -30.43, no holes."""
    with Budget("7 (hole near -1.9)", 30.0):
        gamma = (3 + math.sqrt(3)) / 6
        expected_pole = 1.0 / ((-2.0 / 3.0) * gamma)
        direct = scheme(catalogue_splitting("Ruth", 2),
                        [catalogue("RK3"), catalogue("SDIRK23")])
        rfun = product_stability(direct)
        locations = [p.location for p in poles(rfun)]
        assert any(abs(loc - expected_pole) <= 1e-3 for loc in locations), locations
        ray = RayRestriction(weights=(1.0, 1.0))
        grid = GridSpec(re_min=-4.0, re_max=0.5, im_min=-2.5, im_max=2.5,
                        n_re=801, n_im=801)
        holes = detect_holes(scan_region(rfun, ray, grid))
        assert len(holes) == 1
        assert holes[0].contains(complex(expected_pole, 0.0))

        swapped = scheme(catalogue_splitting("Ruth", 2),
                         [catalogue("SDIRK23"), catalogue("RK3")])
        rfun_swapped = product_stability(swapped)
        left = [p.location.real for p in poles(rfun_swapped)
                if p.location.real < 0]
        nearest_left = max(left)
        assert nearest_left == pytest.approx(-30.43, rel=0.01), nearest_left
        grid_swapped = GridSpec(re_min=-46.0, re_max=1.0, im_min=-12.0,
                                im_max=12.0, n_re=801, n_im=401)
        holes_swapped = detect_holes(scan_region(rfun_swapped, ray, grid_swapped))
        assert holes_swapped == []


def test_criterion_8_convergence_orders():
    """Observed orders 1/2/3 on the linear split and a nonlinear logistic split."""
    with Budget("8 (convergence orders)", 60.0):
        builders = {
            1.0: lambda: scheme(catalogue_splitting("Godunov", 2),
                                [catalogue("FE"), catalogue("FE")]),
            2.0: strang_heun_heun,
            3.0: lambda: scheme(catalogue_splitting("Ruth", 2),
                                [catalogue("RK3"), catalogue("SDIRK23")]),
        }
        dts = [0.2, 0.1, 0.05, 0.025]

        lin = linear_split(-2.0, [0.4, 0.6])
        lin_problem = lin.problem(t_span=(0.0, 1.0))

        y0 = 0.2
        logistic = AdditiveODEProblem(
            operators=((lambda t, y: y), (lambda t, y: -y * y)),
            jacobians=((lambda t, y: np.eye(1)), (lambda t, y: np.diag(-2 * y))),
            y0=np.array([y0]), t_span=(0.0, 1.0), name="logistic")

        def logistic_exact(t):
            return np.array([y0 * np.exp(t) / (1 + y0 * (np.exp(t) - 1))])

        for expected, build in builders.items():
            for problem, reference in ((lin_problem, lin.exact),
                                       (logistic, logistic_exact)):
                study = convergence_order(build(), problem, reference, dts)
                assert study.order == pytest.approx(expected, abs=0.2), (
                    f"{build().name} on {problem.name}: {study.order:.3f}"
                )


def test_criterion_9_spectrum_checks():
    """Diffusion extreme eigenvalue and reaction extreme real part."""
    with Budget("9 (spectra)", 30.0):
        mol = BrusselatorMOL(nx=101)
        closed = diffusion_spectrum(mol).min()
        dense = np.linalg.eigvals(mol.diffusion_matrix()).real.min()
        tol = abs(DIFFUSION_EXTREME) * 0.001
        assert abs(closed - DIFFUSION_EXTREME) <= tol, closed
        assert abs(dense - DIFFUSION_EXTREME) <= tol, dense
        assert abs(closed - dense) <= 1e-8 * abs(closed)

        trajectory = integrate(strang_heun_heun(), mol.problem(t_end=80.0),
                               0.002, snapshot_stride=400)
        worst = reaction_spectrum_extent(mol, trajectory.states)
        assert worst.real == pytest.approx(-1.047, rel=0.10), worst


def test_criterion_10_invariant_suites():
    """Row sums, weight sums, consistency witness, adjoint involution,
    finite-difference Jacobian agreement."""
    with Budget("10 (invariant suites)", 30.0):
        # tableau row sums across the catalogue
        for name in catalogue_names():
            t = (catalogue(name) if name != "SDIRKgamma"
                 else catalogue(name, gamma="2/5"))
            assert validate(t) == []
        # extended-tableau structure across the five schemes
        for build in FIVE_SCHEMES.values():
            ext = build_extended(build())
            for mat, col in zip(ext.a, ext.c):
                for i in range(ext.total_stages):
                    assert abs(float(sum(mat[i]) - col[i])) < 1e-12
            for row in ext.b:
                assert abs(float(sum(row)) - 1.0) < 1e-12
        # internal-consistency witness on the worked example
        report = check_internal_consistency(build_extended(worked_example_scheme()))
        assert not report.consistent and report.witness == (1, 0, 1)
        # adjoint involution across the splitting catalogue
        for name in catalogue_splitting_names():
            n = {"Ruth": 2, "OS3_32": 3}.get(name, 2)
            m = catalogue_splitting(name, n)
            assert adjoint(adjoint(m)).alpha == m.alpha
        # analytic vs finite-difference Jacobians on the Brusselator
        mol = BrusselatorMOL(nx=11)
        rng = np.random.default_rng(31)
        for _ in range(10):
            state = rng.uniform(0.3, 1.8, mol.dimension)
            for f, jac in ((mol.diffusion, mol.diffusion_jacobian),
                           (mol.reaction, mol.reaction_jacobian)):
                analytic = jac(0.0, state)
                numeric = finite_difference_jacobian(f, 0.0, state)
                scale = max(1.0, np.abs(analytic).max())
                assert np.abs(analytic - numeric).max() <= 1e-6 * scale
