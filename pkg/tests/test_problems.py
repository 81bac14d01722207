import numpy as np
import pytest

from fsrk import BrusselatorMOL, diffusion_spectrum, linear_split, reaction_spectrum
from fsrk.errors import DimensionError
from fsrk.integrator import finite_difference_jacobian
from fsrk.problems import reaction_spectrum_extent


class TestLinearSplit:
    def test_fifty_fifty(self):
        assert linear_split(-20.0, [0.5, 0.5]).lambdas == (-10.0, -10.0)

    def test_ten_ninety(self):
        assert linear_split(-20.0, [0.1, 0.9]).lambdas == pytest.approx((-2.0, -18.0))

    def test_inert_operator(self):
        lin = linear_split(-20.0, [1.0, 0.0])
        assert lin.lambdas == (-20.0, 0.0)
        problem = lin.problem()
        assert np.all(problem.operators[1](0.0, np.array([2.0])) == 0.0)

    def test_fractions_must_sum_to_one(self):
        with pytest.raises(DimensionError):
            linear_split(-20.0, [0.5, 0.6])

    def test_exact_solution(self):
        lin = linear_split(-4.0, [0.25, 0.75])
        assert lin.exact(0.5)[0] == pytest.approx(np.exp(-2.0))


class TestBrusselatorStructure:
    def test_defaults(self):
        mol = BrusselatorMOL()
        assert (mol.a, mol.b) == (0.6, 2.0)
        assert mol.d1 == mol.d2 == 1.0 / 40.0
        assert mol.nx == 101 and mol.dx == pytest.approx(0.01)

    def test_too_few_points(self):
        with pytest.raises(DimensionError):
            BrusselatorMOL(nx=2)

    def test_initial_condition_matches_boundary_values(self):
        mol = BrusselatorMOL(nx=11)
        y0 = mol.initial_state()
        temp, conc = mol.split(y0)
        assert temp[0] == temp[-1] == mol.a
        assert conc[0] == conc[-1] == pytest.approx(mol.b / mol.a)
        # species-major layout: all temperatures first
        x = mol.x
        assert temp == pytest.approx(mol.a + x * (1 - x))
        assert conc == pytest.approx(mol.b / mol.a + x**2 * (1 - x))

    def test_fixed_point_kills_reaction(self):
        mol = BrusselatorMOL(nx=21)
        state = np.concatenate([np.full(21, mol.a), np.full(21, mol.b / mol.a)])
        assert np.allclose(mol.reaction(0.0, state), 0.0, atol=1e-14)

    def test_linear_profile_has_zero_second_difference(self):
        mol = BrusselatorMOL(nx=31)
        state = np.concatenate([2.0 + 3.0 * mol.x, -1.0 + 0.5 * mol.x])
        assert np.allclose(mol.diffusion(0.0, state), 0.0, atol=1e-9)

    def test_boundary_rows_pinned(self):
        mol = BrusselatorMOL(nx=9)
        rng = np.random.default_rng(0)
        state = rng.uniform(0.5, 2.0, mol.dimension)
        for f in (mol.diffusion, mol.reaction):
            rates = f(0.0, state)
            assert rates[0] == rates[mol.nx - 1] == 0.0
            assert rates[mol.nx] == rates[2 * mol.nx - 1] == 0.0

    def test_reaction_sum_identity(self):
        # d(T+C)/dt under reaction alone is a - T pointwise (interior)
        mol = BrusselatorMOL(nx=17)
        rng = np.random.default_rng(1)
        state = rng.uniform(0.2, 1.5, mol.dimension)
        rates = mol.reaction(0.0, state)
        temp, _ = mol.split(state)
        total = rates[:mol.nx] + rates[mol.nx:]
        assert total[1:-1] == pytest.approx(mol.a - temp[1:-1], rel=1e-12)


class TestJacobians:
    @pytest.mark.parametrize("which", ["diffusion", "reaction"])
    def test_matches_finite_differences(self, which):
        mol = BrusselatorMOL(nx=13)
        f = getattr(mol, which)
        jac_fn = getattr(mol, f"{which}_jacobian")
        rng = np.random.default_rng(2)
        for _ in range(10):
            state = rng.uniform(0.3, 1.8, mol.dimension)
            analytic = jac_fn(0.0, state)
            numeric = finite_difference_jacobian(f, 0.0, state)
            scale = max(1.0, np.abs(analytic).max())
            assert np.abs(analytic - numeric).max() <= 1e-6 * scale


class TestDiffusionSpectrum:
    def test_most_negative_at_reference_resolution(self):
        mol = BrusselatorMOL(nx=101)
        eigs = diffusion_spectrum(mol)
        # closed form: -(4 d/dx^2) sin^2(99 pi/200) = -999.7533
        assert eigs.min() == pytest.approx(-999.75328, abs=1e-3)

    def test_matches_dense_eigendecomposition(self):
        mol = BrusselatorMOL(nx=41)
        closed = diffusion_spectrum(mol)
        dense = np.sort(np.linalg.eigvals(mol.diffusion_matrix()).real)
        assert np.abs(np.sort(closed) - dense).max() < 1e-8

    def test_three_point_grid(self):
        mol = BrusselatorMOL(nx=3)
        eigs = diffusion_spectrum(mol)
        expected = -2.0 * mol.d1 / mol.dx**2
        assert eigs.min() == pytest.approx(expected, rel=1e-12)

    def test_zero_diffusion(self):
        mol = BrusselatorMOL(nx=5, d1=0.0, d2=0.0)
        assert np.allclose(diffusion_spectrum(mol), 0.0)

    def test_zero_count_from_pinned_rows(self):
        mol = BrusselatorMOL(nx=11)
        eigs = diffusion_spectrum(mol)
        assert np.count_nonzero(eigs == 0.0) == 4


class TestReactionSpectrum:
    def test_origin_state_closed_form(self):
        mol = BrusselatorMOL(nx=5)
        eigs = reaction_spectrum(mol, np.zeros(mol.dimension))
        values = sorted(set(np.round(eigs.real, 12)))
        assert values == pytest.approx([-(mol.b + 1.0), 0.0])

    def test_fixed_point_matches_dense_eig(self):
        mol = BrusselatorMOL(nx=5)
        state = np.concatenate([np.full(5, mol.a), np.full(5, mol.b / mol.a)])
        eigs = reaction_spectrum(mol, state)
        block = np.array([
            [mol.b - 1.0, mol.a**2],
            [-mol.b, -mol.a**2],
        ])
        expected = np.linalg.eigvals(block)
        got = sorted(set(np.round(eigs, 10)), key=lambda z: (z.real, z.imag))
        want = sorted(np.round(expected, 10), key=lambda z: (z.real, z.imag))
        assert got == pytest.approx(want)

    def test_dimension_guard(self):
        mol = BrusselatorMOL(nx=5)
        with pytest.raises(DimensionError):
            reaction_spectrum(mol, np.zeros(7))

    def test_extent_helper(self):
        mol = BrusselatorMOL(nx=5)
        states = [np.zeros(mol.dimension),
                  np.concatenate([np.full(5, 2.0), np.full(5, 0.1)])]
        worst = reaction_spectrum_extent(mol, states)
        singles = [reaction_spectrum(mol, s).real.min() for s in states]
        assert worst.real == pytest.approx(min(singles))


class TestDeclarativeInterfaces:
    def test_problem_from_dict_brusselator(self):
        from fsrk.problems import problem_from_dict
        mol = problem_from_dict({"problem": "brusselator", "nx": 21, "b": 2.5})
        assert isinstance(mol, BrusselatorMOL)
        assert mol.nx == 21 and mol.b == 2.5

    def test_problem_from_dict_linear(self):
        from fsrk.problems import problem_from_dict
        lin = problem_from_dict({"problem": "linear", "total": -20,
                                 "fractions": [0.1, 0.9]})
        assert lin.lambdas == pytest.approx((-2.0, -18.0))

    def test_problem_from_dict_unknown(self):
        from fsrk.problems import problem_from_dict
        with pytest.raises(DimensionError):
            problem_from_dict({"problem": "lorenz"})

    def test_spectrum_csv_round_trip(self, tmp_path):
        from fsrk.problems import spectrum_to_csv
        mol = BrusselatorMOL(nx=11)
        eigs = diffusion_spectrum(mol)
        path = tmp_path / "spectrum.csv"
        spectrum_to_csv(eigs, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "index,re,im"
        assert len(lines) == len(eigs) + 1
        back = np.array([float(line.split(",")[1]) for line in lines[1:]])
        assert back == pytest.approx(np.asarray(eigs, dtype=float))
