import numpy as np
import pytest

from gpchoice import (
    GpDomainError,
    SolverSettings,
    Status,
    build_dual,
    evaluate,
    make_problem,
    recover_primal,
    solve,
    solve_dual,
    standardize,
)
from gpchoice.solver import DualSolution, ReconstructionError
from helpers import (
    EX1_W,
    EX1_X,
    EX1_Z,
    EX2_W,
    EX2_X,
    EX2_Z,
    example1_problem,
    example2_problem,
    random_feasible_gp,
)


class TestSolveDual:
    def test_example1_weights_match_reference(self):
        ds = solve_dual(build_dual(standardize(example1_problem())))
        assert ds.status is Status.OPTIMAL
        assert ds.objective_value == pytest.approx(EX1_Z, abs=1e-3)
        np.testing.assert_allclose(ds.weights, EX1_W, atol=1e-3)

    def test_example2_weights_match_reference(self):
        ds = solve_dual(build_dual(standardize(example2_problem())))
        assert ds.status is Status.OPTIMAL
        assert ds.objective_value == pytest.approx(EX2_Z, abs=1e-3)
        assert ds.weights[6] == pytest.approx(0.3333285, abs=1e-3)  # w21
        np.testing.assert_allclose(ds.weights, EX2_W, atol=1e-3)
        np.testing.assert_allclose(
            ds.lambdas, [EX2_W[4] + EX2_W[5], EX2_W[6]], atol=1e-3
        )

    def test_zero_degree_of_difficulty_solved_directly(self):
        ds = solve_dual(build_dual(standardize(make_problem([(1, (1,)), (1, (-1,))]))))
        assert ds.status is Status.OPTIMAL
        assert ds.iterations == 0  # direct linear solve, no Newton steps
        np.testing.assert_allclose(ds.weights, [0.5, 0.5], atol=1e-12)
        assert ds.objective_value == pytest.approx(2.0, rel=1e-12)

    def test_residuals_meet_settings_at_optimum(self):
        settings = SolverSettings()
        for g in (example1_problem(), example2_problem()):
            ds = solve_dual(build_dual(standardize(g)), settings)
            assert ds.status is Status.OPTIMAL
            assert ds.equality_residual <= settings.feasibility_tol
            assert ds.stationarity <= settings.stationarity_tol

    def test_empty_feasible_set_is_infeasible(self):
        # min x1*x2 with x1*x2 <= 1: orthogonality forces a negative weight
        g = make_problem([(1, (1, 1))], [([(1, (1, 1))], 1.0)])
        ds = solve_dual(build_dual(standardize(g)))
        assert ds.status is Status.INFEASIBLE

    def test_unbounded_dual_for_infeasible_primal(self):
        # 2x + 3/x <= 1 has no solution; the dual grows without bound
        g = make_problem([(1, (1,))], [([(2, (1,)), (3, (-1,))], 1.0)])
        ds = solve_dual(build_dual(standardize(g)))
        assert ds.status is Status.UNBOUNDED

    def test_forced_zero_weights_are_reduced_away(self):
        # x2 appears only with positive exponents, so its orthogonality row
        # forces the last two weights to zero: the feasible set is nonempty
        # but has no interior
        g = make_problem(
            [(1, (1, 0)), (1, (-1, 0)), (1, (1, 1)), (1, (-1, 1))]
        )
        ds = solve_dual(build_dual(standardize(g)))
        assert ds.status is Status.OPTIMAL
        np.testing.assert_allclose(ds.weights, [0.5, 0.5, 0.0, 0.0], atol=1e-12)
        assert ds.objective_value == pytest.approx(2.0, rel=1e-12)
        # the primal infimum (2, as x2 -> 0) is not attained, and the full
        # solve must not report a spurious optimum
        assert solve(standardize(g)).status is not Status.OPTIMAL


class TestRecoverPrimal:
    def test_example1_point(self):
        s = standardize(example1_problem())
        ds = solve_dual(build_dual(s))
        np.testing.assert_allclose(recover_primal(s, ds), EX1_X, atol=1e-4)

    def test_example2_point(self):
        s = standardize(example2_problem())
        ds = solve_dual(build_dual(s))
        np.testing.assert_allclose(recover_primal(s, ds), EX2_X, atol=1e-2)

    def test_balanced_two_term_objective_recovers_unit_point(self):
        s = standardize(make_problem([(1, (1,)), (1, (-1,))]))
        ds = solve_dual(build_dual(s))
        np.testing.assert_allclose(recover_primal(s, ds), [1.0], atol=1e-12)

    def test_inconsistent_weights_raise(self):
        s = standardize(example1_problem())
        ds = solve_dual(build_dual(s))
        corrupted = DualSolution(
            status=ds.status,
            weights=ds.weights.copy(),
            lambdas=ds.lambdas.copy(),
            objective_value=2.0 * ds.objective_value,  # wrong scale
            equality_residual=ds.equality_residual,
            stationarity=ds.stationarity,
            iterations=ds.iterations,
        )
        with pytest.raises(ReconstructionError):
            recover_primal(s, corrupted)


class TestSolve:
    def test_example1_report(self):
        report = solve(standardize(example1_problem()))
        assert report.status is Status.OPTIMAL
        assert report.objective_value == pytest.approx(EX1_Z, abs=1e-4)
        np.testing.assert_allclose(report.primal_x, EX1_X, atol=1e-4)
        assert report.duality_gap <= 1e-6
        assert report.kkt_residuals.primal_feasibility <= 1e-8

    def test_example2_report(self):
        report = solve(standardize(example2_problem()))
        assert report.status is Status.OPTIMAL
        assert report.objective_value == pytest.approx(EX2_Z, abs=1e-3)
        np.testing.assert_allclose(report.primal_x, EX2_X, atol=1e-2)

    def test_unattained_infimum_is_not_reported_optimal(self):
        # objective x1*x2 can approach 0 on the feasible set without
        # attaining it; the solver must not claim optimality
        g = make_problem([(1, (1, 1))], [([(1, (1, 1))], 1.0)])
        report = solve(standardize(g))
        assert report.status is not Status.OPTIMAL

    def test_constant_objective_without_variables(self):
        report = solve(standardize(make_problem([(5.0, ())], variable_names=[])))
        assert report.status is Status.OPTIMAL
        assert report.objective_value == pytest.approx(5.0, rel=1e-12)
        assert report.primal_x == ()

    def test_deterministic_bit_identical_reports(self):
        s = standardize(example2_problem())
        first = solve(s)
        second = solve(s)
        assert first.objective_value == second.objective_value
        assert first.primal_x == second.primal_x
        assert first.duality_gap == second.duality_gap
        assert np.array_equal(first.dual.weights, second.dual.weights)

    def test_optimal_reports_satisfy_gap_and_residual_bounds(self):
        rng = np.random.default_rng(314)
        optimal = 0
        for _ in range(40):
            s = standardize(random_feasible_gp(rng))
            report = solve(s)
            if report.status is Status.OPTIMAL:
                optimal += 1
                assert report.duality_gap <= 1e-6
                assert report.dual.equality_residual <= 1e-10
                for posy in s.constraints:
                    assert evaluate(posy, report.primal_x) <= 1.0 + 1e-8
        assert optimal >= 15  # the generator must keep producing solvable cases


class TestSolverSettings:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"feasibility_tol": 0.0},
            {"stationarity_tol": -1.0},
            {"boundary_eps": 0.0},
            {"max_iterations": 0},
        ],
    )
    def test_rejects_non_positive_settings(self, kwargs):
        with pytest.raises(GpDomainError):
            SolverSettings(**kwargs)

    def test_custom_tolerance_is_respected(self):
        loose = SolverSettings(stationarity_tol=1e-4)
        ds = solve_dual(build_dual(standardize(example1_problem())), loose)
        assert ds.status is Status.OPTIMAL
        assert ds.stationarity <= 1e-4
