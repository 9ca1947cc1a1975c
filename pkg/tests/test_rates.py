import math

import numpy as np
import pytest

from cdlab import (
    NumericalError,
    OrderingPolicy,
    PermInvariantQuadratic,
    Trajectory,
    ccd_bounds,
    closed_form_C,
    empirical_rate,
    generic_bounds,
    quadratic_constants,
    rcd_one_step_example,
    rcd_rates,
    recurrence_coeffs,
    rho_M,
    rpcd_asymptotic_rate,
    run,
    sd_rate,
    spectral_radius,
)

TABLE_DELTAS = (0.80, 0.50, 0.33, 0.20, 0.10, 0.03)


def _traj(f_values):
    f = np.asarray(f_values, dtype=float)
    return Trajectory(f_per_epoch=f, final_x=np.zeros(1), iterations=0)


class TestSpectralRadius:
    def test_scaled_identity(self):
        assert spectral_radius(0.5 * np.eye(3)) == pytest.approx(0.5, rel=1e-10)

    def test_rotation_matrix_complex_spectrum(self):
        T = np.array([[0.0, 1.0], [-1.0, 0.0]])
        assert spectral_radius(T, tol=1e-10) == pytest.approx(1.0, rel=1e-9)

    def test_table_value(self):
        rho2 = spectral_radius(closed_form_C(100, 0.5)) ** 2
        assert rho2 == pytest.approx(0.9924, abs=5e-5)

    def test_jordan_block(self):
        T = np.array([[0.7, 1.0], [0.0, 0.7]])
        assert spectral_radius(T) == pytest.approx(0.7, rel=1e-9)

    def test_zero_and_nilpotent(self):
        assert spectral_radius(np.zeros((4, 4))) == 0.0
        N = np.diag(np.ones(3), k=1)
        assert spectral_radius(N) == 0.0

    def test_matches_eigvals_on_random_matrices(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            T = rng.standard_normal((12, 12))
            expected = float(np.abs(np.linalg.eigvals(T)).max())
            assert spectral_radius(T, tol=1e-12) == pytest.approx(expected, rel=1e-8)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            spectral_radius(np.ones((2, 3)))
        with pytest.raises(ValueError):
            spectral_radius(np.array([[np.inf, 0.0], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            spectral_radius(np.eye(2), tol=0.0)

    def test_nonconvergence_carries_estimate(self):
        with pytest.raises(NumericalError) as err:
            spectral_radius(np.eye(2) * 2.0, tol=1e-10, max_squarings=2)
        assert err.value.last_estimate == pytest.approx(2.0, rel=0.5)


class TestRhoM:
    def test_table_values(self):
        assert rho_M(100, 0.8) == pytest.approx(0.1162, abs=5e-5)
        assert rho_M(100, 0.03) == pytest.approx(0.9412, abs=5e-5)

    def test_identity_model(self):
        assert rho_M(100, 1.0) == 0.0

    def test_agrees_with_generic_estimator(self):
        for delta in TABLE_DELTAS:
            M = recurrence_coeffs(100, delta).as_array()
            assert rho_M(100, delta) == pytest.approx(spectral_radius(M, tol=1e-12), abs=1e-10)


class TestRpcdAsymptoticRate:
    def test_small_delta_matches_exact(self):
        assert rpcd_asymptotic_rate(100, 0.03) == pytest.approx(rho_M(100, 0.03), abs=5e-3)

    def test_limit_is_one(self):
        assert rpcd_asymptotic_rate(100, 1e-12) == pytest.approx(1.0, abs=1e-11)

    def test_degrades_at_moderate_delta(self):
        # the truncated form reads 0.818 at delta = 0.1; the exact rate is
        # 0.8164, so the gap is real but still small at this delta
        value = rpcd_asymptotic_rate(100, 0.1)
        assert value == pytest.approx(0.818, abs=1e-12)
        assert 1e-4 < abs(value - rho_M(100, 0.1)) < 5e-3


class TestCcdBounds:
    def test_upper_plugin_value(self):
        upper, _ = ccd_bounds(100, 0.05)
        assert upper == pytest.approx(1.0 - 0.05 / (100 * 95.05), abs=1e-15)

    def test_upper_bound_holds_for_table_deltas(self):
        for delta in TABLE_DELTAS:
            upper, _ = ccd_bounds(100, delta)
            rho2 = spectral_radius(closed_form_C(100, delta)) ** 2
            assert rho2 <= upper

    def test_lower_bound_magnitude_small_delta(self):
        # the lower-bound formula tracks the true 1 - rho(C)^2 only in
        # magnitude (both are c*delta/n^2 with moderate c); the literal
        # bracket lower <= rho(C)^2 does not hold at the table deltas
        for delta in (0.03, 0.1):
            _, lower = ccd_bounds(100, delta)
            rho2 = spectral_radius(closed_form_C(100, delta)) ** 2
            assert 0.8 <= (1.0 - lower) / (1.0 - rho2) <= 1.1

    def test_limits_to_one(self):
        upper, lower = ccd_bounds(100, 1e-13)
        assert upper == pytest.approx(1.0, abs=1e-12)
        assert lower == pytest.approx(1.0, abs=1e-12)

    def test_large_delta_uses_three_term_form(self):
        n, delta = 100, 0.8
        L = n * (1 - delta) + delta
        expected = 1.0 - max(
            delta / (n * L),
            delta / (L**2 * (2 + math.log(n) / math.pi) ** 2),
            delta / n**2,
        )
        upper, _ = ccd_bounds(n, delta)
        assert upper == pytest.approx(expected, abs=1e-15)


class TestRcdRates:
    def test_table_values(self):
        assert rcd_rates(100, 0.8)[1] == pytest.approx(0.4095, abs=5e-5)
        assert rcd_rates(100, 0.1)[1] == pytest.approx(0.8336, abs=5e-5)

    def test_zero_delta(self):
        q, r = rcd_rates(100, 0.0)
        assert q == 1.0 and r == 1.0

    def test_q_rate_form(self):
        assert rcd_rates(50, 0.2)[0] == pytest.approx((1 - 0.2 / 50) ** 50, abs=1e-15)


class TestGenericBounds:
    def test_alpha_inverse_L(self):
        consts = quadratic_constants(PermInvariantQuadratic(100, 0.05))
        gb = generic_bounds(consts, 100, alpha=1.0 / consts.L)
        assert gb.beck_tetruashvili == pytest.approx(
            1.0 - consts.mu / (2 * consts.L * 101), rel=1e-12
        )

    def test_optimized_alpha(self):
        # at alpha = 1/(sqrt(n) L) the fixed-step expression evaluates to
        # 1 - mu/(4 sqrt(n) L): both terms of (2/alpha)(1 + n L^2 alpha^2)
        # contribute 2 sqrt(n) L
        consts = quadratic_constants(PermInvariantQuadratic(100, 0.05))
        alpha = 1.0 / (10 * consts.L)
        gb = generic_bounds(consts, 100, alpha=alpha)
        assert gb.beck_tetruashvili == pytest.approx(
            1.0 - consts.mu / (4 * 10 * consts.L), rel=1e-12
        )

    def test_sun_ye_first_term_dominates(self):
        consts = quadratic_constants(PermInvariantQuadratic(100, 0.05))
        gb = generic_bounds(consts, 100, alpha=1.0)
        assert max(gb.sun_ye_terms) == gb.sun_ye_terms[0]
        assert gb.sun_ye == pytest.approx(1.0 - 0.05 / (100 * 95.05), abs=1e-15)

    def test_alpha_out_of_range(self):
        consts = quadratic_constants(PermInvariantQuadratic(10, 0.5))
        with pytest.raises(ValueError):
            generic_bounds(consts, 10, alpha=1.5)
        with pytest.raises(ValueError):
            generic_bounds(consts, 10, alpha=0.0)


class TestSdRate:
    def test_plugin_value(self):
        consts = quadratic_constants(PermInvariantQuadratic(100, 0.05))
        assert sd_rate(consts) == pytest.approx(1.0 - 0.05 / 95.05, abs=1e-15)

    def test_identity_gives_zero(self):
        consts = quadratic_constants(PermInvariantQuadratic(5, 1.0))
        assert sd_rate(consts) == 0.0


class TestEmpiricalRate:
    def test_exact_geometric_sequence(self):
        f = 0.9 ** np.arange(25)
        assert empirical_rate(_traj(f)) == pytest.approx(0.9, abs=1e-12)

    def test_window_parameter(self):
        f = 0.8 ** np.arange(8)
        assert empirical_rate(_traj(f), window=5) == pytest.approx(0.8, abs=1e-12)

    def test_insufficient_epochs(self):
        with pytest.raises(ValueError):
            empirical_rate(_traj(0.9 ** np.arange(10)))

    def test_zero_in_window(self):
        f = np.concatenate([0.9 ** np.arange(12), [0.0]])
        with pytest.raises(ValueError):
            empirical_rate(_traj(f))

    def test_ccd_run_converges_to_spectral_prediction(self):
        rng = np.random.default_rng(13)
        traj = run(
            PermInvariantQuadratic(100, 0.5),
            OrderingPolicy("ccd"),
            rng.standard_normal(100),
            tol=1e-8,
            seed=0,
        )
        rho2 = spectral_radius(closed_form_C(100, 0.5)) ** 2
        assert abs(empirical_rate(traj) - rho2) < 1e-3


class TestRcdOneStepExample:
    def test_small_case(self):
        f0, f1 = rcd_one_step_example(4, 0.1)
        assert (f0, f1) == (pytest.approx(0.2), pytest.approx(0.195))

    def test_exact_ratio(self):
        f0, f1 = rcd_one_step_example(100, 0.5)
        assert (f0, f1) == (pytest.approx(25.0), pytest.approx(24.875))
        assert f1 / f0 == pytest.approx(1.0 - 0.5 / 100, abs=1e-15)

    def test_degenerate_delta(self):
        assert rcd_one_step_example(4, 0.0) == (0.0, 0.0)

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError):
            rcd_one_step_example(5, 0.1)

    def test_matches_simulation_for_every_coordinate(self):
        from cdlab import apply_coordinate_step, coordinate_gradient, init_state, objective

        n, delta = 4, 0.1
        model = PermInvariantQuadratic(n, delta)
        x = np.array([(-1.0) ** (i + 1) for i in range(n)])
        f0, f1 = rcd_one_step_example(n, delta)
        assert objective(model, x) == pytest.approx(f0, abs=1e-15)
        for i in range(n):
            state = init_state(model, x)
            apply_coordinate_step(model, state, i, coordinate_gradient(model, state, i))
            assert objective(model, state.x) == pytest.approx(f1, abs=1e-14)
