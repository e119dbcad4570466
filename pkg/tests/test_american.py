"""Penalized American solve: ordering, obstacle bounds, boundary, residuals."""
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import BENCH_KOU, BENCH_MERTON, STRIKE, bench_spec
from levypide.american import (
    LcpReport,
    PenaltyConfig,
    PicardError,
    exercise_asymptote,
    extract_boundary,
    boundary_to_csv,
    lcp_residual,
    penalty_term,
    solve_american_penalized,
)
from levypide.bs import payoff
from levypide.levy import Kou, NoJumps
from levypide.pide import GridSpec, solve_european


@pytest.fixture(scope="module")
def eps_sweep():
    """Lognormal-jump benchmark at r = 0.1 solved at two penalty strengths."""
    grid = GridSpec()
    spec = bench_spec(rate=0.1)
    return {
        eps: solve_american_penalized(spec, BENCH_MERTON, grid, PenaltyConfig(epsilon=eps))
        for eps in (1e-2, 1e-3)
    }


def obstacle_violation(surface):
    spec = surface.spec
    w0 = payoff(spec, spec.strike * np.exp(surface.xs))
    worst = 0.0
    for k, tau in enumerate(surface.taus):
        w = math.exp(spec.rate * tau) * w0
        worst = max(worst, float(np.max(w - surface.u[k])))
    return worst


class TestPenaltyConfig:
    @pytest.mark.parametrize(
        "kw", [{"epsilon": 0.0}, {"max_picard": 0}, {"picard_tol": 0.0}]
    )
    def test_rejects_invalid(self, kw):
        with pytest.raises(ValueError):
            PenaltyConfig(**kw)


class TestPenaltyTerm:
    def test_zero_on_the_obstacle(self):
        spec = bench_spec(rate=0.1)
        xs = np.linspace(-1.0, 1.0, 41)
        w = math.exp(spec.rate * 0.3) * payoff(spec, STRIKE * np.exp(xs))
        assert np.array_equal(penalty_term(w, 0.3, xs, spec, 1e-3), np.zeros_like(xs))

    def test_weighted_shortfall_below_strike(self):
        # a shortfall of eps * c under the obstacle is billed e^x * c, not c:
        # the in-the-money weight is S/K
        spec = bench_spec(rate=0.0)
        xs = np.array([-0.5, -0.1, 0.2])
        w = payoff(spec, STRIKE * np.exp(xs))
        eps, c = 1e-3, 2.7
        out = penalty_term(w - eps * c, 0.0, xs, spec, eps)
        # subtracting the shortfall from w costs ~w * ulp of cancellation
        assert out[0] == pytest.approx(math.exp(-0.5) * c, rel=1e-11)
        assert out[1] == pytest.approx(math.exp(-0.1) * c, rel=1e-11)
        assert out[2] == pytest.approx(c, rel=1e-11)  # weight capped at 1

    def test_excess_above_obstacle_is_free(self):
        spec = bench_spec(rate=0.0)
        xs = np.array([-0.5, 0.0, 0.5])
        w = payoff(spec, STRIKE * np.exp(xs))
        assert np.array_equal(
            penalty_term(w + 5.0, 0.0, xs, spec, 1e-3), np.zeros(3)
        )

    @given(
        st.floats(min_value=-50.0, max_value=150.0),
        st.floats(min_value=-50.0, max_value=150.0),
        st.floats(min_value=-3.0, max_value=3.0),
    )
    def test_lipschitz_bound(self, u1, u2, x):
        spec = bench_spec(rate=0.1)
        xs = np.array([x])
        eps = 1e-2
        g1 = penalty_term(np.array([u1]), 0.4, xs, spec, eps)[0]
        g2 = penalty_term(np.array([u2]), 0.4, xs, spec, eps)[0]
        assert abs(g1 - g2) <= abs(u1 - u2) / eps + 1e-9

    def test_rejects_nonpositive_eps(self):
        spec = bench_spec()
        with pytest.raises(ValueError):
            penalty_term(np.zeros(3), 0.0, np.zeros(3), spec, 0.0)


class TestExerciseAsymptote:
    def test_branches(self):
        fn = exercise_asymptote(bench_spec(rate=0.1))
        out = fn(np.array([-2.0, -0.3, 0.0, 1.0]), 0.5)
        grow = math.exp(0.05)
        assert out[0] == pytest.approx(100.0 * grow * (1.0 - math.exp(-2.0)))
        assert out[1] == pytest.approx(100.0 * grow * (1.0 - math.exp(-0.3)))
        assert out[2] == 0.0 and out[3] == 0.0


class TestSolveAmerican:
    def test_no_exercise_premium_without_rate_or_up_moves(self):
        # r = 0 and downward-only jumps: holding dominates exercising, so the
        # penalty never activates and the two solves agree exactly
        spec = bench_spec(rate=0.0)
        model = Kou(lam=0.1, theta=0.0, lam_plus=3.0, lam_minus=2.0)
        grid = GridSpec()
        am = solve_american_penalized(spec, model, grid)
        eu = solve_european(spec, model, grid)
        assert np.max(np.abs(am.u - eu.u)) <= 1e-9

    def test_dominates_european_same_grid(self, eps_sweep):
        eu = solve_european(bench_spec(rate=0.1), BENCH_MERTON, GridSpec())
        assert float(np.min(eps_sweep[1e-3].u - eu.u)) >= -1e-8

    def test_early_exercise_premium_for_plain_diffusion(self):
        spec = bench_spec(rate=0.1, sigma=0.12)
        grid = GridSpec()
        am = solve_american_penalized(spec, NoJumps(), grid)
        eu = solve_european(spec, NoJumps(), grid)
        atm = am.price_at(0.0, 100.0)
        assert atm >= 1.29196  # European closed-form floor
        assert 1.8 < atm < 2.6
        assert np.max(am.u - eu.u) > 0.5

    def test_tightening_the_penalty_never_lowers_the_price(self, eps_sweep):
        assert float(np.min(eps_sweep[1e-3].u - eps_sweep[1e-2].u)) >= -1e-8

    def test_obstacle_shortfall_shrinks_with_eps(self, eps_sweep):
        v_loose = obstacle_violation(eps_sweep[1e-2])
        v_tight = obstacle_violation(eps_sweep[1e-3])
        assert v_loose / v_tight >= 5.0

    def test_put_only(self):
        with pytest.raises(ValueError, match="put"):
            solve_american_penalized(bench_spec(kind="call"), NoJumps(), GridSpec())

    def test_warns_when_structural_condition_fails(self):
        # zero rate cannot absorb the upward-jump budget of the lognormal bench
        with pytest.warns(RuntimeWarning, match="structural condition"):
            solve_american_penalized(bench_spec(rate=0.0), BENCH_MERTON, GridSpec())

    def test_silent_when_structural_condition_holds(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            solve_american_penalized(bench_spec(rate=0.1), BENCH_MERTON, GridSpec())

    def test_reports_stalled_iteration(self):
        cfg = PenaltyConfig(max_picard=1, picard_tol=1e-15)
        with pytest.raises(PicardError) as exc:
            solve_american_penalized(bench_spec(rate=0.1), NoJumps(), GridSpec(), cfg)
        err = exc.value
        assert err.iterations == 1
        assert err.gap > 1e-15
        assert -4.0 <= err.x <= 4.0
        assert "sweeps" in str(err)


class TestExerciseBoundary:
    def test_boundary_shape(self, eps_sweep):
        b = extract_boundary(eps_sweep[1e-3])
        assert b.s_f[0] == STRIKE  # at expiry every in-the-money node exercises
        assert not np.any(np.isnan(b.s_f))
        assert np.all(b.s_f > 0.0) and np.all(b.s_f <= STRIKE)
        assert np.all(np.diff(b.s_f) <= 1e-12)  # recedes as maturity grows
        assert b.s_f[-1] < 90.0

    def test_csv_round_trip(self, tmp_path, eps_sweep):
        b = extract_boundary(eps_sweep[1e-3])
        path = tmp_path / "boundary.csv"
        boundary_to_csv(b, str(path))
        rows = path.read_text().strip().split("\n")
        assert rows[0] == "tau,s_f"
        assert len(rows) == len(b.taus) + 1
        tau0, s0 = rows[1].split(",")
        assert float(tau0) == 0.0 and float(s0) == STRIKE


class TestLcpResidual:
    def test_european_surface_solves_the_equation(self):
        spec = bench_spec(rate=0.1, sigma=0.12)
        grid = GridSpec()
        eu = solve_european(spec, NoJumps(), grid)
        rep = lcp_residual(eu, spec, NoJumps(), grid, boundary="european")
        assert isinstance(rep, LcpReport)
        assert rep.pde_violation <= 1e-9
        assert rep.pde_residual_sup <= 1e-9

    def test_penalized_surface_at_zero_rate(self):
        # with r = 0 the full complementarity system holds to roundoff
        spec = bench_spec(rate=0.0)
        grid = GridSpec()
        with pytest.warns(RuntimeWarning):
            am = solve_american_penalized(spec, BENCH_MERTON, grid)
        rep = lcp_residual(am, spec, BENCH_MERTON, grid)
        assert rep.obstacle_violation <= 1e-9
        assert rep.pde_violation <= 1e-9
        assert rep.max_complementarity <= 1e-9

    def test_rejects_unknown_boundary(self, eps_sweep):
        with pytest.raises(ValueError, match="boundary"):
            lcp_residual(
                eps_sweep[1e-3], bench_spec(rate=0.1), BENCH_MERTON, GridSpec(),
                boundary="periodic",
            )
