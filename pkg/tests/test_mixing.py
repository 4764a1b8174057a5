"""Tests for surface sampling, observables, and correlation estimates."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from ratner_decay import _kernels
from ratner_decay.mixing import (
    MU_F,
    SHARD_SIZE,
    Observable,
    SurfacePoint,
    builtin_observable,
    estimate_correlation,
    flow_point,
    iwasawa_lift,
    observable_inner,
    observable_mean,
    reduce_to_fundamental_domain,
    resolve_threads,
    sample_base_point,
    sample_base_points,
    verify_corollary,
)
from ratner_decay.models import GroupElement


class FakeRng:
    """Deterministic stand-in: uniform() returns a fixed quantile."""

    def __init__(self, theta_quantile, u_value):
        self.theta_quantile = theta_quantile
        self.u_value = u_value

    def uniform(self, lo, hi, count):
        return np.full(count, lo + (hi - lo) * self.theta_quantile)

    def random(self, count):
        return np.full(count, self.u_value)


@pytest.fixture(scope="module")
def sinx_bump():
    return builtin_observable("sinx-bump")


@pytest.fixture(scope="module")
def cosx_bump():
    return builtin_observable("cosx-bump")


def zero_observable():
    return Observable(
        id="zero",
        values=lambda x, y: np.zeros(np.shape(x)),
        l2_norm=0.0,
        mean_zero_certificate="symmetry",
        y_support=(1.0, 2.0),
    )


class TestSurfacePoint:
    def test_valid_points(self):
        assert SurfacePoint(0.0, 1.0).as_complex() == 1j
        SurfacePoint(0.5, math.sqrt(0.75))
        SurfacePoint(-0.3, 100.0)

    @pytest.mark.parametrize("x, y", [(0.6, 2.0), (0.0, 0.9), (0.3, 0.8), (0.0, -1.0)])
    def test_rejects_points_outside_the_domain(self, x, y):
        with pytest.raises(ValueError, match="fundamental domain"):
            SurfacePoint(x, y)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            SurfacePoint(math.nan, 2.0)


class TestSampler:
    def test_midpoint_quantiles_give_the_corner_values(self):
        # theta at the midpoint of its range gives x = sin 0 = 0; u = 0
        # inverts to the lower boundary y = sqrt(1 - x^2) = 1.
        p = sample_base_point(FakeRng(0.5, 0.0))
        assert (p.x, p.y) == (0.0, 1.0)

    def test_u_zero_lands_on_the_boundary_arc(self):
        p = sample_base_point(FakeRng(1.0, 0.0))
        assert p.x == pytest.approx(0.5, rel=1e-15)
        assert p.x**2 + p.y**2 == pytest.approx(1.0, rel=1e-15)

    def test_draw_order_is_theta_then_u(self):
        class Script:
            def __init__(self):
                self.calls = []

            def uniform(self, lo, hi, count):
                self.calls.append("uniform")
                return np.zeros(count)

            def random(self, count):
                self.calls.append("random")
                return np.zeros(count)

        rng = Script()
        sample_base_points(rng, 3)
        assert rng.calls == ["uniform", "random"]

    def test_samples_lie_in_the_fundamental_domain(self):
        rng = np.random.default_rng(1)
        x, y = sample_base_points(rng, 50_000)
        assert np.all(np.abs(x) <= 0.5)
        assert np.all(x * x + y * y >= 1.0 - 1e-12)


# 20 x 20 binning of F used by the distribution tests. The last y-bin is
# the whole cusp; the first few catch the region near the boundary arc.
X_EDGES = np.linspace(-0.5, 0.5, 21)
Y_EDGES = np.array(
    [math.sqrt(3.0) / 2.0, 0.88, 0.90, 0.92, 0.95, 1.0, 1.05, 1.1, 1.15, 1.2,
     1.3, 1.4, 1.5, 1.65, 1.8, 2.0, 2.3, 2.8, 3.5, 5.0, np.inf]
)


def cell_probabilities():
    """Per-cell mass of the normalized area measure, by 1-d quadrature."""
    probs = np.zeros((20, 20))
    for i in range(20):
        x0, x1 = X_EDGES[i], X_EDGES[i + 1]
        for j in range(20):
            y0, y1 = Y_EDGES[j], Y_EDGES[j + 1]
            top = 0.0 if np.isinf(y1) else 1.0 / y1

            def height(x):
                lo = max(y0, math.sqrt(max(1.0 - x * x, 0.0)))
                return max(1.0 / lo - top, 0.0)

            mass, _ = integrate.quad(height, x0, x1, limit=200)
            probs[i, j] = mass / MU_F
    return probs


def chi_square_statistic(x, y, probs):
    """Merge low-expectation cells into a pool, return (stat, dof).

    Cells fully below the boundary arc have exactly zero mass and must
    stay empty; cells with small positive mass are pooled so the
    chi-square approximation stays valid.
    """
    n = x.size
    xi = np.clip(np.digitize(x, X_EDGES) - 1, 0, 19)
    yi = np.clip(np.digitize(y, Y_EDGES) - 1, 0, 19)
    observed = np.zeros((20, 20))
    np.add.at(observed, (xi, yi), 1.0)

    expected = probs * n
    empty = expected == 0.0
    assert np.all(observed[empty] == 0.0), "samples landed below the boundary arc"
    keep = expected >= 5.0
    stat = float(np.sum((observed[keep] - expected[keep]) ** 2 / expected[keep]))
    dof = int(np.sum(keep)) - 1
    small = ~keep & ~empty
    pooled_expected = float(np.sum(expected[small]))
    if pooled_expected > 0.0:
        pooled_observed = float(np.sum(observed[small]))
        stat += (pooled_observed - pooled_expected) ** 2 / pooled_expected
        dof += 1
    return stat, dof


@pytest.fixture(scope="module")
def bin_probs():
    probs = cell_probabilities()
    assert float(np.sum(probs)) == pytest.approx(1.0, abs=1e-9)
    return probs


class TestDistribution:
    def test_base_sampler_matches_the_density(self, bin_probs):
        rng = np.random.default_rng(2026)
        x, y = sample_base_points(rng, 1_000_000)
        stat, dof = chi_square_statistic(x, y, bin_probs)
        assert stat < stats.chi2.ppf(1.0 - 1e-3, dof)

    def test_right_translated_frames_stay_haar_distributed(self, bin_probs):
        """Right translation by a(t) preserves the frame measure, so the
        translated base points pass the same chi-square test."""
        rng = np.random.default_rng(2027)
        x, y = sample_base_points(rng, 1_000_000)
        fiber = rng.uniform(0.0, 2.0 * math.pi, x.size)
        sq = np.sqrt(y)
        inv = 1.0 / sq
        xs = x * inv
        cf, sf = np.cos(fiber), np.sin(fiber)
        h11 = sq * cf - xs * sf
        h12 = sq * sf + xs * cf
        h21 = -inv * sf
        h22 = inv * cf
        et, emt = math.exp(2.0), math.exp(-2.0)
        fx, fy = _kernels.flow_points(h11 * et, h12 * emt, h21 * et, h22 * emt, 0.0)
        stat, dof = chi_square_statistic(fx, fy, bin_probs)
        assert stat < stats.chi2.ppf(1.0 - 1e-3, dof)

    def test_left_flow_scales_base_points_into_the_cusp(self):
        # Left translation by a(t) sends the base point z to e^{2t} z; for
        # t = 2 the scaled point needs no inversion, so the flowed y is
        # exactly e^4 y (up to fold rounding) and far above the bump
        # supports. This is what makes the t >= 1 correlation rows of the
        # builtin observables identically zero.
        rng = np.random.default_rng(3)
        x, y = sample_base_points(rng, 10_000)
        fiber = rng.uniform(0.0, 2.0 * math.pi, x.size)
        sq = np.sqrt(y)
        inv = 1.0 / sq
        xs = x * inv
        cf, sf = np.cos(fiber), np.sin(fiber)
        fx, fy = _kernels.flow_points(
            sq * cf - xs * sf, sq * sf + xs * cf, -inv * sf, inv * cf, 2.0
        )
        assert np.all(fy >= math.exp(4.0) * math.sqrt(3.0) / 2.0 * (1.0 - 1e-12))
        assert np.max(np.abs(fy / (math.exp(4.0) * y) - 1.0)) < 1e-9


class TestLiftAndFlow:
    def test_lift_of_the_origin_is_the_identity(self):
        g = iwasawa_lift(SurfacePoint(0.0, 1.0), 0.0)
        assert (g.a, g.b, g.c, g.d) == (1.0, 0.0, 0.0, 1.0)

    def test_lift_scaling(self):
        g = iwasawa_lift(SurfacePoint(0.0, 4.0), 0.0)
        assert (g.a, g.b, g.c, g.d) == (2.0, 0.0, 0.0, 0.5)

    def test_lift_projects_back_to_its_point(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            p = sample_base_point(rng)
            theta = rng.uniform(0.0, 2.0 * math.pi)
            g = iwasawa_lift(p, theta)
            z = (g.a * 1j + g.b) / (g.c * 1j + g.d)
            assert z.real == pytest.approx(p.x, abs=1e-12)
            assert z.imag == pytest.approx(p.y, rel=1e-12)

    def test_flow_at_zero_reduces_the_base_point(self):
        p = SurfacePoint(0.25, 1.5)
        g = iwasawa_lift(p, 0.7)
        q = flow_point(g, 0.0)
        assert q.x == pytest.approx(p.x, abs=1e-12)
        assert q.y == pytest.approx(p.y, rel=1e-12)

    def test_flow_is_independent_of_the_fiber_angle(self):
        p = SurfacePoint(0.3, 1.2)
        a = flow_point(iwasawa_lift(p, 1.0), 2.0)
        b = flow_point(iwasawa_lift(p, 4.5), 2.0)
        assert a.x == pytest.approx(b.x, abs=1e-12)
        assert a.y == pytest.approx(b.y, rel=1e-12)

    def test_flow_semigroup_via_group_composition(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            g = iwasawa_lift(sample_base_point(rng), rng.uniform(0.0, 2.0 * math.pi))
            s, t = rng.uniform(0.2, 1.5, 2)
            direct = flow_point(g, s + t)
            staged = flow_point(GroupElement.diagonal_flow(t) @ g, s)
            assert direct.x == pytest.approx(staged.x, abs=1e-9)
            assert direct.y == pytest.approx(staged.y, rel=1e-9)

    def test_reduce_accepts_complex_and_rejects_lower_half(self):
        p = reduce_to_fundamental_domain(0.1 + 0.1j)
        assert p.x == pytest.approx(0.0, abs=1e-12)
        assert p.y == pytest.approx(5.0, rel=1e-12)
        with pytest.raises(ValueError, match="upper half plane"):
            reduce_to_fundamental_domain(1.0 - 2.0j)


class TestObservables:
    def test_builtin_norm_matches_the_factored_quadrature(self, sinx_bump):
        # The support sits above the arc, so the squared norm factors:
        # (3/pi) * int sin^2(2 pi x) dx * int_{1.1}^{4} h(y)^2 / y^2 dy.
        def h_sq_over_y2(y):
            return math.exp(-2.0 / ((y - 1.1) * (4.0 - y))) / (y * y)

        y_part, _ = integrate.quad(h_sq_over_y2, 1.1, 4.0, epsabs=1e-14)
        expected = math.sqrt(0.5 * y_part / MU_F)
        assert sinx_bump.l2_norm == pytest.approx(expected, rel=1e-9)

    def test_cos_partner_has_the_same_norm(self, sinx_bump, cosx_bump):
        assert cosx_bump.l2_norm == pytest.approx(sinx_bump.l2_norm, rel=1e-12)
        assert cosx_bump.mean_zero_certificate == "numeric"
        assert sinx_bump.mean_zero_certificate == "symmetry"

    def test_means_vanish(self, sinx_bump, cosx_bump):
        assert observable_mean(sinx_bump) == pytest.approx(0.0, abs=1e-10)
        assert observable_mean(cosx_bump) == pytest.approx(0.0, abs=1e-10)

    def test_partners_are_orthogonal(self, sinx_bump, cosx_bump):
        assert observable_inner(sinx_bump, cosx_bump) == pytest.approx(0.0, abs=1e-10)

    def test_evaluate_matches_values(self, sinx_bump):
        p = SurfacePoint(0.2, 2.0)
        direct = float(sinx_bump.values(np.array([0.2]), np.array([2.0]))[0])
        assert sinx_bump.evaluate(p) == direct
        assert direct == pytest.approx(
            math.sin(0.4 * math.pi) * math.exp(-1.0 / (0.9 * 2.0)), rel=1e-12
        )

    def test_bump_vanishes_outside_its_support(self, sinx_bump):
        vals = sinx_bump.values(np.array([0.2, 0.2, 0.2]), np.array([1.05, 4.0, 17.0]))
        assert np.array_equal(vals, np.zeros(3))

    def test_unknown_builtin_is_rejected(self):
        with pytest.raises(ValueError, match="unknown builtin"):
            builtin_observable("tanh-bump")

    def test_observable_validation(self):
        with pytest.raises(ValueError, match="certificate"):
            Observable("bad", lambda x, y: x, 1.0, "sworn-affidavit")
        with pytest.raises(ValueError, match="l2_norm"):
            Observable("bad", lambda x, y: x, -1.0, "symmetry")


class TestCorrelation:
    def test_self_correlation_at_zero_matches_the_norm(self, sinx_bump):
        report = estimate_correlation(sinx_bump, sinx_bump, [0.0], 100_000, 7)
        row = report.rows[0]
        assert row.stderr > 0.0
        assert abs(row.estimate - sinx_bump.l2_norm**2) <= 3.0 * row.stderr
        assert row.bound is None and row.passed is None

    def test_odd_times_even_vanishes_at_zero(self, sinx_bump, cosx_bump):
        row = estimate_correlation(sinx_bump, cosx_bump, [0.0], 100_000, 7).rows[0]
        assert abs(row.estimate) <= 3.0 * row.stderr

    def test_stderr_follows_the_clt_rate(self, sinx_bump):
        small = estimate_correlation(sinx_bump, sinx_bump, [0.0], 50_000, 123).rows[0]
        large = estimate_correlation(sinx_bump, sinx_bump, [0.0], 200_000, 123).rows[0]
        assert small.stderr / large.stderr == pytest.approx(2.0, rel=0.2)

    def test_overlapping_supports_give_a_nonzero_estimate(self, sinx_bump):
        row = estimate_correlation(sinx_bump, sinx_bump, [0.2], 50_000, 3).rows[0]
        assert abs(row.estimate) > 10.0 * row.stderr

    def test_results_are_bit_reproducible(self, sinx_bump):
        kwargs = dict(t_grid=[1.0, 2.0], samples=150_000, seed=42, lambda1=-1.0)
        base = verify_corollary(sinx_bump, sinx_bump, **kwargs)
        rerun = verify_corollary(sinx_bump, sinx_bump, **kwargs)
        threaded = verify_corollary(sinx_bump, sinx_bump, **kwargs, threads=4)
        python_backend = verify_corollary(sinx_bump, sinx_bump, **kwargs, backend="python")
        assert base.rows == rerun.rows
        assert base.rows == threaded.rows
        assert base.rows == python_backend.rows

    def test_verify_fills_bounds_and_passes(self, sinx_bump):
        report = verify_corollary(
            sinx_bump, sinx_bump, [1.0, 1.5, 2.0, 2.5, 3.0], 100_000, 42, -1.0
        )
        assert report.all_passed
        assert report.samples == 100_000 and report.seed == 42
        bounds = [row.bound for row in report.rows]
        assert all(b > 0.0 for b in bounds)
        assert bounds == sorted(bounds, reverse=True)
        # The left flow scales base points by e^{2t} >= e^2, past the
        # bump support, so these estimates are identically zero.
        assert all(row.estimate == 0.0 and row.stderr == 0.0 for row in report.rows)

    def test_estimate_only_report_does_not_claim_a_pass(self, sinx_bump):
        report = estimate_correlation(sinx_bump, sinx_bump, [1.0], 10_000, 1)
        assert not report.all_passed

    def test_zero_observable_passes_with_zero_bound(self, sinx_bump):
        report = verify_corollary(sinx_bump, zero_observable(), [1.0, 2.0], 10_000, 5, -1.0)
        assert report.all_passed
        for row in report.rows:
            assert row.estimate == 0.0 and row.stderr == 0.0 and row.bound == 0.0

    def test_uncertified_observable_is_rejected(self, sinx_bump):
        raw = Observable("raw", lambda x, y: x, 1.0, None)
        with pytest.raises(ValueError, match="certificate"):
            estimate_correlation(sinx_bump, raw, [1.0], 10_000, 1)
        with pytest.raises(ValueError, match="certificate"):
            estimate_correlation(raw, sinx_bump, [1.0], 10_000, 1)

    def test_small_sample_counts_are_rejected(self, sinx_bump):
        with pytest.raises(ValueError, match="samples"):
            estimate_correlation(sinx_bump, sinx_bump, [1.0], 9_999, 1)

    def test_early_times_are_rejected_by_verification(self, sinx_bump):
        with pytest.raises(ValueError, match="t >= 1"):
            verify_corollary(sinx_bump, sinx_bump, [0.5], 10_000, 1, -1.0)

    def test_time_grid_validation(self, sinx_bump):
        with pytest.raises(ValueError, match="at least one"):
            estimate_correlation(sinx_bump, sinx_bump, [], 10_000, 1)
        with pytest.raises(ValueError, match="finite"):
            estimate_correlation(sinx_bump, sinx_bump, [math.inf], 10_000, 1)

    def test_partial_shards_are_handled(self, sinx_bump):
        report = estimate_correlation(sinx_bump, sinx_bump, [0.0], SHARD_SIZE + 4_464, 9)
        assert report.samples == SHARD_SIZE + 4_464
        assert abs(report.rows[0].estimate - sinx_bump.l2_norm**2) <= 4.0 * report.rows[0].stderr


class TestThreads:
    def test_explicit_argument_wins(self, monkeypatch):
        monkeypatch.setenv("RATNER_THREADS", "7")
        assert resolve_threads(3) == 3

    def test_environment_variable_is_honored(self, monkeypatch):
        monkeypatch.setenv("RATNER_THREADS", "5")
        assert resolve_threads() == 5

    def test_default_is_the_cpu_count(self, monkeypatch):
        monkeypatch.delenv("RATNER_THREADS", raising=False)
        assert resolve_threads() >= 1

    def test_invalid_values_are_rejected(self, monkeypatch):
        monkeypatch.setenv("RATNER_THREADS", "many")
        with pytest.raises(ValueError, match="RATNER_THREADS"):
            resolve_threads()
        monkeypatch.delenv("RATNER_THREADS")
        with pytest.raises(ValueError, match="positive"):
            resolve_threads(0)
