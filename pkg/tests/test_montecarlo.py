import math

import numpy as np
import pytest

from fbmprobe.backend import kern
from fbmprobe.dephasing import Coupling, DephasingFamily, visibility
from fbmprobe.metrology import qfi_gamma
from fbmprobe.montecarlo import (EstimationRun, PathSpec, dephasing_phases,
                                 empirical_visibility, identifiable_branch,
                                 mle_gamma, sample_paths,
                                 simulate_measurements)
from fbmprobe.optimize import maximize_gb_over_t
from fbmprobe.specfun import HurstPoint



def fam(g=1.5, lam=1.0, q=1):
    return DephasingFamily(HurstPoint(g), Coupling(lam), exponent_power=q)


class TestSpecs:
    def test_pathspec_validation(self):
        with pytest.raises(ValueError):
            PathSpec(steps=1, horizon=1.0, seed=0)
        with pytest.raises(ValueError):
            PathSpec(steps=16, horizon=0.0, seed=0)
        with pytest.raises(ValueError):
            PathSpec(steps=16, horizon=1.0, seed=0, paths=0)

    def test_times_grid(self):
        spec = PathSpec(steps=4, horizon=2.0, seed=0)
        assert spec.times() == pytest.approx([0.5, 1.0, 1.5, 2.0])

    def test_estimation_run_validation(self):
        with pytest.raises(ValueError):
            EstimationRun(HurstPoint(1.5), Coupling(1.0), 0.0, 10, 10, 0)
        with pytest.raises(ValueError):
            EstimationRun(HurstPoint(1.5), Coupling(1.0), 1.0, 0, 10, 0)


class TestSamplePaths:
    def test_deterministic(self):
        spec = PathSpec(steps=32, horizon=1.0, seed=123, paths=8)
        a = sample_paths(HurstPoint(1.3), spec)
        b = sample_paths(HurstPoint(1.3), spec)
        assert np.array_equal(a, b)
        assert a.shape == (8, 32)

    def test_path_streams_independent_of_batch(self):
        # path j depends only on (seed, j), not on how many paths ran
        small = PathSpec(steps=16, horizon=1.0, seed=5, paths=3)
        large = PathSpec(steps=16, horizon=1.0, seed=5, paths=7)
        a = sample_paths(HurstPoint(1.6), small)
        b = sample_paths(HurstPoint(1.6), large)
        assert np.array_equal(a, b[:3])

    def test_half_hurst_covariance(self):
        # H = 1/2 reduces the covariance to min(t, s)
        spec = PathSpec(steps=32, horizon=2.0, seed=42, paths=10000)
        paths = sample_paths(HurstPoint(1.5), spec)
        ts = spec.times()
        i, j = 7, 26
        n = spec.paths
        chat = float(np.cov(paths[:, i], paths[:, j])[0, 1])
        kii, kjj = ts[i], ts[j]
        kij = min(ts[i], ts[j])
        se = math.sqrt((kii * kjj + kij ** 2) / (n - 1))
        assert abs(chat - kij) <= 3.0 * se

    def test_marginal_variance(self):
        g = 1.8
        spec = PathSpec(steps=16, horizon=1.5, seed=9, paths=10000)
        paths = sample_paths(HurstPoint(g), spec)
        t = spec.times()[-1]
        target = kern.v_gamma(g) * t ** (2.0 * (g - 1.0))
        vhat = float(np.var(paths[:, -1], ddof=1))
        se = target * math.sqrt(2.0 / (spec.paths - 1))
        assert abs(vhat - target) <= 3.0 * se


class TestPhases:
    def test_gaussian_moments(self):
        spec = PathSpec(steps=128, horizon=1.0, seed=21, paths=10000)
        phi = dephasing_phases(fam(1.4, 2.0), spec)
        z = (phi - phi.mean()) / phi.std(ddof=1)
        n = len(phi)
        skew = float(np.mean(z ** 3))
        kurt = float(np.mean(z ** 4) - 3.0)
        assert abs(skew) <= 4.0 * math.sqrt(6.0 / n)
        assert abs(kurt) <= 4.0 * math.sqrt(24.0 / n)

    def test_phase_variance_matches_exponent(self):
        # Var(phi) = beta under either coupling convention
        for q in (1, 2):
            f = fam(1.5, 2.0, q)
            spec = PathSpec(steps=256, horizon=1.0, seed=3, paths=10000)
            phi = dephasing_phases(f, spec)
            b = f.lam_q / 3.0
            se = b * math.sqrt(2.0 / (spec.paths - 1))
            assert abs(float(np.var(phi, ddof=1)) - b) <= 4.0 * se


class TestEmpiricalVisibility:
    def test_central_oracle(self):
        f = fam(1.5, 1.0, q=2)
        spec = PathSpec(steps=512, horizon=1.0, seed=7, paths=10000)
        emp, se = empirical_visibility(f, spec)
        analytic = 0.5 * (1.0 + math.exp(-2.0 / 3.0))
        assert abs(emp - analytic) <= 4.0 * se

    def test_short_time_limit(self):
        spec = PathSpec(steps=128, horizon=1e-6, seed=1, paths=200)
        emp, _ = empirical_visibility(fam(1.5, 1.0), spec)
        assert emp == pytest.approx(1.0, abs=1e-6)

    def test_cross_moment_vanishes(self):
        spec = PathSpec(steps=256, horizon=1.0, seed=17, paths=10000)
        phi = dephasing_phases(fam(1.5, 1.0, q=2), spec)
        cross = np.sin(phi) * np.cos(phi)
        se = float(cross.std(ddof=1)) / math.sqrt(len(cross))
        assert abs(float(cross.mean())) <= 4.0 * se

    def test_requires_paths(self):
        with pytest.raises(ValueError):
            empirical_visibility(fam(), PathSpec(steps=16, horizon=1.0,
                                                 seed=0, paths=10))

    def test_step_convergence_paired(self):
        # halving the grid on the same realizations shifts the estimate
        # by far less than one standard error
        f = fam(1.3, 1.0, q=2)
        spec = PathSpec(steps=512, horizon=1.0, seed=29, paths=10000)
        paths = sample_paths(f.hurst_point, spec)
        c = f.coupling.lam ** (f.exponent_power / 2.0)

        def estimate(cols, steps):
            dt = spec.horizon / steps
            integral = dt * (cols[:, :-1].sum(axis=1) + 0.5 * cols[:, -1])
            vals = np.cos(c * integral) ** 2
            return float(vals.mean()), float(vals.std(ddof=1)) / math.sqrt(
                len(vals))

        m512, se = estimate(paths, 512)
        m256, _ = estimate(paths[:, 1::2], 256)
        assert abs(m512 - m256) < se


class TestSimulateMeasurements:
    def test_saturated_regime(self):
        run = EstimationRun(HurstPoint(1.5), Coupling(1.0), 1e-6, 500, 20, 4)
        counts = simulate_measurements(run)
        assert np.all(counts == 500)

    def test_bernoulli_mean(self):
        run = EstimationRun(HurstPoint(1.4), Coupling(0.5), 1.0, 2000, 400, 8)
        counts = simulate_measurements(run)
        p = visibility(run.family(), run.t)
        se = math.sqrt(p * (1.0 - p) / run.shots / run.trials)
        assert abs(counts.mean() / run.shots - p) <= 4.0 * se

    def test_deterministic(self):
        run = EstimationRun(HurstPoint(1.5), Coupling(1.0), 1.0, 100, 50, 77)
        assert np.array_equal(simulate_measurements(run),
                              simulate_measurements(run))


class TestIdentifiableBranch:
    def test_bracket_contains_design_point(self):
        lo, hi = identifiable_branch(1.0, 0.774, 1.5)
        assert lo <= 1.5 <= hi
        # d beta / d gamma keeps one sign strictly inside
        gs = np.linspace(lo + 1e-4, hi - 1e-4, 50)
        signs = {math.copysign(1.0, kern.dbeta_fn(float(g), 1.0, 0.774))
                 for g in gs}
        assert len(signs) == 1

    def test_partner_root_is_outside_branch(self):
        # the equal-likelihood partner of the design point must be cut off
        lo, hi = identifiable_branch(1.0, 0.774, 1.5)
        assert hi < 1.859


class TestMleGamma:
    def _run(self, t, seed=0, lam=1.0, shots=10000, trials=200):
        return EstimationRun(HurstPoint(1.5), Coupling(lam), t, shots,
                             trials, seed)

    def test_efficiency_at_optimal_time(self):
        f = fam()
        tau = maximize_gb_over_t(f).t_star
        run = self._run(tau)
        res = mle_gamma(simulate_measurements(run), run)
        crb = 1.0 / (run.shots * qfi_gamma(f, tau))
        assert res.boundary_fraction == 0.0
        assert 0.7 * crb <= res.variance <= 1.5 * crb
        reg = res.estimates[res.regular]
        se_mean = math.sqrt(res.variance / len(reg))
        assert abs(float(reg.mean()) - 1.5) <= 3.0 * se_mean

    def test_no_super_efficiency(self):
        f = fam()
        tau = maximize_gb_over_t(f).t_star
        crb = 1.0 / (10000 * qfi_gamma(f, tau))
        band = math.sqrt(2.0 / 199.0)
        for seed in (0, 1, 2):
            run = self._run(tau, seed=seed)
            res = mle_gamma(simulate_measurements(run), run)
            assert res.variance >= (1.0 - 3.0 * band) * crb

    def test_variance_grows_off_optimum(self):
        tau = maximize_gb_over_t(fam()).t_star
        run_opt = self._run(tau)
        run_late = self._run(2.0 * tau)
        var_opt = mle_gamma(simulate_measurements(run_opt), run_opt).variance
        var_late = mle_gamma(simulate_measurements(run_late),
                             run_late).variance
        assert var_opt < var_late

    def test_saturated_time_all_boundary(self):
        # at 100x the optimal time the visibility is 1/2 exactly in
        # float: the likelihood is flat and every trial is flagged
        tau = maximize_gb_over_t(fam()).t_star
        run = self._run(100.0 * tau, trials=20)
        res = mle_gamma(simulate_measurements(run), run)
        assert res.boundary_fraction == 1.0
        assert math.isnan(res.variance)

    def test_degenerate_counts_flagged(self):
        run = self._run(1e-6, trials=10)  # p ~ 1, all counts saturate
        res = mle_gamma(simulate_measurements(run), run)
        assert res.boundary_fraction == 1.0

    def test_full_interval_hops_between_tied_branches(self):
        # the visibility is not injective over the whole interval; the
        # unrestricted search lands on the exactly tied partner branch in
        # a fraction of trials and the variance blows up
        tau = maximize_gb_over_t(fam()).t_star
        run = self._run(tau)
        counts = simulate_measurements(run)
        res_branch = mle_gamma(counts, run)
        res_full = mle_gamma(counts, run, full_interval=True)
        assert res_full.variance > 10.0 * res_branch.variance
