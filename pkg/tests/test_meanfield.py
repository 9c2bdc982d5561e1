import numpy as np
import pytest

import synccool as sc
from synccool.errors import InvalidParameterError


def spin_state(x, p, s, z, t=0.0):
    return sc.MeanFieldState(t=t, x=np.asarray(x, float), p=np.asarray(p, float),
                             s=np.asarray(s, complex), z=np.asarray(z, float))


class TestDerivatives:
    def test_dark_manifold_fixed_point(self, fig_params):
        n = fig_params.n_atoms
        st = spin_state(np.linspace(0, 6, n), np.zeros(n), np.zeros(n), np.zeros(n))
        dx, dp, ds, dz = sc.meanfield_derivatives(st, fig_params)
        assert np.all(ds == 0.0)
        assert np.all(dp == 0.0)
        assert np.allclose(dz, fig_params.w_pump)

    def test_nodes_decouple(self, fig_params):
        n = fig_params.n_atoms
        x = np.full(n, np.pi / 2)
        s = 0.2 * np.exp(1j * np.linspace(0, 3, n))
        z = np.full(n, 0.3)
        st = spin_state(x, np.zeros(n), s, z)
        dx, dp, ds, dz = sc.meanfield_derivatives(st, fig_params)
        # cos = 0 (to float rounding): dipoles just decay at w/2, z pumps up
        assert np.allclose(ds, -0.5 * fig_params.w_pump * s, atol=1e-14)
        assert np.allclose(dz, fig_params.w_pump * (1 - z), atol=1e-13)
        assert np.max(np.abs(dp)) < 1e-15

    def test_ballistic_position(self, fig_params):
        n = fig_params.n_atoms
        p = np.linspace(-2, 2, n)
        st = spin_state(np.zeros(n), p, np.zeros(n), np.ones(n))
        dx, _, _, _ = sc.meanfield_derivatives(st, fig_params)
        assert np.allclose(dx, p / sc.MASS)

    def test_stationary_profile_rotates_rigidly(self, fig_params):
        # spins initialized on the adiabatic profile with frozen positions
        # rotate at omega0 = w delta/kappa without changing amplitude
        n = 64
        rng = np.random.default_rng(42)
        x = rng.uniform(0, 2 * np.pi, n)
        x2 = sc.solve_x2_density(fig_params.w_pump, fig_params.n_gamma_c, x)
        assert x2 > 0
        s0, z0 = sc.profiles_s0_z0(x, x2, fig_params.w_pump, fig_params.n_gamma_c)
        st = spin_state(x, np.zeros(n), s0.astype(complex), z0)
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=1.0, sample_every=0.05)
        series, final, _ = sc.meanfield_simulate(fig_params, cfg, initial=st,
                                                 freeze_positions=True)
        # amplitude pinned over 10/w and beyond
        assert np.max(np.abs(series.channels["x_abs2"] - x2)) < 1e-6
        # phase drift linear in t at rate |omega0|
        phases = np.unwrap(series.channels["arg_x"])
        rate = np.polyfit(series.times, phases, 1)[0]
        assert abs(rate) == pytest.approx(fig_params.omega0, rel=1e-3)
        residual = phases - np.polyval(np.polyfit(series.times, phases, 1),
                                       series.times)
        assert np.max(np.abs(residual)) < 1e-3

    def test_phase_covariance(self, fig_params):
        n = 32
        rng = np.random.default_rng(7)
        x = rng.uniform(0, 2 * np.pi, n)
        p = rng.normal(0, 1, n)
        s = 0.1 * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        z = np.full(n, 0.9)
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=1.0, sample_every=0.25)
        base, base_final, _ = sc.meanfield_simulate(
            fig_params, cfg, initial=spin_state(x, p, s, z))
        theta = 1.234
        rot, rot_final, _ = sc.meanfield_simulate(
            fig_params, cfg, initial=spin_state(x, p, s * np.exp(1j * theta), z))
        # |X|, <p^2>, z histories identical; X itself rotated by theta
        for ch in ("x_abs2", "p2_mean", "z_mean"):
            assert np.allclose(rot.channels[ch], base.channels[ch],
                               rtol=1e-12, atol=1e-12)
        assert np.allclose(rot_final.s, base_final.s * np.exp(1j * theta),
                           rtol=1e-12, atol=1e-12)
        assert np.allclose(rot_final.z, base_final.z, rtol=1e-12, atol=1e-13)


class TestSimulate:
    def test_zero_seed_stays_dark(self, fig_params):
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=5.0, sample_every=1.0)
        ic = sc.InitialCondition(p2_initial=5.0, dipole_seed_eps=0.0)
        series, final, _ = sc.meanfield_simulate(fig_params, cfg, ic, seed=1)
        assert np.all(series.channels["x_abs2"] == 0.0)
        # no synchronization, no cooling
        assert series.channels["p2_mean"][-1] == pytest.approx(
            series.channels["p2_mean"][0], rel=1e-10)

    def test_seeded_run_cools_and_synchronizes(self, fig_params):
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=60.0, sample_every=1.0)
        ic = sc.InitialCondition(p2_initial=5.0)
        series, final, _ = sc.meanfield_simulate(fig_params, cfg, ic, seed=2)
        assert series.channels["p2_mean"][-1] < 0.4 * series.channels["p2_mean"][0]
        late_x2 = np.mean(series.channels["x_abs2"][-10:])
        assert 0.02 < late_x2 < 0.12

    def test_determinism(self, fig_params):
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=2.0, sample_every=0.5)
        ic = sc.InitialCondition(p2_initial=5.0)
        a, _, _ = sc.meanfield_simulate(fig_params, cfg, ic, seed=11)
        b, _, _ = sc.meanfield_simulate(fig_params, cfg, ic, seed=11)
        for ch in a.channels:
            assert np.array_equal(a.channels[ch], b.channels[ch])

    def test_rk4_fourth_order(self, fig_params):
        # frozen-position spin trajectory: Richardson ratio ~ 2^4
        n = 24
        rng = np.random.default_rng(3)
        x = rng.uniform(0, 2 * np.pi, n)
        s = 0.05 * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        z = np.full(n, np.sqrt(1 - 4 * 0.05**2))
        st = spin_state(x, np.zeros(n), s, z)

        def run(dt):
            cfg = sc.IntegrationConfig(dt=dt, t_end=0.48, sample_every=0.48)
            _, final, _ = sc.meanfield_simulate(fig_params, cfg, initial=st,
                                                freeze_positions=True)
            return np.concatenate([final.s.view(float), final.z])

        e12 = np.linalg.norm(run(0.02) - run(0.01))
        e23 = np.linalg.norm(run(0.01) - run(0.005))
        assert 11.0 < e12 / e23 < 21.0

    def test_pinned_relaxes_to_closed_form(self, fig_params):
        # frozen antinode lattice: |X|^2 relaxes to the pinned formula
        n = 64
        x = np.where(np.arange(n) % 2 == 0, 0.0, np.pi)
        rng = np.random.default_rng(4)
        s = 1e-3 * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        z = np.full(n, np.sqrt(1 - 4e-6))
        st = spin_state(x, np.zeros(n), s, z)
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=40.0, sample_every=5.0)
        series, _, _ = sc.meanfield_simulate(fig_params, cfg, initial=st,
                                             freeze_positions=True)
        target = sc.solve_x2_pinned(fig_params.w_pump, fig_params.n_gamma_c, 1.0)
        assert abs(series.channels["x_abs2"][-1] - target) < 1e-4

    def test_bloch_containment_validated_along_run(self, fig_params):
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=10.0, sample_every=0.5)
        ic = sc.InitialCondition(p2_initial=5.0)
        series, final, _ = sc.meanfield_simulate(fig_params, cfg, ic, seed=5)
        final.validate()
        r = 4 * np.abs(final.s) ** 2 + final.z**2
        assert np.all(r <= 1 + 1e-6)
        assert np.all(final.z <= 1 + 1e-8) and np.all(final.z >= -1 - 1e-8)

    def test_snapshots(self, fig_params):
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=2.0, sample_every=0.5,
                                   snapshot_times=(1.0,))
        ic = sc.InitialCondition(p2_initial=5.0)
        _, _, snaps = sc.meanfield_simulate(fig_params, cfg, ic, seed=6)
        assert list(snaps) == [1.0]
        assert snaps[1.0]["s"].shape == (fig_params.n_atoms,)

    def test_requires_ic_or_initial(self, fig_params):
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=1.0)
        with pytest.raises(InvalidParameterError):
            sc.meanfield_simulate(fig_params, cfg)


class TestMeanfieldXdagX:
    def test_matches_semiclassical_on_factorized_state(self, fig_params):
        # <Xdag X> under mean-field factorization equals the correlation-matrix
        # definition with C = s* s^T off-diagonal and populations on the diagonal
        rng = np.random.default_rng(8)
        n = 20
        x = rng.uniform(0, 2 * np.pi, n)
        s = 0.3 * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        z = rng.uniform(-0.3, 0.8, n)
        st = spin_state(x, np.zeros(n), s, z)
        corr = np.outer(s.conj(), s)
        np.fill_diagonal(corr, (1 + z) / 2)
        direct = sc.xdagx_from_correlations(x, corr)
        assert sc.meanfield_xdagx(st) == pytest.approx(direct, rel=1e-12)

    def test_reduces_to_x_abs2_for_large_n(self):
        par = sc.PhysicalParams(n_atoms=4000, kappa=780.0, delta=390.0,
                                w_pump=10.0, n_gamma_c=40.0)
        rng = np.random.default_rng(9)
        n = par.n_atoms
        x = rng.uniform(0, 2 * np.pi, n)
        s = np.full(n, 0.25 + 0.1j)
        z = np.full(n, 0.5)
        st = spin_state(x, np.zeros(n), s, z)
        big_x = np.mean(s * np.cos(x))
        assert sc.meanfield_xdagx(st) == pytest.approx(abs(big_x) ** 2, abs=2e-4)


class TestAgainstSemiclassical:
    def test_early_time_cooling_agrees(self, fig_params):
        # both engines from the all-excited thermal start: once the seeded
        # mean-field dipoles have locked (a few 1/w), the <p^2> histories
        # track each other into the common plateau
        ic = sc.InitialCondition(p2_initial=5.0)
        cfg = sc.IntegrationConfig(dt=2e-3, t_end=20.0, sample_every=1.0)
        res = sc.simulate_ensemble(fig_params, cfg, ic, n_traj=8, master_seed=8)
        mf = np.mean([sc.meanfield_simulate(fig_params, cfg, ic, seed=100 + k)[0]
                      .channels["p2_mean"] for k in range(8)], axis=0)
        scv = res.series.channels["p2_mean"]
        t = res.series.times
        late = t >= 6.0
        assert np.all(np.abs(mf[late] - scv[late]) / scv[late] < 0.35)
        # both have cooled well below the initial width by then
        assert scv[t == 10.0][0] < 1.2 and mf[t == 10.0][0] < 1.2
