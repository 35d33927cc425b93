"""Integrator and flow checks against closed-form solutions."""

import numpy as np
import pytest

from enhq.dynamics import (
    IntegratorControls,
    Trajectory,
    classical_toy_solution,
    energy_drift,
    integrate,
    oscillator_flow,
    rotsym_flow,
    rotsym_integrate,
    singularity_report,
    toy_gravity_flow,
)
from enhq.wcp import cprime_closed_form


class TestClosedForm:
    def test_initial_point(self):
        assert classical_toy_solution(-1.0, 1.0, 0.0) == (-1.0, 1.0)

    def test_half_way(self):
        p, q = classical_toy_solution(-1.0, 1.0, 0.5)
        assert (p, q) == pytest.approx((-2.0, 0.25))

    def test_energy_constant(self):
        t = np.linspace(0.0, 0.9, 50)
        p, q = classical_toy_solution(-1.0, 1.0, t)
        assert np.max(np.abs(q * p * p - 1.0)) < 1e-12

    def test_pole_rejected(self):
        with pytest.raises(ValueError):
            classical_toy_solution(-1.0, 1.0, 1.0)

    def test_sampled_solution_has_no_drift(self):
        flow = toy_gravity_flow(hbar=0.0)
        t = np.linspace(0.0, 0.9, 200)
        p, q = classical_toy_solution(-1.0, 1.0, t)
        traj = Trajectory(
            times=t, ps=p, qs=q, energies=q * p * p,
            status="completed", hit_time=None, method="closed-form", dt=0.0,
        )
        assert energy_drift(traj, flow) < 1e-12


class TestOscillator:
    def test_period_return(self):
        flow = oscillator_flow()
        traj = integrate(flow, (1.0, 0.0), 2.0 * np.pi)
        assert abs(traj.ps[-1] - 1.0) < 1e-6
        assert abs(traj.qs[-1]) < 1e-6

    def test_long_run_drift(self):
        flow = oscillator_flow()
        traj = integrate(flow, (1.0, 0.0), 100.0, IntegratorControls(dt=1e-3))
        assert traj.drift < 1e-8

    def test_coarse_run_drifts_more(self):
        flow = oscillator_flow()
        coarse = integrate(flow, (1.0, 0.0), 10.0, IntegratorControls(dt=0.1))
        fine = integrate(flow, (1.0, 0.0), 10.0, IntegratorControls(dt=1e-3))
        assert coarse.drift > fine.drift

    def test_rk_cross_check(self):
        flow = oscillator_flow()
        traj = integrate(flow, (1.0, 0.0), 5.0,
                         IntegratorControls(dt=1e-3, cross_check=True))
        assert traj.meta["cross_check_error"] < 1e-5


class TestToyGravity:
    def test_classical_singularity_hit(self):
        rep = singularity_report(toy_gravity_flow(hbar=0.0), (-1.0, 1.0), 2.0)
        assert rep["status"] == "singularity"
        assert abs(rep["hit_time"] - 1.0) < 1e-4
        assert rep["drift"] < 1e-8

    def test_classical_tracks_closed_form(self):
        flow = toy_gravity_flow(hbar=0.0)
        traj = integrate(flow, (-1.0, 1.0), 0.9)
        p_ref, q_ref = classical_toy_solution(-1.0, 1.0, traj.times)
        assert np.max(np.abs(traj.qs - q_ref)) < 1e-6
        assert np.max(np.abs(traj.ps - p_ref)) < 1e-6

    def test_zero_energy_is_static(self):
        rep = singularity_report(toy_gravity_flow(hbar=0.0), (0.0, 1.0), 2.0)
        assert rep["status"] == "completed"
        assert abs(rep["min_q"] - 1.0) < 1e-12

    def test_enhanced_run_avoids_singularity(self):
        hbar = 1.0
        flow = toy_gravity_flow(hbar=hbar)
        rep = singularity_report(flow, (-1.0, 1.0), 10.0)
        assert rep["status"] == "completed"
        c = hbar**2 * cprime_closed_form(1.0, hbar)
        energy = 1.0 + c
        assert abs(rep["min_q"] * energy - c) < 1e-6
        assert rep["drift"] < 1e-8

    def test_min_q_law_on_hbar_energy_grid(self):
        for hbar in (0.5, 1.0, 2.0):
            c = hbar**2 * cprime_closed_form(2.0, hbar)
            flow = toy_gravity_flow(hbar=hbar, beta=2.0)
            for p0 in (-1.0, -1.5, -2.0):
                energy = p0 * p0 + c
                traj = integrate(flow, (p0, 1.0), 4.0, IntegratorControls(dt=5e-5))
                assert traj.status == "completed"
                assert abs(traj.min_q * energy - c) < 1e-6
                assert traj.drift < 1e-8

    def test_initial_chart_violation(self):
        with pytest.raises(ValueError):
            integrate(toy_gravity_flow(hbar=0.0), (-1.0, -1.0), 1.0)


class TestConvergenceOrder:
    def test_second_order_factor(self):
        # expanding branch (p0 > 0) keeps the step fixed: the contracting
        # branch engages the near-floor throttle, which would mask dt
        flow = toy_gravity_flow(hbar=0.0)
        t_end = 0.9 * 2.0  # 0.9 * |1/p0|

        def max_error(dt):
            traj = integrate(flow, (0.5, 1.0), t_end, IntegratorControls(dt=dt))
            p_ref, q_ref = classical_toy_solution(0.5, 1.0, traj.times)
            return max(np.max(np.abs(traj.ps - p_ref)), np.max(np.abs(traj.qs - q_ref)))

        e1 = max_error(2e-3)
        e2 = max_error(1e-3)
        assert e1 / e2 == pytest.approx(4.0, abs=0.3)


class TestRotsym:
    def test_bounds_and_validation(self):
        with pytest.raises(ValueError):
            rotsym_flow(0, 1.0, 0.0)
        with pytest.raises(ValueError):
            rotsym_flow(65, 1.0, 0.0)
        with pytest.raises(ValueError):
            rotsym_flow(6, -1.0, 0.0)
        with pytest.raises(ValueError):
            rotsym_integrate(6, 1.0, 0.0, np.zeros(5), np.zeros(6), 1.0)

    def test_decoupled_frequency(self):
        # the Hamiltonian carries no 1/2 factors: qdot = 2p, so omega = 2 m0
        m0 = 1.3
        n = 3
        q0 = np.array([1.0, -0.5, 0.2])
        traj = rotsym_integrate(n, m0, 0.0, np.zeros(n), q0, 2.0)
        ref = q0[None, :] * np.cos(2.0 * m0 * traj.times)[:, None]
        assert np.max(np.abs(traj.qs - ref)) < 1e-6

    @pytest.mark.parametrize("n,g0", [(6, 0.0), (6, 1.0), (32, 0.0), (32, 1.0)])
    def test_shuffle_equivariance(self, n, g0):
        rng = np.random.default_rng(7)
        amp = 0.5 / np.sqrt(n)
        p0 = amp * rng.normal(size=n)
        q0 = amp * rng.normal(size=n)
        perm = rng.permutation(n)
        base = rotsym_integrate(n, 1.0, g0, p0, q0, 2.0)
        shuffled = rotsym_integrate(n, 1.0, g0, p0[perm], q0[perm], 2.0)
        dev = max(
            float(np.max(np.abs(base.ps[:, perm] - shuffled.ps))),
            float(np.max(np.abs(base.qs[:, perm] - shuffled.qs))),
        )
        assert dev < 1e-9
        assert base.drift < 1e-8

    def test_disjoint_support_relabeling(self):
        # motion on indices {0,1,2} reproduced verbatim on {3,4,5}
        n = 6
        vals_p = np.array([0.3, -0.1, 0.2])
        vals_q = np.array([0.5, 0.4, -0.3])
        lo_p, lo_q = np.zeros(n), np.zeros(n)
        lo_p[:3], lo_q[:3] = vals_p, vals_q
        hi_p, hi_q = np.zeros(n), np.zeros(n)
        hi_p[3:], hi_q[3:] = vals_p, vals_q
        a = rotsym_integrate(n, 1.0, 1.0, lo_p, lo_q, 1.0)
        b = rotsym_integrate(n, 1.0, 1.0, hi_p, hi_q, 1.0)
        assert np.max(np.abs(a.qs[:, :3] - b.qs[:, 3:])) < 1e-9
        assert np.max(np.abs(a.ps[:, :3] - b.ps[:, 3:])) < 1e-9
