"""Classical and enhanced classical Hamiltonian flows.

Primary integrator is implicit midpoint (symmetric, symplectic) with a
fixed-point inner iteration; an adaptive Runge-Kutta shadow run is
available as a cross-check.  Toy-gravity flows live on q > 0 and
terminate with a "singularity" status when q reaches the chart floor;
near the floor the step size is throttled so the hit time is resolved
far below the reporting tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FlowSpec",
    "IntegratorControls",
    "Trajectory",
    "oscillator_flow",
    "toy_gravity_flow",
    "rotsym_flow",
    "integrate",
    "rotsym_integrate",
    "classical_toy_solution",
    "singularity_report",
    "energy_drift",
]

Q_FLOOR = 1e-12


@dataclass(frozen=True)
class FlowSpec:
    name: str
    hamiltonian: object  # H(p, q) -> float (elementwise for vector flows)
    dH_dp: object
    dH_dq: object
    positive_q: bool = False
    vector: bool = False
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class IntegratorControls:
    dt: float = 1e-4
    fp_tol: float = 1e-13
    max_fp_iter: int = 100
    q_floor: float = Q_FLOOR
    cross_check: bool = False


@dataclass
class Trajectory:
    times: np.ndarray
    ps: np.ndarray
    qs: np.ndarray
    energies: np.ndarray
    status: str  # "completed" | "singularity"
    hit_time: float | None
    method: str
    dt: float
    meta: dict = field(default_factory=dict)

    @property
    def min_q(self) -> float:
        return float(np.min(self.qs))

    @property
    def drift(self) -> float:
        e0 = self.energies[0]
        dev = np.max(np.abs(self.energies - e0))
        return float(dev / abs(e0)) if e0 != 0 else float(dev)


def oscillator_flow() -> FlowSpec:
    return FlowSpec(
        name="oscillator",
        hamiltonian=lambda p, q: 0.5 * (p * p + q * q),
        dH_dp=lambda p, q: p,
        dH_dq=lambda p, q: q,
        params={},
    )


def toy_gravity_flow(hbar: float = 0.0, cprime: float | None = None,
                     beta: float = 1.0) -> FlowSpec:
    """H = q p^2 + hbar^2 C' / q on the chart q > 0.

    hbar = 0 gives the classical flow; hbar > 0 the enhanced flow, with
    C' taken from the weak-correspondence evaluator unless supplied.
    """
    if hbar < 0:
        raise ValueError("hbar must be nonnegative")
    if hbar == 0.0:
        c = 0.0
    elif cprime is None:
        from .wcp import cprime as _cprime

        c = hbar**2 * _cprime(beta, hbar)
    else:
        c = hbar**2 * cprime
    if c == 0.0:
        return FlowSpec(
            name="toygravity-classical",
            hamiltonian=lambda p, q: q * p * p,
            dH_dp=lambda p, q: 2.0 * q * p,
            dH_dq=lambda p, q: p * p,
            positive_q=True,
            params={"hbar": hbar, "barrier": 0.0},
        )
    return FlowSpec(
        name="toygravity-enhanced",
        hamiltonian=lambda p, q: q * p * p + c / q,
        dH_dp=lambda p, q: 2.0 * q * p,
        dH_dq=lambda p, q: p * p - c / (q * q),
        positive_q=True,
        params={"hbar": hbar, "barrier": c},
    )


def rotsym_flow(N: int, m0: float, g0: float) -> FlowSpec:
    """H = sum(p_n^2 + m0^2 q_n^2) + g0 (sum q_n^2)^2.

    The Hamiltonian carries no 1/2 factors, so qdot_n = 2 p_n and the
    decoupled (g0 = 0) oscillation frequency is 2 m0.
    """
    if not 1 <= N <= 64:
        raise ValueError(f"N must lie in [1, 64], got {N}")
    if m0 <= 0 or g0 < 0:
        raise ValueError("need m0 > 0 and g0 >= 0")

    def ham(p, q):
        s2 = np.sum(q * q)
        return np.sum(p * p) + m0**2 * s2 + g0 * s2 * s2

    return FlowSpec(
        name="rotsym",
        hamiltonian=ham,
        dH_dp=lambda p, q: 2.0 * p,
        dH_dq=lambda p, q: 2.0 * m0**2 * q + 4.0 * g0 * np.sum(q * q) * q,
        vector=True,
        params={"N": N, "m0": m0, "g0": g0},
    )


def _midpoint_step_scalar(flow, p, q, dt, tol, max_iter):
    fp, fq = flow.dH_dp, flow.dH_dq
    p1, q1 = p - dt * fq(p, q), q + dt * fp(p, q)
    for _ in range(max_iter):
        pm, qm = 0.5 * (p + p1), 0.5 * (q + q1)
        p2 = p - dt * fq(pm, qm)
        q2 = q + dt * fp(pm, qm)
        if abs(p2 - p1) + abs(q2 - q1) < tol:
            return p2, q2, True
        p1, q1 = p2, q2
    return p1, q1, False


def _midpoint_step_vector(flow, p, q, dt, tol, max_iter):
    fp, fq = flow.dH_dp, flow.dH_dq
    p1, q1 = p - dt * fq(p, q), q + dt * fp(p, q)
    for _ in range(max_iter):
        pm, qm = 0.5 * (p + p1), 0.5 * (q + q1)
        p2 = p - dt * fq(pm, qm)
        q2 = q + dt * fp(pm, qm)
        if np.max(np.abs(p2 - p1)) + np.max(np.abs(q2 - q1)) < tol:
            return p2, q2, True
        p1, q1 = p2, q2
    return p1, q1, False


def integrate(flow: FlowSpec, initial, t_end: float,
              controls: IntegratorControls = IntegratorControls()) -> Trajectory:
    """Implicit-midpoint trajectory of q' = dH/dp, p' = -dH/dq.

    Positive-chart flows throttle the step once q heads for the floor,
    and stop with status "singularity" and the crossing time.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    p, q = initial
    if flow.vector:
        p = np.array(p, dtype=float)
        q = np.array(q, dtype=float)
        step = _midpoint_step_vector
    else:
        p, q = float(p), float(q)
        step = _midpoint_step_scalar
        if flow.positive_q and q <= 0:
            raise ValueError("initial q must be positive on this chart")
    times, ps, qs, es = [0.0], [p], [q], [flow.hamiltonian(p, q)]
    t = 0.0
    status, hit = "completed", None
    while t < t_end - 1e-15:
        dt = min(controls.dt, t_end - t)
        if flow.positive_q:
            # keep the relative shrink of q modest so the floor crossing
            # is localized to ~sqrt(q_floor/E) in time
            qdot = flow.dH_dp(p, q)
            if qdot < 0:
                dt = min(dt, max(5e-5 * q / -qdot, 1e-12))
        p1, q1, ok = step(flow, p, q, dt, controls.fp_tol, controls.max_fp_iter)
        t += dt
        if flow.positive_q and (not ok or not math.isfinite(q1) or q1 <= controls.q_floor):
            status, hit = "singularity", t
            break
        if not ok:
            raise RuntimeError(f"fixed-point iteration failed at t = {t}")
        p, q = p1, q1
        times.append(t)
        ps.append(p)
        qs.append(q)
        es.append(flow.hamiltonian(p, q))
    traj = Trajectory(
        times=np.asarray(times),
        ps=np.asarray(ps),
        qs=np.asarray(qs),
        energies=np.asarray(es),
        status=status,
        hit_time=hit,
        method="implicit-midpoint",
        dt=controls.dt,
    )
    if controls.cross_check:
        traj.meta["cross_check_error"] = _rk_shadow_error(flow, initial, traj)
    return traj


def _rk_shadow_error(flow, initial, traj: Trajectory) -> float:
    """Endpoint discrepancy against an adaptive embedded Runge-Kutta run."""
    from scipy.integrate import solve_ivp

    p0, q0 = initial
    y0 = np.concatenate([np.atleast_1d(p0), np.atleast_1d(q0)]).astype(float)
    n = y0.size // 2

    def rhs(_, y):
        p, q = y[:n], y[n:]
        return np.concatenate(
            [-np.atleast_1d(flow.dH_dq(p, q)), np.atleast_1d(flow.dH_dp(p, q))]
        )

    t_final = float(traj.times[-1])
    sol = solve_ivp(rhs, (0.0, t_final), y0, method="RK45", rtol=1e-10, atol=1e-12)
    pf = np.atleast_1d(traj.ps[-1])
    qf = np.atleast_1d(traj.qs[-1])
    return float(
        np.max(np.abs(np.concatenate([pf, qf]) - sol.y[:, -1]))
    )


def rotsym_integrate(N: int, m0: float, g0: float, p0, q0, t_end: float,
                     controls: IntegratorControls = IntegratorControls(dt=1e-4)) -> Trajectory:
    p0 = np.asarray(p0, dtype=float)
    q0 = np.asarray(q0, dtype=float)
    if p0.shape != (N,) or q0.shape != (N,):
        raise ValueError(f"initial vectors must have shape ({N},)")
    return integrate(rotsym_flow(N, m0, g0), (p0, q0), t_end, controls)


def classical_toy_solution(p0: float, q0: float, t):
    """Closed form p = p0/(1 + p0 t), q = q0 (1 + p0 t)^2 of H = q p^2."""
    t = np.asarray(t, dtype=float)
    u = 1.0 + p0 * t
    if np.any(np.abs(u) < 1e-12):
        raise ValueError(f"solution pole at t = {-1.0 / p0}")
    p = p0 / u
    q = q0 * u * u
    if t.ndim == 0:
        return float(p), float(q)
    return p, q


def singularity_report(flow: FlowSpec, initial, t_end: float,
                       controls: IntegratorControls = IntegratorControls()) -> dict:
    """Min-q statistic and floor-crossing time of a toy-gravity run."""
    if not flow.positive_q:
        raise ValueError("singularity report applies to positive-chart flows")
    traj = integrate(flow, initial, t_end, controls)
    return {
        "status": traj.status,
        "min_q": traj.min_q,
        "hit_time": traj.hit_time,
        "drift": traj.drift,
        "method": traj.method,
        "dt": traj.dt,
    }


def energy_drift(traj: Trajectory, flow: FlowSpec) -> float:
    """Max relative |H(t) - H(0)| along the trajectory (absolute if H(0) = 0)."""
    if traj.times.size == 0:
        raise ValueError("empty trajectory")
    if traj.qs.ndim > 1:
        es = np.array([flow.hamiltonian(p, q) for p, q in zip(traj.ps, traj.qs)])
    else:
        es = np.array([flow.hamiltonian(p, q) for p, q in zip(traj.ps, traj.qs)])
    e0 = es[0]
    dev = float(np.max(np.abs(es - e0)))
    return dev / abs(e0) if e0 != 0 else dev
