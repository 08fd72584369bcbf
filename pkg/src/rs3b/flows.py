"""Hamiltonian dynamics on the local phase space.

Canonical brackets for the form sum dtheta_k ^ dxi_k, adaptive flow
integration with a polytope-boundary guard, and the action-angle
verification report (involutivity, conservation, 2*pi periodicity).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from . import linalg, system
from .errors import BoundaryApproach
from .system import Coupling, LocalPoint

TOL_ODE = 1e-9
MAX_STEP = np.pi / 50.0
BOUNDARY_MARGIN = 1e-4
FD_STEP = 1e-6

Observable = Callable[[LocalPoint], float]


# ---------------------------------------------------------------------------
# observables and their finite-difference gradients
# ---------------------------------------------------------------------------

def hamiltonian_generator(c: Coupling) -> Observable:
    return lambda p: system.hamiltonian(c, p)


def action_generator(c: Coupling, k: int) -> Observable:
    """The k-th action variable pulled back to the local chart."""
    return lambda p: float(linalg.alcove_coordinates(system.lax_local(c, p))[k - 1])


def coordinate_generator(kind: str, k: int) -> Observable:
    if kind == "xi":
        return lambda p: float(p.xi[k - 1])
    if kind == "theta":
        return lambda p: float(p.theta[k - 1])
    raise ValueError(f"unknown coordinate kind {kind!r}")


def gradient(f: Observable, p: LocalPoint, step: float = FD_STEP):
    """Central-difference gradients (df/dxi, df/dtheta)."""
    m = len(p.xi)
    dxi = np.empty(m)
    dth = np.empty(m)
    for k in range(m):
        e = np.zeros(m)
        e[k] = step
        dxi[k] = (f(LocalPoint(p.xi + e, p.theta)) -
                  f(LocalPoint(p.xi - e, p.theta))) / (2.0 * step)
        dth[k] = (f(LocalPoint(p.xi, p.theta + e)) -
                  f(LocalPoint(p.xi, p.theta - e))) / (2.0 * step)
    return dxi, dth


def canonical_bracket(f: Observable, g: Observable, p: LocalPoint,
                      lam: float = 1.0) -> float:
    """{f, g} = (1/lam) sum_k (df/dtheta_k dg/dxi_k - df/dxi_k dg/dtheta_k)."""
    f_xi, f_th = gradient(f, p)
    g_xi, g_th = gradient(g, p)
    return float(np.dot(f_th, g_xi) - np.dot(f_xi, g_th)) / lam


# ---------------------------------------------------------------------------
# flow integration
# ---------------------------------------------------------------------------

@dataclass
class Trajectory:
    """Time-ordered samples of a local flow."""

    t: np.ndarray
    states: np.ndarray  # rows (xi_1..xi_{n-1}, theta_1..theta_{n-1})
    generator: str
    steps: int
    rhs_evals: int

    def point(self, i: int) -> LocalPoint:
        m = self.states.shape[1] // 2
        return LocalPoint(self.states[i, :m], self.states[i, m:])

    @property
    def initial(self) -> LocalPoint:
        return self.point(0)

    @property
    def final(self) -> LocalPoint:
        return self.point(-1)

    def to_csv(self, path):
        m = self.states.shape[1] // 2
        header = "t," + ",".join(f"xi_{k + 1}" for k in range(m)) \
            + "," + ",".join(f"theta_{k + 1}" for k in range(m))
        data = np.column_stack([self.t, self.states])
        np.savetxt(path, data, delimiter=",", header=header, comments="",
                   fmt="%.17g")


def integrate_flow(c: Coupling, generator: Observable, p0: LocalPoint,
                   t_final: float, name: str = "H",
                   tol_ode: float = TOL_ODE, n_samples: int = 0) -> Trajectory:
    """Integrate the flow dxi/dt = -(1/lam) df/dtheta, dtheta/dt = (1/lam) df/dxi.

    Raises BoundaryApproach if the trajectory comes within the safety margin
    of the polytope boundary.
    """
    system.check_local(c, p0)
    m = len(p0.xi)
    y = c.abs_y

    def rhs(t, z):
        p = LocalPoint(z[:m], z[m:])
        dxi, dth = gradient(generator, p)
        return np.concatenate([-dth, dxi]) / c.lam

    def boundary(t, z):
        xi = z[:m]
        return min(xi.min() - y, np.pi - y - xi.sum()) - BOUNDARY_MARGIN

    boundary.terminal = True
    boundary.direction = -1

    z0 = np.concatenate([p0.xi, p0.theta])
    t_eval = np.linspace(0.0, t_final, n_samples) if n_samples else None
    sol = solve_ivp(rhs, (0.0, t_final), z0, method="DOP853",
                    rtol=tol_ode, atol=tol_ode * 1e-2, max_step=MAX_STEP,
                    events=[boundary], t_eval=t_eval, dense_output=False)
    if sol.status == 1:  # boundary event fired
        t_hit = float(sol.t_events[0][0])
        z = sol.y_events[0][0]
        raise BoundaryApproach(t_hit, LocalPoint(z[:m], z[m:]))
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    return Trajectory(t=sol.t, states=sol.y.T, generator=name,
                      steps=len(sol.t), rhs_evals=sol.nfev)


def torus_distance(p: LocalPoint, q: LocalPoint) -> float:
    """Distance on P x T: direct in xi, modulo 2*pi in theta."""
    dxi = float(np.abs(p.xi - q.xi).max())
    dth = float(np.abs(np.exp(1.0j * p.theta) - np.exp(1.0j * q.theta)).max())
    return max(dxi, dth)


# ---------------------------------------------------------------------------
# action-angle verification
# ---------------------------------------------------------------------------

def verify_action_angle(c: Coupling, p0: LocalPoint, t_cons: float = 10.0,
                        tol_ode: float = TOL_ODE) -> dict:
    """Bracket, conservation and periodicity defects around one base point.

    Returns a report with the pairwise action-bracket residuals, the
    position-bracket residuals, the conservation defect of each action along
    the energy flow, and the periodicity defect of each action flow at 2*pi.
    """
    m = c.n - 1
    actions = [action_generator(c, k) for k in range(1, c.n)]
    report = {
        "action_bracket_max": 0.0,
        "position_bracket_max": 0.0,
        "mixed_bracket_max": 0.0,
        "conservation_max": 0.0,
        "periodicity_max": 0.0,
        "skips": 0,
    }
    for j in range(m):
        for k in range(j + 1, m):
            report["action_bracket_max"] = max(
                report["action_bracket_max"],
                abs(canonical_bracket(actions[j], actions[k], p0, c.lam)))
            report["position_bracket_max"] = max(
                report["position_bracket_max"],
                abs(canonical_bracket(coordinate_generator("xi", j + 1),
                                      coordinate_generator("xi", k + 1), p0, c.lam)))
    h = hamiltonian_generator(c)
    for k in range(m):
        report["mixed_bracket_max"] = max(
            report["mixed_bracket_max"],
            abs(canonical_bracket(h, actions[k], p0, c.lam)))
    try:
        traj = integrate_flow(c, h, p0, t_cons, name="H")
        i0 = [a(p0) for a in actions]
        for i in range(1, len(traj.t)):
            p = traj.point(i)
            defect = max(abs(a(p) - v0) for a, v0 in zip(actions, i0))
            report["conservation_max"] = max(report["conservation_max"], defect)
    except BoundaryApproach:
        report["skips"] += 1
    for k in range(m):
        try:
            traj = integrate_flow(c, actions[k], p0, 2.0 * np.pi * c.lam,
                                  name=f"I_{k + 1}", tol_ode=tol_ode)
            report["periodicity_max"] = max(
                report["periodicity_max"], torus_distance(traj.final, p0))
        except BoundaryApproach:
            report["skips"] += 1
    return report
