"""Reduction realization of the self-duality map.

The gauge section f0 sends the dense patch of projective space onto the
moment-map level set in the double; its gauge-fixed inverse pulls the
mapping-class generators S and T (and the anti-symplectic involution and the
center action) back to projective space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import double as dbl
from . import linalg, system
from .double import DoublePoint
from .errors import (ConstraintViolation, GaugeDegenerate,
                     NotOnConstraint, PatchBoundary)
from .system import Coupling, LocalPoint, ProjectivePoint

TOL_CONSTRAINT = 1e-10
TOL_ROUNDTRIP = 1e-8


@dataclass(frozen=True)
class ConstraintPoint:
    """Point of the double lying on the fixed moment-map level set."""

    point: DoublePoint
    mu0: np.ndarray

    def __post_init__(self):
        res = float(np.abs(dbl.moment(self.point) - self.mu0).max())
        if res > TOL_CONSTRAINT:
            raise ConstraintViolation(f"moment-map residual {res:.3e}")


def mu0_matrix(c: Coupling) -> np.ndarray:
    """The distinguished moment-map value diag(e^{2iy}, ..., e^{2iy}, e^{2(1-n)iy})."""
    y = c.abs_y
    phases = np.full(c.n, 2.0 * y)
    phases[-1] = 2.0 * (1 - c.n) * y
    return np.diag(np.exp(1.0j * phases))


def g_matrix(c: Coupling, xi: np.ndarray) -> np.ndarray:
    """The special-unitary gauge rotation built from the root factors.

    Last column v_j, last row -v_j, last entry v_n, and a rank-one
    correction of the identity in the upper-left block.
    """
    n = c.n
    y = c.abs_y
    v = np.sqrt(np.sin(y) / np.sin(n * y)) * system.w_factor(c, xi, +1)
    g = np.eye(n, dtype=complex)
    block = np.outer(v[:-1], v[:-1]) / (1.0 + v[-1])
    g[:-1, :-1] -= block
    g[:-1, -1] = v[:-1]
    g[-1, :-1] = -v[:-1]
    g[-1, -1] = v[-1]
    return g


def _conjugated_lax(c: Coupling, p: LocalPoint) -> np.ndarray:
    """Delta(tau) L_loc Delta(tau)^{-1}; its diagonal is tau-free except through Theta."""
    tau = np.concatenate([np.exp(1.0j * p.theta), [1.0]])
    lax = system.lax_local(c, p)
    return (tau[:, None] * lax) * (1.0 / tau)[None, :]


def f0_map(c: Coupling, q: ProjectivePoint) -> ConstraintPoint:
    """Gauge section of the reduction over the dense patch.

    Returns (A, B) = (g^{-1} Delta L Delta^{-1} g, g^{-1} delta g); the moment
    map evaluates to mu0 exactly, up to rounding.
    """
    p = system.embed_inverse(c, q)  # raises PatchBoundary outside the patch
    g = g_matrix(c, p.xi)
    gi = g.conj().T
    a = gi @ _conjugated_lax(c, p) @ g
    b = gi @ linalg.delta_matrix(p.xi) @ g
    return ConstraintPoint(DoublePoint(a, b), mu0_matrix(c))


def _diag_gauge_factor(c: Coupling, xi: np.ndarray) -> np.ndarray:
    """tau-independent diagonal of Delta L Delta^{-1}: W_j(y) W_j(-y) > 0."""
    return system.w_factor(c, xi, +1) * system.w_factor(c, xi, -1)


def f0_inverse(c: Coupling, x: ConstraintPoint, tol: float = 1e-8) -> ProjectivePoint:
    """Gauge-fixed inverse of f0 on the dense patch.

    Diagonalizes the B component into the alcove, reads the angle torus off
    the diagonal of the conjugated A component, and reassembles the
    homogeneous coordinates.
    """
    res = float(np.abs(dbl.moment(x.point) - x.mu0).max())
    if res > TOL_CONSTRAINT:
        raise NotOnConstraint(f"moment-map residual {res:.3e}")
    dec = linalg.alcove_decomposition(x.point.b)
    xi = dec.xi
    if not system.in_polytope(c, xi, margin=np.sqrt(system.TOL_PATCH)):
        raise PatchBoundary(f"spectral coordinates {xi} leave the open polytope")
    frame = dec.frame
    m = frame.conj().T @ x.point.a @ frame
    cdiag = _diag_gauge_factor(c, xi)
    if np.abs(cdiag).min() <= tol:
        raise GaugeDegenerate("vanishing diagonal normalization")
    big_theta = np.diag(m) / cdiag
    drift = float(np.abs(np.abs(big_theta) - 1.0).max())
    if drift > 1e-6:
        raise GaugeDegenerate(f"recovered angles off the torus by {drift:.3e}")
    big_theta = big_theta / np.abs(big_theta)
    # Theta_j = e^{-i p_j} with p_j = theta_j - theta_{j-1}
    theta = np.cumsum(-np.angle(big_theta[:-1]))
    return system.embed(c, LocalPoint(xi=xi, theta=theta))


# ---------------------------------------------------------------------------
# reduced mapping-class action on projective space
# ---------------------------------------------------------------------------

def duality_map(c: Coupling, q: ProjectivePoint) -> ProjectivePoint:
    """The self-duality symplectomorphism: S transported through the gauge section."""
    x = f0_map(c, q)
    return f0_inverse(c, ConstraintPoint(dbl.sd_map(x.point), x.mu0))


def dehn_twist_map(c: Coupling, q: ProjectivePoint) -> ProjectivePoint:
    """The Dehn-twist generator T transported through the gauge section."""
    x = f0_map(c, q)
    return f0_inverse(c, ConstraintPoint(dbl.td_map(x.point), x.mu0))


def conjugation_map(q: ProjectivePoint) -> ProjectivePoint:
    """Entrywise complex conjugation on projective space."""
    return ProjectivePoint(q.u.conjugate())


def involution_r(c: Coupling, q: ProjectivePoint) -> ProjectivePoint:
    """The anti-symplectic involution: conjugation composed with the duality map."""
    return conjugation_map(duality_map(c, q))


def center_action(c: Coupling, z1: int, z2: int, q: ProjectivePoint) -> ProjectivePoint:
    """Residual Z_n x Z_n action: (A, B) -> (z1 A, z2 B) with n-th roots of unity."""
    x = f0_map(c, q)
    w1 = np.exp(2.0j * np.pi * (z1 % c.n) / c.n)
    w2 = np.exp(2.0j * np.pi * (z2 % c.n) / c.n)
    moved = DoublePoint(w1 * x.point.a, w2 * x.point.b)
    return f0_inverse(c, ConstraintPoint(moved, x.mu0))
