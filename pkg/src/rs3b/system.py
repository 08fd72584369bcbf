"""The compactified trigonometric III_b system.

Polytope geometry, the local phase space (xi, theta), the Hamiltonian, local
and global Lax matrices, the embedding into complex projective space, and the
position / action toric moment maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DomainError, PatchBoundary
from .linalg import delta_phase_angles, delta_matrix, theta_matrix

TOL_PATCH = 1e-12


@dataclass(frozen=True)
class Coupling:
    """System parameters (n, y, Lambda); chi0 = pi - n|y| must be positive."""

    n: int
    y: float
    lam: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")
        if not 0.0 < abs(self.y) < np.pi / self.n:
            raise ValueError(f"coupling must satisfy 0 < |y| < pi/n, got {self.y}")
        if self.lam <= 0.0:
            raise ValueError("symplectic scale must be positive")

    @property
    def abs_y(self) -> float:
        # the sign of y is irrelevant; all formulas use |y|
        return abs(self.y)

    @property
    def chi0(self) -> float:
        return np.pi - self.n * abs(self.y)


@dataclass(frozen=True)
class LocalPoint:
    """Point (xi, theta) of the local phase space P^0 x T_{n-1}."""

    xi: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", np.asarray(self.xi, dtype=float))
        object.__setattr__(self, "theta", np.asarray(self.theta, dtype=float))
        if self.xi.shape != self.theta.shape:
            raise ValueError("xi and theta must have equal length")


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous coordinates on the sphere of radius sqrt(chi0), canonical phase."""

    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", canonical_phase(np.asarray(self.u, dtype=complex)))

    @property
    def n(self) -> int:
        return len(self.u)


def canonical_phase(u: np.ndarray) -> np.ndarray:
    """Rotate so the last coordinate of largest modulus is real non-negative."""
    mods = np.abs(u)
    idx = np.nonzero(mods >= mods.max() - 1e-12)[0][-1]
    if mods[idx] == 0.0:
        return u.copy()
    return u * (u[idx].conjugate() / mods[idx])


def proj_distance(q1: ProjectivePoint, q2: ProjectivePoint) -> float:
    """Max-entry distance after optimal phase alignment."""
    overlap = np.vdot(q2.u, q1.u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.abs(q1.u - phase * q2.u).max())


# ---------------------------------------------------------------------------
# polytope membership and coordinate reconstruction
# ---------------------------------------------------------------------------

def in_polytope(c: Coupling, xi: np.ndarray, margin: float = 0.0) -> bool:
    """Membership in the (closed, margin-shrunk) polytope of admissible positions."""
    xi = np.asarray(xi, dtype=float)
    y = c.abs_y
    return bool(xi.min() >= y + margin and xi.sum() <= np.pi - y - margin)


def check_local(c: Coupling, p: LocalPoint, margin: float = 0.0):
    if len(p.xi) != c.n - 1:
        raise ValueError("point dimension does not match the coupling")
    if not in_polytope(c, p.xi, margin):
        raise DomainError(f"xi = {p.xi} outside the open polytope")


def positions(xi: np.ndarray) -> np.ndarray:
    """Particle positions x_j (with delta_j = e^{2i x_j}), length n."""
    return -delta_phase_angles(xi)


def momenta(theta: np.ndarray) -> np.ndarray:
    """Momenta p_j (with Theta_j = e^{-i p_j}), length n; consecutive theta gaps."""
    pad = np.concatenate([[0.0], np.asarray(theta, dtype=float), [0.0]])
    return pad[1:] - pad[:-1]


def _xi_full(c: Coupling, xi: np.ndarray) -> np.ndarray:
    return np.concatenate([xi, [np.pi - np.sum(xi)]])


# ---------------------------------------------------------------------------
# the interaction factors W_j
# ---------------------------------------------------------------------------

def w_factor(c: Coupling, xi: np.ndarray, sign: int = 1) -> np.ndarray:
    """Positive square-root factors W_j(xi, sign*y), j = 1..n."""
    y = sign * c.abs_y
    x = positions(xi)
    out = np.empty(c.n)
    for j in range(c.n):
        prod = 1.0
        for k in range(c.n):
            if k == j:
                continue
            d = x[j] - x[k]
            ratio = np.sin(d + y) / np.sin(d)
            if ratio <= 0.0:
                raise DomainError(
                    f"root factor ({j + 1},{k + 1}) non-positive: {ratio:.3e}")
            prod *= ratio
        out[j] = np.sqrt(prod)
    return out


# ---------------------------------------------------------------------------
# Hamiltonian and local Lax matrix
# ---------------------------------------------------------------------------

def hamiltonian(c: Coupling, p: LocalPoint) -> float:
    """Many-body energy: sum_j cos(p_j) prod_{k!=j} [1 - sin^2 y / sin^2(x_j-x_k)]^(1/2)."""
    check_local(c, p)
    y = c.abs_y
    x = positions(p.xi)
    mom = momenta(p.theta)
    total = 0.0
    for j in range(c.n):
        prod = 1.0
        for k in range(c.n):
            if k == j:
                continue
            prod *= 1.0 - np.sin(y) ** 2 / np.sin(x[j] - x[k]) ** 2
        if prod < 0.0:
            raise DomainError("interaction factor went negative")
        total += np.cos(mom[j]) * np.sqrt(prod)
    return total


def lax_local(c: Coupling, p: LocalPoint) -> np.ndarray:
    """The special-unitary local Lax matrix on the dense coordinate patch."""
    check_local(c, p)
    n = c.n
    y = c.abs_y
    eiy = np.exp(1.0j * y)
    delta = np.diag(delta_matrix(p.xi))
    wp = w_factor(c, p.xi, +1)
    wm = w_factor(c, p.xi, -1)
    theta_d = np.diag(theta_matrix(p.theta))
    tau = np.concatenate([np.exp(1.0j * p.theta), [1.0]])  # Delta(tau) diagonal
    lax = np.empty((n, n), dtype=complex)
    for j in range(n):
        for l in range(n):
            kernel = (eiy - eiy.conjugate()) / (
                eiy * delta[j] / delta[l] - eiy.conjugate())
            lax[j, l] = kernel * wp[j] * wm[l] * theta_d[l] * tau[l] / tau[j]
    return lax


# ---------------------------------------------------------------------------
# embedding into projective space and its inverse
# ---------------------------------------------------------------------------

def embed(c: Coupling, p: LocalPoint) -> ProjectivePoint:
    """Homogeneous coordinates u_k = tau_k sqrt(xi_k - |y|), with u_n real positive."""
    check_local(c, p)
    xi_full = _xi_full(c, p.xi)
    s = np.sqrt(xi_full - c.abs_y)
    tau = np.concatenate([np.exp(1.0j * p.theta), [1.0]])
    return ProjectivePoint(tau * s)


def embed_inverse(c: Coupling, q: ProjectivePoint) -> LocalPoint:
    """Inverse chart on the dense patch where no coordinate vanishes."""
    u = q.u
    mods = np.abs(u)
    if mods.min() <= np.sqrt(TOL_PATCH):
        raise PatchBoundary(f"smallest |u_k| = {mods.min():.3e}")
    xi = mods[:-1] ** 2 + c.abs_y
    tau = (u[:-1] / mods[:-1]) * (mods[-1] / u[-1])
    return LocalPoint(xi=xi, theta=np.angle(tau))


# ---------------------------------------------------------------------------
# global Lax matrix in homogeneous coordinates
# ---------------------------------------------------------------------------

def _sin_over_arg(r: float) -> float:
    """sin(r)/r, smooth through r = 0."""
    return 1.0 if abs(r) < 1e-14 else np.sin(r) / r


def _reduced_w(c: Coupling, xi_full: np.ndarray, x: np.ndarray, sign: int) -> np.ndarray:
    """W_j(xi, sign*y) with the vanishing cyclic-adjacent factor divided out.

    For sign=+1 the factor paired with k = j+1 (mod n) is replaced by its
    smooth quotient, so W_j = sqrt(xi_j - y) * reduced_j; for sign=-1 the
    same happens for k = j-1 (mod n) with index j-1.
    """
    n = c.n
    y = c.abs_y
    out = np.empty(n)
    for j in range(n):
        special = (j + 1) % n if sign > 0 else (j - 1) % n
        r = xi_full[special if sign < 0 else j] - y
        prod = _sin_over_arg(r) / np.sin(xi_full[j if sign > 0 else special])
        for k in range(n):
            if k == j or k == special:
                continue
            prod *= np.sin(x[j] - x[k] + sign * y) / np.sin(x[j] - x[k])
        if prod <= 0.0:
            raise DomainError("reduced root factor non-positive")
        out[j] = np.sqrt(prod)
    return out


def lax_global(c: Coupling, q: ProjectivePoint) -> np.ndarray:
    """Smooth extension of the Lax matrix to all of projective space.

    Every pairing tau_k sqrt(xi_k - |y|) in the dense-patch formula is
    replaced by the homogeneous coordinate u_k itself, which removes the
    0/0 at the patch boundary.
    """
    n = c.n
    y = c.abs_y
    u = q.u
    xi_full = np.abs(u) ** 2 + y
    x = positions(xi_full[:-1])
    wp = _reduced_w(c, xi_full, x, +1)
    wm = _reduced_w(c, xi_full, x, -1)
    siny = np.sin(y)
    lax = np.empty((n, n), dtype=complex)
    for j in range(n):
        for l in range(n):
            lm1 = (l - 1) % n
            pair = u[j].conjugate() * u[lm1]
            if lm1 == j:
                # cyclic-adjacent column: the kernel zero cancels |u_j|^2 = xi_j - y
                sigma = 1.0 if j == n - 1 else -1.0
                ratio = sigma / _sin_over_arg(xi_full[j] - y)
            else:
                ratio = pair / np.sin(x[j] - x[l] + y)
            lax[j, l] = np.exp(-1.0j * (x[j] - x[l])) * siny * wp[j] * wm[l] * ratio
    return lax


# ---------------------------------------------------------------------------
# toric moment maps
# ---------------------------------------------------------------------------

def position_map(c: Coupling, q: ProjectivePoint) -> np.ndarray:
    """Global particle positions |u_k|^2 + |y|, k = 1..n-1."""
    return np.abs(q.u[:-1]) ** 2 + c.abs_y


def action_map(c: Coupling, q: ProjectivePoint) -> np.ndarray:
    """Action variables: alcove coordinates of the global Lax matrix."""
    return linalg.alcove_coordinates(lax_global(c, q))


# ---------------------------------------------------------------------------
# symplectic structures
# ---------------------------------------------------------------------------

def local_form(v1: np.ndarray, v2: np.ndarray, lam: float = 1.0) -> float:
    """Omega_loc = Lambda * sum dtheta_k ^ dxi_k on tangents (dxi, dtheta)."""
    m = len(v1) // 2
    return lam * float(np.dot(v1[m:], v2[:m]) - np.dot(v2[m:], v1[:m]))


def fs_form(v1: np.ndarray, v2: np.ndarray, lam: float = 1.0) -> float:
    """chi0-scaled Fubini-Study form on sphere tangents: i sum d(u_bar) ^ du."""
    return -2.0 * lam * float(np.imag(np.vdot(v1, v2)))


def sphere_tangent(u: np.ndarray, z: np.ndarray, chi0: float) -> np.ndarray:
    """Project z to the tangent space of the radius-sqrt(chi0) sphere at u."""
    return z - u * (np.real(np.vdot(u, z)) / chi0)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def sample_local(c: Coupling, rng: np.random.Generator,
                 margin: float = 1e-3) -> LocalPoint:
    """Rejection-sample the margin-shrunk open polytope; angles uniform."""
    y = c.abs_y
    lo, hi = y + margin, np.pi - y - margin
    while True:
        xi = rng.uniform(lo, hi, size=c.n - 1)
        if xi.sum() <= hi:
            break
    theta = rng.uniform(0.0, 2.0 * np.pi, size=c.n - 1)
    return LocalPoint(xi=xi, theta=theta)


def sample_projective(c: Coupling, rng: np.random.Generator) -> ProjectivePoint:
    """Uniform point on projective space via a normalized complex Gaussian."""
    z = rng.standard_normal(c.n) + 1.0j * rng.standard_normal(c.n)
    return ProjectivePoint(z * (np.sqrt(c.chi0) / np.linalg.norm(z)))


def sample_dense_patch(c: Coupling, rng: np.random.Generator,
                       margin: float = 1e-3) -> ProjectivePoint:
    return embed(c, sample_local(c, rng, margin))
