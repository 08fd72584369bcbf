"""Dense complex kernel for SU(n): certification, eigen-decomposition, alcove coordinates.

Conventions used throughout the package:

* elements of SU(n) are plain complex ndarrays, certified by :func:`is_special_unitary`;
* the invariant scalar product on su(n) is ``<X,Y> = -(lam/2) Re tr(XY)``;
* the spectral (alcove) coordinates of g are the half-gaps of its eigenphases,
  lifted so that the phases are ascending and sum to zero exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceFailure

TOL_ALGEBRAIC = 1e-10

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# certification helpers
# ---------------------------------------------------------------------------

def unitarity_defect(g: np.ndarray) -> float:
    """Max-entry norm of g†g - 1."""
    n = g.shape[0]
    return float(np.abs(g.conj().T @ g - np.eye(n)).max())


def is_special_unitary(g: np.ndarray, tol: float = TOL_ALGEBRAIC) -> bool:
    return unitarity_defect(g) <= tol and abs(np.linalg.det(g) - 1.0) <= tol


def is_su_vector(x: np.ndarray, tol: float = TOL_ALGEBRAIC) -> bool:
    """Anti-Hermitian and traceless to tolerance."""
    return float(np.abs(x + x.conj().T).max()) <= tol and abs(np.trace(x)) <= tol


def project_su(m: np.ndarray) -> np.ndarray:
    """Orthogonal projection of an arbitrary matrix onto su(n)."""
    a = 0.5 * (m - m.conj().T)
    n = m.shape[0]
    return a - (np.trace(a) / n) * np.eye(n)


def scalar_product(x: np.ndarray, y: np.ndarray, lam: float = 1.0) -> float:
    """Invariant scalar product -(lam/2) Re tr(xy) on su(n)."""
    return -0.5 * lam * float(np.real(np.trace(x @ y)))


def su_basis(n: int) -> list[np.ndarray]:
    """Orthonormal basis of su(n) for the lam=1 scalar product.

    Off-diagonal pairs (E_jk - E_kj), i(E_jk + E_kj) and the diagonal
    i*diag combinations, all with unit norm.
    """
    basis = []
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = -1.0
            basis.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = 1.0j
            m[k, j] = 1.0j
            basis.append(m)
    for k in range(1, n):
        d = np.zeros(n)
        d[:k] = 1.0
        d[k] = -float(k)
        d /= np.sqrt(k * (k + 1) / 2.0)
        basis.append(1.0j * np.diag(d).astype(complex))
    return basis


# ---------------------------------------------------------------------------
# diagonal exponentials
# ---------------------------------------------------------------------------

def cartan_lambda(n: int, k: int) -> np.ndarray:
    """Diagonal matrix sum_{j<=k} E_jj - (k/n) 1, for k = 1..n-1."""
    d = np.full(n, -k / n)
    d[:k] += 1.0
    return np.diag(d)


def cartan_h(n: int, k: int) -> np.ndarray:
    """E_kk - E_{k+1,k+1}, for k = 1..n-1."""
    d = np.zeros(n)
    d[k - 1] = 1.0
    d[k] = -1.0
    return np.diag(d)


def diag_exponential(c: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    """exp of the diagonal combination sum c_k * basis_k (basis traceless diagonal)."""
    d = sum(ck * np.diag(bk) for ck, bk in zip(c, basis))
    return np.diag(np.exp(d))


def delta_phase_angles(xi: np.ndarray) -> np.ndarray:
    """Exponents a_j with delta(xi) = diag(exp(-2i a_j)); a_j - a_{j+1} = xi_j."""
    xi = np.asarray(xi, dtype=float)
    n = len(xi) + 1
    k = np.arange(1, n)
    tail = np.concatenate([np.cumsum(xi[::-1])[::-1], [0.0]])  # sum_{m>=j} xi_m
    return tail - np.dot(k, xi) / n


def delta_matrix(xi: np.ndarray) -> np.ndarray:
    """diag SU(n) matrix exp(-2i sum xi_k lambda_k)."""
    return np.diag(np.exp(-2.0j * delta_phase_angles(xi)))


def theta_matrix(theta: np.ndarray) -> np.ndarray:
    """diag SU(n) matrix exp(-i sum theta_k H_k); entries exp(-i(theta_j - theta_{j-1}))."""
    theta = np.asarray(theta, dtype=float)
    pad = np.concatenate([[0.0], theta, [0.0]])
    return np.diag(np.exp(-1.0j * (pad[1:] - pad[:-1])))


# ---------------------------------------------------------------------------
# eigen-decomposition and alcove coordinates
# ---------------------------------------------------------------------------

def eigensystem_unitary(g: np.ndarray, tol: float = TOL_ALGEBRAIC):
    """Eigenphases and a unitary eigenvector frame of a (special) unitary matrix.

    Uses the complex Schur form, which stays orthonormal for degenerate
    spectra.  Returns (phases, frame) with g = frame diag(e^{i phases}) frame†.
    """
    t, frame = sla.schur(g.astype(complex), output="complex")
    phases = np.angle(np.diag(t))
    rec = frame @ np.diag(np.exp(1.0j * phases)) @ frame.conj().T
    if float(np.abs(rec - g).max()) > 100.0 * tol:
        raise ConvergenceFailure(
            f"eigen reconstruction residual {np.abs(rec - g).max():.3e}")
    return phases, frame


@dataclass(frozen=True)
class AlcoveData:
    """Alcove decomposition of a special unitary matrix.

    ``phases`` is the ascending lift with exact zero sum, ``frame`` the
    matching eigenvector frame (g = frame diag(e^{i phases}) frame†), ``xi``
    the half-gaps, and ``degenerate`` flags a spectrum on the alcove boundary.
    """

    xi: np.ndarray
    phases: np.ndarray
    frame: np.ndarray
    degenerate: bool


def alcove_decomposition(g: np.ndarray, tol_degenerate: float = 1e-9) -> AlcoveData:
    """Unique xi in the closed alcove with g conjugate to delta(xi).

    Eigenphases are corrected for determinant drift, sorted, and shifted by
    the unique multiple of 2*pi per phase that makes the ascending lift sum
    to zero; xi is then half the consecutive gaps.
    """
    n = g.shape[0]
    phases, frame = eigensystem_unitary(g)
    total = phases.sum()
    m = int(np.round(total / TWO_PI))
    phases = phases - (total - TWO_PI * m) / n  # distribute det drift
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    frame = frame[:, order]
    # exactly one cyclic shift of the sorted window makes the lift sum to 0
    if m > 0:
        phases = np.concatenate([phases[n - m:] - TWO_PI, phases[:n - m]])
        frame = np.concatenate([frame[:, n - m:], frame[:, :n - m]], axis=1)
    elif m < 0:
        phases = np.concatenate([phases[-m:], phases[:-m] + TWO_PI])
        frame = np.concatenate([frame[:, -m:], frame[:, :-m]], axis=1)
    xi = 0.5 * np.diff(phases)
    gaps = np.concatenate([xi, [np.pi - xi.sum()]])
    return AlcoveData(xi=xi, phases=phases, frame=frame,
                      degenerate=bool(gaps.min() < tol_degenerate))


def alcove_coordinates(g: np.ndarray) -> np.ndarray:
    return alcove_decomposition(g).xi


def spectral_gradient(g: np.ndarray, k: int) -> np.ndarray:
    """Gradient of the k-th alcove coordinate at a regular g.

    Left-trivialized with respect to the lam=1 scalar product:
    d Xi_k(g X) = <grad, X> for X in su(n).  First-order eigenvalue
    perturbation; only valid away from the alcove boundary.
    """
    dec = alcove_decomposition(g)
    vk = dec.frame[:, k - 1]
    vk1 = dec.frame[:, k]
    pk = np.outer(vk, vk.conj())
    pk1 = np.outer(vk1, vk1.conj())
    return 1.0j * (pk1 - pk)


# ---------------------------------------------------------------------------
# random elements
# ---------------------------------------------------------------------------

def random_special_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random SU(n) via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((n, n)) + 1.0j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    det = np.linalg.det(q)
    return q * det ** (-1.0 / n)


def random_su_vector(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1.0j * rng.standard_normal((n, n))
    return scale * project_su(z)
