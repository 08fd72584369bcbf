"""The internally fused double D = SU(n) x SU(n).

Carries the 2-form omega, the group-commutator moment map, the conjugation
action, the mapping-class automorphisms S_D / T_D / Q / rho_D, quasi-Hamiltonian
vector fields of invariant functions and their Poisson bracket.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import AmbiguousMatch, BasePointMismatch, SolveFailure
from .linalg import scalar_product

TOL_SOLVE = 1e-8
TOL_FD = 1e-6


@dataclass(frozen=True)
class DoublePoint:
    """A pair (A, B) of special unitary matrices of the same size."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.a.shape != self.b.shape:
            raise ValueError("components must have equal dimension")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def close_to(self, other: "DoublePoint") -> float:
        return max(float(np.abs(self.a - other.a).max()),
                   float(np.abs(self.b - other.b).max()))


@dataclass(frozen=True)
class DoubleTangent:
    """Tangent vector (vA, vB) at a DoublePoint; A^{-1} vA and B^{-1} vB lie in su(n)."""

    base: DoublePoint
    va: np.ndarray
    vb: np.ndarray

    def left(self):
        """Left-trivialized components (A^{-1} vA, B^{-1} vB)."""
        return self.base.a.conj().T @ self.va, self.base.b.conj().T @ self.vb


def tangent_from_lie(x: DoublePoint, xa: np.ndarray, xb: np.ndarray) -> DoubleTangent:
    """Tangent with left-trivialized components (xa, xb) in su(n) + su(n)."""
    return DoubleTangent(x, x.a @ xa, x.b @ xb)


# ---------------------------------------------------------------------------
# moment map and conjugation action
# ---------------------------------------------------------------------------

def moment(x: DoublePoint) -> np.ndarray:
    """Group commutator A B A^{-1} B^{-1}."""
    ai = x.a.conj().T
    bi = x.b.conj().T
    return x.a @ x.b @ ai @ bi


def conjugate(x: DoublePoint, g: np.ndarray) -> DoublePoint:
    gi = g.conj().T
    return DoublePoint(g @ x.a @ gi, g @ x.b @ gi)


def moment_differential(t: DoubleTangent) -> np.ndarray:
    """Directional derivative of the moment map, by the product rule."""
    a, b = t.base.a, t.base.b
    ai, bi = a.conj().T, b.conj().T
    va, vb = t.va, t.vb
    return (va @ b @ ai @ bi
            + a @ vb @ ai @ bi
            - a @ b @ ai @ va @ ai @ bi
            - a @ b @ ai @ bi @ vb @ bi)


# ---------------------------------------------------------------------------
# the 2-form
# ---------------------------------------------------------------------------

def _wedge(alpha1, beta1, alpha2, beta2, lam):
    """Evaluate <alpha ^, beta> on a pair of tangents given the 1-form values."""
    return scalar_product(alpha1, beta2, lam) - scalar_product(alpha2, beta1, lam)


def omega_eval(t1: DoubleTangent, t2: DoubleTangent, lam: float = 1.0) -> float:
    """The quasi-Hamiltonian 2-form evaluated on two tangents at a common point."""
    if t1.base is not t2.base and t1.base.close_to(t2.base) > 1e-12:
        raise BasePointMismatch("tangents live at different points")
    a, b = t1.base.a, t1.base.b
    ai, bi = a.conj().T, b.conj().T
    ab = a @ b
    ba = b @ a
    abi = ab.conj().T
    bai = ba.conj().T

    def pieces(t):
        la = ai @ t.va          # A^{-1} dA
        rb = t.vb @ bi          # dB B^{-1}
        ra = t.va @ ai          # dA A^{-1}
        lb = bi @ t.vb          # B^{-1} dB
        dab = abi @ (t.va @ b + a @ t.vb)   # (AB)^{-1} d(AB)
        dba = bai @ (t.vb @ a + b @ t.va)   # (BA)^{-1} d(BA)
        return la, rb, ra, lb, dab, dba

    la1, rb1, ra1, lb1, dab1, dba1 = pieces(t1)
    la2, rb2, ra2, lb2, dab2, dba2 = pieces(t2)
    two_omega = (_wedge(la1, rb1, la2, rb2, lam)
                 + _wedge(ra1, lb1, ra2, lb2, lam)
                 - _wedge(dab1, dba1, dab2, dba2, lam))
    return 0.5 * two_omega


def infinitesimal_action(x: DoublePoint, zeta: np.ndarray) -> DoubleTangent:
    """Generating vector field of the conjugation action for zeta in su(n)."""
    return DoubleTangent(x, zeta @ x.a - x.a @ zeta, zeta @ x.b - x.b @ zeta)


def moment_map_identity_residual(x: DoublePoint, zeta: np.ndarray,
                                 t: DoubleTangent, lam: float = 1.0) -> float:
    """Defect of omega(zeta_D, t) = (1/2) <mu^{-1} dmu + dmu mu^{-1}, zeta>."""
    lhs = omega_eval(infinitesimal_action(x, zeta), t, lam)
    mu = moment(x)
    mui = mu.conj().T
    dmu = moment_differential(t)
    rhs = 0.5 * scalar_product(mui @ dmu + dmu @ mui, zeta, lam)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# mapping-class automorphisms
# ---------------------------------------------------------------------------

def sd_map(x: DoublePoint) -> DoublePoint:
    """(A, B) -> (B^{-1}, B A B^{-1})."""
    bi = x.b.conj().T
    return DoublePoint(bi, x.b @ x.a @ bi)


def td_map(x: DoublePoint) -> DoublePoint:
    """(A, B) -> (AB, B)."""
    return DoublePoint(x.a @ x.b, x.b)


def q_map(x: DoublePoint) -> DoublePoint:
    """Conjugation by mu(x)^{-1}; the central element S_D^4."""
    return conjugate(x, moment(x).conj().T)


def rho_map(x: DoublePoint) -> DoublePoint:
    """Structure-reversing map (A, B) -> (conj(B), conj(A))."""
    return DoublePoint(x.b.conj(), x.a.conj())


def sd_pushforward(t: DoubleTangent) -> DoubleTangent:
    """Analytic differential of sd_map."""
    x = t.base
    b, bi = x.b, x.b.conj().T
    va, vb = t.va, t.vb
    new_va = -bi @ vb @ bi
    new_vb = vb @ x.a @ bi + b @ va @ bi - b @ x.a @ bi @ vb @ bi
    return DoubleTangent(sd_map(x), new_va, new_vb)


def td_pushforward(t: DoubleTangent) -> DoubleTangent:
    x = t.base
    return DoubleTangent(td_map(x), t.va @ x.b + x.a @ t.vb, t.vb)


# ---------------------------------------------------------------------------
# invariant functions and quasi-Hamiltonian vector fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantFunction:
    """Conjugation-invariant function on D with left-trivialized gradients.

    ``grad(x)`` returns (Ga, Gb) in su(n) x su(n) such that the differential
    along a tangent t is <Ga, A^{-1} vA> + <Gb, B^{-1} vB> in the lam=1
    scalar product.
    """

    value: Callable[[DoublePoint], float]
    grad: Callable[[DoublePoint], tuple]
    name: str = "h"

    def differential(self, t: DoubleTangent) -> float:
        ga, gb = self.grad(t.base)
        xa, xb = t.left()
        return scalar_product(ga, xa) + scalar_product(gb, xb)


def alpha_function(k: int) -> InvariantFunction:
    """Spectral coordinate of the A component: alcove coordinate k of A."""
    return InvariantFunction(
        value=lambda x, k=k: float(linalg.alcove_coordinates(x.a)[k - 1]),
        grad=lambda x, k=k: (linalg.spectral_gradient(x.a, k),
                             np.zeros_like(x.a)),
        name=f"alpha_{k}")


def beta_function(k: int) -> InvariantFunction:
    """Spectral coordinate of the B component."""
    return InvariantFunction(
        value=lambda x, k=k: float(linalg.alcove_coordinates(x.b)[k - 1]),
        grad=lambda x, k=k: (np.zeros_like(x.b),
                             linalg.spectral_gradient(x.b, k)),
        name=f"beta_{k}")


def retrace_a_function() -> InvariantFunction:
    """Re tr A, a simple conjugation-invariant test function."""
    return InvariantFunction(
        value=lambda x: float(np.real(np.trace(x.a))),
        grad=lambda x: (-2.0 * linalg.project_su(x.a), np.zeros_like(x.a)),
        name="retrace_a")


def _tangent_basis(x: DoublePoint):
    basis = linalg.su_basis(x.n)
    tangents = [tangent_from_lie(x, e, np.zeros_like(x.a)) for e in basis]
    tangents += [tangent_from_lie(x, np.zeros_like(x.a), e) for e in basis]
    return basis, tangents


def _omega_gram(tangents, lam):
    m = len(tangents)
    gram = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            gram[i, j] = omega_eval(tangents[i], tangents[j], lam)
            gram[j, i] = -gram[i, j]
    return gram


def qh_vector_field(h: InvariantFunction, x: DoublePoint, lam: float = 1.0,
                    tol_solve: float = TOL_SOLVE) -> DoubleTangent:
    """Vector field v with omega(v, .) = dh and the moment map constant along v.

    Assembled on an orthonormal basis of su(n)+su(n); the minimum-norm
    least-squares solution is taken in any degenerate directions.
    """
    basis, tangents = _tangent_basis(x)
    m = len(basis)
    gram = _omega_gram(tangents, lam)
    ga, gb = h.grad(x)
    rhs_form = np.array([scalar_product(ga, e) for e in basis]
                        + [scalar_product(gb, e) for e in basis])
    # moment-map conservation rows: flattened real/imag of dmu along the basis
    cons = np.zeros((2 * x.n * x.n, 2 * m))
    for j, t in enumerate(tangents):
        dmu = moment_differential(t).ravel()
        cons[:, j] = np.concatenate([dmu.real, dmu.imag])
    mat = np.vstack([gram.T, cons])  # row I solves omega(v, T_I) = dh(T_I)
    rhs = np.concatenate([rhs_form, np.zeros(2 * x.n * x.n)])
    coeff, *_ = np.linalg.lstsq(mat, rhs, rcond=None)
    res = float(np.abs(mat @ coeff - rhs).max())
    if res > tol_solve:
        raise SolveFailure(f"vector-field residual {res:.3e} for {h.name}")
    va = x.a @ sum(c * e for c, e in zip(coeff[:m], basis))
    vb = x.b @ sum(c * e for c, e in zip(coeff[m:], basis))
    return DoubleTangent(x, va, vb)


def poisson_bracket(f: InvariantFunction, h: InvariantFunction,
                    x: DoublePoint, lam: float = 1.0) -> float:
    """{f, h} = omega(v_f, v_h) for invariant functions."""
    return omega_eval(qh_vector_field(f, x, lam), qh_vector_field(h, x, lam), lam)


def omega_kernel_spectrum(x: DoublePoint, lam: float = 1.0) -> np.ndarray:
    """Singular values of the omega Gram matrix on the standard tangent basis."""
    _, tangents = _tangent_basis(x)
    return np.linalg.svd(_omega_gram(tangents, lam), compute_uv=False)


# ---------------------------------------------------------------------------
# gauge comparison
# ---------------------------------------------------------------------------

def gauge_equivalent(x: DoublePoint, xp: DoublePoint, tol_match: float = 1e-8):
    """Test whether xp = (g A g^{-1}, g B g^{-1}) for some g; return (flag, g).

    Strategy: align the eigen-frames of the B components, then fix the
    residual torus freedom against the A components.
    """
    dec = linalg.alcove_decomposition(x.b)
    decp = linalg.alcove_decomposition(xp.b)
    if dec.degenerate or decp.degenerate:
        raise AmbiguousMatch("non-regular B component; compare invariants instead")
    if float(np.abs(dec.xi - decp.xi).max()) > tol_match:
        return False, None
    n = x.n
    m = dec.frame.conj().T @ x.a @ dec.frame
    mp = decp.frame.conj().T @ xp.a @ decp.frame
    # residual freedom is diagonal: need t with t m t^{-1} = mp
    phases = np.zeros(n)
    reached = np.zeros(n, dtype=bool)
    reached[0] = True
    # propagate phase differences through the largest available entries
    for _ in range(n):
        for j in range(n):
            if not reached[j]:
                continue
            for l in range(n):
                if reached[l] or abs(m[j, l]) < 1e-6:
                    continue
                # (t m t^{-1})_{jl} = e^{i(p_j - p_l)} m_{jl}
                phases[l] = phases[j] - np.angle(mp[j, l] / m[j, l])
                reached[l] = True
    if not reached.all():
        raise AmbiguousMatch("A component too sparse to fix the torus freedom")
    t = np.diag(np.exp(1.0j * phases))
    g = decp.frame @ t @ dec.frame.conj().T
    det = np.linalg.det(g)
    g = g * det ** (-1.0 / n)
    ok = conjugate(x, g).close_to(xp) <= tol_match
    return (ok, g if ok else None)
