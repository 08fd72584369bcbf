"""The fused double: moment map, 2-form, mapping-class generators."""

import numpy as np
import pytest

from rs3b import double as dbl
from rs3b import linalg
from rs3b.double import DoublePoint


def random_point(n, rng):
    return DoublePoint(linalg.random_special_unitary(n, rng),
                       linalg.random_special_unitary(n, rng))


def random_tangent(x, rng):
    n = x.a.shape[0]
    return dbl.tangent_from_lie(x, linalg.random_su_vector(n, rng),
                                linalg.random_su_vector(n, rng))


def test_moment_commuting_pairs():
    a = linalg.random_special_unitary(3, np.random.default_rng(0))
    assert np.abs(dbl.moment(DoublePoint(a, a)) - np.eye(3)).max() < 1e-13
    assert np.abs(dbl.moment(DoublePoint(np.eye(3, dtype=complex), a))
                  - np.eye(3)).max() < 1e-13


def test_moment_hand_value():
    x = DoublePoint(np.diag([1j, -1j]),
                    np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex))
    assert np.abs(dbl.moment(x) + np.eye(2)).max() < 1e-14


def test_moment_equivariance(rng):
    for _ in range(20):
        x = random_point(3, rng)
        g = linalg.random_special_unitary(3, rng)
        lhs = dbl.moment(dbl.conjugate(x, g))
        rhs = g @ dbl.moment(x) @ g.conj().T
        assert np.abs(lhs - rhs).max() < 1e-12


def test_moment_differential_matches_fd(rng):
    from scipy.linalg import expm
    x = random_point(3, rng)
    va = linalg.random_su_vector(3, rng)
    vb = linalg.random_su_vector(3, rng)
    t = dbl.tangent_from_lie(x, va, vb)
    eps = 1e-6
    xp = DoublePoint(x.a @ expm(eps * va), x.b @ expm(eps * vb))
    xm = DoublePoint(x.a @ expm(-eps * va), x.b @ expm(-eps * vb))
    fd = (dbl.moment(xp) - dbl.moment(xm)) / (2 * eps)
    assert np.abs(dbl.moment_differential(t) - fd).max() < 1e-8


def test_mapping_class_relations(rng):
    for _ in range(10):
        x = random_point(3, rng)
        s4 = x
        for _ in range(4):
            s4 = dbl.sd_map(s4)
        assert s4.close_to(dbl.q_map(x)) < 1e-12
        st = x
        for _ in range(3):
            st = dbl.sd_map(dbl.td_map(st))
        assert dbl.sd_map(dbl.sd_map(x)).close_to(st) < 1e-12


def test_rho_is_antiholomorphic_involution(rng):
    x = random_point(3, rng)
    assert dbl.rho_map(dbl.rho_map(x)).close_to(x) < 1e-14


def test_moment_map_identity(rng, c3):
    # omega(v_zeta, t) = 1/2 <zeta, (mu^-1 dmu + dmu mu^-1)(t)> for the
    # infinitesimal conjugation action v_zeta
    for _ in range(25):
        x = random_point(3, rng)
        zeta = linalg.random_su_vector(3, rng)
        t = random_tangent(x, rng)
        assert dbl.moment_map_identity_residual(x, zeta, t, c3.lam) < 1e-9


def test_omega_antisymmetric_and_invariant(rng, c3):
    x = random_point(3, rng)
    t1, t2 = random_tangent(x, rng), random_tangent(x, rng)
    val = dbl.omega_eval(t1, t2, c3.lam)
    assert abs(dbl.omega_eval(t2, t1, c3.lam) + val) < 1e-12
    assert abs(dbl.omega_eval(dbl.sd_pushforward(t1), dbl.sd_pushforward(t2),
                              c3.lam) - val) < 1e-10
    assert abs(dbl.omega_eval(dbl.td_pushforward(t1), dbl.td_pushforward(t2),
                              c3.lam) - val) < 1e-10


def test_sd_pushforward_matches_fd(rng):
    from scipy.linalg import expm
    x = random_point(3, rng)
    va = linalg.random_su_vector(3, rng)
    vb = linalg.random_su_vector(3, rng)
    t = dbl.tangent_from_lie(x, va, vb)
    push = dbl.sd_pushforward(t)
    eps = 1e-6
    xp = dbl.sd_map(DoublePoint(x.a @ expm(eps * va), x.b @ expm(eps * vb)))
    xm = dbl.sd_map(DoublePoint(x.a @ expm(-eps * va), x.b @ expm(-eps * vb)))
    assert np.abs((xp.a - xm.a) / (2 * eps) - push.va).max() < 1e-8
    assert np.abs((xp.b - xm.b) / (2 * eps) - push.vb).max() < 1e-8


def test_invariant_vector_field_solves_omega(rng, c3):
    x = random_point(3, rng)
    if linalg.alcove_decomposition(x.a).degenerate:
        pytest.skip("degenerate sample")
    h = dbl.retrace_a_function()
    v = dbl.qh_vector_field(h, x, c3.lam)
    for _ in range(20):
        w = random_tangent(x, rng)
        assert abs(dbl.omega_eval(v, w, c3.lam) - h.differential(w)) < 1e-9
    # the field is tangent to the level set of the moment map
    assert np.abs(dbl.moment_differential(v)).max() < 1e-8


def test_abelian_poisson_algebras(rng, c3):
    x = random_point(3, rng)
    if (linalg.alcove_decomposition(x.a).degenerate
            or linalg.alcove_decomposition(x.b).degenerate):
        pytest.skip("degenerate sample")
    for j in range(1, 3):
        for k in range(j + 1, 3):
            assert abs(dbl.poisson_bracket(dbl.alpha_function(j),
                                           dbl.alpha_function(k), x, c3.lam)) < 1e-8
            assert abs(dbl.poisson_bracket(dbl.beta_function(j),
                                           dbl.beta_function(k), x, c3.lam)) < 1e-8


def test_spectral_exchange_under_s(rng):
    for _ in range(10):
        x = random_point(4, rng)
        da = linalg.alcove_decomposition(x.a)
        db = linalg.alcove_decomposition(x.b)
        if da.degenerate or db.degenerate:
            continue
        sx = dbl.sd_map(x)
        # beta o S = alpha, and alpha o S reverses the index
        assert np.abs(linalg.alcove_coordinates(sx.b) - da.xi).max() < 1e-10
        assert np.abs(linalg.alcove_coordinates(sx.a) - db.xi[::-1]).max() < 1e-10
