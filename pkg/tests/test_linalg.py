"""Alcove extraction, the scalar product, and spectral gradients."""

import numpy as np
import pytest

from rs3b import linalg


def test_su_basis_orthonormal():
    for n in (2, 3, 4):
        basis = linalg.su_basis(n)
        assert len(basis) == n * n - 1
        gram = np.array([[linalg.scalar_product(x, y) for y in basis]
                         for x in basis])
        assert np.abs(gram - np.eye(len(basis))).max() < 1e-12


def test_scalar_product_values():
    x = np.diag([1j, -1j])
    assert abs(linalg.scalar_product(x, x) - 1.0) < 1e-14
    assert linalg.scalar_product(np.zeros((2, 2)), x) == 0.0
    assert abs(linalg.scalar_product(x, x, lam=2.0) - 2.0) < 1e-14


def test_delta_matrix_examples():
    # n=2 at xi = pi/2: half-spaced phases give diag(-i, i)
    d = linalg.delta_matrix(np.array([np.pi / 2]))
    assert np.abs(d - np.diag([-1j, 1j])).max() < 1e-14
    # the phase angles always sum to zero, so det = 1
    rng = np.random.default_rng(5)
    for n in (2, 3, 5):
        xi = rng.uniform(0.05, 0.4, size=n - 1)
        a = linalg.delta_phase_angles(xi)
        assert abs(a.sum()) < 1e-12
        assert np.abs(np.diff(a) + xi).max() < 1e-12


def test_alcove_roundtrip(rng):
    for n in (2, 3, 4, 5):
        for _ in range(25):
            xi = rng.uniform(0.05, 2.5 / n, size=n - 1)
            g = linalg.delta_matrix(xi)
            assert np.abs(linalg.alcove_coordinates(g) - xi).max() < 1e-10


def test_alcove_conjugation_invariant(rng):
    for _ in range(30):
        g = linalg.random_special_unitary(4, rng)
        h = linalg.random_special_unitary(4, rng)
        xi = linalg.alcove_coordinates(g)
        xi2 = linalg.alcove_coordinates(h @ g @ h.conj().T)
        assert np.abs(xi - xi2).max() < 1e-9


def test_alcove_inverse_reverses(rng):
    for _ in range(30):
        g = linalg.random_special_unitary(3, rng)
        xi = linalg.alcove_coordinates(g)
        assert np.abs(linalg.alcove_coordinates(g.conj().T) - xi[::-1]).max() < 1e-10


def test_alcove_frame_reconstructs(rng):
    for n in (2, 3, 4):
        g = linalg.random_special_unitary(n, rng)
        dec = linalg.alcove_decomposition(g)
        rebuilt = dec.frame @ np.diag(np.exp(1j * dec.phases)) @ dec.frame.conj().T
        assert np.abs(rebuilt - g).max() < 1e-10


def test_alcove_flags_degenerate_spectrum():
    phi = 0.4
    g = np.diag(np.exp(1j * np.array([phi, phi, -2 * phi])))
    assert linalg.alcove_decomposition(g).degenerate


def test_spectral_gradient_is_derivative(rng):
    n, k = 3, 1
    g = linalg.random_special_unitary(n, rng)
    if linalg.alcove_decomposition(g).degenerate:
        pytest.skip("degenerate sample")
    grad = linalg.spectral_gradient(g, k)
    for _ in range(5):
        z = linalg.random_su_vector(n, rng)
        eps = 1e-6
        fp = linalg.alcove_coordinates(g @ _expm(eps * z))[k - 1]
        fm = linalg.alcove_coordinates(g @ _expm(-eps * z))[k - 1]
        fd = (fp - fm) / (2 * eps)
        assert abs(fd - linalg.scalar_product(grad, z)) < 1e-6


def _expm(x):
    from scipy.linalg import expm
    return expm(x)


def test_random_special_unitary_is_haar_like(rng):
    g = linalg.random_special_unitary(6, rng)
    assert linalg.unitarity_defect(g) < 1e-12
    assert abs(np.linalg.det(g) - 1.0) < 1e-12
