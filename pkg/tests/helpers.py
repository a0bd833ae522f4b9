"""Random constructions used as forward oracles across the test suite."""

import numpy as np


def random_unitary(n, rng):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def unitary_to_orthosymplectic(u):
    """U = A + iB  ->  [[A, -B], [B, A]], which is orthogonal and symplectic."""
    return np.block([[u.real, -u.imag], [u.imag, u.real]])


def random_orthosymplectic(n, rng):
    return unitary_to_orthosymplectic(random_unitary(n, rng))


def random_symplectic(n, rng, squeeze=0.7):
    """Bloch-Messiah style product O1 diag(e^r, e^-r) O2."""
    r = rng.uniform(-squeeze, squeeze, n)
    d = np.diag(np.exp(np.concatenate([r, -r])))
    return random_orthosymplectic(n, rng) @ d @ random_orthosymplectic(n, rng)


def symplectic_inverse(s):
    n = s.shape[0] // 2
    j = std_j(n)
    return -j @ s.T @ j


def std_j(n):
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def random_pd(dim, rng, floor=0.1):
    a = rng.standard_normal((dim, dim))
    return a @ a.T + floor * np.eye(dim)


def congruent_normal_form(spectrum, s0):
    """M = S0^{-T} (Λ⊕Λ) S0^{-1}, so that S0 diagonalizes M with spectrum Λ."""
    d = np.diag(np.concatenate([spectrum, spectrum]))
    inv = symplectic_inverse(s0)
    m = inv.T @ d @ inv
    return 0.5 * (m + m.T)


def inf_norm(a):
    return float(np.abs(np.atleast_2d(a)).sum(axis=1).max())
