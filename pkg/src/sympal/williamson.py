"""Symplectic spectrum and Williamson normal form of positive-definite forms.

For symmetric positive-definite ``M`` the matrix ``K = M^{1/2} J M^{1/2}`` is
antisymmetric, and ``-K^2 = K^T K`` is symmetric positive-definite with every
eigenvalue ``mu_j**2`` appearing twice.  All spectral work therefore runs on
the symmetric Jacobi solver; no general eigensolver is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    NotPositiveDefiniteError,
    NumericalDegeneracyError,
    PreconditionError,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    _canonical_signs,
    _half_dim,
    _std_form,
    as_matrix,
    inf_norm,
    orthonormal_span,
    scale_of,
    symmetric_eigen,
    symplectic_residual,
)

__all__ = [
    "CLUSTER_GAP",
    "WilliamsonDecomposition",
    "SpectralProjector",
    "symplectic_spectrum",
    "williamson_decompose",
    "is_orthosymplectically_diagonalizable",
    "orthosymplectic_decompose",
    "eigenspace_projectors",
    "hamiltonian_flow",
    "flow_matrix",
    "diagonal_residual",
]

# relative gap below which two symplectic eigenvalues are treated as one cluster
CLUSTER_GAP = 1e-6


@dataclass(frozen=True)
class WilliamsonDecomposition:
    """``s.T @ m @ s == diag(spectrum) ⊕ diag(spectrum)`` with ``s`` symplectic."""

    s: np.ndarray
    spectrum: np.ndarray

    @property
    def normal_form(self) -> np.ndarray:
        return np.diag(np.concatenate([self.spectrum, self.spectrum]))

    def residuals(self, m) -> tuple[float, float]:
        """(``||S^T J S - J||``, ``||S^T M S - Λ⊕Λ||``), both in the inf-norm."""
        return symplectic_residual(self.s), diagonal_residual(self.s, m, self.spectrum)


@dataclass(frozen=True)
class SpectralProjector:
    mu: float
    p: np.ndarray

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.p)))


def diagonal_residual(s: np.ndarray, m, spectrum) -> float:
    spectrum = np.asarray(spectrum, dtype=float)
    target = np.diag(np.concatenate([spectrum, spectrum]))
    return inf_norm(s.T @ np.asarray(m, dtype=float) @ s - target)


def _check_pd(m: np.ndarray, tol: Tolerances):
    eig = symmetric_eigen(m, tol)
    floor = tol.rank_tol * scale_of(m)
    if eig.values.size and eig.values[0] <= floor:
        raise NotPositiveDefiniteError(
            f"matrix is not positive-definite (smallest eigenvalue {eig.values[0]:.3e})",
            float(eig.values[0]),
        )
    return eig


def _pd_input(m, tol: Tolerances):
    m = as_matrix(m, square=True)
    _half_dim(m)
    if m.shape[0] == 0:
        raise DimensionError("empty matrix")
    return m, _check_pd(m, tol)


def _clusters(values: np.ndarray, gap: float = CLUSTER_GAP, floor: float = 0.0) -> list[np.ndarray]:
    """Split ascending ``values`` into runs whose consecutive relative gap is <= ``gap``.

    ``floor`` puts a lower bound on the magnitude the gap is measured against,
    so that values near zero are compared on an absolute scale.
    """
    if values.size == 0:
        return []
    groups, start = [], 0
    for i in range(1, values.size):
        if values[i] - values[i - 1] > gap * max(abs(values[i]), floor, np.finfo(float).tiny):
            groups.append(np.arange(start, i))
            start = i
    groups.append(np.arange(start, values.size))
    return groups


def _pair_spectrum(k: np.ndarray, tol: Tolerances):
    """Eigen-data of ``K^T K`` with its doubled eigenvalues checked for pairing."""
    sq = k.T @ k
    eig = symmetric_eigen(0.5 * (sq + sq.T), tol)
    nu = np.clip(eig.values, 0.0, None)
    top = max(float(nu[-1]), np.finfo(float).tiny) if nu.size else 1.0
    mismatch = np.abs(nu[1::2] - nu[0::2])
    if mismatch.size and mismatch.max() > tol.sym_tol * top:
        raise NumericalDegeneracyError(
            "eigenvalues of -K^2 do not pair up; the spectrum is numerically degenerate "
            f"(worst mismatch {mismatch.max():.3e})",
            float(mismatch.max()),
        )
    return eig, nu


def _normal_mode_pairs(k: np.ndarray, basis: np.ndarray, sq: np.ndarray, tol: Tolerances):
    """Orthonormal pairs ``(x, y)`` spanning ``basis`` with ``Kx = -mu y`` and ``Ky = mu x``.

    ``basis`` spans one μ-cluster of ``sq = K^T K``.  Each step takes the lowest
    Rayleigh direction left in the cluster, pairs it with ``-Kx/mu`` and deflates.
    """
    xs, ys, mus = [], [], []
    q = basis
    while q.shape[1]:
        if q.shape[1] == 1:
            raise NumericalDegeneracyError("odd-dimensional eigenspace of -K^2; cannot pair normal modes")
        h = q.T @ sq @ q
        sub = symmetric_eigen(0.5 * (h + h.T), tol)
        x = q @ sub.q[:, 0]
        x /= np.linalg.norm(x)
        x = _canonical_signs(x[:, None])[:, 0]
        mu = float(np.sqrt(max(x @ sq @ x, 0.0)))
        y = -(k @ x) / mu
        y -= (y @ x) * x
        y /= np.linalg.norm(y)
        xs.append(x)
        ys.append(y)
        mus.append(mu)
        if q.shape[1] > 2:
            proj = q - np.outer(x, x @ q) - np.outer(y, y @ q)
            q = orthonormal_span(proj, q.shape[1] - 2, tol)
        else:
            q = q[:, :0]
    return xs, ys, mus


def _mode_frame(k: np.ndarray, tol: Tolerances, zero_floor: float | None = None):
    """Orthogonal normal-mode frame of an antisymmetric ``K``.

    Returns ``(X, Y, mu, kernel)``: ``K X = -Y diag(mu)``, ``K Y = X diag(mu)``
    with ``mu`` ascending and positive.  When ``zero_floor`` is given, eigenvalues
    of ``K^T K`` at or below it form the kernel block, returned separately.
    """
    eig, nu = _pair_spectrum(k, tol)
    sq = k.T @ k
    sq = 0.5 * (sq + sq.T)
    kernel = eig.q[:, :0]
    if zero_floor is not None:
        nz = nu > zero_floor
        kernel = eig.q[:, ~nz]
        nu, q = nu[nz], eig.q[:, nz]
    else:
        q = eig.q
    xs, ys, mus = [], [], []
    for group in _clusters(np.sqrt(nu)):
        gx, gy, gm = _normal_mode_pairs(k, q[:, group], sq, tol)
        xs += gx
        ys += gy
        mus += gm
    dim = k.shape[0]
    x = np.column_stack(xs) if xs else np.zeros((dim, 0))
    y = np.column_stack(ys) if ys else np.zeros((dim, 0))
    mu = np.asarray(mus)
    order = np.argsort(mu, kind="stable")
    return x[:, order], y[:, order], mu[order], kernel


def _sqrt_and_inverse(eig) -> tuple[np.ndarray, np.ndarray]:
    root = np.sqrt(eig.values)
    r = (eig.q * root) @ eig.q.T
    rinv = (eig.q / root) @ eig.q.T
    return 0.5 * (r + r.T), 0.5 * (rinv + rinv.T)


def _antisym(k: np.ndarray) -> np.ndarray:
    return 0.5 * (k - k.T)


def symplectic_spectrum(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Symplectic eigenvalues of a positive-definite ``m``, ascending.

    >>> symplectic_spectrum([[5.0, 3.0], [3.0, 2.0]]).round(12)
    array([1.])
    """
    m, eig = _pd_input(m, tol)
    r, _ = _sqrt_and_inverse(eig)
    j = _std_form(m.shape[0] // 2)
    _, nu = _pair_spectrum(_antisym(r @ j @ r), tol)
    return np.sqrt(0.5 * (nu[0::2] + nu[1::2]))


def _diagonal_frame(m: np.ndarray, tol: Tolerances, zero_floor: float | None = None):
    """Mode permutation for an ``m`` that already reads ``diag(d) ⊕ diag(d)``, else None.

    Modes are sorted ascending; with ``zero_floor`` given, modes at or below
    it are moved to the end.  The permutation acts identically on the ``x``
    and ``p`` blocks, so it is orthosymplectic.
    """
    n = m.shape[0] // 2
    bound = tol.sym_tol * scale_of(m)
    d = np.diag(m)
    if np.abs(m - np.diag(d)).max(initial=0.0) > bound or np.abs(d[:n] - d[n:]).max(initial=0.0) > bound:
        return None
    spec = 0.5 * (d[:n] + d[n:])
    zero = spec <= zero_floor if zero_floor is not None else np.zeros(n, dtype=bool)
    order = np.lexsort((spec, zero))
    perm = np.concatenate([order, order + n])
    return np.eye(2 * n)[:, perm], np.where(zero[order], 0.0, spec[order])


def williamson_decompose(m, tol: Tolerances = DEFAULT_TOL) -> WilliamsonDecomposition:
    """Symplectic ``S`` with ``S^T M S = Λ ⊕ Λ`` for positive-definite ``m``.

    ``S = M^{-1/2} O (Λ⊕Λ)^{1/2}`` where the orthogonal ``O = [X Y]`` brings
    ``K = M^{1/2} J M^{1/2}`` to ``[[0, Λ], [-Λ, 0]]``.  A matrix that is
    already in normal form is only reordered.
    """
    m, eig = _pd_input(m, tol)
    n = m.shape[0] // 2
    trivial = _diagonal_frame(m, tol)
    if trivial is not None:
        return WilliamsonDecomposition(*trivial)
    r, rinv = _sqrt_and_inverse(eig)
    k = _antisym(r @ _std_form(n) @ r)
    x, y, mu, _ = _mode_frame(k, tol)
    if mu.size != n:
        raise NumericalDegeneracyError(f"found {mu.size} normal modes, expected {n}")
    o = np.hstack([x, y])
    s = rinv @ o * np.sqrt(np.concatenate([mu, mu]))
    return WilliamsonDecomposition(s, mu)


def _j_commutator(m: np.ndarray) -> float:
    j = _std_form(m.shape[0] // 2)
    return inf_norm(j @ m - m @ j)


def is_orthosymplectically_diagonalizable(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``J m == m J`` within ``sym_tol``."""
    m = as_matrix(m, square=True)
    _half_dim(m)
    return _j_commutator(m) <= tol.sym_tol * scale_of(m)


def orthosymplectic_decompose(m, tol: Tolerances = DEFAULT_TOL) -> WilliamsonDecomposition:
    """Williamson decomposition with an orthogonal ``S``; needs ``J m == m J``.

    When ``m`` commutes with ``J`` the eigenvectors of ``-K^2 = m^2`` are
    eigenvectors of ``m`` and the frame construction yields an orthogonal ``S``.
    """
    m = as_matrix(m, square=True)
    _half_dim(m)
    if not is_orthosymplectically_diagonalizable(m, tol):
        res = _j_commutator(m)
        raise PreconditionError(f"matrix does not commute with J (||Jm - mJ|| = {res:.3e})", res)
    dec = williamson_decompose(m, tol)
    dev = inf_norm(dec.s.T @ dec.s - np.eye(m.shape[0]))
    if dev > tol.sym_tol * scale_of(m):
        raise NumericalDegeneracyError(f"diagonalizing matrix is not orthogonal (deviation {dev:.3e})", dev)
    return dec


def _lagrange_even_coeffs(nodes: np.ndarray, j: int) -> np.ndarray:
    """Coefficients (highest first) in ``w = z^2`` of the real polynomial that is
    1 at ``±i nodes[j]`` and 0 at ``±i nodes[l]``, ``l != j``."""
    coeffs = np.array([1.0])
    for l, mu_l in enumerate(nodes):
        if l == j:
            continue
        coeffs = np.polymul(coeffs, np.array([1.0, mu_l**2])) / (mu_l**2 - nodes[j] ** 2)
    return coeffs


def eigenspace_projectors(m, tol: Tolerances = DEFAULT_TOL) -> list[SpectralProjector]:
    """One real projector per distinct symplectic eigenvalue, as polynomials in ``F = J m``.

    Near-equal eigenvalues (relative gap below ``CLUSTER_GAP``) share a projector.
    """
    m = as_matrix(m, square=True)
    mu = symplectic_spectrum(m, tol)
    groups = _clusters(mu)
    reps = np.array([mu[g].mean() for g in groups])
    dim = m.shape[0]
    if reps.size == 1:
        return [SpectralProjector(float(reps[0]), np.eye(dim))]
    f = _std_form(dim // 2) @ m
    f2 = f @ f
    out = []
    for j, rep in enumerate(reps):
        coeffs = _lagrange_even_coeffs(reps, j)
        p = coeffs[0] * np.eye(dim)
        for c in coeffs[1:]:
            p = p @ f2 + c * np.eye(dim)
        out.append(SpectralProjector(float(rep), p))
    return out


def _mode_rotation(mu: np.ndarray, t: float) -> np.ndarray:
    n = mu.size
    c, s = np.cos(mu * t), np.sin(mu * t)
    rot = np.zeros((2 * n, 2 * n))
    idx = np.arange(n)
    rot[idx, idx] = c
    rot[idx + n, idx + n] = c
    rot[idx, idx + n] = s
    rot[idx + n, idx] = -s
    return rot


def flow_matrix(m, t: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``exp(t J m)`` evaluated exactly in Williamson normal-mode coordinates."""
    dec = williamson_decompose(m, tol)
    j = _std_form(dec.spectrum.size)
    s_inv = -j @ dec.s.T @ j
    return dec.s @ _mode_rotation(dec.spectrum, float(t)) @ s_inv


def hamiltonian_flow(m, z0, t: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solution at time ``t`` of ``dz/dt = J m z`` with ``z(0) = z0``.

    Each normal mode rotates with angular frequency ``mu_j``; for ``m = I`` in
    one degree of freedom the flow is ``exp(tJ) = I cos t + J sin t``.
    """
    m = as_matrix(m, square=True)
    z0 = np.asarray(z0, dtype=float)
    if z0.shape != (m.shape[0],):
        raise DimensionError(f"initial state has shape {z0.shape}, expected ({m.shape[0]},)")
    return flow_matrix(m, t, tol) @ z0
