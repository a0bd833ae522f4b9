"""Symplectic normal forms of positive-semidefinite quadratic forms.

Two routes are provided:

* :func:`degenerate_williamson` handles forms whose kernel is a symplectic
  subspace.  It splits off a symplectic basis of the kernel, reduces the form
  to its ω-complement and runs the positive-definite Williamson construction
  there.
* :func:`hormander_psd_normal_form` handles every PSD form.  It peels off
  symplectic planes one kind at a time: elliptic planes ``mu (s^2 + t^2)``,
  parabolic planes ``s^2`` spanned by ``{x, Fx}``, and finally pure kernel
  planes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NotPositiveSemidefiniteError,
    NotSymplecticSubspaceError,
    NumericalDegeneracyError,
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
    symplectic_complement_projector,
    symplectic_gram_schmidt,
    symplectic_residual,
)
from .williamson import _antisym, _diagonal_frame, _mode_frame, diagonal_residual, williamson_decompose

__all__ = [
    "DegenerateDecomposition",
    "HormanderPSDForm",
    "kernel_is_symplectic",
    "degenerate_williamson",
    "hormander_psd_normal_form",
]


@dataclass(frozen=True)
class DegenerateDecomposition:
    """``s.T @ m @ s == diag(spectrum) ⊕ diag(spectrum)``; the last ``n - k`` entries are zero."""

    s: np.ndarray
    spectrum: np.ndarray
    k: int

    def residuals(self, m) -> tuple[float, float]:
        return symplectic_residual(self.s), diagonal_residual(self.s, m, self.spectrum)


@dataclass(frozen=True)
class HormanderPSDForm:
    s: np.ndarray
    k: int
    l: int
    mu: np.ndarray

    @property
    def n(self) -> int:
        return self.s.shape[0] // 2

    @property
    def normal_form(self) -> np.ndarray:
        """``[[A_n, 0], [0, B_n]]`` with ``A_n = diag(mu, 1 (l times), 0...)`` and ``B_n = diag(mu, 0...)``."""
        n = self.n
        a = np.zeros(n)
        b = np.zeros(n)
        a[: self.k] = self.mu
        b[: self.k] = self.mu
        a[self.k : self.k + self.l] = 1.0
        return np.diag(np.concatenate([a, b]))

    def residuals(self, m) -> tuple[float, float]:
        return symplectic_residual(self.s), inf_norm(self.s.T @ np.asarray(m, float) @ self.s - self.normal_form)


def _psd_input(m, tol: Tolerances):
    m = as_matrix(m, square=True)
    _half_dim(m)
    eig = symmetric_eigen(m, tol)
    floor = tol.rank_tol * scale_of(m)
    if eig.values.size and eig.values[0] < -floor:
        raise NotPositiveSemidefiniteError(
            f"matrix is not positive-semidefinite (smallest eigenvalue {eig.values[0]:.3e})",
            float(-eig.values[0]),
        )
    return m, eig, eig.values < floor


def _omega_gram_singular_values(basis: np.ndarray, tol: Tolerances) -> np.ndarray:
    j = _std_form(basis.shape[0] // 2)
    g = basis.T @ j @ basis
    return np.sqrt(np.clip(symmetric_eigen(g.T @ g, tol).values, 0.0, None))


def kernel_is_symplectic(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when ``ker m`` is a symplectic subspace (vacuously so for a trivial kernel)."""
    _, eig, zero = _psd_input(m, tol)
    basis = eig.q[:, zero]
    if basis.shape[1] == 0:
        return True
    if basis.shape[1] % 2:
        return False
    return bool(_omega_gram_singular_values(basis, tol)[0] > tol.rank_tol)


def degenerate_williamson(m, tol: Tolerances = DEFAULT_TOL) -> DegenerateDecomposition:
    """Williamson normal form of a PSD matrix whose kernel is symplectic.

    The columns of the returned ``s`` are ``(s_1..s_k, q_1..q_{n-k}, s_{k+1}..s_{2k},
    q_{n-k+1}..q_{2(n-k)})``: elliptic pairs from the reduced positive-definite
    form interleaved with a symplectic basis of the kernel.
    """
    m, eig, zero = _psd_input(m, tol)
    n = m.shape[0] // 2
    if not zero.any():
        dec = williamson_decompose(m, tol)
        return DegenerateDecomposition(dec.s, dec.spectrum, n)
    trivial = _diagonal_frame(m, tol, zero_floor=tol.rank_tol * scale_of(m))
    if trivial is not None:
        s, spectrum = trivial
        return DegenerateDecomposition(s, spectrum, int(np.count_nonzero(spectrum)))

    kernel = eig.q[:, zero]
    dim_kernel = kernel.shape[1]
    if dim_kernel % 2:
        raise NotSymplecticSubspaceError(
            f"kernel has odd dimension {dim_kernel} and cannot be symplectic", 0.0
        )
    sv = _omega_gram_singular_values(kernel, tol)
    if sv[0] <= tol.rank_tol:
        raise NotSymplecticSubspaceError(
            f"kernel of dimension {dim_kernel} is not symplectic "
            f"(smallest ω-Gram singular value {sv[0]:.3e})",
            float(sv[0]),
        )
    q = symplectic_gram_schmidt(kernel, tol)
    half = dim_kernel // 2
    qu, qv = q[:, :half], q[:, half:]
    k = n - half

    if k == 0:
        return DegenerateDecomposition(np.hstack([qu, qv]), np.zeros(n), 0)

    # range of M, moved into the ω-complement of the kernel; M sees no change
    # because only kernel vectors are subtracted
    complement = symplectic_complement_projector(qu, qv) @ eig.q[:, ~zero]
    t = symplectic_gram_schmidt(complement, tol)
    reduced = t.T @ m @ t
    inner = williamson_decompose(0.5 * (reduced + reduced.T), tol)
    cols = t @ inner.s
    s = np.hstack([cols[:, :k], qu, cols[:, k:], qv])
    spectrum = np.concatenate([inner.spectrum, np.zeros(n - k)])
    return DegenerateDecomposition(s, spectrum, k)


def hormander_psd_normal_form(m, tol: Tolerances = DEFAULT_TOL) -> HormanderPSDForm:
    """Symplectic basis putting a PSD form into the shape

    ``f = sum_{j<=k} mu_j (s_j^2 + t_j^2) + sum_{k<j<=k+l} s_j^2``.

    Raises NumericalDegeneracyError when some residual subspace fits none of
    the three plane types, which means ``m`` was not PSD within tolerance.
    """
    m, eig, zero = _psd_input(m, tol)
    n = m.shape[0] // 2
    dim = 2 * n
    if not zero.any():
        dec = williamson_decompose(m, tol)
        return HormanderPSDForm(dec.s, n, 0, dec.spectrum)

    scale = scale_of(m)
    floor = tol.rank_tol * scale
    j = _std_form(n)
    f = j @ m

    # elliptic planes: nonzero spectrum of K = R J R with R the PSD square root
    root = np.where(zero, 0.0, np.sqrt(np.clip(eig.values, 0.0, None)))
    r = (eig.q * root) @ eig.q.T
    r = 0.5 * (r + r.T)
    x, y, mu, _ = _mode_frame(_antisym(r @ j @ r), tol, zero_floor=tol.rank_tol * scale**2)
    xe = j @ r @ x / np.sqrt(mu)
    ye = j @ r @ y / np.sqrt(mu)
    k = mu.size

    w = orthonormal_span(symplectic_complement_projector(xe, ye), dim - 2 * k, tol)

    # parabolic planes {x, Fx}: F^2 vanishes on what is left
    xp, yp = [], []
    while w.shape[1]:
        restricted = w.T @ m @ w
        sub = symmetric_eigen(0.5 * (restricted + restricted.T), tol)
        if sub.values[-1] <= floor:
            break
        v = w @ sub.q[:, -1]
        v = _canonical_signs((v / np.sqrt(v @ m @ v))[:, None])[:, 0]
        fv = f @ v
        if np.linalg.norm(f @ fv) > np.sqrt(tol.rank_tol) * scale * max(1.0, np.linalg.norm(fv)):
            raise NumericalDegeneracyError(
                f"no plane type applies on a residual subspace of dimension {w.shape[1]} "
                "(F^2 does not vanish there; is the matrix PSD?)",
                float(np.linalg.norm(f @ fv)),
            )
        xp.append(v)
        yp.append(-fv)
        if w.shape[1] == 2:
            w = w[:, :0]
            break
        proj = symplectic_complement_projector(v[:, None], -fv[:, None])
        w = orthonormal_span(proj @ w, w.shape[1] - 2, tol)

    # kernel planes: what remains is annihilated by M and must be symplectic
    try:
        kq = symplectic_gram_schmidt(w, tol)
    except NotSymplecticSubspaceError as exc:
        raise NumericalDegeneracyError(
            f"residual subspace of dimension {w.shape[1]} fits no plane type: {exc}", exc.residual
        ) from None
    half = kq.shape[1] // 2
    l = len(xp)

    def block(cols):
        return np.column_stack(cols) if cols else np.zeros((dim, 0))

    s = np.hstack([xe, block(xp), kq[:, :half], ye, block(yp), kq[:, half:]])
    return HormanderPSDForm(s, k, l, mu)
