"""Dense real linear algebra primitives.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  Phase-space
coordinates are ordered ``(x_1..x_n, p_1..p_n)`` and the symplectic form is
``omega(u, v) = u^T J v`` with ``J = [[0, I], [-I, 0]]``.

The only eigensolver used anywhere in the package is :func:`symmetric_eigen`,
a cyclic Jacobi method with a round-robin (parallel) pivot ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionError,
    MatrixFormatError,
    NotPositiveDefiniteError,
    NotPositiveSemidefiniteError,
    NotSymmetricError,
    NotSymplecticSubspaceError,
    NumericalDegeneracyError,
)

__all__ = [
    "Tolerances",
    "EigenDecomposition",
    "DEFAULT_TOL",
    "as_matrix",
    "inf_norm",
    "scale_of",
    "standard_symplectic_form",
    "omega",
    "symmetric_eigen",
    "matrix_power",
    "nullspace",
    "is_symplectic",
    "is_orthosymplectic",
    "symplectic_residual",
    "symplectic_gram_schmidt",
    "symplectic_complement_projector",
    "orthonormal_span",
]

_MAX_SWEEPS = 60


@dataclass(frozen=True)
class Tolerances:
    """Relative thresholds; each is multiplied by ``max(1, ||input||_inf)`` where used.

    ``rank_tol`` decides when an eigenvalue counts as zero, ``sym_tol`` bounds
    symmetry and commutator residuals, ``conv_tol`` stops the Jacobi sweeps.
    """

    rank_tol: float = 1e-9
    sym_tol: float = 1e-8
    conv_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rank_tol", "sym_tol", "conv_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")

    def scaled(self, factor: float) -> "Tolerances":
        return replace(
            self,
            rank_tol=self.rank_tol * factor,
            sym_tol=self.sym_tol * factor,
            conv_tol=self.conv_tol * factor,
        )


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class EigenDecomposition:
    q: np.ndarray
    values: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.q * self.values) @ self.q.T


def as_matrix(data, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Convert ``data`` to a finite 2-D float64 array, raising MatrixFormatError."""
    try:
        m = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"{name}: entries are not real numbers ({exc})") from None
    if m.ndim != 2:
        raise MatrixFormatError(f"{name}: expected a 2-D array, got {m.ndim} dimension(s)")
    bad = np.argwhere(~np.isfinite(m))
    if bad.size:
        i, j = bad[0]
        raise MatrixFormatError(f"{name}: non-finite entry at row {i}, col {j}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name}: expected a square matrix, got {m.shape[0]}x{m.shape[1]}")
    return m


def inf_norm(m: np.ndarray) -> float:
    """Maximum absolute row sum (0 for empty input)."""
    m = np.atleast_2d(m)
    if m.size == 0:
        return 0.0
    return float(np.abs(m).sum(axis=1).max())


def scale_of(m: np.ndarray) -> float:
    return max(1.0, inf_norm(m))


def _half_dim(m: np.ndarray, name: str = "matrix") -> int:
    dim = m.shape[0]
    if dim % 2:
        raise DimensionError(f"{name}: dimension {dim} is odd; phase space must be 2n-dimensional")
    return dim // 2


def standard_symplectic_form(n: int) -> np.ndarray:
    """Return ``J_{2n} = [[0, I_n], [-I_n, 0]]``."""
    if int(n) != n or n < 1:
        raise DimensionError(f"n must be a positive integer, got {n!r}")
    return _std_form(int(n)).copy()


@lru_cache(maxsize=64)
def _std_form(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    j.setflags(write=False)
    return j


def omega(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Symplectic pairing ``u^T J v`` for vectors or column blocks."""
    u = np.asarray(u, dtype=float)
    dim = u.shape[0]
    if dim % 2:
        raise DimensionError(f"vectors of odd length {dim} do not live in phase space")
    return u.T @ _std_form(dim // 2) @ np.asarray(v, dtype=float)


# --------------------------------------------------------------------------
# Jacobi eigensolver


@lru_cache(maxsize=64)
def _round_robin(dim: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Disjoint pivot pairs covering every (p, q) once per sweep (circle method)."""
    players = list(range(dim + (dim % 2)))
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < dim and q < dim]
        if pairs:
            p, q = (np.array(x, dtype=np.intp) for x in zip(*pairs))
            rounds.append((p, q))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _canonical_signs(q: np.ndarray) -> np.ndarray:
    """Flip columns so that the first non-negligible component is positive."""
    for k in range(q.shape[1]):
        col = q[:, k]
        big = np.flatnonzero(np.abs(col) > 1e-10 * max(1.0, np.abs(col).max()))
        if big.size and col[big[0]] < 0:
            q[:, k] = -col
    return q


def symmetric_eigen(m, tol: Tolerances = DEFAULT_TOL) -> EigenDecomposition:
    """Eigen-decompose a real symmetric matrix with cyclic Jacobi rotations.

    Values are returned in ascending order.  Eigenvectors are normalized and
    sign-fixed (first significant component positive), so identical inputs
    always give identical outputs.
    """
    a = as_matrix(m, square=True)
    dim = a.shape[0]
    norm = inf_norm(a)
    asym = inf_norm(a - a.T)
    if asym > tol.sym_tol * max(1.0, norm):
        raise NotSymmetricError(f"matrix is not symmetric (||m - m^T|| = {asym:.3e})", asym)
    a = 0.5 * (a + a.T)
    q = np.eye(dim)
    if dim == 0:
        return EigenDecomposition(q, np.zeros(0))

    frob = np.linalg.norm(a)
    target = tol.conv_tol * frob
    rounds = _round_robin(dim)
    tiny = np.finfo(float).tiny
    for _ in range(_MAX_SWEEPS):
        if np.linalg.norm(a - np.diag(np.diag(a))) <= target:
            break
        for p, r in rounds:
            apq = a[p, r]
            active = np.abs(apq) > tiny
            if not active.any():
                continue
            p, r, apq = p[active], r[active], apq[active]
            theta = (a[r, r] - a[p, p]) / (2.0 * apq)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            g = np.eye(dim)
            g[p, p] = c
            g[r, r] = c
            g[p, r] = s
            g[r, p] = -s
            a = g.T @ a @ g
            q = q @ g
        a = 0.5 * (a + a.T)
    else:
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off > target:
            raise NumericalDegeneracyError(
                f"Jacobi iteration did not converge in {_MAX_SWEEPS} sweeps (off = {off:.3e})", off
            )

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(_canonical_signs(q[:, order]), values[order])


# --------------------------------------------------------------------------
# Spectral functions


def _power_values(values: np.ndarray, s: float, scale: float, tol: Tolerances) -> np.ndarray:
    floor = tol.rank_tol * scale
    if values.size and values.min() < -floor:
        raise NotPositiveSemidefiniteError(
            f"matrix has a negative eigenvalue {values.min():.3e}", float(-values.min())
        )
    if s < 0:
        if values.size and values.min() <= floor:
            raise NotPositiveDefiniteError(
                f"negative power {s} of a singular matrix (smallest eigenvalue {values.min():.3e})",
                float(values.min()),
            )
        return values**s
    if float(s).is_integer():
        return values ** int(s)
    return np.where(values <= floor, 0.0, np.abs(values)) ** s


def matrix_power(m, s: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``m**s`` for symmetric positive-semidefinite ``m`` via its eigenbasis.

    Non-integer and negative powers need eigenvalues at or above zero;
    negative powers additionally need ``m`` to be positive-definite.
    """
    m = as_matrix(m, square=True)
    eig = symmetric_eigen(m, tol)
    vals = _power_values(eig.values, float(s), scale_of(m), tol)
    out = (eig.q * vals) @ eig.q.T
    return 0.5 * (out + out.T)


def nullspace(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the kernel of a symmetric PSD matrix."""
    m = as_matrix(m, square=True)
    eig = symmetric_eigen(m, tol)
    zero = np.abs(eig.values) < tol.rank_tol * scale_of(m)
    return eig.q[:, zero]


def orthonormal_span(vectors: np.ndarray, dim: int | None = None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column span of ``vectors``.

    With ``dim`` given, the ``dim`` dominant directions are returned; otherwise
    the numerical rank is decided by ``rank_tol`` relative to the largest
    squared singular value.
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.shape[1] == 0:
        return np.zeros((vectors.shape[0], 0))
    gram = vectors.T @ vectors
    eig = symmetric_eigen(gram, tol)
    vals = eig.values[::-1]
    vecs = eig.q[:, ::-1]
    if dim is None:
        dim = int(np.sum(vals > tol.rank_tol * max(vals[0], 0.0))) if vals[0] > 0 else 0
    if dim == 0:
        return np.zeros((vectors.shape[0], 0))
    if vals[dim - 1] <= 0:
        raise NumericalDegeneracyError(f"span has rank below the requested {dim}")
    basis = vectors @ vecs[:, :dim] / np.sqrt(vals[:dim])
    # one re-orthogonalization pass against rounding in the Gram route
    basis, _ = _mgs(basis)
    return basis


def _mgs(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v = v.copy()
    norms = np.zeros(v.shape[1])
    for k in range(v.shape[1]):
        for j in range(k):
            v[:, k] -= (v[:, j] @ v[:, k]) * v[:, j]
        norms[k] = np.linalg.norm(v[:, k])
        v[:, k] /= norms[k]
    return v, norms


# --------------------------------------------------------------------------
# Symplectic predicates


def symplectic_residual(s) -> float:
    """``||S^T J S - J||_inf``."""
    s = as_matrix(s, square=True)
    j = _std_form(_half_dim(s))
    return inf_norm(s.T @ j @ s - j)


def is_symplectic(s, tol: Tolerances = DEFAULT_TOL) -> bool:
    s = as_matrix(s, square=True)
    _half_dim(s)
    return symplectic_residual(s) <= tol.sym_tol * max(1.0, inf_norm(s) ** 2)


def is_orthosymplectic(s, tol: Tolerances = DEFAULT_TOL) -> bool:
    s = as_matrix(s, square=True)
    if not is_symplectic(s, tol):
        return False
    return inf_norm(s.T @ s - np.eye(s.shape[0])) <= tol.sym_tol


def symplectic_complement_projector(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Projector onto the ω-complement of span(x_i, y_i), given ω(x_i, y_j) = δ_ij.

    The complement is taken along the symplectic subspace itself, so vectors
    inside span(x, y) map to zero.
    """
    dim = x.shape[0]
    j = _std_form(dim // 2)
    return np.eye(dim) + (x @ y.T - y @ x.T) @ j


def symplectic_gram_schmidt(basis, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Turn the columns of ``basis`` into a symplectic basis of the same span.

    Returns columns ``(u_1..u_m, v_1..v_m)`` with ``ω(u_i, v_j) = δ_ij`` and
    ``ω(u_i, u_j) = ω(v_i, v_j) = 0``.  Each step pivots on the remaining pair
    with the largest ``|ω|``.  Raises NotSymplecticSubspaceError when the span
    is not a symplectic subspace.
    """
    w = as_matrix(basis, name="basis")
    dim, count = w.shape
    _half_dim(np.empty((dim, dim)), "ambient space")
    if count % 2:
        raise NotSymplecticSubspaceError(
            f"{count} vectors cannot span a symplectic subspace (odd count)", 0.0
        )
    if count == 0:
        return np.zeros((dim, 0))
    j = _std_form(dim // 2)

    gram = w.T @ j @ w
    sv = np.sqrt(np.clip(symmetric_eigen(gram.T @ gram, tol).values, 0.0, None))
    # the ω-Gram of a symplectic span is nondegenerate relative to the basis scale
    colscale = max(float(np.max(np.sum(w * w, axis=0))), np.finfo(float).tiny)
    if sv[0] <= tol.rank_tol * colscale:
        raise NotSymplecticSubspaceError(
            f"span is not symplectic: smallest singular value of the ω-Gram matrix is {sv[0]:.3e}",
            float(sv[0]),
        )

    us, vs = [], []
    remaining = w.copy()
    while remaining.shape[1]:
        g = remaining.T @ j @ remaining
        upper = np.triu(np.abs(g), 1)
        i, k = np.unravel_index(np.argmax(upper), upper.shape)
        pivot = g[i, k]
        if abs(pivot) <= tol.rank_tol * colscale:
            raise NotSymplecticSubspaceError(
                f"span is not symplectic: residual {remaining.shape[1]}-dimensional part is isotropic "
                f"(largest |ω| = {abs(pivot):.3e})",
                float(abs(pivot)),
            )
        u = remaining[:, i].copy()
        v = remaining[:, k] / pivot
        us.append(u)
        vs.append(v)
        keep = [c for c in range(remaining.shape[1]) if c not in (i, k)]
        rest = remaining[:, keep]
        if rest.shape[1]:
            # w <- w - ω(w, v) u + ω(w, u) v
            rest = rest - np.outer(u, rest.T @ j @ v) + np.outer(v, rest.T @ j @ u)
        remaining = rest
    return np.column_stack(us + vs)
