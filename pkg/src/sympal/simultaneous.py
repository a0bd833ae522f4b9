"""Simultaneous symplectic diagonalization of Poisson-commuting quadratic forms.

Strategy: bring the first form (or, for semidefinite inputs, a normalized sum
of all forms) to Williamson normal form.  Every later form, written in those
coordinates, couples only modes that share the same spectral key, and on such
a block it commutes with ``J``.  An orthosymplectic change of basis inside
each block then diagonalizes it without disturbing the earlier forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .degenerate import degenerate_williamson
from .errors import (
    CommutatorError,
    DimensionError,
    NotPositiveDefiniteError,
    NotPositiveSemidefiniteError,
    NotSymplecticSubspaceError,
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
    matrix_power,
    orthonormal_span,
    scale_of,
    symmetric_eigen,
    symplectic_residual,
)
from .williamson import CLUSTER_GAP, _check_pd, _clusters, _diagonal_frame, diagonal_residual, williamson_decompose

__all__ = [
    "SimDiagResult",
    "commutator_norm",
    "poisson_commutes",
    "simultaneous_williamson",
    "simultaneous_williamson_psd",
    "family_diagonalize",
    "power_commutator_residual",
    "geometric_mean",
]


@dataclass(frozen=True)
class SimDiagResult:
    """One symplectic ``s`` and, per input form, its spectrum in the shared modes."""

    s: np.ndarray
    spectra: tuple[np.ndarray, ...]

    def residuals(self, forms) -> tuple[float, list[float]]:
        return (
            symplectic_residual(self.s),
            [diagonal_residual(self.s, m, spec) for m, spec in zip(forms, self.spectra)],
        )


def commutator_norm(a, b) -> float:
    """``||[J a, J b]||_inf``."""
    a = as_matrix(a, square=True, name="a")
    b = as_matrix(b, square=True, name="b")
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    j = _std_form(_half_dim(a))
    fa, fb = j @ a, j @ b
    return inf_norm(fa @ fb - fb @ fa)


def poisson_commutes(a, b, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether the quadratic forms of ``a`` and ``b`` Poisson-commute (``[Ja, Jb] = 0``)."""
    res = commutator_norm(a, b)
    return res <= tol.sym_tol * scale_of(np.asarray(a, float)) * scale_of(np.asarray(b, float))


def _require_commuting(forms, tol: Tolerances):
    for i, j in combinations(range(len(forms)), 2):
        if not poisson_commutes(forms[i], forms[j], tol):
            res = commutator_norm(forms[i], forms[j])
            err = CommutatorError(
                f"forms {i} and {j} do not Poisson-commute (||[JA, JB]|| = {res:.6e})", res
            )
            err.indices = (i, j)
            raise err


def _complex_pairs(block: np.ndarray, tol: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    """Orthosymplectic ``O`` with ``O^T block O = diag(g) ⊕ diag(g)`` for ``block`` commuting with J.

    Pairs are ``(x, -Jx)`` where ``x`` is the lowest Rayleigh direction left
    after deflating the previous pairs.
    """
    trivial = _diagonal_frame(block, tol)
    if trivial is not None:
        return trivial
    r = block.shape[0] // 2
    j = _std_form(r)
    q = np.eye(2 * r)
    xs, vals = [], []
    while q.shape[1]:
        h = q.T @ block @ q
        sub = symmetric_eigen(0.5 * (h + h.T), tol)
        x = q @ sub.q[:, 0]
        x = _canonical_signs((x / np.linalg.norm(x))[:, None])[:, 0]
        y = -j @ x
        xs.append(x)
        vals.append(0.5 * (x @ block @ x + y @ block @ y))
        if q.shape[1] == 2:
            break
        proj = q - np.outer(x, x @ q) - np.outer(y, y @ q)
        q = orthonormal_span(proj, q.shape[1] - 2, tol)
    x = np.column_stack(xs)
    return np.hstack([x, -j @ x]), np.asarray(vals)


def _group_modes(keys: list[np.ndarray], n: int) -> list[np.ndarray]:
    """Modes whose keys agree (relative gap ``CLUSTER_GAP``) in every component."""
    groups = [np.arange(n)]
    for key in keys:
        floor = 1e-3 * float(np.abs(key).max()) if key.size else 0.0
        refined = []
        for g in groups:
            order = g[np.argsort(key[g], kind="stable")]
            refined += [order[c] for c in _clusters(key[order], CLUSTER_GAP, floor)]
        groups = refined
    return groups


def _refine(s: np.ndarray, keys: list[np.ndarray], m: np.ndarray, tol: Tolerances):
    n = s.shape[0] // 2
    mt = s.T @ m @ s
    mt = 0.5 * (mt + mt.T)
    gate = np.sqrt(tol.sym_tol) * max(scale_of(mt), 1.0)
    new_s = s.copy()
    gamma = np.zeros(n)
    covered = np.zeros_like(mt, dtype=bool)
    for g in _group_modes(keys, n):
        idx = np.concatenate([g, g + n])
        block = mt[np.ix_(idx, idx)]
        covered[np.ix_(idx, idx)] = True
        jr = _std_form(g.size)
        drift = inf_norm(jr @ block - block @ jr)
        if drift > gate:
            raise NumericalDegeneracyError(
                f"cluster refinement failed: block over modes {g.tolist()} does not commute "
                f"with J (||Jb - bJ|| = {drift:.3e})",
                drift,
            )
        o, vals = _complex_pairs(block, tol)
        new_s[:, idx] = s[:, idx] @ o
        gamma[g] = vals
    leak = float(np.abs(np.where(covered, 0.0, mt)).max()) if mt.size else 0.0
    if leak > gate:
        raise NumericalDegeneracyError(
            f"cluster refinement failed: coupling {leak:.3e} between modes with different spectra", leak
        )
    return new_s, gamma


def _finish(s: np.ndarray, forms, tol: Tolerances) -> SimDiagResult:
    """Read spectra off the diagonal and order modes canonically."""
    n = s.shape[0] // 2
    spectra = []
    for m in forms:
        d = np.diag(s.T @ m @ s)
        spectra.append(0.5 * (d[:n] + d[n:]))
    zero = [spec <= tol.rank_tol * scale_of(m) for spec, m in zip(spectra, forms)]

    def sort_key(i):
        out = []
        for spec, z in zip(spectra, zero):
            out += [bool(z[i]), float(spec[i])]
        return tuple(out)

    perm = np.array(sorted(range(n), key=sort_key), dtype=int)
    s = s[:, np.concatenate([perm, perm + n])]
    spectra = [np.where(z[perm], 0.0, spec[perm]) for spec, z in zip(spectra, zero)]
    return SimDiagResult(s, tuple(spectra))


def _joint_pd(forms, tol: Tolerances) -> SimDiagResult:
    dec = williamson_decompose(forms[0], tol)
    s, keys = dec.s, [dec.spectrum]
    for m in forms[1:]:
        s, gamma = _refine(s, keys, m, tol)
        keys.append(gamma)
    return _finish(s, forms, tol)


def _joint_psd(forms, tol: Tolerances) -> SimDiagResult:
    total = sum(m / scale_of(m) for m in forms)
    try:
        dec = degenerate_williamson(0.5 * (total + total.T), tol)
    except NotSymplecticSubspaceError as exc:
        raise NotSymplecticSubspaceError(
            f"intersection of the radicals is not a symplectic subspace: {exc}", exc.residual
        ) from None
    s, keys = dec.s, [dec.spectrum]
    for m in forms:
        s, gamma = _refine(s, keys, m, tol)
        keys.append(gamma)
    return _finish(s, forms, tol)


def _prepare(forms, names=None) -> list[np.ndarray]:
    out = []
    for i, m in enumerate(forms):
        m = as_matrix(m, square=True, name=names[i] if names else f"form {i}")
        _half_dim(m)
        out.append(m)
    if len({m.shape for m in out}) > 1:
        raise DimensionError(f"forms have different dimensions: {[m.shape[0] for m in out]}")
    return out


def _require_pd(forms, tol: Tolerances):
    for i, m in enumerate(forms):
        try:
            _check_pd(m, tol)
        except NotPositiveDefiniteError as exc:
            raise NotPositiveDefiniteError(f"form {i}: {exc}", exc.residual) from None


def _require_psd(forms, tol: Tolerances):
    for i, m in enumerate(forms):
        low = symmetric_eigen(m, tol).values[0]
        if low < -tol.rank_tol * scale_of(m):
            raise NotPositiveSemidefiniteError(
                f"form {i}: matrix is not positive-semidefinite (smallest eigenvalue {low:.3e})", float(-low)
            )


def simultaneous_williamson(a, b, tol: Tolerances = DEFAULT_TOL) -> SimDiagResult:
    """One symplectic basis diagonalizing two Poisson-commuting positive-definite forms."""
    forms = _prepare([a, b], ["a", "b"])
    _require_pd(forms, tol)
    _require_commuting(forms, tol)
    return _joint_pd(forms, tol)


def simultaneous_williamson_psd(a, b, tol: Tolerances = DEFAULT_TOL) -> SimDiagResult:
    """Semidefinite version; the joint radical ``ker a ∩ ker b`` must be symplectic.

    Modes where every form vanishes are ordered last.
    """
    forms = _prepare([a, b], ["a", "b"])
    _require_psd(forms, tol)
    _require_commuting(forms, tol)
    return _joint_psd(forms, tol)


def family_diagonalize(forms, tol: Tolerances = DEFAULT_TOL) -> SimDiagResult:
    """Fold the pairwise refinement over a list of pairwise Poisson-commuting PD forms."""
    forms = _prepare(list(forms))
    if not forms:
        raise PreconditionError("empty family")
    _require_pd(forms, tol)
    _require_commuting(forms, tol)
    return _joint_pd(forms, tol)


def power_commutator_residual(a, b, s: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """``||[J a^s, J b^s]|| / (||a^s|| ||b^s||)`` for PD ``a, b`` with ``[a, b] = [Ja, Jb] = 0``."""
    a, b = _prepare([a, b], ["a", "b"])
    _require_pd([a, b], tol)
    bound = tol.sym_tol * scale_of(a) * scale_of(b)
    plain = inf_norm(a @ b - b @ a)
    if plain > bound:
        raise CommutatorError(f"a and b do not commute (||[A, B]|| = {plain:.6e})", plain)
    twisted = commutator_norm(a, b)
    if twisted > bound:
        raise CommutatorError(f"Ja and Jb do not commute (||[JA, JB]|| = {twisted:.6e})", twisted)
    a_s = matrix_power(a, s, tol)
    b_s = matrix_power(b, s, tol)
    return commutator_norm(a_s, b_s) / (inf_norm(a_s) * inf_norm(b_s))


def geometric_mean(a, b, t: float = 0.5, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Weighted geometric mean ``a^{1/2} (a^{-1/2} b a^{-1/2})^t a^{1/2}``, ``0 <= t <= 1``."""
    if not (0.0 <= t <= 1.0):
        raise PreconditionError(f"t must lie in [0, 1], got {t!r}")
    a, b = _prepare([a, b], ["a", "b"])
    eig_a = _check_pd(a, tol)
    _check_pd(b, tol)
    root = np.sqrt(eig_a.values)
    a_half = (eig_a.q * root) @ eig_a.q.T
    a_mhalf = (eig_a.q / root) @ eig_a.q.T
    inner = a_mhalf @ b @ a_mhalf
    out = a_half @ matrix_power(0.5 * (inner + inner.T), t, tol) @ a_half
    return 0.5 * (out + out.T)
