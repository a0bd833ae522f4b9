"""Physics-facing consumers of the normal forms.

* canonical partition functions of Poisson-commuting quadratic Hamiltonians,
  with a tensor Gauss-Hermite quadrature used as an independent check;
* Hörmander constraints obtained when a degenerate Hamiltonian is extended to
  a non-degenerate one that shares its elliptic modes;
* symplectic capacities of balls, cylinders and ellipsoids, and the Gromov
  non-squeezing predicate.

A quadratic Hamiltonian ``H(z) = z^T M z`` is identified with its matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .degenerate import kernel_is_symplectic
from .errors import (
    DimensionError,
    DivergentPartitionError,
    NotPositiveDefiniteError,
    NotSymplecticSubspaceError,
    PreconditionError,
    SpectrumMismatchError,
)
from .linalg import DEFAULT_TOL, Tolerances, _half_dim, as_matrix, scale_of, symmetric_eigen
from .simultaneous import (
    SimDiagResult,
    _joint_pd,
    _joint_psd,
    _prepare,
    _require_commuting,
    _require_psd,
    simultaneous_williamson_psd,
)
from .williamson import _check_pd, symplectic_spectrum

__all__ = [
    "QuadraticHamiltonian",
    "ThermoParams",
    "Ball",
    "Cylinder",
    "Ellipsoid",
    "ConstraintReport",
    "embed_particle",
    "partition_noninteracting",
    "partition_interacting",
    "gauss_hermite_partition",
    "hormander_constraints",
    "capacity",
    "scaled_region",
    "nonsqueezing_embeddable",
    "gromov_gap",
]


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """``H(z) = z^T m z`` on the phase space of ``particles`` particles in ``R^dims``."""

    m: np.ndarray
    particles: int = 1
    dims: int | None = None

    def __post_init__(self):
        m = as_matrix(self.m, square=True, name="hamiltonian")
        half = _half_dim(m, "hamiltonian")
        if self.particles < 1:
            raise DimensionError(f"particle count must be positive, got {self.particles}")
        dims = self.dims if self.dims is not None else half // self.particles
        if dims < 1 or dims * self.particles != half:
            raise DimensionError(
                f"hamiltonian of dimension {m.shape[0]} does not match {self.particles} particle(s) in R^{dims}"
            )
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "dims", dims)

    @property
    def phase_dim(self) -> int:
        return self.m.shape[0]

    def __call__(self, z) -> float:
        z = np.asarray(z, dtype=float)
        return float(z @ self.m @ z)


@dataclass(frozen=True)
class ThermoParams:
    beta: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("beta", "hbar"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise PreconditionError(f"{name} must be strictly positive, got {value!r}")


def _as_hamiltonian(h) -> QuadraticHamiltonian:
    return h if isinstance(h, QuadraticHamiltonian) else QuadraticHamiltonian(np.asarray(h, dtype=float))


def embed_particle(block: np.ndarray, index: int, particles: int) -> np.ndarray:
    """Place a ``2d x 2d`` single-particle matrix on particle ``index`` of the joint space.

    The joint coordinates are ``(x_1..x_N, p_1..p_N)`` with each ``x_i``, ``p_i`` in ``R^d``.
    """
    d = block.shape[0] // 2
    big = np.zeros((2 * d * particles, 2 * d * particles))
    idx = np.concatenate([np.arange(d) + index * d, np.arange(d) + index * d + d * particles])
    big[np.ix_(idx, idx)] = block
    return big


def _prefactor(half: int, params: ThermoParams) -> float:
    return (2.0 * params.hbar * params.beta) ** (-half)


def partition_noninteracting(hs, params: ThermoParams = ThermoParams(), tol: Tolerances = DEFAULT_TOL) -> float:
    """``Z = (2 hbar beta)^{-Nd} prod_i det(H_i)^{-1/2}`` for one Hamiltonian per particle.

    Each entry of ``hs`` acts on its own particle's ``2d``-dimensional phase space.
    """
    hs = [_as_hamiltonian(h) for h in hs]
    if not hs:
        raise PreconditionError("no Hamiltonians given")
    dims = {h.phase_dim for h in hs}
    if len(dims) > 1:
        raise DimensionError(f"single-particle Hamiltonians have different dimensions: {sorted(dims)}")
    n_particles = len(hs)
    log_det = 0.0
    for i, h in enumerate(hs):
        try:
            eig = _check_pd(h.m, tol)
        except NotPositiveDefiniteError as exc:
            raise NotPositiveDefiniteError(f"hamiltonian {i}: {exc}", exc.residual) from None
        log_det += float(np.log(eig.values).sum())
    embedded = [embed_particle(h.m, i, n_particles) for i, h in enumerate(hs)]
    _require_commuting(embedded, tol)
    half = embedded[0].shape[0] // 2
    return _prefactor(half, params) * float(np.exp(-0.5 * log_det))


def partition_interacting(hs, params: ThermoParams = ThermoParams(), tol: Tolerances = DEFAULT_TOL) -> float:
    """``Z = (2 hbar beta)^{-Nd} prod_j (sum_i lambda_ij)^{-1}`` over the shared normal modes.

    Individual Hamiltonians may be semidefinite; a mode on which all of them
    vanish makes the integral diverge and raises DivergentPartitionError.
    """
    hs = [_as_hamiltonian(h) for h in hs]
    if not hs:
        raise PreconditionError("no Hamiltonians given")
    forms = _prepare([h.m for h in hs])
    _require_psd(forms, tol)
    _require_commuting(forms, tol)
    if all(symmetric_eigen(m, tol).values[0] > tol.rank_tol * scale_of(m) for m in forms):
        result = _joint_pd(forms, tol)
    else:
        try:
            result = _joint_psd(forms, tol)
        except NotSymplecticSubspaceError as exc:
            raise DivergentPartitionError(
                f"the Hamiltonians share a zero direction; the partition integral diverges ({exc})", exc.residual
            ) from None
    totals = np.sum(result.spectra, axis=0)
    floor = tol.rank_tol * max(scale_of(m) for m in forms)
    zero = np.flatnonzero(totals <= floor)
    if zero.size:
        raise DivergentPartitionError(
            f"zero mode(s) {zero.tolist()} make the partition integral diverge", float(totals[zero].min())
        )
    return _prefactor(totals.size, params) * float(np.prod(1.0 / totals))


def gauss_hermite_partition(m, params: ThermoParams = ThermoParams(), nodes: int = 64) -> float:
    """Quadrature estimate of ``(2 pi hbar)^{-n} ∫ exp(-beta z^T m z) dz`` over ``R^{2n}``.

    Each axis is rescaled by ``sqrt(beta m_kk)`` so the weight ``exp(-u^2)``
    absorbs the diagonal; a tensor grid with ``nodes`` points per axis then
    integrates the remaining coupling.  Intended for total dimension <= 4.
    """
    m = as_matrix(m, square=True)
    half = _half_dim(m)
    diag = np.diag(m)
    if np.any(diag <= 0):
        raise NotPositiveDefiniteError("quadrature needs a positive diagonal", float(diag.min()))
    x, w = np.polynomial.hermite.hermgauss(nodes)
    scale = 1.0 / np.sqrt(params.beta * diag)
    coupling = params.beta * (scale[:, None] * m * scale[None, :]) - np.eye(m.shape[0])
    dim = m.shape[0]
    # the trailing (up to three) axes are broadcast, the leading ones looped over
    inner = min(dim, 3)
    outer = dim - inner
    axes = [x.reshape((-1,) + (1,) * (inner - 1 - a)) for a in range(inner)]
    inner_weight = np.ones((1,) * inner)
    for a in range(inner):
        inner_weight = inner_weight * w.reshape((-1,) + (1,) * (inner - 1 - a))
    total = 0.0
    for lead in np.ndindex(*(nodes,) * outer):
        u_lead = x[list(lead)]
        quad = float(u_lead @ coupling[:outer, :outer] @ u_lead)
        for a in range(inner):
            i = outer + a
            quad = quad + (2.0 * float(u_lead @ coupling[:outer, i])) * axes[a]
            for b in range(a, inner):
                factor = coupling[i, outer + b] * (1.0 if a == b else 2.0)
                quad = quad + factor * axes[a] * axes[b]
        total += float(np.prod(w[list(lead)])) * float(np.sum(inner_weight * np.exp(-quad)))
    return total * float(np.prod(scale)) / (2.0 * np.pi * params.hbar) ** half


@dataclass(frozen=True)
class ConstraintReport:
    """Normal coordinates shared by ``H`` (degenerate) and ``H~`` (its PD extension).

    In these coordinates ``H~(Sz) - H(Sz) = sum_l c_l z[chi_indices[l]]^2``.
    """

    s: np.ndarray
    k: int
    chi_indices: np.ndarray
    c: np.ndarray
    spectrum: np.ndarray = field(default_factory=lambda: np.zeros(0))
    extended_spectrum: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def constraints(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.s.shape[0],):
            raise DimensionError(f"point has shape {z.shape}, expected ({self.s.shape[0]},)")
        return z[self.chi_indices]


def hormander_constraints(m, mt, tol: Tolerances = DEFAULT_TOL) -> ConstraintReport:
    """Joint normal form of a PSD ``m`` with symplectic kernel and a PD ``mt`` extending it.

    The two spectra must coincide on the modes where ``m`` is non-zero; the
    remaining coordinates are the constraints ``chi`` with weights ``c``.
    """
    m = as_matrix(m, square=True, name="m")
    mt = as_matrix(mt, square=True, name="mt")
    _check_pd(mt, tol)
    if not kernel_is_symplectic(m, tol):
        raise NotSymplecticSubspaceError("kernel of the degenerate Hamiltonian is not a symplectic subspace")
    result: SimDiagResult = simultaneous_williamson_psd(m, mt, tol)
    lam, lam_t = result.spectra
    n = lam.size
    k = int(np.count_nonzero(lam > 0))
    gap = np.abs(lam[:k] - lam_t[:k])
    bad = np.flatnonzero(gap > 1e-6 * np.maximum(np.abs(lam_t[:k]), np.finfo(float).tiny))
    if bad.size:
        raise SpectrumMismatchError(
            f"spectra differ on shared modes {bad.tolist()} "
            f"(degenerate {lam[bad].tolist()} vs extended {lam_t[bad].tolist()})",
            bad.tolist(),
            float(gap.max()),
        )
    chi = np.concatenate([np.arange(k, n), np.arange(n + k, 2 * n)])
    c = np.concatenate([lam_t[k:], lam_t[k:]])
    return ConstraintReport(result.s, k, chi, c, lam, lam_t)


def gromov_gap(report: ConstraintReport, z) -> float:
    """``sum_l c_l chi_l(z)^2 - 2`` for ``z`` in the report's normal coordinates."""
    chi = report.constraints(z)
    return float(np.dot(report.c, chi * chi)) - 2.0


@dataclass(frozen=True)
class Ball:
    """``B(R) = {z : |z|^2 <= R^2}``."""

    radius: float
    n: int | None = None

    def __post_init__(self):
        _positive_radius(self.radius)


@dataclass(frozen=True)
class Cylinder:
    """``Z_j(R) = {z : x_j^2 + p_j^2 <= R^2}`` with 1-based ``axis``."""

    radius: float
    axis: int = 1
    n: int | None = None

    def __post_init__(self):
        _positive_radius(self.radius)
        if self.axis < 1 or (self.n is not None and self.axis > self.n):
            raise DimensionError(f"cylinder axis {self.axis} outside 1..{self.n}")


@dataclass(frozen=True)
class Ellipsoid:
    """``E(M) = {z : z^T M z <= 1}`` for positive-definite ``M``."""

    m: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.m, square=True, name="ellipsoid")
        _half_dim(m, "ellipsoid")
        object.__setattr__(self, "m", m)


def _positive_radius(r):
    if not (np.isfinite(r) and r > 0):
        raise PreconditionError(f"radius must be strictly positive, got {r!r}")


def capacity(region, tol: Tolerances = DEFAULT_TOL) -> float:
    """Capacity normalized by ``c(B(R)) = c(Z_j(R)) = pi R^2``.

    An ellipsoid is symplectically ``{sum mu_j (x_j^2 + p_j^2) <= 1}``; it
    contains ``B(1/sqrt(mu_max))`` and sits inside ``Z_j(1/sqrt(mu_max))`` for
    the stiffest mode, so monotonicity pins ``c = pi / mu_max``.
    """
    if isinstance(region, (Ball, Cylinder)):
        return float(np.pi * region.radius**2)
    if isinstance(region, Ellipsoid):
        mu = symplectic_spectrum(region.m, tol)
        return float(np.pi / mu[-1])
    raise TypeError(f"unsupported region {region!r}")


def scaled_region(region, t: float):
    """Image of ``region`` under ``z -> t z``."""
    if not (np.isfinite(t) and t > 0):
        raise PreconditionError(f"scale factor must be strictly positive, got {t!r}")
    if isinstance(region, Ball):
        return Ball(region.radius * t, region.n)
    if isinstance(region, Cylinder):
        return Cylinder(region.radius * t, region.axis, region.n)
    if isinstance(region, Ellipsoid):
        return Ellipsoid(region.m / t**2)
    raise TypeError(f"unsupported region {region!r}")


def nonsqueezing_embeddable(ball_r: float, cyl_r: float) -> bool:
    """Whether ``B(ball_r)`` can embed symplectically into ``Z_j(cyl_r)``."""
    return capacity(Ball(ball_r)) <= capacity(Cylinder(cyl_r))

