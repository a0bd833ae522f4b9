"""Symplectic spectra, Williamson normal forms and their applications.

>>> import sympal
>>> sympal.symplectic_spectrum([[5.0, 3.0], [3.0, 2.0]]).round(12)
array([1.])
"""

from .applications import (
    Ball,
    ConstraintReport,
    Cylinder,
    Ellipsoid,
    QuadraticHamiltonian,
    ThermoParams,
    capacity,
    embed_particle,
    gauss_hermite_partition,
    gromov_gap,
    hormander_constraints,
    nonsqueezing_embeddable,
    partition_interacting,
    partition_noninteracting,
    scaled_region,
)
from .degenerate import (
    DegenerateDecomposition,
    HormanderPSDForm,
    degenerate_williamson,
    hormander_psd_normal_form,
    kernel_is_symplectic,
)
from .errors import (
    CommutatorError,
    DimensionError,
    DivergentPartitionError,
    MatrixFormatError,
    NotPositiveDefiniteError,
    NotPositiveSemidefiniteError,
    NotSymmetricError,
    NotSymplecticSubspaceError,
    NumericalDegeneracyError,
    PreconditionError,
    SpectrumMismatchError,
    SympalError,
)
from .linalg import (
    DEFAULT_TOL,
    EigenDecomposition,
    Tolerances,
    as_matrix,
    inf_norm,
    is_orthosymplectic,
    is_symplectic,
    matrix_power,
    nullspace,
    omega,
    orthonormal_span,
    standard_symplectic_form,
    symmetric_eigen,
    symplectic_complement_projector,
    symplectic_gram_schmidt,
    symplectic_residual,
)
from .simultaneous import (
    SimDiagResult,
    commutator_norm,
    family_diagonalize,
    geometric_mean,
    poisson_commutes,
    power_commutator_residual,
    simultaneous_williamson,
    simultaneous_williamson_psd,
)
from .williamson import (
    SpectralProjector,
    WilliamsonDecomposition,
    eigenspace_projectors,
    flow_matrix,
    hamiltonian_flow,
    is_orthosymplectically_diagonalizable,
    orthosymplectic_decompose,
    symplectic_spectrum,
    williamson_decompose,
)

__version__ = "0.1.0"
