"""Dual-cone analysis of 1-particle operators on fermionic Fock space.

Membership tests, the canonical decomposition into extreme elements,
exact N-particle spectra over occupation-number bases, and toy models
with collective excitations.
"""
__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    FermiconeError,
    GapConditionError,
    InvalidArgument,
    ModelHypothesisError,
    NonUniqueIndex,
    NotInDualCone,
)
from .numeric import DEFAULT_POLICY, NumericPolicy
from .spectral import (
    DensitySpectrum,
    Membership,
    OneBodySpectrum,
    is_dual_cone_member,
    is_n_representable,
    min_pairing,
)
from .fock import (
    DiagonalOperator,
    Level,
    ManyBodySpectrum,
    OccupationState,
    WedgeProjector,
    basis_size,
    build_one_body_diagonal,
    enumerate_states,
    full_spectrum,
    many_body_eigenvalue,
    verify_partition,
    wedge_projector_realize,
)
from .dual_cone import (
    CanonicalDecomposition,
    ExtremeElement,
    ExtremeKind,
    KernelRelation,
    canonical_decompose,
    find_r,
    is_extreme,
    kernel_compare,
    kernel_dim_bound_check,
    reconstruct,
    spans_extreme_ray,
)
from .decompositions import (
    FactorSpace,
    ManyBodyState,
    PovAtom,
    PovMeasure,
    PseudoSpectralDecomposition,
    StateClass,
    classify_state,
    expectation,
    grassmann_factor_space,
    occupation_measures,
    pseudo_expectation,
    pseudo_spectral,
    realize,
    semi_spectral,
    spectral,
)
from .models import (
    LevelDiagram,
    Model74Params,
    TypeIIParams,
    TypeIParams,
    analyze_levels,
    build_thm74,
    kernel_dimension_74,
    type_i_model,
    type_ii_model,
)
from .kernels import BACKEND
