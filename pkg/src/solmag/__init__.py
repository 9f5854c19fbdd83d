"""Magnetic flows on compact quotients of the 3-D solvable geometry.

The package has three layers:

* ``euler`` / ``averaging`` — the reduced momentum flow on the unit
  sphere, closed-orbit detection, the level average of the vertical
  momentum, and the entropy of the time-one map obtained by integrating
  its absolute value over the sphere.
* ``soldyn`` — the full left-trivialized flow on the group, its first
  integrals, contractible closed orbits, lattice suspension data, the
  Lyapunov exponent on the invariant stretching set, and the integrable
  product-twist variant.
* ``liealg`` — exact rational Lie-algebra computations: bracket-map
  kernels, decomposable generation certificates, second Betti numbers,
  exactness of 2-forms, and displacing commuting pairs.
"""

from .euler import (
    DEFAULT_H,
    ERR_NONFINITE,
    ERR_UNMAGNETIZED,
    KIND_DEGENERATE,
    KIND_HYPERBOLIC,
    KIND_PEAK,
    KIND_PIT,
    CriticalPoint,
    CriticalPointReport,
    NonFiniteStateError,
    OrbitRecord,
    casimir,
    casimir_range,
    classify_critical_points,
    euler_field,
    euler_point,
    gradient_pairing,
    hamiltonian,
    integrate_orbit,
    is_on_sphere,
    rk4_project_step,
    separatrix_values,
)
from .averaging import (
    DEFAULT_GRID,
    DEFAULT_T_MAX,
    ERR_EMPTY_LEVEL,
    ERR_STATIONARY,
    EntropyResult,
    NuBarResult,
    ProfilePoint,
    detect_period,
    entropy,
    entropy_curve,
    nu_bar_at,
    nubar_profile,
    seed_on_level,
)
from .soldyn import (
    ERR_NO_CLOSED_ORBIT,
    ERR_NOT_HYPERBOLIC,
    ClosedOrbitResult,
    LatticeSpec,
    SolOrbitRecord,
    VariationOrbitRecord,
    first_integrals,
    lattice_from_matrix,
    lyapunov_on_anosov_set,
    reconstruct_closed_orbit,
    sol_field,
    sol_integrate,
    sol_point,
    variation_field,
    variation_integrals,
    variation_integrate,
    variation_lyapunov,
    variation_point,
)
from .liealg import (
    ERR_NOT_EXACT,
    GenerationCertificate,
    LieAlgebra,
    TwoForm,
    TwoVector,
    bracket_map,
    builtin_algebra,
    ce_b2,
    exact_primitive,
    find_displacing_pair,
    kernel_L,
    kernel_generators,
    load_structure_constants,
    load_structure_file,
    verify_decomposable_generation,
    wedge,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GRID",
    "DEFAULT_H",
    "DEFAULT_T_MAX",
    "ERR_EMPTY_LEVEL",
    "ERR_NONFINITE",
    "ERR_NOT_EXACT",
    "ERR_NOT_HYPERBOLIC",
    "ERR_NO_CLOSED_ORBIT",
    "ERR_STATIONARY",
    "ERR_UNMAGNETIZED",
    "KIND_DEGENERATE",
    "KIND_HYPERBOLIC",
    "KIND_PEAK",
    "KIND_PIT",
    "ClosedOrbitResult",
    "CriticalPoint",
    "CriticalPointReport",
    "EntropyResult",
    "GenerationCertificate",
    "LatticeSpec",
    "LieAlgebra",
    "NonFiniteStateError",
    "NuBarResult",
    "OrbitRecord",
    "ProfilePoint",
    "SolOrbitRecord",
    "TwoForm",
    "TwoVector",
    "VariationOrbitRecord",
    "bracket_map",
    "builtin_algebra",
    "casimir",
    "casimir_range",
    "ce_b2",
    "classify_critical_points",
    "detect_period",
    "entropy",
    "entropy_curve",
    "euler_field",
    "euler_point",
    "exact_primitive",
    "find_displacing_pair",
    "first_integrals",
    "gradient_pairing",
    "hamiltonian",
    "integrate_orbit",
    "is_on_sphere",
    "kernel_L",
    "kernel_generators",
    "lattice_from_matrix",
    "load_structure_constants",
    "load_structure_file",
    "lyapunov_on_anosov_set",
    "nu_bar_at",
    "nubar_profile",
    "reconstruct_closed_orbit",
    "rk4_project_step",
    "seed_on_level",
    "sol_field",
    "sol_integrate",
    "sol_point",
    "separatrix_values",
    "variation_field",
    "variation_integrals",
    "variation_integrate",
    "variation_lyapunov",
    "variation_point",
    "verify_decomposable_generation",
    "wedge",
]
