"""Three-variable extension of Gauss's arithmetic-geometric mean."""

from .agm import agm_mean, elliptic_k, landen_descend
from .agm3 import (
    IterationStep,
    MeanResult,
    extended_mean,
    iterate,
    moduli_from_triple,
    next_moduli,
    next_moduli_via_angles,
    step,
)
from .core import (
    AGMError,
    AnglePair,
    DomainError,
    ModuliPair,
    NegativeRadicand,
    NonConvergence,
    NonFiniteError,
    NonPositiveRadicand,
    OrderViolation,
    ParamError,
    RatioPair,
    SlowConvergence,
    SumViolation,
    Triple,
    ValidationError,
    angles_to_moduli,
    moduli_to_angles,
    ratios,
    validate_triple,
)
from .hypergeom import (
    AppellF1Params,
    Gauss2F1Params,
    SeriesBudget,
    appell_f1,
    f1_pde_residual,
    f1_reduce,
    gauss_2f1,
    pochhammer,
)
from .quadrature import (
    QuadratureConfig,
    gauss_legendre,
    integral_theta_form,
    integral_u_form,
)

__version__ = "0.1.0"
