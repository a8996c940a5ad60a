"""Grand Lebesgue Space norms, nonlinear integral operators and their bound functions
on finite atomic measure spaces."""

from .bounds import (
    BoundTable,
    EverywhereInfiniteError,
    HammersteinPoint,
    HolderTriple,
    InfimumResult,
    NowhereFiniteError,
    UpsilonFactors,
    conjugate_exponent,
    hammerstein_delta,
    hammerstein_table,
    infimum_open_1d,
    infimum_open_2d,
    kappa,
    majorant_factors,
    nemytskii_table,
    nemytskii_W,
    parse_r_grid,
    raw_factors,
    upsilon,
    urysohn_table,
    urysohn_theta,
    w_aux,
)
from .generating import (
    GeneratingFunction,
    GeneratingFunction2,
    beta_transform,
    constant,
    constant2,
    eval_gen,
    natural2_from_kernel,
    natural_from_function,
    power,
    tabulated,
)
from .instance import Instance, load_instance
from .norms import (
    PGrid,
    QRGrid,
    UnboundedNormError,
    ess_sup,
    gls_norm,
    gls_norm_2d,
    gls_sup,
    gls_sup_2d,
    lp_norm,
    mixed_norm,
    power_apply,
    tail_function,
)
from .operators import (
    FactorizationWitness,
    OperatorEvaluationError,
    check_factorization,
    default_z_grid,
    hammerstein_apply,
    nemytskii_apply,
    urysohn_apply,
)
from .spaces import (
    GridFunction,
    InstanceError,
    Kernel2,
    MeasureSpace,
    ScalarMap2,
    ScalarMap3,
    total_mass,
    validate_instance,
)

__version__ = "0.1.0"
