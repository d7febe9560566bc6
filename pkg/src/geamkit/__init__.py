"""geamkit: generalized equiangular measurements and what they detect.

Builds and validates GEAMs (POVMs assembled from equiangular tight frames),
certifies the conical 2-design property, derives purity-linear bounds on
indices of coincidence, constructs positive maps and the associated
entanglement witnesses, and evaluates correlation-matrix separability
criteria on bipartite states.
"""

from .basis import BasisPartition, OperatorBasis, gell_mann_basis, partition_basis
from .coincidence import (
    CoincidenceBound,
    ProbabilityTable,
    decompose_state,
    ioc_bounds,
    partial_ioc,
    probabilities,
    pure_ioc_bound,
)
from .criteria import (
    CorrelationMatrix,
    CriterionReport,
    correlation_matrix,
    enhanced_criterion,
    trace_criterion,
    trace_norm_criterion,
)
from .errors import (
    DimensionMismatchError,
    FeasibilityError,
    GeamkitError,
    NumericalError,
    PositivityError,
    PremiseError,
    ValidationError,
)
from .geam import (
    DesignCertificate,
    Geam,
    build_H_operators,
    build_geam,
    check_conical_design,
    design_caps,
    max_feasible_S,
    validate_geam,
)
from .linalg import (
    dagger,
    flip_operator,
    herm_eig,
    kron,
    partial_trace,
    require_hermitian,
    trace_norm,
)
from .maps import (
    DetectionRecord,
    PositiveMapSpec,
    Rotation,
    Witness,
    apply_map,
    apply_phi_alpha,
    build_map,
    choi_witness,
    detect,
    make_rotation,
    mehta_ratio,
    min_product_expectation,
)
from .reference import qubit_mub_geam, qubit_sic_geam, qutrit_geam
from .rng import PortableRng, derive_seed
from .states import (
    SeparableMixture,
    canonical_state,
    isotropic,
    max_entangled,
    max_mixed,
    mix_separable,
    random_separable_mixture,
    random_state,
    require_density,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
