"""Low-rank tensor SVD toolkit.

Order-3 Tucker tensor algebra, higher-order orthogonal iteration (HOOI),
Schatten-q sin-theta subspace metrics, randomized low-rank ensembles, a
3-uniform hypergraph planted-clique toolkit with a Gaussianization
reduction, and a deterministic Monte Carlo experiment harness.
"""

from .tensor import (
    matricize,
    mode_product,
    kronecker,
    tucker_compose,
    frobenius_norm,
    subtensor,
)
from .subspaces import (
    svd_leading,
    principal_angles,
    sin_theta_norm,
    projector,
    orthonormal_complement,
    signal_strength,
)
from .hooi import (
    TuckerFactors,
    HooiResult,
    hosvd_init,
    hooi,
    objective,
    project_estimate,
    warm_start,
)
from .estimator import TuckerSVD
from .streams import (
    RngStream,
    derive_stream,
    ROLE_FACTORS,
    ROLE_CORE,
    ROLE_NOISE,
    ROLE_WARMSTART,
    ROLE_GRAPH,
    ROLE_REDUCTION,
)
from .ensembles import (
    Instance,
    haar_orthonormal,
    rescaled_core,
    diagonal_core,
    noise_tensor,
    make_instance,
)
from .clique import (
    CliqueInstance,
    ReductionParams,
    CliqueSpectralResult,
    sample_hypergraph,
    spectral_clique_estimate,
    recover_clique,
    detect_half,
    gaussianize,
    embed,
    clique_block_supports,
)
from .io import read_mat, read_t3, write_mat, write_t3
from .validation import ContractViolationError, NumericalFailureError

__version__ = "0.1.0"

__all__ = [
    "matricize",
    "mode_product",
    "kronecker",
    "tucker_compose",
    "frobenius_norm",
    "subtensor",
    "svd_leading",
    "principal_angles",
    "sin_theta_norm",
    "projector",
    "orthonormal_complement",
    "signal_strength",
    "TuckerFactors",
    "HooiResult",
    "hosvd_init",
    "hooi",
    "objective",
    "project_estimate",
    "warm_start",
    "TuckerSVD",
    "RngStream",
    "derive_stream",
    "ROLE_FACTORS",
    "ROLE_CORE",
    "ROLE_NOISE",
    "ROLE_WARMSTART",
    "ROLE_GRAPH",
    "ROLE_REDUCTION",
    "Instance",
    "haar_orthonormal",
    "rescaled_core",
    "diagonal_core",
    "noise_tensor",
    "make_instance",
    "CliqueInstance",
    "ReductionParams",
    "CliqueSpectralResult",
    "sample_hypergraph",
    "spectral_clique_estimate",
    "recover_clique",
    "detect_half",
    "gaussianize",
    "embed",
    "clique_block_supports",
    "read_t3",
    "write_t3",
    "read_mat",
    "write_mat",
    "ContractViolationError",
    "NumericalFailureError",
    "__version__",
]
