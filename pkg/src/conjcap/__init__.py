"""Numerics for quantum-channel capacities, cloning machines, and
degradability classification on small-dimensional systems."""

__version__ = "0.1.0"

from .capacity import (
    CoherentInfoResult,
    coherent_information,
    maximize_coherent_information,
    subadditivity_check,
)
from .channels import (
    ChoiMatrix,
    KrausChannel,
    StinespringIsometry,
    apply,
    channel_from_dict,
    channel_to_dict,
    choi_rank,
    choi_to_kraus,
    complementary,
    compose,
    gamma_involution,
    gamma_involution_inverse,
    kraus_to_choi,
    kraus_to_stinespring,
    load_channel,
    minimal_kraus,
    save_channel,
    stinespring_to_kraus,
)
from .cloners import (
    ClonerSpec,
    CssBasis,
    alpha_j,
    alpha_kj,
    beta_coefficients,
    build_cloner_isometry,
    clone_marginal,
    cloner_capacity_closed_form,
    conjugate_degrading_map_1to2,
    degrading_map_1to2,
    environment_shrink_factors,
    majorizes,
    one_to_m_degrading_coefficients,
    traced_b_eigenvalues,
)
from .degradability import (
    ClassificationReport,
    DegradabilityVerdict,
    Rank2QubitParams,
    candidate_conjugate_antidegrading_map,
    candidate_conjugate_degrading_map,
    classify,
    feasibility_search,
    is_entanglement_breaking,
    rank2_qubit_channel,
)
from .errors import (
    DimensionError,
    NotCompletelyPositiveError,
    ResourceLimitError,
    SingularConstructionError,
    ValidationError,
)
from .qmat import (
    DensityMatrix,
    as_density,
    conjugate,
    entropy_of_spectrum,
    hermitian_eigensystem,
    partial_trace,
    partial_transpose,
    tensor_product,
    von_neumann_entropy,
)
from .unruh import (
    BlockWeights,
    UnruhSpec,
    block_weights,
    su2_generators,
    truncation_k,
    unruh_block,
    unruh_capacity,
    unruh_capacity_entropy_route,
    unruh_outputs_maxmixed,
    unruh_sweep,
    write_sweep_csv,
)
