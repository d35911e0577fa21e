"""Least-squares and square-root measurements for distinguishing pure states."""

from .analysis import (
    MixingBoundsResult,
    mixing_bounds,
    sv_perturbation_bound,
    unitary_mixing_check,
    weight_sweep,
    weighted_comparison_bounds,
)
from .errors import GUStructureError, PreconditionError, SrmError, ValidationError
from .factor import SvdFactors, pinv_sqrt, projector, psd_sqrt, rank_from_sigma, svd
from .gu import (
    GroupFunction,
    GroupSpec,
    binary_reflection,
    binary_srm,
    check_gu,
    cyclic_srm,
    fourier_transform,
    ft_matrix,
    gu_singular_values,
    gu_srm,
    load_group_spec,
    symmetry_check,
)
from .measurement import (
    Measurement,
    completeness_residual,
    load_measurement,
    lsm,
    neumark_check,
    orthogonal_lsm,
    orthogonal_residual,
    residual_error,
    residual_error_closed_form,
    srm,
    verify_srm_implicit,
    weighted_error,
    weighted_residual,
    wlsm,
)
from .optimality import (
    OptimalityReport,
    brute_force_lsm_oracle,
    error_probability,
    gram_schmidt_measurement,
    helstrom_oracle,
    holevo_conditions,
    sasaki_criterion,
)
from .stateset import (
    StateSet,
    apply_weights,
    gram,
    load_state_set,
    numerical_rank,
    phase_align_binary,
)

__version__ = "0.1.0"
