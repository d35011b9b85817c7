"""Mutual-information simulation of two-stage analog combining for hybrid
MIMO receivers with low-resolution ADCs."""

from .channel import (
    ArrayGeometry,
    ChannelMatrix,
    ChannelParams,
    PathSet,
    column_from_paths,
    draw_path_count,
    generate_channel,
    spatial_from_physical,
    steering_vector,
)
from .combiners import (
    DESIGN_TAGS,
    AngleCodebook,
    Combiner,
    angle_codebook,
    arv_only_combiner,
    dft_matrix,
    greedy_mi_combiner,
    load_matrix_text,
    optimal_two_stage_combiner,
    save_matrix_text,
    svd_combiner,
    svd_dft_combiner,
    two_stage_arv_combiner,
)
from .metrics import (
    MiContext,
    SingularProfile,
    equal_gain_channel,
    general_upper_bound,
    haar_semi_unitary,
    mutual_information,
    optimal_mi_equal_gains,
    scaling_slope,
    singular_profile,
    svd_upper_bound,
    two_stage_rate_closed_form,
)
from .quantization import (
    BETA_TABLE,
    AdcModel,
    QuantNoiseCov,
    lloyd_max_distortion,
    make_adc_model,
    quant_noise_covariance,
    scalar_quantize,
)
from .simulation import (
    SweepConfig,
    SweepResult,
    SweepRow,
    db_to_linear,
    derive_trial_seed,
    run_sweep,
)

__all__ = [
    "AdcModel",
    "AngleCodebook",
    "ArrayGeometry",
    "BETA_TABLE",
    "ChannelMatrix",
    "ChannelParams",
    "Combiner",
    "DESIGN_TAGS",
    "MiContext",
    "PathSet",
    "QuantNoiseCov",
    "SingularProfile",
    "SweepConfig",
    "SweepResult",
    "SweepRow",
    "angle_codebook",
    "arv_only_combiner",
    "column_from_paths",
    "db_to_linear",
    "derive_trial_seed",
    "dft_matrix",
    "draw_path_count",
    "equal_gain_channel",
    "general_upper_bound",
    "generate_channel",
    "greedy_mi_combiner",
    "haar_semi_unitary",
    "load_matrix_text",
    "lloyd_max_distortion",
    "make_adc_model",
    "mutual_information",
    "optimal_mi_equal_gains",
    "optimal_two_stage_combiner",
    "quant_noise_covariance",
    "run_sweep",
    "save_matrix_text",
    "scalar_quantize",
    "scaling_slope",
    "singular_profile",
    "spatial_from_physical",
    "steering_vector",
    "svd_combiner",
    "svd_dft_combiner",
    "svd_upper_bound",
    "two_stage_arv_combiner",
    "two_stage_rate_closed_form",
]
