"""Soft (fuzzy) quantum nondemolition measurement channels.

Single, repeated and continuous-limit soft measurements on finite
dimensional systems, together with the coherent and semiclassical
information they transmit, plus a CLI (``softmeas``) that runs parameter
sweeps to CSV/JSON.
"""

from .errors import (
    ConfigError,
    DimensionMismatch,
    InvalidChannel,
    InvalidMeasurement,
    InvalidParams,
    InvalidState,
    NotHermitian,
    NotPSD,
    OutOfRange,
    SoftMeasError,
    ZeroDt,
    ZeroMatrix,
)
from .matcore import (
    RANK_TOL,
    TAU_HERM,
    TAU_PSD,
    TAU_RECON,
    TAU_TRACE,
    Spectrum,
    herm_eig,
    inv_sqrt_psd,
    matrix_sqrt_psd,
    partial_trace,
    validate_density_matrix,
    von_neumann_entropy,
)
from .measurement import (
    GeneralMeasurement,
    GeneratorRates,
    SoftMeasurement,
    TwoLevelMeterParams,
    ValidationReport,
    apply_entangling,
    apply_general,
    apply_soft,
    generator_general,
    generator_two_level,
    meter_states_from_gram,
    two_level_gram,
    two_level_meter_states,
    validate_general,
    validate_soft,
)
from .repeated import (
    CollectiveRepresentation,
    ContinuousLimitParams,
    RepeatedMeasurement,
    asymptotic_gram_sqrt,
    collective_representation,
    continuous_gram_sqrt,
    discrete_step_params,
    gram_power,
    joint_dm_continuous,
    joint_dm_repeated,
    meter_dm_continuous,
    meter_dm_repeated,
    two_level_gram_sqrt,
)
from .information import (
    CompetitionParams,
    KrausChannel,
    StateEnsemble,
    choi_matrix,
    coherent_info_channel,
    coherent_info_soft,
    coherent_info_two_level,
    compete_coherent,
    compete_two_level,
    eve_bob_semiclassical,
    holevo_info,
    kraus_from_choi,
    meter_ensemble,
    semiclassical_info_continuous,
    soft_object_channel,
)

__version__ = "0.1.0"

__all__ = [
    "CollectiveRepresentation",
    "CompetitionParams",
    "ConfigError",
    "ContinuousLimitParams",
    "DimensionMismatch",
    "GeneralMeasurement",
    "GeneratorRates",
    "InvalidChannel",
    "InvalidMeasurement",
    "InvalidParams",
    "InvalidState",
    "KrausChannel",
    "NotHermitian",
    "NotPSD",
    "OutOfRange",
    "RANK_TOL",
    "RepeatedMeasurement",
    "SoftMeasError",
    "SoftMeasurement",
    "Spectrum",
    "StateEnsemble",
    "TAU_HERM",
    "TAU_PSD",
    "TAU_RECON",
    "TAU_TRACE",
    "TwoLevelMeterParams",
    "ValidationReport",
    "ZeroDt",
    "ZeroMatrix",
    "apply_entangling",
    "apply_general",
    "apply_soft",
    "asymptotic_gram_sqrt",
    "choi_matrix",
    "coherent_info_channel",
    "coherent_info_soft",
    "coherent_info_two_level",
    "collective_representation",
    "compete_coherent",
    "compete_two_level",
    "continuous_gram_sqrt",
    "discrete_step_params",
    "eve_bob_semiclassical",
    "generator_general",
    "generator_two_level",
    "gram_power",
    "herm_eig",
    "holevo_info",
    "inv_sqrt_psd",
    "joint_dm_continuous",
    "joint_dm_repeated",
    "kraus_from_choi",
    "matrix_sqrt_psd",
    "meter_dm_continuous",
    "meter_dm_repeated",
    "meter_ensemble",
    "meter_states_from_gram",
    "partial_trace",
    "semiclassical_info_continuous",
    "soft_object_channel",
    "two_level_gram",
    "two_level_gram_sqrt",
    "two_level_meter_states",
    "validate_density_matrix",
    "validate_general",
    "validate_soft",
    "von_neumann_entropy",
]
