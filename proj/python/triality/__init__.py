"""Wave, particle and mixedness measures on finite-dimensional quantum states."""

from ._triality import (
    TrialityError,
    attach_detectors,
    builtin_names,
    check_f_conditions,
    coherence_direct,
    coherence_pure,
    dephase,
    detector_gram,
    detector_inequality_report,
    family_state,
    path_information,
    quadratic_triality,
    random_density,
    random_pure,
    reduce_system,
    roof_minimize,
    roof_sample_oracle,
    run_cli,
    simplex_value,
    special_state,
    triality_report,
    validate_density,
)

__all__ = [name for name in dir() if not name.startswith("_")]
