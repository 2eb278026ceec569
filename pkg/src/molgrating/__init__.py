__version__ = "0.1.0"

from molgrating.ags import (  # noqa: E402
    FiniteModel,
    breakup_operator,
    random_model,
    resolvents,
    scalar_t_matrix,
    t_matrix,
    truncation_gap,
    u_vv_from_definition,
    u_wv_from_definition,
    verify_identities,
)
from molgrating.amplitudes import (  # noqa: E402
    breakup_suppression,
    dimer_bar_amplitude,
    dimer_bar_amplitude_oracle,
    fit_effective_width,
    point_bar_amplitude,
)
from molgrating.config import RunConfig  # noqa: E402
from molgrating.constants import CONSTANTS, Calibration, DimerKind, ExitCode  # noqa: E402
from molgrating.dataclasses import (  # noqa: E402
    BarSpec,
    BeamState,
    DiffractionOrder,
    DiffractionPattern,
    EffectiveWidthFit,
    GratingGeometry,
    IdentityReport,
    PeakRatios,
    SizeMeasures,
    SurfaceSpec,
)
from molgrating.errors import ConfigError, DomainError, MolGratingError, NumericalError, ValidationError  # noqa: E402
from molgrating.grating import (  # noqa: E402
    coherent_amplitude,
    effective_grating,
    grating_function,
    pattern,
    relative_peak_heights,
)
from molgrating.models import (  # noqa: E402
    DimerModel,
    ExponentialModel,
    TabulatedModel,
    calibrate_to_x2,
    exponential_from_binding,
    exponential_model,
    form_factor,
    load_tabulated,
    size_measures,
    transverse_density,
)
from molgrating.results import ResultTable, load_result  # noqa: E402
from molgrating.surface import (  # noqa: E402
    atomic_pattern_with_surface,
    c3_sweep,
    eikonal_phase,
    slit_transmission_amplitude,
)
from molgrating.units import binding_from_kappa, kappa_from_binding, parse_quantity  # noqa: E402

__all__ = [
    # ags
    "FiniteModel",
    "breakup_operator",
    "random_model",
    "resolvents",
    "scalar_t_matrix",
    "t_matrix",
    "truncation_gap",
    "u_vv_from_definition",
    "u_wv_from_definition",
    "verify_identities",
    # amplitudes
    "breakup_suppression",
    "dimer_bar_amplitude",
    "dimer_bar_amplitude_oracle",
    "fit_effective_width",
    "point_bar_amplitude",
    # config
    "RunConfig",
    # constants
    "CONSTANTS",
    "Calibration",
    "DimerKind",
    "ExitCode",
    # dataclasses
    "BarSpec",
    "BeamState",
    "DiffractionOrder",
    "DiffractionPattern",
    "EffectiveWidthFit",
    "GratingGeometry",
    "IdentityReport",
    "PeakRatios",
    "SizeMeasures",
    "SurfaceSpec",
    # errors
    "ConfigError",
    "DomainError",
    "MolGratingError",
    "NumericalError",
    "ValidationError",
    # grating
    "coherent_amplitude",
    "effective_grating",
    "grating_function",
    "pattern",
    "relative_peak_heights",
    # models
    "DimerModel",
    "ExponentialModel",
    "TabulatedModel",
    "calibrate_to_x2",
    "exponential_from_binding",
    "exponential_model",
    "form_factor",
    "load_tabulated",
    "size_measures",
    "transverse_density",
    # results
    "ResultTable",
    "load_result",
    # surface
    "atomic_pattern_with_surface",
    "c3_sweep",
    "eikonal_phase",
    "slit_transmission_amplitude",
    # units
    "binding_from_kappa",
    "kappa_from_binding",
    "parse_quantity",
]
