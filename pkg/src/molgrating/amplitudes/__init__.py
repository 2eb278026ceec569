from molgrating.amplitudes.bar import (
    amplitude_prefactor,
    breakup_suppression,
    dimer_bar_amplitude,
    dimer_bar_amplitudes,
    point_bar_amplitude,
    point_limit_deviation,
)
from molgrating.amplitudes.fit import fit_effective_width
from molgrating.amplitudes.oracle import dimer_bar_amplitude_oracle

__all__ = [
    "amplitude_prefactor",
    "breakup_suppression",
    "dimer_bar_amplitude",
    "dimer_bar_amplitude_oracle",
    "dimer_bar_amplitudes",
    "fit_effective_width",
    "point_bar_amplitude",
    "point_limit_deviation",
]
