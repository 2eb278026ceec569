### This file contains constants used by molgrating ###
#
# Internal unit system (hbar = 1):
# - length: nanometer (nm)
# - lateral momentum: wavenumber K in nm^-1, with P = hbar * K
# - mass: atomic mass unit (amu)
# - binding energies: microelectronvolt (ueV)
# - beam velocity: m/s
# - surface constant C3: meV * nm^3
from dataclasses import dataclass
from enum import Enum, IntEnum

from scipy import constants as sp


@dataclass(frozen=True)
class Constants:
    """Physical constants in SI units, taken from scipy.constants (CODATA)."""

    # Planck constant over 2*pi (J*s); only used to convert between SI and internal units
    hbar: float = sp.hbar

    # atomic mass unit (kg)
    amu_in_kg: float = sp.atomic_mass

    # microelectronvolt (J)
    ueV_in_J: float = 1e-6 * sp.eV

    # millielectronvolt (J)
    meV_in_J: float = 1e-3 * sp.eV

    # mass of a helium-4 atom (amu)
    helium4_mass: float = 4.00260325413


CONSTANTS = Constants()

# meters per nanometer
NM_IN_M = 1e-9


# ENUMS
class DimerKind(str, Enum):
    """
    DimerKind describes how the ground-state probability density of the dimer is represented.
    """

    EXPONENTIAL = "exponential"
    TABULATED = "tabulated"


class Calibration(str, Enum):
    """
    Calibration determines how the decay constant kappa of the exponential (halo) model is chosen.
    """

    # kappa such that <|x2|> matches a target value
    MEAN_ABS_X2 = "mean-abs-x2"
    # kappa from the binding energy and the constituent mass
    BINDING_ENERGY = "binding-energy"
    # kappa given directly
    KAPPA = "kappa"

    @classmethod
    def _missing_(cls, value):
        if value:
            normalized_value = "".join([x for x in str(value) if x.isalpha()]).lower()
            for member in cls:
                normalized_member = "".join([x for x in member.value if x.isalpha()]).lower()
                if normalized_member == normalized_value:
                    return member
        return None


class ExitCode(IntEnum):
    SUCCESS = 0
    CONFIG_ERROR = 2
    NUMERICAL_ERROR = 3
    ACCEPTANCE_FAILURE = 4
    IO_ERROR = 5


#### HELIUM DIMER ####
# binding energy magnitude of He2 (ueV)
HE2_BINDING_ENERGY = 0.11

# expectation value of |x2| for the He2 ground state (nm); anchors the calibrated model
HE2_MEAN_ABS_X2 = 2.8

# estimated He2 diameter (nm)
HE2_DIAMETER_ESTIMATE = 6.0

# total He2 mass (amu)
HE2_MASS = 2 * CONSTANTS.helium4_mass

#### BEAM & GRATING DEFAULTS ####
# the beam velocity is not fixed by any figure; all acceptance quantities are ratios
DEFAULT_VELOCITY = 1000.0

# number of illuminated bars used for pattern reproduction
DEFAULT_BAR_COUNT = 100

# bar depth (nm) and wedge angle (degrees) of the trapeze cross-section
DEFAULT_DEPTH = 100.0
DEFAULT_WEDGE_ANGLE = 8.0

#### SURFACE POTENTIAL ####
# illustrative C3 (meV nm^3); order of magnitude only, not a fitted material constant
DEFAULT_C3 = 0.1

# atoms closer than this to a wall (nm) are counted as lost to the wall
DEFAULT_WALL_CUTOFF = 0.5

#### QUADRATURE ####
# |x2| floor (nm) at the logarithmic singularity of the transverse density
TRANSVERSE_DENSITY_FLOOR = 1e-6

QUAD_EPSABS = 1e-9
QUAD_EPSREL = 1e-9
QUAD_LIMIT = 400

# a quadrature whose relative error estimate exceeds this is reported as non-converged
QUAD_MAX_RELATIVE_ERROR = 1e-7

# radial support of analytic densities, in units of the decay length 1/(2 kappa)
SUPPORT_DECAY_LENGTHS = 40.0

# maximum tolerated deviation of a density from unit normalization
NORMALIZATION_TOLERANCE = 1e-6

#### LINEAR ALGEBRA ####
# relative residuals are computed against max(||rhs||, RESIDUAL_FLOOR)
RESIDUAL_FLOOR = 1e-14

# resolvent solves with a larger condition number are rejected
CONDITION_LIMIT = 1e14

# condition-number product above which identity tolerances are loosened proportionally
CONDITION_REFERENCE = 1e4

# default number of random finite models checked by verify-ags
DEFAULT_AGS_SEED_COUNT = 100

#### OUTPUT ####
# numbers in CSV output carry 12 significant digits
CSV_FLOAT_FORMAT = "%.12g"
