"""Joint transverse distributions and continuous-variable entanglement
witnesses for photon pairs produced by a partially coherent Gaussian
Schell-model pump.

The joint two-photon distributions factorize in rotated (diagonal /
anti-diagonal) coordinates: the pump fixes the diagonal factor, the
longitudinal phase-matching spectrum fixes the anti-diagonal one.
Everything downstream (width products, witnesses, phase diagram) builds
on those two factors.  Units: lengths in micrometres, transverse wave
vectors in rad/um.
"""

from .entanglement import (
    ANTI,
    CORRELATED,
    NONE,
    PhaseDiagramCell,
    WitnessReport,
    classify,
    classify_xy,
    product_mp,
    product_pm,
    sweep_phase_diagram,
)
from .errors import (
    GridTooCoarse,
    NegativeArgument,
    NonPositiveParameter,
    NoSignChange,
    ParaxialityWarning,
    ParseError,
    ZeroMass,
)
from .joint import (
    Axis,
    JointGrid,
    default_axes,
    evaluate_grid,
    joint_momentum_density,
    joint_position_density,
    widths_from_grid,
)
from .numerics import (
    Grid2D,
    Moments,
    RadialGrid,
    bessel_j0,
    find_root,
    grid_moments,
    hankel0,
    sinc,
    sine_integral,
)
from .params import (
    DEFAULT_ALPHA,
    CrystalParams,
    PumpParams,
    load_params,
    read_config,
    serialize_params,
    validate_crystal,
    validate_pump,
)
from .phasematch import (
    EXACT_SINC,
    GAUSSIAN_APPROX,
    NonlinearityProfile,
    PhaseMatchModel,
    calibrate_alpha,
    chi_tilde,
    chi_tilde_gauss,
    chi_tilde_profile,
    chi_tilde_sinc,
    delta_kappa,
    load_profile,
    p_chi_momentum,
    p_chi_position,
    variance_q_minus,
    variance_rho_minus,
)
from .pump import (
    RotatedPoint,
    mutual_coherence,
    p_gamma_momentum,
    p_gamma_position,
    rotate_from_pm,
    rotate_to_pm,
    variance_q_plus,
    variance_rho_plus,
)

__version__ = "0.1.0"
