"""Real and complex-contour Gauss discretizations of bosonic baths, with exact references."""

__version__ = "0.1.0"

from .analysis import (
    AspResult,
    asp,
    asp_states,
    classify,
    inverse_participation,
    mobility_edge,
    phase_diagram,
    recurrence_time,
)
from .bathmap import (
    BathDiscretization,
    SpectralDensity,
    chain_env_complex,
    chain_env_real,
    discrete_kernel,
    hg_choice,
    ohmic_J,
    star_env_complex,
    star_env_real,
)
from .cquad import (
    ComplexRecurrence,
    ContourMeasure,
    complex_jacobi,
    complex_recurrence,
    contour_inner_product,
    contour_integrate,
    contour_rule,
    eval_eta,
    semicircle_rule,
)
from .errors import (
    BreakdownError,
    ComplexDiscError,
    ConfigurationError,
    DegeneracyError,
    LossOfOrthogonalityError,
    NearDefectiveError,
    NumericError,
    StepSizeError,
)
from .models import (
    GOLDEN_BETA,
    DephasingValue,
    EffectiveHamiltonian,
    Eigensystem,
    GaahParams,
    biorth_eig,
    build_heff,
    dephasing_discrete_complex,
    dephasing_discrete_real,
    dephasing_exact,
    gaah_hamiltonian,
    highest_excited_state,
    pad_to,
    propagate,
    survival,
)
from .oracle import VolterraConfig, VolterraResult, closed_evolve, memory_kernel, truncated_kernel, volterra_solve
from .polyquad import (
    QuadratureRule,
    RealMeasure,
    RecurrenceCoefficients,
    gauss_rule,
    golub_welsch,
    inner_product_real,
    jacobi_matrix,
    laguerre_recurrence,
    quad_integrate,
    stieltjes_recurrence,
)
