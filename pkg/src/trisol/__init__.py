"""trisol: elliptic-pulse dynamics of a driven three-level system.

A numpy library for the closed-form solution basis of a three-level system
whose two couplings are modulated by Jacobi elliptic functions, the matching
elliptic density-matrix family with its transport unitaries, and an
independent adaptive Runge-Kutta verifier for every closed form.
"""

from .analysis import beat_period, dominant_frequency
from .density import (
    DensityCoeffs,
    condition_residuals,
    effective_hamiltonian,
    g_matrix,
    nonlinear_rhs,
    rho,
    solve_coeffs,
    v_matrix,
)
from .elliptic import JacobiTriple, jacobi, quarter_period
from .errors import (
    DivergenceError,
    DomainError,
    DriveConditionError,
    IntegrationError,
    NonPhysicalWarning,
    SingularityError,
)
from .oracle import (
    IntegratorConfig,
    VerificationReport,
    integrate_schrodinger,
    integrate_vonneumann,
    resolve_variant,
    verify_all,
)
from .solutions import (
    BasisLabel,
    DerivedConstants,
    DriveParams,
    TrajectorySample,
    amplitude_R,
    basis_state,
    complete_a,
    complete_x,
    decompose,
    drive_period,
    evolve,
    hamiltonian_at,
    occupations,
    phase_on_grid,
    phase_phi,
    phase_rate,
    trajectory,
    validate,
)
from .su3 import (
    Configuration,
    H0Params,
    anticommutator,
    commutator,
    free_propagator,
    generator,
    generators,
    h0_matrix,
    hermitian_eigensystem,
    interaction_picture,
)

__version__ = "0.1.0"
