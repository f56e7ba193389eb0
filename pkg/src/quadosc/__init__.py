"""quadosc: exact propagators for parametrically driven quadratic oscillators.

Pipeline: a coefficient model (dpo / raiford / generic) feeds the
characteristic ODE, whose standard solution pair determines the Gaussian
propagator kernel, the Ermakov-Pinney modulus with its invariant
eigenfunctions, and the Ince-form periodicity classification.  Closed-form
oracles and a Crank-Nicolson integrator cross-validate every route.
"""

from .characteristic import (CharacteristicForm, CharacteristicSolution,
                             characteristic_form, solution_to_csv,
                             solve_standard_pair, wronskian_residual)
from .ermakov import (ErmakovSolution, HermiteGaussianSpec, apply_invariant,
                      eigenfunction, ermakov_residual, ermakov_solution,
                      ermakov_to_csv, hermite_function,
                      initial_conditions_from_gaussian, phase, pinney_mu,
                      wavefunction)
from .errors import (BoundaryContamination, CausticEncountered, ConfigInvalid,
                     GridMismatch, GridUnderResolved, InvalidInvariantConstant,
                     KineticDegenerate, LinearSolveFailure,
                     NonConvergentIntegral, NonFiniteCoefficient,
                     PumpOutOfDomain, QuadOscError, StepSizeUnderflow,
                     TailNotDecayed, TimeNotPositive, ToleranceNotMet,
                     TruncationTooSmall)
from .ince import (FourierTrialSolution, InceForm, PeriodicityReport,
                   classify_periodicity, convergence_to_csv, fourier_trial,
                   periodicity_polynomials, report_to_json, to_ince_form,
                   trial_convergence)
from .models import (DpoModel, GenericModel, OscillatorParams, PumpSchedule,
                     QuadraticCoefficients, RaifordModel, dpo_coefficients,
                     generic_coefficients, model_from_json, model_to_json,
                     raiford_coefficients)
from .oracles import (CNDiagnostics, OracleConfig, apply_hamiltonian,
                      crank_nicolson_evolve, mehler_kernel,
                      schrodinger_residual, special_case_green,
                      special_case_mu)
from .propagator import (GaussianState, Grid, PropagatorCoefficients,
                         WaveField, coefficients_to_json,
                         greens_coefficients, greens_coefficients_mesh,
                         greens_kernel, propagate_gaussian_analytic,
                         propagate_quadrature, riccati_residual,
                         wavefield_from_csv, wavefield_meta, wavefield_to_csv)

__version__ = "0.1.0"
