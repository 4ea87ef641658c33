"""Time evolution of superoscillatory initial data for the Schrodinger equation.

Propagators for the free particle, centrifugal potentials and general point
interactions are integrated against entire initial data on rotated contours,
where the oscillatory Fresnel factor turns into Gaussian decay.
"""
__version__ = "0.1.0"

from .exceptions import (CapabilityError, DomainError, PreconditionError,  # noqa: E402
                         QuadratureAccuracyError, RangeError, SetupError, SupershiftError,
                         UnsupportedOrderError)
from .superosc import (EntireFunction, GrowthBound, SuperoscillatingSequence,  # noqa: E402
                       SupershiftFamily, aq_distance, build_superosc,
                       build_supershift_plane_waves, eval_superosc, plane_wave, poly_exp,
                       superosc_function)
from .quadrature import (QuadratureConfig, RotatedIntegrand, SectorSpec,  # noqa: E402
                         fresnel_fullline, fresnel_halfline, regularized_limit,
                         regularized_real, regularized_rotated, shifted_halfline)
from .greens import (GreensFunctionSpec, TransmissionCondition,  # noqa: E402
                     classify_point_interaction, eval_green, schrodinger_residual,
                     transmission_matrices)
from .evolution import (EvolutionProblem, WaveField, boundary_trace, evolve,  # noqa: E402
                        evolve_dx, evolve_grid, evolve_regularized, initial_recovery_scan,
                        kappa_holomorphy_check, psi_schrodinger_residual, supershift_scan,
                        transmission_residual)
from .oracle import FdScheme, cn_evolve, cross_validate, scheme_for  # noqa: E402
from .estimator import SchrodingerEvolver  # noqa: E402
