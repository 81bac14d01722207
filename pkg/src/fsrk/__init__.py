"""Fractional-step Runge-Kutta methods as generalized additive RK tableaux.

Build schemes from a splitting table plus a grid of Runge-Kutta
sub-integrators, unroll them into extended Butcher tableaux, analyze
their linear stability (regions, poles, intercepts, holes), and
integrate additively split ODE systems.
"""

__version__ = "0.1.0"

from .errors import (CatalogueMissError, ConsistencyError, DegenerateRayError,
                     DimensionError, FsrkError, PoleProximityError,
                     SpecFileError, StageSolveError, UnsupportedTableauError)
from .gark import (CompactTableau, ExtendedTableau, FSRKScheme,
                   ark_stability_eval, build_compact, build_extended,
                   check_internal_consistency, compact_text,
                   reorder_by_operator, scheme)
from .integrator import (AdditiveODEProblem, ConvergenceStudy,
                         IntegrationResult, convergence_order,
                         finite_difference_jacobian, integrate,
                         solve_implicit_stage, step)
from .problems import (BrusselatorMOL, LinearSplitProblem, brusselator,
                       diffusion_spectrum, linear_split, reaction_spectrum)
from .splitting import (SplittingMethod, adjoint, catalogue_splitting,
                        compose_halved, splitting)
from .stability import (GridSpec, Hole, Pole, ProductStabilityFunction,
                        RayRestriction, RegionScan, detect_holes,
                        poles, product_stability, real_axis_intercept,
                        region_metadata, region_to_csv, scan_region)
from .tableau import (ButcherTableau, ScalarStabilityFunction, catalogue,
                      classical_order, sdirk_gamma, stability_function,
                      tableau, validate)

__all__ = [name for name in dir() if not name.startswith("_")]
