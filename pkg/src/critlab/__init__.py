"""critlab: a numerical laboratory for critical points of random polynomials.

Computes the zeros of P'(z) for P(z) = prod (z - X_i) with i.i.d. roots,
measures how close their empirical distribution stays to the root law, and
exercises the supporting potential-theory identities as runnable diagnostics.
"""

__version__ = "0.1.0"

from .measures import (DistributionSpec, Seed, QuadratureSettings,
                       point_mass, finite_atoms, uniform_circle, uniform_disk,
                       gaussian, radial_cauchy, mixture,
                       sample, atoms, log_minus_energy, radial_log_energy)
from .poly_field import (RootSample, FieldValue, SearchSettings,
                         eval_log_abs_P, eval_L, scaled_log_abs_L, sup_on_circle)
from .critical_solver import (DistinctRoots, CriticalSet, SolverSettings,
                              distinct_reduce, critical_points,
                              coefficient_oracle, verify_gauss_lucas,
                              pairing_distance, vieta_gap)
from .grids import GridSpec, GridField
from .testfunctions import TestFunction, smooth_bump, cosine_cap
from .transport import (EmpiricalMeasure, from_points, wasserstein1,
                        bounded_lipschitz, integrate_test_function)
from . import diagnostics
from . import lab_cli
