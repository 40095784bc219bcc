"""Optimized Schwarz waveform relaxation for 2D advection-reaction-diffusion.

The package has three layers:

* frequency analysis: ``problem``, ``symbol`` (convergence factor, box
  geometry) and ``closedform`` (asymptotically optimized parameters),
* validation: ``oracle`` (numerical min-max solver with equioscillation
  diagnostics),
* experiment: ``discretize`` / ``decompose`` / ``swr`` (space-time
  solvers) and ``sweep`` / ``cli`` (batch runs, slope fits, reports).
"""

from .problem import (Coefficients, FrequencyBox, GridSpec, TimeRelation,
                      TransmissionParams, check_hypothesis,
                      default_frequency_box)
from .symbol import constant_A, kbar, landmarks, rho, sup_abs_rho, to_z
from .closedform import (OptimizedParams, Regime, optimized_params,
                         robin_no_overlap, robin_overlap_continuous,
                         robin_overlap_discrete, ventcel_no_overlap,
                         ventcel_overlap_continuous, ventcel_overlap_discrete)
from .oracle import (OracleResult, equioscillation_report, optimize_robin,
                     optimize_ventcel, two_point_equioscillation_p,
                     verify_strict_local_min)

__version__ = "0.1.0"
