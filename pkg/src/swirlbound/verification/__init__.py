"""Checks of the a-priori estimates against computed trajectories and fields."""
from .convergence import OperatorConvergence, operator_convergence
from .helmholtz import (DiscretizationFault, axisym_gradient_ratio, family_grid,
                        family_sweep, helmholtz_ratio, random_family, v_matrix_norm)
from .scaling import (FieldFamily, ScalingCheck, axial_family, check_rescaled_equations,
                      check_scaling, rescaled_trajectory, swirling_family, vortex_family)
from .swirl import SWIRL_TOL_C, SwirlReport, check_swirl_bounds, swirl_tolerance
from .theorem import (DEFAULT_CEILING, BoundReport, ProxyInputs, TheoremResult,
                      b1_proxy, b2_proxy, check_theorem_i, check_theorem_ii,
                      collect_inputs, refinement_spread)

__all__ = [
    "OperatorConvergence", "operator_convergence",
    "DiscretizationFault", "axisym_gradient_ratio", "family_grid", "family_sweep",
    "helmholtz_ratio", "random_family", "v_matrix_norm",
    "FieldFamily", "ScalingCheck", "axial_family", "check_rescaled_equations",
    "check_scaling", "rescaled_trajectory", "swirling_family", "vortex_family",
    "SWIRL_TOL_C", "SwirlReport", "check_swirl_bounds", "swirl_tolerance",
    "DEFAULT_CEILING", "BoundReport", "ProxyInputs", "TheoremResult", "b1_proxy",
    "b2_proxy", "check_theorem_i", "check_theorem_ii", "collect_inputs",
    "refinement_spread",
]
