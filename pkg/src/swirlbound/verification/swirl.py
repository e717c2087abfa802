"""Maximum-principle checks for ``Gamma = r v_theta`` along a trajectory."""
from dataclasses import dataclass, field

import numpy as np

# Regression constant in eps_tol = 1e-8 + C h**2.  The reference runs (centred
# and upwind advection, CFL safety 0.5 and 1.0) show no excess at all, so C = 1
# is a plain second-order allowance rather than a fitted value.
SWIRL_TOL_C = 1.0


def swirl_tolerance(grid, c=SWIRL_TOL_C):
    return 1e-8 + c * grid.h ** 2


@dataclass
class SwirlReport:
    """Outcome of :func:`check_swirl_bounds`.

    The ``*_excess`` entries are the worst violations (positive means the
    bound was exceeded, before comparing with ``tolerance``).
    """
    tolerance: float
    s0: float
    sup_increase: float
    sup_excess: float
    lp_increase: dict
    pointwise_excess: float
    boundary_mode: str
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures


def _lp(gamma, weights, p):
    return float(np.sum(weights * np.abs(gamma) ** p) ** (1 / p))


def check_swirl_bounds(trajectory, c=SWIRL_TOL_C, ps=(2, 4)):
    """Check monotone decay of ``sup|Gamma|`` and ``||Gamma||_p`` and the
    pointwise bound ``|v_theta| <= sup|Gamma(0)| / r`` at every output time.

    The L^p norms are taken over the computational domain; the tolerance for
    them is ``eps_tol`` relative to ``||Gamma(0)||_p``.
    """
    from ..evolution import domain_weights

    grid = trajectory.grid
    tol = swirl_tolerance(grid, c)
    gam = trajectory.gamma
    sups = np.max(np.abs(gam.reshape(len(gam), -1)), axis=1)
    s0 = float(sups[0])
    sup_increase = float(np.max(np.diff(sups), initial=0.0))
    sup_excess = float(np.max(sups - s0))

    w = domain_weights(grid)
    lp_increase = {}
    failures = []
    for p in ps:
        norms = np.array([_lp(g, w, p) for g in gam])
        inc = float(np.max(np.diff(norms), initial=0.0))
        lp_increase[p] = inc
        if inc > tol * max(norms[0], 1.0):
            failures.append(f"||Gamma||_{p} grew by {inc:.3e}")

    r = grid.r[:, None]
    pointwise = float(max(np.max(np.abs(g) / r - s0 / r) for g in gam))

    if sup_increase > tol:
        failures.append(f"sup|Gamma| grew by {sup_increase:.3e} between outputs")
    if sup_excess > tol:
        failures.append(f"sup|Gamma| exceeded its initial value by {sup_excess:.3e}")
    if pointwise > tol:
        failures.append(f"|v_theta| exceeded sup|Gamma(0)|/r by {pointwise:.3e}")
    return SwirlReport(tol, s0, sup_increase, sup_excess, lp_increase, pointwise,
                       trajectory.boundary_mode, failures)
