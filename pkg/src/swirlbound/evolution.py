"""Time integration of the reduced swirl system.

The unknowns are ``Gamma = r v_theta`` and ``Omega = omega_theta / r``::

    dGamma/dt = lap Gamma - b.grad Gamma - (2/r) dGamma/dr
    dOmega/dt = lap Omega - b.grad Omega + (2/r) dOmega/dr
                + (2 v_theta / r**2) dv_theta/dz

with ``b = (v_r, 0, v_z)`` recovered from ``omega_theta = r Omega`` through
the streamfunction.  Viscosity is one.  Stepping is explicit SSP-RK3 with a
velocity recovery at every stage.  Boundary values of Gamma, Omega and psi are
frozen at their initial values on the r boundaries (and on the z boundaries
unless the grid is periodic in z).
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .cylops import AxisymVectorField, curl_axisym, streamfunction_solver
from .errors import CflViolationError, SwirlboundError
from .grid import AnnularGrid, interval_weights

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SwirlState:
    """``(Gamma, Omega)`` at time ``t`` with the recovered velocity."""
    grid: AnnularGrid
    t: float
    gamma: np.ndarray
    omega: np.ndarray
    psi: np.ndarray
    v_r: np.ndarray
    v_z: np.ndarray

    @property
    def v_theta(self):
        return self.gamma / self.grid.rr

    @property
    def omega_theta(self):
        return self.grid.rr * self.omega

    @property
    def velocity(self):
        return AxisymVectorField(self.grid, self.v_r, self.v_theta, self.v_z)

    def vorticity(self):
        """Full vorticity; omega_theta is ``r Omega``, the other two are differenced."""
        w = curl_axisym(self.velocity, edges=True)
        return type(w)(self.grid, w.omega_r, self.omega_theta, w.omega_z)


@dataclass(frozen=True)
class Forcing:
    """Manufactured source terms ``S(r, z, t)`` added to each right-hand side."""
    gamma: object = None
    omega: object = None


def _as_field(grid, value, t=0.0):
    if value is None:
        return np.zeros(grid.shape)
    if callable(value):
        try:
            return grid.evaluate(value, t)
        except TypeError:
            return grid.evaluate(value)
    return np.broadcast_to(np.asarray(value, dtype=float), grid.shape).copy()


class SwirlSystem:
    """Discrete right-hand side, velocity recovery and SSP-RK3 step on one grid.

    Parameters
    ----------
    grid : AnnularGrid
    psi_boundary : array, callable ``(r, z)`` or None
        Dirichlet data for the streamfunction (zero by default).
    advection : {"centered", "upwind"}
        ``"upwind"`` switches every first-order drift term, including the
        ``+-(2/r) d/dr`` terms, to first-order upwinding.
    forcing : Forcing or None
    """

    def __init__(self, grid, psi_boundary=None, advection="centered", forcing=None):
        if advection not in ("centered", "upwind"):
            raise ValueError(f"unknown advection scheme {advection!r}")
        self.grid = grid
        self.advection = advection
        self.forcing = forcing
        self.psi_boundary = _as_field(grid, psi_boundary)
        self.solver = streamfunction_solver(grid)
        self._lift = self.solver.lift(self.psi_boundary)
        self._no_source = np.zeros((0, 0))

    @property
    def boundary_mode(self):
        return "periodic-z" if self.grid.periodic_z else "dirichlet-frozen"

    def _recover(self, omega, check):
        g = self.grid
        psi = self.solver.solve_reduced(omega, self._lift, check=check)
        v_r = np.empty(g.shape)
        v_z = np.empty(g.shape)
        _kernels.velocity(psi, g.r, g.dr, g.dz, g.periodic_z, v_r, v_z)
        return psi, v_r, v_z

    def recover(self, t, gamma, omega, check=True):
        """Build a :class:`SwirlState` (streamfunction solve plus velocity)."""
        gamma = np.array(gamma, dtype=float)
        omega = np.array(omega, dtype=float)
        psi, v_r, v_z = self._recover(omega, check)
        return SwirlState(self.grid, float(t), gamma, omega, psi, v_r, v_z)

    def initial_state(self, gamma0, omega0=None, t0=0.0):
        return self.recover(t0, _as_field(self.grid, gamma0),
                            _as_field(self.grid, omega0))

    def _rhs(self, t, gamma, omega, v_r, v_z):
        g = self.grid
        dg = np.zeros(g.shape)
        do = np.zeros(g.shape)
        _kernels.swirl_rhs(gamma, omega, v_r, v_z, g.r, g.dr, g.dz, g.periodic_z,
                           self.advection == "upwind", dg, do)
        if self.forcing is not None:
            free = ~g.boundary
            if self.forcing.gamma is not None:
                dg[free] += _as_field(g, self.forcing.gamma, t)[free]
            if self.forcing.omega is not None:
                do[free] += _as_field(g, self.forcing.omega, t)[free]
        return dg, do

    def rhs(self, state):
        return self._rhs(state.t, state.gamma, state.omega, state.v_r, state.v_z)

    def gamma_rhs(self, state):
        return self.rhs(state)[0]

    def omega_rhs(self, state):
        return self.rhs(state)[1]

    def stability_limit(self, state):
        """``min(h**2 / 4, h / max|v|)`` with unit viscosity."""
        h = self.grid.h
        vmax = _kernels.max_speed(state.gamma, state.v_r, state.v_z, self.grid.r)
        limit = h * h / 4
        if vmax > 0:
            limit = min(limit, h / vmax)
        return limit

    def _sources(self, t):
        f = self.forcing
        if f is None or (f.gamma is None and f.omega is None):
            return self._no_source, self._no_source
        return _as_field(self.grid, f.gamma, t), _as_field(self.grid, f.omega, t)

    def _stage(self, t, u, v_r, v_z, u0, a, b, dt):
        g = self.grid
        s_g, s_o = self._sources(t)
        out_g = np.empty(g.shape)
        out_o = np.empty(g.shape)
        _kernels.swirl_stage(u[0], u[1], v_r, v_z, g.r, g.dr, g.dz, g.periodic_z,
                             self.advection == "upwind", u0[0], u0[1], a, b, dt,
                             s_g, s_o, out_g, out_o)
        return out_g, out_o

    def step(self, state, dt):
        """Advance one SSP-RK3 step; raises :class:`CflViolationError`."""
        limit = self.stability_limit(state)
        if dt > limit * (1 + 1e-12):
            raise CflViolationError(dt, limit)
        t = state.t
        u0 = (state.gamma, state.omega)
        u1 = self._stage(t, u0, state.v_r, state.v_z, u0, 0.0, 1.0, dt)
        _, v_r, v_z = self._recover(u1[1], check=False)
        u2 = self._stage(t + dt, u1, v_r, v_z, u0, 0.75, 0.25, dt)
        _, v_r, v_z = self._recover(u2[1], check=False)
        u3 = self._stage(t + 0.5 * dt, u2, v_r, v_z, u0, 1 / 3, 2 / 3, dt)
        return self.recover(t + dt, u3[0], u3[1], check=False)


def gamma_rhs(system, state):
    return system.gamma_rhs(state)


def omega_rhs(system, state):
    return system.omega_rhs(state)


def recover_velocity(system, state):
    """Refresh the derived caches of ``state`` from its ``(Gamma, Omega)``."""
    return system.recover(state.t, state.gamma, state.omega)


def step(system, state, dt):
    return system.step(state, dt)


# -- diagnostics -----------------------------------------------------------------

DIAGNOSTIC_COLUMNS = (
    "t", "sup_abs_gamma", "gamma_l2", "gamma_l4", "gamma_linf",
    "kinetic_energy", "sup_abs_omega_theta", "sup_abs_v_theta",
    "sup_r_abs_v_theta",
)


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    sup_abs_gamma: float
    gamma_l2: float
    gamma_l4: float
    gamma_linf: float
    kinetic_energy: float
    sup_abs_omega_theta: float
    sup_abs_v_theta: float
    sup_r_abs_v_theta: float

    def row(self):
        return [getattr(self, c) for c in DIAGNOSTIC_COLUMNS]


def domain_weights(grid):
    """Cylindrical trapezoidal weights ``2 pi r dr dz`` over the whole domain."""
    _, w_r = interval_weights(grid.r, grid.r_min, grid.r_max)
    if grid.periodic_z:
        w_z = np.full(grid.n_z, grid.dz)
    else:
        _, w_z = interval_weights(grid.z, grid.z_min, grid.z_max)
    return 2 * np.pi * (grid.r * w_r)[:, None] * w_z[None, :]


def diagnostics(state, weights=None):
    g = state.grid
    w = domain_weights(g) if weights is None else weights
    a = np.abs(state.gamma)
    v_theta = state.v_theta
    energy = np.sum(w * (state.v_r ** 2 + v_theta ** 2 + state.v_z ** 2))
    return DiagnosticsRecord(
        t=state.t,
        sup_abs_gamma=float(a.max()),
        gamma_l2=float(np.sqrt(np.sum(w * a ** 2))),
        gamma_l4=float(np.sum(w * a ** 4) ** 0.25),
        gamma_linf=float(a.max()),
        kinetic_energy=float(energy),
        sup_abs_omega_theta=float(np.abs(state.omega_theta).max()),
        sup_abs_v_theta=float(np.abs(v_theta).max()),
        sup_r_abs_v_theta=float(np.max(g.rr * np.abs(v_theta))),
    )


# -- driving a run ------------------------------------------------------------------

@dataclass
class EvolutionConfig:
    """Everything needed for one run.

    ``gamma0``/``omega0``/``psi_boundary`` accept arrays or callables of
    ``(r, z)``.  ``dt_rule`` is ``"cfl"`` (``dt = cfl_safety * limit``) or
    ``"fixed"`` (``dt`` as given, shortened so output times are hit exactly).
    ``output_interval=None`` records only the initial and final states.
    """
    grid: AnnularGrid
    gamma0: object
    t_end: float
    omega0: object = None
    psi_boundary: object = None
    dt_rule: str = "cfl"
    dt: float = None
    cfl_safety: float = 0.5
    advection: str = "centered"
    forcing: Forcing = None
    output_interval: float = None

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if self.dt_rule not in ("cfl", "fixed"):
            raise ValueError(f"unknown dt rule {self.dt_rule!r}")
        if self.dt_rule == "fixed" and not (self.dt is not None and self.dt > 0):
            raise ValueError("a fixed dt rule needs dt > 0")
        if not 0 < self.cfl_safety <= 1:
            raise ValueError("cfl_safety must lie in (0, 1]")
        if self.output_interval is not None and not self.output_interval > 0:
            raise ValueError("output_interval must be positive")

    def system(self):
        return SwirlSystem(self.grid, self.psi_boundary, self.advection, self.forcing)


@dataclass
class Trajectory:
    """Snapshots of ``(Gamma, Omega)`` at uniformly spaced output times.

    Derived fields are recomputed on demand through :meth:`state`, which keeps
    memory at two arrays per snapshot.
    """
    system: SwirlSystem
    times: np.ndarray
    gamma: np.ndarray
    omega: np.ndarray
    t_end: float
    records: list = field(default_factory=list)
    gamma0_sup: float = None
    error: Exception = None

    @property
    def grid(self):
        return self.system.grid

    @property
    def boundary_mode(self):
        return self.system.boundary_mode

    def __len__(self):
        return len(self.times)

    @property
    def relative_times(self):
        """Times shifted so that the final simulated time is zero."""
        return self.times - self.t_end

    def state(self, i):
        return self.system.recover(self.times[i], self.gamma[i], self.omega[i])

    def states(self, indices=None):
        for i in (range(len(self)) if indices is None else indices):
            yield self.state(i)

    def window(self, duration):
        """Indices of snapshots with relative time in ``[-duration, 0]``."""
        tp = self.relative_times
        tol = 1e-9 * max(1.0, duration)
        return np.flatnonzero((tp >= -duration - tol) & (tp <= tol))

    def covers(self, duration):
        tp = self.relative_times
        return tp[0] <= -duration + 1e-9 * max(1.0, duration)


def simulate(config, progress=False):
    """Integrate ``config`` and return a :class:`Trajectory`.

    A solver error ends the run early; the partial trajectory is returned with
    the exception stored in ``Trajectory.error``.
    """
    system = config.system()
    state = system.initial_state(config.gamma0, config.omega0)
    weights = domain_weights(system.grid)
    interval = config.output_interval or config.t_end
    n_out = max(1, int(math.ceil(config.t_end / interval - 1e-9)))
    out_times = np.minimum(np.arange(1, n_out + 1) * interval, config.t_end)
    out_times[-1] = config.t_end

    times = [state.t]
    gammas = [state.gamma]
    omegas = [state.omega]
    records = [diagnostics(state, weights)]
    error = None
    try:
        for target in out_times:
            while state.t < target - 1e-12 * max(1.0, target):
                remaining = target - state.t
                if config.dt_rule == "fixed":
                    n = max(1, int(math.ceil(remaining / config.dt - 1e-9)))
                    dt = remaining / n
                    for _ in range(n):
                        state = system.step(state, dt)
                else:
                    # the limit moves with the flow, so it is re-evaluated every step;
                    # the last two steps share what is left to avoid a sliver
                    while state.t < target - 1e-12 * max(1.0, target):
                        base = config.cfl_safety * system.stability_limit(state)
                        left = target - state.t
                        dt = left if left <= base * (1 + 1e-9) else min(base, left / 2)
                        state = system.step(state, dt)
                # land exactly on the output time
                state = SwirlState(state.grid, float(target), state.gamma, state.omega,
                                   state.psi, state.v_r, state.v_z)
            state = system.recover(state.t, state.gamma, state.omega)
            times.append(state.t)
            gammas.append(state.gamma)
            omegas.append(state.omega)
            records.append(diagnostics(state, weights))
            if progress:
                log.info("t=%.6g sup|Gamma|=%.6g", state.t, records[-1].sup_abs_gamma)
    except SwirlboundError as exc:
        error = exc
        log.warning("run stopped at t=%.6g: %s", state.t, exc)
    return Trajectory(system, np.array(times), np.array(gammas), np.array(omegas),
                      config.t_end, records, float(np.max(np.abs(gammas[0]))), error)


def residual_omega_consistency(v, dv_dt):
    """Residual of the Omega equation evaluated from a velocity field.

    ``Omega`` is formed independently as ``curl(v)_theta / r`` and its time
    derivative as ``curl(dv_dt)_theta / r``; the residual is::

        dOmega/dt - [lap Omega - b.grad Omega + (2/r) dOmega/dr
                     + (2 v_theta / r**2) dv_theta/dz]

    It is ``O(h**2)`` (plus the error in ``dv_dt``) for a true solution and
    NaN on the boundary ring.
    """
    from .cylops import d_dr, d_dz, laplacian_axisym

    g = v.grid
    r = g.rr
    omega = curl_axisym(v).omega_theta / r
    omega_t = curl_axisym(dv_dt).omega_theta / r
    rhs = (laplacian_axisym(g, omega) - v.v_r * d_dr(g, omega) - v.v_z * d_dz(g, omega)
           + 2 / r * d_dr(g, omega) + 2 * v.v_theta / r ** 2 * d_dz(g, v.v_theta))
    return omega_t - rhs
