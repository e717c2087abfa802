"""Space-time norms over hollow parabolic cylinders and the Moser ladder.

Times in a :class:`SpaceTimeSample` are measured so that the final sample
sits at ``t = 0``; a parabolic cylinder of duration ``d`` then covers
``(-d, 0]``.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import (BadSigmaOrderError, DeltaOutOfRangeError,
                     GammaNotGreaterThanOneError, NegativeLambdaError,
                     NonPositiveFError, RegionNotCoveredError)
from .grid import AnnularGrid, SigmaSchedule, hollow, region_mask, time_weights

# exponents above this are accumulated in log space (2 * gamma**4 for gamma = 5/3)
LOG_SPACE_EXPONENT = 2 * (5 / 3) ** 4


@dataclass(frozen=True)
class SpaceTimeSample:
    """Grid fields at increasing times ending at ``t = 0``.

    ``values`` has shape ``(n_t, n_r, n_z)`` for a scalar or
    ``(n_t, n_c, n_r, n_z)`` for a vector with ``n_c`` components; norms of a
    vector sample use the pointwise Euclidean magnitude.
    """
    grid: AnnularGrid
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or values.shape[0] != times.size:
            raise ValueError("one field per sample time is required")
        if values.shape[-2:] != self.grid.shape:
            raise ValueError(f"fields must have shape {self.grid.shape}")
        if np.any(np.diff(times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def single(cls, grid, values, t=0.0):
        return cls(grid, np.array([t]), np.asarray(values, dtype=float)[None])

    @classmethod
    def from_trajectory(cls, trajectory, fn, indices=None):
        """Sample ``fn(state)`` along a trajectory, in shifted time."""
        if indices is None:
            indices = range(len(trajectory))
        indices = list(indices)
        values = np.array([fn(trajectory.state(i)) for i in indices])
        return cls(trajectory.grid, trajectory.relative_times[indices], values)

    @property
    def is_vector(self):
        return self.values.ndim == 4

    def magnitude(self, k=None):
        """``|f|`` at every time (or only at time index ``k``)."""
        v = self.values if k is None else self.values[k]
        if self.is_vector:
            return np.sqrt(np.sum(v ** 2, axis=-3))
        return np.abs(v)

    def map(self, fn):
        return SpaceTimeSample(self.grid, self.times, fn(self.values))


def _time_window(sample, duration):
    if sample.times[-1] < -1e-12 or sample.times[-1] > 1e-9:
        raise RegionNotCoveredError("sample must end at time 0")
    if sample.times[0] > -duration + 1e-9 * max(1.0, duration):
        raise RegionNotCoveredError(
            f"sample starts at {sample.times[0]:.6g}, window needs {-duration:.6g}")
    if sample.times.size == 1:
        return np.array([True]), np.ones(1)
    return time_weights(sample.times, -duration, 0.0)


def _space(sample, cylinder, clip=False):
    return region_mask(sample.grid, cylinder, clip=clip)


def lp_norm(sample, region, p):
    """``L^p`` norm of ``sample`` over a parabolic cylinder (``p`` may be inf).

    A sample with a single time slice is treated as a purely spatial norm over
    ``region.space``.
    """
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    space = _space(sample, region.space)
    single = sample.times.size == 1
    if single:
        in_t, w_t = np.array([True]), np.ones(1)
    else:
        in_t, w_t = _time_window(sample, region.duration)
    idx = np.flatnonzero(in_t)
    if math.isinf(p):
        return float(max(np.max(sample.magnitude(k)[space.mask]) for k in idx))
    mask = space.support
    w_s = space.weights[mask]
    idx = np.flatnonzero(w_t > 0)
    if p <= LOG_SPACE_EXPONENT:
        total = sum(w_t[k] * np.sum(w_s * sample.magnitude(k)[mask] ** p) for k in idx)
        return float(total ** (1 / p))
    return float(math.exp(_log_integral(sample, mask, w_s, idx, w_t, p) / p))


def _log_integral(sample, mask, w_s, idx, w_t, p):
    """``log sum w |f|^p`` accumulated in log space."""
    log_w_s = np.log(w_s, where=w_s > 0, out=np.full(w_s.shape, -np.inf))
    parts = []
    for k in idx:
        if w_t[k] <= 0:
            continue
        f = sample.magnitude(k)[mask]
        with np.errstate(divide="ignore"):
            terms = p * np.log(f) + log_w_s
        parts.append(math.log(w_t[k]) + logsumexp(terms))
    return float(logsumexp(parts)) if parts else -math.inf


def linf_l2(sample, cylinder, duration=None):
    """``max_t ||f(t)||_{L^2(cylinder)}`` over the window ``(-duration, 0]``.

    ``duration`` defaults to ``R**2`` of the cylinder.
    """
    duration = cylinder.R ** 2 if duration is None else duration
    space = _space(sample, cylinder)
    if sample.times.size == 1:
        idx = [0]
    else:
        in_t, _ = _time_window(sample, duration)
        idx = np.flatnonzero(in_t)
    mask = space.support
    w = space.weights[mask]
    return float(max(np.sqrt(np.sum(w * sample.magnitude(k)[mask] ** 2)) for k in idx))


def lambda_sup(v_theta, region):
    """``sup |v_theta|`` over ``region``."""
    return lp_norm(v_theta, region, math.inf)


@dataclass(frozen=True)
class LambdaReport:
    value: float
    bound: float

    @property
    def within(self):
        return self.value <= self.bound * (1 + 1e-12)


def lambda_report(v_theta, region, s0):
    """Lambda together with the a priori bound ``s0 / r_lo`` of the region."""
    return LambdaReport(lambda_sup(v_theta, region), s0 / region.space.r_lo)


def omega_bar_split(omega, lam):
    """``(Omega_plus, Omega_minus)``, both ``>= lam`` with difference ``Omega``."""
    if lam < 0:
        raise NegativeLambdaError(f"Lambda must be >= 0, got {lam}")
    omega = np.asarray(omega, dtype=float)
    plus = np.where(omega >= 0, omega + lam, lam)
    minus = np.where(omega <= 0, -omega + lam, lam)
    return plus, minus


def omega_bar_sample(trajectory, region=None):
    """``(Lambda, Omega_plus)`` on the last ``region.duration`` of a trajectory.

    ``Lambda`` is ``sup |v_theta|`` over ``region`` (default ``P_{1,4,1}``,
    the outermost rung of the Moser ladder).
    """
    region = SigmaSchedule().region(0) if region is None else region
    tp = trajectory.relative_times
    idx = np.flatnonzero(tp >= -region.duration - 1e-9)
    if tp[0] > -region.duration + 1e-9:
        raise RegionNotCoveredError(
            f"trajectory spans {-tp[0]:.6g} in time, the region needs {region.duration:.6g}")
    v_theta = SpaceTimeSample.from_trajectory(trajectory, lambda s: s.v_theta, idx)
    lam = lambda_sup(v_theta, region)
    omega = SpaceTimeSample(trajectory.grid, tp[idx], trajectory.omega[idx])
    return lam, omega.map(lambda w: omega_bar_split(w, lam)[0])


# -- cut-off functions ------------------------------------------------------------

def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3 - 2 * u)


def _smoothstep_slope(u):
    inside = (u > 0) & (u < 1)
    return np.where(inside, 6 * u * (1 - u), 0.0)


_MAX_SLOPE = 1.5


def _ramp(x, lo, hi):
    """Value and derivative of the ramp ``0`` at ``lo`` to ``1`` at ``hi``."""
    u = (x - lo) / (hi - lo)
    return _smoothstep(u), _smoothstep_slope(u) / (hi - lo)


def moser_cylinder(sigma):
    """``C(sigma) = C_{5 - 4 sigma, 4 sigma, 1}``."""
    return hollow(5 - 4 * sigma, 4 * sigma, 1.0)


@dataclass(frozen=True)
class CutoffPair:
    """Space cut-off ``phi`` and time cut-off ``eta`` between two cylinders.

    ``phi = (s_r s_z)**m`` where ``s_r, s_z`` are C1 cubic ramps that climb
    from 0 on the boundary of ``C(sigma1)`` to 1 on the boundary of
    ``C(sigma2)``; ``m = max(2, 1/(1 - delta))`` keeps ``|grad phi| / phi**delta``
    bounded by ``c_phi / (sigma1 - sigma2)``.  ``eta(t)`` is the squared ramp
    from ``-sigma1**2`` to ``-sigma2**2``.
    """
    delta: float
    sigma1: float
    sigma2: float
    m: float
    phi: np.ndarray
    phi_r: np.ndarray
    phi_z: np.ndarray
    c_phi: float
    c_eta: float
    times: np.ndarray = None
    eta_values: np.ndarray = None

    def eta(self, t):
        s, _ = _ramp(np.asarray(t, dtype=float), -self.sigma1 ** 2, -self.sigma2 ** 2)
        return s ** 2

    def eta_prime(self, t):
        s, ds = _ramp(np.asarray(t, dtype=float), -self.sigma1 ** 2, -self.sigma2 ** 2)
        return 2 * s * ds

    def gradient_ratio(self):
        """``|grad phi| / phi**delta`` (zero where ``phi = 0``)."""
        grad = np.hypot(self.phi_r, self.phi_z)
        out = np.zeros_like(grad)
        pos = self.phi > 0
        out[pos] = grad[pos] / self.phi[pos] ** self.delta
        return out


def make_cutoff(grid, sigma1, sigma2, delta=0.5, times=None):
    """Build a :class:`CutoffPair` on ``grid``; ``times`` optionally samples eta.

    The published constants follow from the largest ramp slope 3/2 over a
    transition of width ``4 (sigma1 - sigma2)``:
    ``c_phi = m * (3/2) * sqrt(2) / 4``.  For ``eta``,
    ``|eta'| <= 3 / (sigma1**2 - sigma2**2) <= 2.4 / (sigma1 - sigma2)`` since
    ``sigma1 + sigma2 >= 5/4``, and ``sigma1 - sigma2 <= 3/8`` turns this into
    ``0.9 / (sigma1 - sigma2)**2``.
    """
    if not 0 < delta < 1:
        raise DeltaOutOfRangeError(f"delta must lie in (0, 1), got {delta}")
    if not (5 / 8 <= sigma2 < sigma1 <= 1):
        raise BadSigmaOrderError(
            f"need 5/8 <= sigma2 < sigma1 <= 1, got sigma1={sigma1}, sigma2={sigma2}")
    m = max(2.0, 1 / (1 - delta))
    outer, inner = moser_cylinder(sigma1), moser_cylinder(sigma2)
    r, z = grid.rr, grid.zz
    lo_v, lo_d = _ramp(r, outer.r_lo, inner.r_lo)
    hi_v, hi_d = _ramp(r, outer.r_hi, inner.r_hi)
    s_r = lo_v * hi_v
    ds_r = lo_d * hi_v + lo_v * hi_d
    az = np.abs(z)
    s_z, dz_abs = _ramp(az, outer.half_height, inner.half_height)
    ds_z = dz_abs * np.sign(z)
    s = s_r * s_z
    phi = s ** m
    common = m * s ** (m - 1)
    phi_r = common * ds_r * s_z
    phi_z = common * s_r * ds_z
    c_phi = m * _MAX_SLOPE * math.sqrt(2) / 4
    pair = CutoffPair(delta, sigma1, sigma2, m, phi, phi_r, phi_z, c_phi, 0.9)
    if times is not None:
        times = np.asarray(times, dtype=float)
        object.__setattr__(pair, "times", times)
        object.__setattr__(pair, "eta_values", pair.eta(times))
    return pair


# -- exponent series --------------------------------------------------------------

SERIES_KINDS = ("geometric", "shifted", "linear_plus", "linear_minus_2", "linear_minus_4")


def _series_term(kind, gamma, j):
    x = 1 / gamma
    if kind == "geometric":
        return x ** j
    if kind == "shifted":
        return x ** (j - 1)
    if kind == "linear_plus":
        return (j + 1) * x ** (j - 1)
    if kind == "linear_minus_2":
        return 2 * (j - 1) * x ** (j - 1)
    return 4 * (j - 1) * x ** (j - 1)


def _series_limit(kind, gamma):
    x = 1 / gamma
    if kind == "geometric":
        return x / (1 - x)
    if kind == "shifted":
        return 1 / (1 - x)
    if kind == "linear_plus":
        return x / (1 - x) ** 2 + 2 / (1 - x)
    if kind == "linear_minus_2":
        return 2 * x / (1 - x) ** 2
    return 4 * x / (1 - x) ** 2


def _series_tail(kind, gamma, n):
    """Exact value of the terms ``j > n``."""
    x = 1 / gamma
    geo = x ** n / (1 - x)          # sum_{k >= n} x^k
    lin = x ** n * (n / (1 - x) + x / (1 - x) ** 2)   # sum_{k >= n} k x^k
    if kind == "geometric":
        return x * geo
    if kind == "shifted":
        return geo
    if kind == "linear_plus":
        return lin + 2 * geo
    return (2 if kind == "linear_minus_2" else 4) * lin


@dataclass(frozen=True)
class SeriesResult:
    """Partial sum over ``j = 1..i_max`` and the closed-form limit.

    ``first_omitted_bound`` is ``term(i_max + 1) * gamma / (gamma - 1)``, an
    upper bound on the tail only for the two geometric kinds;
    ``tail`` is the exact remainder for every kind.
    """
    kind: str
    gamma: float
    i_max: int
    partial: float
    limit: float
    tail: float
    first_omitted_bound: float

    @property
    def error(self):
        return abs(self.limit - self.partial)


def exponent_series(gamma, kind, i_max):
    if not gamma > 1:
        raise GammaNotGreaterThanOneError(f"gamma must exceed 1, got {gamma}")
    if kind not in SERIES_KINDS:
        raise ValueError(f"unknown series kind {kind!r}; choose from {SERIES_KINDS}")
    terms = [_series_term(kind, gamma, j) for j in range(1, i_max + 1)]
    partial = math.fsum(terms)
    first = _series_term(kind, gamma, i_max + 1)
    return SeriesResult(kind, gamma, i_max, partial, _series_limit(kind, gamma),
                        _series_tail(kind, gamma, i_max), first * gamma / (gamma - 1))


# -- Moser ladder -------------------------------------------------------------------

@dataclass(frozen=True)
class MoserLadderReport:
    """Norm ladder ``L_i = (int_{P(sigma_i)} f^(2 gamma^i))^(gamma^-i)``.

    ``extrapolated`` removes the leading ``gamma**-i`` measure term using the
    last two levels: ``(gamma log L_n - log L_{n-1}) / (gamma - 1)``.
    """
    schedule: SigmaSchedule
    levels: np.ndarray
    sigmas: np.ndarray
    values: np.ndarray
    direct_sup_sq: float
    extrapolated: float

    @property
    def tail(self):
        return float(self.values[-1])

    @property
    def ratios(self):
        return self.values[1:] / self.values[:-1]

    @property
    def relative_gap(self):
        """``L_tail / sup^2 - 1``."""
        return self.tail / self.direct_sup_sq - 1

    @property
    def extrapolated_gap(self):
        return self.extrapolated / self.direct_sup_sq - 1


def moser_ladder(sample, schedule=None, i_max=None):
    """Evaluate the ladder for a positive sample ``f`` (e.g. ``Omega_plus``)."""
    schedule = SigmaSchedule() if schedule is None else schedule
    i_max = schedule.i_max if i_max is None else i_max
    if i_max > schedule.i_max:
        schedule = SigmaSchedule(i_max)
    if sample.is_vector:
        raise ValueError("the ladder takes a scalar sample")
    if not np.all(sample.values > 0):
        raise NonPositiveFError("f must be strictly positive")
    gamma = schedule.gamma
    levels = np.arange(i_max + 1)
    sigmas = np.array([schedule.sigma(i) for i in levels])
    log_l = np.empty(i_max + 1)
    for i in levels:
        region = schedule.region(i)
        space = _space(sample, region.space)
        in_t, w_t = _time_window(sample, region.duration)
        idx = np.flatnonzero(w_t > 0)
        p = 2 * gamma ** i
        log_int = _log_integral(sample, space.support, space.weights[space.support],
                                idx, w_t, p)
        log_l[i] = log_int * gamma ** (-i)
    direct = lp_norm(sample, schedule.limit_region, math.inf) ** 2
    if i_max >= 1:
        extrap = (gamma * log_l[-1] - log_l[-2]) / (gamma - 1)
    else:
        extrap = log_l[-1]
    return MoserLadderReport(schedule, levels, sigmas, np.exp(log_l), direct,
                             float(math.exp(extrap)))
