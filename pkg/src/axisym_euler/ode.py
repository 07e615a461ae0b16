"""Reduced on-axis dynamics: axial strain ``lambda`` and axis vorticity ``omega_bar``.

Along an axis particle path the pair obeys

    d(lambda)/dt    = lambda**2/2 - omega_bar**2/2 + 2 q,     q = d^2 p / dr^2 on the axis
    d(omega_bar)/dt = lambda * omega_bar

With ``q = 0`` this is the Constantin-Lax-Majda system, which linearises under
``theta = lambda + i omega_bar`` to the complex Riccati equation
``d(theta)/dt = theta**2 / 2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import PchipInterpolator

from .errors import BlowUpSingularity, DomainError, NonFiniteState

SINGULAR_EPS = 1e-12
ZERO_VORTICITY = 1e-300


@dataclass(frozen=True)
class AxisState:
    """On-axis state ``(lambda, omega_bar)``; both in units of 1/time."""

    lam: float
    omega_bar: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and math.isfinite(self.omega_bar)):
            raise NonFiniteState(f"non-finite axis state ({self.lam}, {self.omega_bar})")

    @property
    def theta(self) -> ThetaValue:
        return ThetaValue(self.lam, self.omega_bar)

    def magnitude(self) -> float:
        return max(abs(self.lam), abs(self.omega_bar))

    def __iter__(self) -> Iterator[float]:
        yield self.lam
        yield self.omega_bar


@dataclass(frozen=True)
class ThetaValue:
    """Complex combination ``lambda + i omega_bar``."""

    re: float
    im: float

    @classmethod
    def from_complex(cls, z: complex) -> ThetaValue:
        return cls(float(z.real), float(z.imag))

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    @property
    def state(self) -> AxisState:
        return AxisState(self.re, self.im)


# -- closed forms -------------------------------------------------------------


def closed_form_theta(theta0: ThetaValue, t: float, eps: float = SINGULAR_EPS) -> ThetaValue:
    """Exact Riccati solution ``2 theta0 / (2 - theta0 t)``."""
    z0 = complex(theta0)
    denom = 2.0 - z0 * t
    if abs(denom) < eps:
        raise BlowUpSingularity(f"|2 - theta0 t| = {abs(denom):.3e} at t = {t}")
    return ThetaValue.from_complex(2.0 * z0 / denom)


def closed_form_state(lambda0: float, omega0: float, t: float, eps: float = SINGULAR_EPS) -> AxisState:
    """Real and imaginary parts of the Riccati solution, written out.

    The common denominator is ``|2 - theta0 t|**2 = (2 - lambda0 t)**2 + omega0**2 t**2``.
    """
    denom = (2.0 - lambda0 * t) ** 2 + (omega0 * t) ** 2
    if math.sqrt(denom) < eps:
        raise BlowUpSingularity(f"denominator {denom:.3e} at t = {t}")
    lam = (4.0 * lambda0 - 2.0 * (lambda0**2 + omega0**2) * t) / denom
    om = 4.0 * omega0 / denom
    return AxisState(lam, om)


def blowup_time(lambda0: float, omega0: float) -> float | None:
    """Singular time of the unforced system, or None when the solution is global.

    The denominator vanishes at some t > 0 only when omega0 is (exactly) zero and
    lambda0 > 0; then it does so at t = 2/lambda0.
    """
    if abs(omega0) <= ZERO_VORTICITY and lambda0 > 0.0:
        return 2.0 / lambda0
    return None


def near_blowup_time(lambda0: float, omega0: float) -> tuple[float, float] | None:
    """Time and value of the minimum of the closed-form denominator for t > 0.

    Useful when omega0 is small but nonzero: the solution stays finite but peaks
    at ``t_peak`` with ``|theta| = 2 |theta0| / sqrt(d_min)``.
    Returns None when the denominator is increasing for all t > 0 (lambda0 <= 0).
    """
    mag2 = lambda0**2 + omega0**2
    if lambda0 <= 0.0 or mag2 == 0.0:
        return None
    t_peak = 2.0 * lambda0 / mag2
    d_min = 4.0 * omega0**2 / mag2
    return t_peak, d_min


# -- right-hand sides ---------------------------------------------------------


def clm_rhs(state: AxisState) -> AxisState:
    lam, om = state.lam, state.omega_bar
    return AxisState(0.5 * lam * lam - 0.5 * om * om, lam * om)


def forced_rhs(state: AxisState, q: float) -> AxisState:
    lam, om = state.lam, state.omega_bar
    return AxisState(0.5 * lam * lam - 0.5 * om * om + 2.0 * q, lam * om)


def forced_rhs_axial(state: AxisState, p33: float) -> float:
    """Axial-component evolution ``-lambda**2 - d^2 p/dx3^2`` (an alternative to forced_rhs)."""
    return -state.lam * state.lam - p33


# -- comparison bound, vorticity transport, first integral ---------------------


def lower_bound_lambda(lambda0: float, t: float) -> float:
    """Comparison solution ``2 lambda0 / (2 - t lambda0)`` of ``y' = y**2 / 2``."""
    if lambda0 <= 0.0:
        raise DomainError("lower bound needs lambda0 > 0")
    if t >= 2.0 / lambda0:
        raise DomainError(f"t = {t} is past the comparison singular time {2.0 / lambda0}")
    return 2.0 * lambda0 / (2.0 - t * lambda0)


def vorticity_exponential(omega0: float, lambda_samples: Sequence[tuple[float, float]]) -> float:
    if omega0 == 0.0:
        return 0.0
    samples = np.asarray(lambda_samples, dtype=float).reshape(-1, 2)
    if samples.shape[0] < 2:
        return float(omega0)
    t, lam = samples[:, 0], samples[:, 1]
    if np.any(np.diff(t) <= 0.0):
        raise DomainError("sample times must increase")
    return float(omega0 * math.exp(trapezoid(lam, t)))


def invariant_Q(state: AxisState) -> float:
    """``(lambda**2 + omega_bar**2) / omega_bar``, conserved by the unforced system."""
    if state.omega_bar == 0.0:
        raise DomainError("invariant undefined for omega_bar = 0")
    return (state.lam**2 + state.omega_bar**2) / state.omega_bar


# -- initial data classification ----------------------------------------------


class InitialClass(enum.Enum):
    IN_S = "InS"
    IN_S0 = "InS0"
    NEITHER = "Neither"

    @property
    def in_s0(self) -> bool:
        return self is not InitialClass.NEITHER


@dataclass(frozen=True)
class InitialProfile:
    lambda0: Callable[[float], float]
    omega0: Callable[[float], float]

    def __call__(self, a: float) -> AxisState:
        return AxisState(float(self.lambda0(a)), float(self.omega0(a)))


def classify_initial_point(profile: InitialProfile, a: float, q0: float) -> InitialClass:
    state = profile(a)
    if not math.isfinite(q0):
        raise NonFiniteState("q0 must be finite")
    if state.omega_bar == 0.0 and state.lam > 0.0:
        return InitialClass.IN_S if q0 >= 0.0 else InitialClass.IN_S0
    return InitialClass.NEITHER


class BlowUpCriterion(NamedTuple):
    t1: float
    stated_threshold: float  # 1/lambda0 as written in the theorem
    proof_threshold: float  # 2/lambda0 as reached by the comparison argument
    meets_stated: bool
    meets_proof: bool


def hypothesis_violation_time(times: Sequence[float], q: Sequence[float]) -> float:
    """First sampled time with ``q < 0``; ``inf`` when the pressure curvature never turns negative."""
    t = np.asarray(times, dtype=float)
    qq = np.asarray(q, dtype=float)
    neg = np.nonzero(qq < 0.0)[0]
    return float(t[neg[0]]) if neg.size else math.inf


def blowup_criterion(t1: float, lambda0: float) -> BlowUpCriterion:
    """Evaluate both versions of the no-global-solution condition for a point in S."""
    if lambda0 <= 0.0:
        raise DomainError("criterion needs lambda0 > 0")
    stated = 1.0 / lambda0
    proof = 2.0 / lambda0
    return BlowUpCriterion(t1, stated, proof, t1 >= stated, t1 >= proof)


# -- forcing ------------------------------------------------------------------


class PressureForcing:
    """``q(t)``: on-axis radial pressure curvature along the trajectory.

    Build with :meth:`constant`, :meth:`tabulated` or :meth:`from_callable`.
    """

    def __init__(self, func: Callable[[float], float], t_min: float = -math.inf, t_max: float = math.inf,
                 kind: str = "callable"):
        self._func = func
        self.t_min = t_min
        self.t_max = t_max
        self.kind = kind

    @classmethod
    def constant(cls, q: float) -> PressureForcing:
        q = float(q)
        if not math.isfinite(q):
            raise DomainError("constant forcing must be finite")
        return cls(lambda t: q, kind="constant")

    @classmethod
    def zero(cls) -> PressureForcing:
        return cls.constant(0.0)

    @classmethod
    def tabulated(cls, times: Sequence[float], values: Sequence[float], interp: str = "pchip") -> PressureForcing:
        t = np.asarray(times, dtype=float)
        q = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != q.shape or t.size < 2:
            raise DomainError("tabulated forcing needs matching 1-d arrays of length >= 2")
        if np.any(np.diff(t) <= 0.0):
            raise DomainError("tabulated forcing times must be strictly increasing")
        if not np.all(np.isfinite(q)):
            raise DomainError("tabulated forcing values must be finite")
        if interp == "pchip":
            f = PchipInterpolator(t, q, extrapolate=False)
            func = lambda s: float(f(s))
        elif interp == "linear":
            func = lambda s: float(np.interp(s, t, q))
        else:
            raise DomainError(f"unknown interpolation {interp!r}")
        return cls(func, float(t[0]), float(t[-1]), kind=interp)

    @classmethod
    def from_callable(cls, func: Callable[[float], float], t_min: float = -math.inf,
                      t_max: float = math.inf) -> PressureForcing:
        return cls(func, t_min, t_max)

    def covers(self, a: float, b: float) -> bool:
        lo, hi = min(a, b), max(a, b)
        # tolerate rounding at the table ends
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        return self.t_min - slack <= lo and hi <= self.t_max + slack

    def __call__(self, t: float) -> float:
        t = min(max(t, self.t_min), self.t_max)
        return float(self._func(t))


# -- integrator ---------------------------------------------------------------


class Status(enum.Enum):
    COMPLETED_HORIZON = "CompletedHorizon"
    BLOWUP_DETECTED = "BlowUpDetected"
    STEP_FAILURE = "StepFailure"


@dataclass(frozen=True)
class IntegratorConfig:
    tol: float = 1e-10
    min_step: float = 1e-14
    max_step: float = 0.1
    initial_step: float = 1e-3
    blowup_threshold: float = 1e9
    safety: float = 0.9
    min_factor: float = 0.2
    max_factor: float = 5.0
    fixed_step: float | None = None
    max_steps: int = 5_000_000

    def __post_init__(self):
        for name in ("tol", "min_step", "max_step", "initial_step", "blowup_threshold"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive")
        if self.fixed_step is not None and not self.fixed_step > 0.0:
            raise DomainError("fixed_step must be positive")


class Sample(NamedTuple):
    t: float
    x3: float
    state: AxisState
    q: float


@dataclass
class TrajectoryRecord:
    t: np.ndarray
    x3: np.ndarray
    lam: np.ndarray
    omega_bar: np.ndarray
    q: np.ndarray
    status: Status
    t_terminal: float
    n_rejected: int = 0
    config: IntegratorConfig = field(default_factory=IntegratorConfig)

    @property
    def t_blow(self) -> float | None:
        return self.t_terminal if self.status is Status.BLOWUP_DETECTED else None

    @property
    def final_state(self) -> AxisState:
        return AxisState(float(self.lam[-1]), float(self.omega_bar[-1]))

    def __len__(self) -> int:
        return len(self.t)

    def samples(self) -> list[Sample]:
        return [Sample(float(t), float(x), AxisState(float(l), float(w)), float(q))
                for t, x, l, w, q in zip(self.t, self.x3, self.lam, self.omega_bar, self.q)]


def _rk4(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(state0: AxisState, forcing: PressureForcing | None, horizon: float,
              config: IntegratorConfig | None = None, x3_0: float = 0.0,
              velocity: Callable[[float, float], float] | None = None,
              backward: bool = False) -> TrajectoryRecord:
    """Integrate the forced on-axis system with RK4 and step-doubling error control.

    ``velocity(t, x3)``, when given, moves the particle label along the axis;
    otherwise ``x3`` stays at ``x3_0``. With ``backward=True`` the system is
    integrated from t = 0 down to t = -horizon and sample times decrease.
    """
    cfg = config or IntegratorConfig()
    if not horizon > 0.0 or not math.isfinite(horizon):
        raise DomainError("horizon must be positive and finite")
    forcing = forcing or PressureForcing.zero()
    sign = -1.0 if backward else 1.0
    if not forcing.covers(0.0, sign * horizon):
        raise DomainError("forcing table does not cover the integration interval")

    def rhs(s, y):
        # s is elapsed time; physical time is sign * s
        t = sign * s
        q = forcing(t)
        lam, om = y[0], y[1]
        v = velocity(t, y[2]) if velocity is not None else 0.0
        return sign * np.array([0.5 * lam * lam - 0.5 * om * om + 2.0 * q, lam * om, v])

    y = np.array([state0.lam, state0.omega_bar, x3_0], dtype=float)
    ts, ys, qs = [0.0], [y.copy()], [forcing(0.0)]
    s = 0.0
    h = cfg.fixed_step if cfg.fixed_step is not None else min(cfg.initial_step, cfg.max_step, horizon)
    status = Status.COMPLETED_HORIZON
    n_rejected = 0
    steps = 0

    def finish(st: Status, t_end: float) -> TrajectoryRecord:
        arr = np.array(ys)
        return TrajectoryRecord(sign * np.array(ts), arr[:, 2], arr[:, 0], arr[:, 1], np.array(qs), st,
                                sign * t_end, n_rejected, cfg)

    while s < horizon:
        steps += 1
        if steps > cfg.max_steps:
            return finish(Status.STEP_FAILURE, s)
        remaining = horizon - s
        last = h >= remaining * (1.0 - 1e-12)
        h_try = remaining if last else h

        if cfg.fixed_step is not None:
            y_new = _rk4(rhs, s, y, h_try)
            if not np.all(np.isfinite(y_new)):
                return finish(Status.STEP_FAILURE, s)
        else:
            y_full = _rk4(rhs, s, y, h_try)
            y_half = _rk4(rhs, s, y, 0.5 * h_try)
            y_two = _rk4(rhs, s + 0.5 * h_try, y_half, 0.5 * h_try)
            diff = y_two - y_full
            if np.all(np.isfinite(diff)):
                scale = cfg.tol * (1.0 + np.abs(y_two))
                err = float(np.max(np.abs(diff) / 15.0 / scale))
            else:
                err = math.inf
            if err > 1.0:
                n_rejected += 1
                factor = cfg.min_factor if not math.isfinite(err) else max(cfg.min_factor, cfg.safety * err ** -0.2)
                h = h_try * factor
                if h < cfg.min_step:
                    return finish(Status.STEP_FAILURE, s)
                continue
            y_new = y_two + diff / 15.0
            factor = cfg.max_factor if err == 0.0 else min(cfg.max_factor, max(cfg.min_factor, cfg.safety * err ** -0.2))
            h = min(h_try * factor, cfg.max_step)
            if h < cfg.min_step:
                h = cfg.min_step

        s = horizon if last else s + h_try
        y = y_new
        ts.append(s)
        ys.append(y.copy())
        qs.append(forcing(sign * s))
        if max(abs(y[0]), abs(y[1])) > cfg.blowup_threshold:
            return finish(Status.BLOWUP_DETECTED, s)

    return finish(status, horizon)
