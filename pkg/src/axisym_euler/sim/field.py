"""Swirling axisymmetric flow state and its time stepping.

The evolved unknowns are the even-in-r reductions

    eta   = omega_theta / r
    sigma = v_theta / r

which stay finite on the axis, so the axis row is an ordinary grid row and the
odd quantities ``omega_theta = r eta``, ``v_theta = r sigma`` vanish there
identically. Along particle paths

    D(sigma)/Dt = -2 (v_r / r) sigma
    D(eta)/Dt   = d(sigma**2)/dz

with the meridional velocity ``v_r = -(1/r) dpsi/dz``, ``v_z = (1/r) dpsi/dr``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from ..errors import CFLViolation, NonFiniteField, ParityViolation, ValidationError
from .grid import Grid2D
from .poisson import apply_stream_operator, solve_pressure_poisson, solve_stream

Profile = Callable[[np.ndarray, np.ndarray], np.ndarray]

PARITY_TOL = 1e-10


def ddz(f: np.ndarray, dz: float) -> np.ndarray:
    return (np.roll(f, -1, axis=1) - np.roll(f, 1, axis=1)) / (2.0 * dz)


def d2dz2(f: np.ndarray, dz: float) -> np.ndarray:
    return (np.roll(f, -1, axis=1) - 2.0 * f + np.roll(f, 1, axis=1)) / dz**2


def ddr(f: np.ndarray, dr: float, parity: int) -> np.ndarray:
    """Centred radial derivative; the axis row uses the reflected ghost of given parity (+1 even, -1 odd)
    and the wall row a one-sided second-order stencil."""
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * dr)
    out[0] = 0.0 if parity > 0 else f[1] / dr
    out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dr)
    return out


@dataclass(frozen=True)
class Velocity:
    v_r: np.ndarray
    v_z: np.ndarray
    vr_over_r: np.ndarray


def meridional_velocity(grid: Grid2D, psi: np.ndarray) -> Velocity:
    r, dr = grid.r, grid.dr
    dpsi_dz = ddz(psi, grid.dz)
    v_r = np.zeros_like(psi)
    v_r[1:] = -dpsi_dz[1:] / r[1:, None]
    a = np.empty_like(psi)
    a[1:] = v_r[1:] / r[1:, None]
    # psi ~ c(z) r^2 near the axis
    a[0] = -dpsi_dz[1] / dr**2
    v_z = np.empty_like(psi)
    v_z[1:-1] = (psi[2:] - psi[:-2]) / (2.0 * dr * r[1:-1, None])
    v_z[0] = 2.0 * psi[1] / dr**2
    v_z[-1] = (3.0 * psi[-1] - 4.0 * psi[-2] + psi[-3]) / (2.0 * dr * r[-1])
    return Velocity(v_r, v_z, a)


def discrete_divergence(grid: Grid2D, vel: Velocity) -> np.ndarray:
    """``(1/r) d(r v_r)/dr + dv_z/dz`` with the same centred stencils, interior rows."""
    r, dr = grid.r, grid.dr
    rv = r[:, None] * vel.v_r
    return (rv[2:] - rv[:-2]) / (2.0 * dr * r[1:-1, None]) + ddz(vel.v_z, grid.dz)[1:-1]


@dataclass(frozen=True)
class AxisymField:
    """Immutable snapshot of a swirling axisymmetric flow on ``grid``."""

    grid: Grid2D
    eta: np.ndarray
    sigma: np.ndarray
    t: float = 0.0
    psi: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.eta.shape != self.grid.shape or self.sigma.shape != self.grid.shape:
            raise ValidationError("field", "array shape does not match grid")
        if self.psi is None:
            object.__setattr__(self, "psi", solve_stream(self.grid, self.omega_theta))
        for arr in (self.eta, self.sigma, self.psi):
            arr.flags.writeable = False

    @cached_property
    def omega_theta(self) -> np.ndarray:
        return self.grid.r[:, None] * self.eta

    @cached_property
    def v_theta(self) -> np.ndarray:
        return self.grid.r[:, None] * self.sigma

    @cached_property
    def velocity(self) -> Velocity:
        return meridional_velocity(self.grid, self.psi)

    @property
    def v_r(self) -> np.ndarray:
        return self.velocity.v_r

    @property
    def v_z(self) -> np.ndarray:
        return self.velocity.v_z

    def energy(self) -> float:
        """``int (v_r^2 + v_z^2 + v_theta^2) r dr dz`` (trapezoid in r, periodic sum in z)."""
        e = self.v_r**2 + self.v_z**2 + self.v_theta**2
        return float(np.sum(self.grid.trapz_weights()[:, None] * e) * self.grid.dz)

    def max_divergence(self) -> float:
        return float(np.max(np.abs(discrete_divergence(self.grid, self.velocity))))

    def max_axis_parity(self) -> float:
        return float(max(np.max(np.abs(self.v_theta[0])), np.max(np.abs(self.omega_theta[0])),
                         np.max(np.abs(self.psi[0]))))

    def max_speed(self) -> float:
        return float(max(np.max(np.abs(self.v_r)), np.max(np.abs(self.v_z)), np.max(np.abs(self.v_theta))))


# -- initial data -----------------------------------------------------------------


def _check_parity(name: str, f: Profile, grid: Grid2D, R: np.ndarray, Z: np.ndarray, odd: bool,
                  vanish_on_axis: bool) -> np.ndarray:
    plus = np.asarray(f(R, Z), dtype=float) * np.ones(grid.shape)
    minus = np.asarray(f(-R, Z), dtype=float) * np.ones(grid.shape)
    if not (np.all(np.isfinite(plus)) and np.all(np.isfinite(minus))):
        raise ParityViolation(f"{name}: non-finite samples")
    scale = 1.0 + float(np.max(np.abs(plus)))
    mismatch = np.max(np.abs(minus + plus)) if odd else np.max(np.abs(minus - plus))
    if mismatch > PARITY_TOL * scale:
        raise ParityViolation(f"{name} is not {'odd' if odd else 'even'} in r (mismatch {mismatch:.3e})")
    if vanish_on_axis and np.max(np.abs(plus[0])) > PARITY_TOL * scale:
        raise ParityViolation(f"{name} does not vanish on the axis")
    return plus


def init_field(grid: Grid2D, psi0: Profile | None = None, v_theta0: Profile | None = None,
               omega_theta0: Profile | None = None) -> AxisymField:
    """Sample analytic initial data ``f(r, z)`` (vectorised callables) onto ``grid``.

    The meridional part comes from ``psi0`` (even in r, zero on the axis) or
    ``omega_theta0`` (odd in r). Profiles are probed at ``-r`` to verify parity.
    """
    if psi0 is not None and omega_theta0 is not None:
        raise ValidationError("initial data", "give psi0 or omega_theta0, not both")
    R, Z = grid.mesh()
    r = grid.r
    eta = np.zeros(grid.shape)
    if psi0 is not None:
        psi = _check_parity("psi0", psi0, grid, R, Z, odd=False, vanish_on_axis=True)
        if np.max(np.abs(psi[-1])) > 1e-6 * (1e-300 + np.max(np.abs(psi))):
            raise ValidationError("psi0", "stream function must vanish at r_max")
        psi[-1] = 0.0
        # vorticity consistent with the discrete stream operator, so re-solving returns psi
        eta[1:-1] = -apply_stream_operator(grid, psi)[1:-1] / r[1:-1, None] ** 2
        eta[0] = (4.0 * eta[1] - eta[2]) / 3.0
        eta[-1] = 3.0 * eta[-2] - 3.0 * eta[-3] + eta[-4]
    elif omega_theta0 is not None:
        om = _check_parity("omega_theta0", omega_theta0, grid, R, Z, odd=True, vanish_on_axis=True)
        eta[1:] = om[1:] / r[1:, None]
        eta[0] = (4.0 * eta[1] - eta[2]) / 3.0
    sigma = np.zeros(grid.shape)
    if v_theta0 is not None:
        vt = _check_parity("v_theta0", v_theta0, grid, R, Z, odd=True, vanish_on_axis=True)
        sigma[1:] = vt[1:] / r[1:, None]
        # v_theta = r (s0 + s2 r^2 + ...): Richardson limit of v_theta / r
        sigma[0] = (4.0 * sigma[1] - sigma[2]) / 3.0
    return AxisymField(grid, eta, sigma, 0.0)


# -- time stepping ------------------------------------------------------------------


def _transport(grid: Grid2D, vel: Velocity, f: np.ndarray) -> np.ndarray:
    """Flux-form ``div(u f)`` for an even-in-r scalar ``f``."""
    r, dr, dz = grid.r, grid.dr, grid.dz
    out = np.empty_like(f)
    rvf = r[:, None] * vel.v_r * f
    out[1:-1] = (rvf[2:] - rvf[:-2]) / (2.0 * dr * r[1:-1, None])
    # (1/r) d(r v_r f)/dr -> 2 (v_r/r) f on the axis
    out[0] = 2.0 * vel.vr_over_r[0] * f[0]
    out += ddz(vel.v_z * f, dz)
    # v_r = 0 on the wall: plain axial advection
    out[-1] = vel.v_z[-1] * ddz(f, dz)[-1]
    return out


def rhs(grid: Grid2D, eta: np.ndarray, sigma: np.ndarray, psi: np.ndarray | None = None
        ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if psi is None:
        psi = solve_stream(grid, grid.r[:, None] * eta)
    vel = meridional_velocity(grid, psi)
    dsigma = -_transport(grid, vel, sigma) - 2.0 * vel.vr_over_r * sigma
    deta = -_transport(grid, vel, eta) + ddz(sigma * sigma, grid.dz)
    return deta, dsigma, psi


def stable_dt(fld: AxisymField, cfl: float = 0.5) -> float:
    vmax = fld.max_speed()
    h = min(fld.grid.dr, fld.grid.dz)
    return np.inf if vmax == 0.0 else cfl * h / vmax


def step(fld: AxisymField, dt: float, cfl: float = 0.5) -> AxisymField:
    """One SSP-RK3 step (Shu-Osher form), re-solving the stream function at every stage."""
    if not dt > 0.0:
        raise CFLViolation("dt must be positive")
    limit = stable_dt(fld, cfl)
    if dt > limit * (1.0 + 1e-12):
        raise CFLViolation(f"dt = {dt:.4g} exceeds CFL limit {limit:.4g}")
    g = fld.grid
    e0, s0 = fld.eta, fld.sigma
    de, ds, _ = rhs(g, e0, s0, fld.psi)
    e1, s1 = e0 + dt * de, s0 + dt * ds
    de, ds, _ = rhs(g, e1, s1)
    e2 = 0.75 * e0 + 0.25 * (e1 + dt * de)
    s2 = 0.75 * s0 + 0.25 * (s1 + dt * ds)
    de, ds, _ = rhs(g, e2, s2)
    e3 = e0 / 3.0 + 2.0 / 3.0 * (e2 + dt * de)
    s3 = s0 / 3.0 + 2.0 / 3.0 * (s2 + dt * ds)
    if not (np.all(np.isfinite(e3)) and np.all(np.isfinite(s3))):
        raise NonFiniteField(f"non-finite values after step to t = {fld.t + dt}")
    return AxisymField(g, e3, s3, fld.t + dt)


# -- pressure -----------------------------------------------------------------------


@dataclass(frozen=True)
class PressureField:
    grid: Grid2D
    p: np.ndarray
    rhs: np.ndarray = field(repr=False)
    wall_flux: np.ndarray = field(repr=False)


def pressure_source(fld: AxisymField) -> tuple[np.ndarray, np.ndarray]:
    """``-tr(grad v . grad v)`` in cylindrical form and the wall Neumann data ``v_theta^2 / r``.

        lap p = -(dv_r/dr)^2 - (v_r/r)^2 - (dv_z/dz)^2 - 2 dv_z/dr dv_r/dz + 2 v_theta dv_theta/dr / r
    """
    g = fld.grid
    vel = fld.velocity
    sig = fld.sigma
    dvr_dr = ddr(vel.v_r, g.dr, parity=-1)
    dvz_dr = ddr(vel.v_z, g.dr, parity=+1)
    dvr_dz = ddz(vel.v_r, g.dz)
    dvz_dz = ddz(vel.v_z, g.dz)
    # v_theta dv_theta/dr / r = sigma (sigma + r dsigma/dr)
    swirl = sig * (sig + g.r[:, None] * ddr(sig, g.dr, parity=+1))
    f = -dvr_dr**2 - vel.vr_over_r**2 - dvz_dz**2 - 2.0 * dvz_dr * dvr_dz + 2.0 * swirl
    wall = g.r[-1] * sig[-1] ** 2
    return f, wall


def recover_pressure(fld: AxisymField) -> PressureField:
    f, wall = pressure_source(fld)
    p = solve_pressure_poisson(fld.grid, f, wall)
    return PressureField(fld.grid, p, f, wall)


# -- axis diagnostics ---------------------------------------------------------------


def limit_over_r(f1: np.ndarray, f2: np.ndarray, dr: float) -> np.ndarray:
    """``lim_{r->0} f/r`` for odd ``f`` from its values at ``dr`` and ``2 dr``."""
    return (4.0 / 3.0 * f1 - f2 / 6.0) / dr


@dataclass(frozen=True)
class AxisDiagnostics:
    z: np.ndarray
    lam: np.ndarray
    omega_bar: np.ndarray
    q_rr: np.ndarray
    p_33: np.ndarray
    omega_bar_slope: np.ndarray  # 2 dv_theta/dr at the axis, second route

    def __post_init__(self):
        for name in ("lam", "omega_bar", "q_rr", "p_33"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise NonFiniteField(f"non-finite axis diagnostic {name}")


def extract_axis(fld: AxisymField, pressure: PressureField) -> AxisDiagnostics:
    g = fld.grid
    dr = g.dr
    lam = ddz(fld.v_z, g.dz)[0]
    vt = fld.v_theta
    omega_bar = 2.0 * limit_over_r(vt[1], vt[2], dr)
    slope = 2.0 * vt[1] / dr  # centred difference with the odd ghost
    p = pressure.p
    dp_dr = (p[2:4] - p[0:2]) / (2.0 * dr)  # rows 1 and 2
    q_rr = limit_over_r(dp_dr[0], dp_dr[1], dr)
    p_33 = d2dz2(p, g.dz)[0]
    return AxisDiagnostics(g.z.copy(), lam, omega_bar, q_rr, p_33, slope)


def check_trace_identity(diag: AxisDiagnostics, pressure: PressureField | None = None) -> np.ndarray:
    """``|lap p - (-1.5 lambda^2 + 0.5 omega_bar^2)|`` per axis node, with ``lap p = 2 q_rr + p_33`` on the axis."""
    lap = 2.0 * diag.q_rr + diag.p_33
    return np.abs(lap - (-1.5 * diag.lam**2 + 0.5 * diag.omega_bar**2))
