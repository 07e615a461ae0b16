"""Numerical verification of the on-axis limits of smooth axisymmetric fields.

A :class:`SyntheticField` is given by cylindrical profiles; every check
evaluates it through the Cartesian map only, so the residuals are independent
of the grid solver's stencils.

Limit identities (both sides estimated with second-order stencils of width h):

    axis_cartesian_vanish    v1 = v2 = d3 v1 = d3 v2 = d1 v3 = d2 v3 = 0
    axis_cylindrical_vanish  v_r = v_theta = d3 v_r = d3 v_theta = dr v3 = 0
    radial_strain            d1 v1 = d2 v2 = -d3 v3 / 2 = dr v_r = lim v_r / r
    swirl_rate               d1 v2 = -d2 v1 = dr v_theta = lim v_theta / r
    pressure_gradient_vanish d1 p = d2 p = d1 d2 p = d1 d3 p = d2 d3 p = dr p = dr d3 p = 0
    pressure_hessian         d1^2 p = d2^2 p = dr^2 p = lim dr p / r

Finite-radius identities hold exactly (rounding only): the quarter-turn
relations ``quarter_turn_*`` and the diagonal splittings ``diagonal_*`` of
values. The ``diagonal_*`` relations involving derivatives compare Cartesian
and cylindrical finite differences and converge at second order instead.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import ParityViolation, UnknownIdentity

Profile = Callable[[float, float], float]

RAY_ANGLE = 0.37  # generic direction, not aligned with the coordinate axes
SUSPECT_ORDER = 1.5
DEFAULT_H = 1e-3


@dataclass(frozen=True)
class SyntheticField:
    vr: Profile
    vtheta: Profile
    vz: Profile
    p: Profile
    divergence_free: bool = True
    name: str = "field"

    def check_parity(self, z_samples=(0.0, 0.7, 1.9), radii=(0.1, 0.35, 0.8), tol: float = 1e-10) -> None:
        """Raise :class:`ParityViolation` unless v_r, v_theta are odd and v_z, p even in r."""
        for z in z_samples:
            if abs(self.vr(0.0, z)) > tol or abs(self.vtheta(0.0, z)) > tol:
                raise ParityViolation(f"{self.name}: odd profile nonzero on the axis at z = {z}")
            for r in radii:
                for label, f, sign in (("vr", self.vr, -1), ("vtheta", self.vtheta, -1), ("vz", self.vz, 1),
                                       ("p", self.p, 1)):
                    a, b = f(r, z), f(-r, z)
                    if abs(b - sign * a) > tol * (1.0 + abs(a)):
                        raise ParityViolation(f"{self.name}: {label} has the wrong parity at r = {r}, z = {z}")
            for label, f in (("vz", self.vz), ("p", self.p)):
                h = 1e-6
                if abs(f(h, z) - f(0.0, z)) / h > tol * 1e6 * (1.0 + abs(f(0.0, z))):
                    raise ParityViolation(f"{self.name}: {label} has a radial slope on the axis")


def cartesian_eval(field: SyntheticField, x1: float, x2: float, x3: float) -> tuple[float, float, float, float]:
    """Velocity ``(v1, v2, v3)`` and pressure at a Cartesian point.

    ``v1 = (x1/r) v_r - (x2/r) v_theta``, ``v2 = (x2/r) v_r + (x1/r) v_theta``;
    on the axis itself v1 = v2 = 0.
    """
    r = math.hypot(x1, x2)
    v3 = field.vz(r, x3)
    p = field.p(r, x3)
    if r == 0.0:
        return 0.0, 0.0, v3, p
    vr = field.vr(r, x3)
    vt = field.vtheta(r, x3)
    c, s = x1 / r, x2 / r
    return c * vr - s * vt, s * vr + c * vt, v3, p


# -- finite-difference helpers ------------------------------------------------------

_V1, _V2, _V3, _P = 0, 1, 2, 3
_UNIT = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


class _Probe:
    """Cartesian finite differences of one field with step h."""

    def __init__(self, field: SyntheticField, h: float):
        self.f = field
        self.h = h

    def val(self, x, comp: int) -> float:
        return cartesian_eval(self.f, x[0], x[1], x[2])[comp]

    def _shift(self, x, k: int, a: float):
        e = _UNIT[k]
        return (x[0] + a * e[0], x[1] + a * e[1], x[2] + a * e[2])

    def d(self, x, comp: int, k: int) -> float:
        h = self.h
        return (self.val(self._shift(x, k, h), comp) - self.val(self._shift(x, k, -h), comp)) / (2.0 * h)

    def d2(self, x, comp: int, k: int) -> float:
        h = self.h
        return (self.val(self._shift(x, k, h), comp) - 2.0 * self.val(x, comp)
                + self.val(self._shift(x, k, -h), comp)) / (h * h)

    def dd(self, x, comp: int, k: int, m: int) -> float:
        h = self.h
        pp = self.val(self._shift(self._shift(x, k, h), m, h), comp)
        pm = self.val(self._shift(self._shift(x, k, h), m, -h), comp)
        mp = self.val(self._shift(self._shift(x, k, -h), m, h), comp)
        mm = self.val(self._shift(self._shift(x, k, -h), m, -h), comp)
        return (pp - pm - mp + mm) / (4.0 * h * h)

    # quantities along the ray s -> s (cos phi, sin phi)
    def ray_point(self, s: float, z: float):
        return (s * math.cos(RAY_ANGLE), s * math.sin(RAY_ANGLE), z)

    def radial(self, x) -> float:
        """Velocity component along the ray direction (signed v_r)."""
        c, s = math.cos(RAY_ANGLE), math.sin(RAY_ANGLE)
        v = cartesian_eval(self.f, *x)
        return c * v[0] + s * v[1]

    def azimuthal(self, x) -> float:
        c, s = math.cos(RAY_ANGLE), math.sin(RAY_ANGLE)
        v = cartesian_eval(self.f, *x)
        return -s * v[0] + c * v[1]

    def along_ray(self, g: Callable, s: float, z: float) -> float:
        """Centred derivative of ``g(point)`` along the ray at arc length s."""
        h = self.h
        return (g(self.ray_point(s + h, z)) - g(self.ray_point(s - h, z))) / (2.0 * h)

    def along_ray2(self, g: Callable, s: float, z: float) -> float:
        h = self.h
        return (g(self.ray_point(s + h, z)) - 2.0 * g(self.ray_point(s, z)) + g(self.ray_point(s - h, z))) / (h * h)

    def d3_of(self, g: Callable, x) -> float:
        h = self.h
        return (g((x[0], x[1], x[2] + h)) - g((x[0], x[1], x[2] - h))) / (2.0 * h)

    def axis_value(self, g: Callable[[float], float]) -> float:
        """Linear extrapolation to s = 0 of ``g(s)`` sampled at s = h, 2h."""
        return 2.0 * g(self.h) - g(2.0 * self.h)

    def limit_over_s(self, g: Callable[[float], float]) -> float:
        """``lim_{s->0} g(s)/s`` for odd ``g``; Richardson on g(h)/h and g(2h)/(2h)."""
        h = self.h
        return (4.0 * g(h) / h - g(2.0 * h) / (2.0 * h)) / 3.0


def _spread(values) -> float:
    return float(max(values) - min(values))


# -- limit identities -----------------------------------------------------------------


def _axis_cartesian_vanish(pr: _Probe, z: float) -> float:
    rp = pr.ray_point
    terms = [
        lambda s: pr.val(rp(s, z), _V1),
        lambda s: pr.val(rp(s, z), _V2),
        lambda s: pr.d(rp(s, z), _V1, 2),
        lambda s: pr.d(rp(s, z), _V2, 2),
        lambda s: pr.d(rp(s, z), _V3, 0),
        lambda s: pr.d(rp(s, z), _V3, 1),
    ]
    return max(abs(pr.axis_value(g)) for g in terms)


def _axis_cylindrical_vanish(pr: _Probe, z: float) -> float:
    rp = pr.ray_point
    v3 = lambda x: pr.val(x, _V3)
    terms = [
        lambda s: pr.radial(rp(s, z)),
        lambda s: pr.azimuthal(rp(s, z)),
        lambda s: pr.d3_of(pr.radial, rp(s, z)),
        lambda s: pr.d3_of(pr.azimuthal, rp(s, z)),
        lambda s: pr.along_ray(v3, s, z),
    ]
    return max(abs(pr.axis_value(g)) for g in terms)


def _radial_strain(pr: _Probe, z: float) -> float:
    o = (0.0, 0.0, z)
    vals = [pr.d(o, _V1, 0), pr.d(o, _V2, 1),
            pr.along_ray(pr.radial, 0.0, z),
            pr.limit_over_s(lambda s: pr.radial(pr.ray_point(s, z)))]
    if pr.f.divergence_free:
        vals.append(-0.5 * pr.d(o, _V3, 2))
    return _spread(vals)


def _swirl_rate(pr: _Probe, z: float) -> float:
    o = (0.0, 0.0, z)
    vals = [pr.d(o, _V2, 0), -pr.d(o, _V1, 1),
            pr.along_ray(pr.azimuthal, 0.0, z),
            pr.limit_over_s(lambda s: pr.azimuthal(pr.ray_point(s, z)))]
    return _spread(vals)


def _pressure_gradient_vanish(pr: _Probe, z: float) -> float:
    rp = pr.ray_point
    p = lambda x: pr.val(x, _P)
    terms = [
        lambda s: pr.d(rp(s, z), _P, 0),
        lambda s: pr.d(rp(s, z), _P, 1),
        lambda s: pr.dd(rp(s, z), _P, 0, 1),
        lambda s: pr.dd(rp(s, z), _P, 0, 2),
        lambda s: pr.dd(rp(s, z), _P, 1, 2),
        lambda s: pr.along_ray(p, s, z),
        lambda s: pr.along_ray(lambda x: pr.d(x, _P, 2), s, z),
    ]
    return max(abs(pr.axis_value(g)) for g in terms)


def _pressure_hessian(pr: _Probe, z: float) -> float:
    o = (0.0, 0.0, z)
    p = lambda x: pr.val(x, _P)
    vals = [pr.d2(o, _P, 0), pr.d2(o, _P, 1),
            pr.along_ray2(p, 0.0, z),
            pr.limit_over_s(lambda s: pr.along_ray(p, s, z))]
    return _spread(vals)


LIMIT_IDENTITIES: dict[str, Callable[[_Probe, float], float]] = {
    "axis_cartesian_vanish": _axis_cartesian_vanish,
    "axis_cylindrical_vanish": _axis_cylindrical_vanish,
    "radial_strain": _radial_strain,
    "swirl_rate": _swirl_rate,
    "pressure_gradient_vanish": _pressure_gradient_vanish,
    "pressure_hessian": _pressure_hessian,
}


def axis_quantities(field: SyntheticField, z: float, h: float = DEFAULT_H) -> tuple[float, float, float]:
    """``(lambda, omega_bar, q_rr) = (d3 v3, d1 v2 - d2 v1, d1^2 p)`` at ``(0, 0, z)`` by Cartesian differences."""
    pr = _Probe(field, h)
    o = (0.0, 0.0, z)
    return pr.d(o, _V3, 2), pr.d(o, _V2, 0) - pr.d(o, _V1, 1), pr.d2(o, _P, 0)


# -- finite-radius identities ---------------------------------------------------------

ROTATION_RADIUS = 0.3
ROTATION_ANGLE = 0.81


def _cyl_dr(f: Profile, r: float, z: float, h: float) -> float:
    return (f(r + h, z) - f(r - h, z)) / (2.0 * h)


def _cyl_dr2(f: Profile, r: float, z: float, h: float) -> float:
    return (f(r + h, z) - 2.0 * f(r, z) + f(r - h, z)) / (h * h)


def rotation_residuals(field: SyntheticField, z: float, h: float = DEFAULT_H,
                       radius: float = ROTATION_RADIUS) -> dict[str, float]:
    """Quarter-turn and diagonal value identities at finite radius; all hold to rounding."""
    pr = _Probe(field, h)
    x = (radius * math.cos(ROTATION_ANGLE), radius * math.sin(ROTATION_ANGLE), z)
    xq = (-x[1], x[0], z)
    rho = math.hypot(x[0], x[1])
    xb = (rho / math.sqrt(2.0), rho / math.sqrt(2.0), z)
    v = lambda y, c: pr.val(y, c)
    sq2 = math.sqrt(2.0)
    return {
        "quarter_turn_v1": abs(v(xq, _V1) + v(x, _V2)),
        "quarter_turn_v2": abs(v(xq, _V2) - v(x, _V1)),
        "diagonal_sum": abs(v(xb, _V1) + v(xb, _V2) - sq2 * field.vr(rho, z)),
        "diagonal_difference": abs(v(xb, _V1) - v(xb, _V2) + sq2 * field.vtheta(rho, z)),
        "quarter_turn_d1v3": abs(pr.d(xq, _V3, 0) + pr.d(x, _V3, 1)),
        "quarter_turn_d2v3": abs(pr.d(xq, _V3, 1) - pr.d(x, _V3, 0)),
        "quarter_turn_d1v1": abs(pr.d(xq, _V1, 0) - pr.d(x, _V2, 1)),
        "quarter_turn_d1v2": abs(pr.d(xq, _V2, 0) + pr.d(x, _V1, 1)),
    }


def diagonal_derivative_residuals(field: SyntheticField, z: float, h: float = DEFAULT_H,
                                  radius: float = ROTATION_RADIUS) -> dict[str, float]:
    """Diagonal-point relations between Cartesian and cylindrical derivatives (second-order residuals)."""
    pr = _Probe(field, h)
    rho = radius
    xb = (rho / math.sqrt(2.0), rho / math.sqrt(2.0), z)
    vr, vt = field.vr(rho, z), field.vtheta(rho, z)
    dvr, dvt = _cyl_dr(field.vr, rho, z, h), _cyl_dr(field.vtheta, rho, z, h)
    dp, d2p = _cyl_dr(field.p, rho, z, h), _cyl_dr2(field.p, rho, z, h)
    d11, d22 = pr.d(xb, _V1, 0), pr.d(xb, _V2, 1)
    d21, d12 = pr.d(xb, _V1, 1), pr.d(xb, _V2, 0)
    return {
        "diagonal_strain_difference": abs(d11 - d22 - (vt / rho - dvt)),
        "diagonal_strain_sum": abs(d11 + d22 - (vr / rho + dvr)),
        "diagonal_shear_sum": abs(d21 + d12 - (-vr / rho + dvr)),
        "diagonal_shear_difference": abs(d21 - d12 - (-vt / rho - dvt)),
        "transverse_laplacian": abs(pr.d2(xb, _P, 0) + pr.d2(xb, _P, 1) - (dp / rho + d2p)),
        "diagonal_mixed_hessian": abs(pr.dd(xb, _P, 0, 1) - (-dp / (2.0 * rho) + 0.5 * d2p)),
    }


# -- public API -----------------------------------------------------------------------


_DIAGONAL_IDS = ["diagonal_strain_difference", "diagonal_strain_sum", "diagonal_shear_sum",
                 "diagonal_shear_difference", "transverse_laplacian", "diagonal_mixed_hessian"]


def identity_ids() -> list[str]:
    return list(LIMIT_IDENTITIES) + _DIAGONAL_IDS


def check_identity(field: SyntheticField, identity_id: str, z: float, h: float = DEFAULT_H) -> float:
    """Absolute residual of one identity at the axis point ``(0, 0, z)`` using stencil width h."""
    if identity_id in LIMIT_IDENTITIES:
        return LIMIT_IDENTITIES[identity_id](_Probe(field, h), z)
    if identity_id in _DIAGONAL_IDS:
        return diagonal_derivative_residuals(field, z, h)[identity_id]
    raise UnknownIdentity(identity_id)


def rounding_floor(h: float) -> float:
    """Residual level treated as exact: second differences lose ~eps/h^2."""
    return 4.0 * np.finfo(float).eps / (h * h)


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    z: float
    h: float
    residual: float
    residual_half: float
    order: float | None  # math.inf when both residuals sit at the rounding floor
    suspect: bool

    @property
    def exact(self) -> bool:
        return self.order is not None and math.isinf(self.order)

    def to_json(self) -> dict:
        d = asdict(self)
        d["order"] = None if self.order is None or math.isinf(self.order) else self.order
        d["exact"] = self.exact
        return d


def convergence_order(res_h: float, res_half: float, h: float) -> float | None:
    if not (math.isfinite(res_h) and math.isfinite(res_half)):
        return None
    floor = rounding_floor(h / 2.0)
    if res_half <= floor:
        return math.inf
    if res_h <= 0.0:
        return None
    return math.log2(res_h / res_half)


def full_report(field: SyntheticField, z_samples, h_pair: tuple[float, float] | None = None,
                workers: int | None = None) -> list[IdentityReport]:
    """Every identity at every z sample and both widths; orders below 1.5 are flagged suspect."""
    h, h2 = h_pair or (DEFAULT_H, DEFAULT_H / 2.0)
    ids = identity_ids()
    jobs = [(i, z) for z in z_samples for i in ids]

    def one(job):
        ident, z = job
        a = check_identity(field, ident, z, h)
        b = check_identity(field, ident, z, h2)
        order = convergence_order(a, b, h)
        suspect = order is None or order < SUSPECT_ORDER
        return IdentityReport(ident, float(z), h, a, b, order, suspect)

    workers = workers or int(os.environ.get("AXISYM_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(one, jobs))
    return [one(j) for j in jobs]


def report_json(reports: list[IdentityReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2)


# -- stock fields ---------------------------------------------------------------------


def gaussian_field(amp: float = 0.5, swirl: float = 1.0) -> SyntheticField:
    """Stream function ``amp r^2 exp(-r^2) sin z``, swirl ``swirl r exp(-r^2)(1 + cos(z)/2)``."""
    e = lambda r: math.exp(-r * r)
    return SyntheticField(
        vr=lambda r, z: -amp * r * e(r) * math.cos(z),
        vtheta=lambda r, z: swirl * r * e(r) * (1.0 + 0.5 * math.cos(z)),
        vz=lambda r, z: amp * (2.0 - 2.0 * r * r) * e(r) * math.sin(z),
        p=lambda r, z: e(r) * (1.0 + 0.3 * math.sin(z)),
        name="gaussian",
    )


def rational_field() -> SyntheticField:
    """Stream function ``r^2/(1+r^2) cos 2z``."""
    return SyntheticField(
        vr=lambda r, z: 2.0 * r / (1.0 + r * r) * math.sin(2.0 * z),
        vtheta=lambda r, z: r * math.cos(z) / (1.0 + r * r),
        vz=lambda r, z: 2.0 / (1.0 + r * r) ** 2 * math.cos(2.0 * z),
        p=lambda r, z: math.cos(r * r) * (1.0 + 0.5 * math.cos(z)),
        name="rational",
    )


def polynomial_field() -> SyntheticField:
    """Stream function ``r^2 (1 + r^2) exp(z/3)``, with a quartic swirl and pressure."""
    ez = lambda z: math.exp(z / 3.0)
    return SyntheticField(
        vr=lambda r, z: -r * (1.0 + r * r) * ez(z) / 3.0,
        vtheta=lambda r, z: r**3 + r * math.sin(z),
        vz=lambda r, z: (2.0 + 4.0 * r * r) * ez(z),
        p=lambda r, z: r**4 * z + r * r * math.cos(z),
        name="polynomial",
    )


def quadratic_field() -> SyntheticField:
    """Linear-in-r velocities and quadratic pressure with quadratic z-dependence: every stencil is exact."""
    s = lambda z: 1.0 + 0.5 * z - 0.25 * z * z
    ds = lambda z: 0.5 - 0.5 * z
    return SyntheticField(
        vr=lambda r, z: -0.5 * r * ds(z),
        vtheta=lambda r, z: r * (0.3 + 0.2 * z * z),
        vz=lambda r, z: s(z),
        p=lambda r, z: 0.5 * r * r * (1.0 - z + 0.1 * z * z),
        name="quadratic",
    )


def parity_violating_field() -> SyntheticField:
    """Radial velocity with an even-in-r part: not a smooth axisymmetric field."""
    base = gaussian_field()
    return SyntheticField(vr=lambda r, z: base.vr(r, z) + 0.2 * math.cos(z),
                          vtheta=base.vtheta, vz=base.vz, p=base.p, divergence_free=False,
                          name="parity_violating")


STOCK_FIELDS: dict[str, Callable[[], SyntheticField]] = {
    "gaussian": gaussian_field,
    "rational": rational_field,
    "polynomial": polynomial_field,
    "quadratic": quadratic_field,
}
