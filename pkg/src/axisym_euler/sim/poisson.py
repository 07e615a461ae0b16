"""Separable elliptic solvers: FFT in periodic z, tridiagonal solve in r per mode."""

from __future__ import annotations

import numpy as np

from ..errors import SolverDivergence
from .grid import Grid2D

TOL = 1e-10


def thomas(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Tridiagonal solve along axis 0, vectorised over trailing axes.

    ``sub[0]`` and ``sup[-1]`` are ignored. No pivoting; the systems assembled
    here are diagonally dominant (or pinned) so none is needed.
    """
    n = rhs.shape[0]
    cp = np.empty_like(rhs)
    dp = np.empty_like(rhs)
    cp[0] = sup[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        m = diag[i] - sub[i] * cp[i - 1]
        cp[i] = sup[i] / m
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / m
    x = np.empty_like(rhs)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def _d2z(f: np.ndarray, dz: float) -> np.ndarray:
    return (np.roll(f, -1, axis=1) - 2.0 * f + np.roll(f, 1, axis=1)) / dz**2


def _op_norm(grid: Grid2D) -> float:
    return 4.0 / grid.dr**2 + 4.0 / grid.dz**2


def scaled_residual(res: np.ndarray, sol: np.ndarray, rhs: np.ndarray, op_norm: float) -> float:
    """Normwise backward error ``|A x - b| / (|A| |x| + |b|)`` in the max norm."""
    scale = op_norm * float(np.max(np.abs(sol))) + float(np.max(np.abs(rhs)))
    err = float(np.max(np.abs(res)))
    return err / scale if scale > 0.0 else err


# -- stream function ------------------------------------------------------------


def apply_stream_operator(grid: Grid2D, psi: np.ndarray) -> np.ndarray:
    """Discrete ``r d/dr (1/r dpsi/dr) + d2psi/dz2`` on rows 1..nr-1 (zeros elsewhere)."""
    r, dr = grid.r, grid.dr
    rh = 0.5 * (r[1:] + r[:-1])  # r_{i+1/2}, i = 0..nr-1
    out = np.zeros_like(psi)
    ri = r[1:-1, None]
    out[1:-1] = ri * ((psi[2:] - psi[1:-1]) / rh[1:, None] - (psi[1:-1] - psi[:-2]) / rh[:-1, None]) / dr**2
    out[1:-1] += _d2z(psi, grid.dz)[1:-1]
    return out


def solve_stream(grid: Grid2D, omega_theta: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Stokes stream function from azimuthal vorticity.

    Solves ``d/dr(1/r dpsi/dr) + 1/r d2psi/dz2 = -omega_theta`` with ``psi = 0``
    on the axis and on the wall, periodic in z. Only rows 1..nr-1 of
    ``omega_theta`` are used.
    """
    r, dr = grid.r, grid.dr
    rh = 0.5 * (r[1:] + r[:-1])
    ri = r[1:-1]
    rhs = -(ri[:, None] * omega_theta[1:-1])
    if not np.any(rhs):
        return np.zeros(grid.shape)
    kz2 = grid.kz2()
    lo = (ri / rh[:-1] / dr**2)[:, None]
    up = (ri / rh[1:] / dr**2)[:, None]
    diag = -(lo + up) - kz2[None, :]
    sub = np.broadcast_to(lo, diag.shape)
    sup = np.broadcast_to(up, diag.shape)

    def inner(b):
        return np.fft.irfft(thomas(sub, diag, sup, np.fft.rfft(b, axis=1)), n=grid.nz, axis=1)

    psi = np.zeros(grid.shape)
    psi[1:-1] = inner(rhs)
    psi[1:-1] += inner(rhs - apply_stream_operator(grid, psi)[1:-1])
    res = scaled_residual(apply_stream_operator(grid, psi)[1:-1] - rhs, psi, rhs, _op_norm(grid))
    if not res <= tol:
        raise SolverDivergence(f"stream solve residual {res:.3e} > {tol:.1e}")
    return psi


# -- pressure -------------------------------------------------------------------


def apply_pressure_operator(grid: Grid2D, p: np.ndarray, wall_flux: np.ndarray | None = None) -> np.ndarray:
    """Finite-volume cylindrical Laplacian with a Neumann wall.

    ``wall_flux`` is ``dp/dr`` at ``r_max`` per z node (zero if omitted); it
    enters the wall half-cell balance.
    """
    r, dr = grid.r, grid.dr
    rh = 0.5 * (r[1:] + r[:-1])
    vol = grid.radial_weights()
    flux = rh[:, None] * (p[1:] - p[:-1]) / dr  # F_{i+1/2}
    g = np.zeros(grid.nz) if wall_flux is None else np.asarray(wall_flux, dtype=float)
    div = np.empty_like(p)
    div[0] = flux[0]
    div[1:-1] = flux[1:] - flux[:-1]
    div[-1] = r[-1] * g - flux[-1]
    return div / vol[:, None] + _d2z(p, grid.dz)


def compatible_rhs(grid: Grid2D, rhs: np.ndarray, wall_flux: np.ndarray) -> np.ndarray:
    """Shift ``rhs`` by a constant so the discrete Neumann problem is solvable."""
    vol = grid.radial_weights()
    excess = (np.sum(vol[:, None] * rhs) - grid.r[-1] * np.sum(wall_flux)) / (np.sum(vol) * grid.nz)
    return rhs - excess


def solve_pressure_poisson(grid: Grid2D, rhs: np.ndarray, wall_flux: np.ndarray | None = None,
                           tol: float = TOL) -> np.ndarray:
    """Solve ``Laplacian p = rhs`` with ``dp/dr = wall_flux`` at the wall, regular on the axis.

    The constant mode is made compatible (see :func:`compatible_rhs`) and the
    gauge is fixed by a zero volume-weighted mean.
    """
    g = np.zeros(grid.nz) if wall_flux is None else np.asarray(wall_flux, dtype=float)
    f = compatible_rhs(grid, rhs, g)
    if not np.any(f) and not np.any(g):
        return np.zeros(grid.shape)
    r, dr = grid.r, grid.dr
    rh = 0.5 * (r[1:] + r[:-1])
    vol = grid.radial_weights()
    n = grid.nr + 1
    kz2 = grid.kz2()
    m = kz2.size

    lo = np.zeros(n)
    up = np.zeros(n)
    up[0] = rh[0] / dr / vol[0]
    lo[1:] = rh / dr / vol[1:]
    up[1:-1] = rh[1:] / dr / vol[1:-1]
    dg = -(lo + up)

    diag = (dg[:, None] - kz2[None, :]).astype(complex)
    sub = np.repeat(lo[:, None], m, axis=1).astype(complex)
    sup = np.repeat(up[:, None], m, axis=1).astype(complex)
    # pin the axis value of the constant mode; the pinned row follows from the others
    diag[0, 0], sup[0, 0] = 1.0, 0.0

    def inner(b):
        b_hat = np.fft.rfft(b, axis=1)
        b_hat[0, 0] = 0.0
        return np.fft.irfft(thomas(sub, diag, sup, b_hat), n=grid.nz, axis=1)

    b = f.copy()
    b[-1] -= r[-1] * g / vol[-1]
    p = inner(b)
    p += inner(f - apply_pressure_operator(grid, p, g))
    p -= np.sum(vol[:, None] * p) / (np.sum(vol) * grid.nz)

    res = scaled_residual(apply_pressure_operator(grid, p, g) - f, p, f, _op_norm(grid))
    if not res <= tol:
        raise SolverDivergence(f"pressure solve residual {res:.3e} > {tol:.1e}")
    return p
