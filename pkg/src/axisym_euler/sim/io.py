"""CSV / binary writers for snapshots and axis time series."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .field import AxisymField, PressureField
from .run import SimulationRun

AXIS_HEADER = ("t", "z", "lambda", "omega_bar", "q_rr", "p_33")
SNAPSHOT_HEADER = ("r", "z", "omega_theta", "v_theta", "psi", "p")


def fmt(x: float) -> str:
    # repr round-trips exactly and is platform independent for IEEE doubles
    return repr(float(x))


def write_axis_csv(path: Path, run: SimulationRun) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(AXIS_HEADER)
        for n, t in enumerate(run.times):
            for j, z in enumerate(run.grid.z):
                w.writerow([fmt(t), fmt(z), fmt(run.lam[n, j]), fmt(run.omega_bar[n, j]), fmt(run.q_rr[n, j]),
                            fmt(run.p_33[n, j])])


def write_snapshot(base: Path, fld: AxisymField, pressure: PressureField, fmt_kind: str = "csv") -> Path:
    """One file per output time: ``<base>.csv`` or ``<base>.npz``."""
    R, Z = fld.grid.mesh()
    cols = (R, Z, fld.omega_theta, fld.v_theta, fld.psi, pressure.p)
    if fmt_kind == "binary":
        path = base.with_suffix(".npz")
        np.savez(path, t=fld.t, **{k: np.asarray(v) for k, v in zip(SNAPSHOT_HEADER, cols)})
        return path
    path = base.with_suffix(".csv")
    flat = [np.asarray(c).ravel() for c in cols]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SNAPSHOT_HEADER)
        for row in zip(*flat):
            w.writerow([fmt(v) for v in row])
    return path


def read_axis_csv(path: Path) -> dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    return {name: np.asarray(data[name]) for name in data.dtype.names}
