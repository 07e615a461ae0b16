"""Scenario runner: ``axisym-euler {closed-form,integrate,pde-sim,check-lemma} --config FILE``.

Config files are YAML mappings. Keys and defaults per mode:

  all modes      out (DIR, "out"), format (csv|binary, "csv")
  closed-form    lambda0, omega0 (required); t (required, end time); samples (101)
  integrate      lambda0, omega0, horizon (required); x3_0 (0.0);
                 forcing ({type: zero}); tolerances ({tol: 1e-10, min_step: 1e-14,
                 max_step: 0.1, initial_step: 1e-3, blowup_threshold: 1e9})
  pde-sim        grid ({nr, nz, r_max: 5.0, z_period: 2 pi}, required); horizon (required);
                 initial ({psi: {type: gaussian}, swirl: {type: gaussian}}); dt (CFL based);
                 cfl (0.5); record_every (1); particles ([1.0, 2.5]); snapshots (true)
  check-lemma    fields ([gaussian, rational, polynomial]); z_samples ([0.3, 1.1, 2.0]);
                 h (1e-3); min_order (1.7); rotation_tol (1e-12)

Forcing entries: {type: zero}, {type: constant, q}, {type: sine, mean, amplitude,
frequency: 1, phase: 0} for q = mean + amplitude sin(frequency t + phase), and
{type: table, t: [...], q: [...], interp: pchip|linear}.

Exit codes: 0 success, 2 blow-up detected, 1 error or failed check.
The environment variable AXISYM_THREADS sets the worker count of threaded sections.
"""

from __future__ import annotations

import argparse
import csv
import enum
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from . import lemma
from .errors import AxisymError, BlowUpSingularity, DomainError, ParseError, ValidationError
from .ode import (AxisState, IntegratorConfig, PressureForcing, Status, blowup_time, closed_form_state,
                  hypothesis_violation_time, integrate, invariant_Q)
from .sim import io as simio
from .sim import profiles
from .sim.field import init_field
from .sim.grid import Grid2D
from .sim.run import ode_consistency_report, simulate, track_axis_particle

log = logging.getLogger("axisym_euler")

EXIT_OK, EXIT_ERROR, EXIT_BLOWUP = 0, 1, 2
THREADS_ENV = "AXISYM_THREADS"


class Mode(enum.Enum):
    CLOSED_FORM = "closed-form"
    INTEGRATE = "integrate"
    PDE_SIM = "pde-sim"
    CHECK_LEMMA = "check-lemma"

    @classmethod
    def parse(cls, value: Any) -> Mode:
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"closedform": "closed-form", "pdesim": "pde-sim", "checklemma": "check-lemma"}
        key = aliases.get(key, key)
        for m in cls:
            if m.value == key:
                return m
        raise ValidationError("mode", f"unknown mode {value!r}")


_COMMON_KEYS = {"mode", "out", "format"}
_MODE_KEYS = {
    Mode.CLOSED_FORM: {"lambda0", "omega0", "t", "samples"},
    Mode.INTEGRATE: {"lambda0", "omega0", "horizon", "x3_0", "forcing", "tolerances"},
    Mode.PDE_SIM: {"grid", "horizon", "initial", "dt", "cfl", "record_every", "particles", "snapshots"},
    Mode.CHECK_LEMMA: {"fields", "z_samples", "h", "min_order", "rotation_tol"},
}
_TOLERANCE_KEYS = {"tol", "min_step", "max_step", "initial_step", "blowup_threshold"}
_GRID_KEYS = {"nr", "nz", "r_max", "z_period"}
_FORCING_KEYS = {
    "zero": set(), "constant": {"q"}, "sine": {"mean", "amplitude", "frequency", "phase"},
    "table": {"t", "q", "interp"},
}
DEFAULT_FIELDS = ("gaussian", "rational", "polynomial")
DEFAULT_Z = (0.3, 1.1, 2.0)
DEFAULT_PARTICLES = (1.0, 2.5)


@dataclass
class ScenarioConfig:
    mode: Mode
    lambda0: float = 1.0
    omega0: float = 0.0
    t: float | None = None
    samples: int = 101
    horizon: float | None = None
    x3_0: float = 0.0
    forcing: dict = field(default_factory=lambda: {"type": "zero"})
    tolerances: IntegratorConfig = field(default_factory=IntegratorConfig)
    grid: Grid2D | None = None
    initial: dict = field(default_factory=lambda: {"psi": {"type": "gaussian"}, "swirl": {"type": "gaussian"}})
    dt: float | None = None
    cfl: float = 0.5
    record_every: int = 1
    particles: tuple[float, ...] = DEFAULT_PARTICLES
    snapshots: bool = True
    fields: tuple[str, ...] = DEFAULT_FIELDS
    z_samples: tuple[float, ...] = DEFAULT_Z
    h: float = lemma.DEFAULT_H
    min_order: float = 1.7
    rotation_tol: float = 1e-12
    out: Path = Path("out")
    format: str = "csv"


# -- parsing -------------------------------------------------------------------


def _num(doc: dict, key: str, default: float | None = None, *, positive: bool = False,
         name: str | None = None) -> float | None:
    name = name or key
    if key not in doc:
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(name, f"expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ValidationError(name, "must be finite")
    if positive and not v > 0.0:
        raise ValidationError(name, "must be positive")
    return v


def _int(doc: dict, key: str, default: int, name: str | None = None, minimum: int = 1) -> int:
    name = name or key
    if key not in doc:
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(name, f"expected an integer, got {v!r}")
    if v < minimum:
        raise ValidationError(name, f"must be >= {minimum}")
    return v


def _require(doc: dict, *keys: str) -> None:
    for k in keys:
        if k not in doc or doc[k] is None:
            raise ValidationError(k, "required for this mode")


def _mapping(v: Any, name: str) -> dict:
    if not isinstance(v, dict):
        raise ValidationError(name, "expected a mapping")
    return v


def _reject_unknown(doc: dict, allowed: set[str], prefix: str = "") -> None:
    for k in doc:
        if k not in allowed:
            raise ValidationError(f"{prefix}{k}", "unknown key")


def _num_list(v: Any, name: str) -> tuple[float, ...]:
    if not isinstance(v, (list, tuple)) or not v:
        raise ValidationError(name, "expected a non-empty list of numbers")
    return tuple(_num({"x": x}, "x", name=name) for x in v)


def _parse_forcing(entry: Any) -> dict:
    entry = dict(_mapping(entry, "forcing"))
    kind = entry.get("type", "zero")
    if kind not in _FORCING_KEYS:
        raise ValidationError("forcing.type", f"unknown forcing {kind!r}; choose from {sorted(_FORCING_KEYS)}")
    _reject_unknown(entry, _FORCING_KEYS[kind] | {"type"}, "forcing.")
    if kind == "constant":
        _require(entry, "q")
        _num(entry, "q", name="forcing.q")
    elif kind == "sine":
        for k in ("mean", "amplitude", "frequency", "phase"):
            _num(entry, k, name=f"forcing.{k}")
    elif kind == "table":
        _require(entry, "t", "q")
        t, q = _num_list(entry["t"], "forcing.t"), _num_list(entry["q"], "forcing.q")
        try:
            PressureForcing.tabulated(t, q, entry.get("interp", "pchip"))
        except DomainError as exc:
            raise ValidationError("forcing", str(exc)) from exc
    entry["type"] = kind
    return entry


def build_forcing(entry: dict) -> PressureForcing:
    kind = entry["type"]
    if kind == "zero":
        return PressureForcing.zero()
    if kind == "constant":
        return PressureForcing.constant(entry["q"])
    if kind == "sine":
        mean, amp = float(entry.get("mean", 0.0)), float(entry.get("amplitude", 0.0))
        freq, phase = float(entry.get("frequency", 1.0)), float(entry.get("phase", 0.0))
        return PressureForcing.from_callable(lambda t: mean + amp * math.sin(freq * t + phase))
    return PressureForcing.tabulated(entry["t"], entry["q"], entry.get("interp", "pchip"))


def _parse_grid(entry: Any) -> Grid2D:
    entry = _mapping(entry, "grid")
    _reject_unknown(entry, _GRID_KEYS, "grid.")
    for k in ("nr", "nz"):
        if k not in entry:
            raise ValidationError(f"grid.{k}", "required")
    try:
        return Grid2D(_int(entry, "nr", 0, "grid.nr"), _int(entry, "nz", 0, "grid.nz"),
                      _num(entry, "r_max", 5.0, positive=True, name="grid.r_max"),
                      _num(entry, "z_period", 2.0 * math.pi, positive=True, name="grid.z_period"))
    except ValidationError as exc:
        if exc.field.startswith("grid"):
            raise
        raise ValidationError(f"grid.{exc.field}", str(exc)) from exc


def load_document(text: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        raise ParseError(f"{where}: {exc.problem or exc}") from exc
    except yaml.YAMLError as exc:
        raise ParseError(str(exc)) from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ParseError("line 1: top level must be a mapping")
    return doc


def parse_config(text: str, mode: Mode | str | None = None) -> ScenarioConfig:
    """Parse and validate a YAML scenario. ``mode`` (from the subcommand) must agree with the file's."""
    doc = load_document(text)
    file_mode = Mode.parse(doc["mode"]) if doc.get("mode") is not None else None
    cli_mode = Mode.parse(mode.value if isinstance(mode, Mode) else mode) if mode is not None else None
    if file_mode and cli_mode and file_mode is not cli_mode:
        raise ValidationError("mode", f"config says {file_mode.value!r} but command is {cli_mode.value!r}")
    m = cli_mode or file_mode
    if m is None:
        raise ValidationError("mode", "required")
    _reject_unknown(doc, _COMMON_KEYS | _MODE_KEYS[m])
    cfg = ScenarioConfig(mode=m)
    if "out" in doc:
        cfg.out = Path(str(doc["out"]))
    if "format" in doc:
        if doc["format"] not in ("csv", "binary"):
            raise ValidationError("format", "expected csv or binary")
        cfg.format = doc["format"]

    if m in (Mode.CLOSED_FORM, Mode.INTEGRATE):
        _require(doc, "lambda0", "omega0")
        cfg.lambda0 = _num(doc, "lambda0")
        cfg.omega0 = _num(doc, "omega0")
    if m is Mode.CLOSED_FORM:
        _require(doc, "t")
        cfg.t = _num(doc, "t")
        if cfg.t < 0.0:
            raise ValidationError("t", "must be >= 0")
        cfg.samples = _int(doc, "samples", cfg.samples, minimum=2)
    if m in (Mode.INTEGRATE, Mode.PDE_SIM):
        _require(doc, "horizon")
        cfg.horizon = _num(doc, "horizon", positive=True)
    if m is Mode.INTEGRATE:
        cfg.x3_0 = _num(doc, "x3_0", 0.0)
        if "forcing" in doc:
            cfg.forcing = _parse_forcing(doc["forcing"])
        if "tolerances" in doc:
            tol = _mapping(doc["tolerances"], "tolerances")
            _reject_unknown(tol, _TOLERANCE_KEYS, "tolerances.")
            vals = {k: _num(tol, k, positive=True, name=f"tolerances.{k}") for k in tol}
            cfg.tolerances = IntegratorConfig(**vals)
    if m is Mode.PDE_SIM:
        _require(doc, "grid")
        cfg.grid = _parse_grid(doc["grid"])
        if "initial" in doc:
            init = _mapping(doc["initial"], "initial")
            _reject_unknown(init, {"psi", "swirl"}, "initial.")
            cfg.initial = {k: (_mapping(v, f"initial.{k}") if v is not None else None) for k, v in init.items()}
            # fail early on bad profile names or parameters
            profiles.build("psi", cfg.initial.get("psi"), profiles.STREAM_PROFILES)
            profiles.build("swirl", cfg.initial.get("swirl"), profiles.SWIRL_PROFILES)
        cfg.dt = _num(doc, "dt", None, positive=True)
        cfg.cfl = _num(doc, "cfl", cfg.cfl, positive=True)
        cfg.record_every = _int(doc, "record_every", cfg.record_every)
        if "particles" in doc:
            cfg.particles = _num_list(doc["particles"], "particles")
        if "snapshots" in doc:
            if not isinstance(doc["snapshots"], bool):
                raise ValidationError("snapshots", "expected true or false")
            cfg.snapshots = doc["snapshots"]
    if m is Mode.CHECK_LEMMA:
        if "fields" in doc:
            names = doc["fields"]
            if not isinstance(names, list) or not names:
                raise ValidationError("fields", "expected a non-empty list")
            for n in names:
                if n not in lemma.STOCK_FIELDS:
                    raise ValidationError("fields", f"unknown field {n!r}; choose from {sorted(lemma.STOCK_FIELDS)}")
            cfg.fields = tuple(names)
        if "z_samples" in doc:
            cfg.z_samples = _num_list(doc["z_samples"], "z_samples")
        cfg.h = _num(doc, "h", cfg.h, positive=True)
        cfg.min_order = _num(doc, "min_order", cfg.min_order)
        cfg.rotation_tol = _num(doc, "rotation_tol", cfg.rotation_tol, positive=True)
    return cfg


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(THREADS_ENV, f"expected a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValidationError(THREADS_ENV, "must be >= 1")
    return n


# -- summary ---------------------------------------------------------------------


@dataclass
class RunSummary:
    mode: str
    terminal_status: str
    t_blow_predicted: float | None = None
    t_blow_observed: float | None = None
    t_blow_relative_difference: float | None = None
    t_hypothesis_violated: float | None = None
    max_residuals: dict[str, float] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.t_blow_predicted is not None and self.t_blow_observed is not None:
            self.t_blow_relative_difference = abs(self.t_blow_predicted - self.t_blow_observed) / self.t_blow_predicted

    @property
    def exit_code(self) -> int:
        if self.terminal_status == Status.BLOWUP_DETECTED.value:
            return EXIT_BLOWUP
        if self.terminal_status in ("Passed", Status.COMPLETED_HORIZON.value):
            return EXIT_OK
        return EXIT_ERROR

    def to_dict(self) -> dict:
        return _jsonable({
            "mode": self.mode, "terminal_status": self.terminal_status,
            "t_blow_predicted": self.t_blow_predicted, "t_blow_observed": self.t_blow_observed,
            "t_blow_relative_difference": self.t_blow_relative_difference,
            "t_hypothesis_violated": self.t_hypothesis_violated,
            "max_residuals": self.max_residuals, "details": self.details,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _jsonable(x: Any) -> Any:
    # non-finite floats have no JSON spelling; emit null
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _finite_or_none(x: float | None) -> float | None:
    return x if x is not None and math.isfinite(x) else None


# -- modes ---------------------------------------------------------------------------


def _write_rows(path: Path, header: tuple[str, ...], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else simio.fmt(v) for v in row])


def _run_closed_form(cfg: ScenarioConfig) -> RunSummary:
    t_pred = blowup_time(cfg.lambda0, cfg.omega0)
    rows, status = [], Status.COMPLETED_HORIZON.value
    for t in np.linspace(0.0, cfg.t, cfg.samples):
        if t_pred is not None and t >= t_pred:
            status = Status.BLOWUP_DETECTED.value
            break
        try:
            s = closed_form_state(cfg.lambda0, cfg.omega0, float(t))
        except BlowUpSingularity:
            status = Status.BLOWUP_DETECTED.value
            break
        rows.append((float(t), s.lam, s.omega_bar))
    _write_rows(cfg.out / "closed_form.csv", ("t", "lambda", "omega_bar"), rows)
    return RunSummary(cfg.mode.value, status, t_blow_predicted=t_pred,
                      details={"lambda0": cfg.lambda0, "omega0": cfg.omega0, "t_end": cfg.t,
                               "samples_written": len(rows)})


def _run_integrate(cfg: ScenarioConfig) -> RunSummary:
    state0 = AxisState(cfg.lambda0, cfg.omega0)
    rec = integrate(state0, build_forcing(cfg.forcing), cfg.horizon, cfg.tolerances, x3_0=cfg.x3_0)
    _write_rows(cfg.out / "trajectory.csv", ("t", "x3", "lambda", "omega_bar", "q"),
                zip(rec.t, rec.x3, rec.lam, rec.omega_bar, rec.q))
    t_pred = 2.0 / cfg.lambda0 if cfg.omega0 == 0.0 and cfg.lambda0 > 0.0 else None
    residuals: dict[str, float] = {}
    zero_forcing = cfg.forcing["type"] == "zero" or (cfg.forcing["type"] == "constant" and cfg.forcing["q"] == 0.0)
    if zero_forcing:
        err = 0.0
        # compare away from the singular time, where the oracle itself is ill-conditioned
        t_cut = 0.9 * t_pred if t_pred is not None else math.inf
        for t, lam, om in zip(rec.t, rec.lam, rec.omega_bar):
            if t > t_cut:
                break
            exact = closed_form_state(cfg.lambda0, cfg.omega0, float(t))
            err = max(err, abs(lam - exact.lam) / (1.0 + abs(exact.lam)),
                      abs(om - exact.omega_bar) / (1.0 + abs(exact.omega_bar)))
        residuals["closed_form_relative"] = err
        if cfg.omega0 != 0.0:
            q0 = invariant_Q(state0)
            residuals["invariant_drift"] = float(np.max(np.abs(
                (rec.lam**2 + rec.omega_bar**2) / rec.omega_bar - q0)) / abs(q0))
    t_hyp = hypothesis_violation_time(rec.t, rec.q)
    return RunSummary(
        cfg.mode.value, rec.status.value, t_blow_predicted=t_pred, t_blow_observed=rec.t_blow,
        t_hypothesis_violated=_finite_or_none(t_hyp), max_residuals=residuals,
        details={"prediction": "exact" if zero_forcing else "comparison_upper_bound" if t_pred else None,
                 "t_terminal": rec.t_terminal, "accepted_steps": len(rec) - 1, "rejected_steps": rec.n_rejected,
                 "final_lambda": float(rec.lam[-1]), "final_omega_bar": float(rec.omega_bar[-1])})


def _run_pde(cfg: ScenarioConfig) -> RunSummary:
    grid = cfg.grid
    psi0 = profiles.build("psi", cfg.initial.get("psi"), profiles.STREAM_PROFILES)
    swirl0 = profiles.build("swirl", cfg.initial.get("swirl"), profiles.SWIRL_PROFILES)
    fld0 = init_field(grid, psi0=psi0, v_theta0=swirl0)
    snap_dir = cfg.out / "snapshots"
    written: list[str] = []
    on_output = None
    if cfg.snapshots:
        snap_dir.mkdir(parents=True, exist_ok=True)

        def on_output(f, pres):
            path = simio.write_snapshot(snap_dir / f"snapshot_{len(written):05d}", f, pres, cfg.format)
            written.append(path.name)

    run = simulate(fld0, cfg.horizon, dt=cfg.dt, cfl=cfg.cfl, record_every=cfg.record_every, on_output=on_output)
    simio.write_axis_csv(cfg.out / "axis_diagnostics.csv", run)

    residuals = {"trace_final": float(np.max(run.trace_residual()[-1]))}
    hyp: dict[str, float | None] = {}
    table = []
    for a in cfg.particles:
        tr = track_axis_particle(run, a)
        hyp[repr(float(a))] = _finite_or_none(hypothesis_violation_time(tr.t, tr.q_rr))
        if len(run.times) >= 3:
            rep = ode_consistency_report(run, a)
            for k, v in rep.max.items():
                residuals[k] = max(residuals.get(k, 0.0), v)
            for n, t in enumerate(rep.t):
                table.append((float(a), float(t), float(rep.x3[n]), float(rep.lam[n]), float(rep.omega_bar[n]),
                              float(rep.q_rr[n]), float(rep.p_33[n]),
                              *(float(rep.residuals[k][n]) for k in rep.residuals)))
    if table:
        _write_rows(cfg.out / "consistency.csv",
                    ("a", "t", "x3", "lambda", "omega_bar", "q_rr", "p_33", "transverse_strain", "axial_strain",
                     "axis_vorticity", "trace"), table)
    if len(run.times) < 3:
        log.warning("fewer than three outputs: no consistency report")
    hits = [t for t in hyp.values() if t is not None]
    return RunSummary(
        cfg.mode.value, Status.COMPLETED_HORIZON.value, t_hypothesis_violated=min(hits) if hits else None,
        max_residuals=residuals,
        details={"nr": grid.nr, "nz": grid.nz, "dt": run.dt, "steps": int(round(cfg.horizon / run.dt)),
                 "energy_drift": run.energy_drift(), "max_divergence": float(np.max(run.max_divergence)),
                 "max_parity": float(np.max(run.max_parity)), "t_hypothesis_violated_by_particle": hyp,
                 "snapshots": written})


def _run_lemma(cfg: ScenarioConfig) -> RunSummary:
    workers = thread_count()
    rows, report, residuals = [], [], {}
    min_order, rot_max = math.inf, 0.0
    failures = []
    for name in cfg.fields:
        fld = lemma.STOCK_FIELDS[name]()
        reps = lemma.full_report(fld, cfg.z_samples, (cfg.h, cfg.h / 2.0), workers=workers)
        for r in reps:
            residuals[r.identity] = max(residuals.get(r.identity, 0.0), r.residual)
            order = r.order if r.order is not None else -math.inf
            min_order = min(min_order, order)
            if order < cfg.min_order:
                failures.append(f"{name}:{r.identity}@z={r.z}")
            rows.append((name, r.identity, r.z, r.h, r.residual, r.residual_half,
                         "exact" if r.exact else repr(order), str(r.suspect).lower()))
            report.append({"field": name, **r.to_json()})
        for z in cfg.z_samples:
            for k, v in lemma.rotation_residuals(fld, z, cfg.h).items():
                rot_max = max(rot_max, v)
                residuals[k] = max(residuals.get(k, 0.0), v)
                if v > cfg.rotation_tol:
                    failures.append(f"{name}:{k}@z={z}")
    _write_rows(cfg.out / "lemma_orders.csv",
                ("field", "identity", "z", "h", "residual", "residual_half", "order", "suspect"), rows)
    (cfg.out / "lemma_report.json").write_text(json.dumps(_jsonable(report), indent=2) + "\n")
    status = "Passed" if not failures else "Failed"
    return RunSummary(cfg.mode.value, status, max_residuals=residuals,
                      details={"min_order": min_order, "rotation_max": rot_max, "failures": failures,
                               "fields": list(cfg.fields), "z_samples": list(cfg.z_samples), "h": cfg.h})


_RUNNERS = {Mode.CLOSED_FORM: _run_closed_form, Mode.INTEGRATE: _run_integrate, Mode.PDE_SIM: _run_pde,
            Mode.CHECK_LEMMA: _run_lemma}


def run(cfg: ScenarioConfig) -> RunSummary:
    """Execute one scenario, writing its CSV files and ``summary.json`` under ``cfg.out``."""
    cfg.out.mkdir(parents=True, exist_ok=True)
    summary = _RUNNERS[cfg.mode](cfg)
    (cfg.out / "summary.json").write_text(summary.to_json())
    return summary


def format_table(summary: RunSummary) -> str:
    lines = [f"mode: {summary.mode}", f"status: {summary.terminal_status}"]
    for k in ("t_blow_predicted", "t_blow_observed", "t_blow_relative_difference", "t_hypothesis_violated"):
        v = getattr(summary, k)
        if v is not None:
            lines.append(f"{k}: {v:.10g}")
    if summary.max_residuals:
        width = max(len(k) for k in summary.max_residuals)
        lines.append("max residuals:")
        lines += [f"  {k:<{width}}  {v:.3e}" for k, v in sorted(summary.max_residuals.items())]
    return "\n".join(lines)


# -- entry point -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="axisym-euler", description="On-axis Euler reduction toolkit.",
                                epilog=__doc__.split("\n", 2)[2], formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    for m in Mode:
        sp = sub.add_parser(m.value, help=f"run the {m.value} scenario")
        sp.add_argument("--config", type=Path, help="YAML scenario file")
        sp.add_argument("--out", type=Path, help="output directory (overrides the config)")
        sp.add_argument("--format", choices=("csv", "binary"), help="snapshot format (overrides the config)")
        sp.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = args.config.read_text() if args.config else ""
        cfg = parse_config(text, args.command)
        if args.out is not None:
            cfg.out = args.out
        if args.format is not None:
            cfg.format = args.format
        summary = run(cfg)
    except (AxisymError, OSError) as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(format_table(summary))
    return summary.exit_code


if __name__ == "__main__":
    sys.exit(main())
