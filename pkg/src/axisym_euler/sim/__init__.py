"""Axisymmetric swirling Euler solver on an (r, z) grid."""

from .field import (AxisDiagnostics, AxisymField, PressureField, check_trace_identity, extract_axis, init_field,
                    recover_pressure, stable_dt, step)
from .grid import Grid2D
from .poisson import solve_pressure_poisson, solve_stream
from .run import (AxisTrack, ConsistencyReport, SimulationRun, advect_axis_particle, ode_consistency_report,
                  simulate, track_axis_particle)

__all__ = [
    "AxisDiagnostics", "AxisymField", "PressureField", "check_trace_identity", "extract_axis", "init_field",
    "recover_pressure", "stable_dt", "step", "Grid2D", "solve_pressure_poisson", "solve_stream", "AxisTrack",
    "ConsistencyReport", "SimulationRun", "advect_axis_particle", "ode_consistency_report", "simulate",
    "track_axis_particle",
]
