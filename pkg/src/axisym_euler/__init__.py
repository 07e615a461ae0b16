"""On-axis reduced dynamics of axisymmetric Euler flow with swirl.

Submodules: :mod:`.ode` (closed forms and the forced axis system),
:mod:`.sim` (axisymmetric PDE solver), :mod:`.lemma` (on-axis identity
checker) and :mod:`.cli` (scenario runner).
"""

from .errors import (AxisymError, BlowUpSingularity, CFLViolation, DomainError, NonFiniteField, NonFiniteState,
                     ParityViolation, ParseError, SolverDivergence, UnknownIdentity, ValidationError)
from .ode import (AxisState, IntegratorConfig, PressureForcing, Status, ThetaValue, TrajectoryRecord, blowup_time,
                  closed_form_state, closed_form_theta, integrate, invariant_Q, lower_bound_lambda)

__version__ = "0.1.0"

__all__ = [
    "AxisymError", "BlowUpSingularity", "CFLViolation", "DomainError", "NonFiniteField", "NonFiniteState",
    "ParityViolation", "ParseError", "SolverDivergence", "UnknownIdentity", "ValidationError", "AxisState",
    "IntegratorConfig", "PressureForcing", "Status", "ThetaValue", "TrajectoryRecord", "blowup_time",
    "closed_form_state", "closed_form_theta", "integrate", "invariant_Q", "lower_bound_lambda",
]
