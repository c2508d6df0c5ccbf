"""Nabla discrete fractional calculus and the nabla Laplace transform."""

from .mittag_leffler import DiscreteMLParams, dml_eval, dml_signal, dml_window
from .operators import OperatorKind, apply, caputo_diff, frac_sum, gl_diff, nabla_diff, nabla_sum, rl_diff
from .signals import GridSignal, geometric, read_signal, rising, unit_impulse, unit_step, write_signal
from .special import log_gamma, log_rising, rising_factorial, rising_power
from .systems import (
    FracSystem,
    OmegaQuadrature,
    StabilityClass,
    realization_reference,
    realize,
    stability_classify,
    stability_sweep,
    step_system,
    system_transform,
)
from .transform import (
    Contour,
    NablaTransform,
    final_value,
    forward_transform,
    initial_value,
    inverse_transform,
    ml_transform,
    value_at,
)
from .verify import PROPERTY_IDS, PropertyReport, verify_all, verify_property

__version__ = "0.1.0"
