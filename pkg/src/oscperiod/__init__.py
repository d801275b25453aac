"""Period of the oscillator x'' + (1 + x'^2) x = 0 and analysis of its
small-amplitude series."""

__version__ = "0.1.0"

from .series import (  # noqa: E402
    ExactSeries,
    PiScaledRational,
    evaluate_partial_sum,
    inv_sqrt_series,
    inverted_period_series,
    multiply,
    period_series,
    revert_series,
    taylor_F,
    wallis_integral,
)
from .period import PeriodResult, period_integral_u, period_quad  # noqa: E402
