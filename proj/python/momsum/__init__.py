"""Moment summability of formal power series."""

from ._momsum import (
    AccuracyError,
    ConfigError,
    DegenerateInputError,
    DomainError,
    Error,
    Kernel,
    MomentSequence,
    ShapeError,
    SingularDirectionError,
    SummabilityError,
    borel_sum,
    check_strongly_regular,
    combine_power,
    estimate_omega,
    fit_growth,
    make_gevrey_kernel,
    multisum,
    solve,
    solve_cauchy,
)

__version__ = "0.1.0"
