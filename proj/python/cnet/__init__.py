"""Three-sector credit-network economy simulator."""

from ._core import (
    AuditError,
    FitComparison,
    LaplaceFit,
    Moments,
    NormalFit,
    Parameters,
    PeriodRecord,
    RunResult,
    Simulation,
    TestReport,
    __version__,
    bera_jarque,
    compare_fits,
    cross_correlation,
    emit_all,
    fit_laplace,
    fit_normal,
    format_config,
    moments,
    parse_config,
    parse_config_text,
    run,
    run_acceptance,
    sweep,
    validate,
)

__all__ = [
    "AuditError",
    "FitComparison",
    "LaplaceFit",
    "Moments",
    "NormalFit",
    "Parameters",
    "PeriodRecord",
    "RunResult",
    "Simulation",
    "TestReport",
    "__version__",
    "bera_jarque",
    "compare_fits",
    "cross_correlation",
    "emit_all",
    "fit_laplace",
    "fit_normal",
    "format_config",
    "moments",
    "parse_config",
    "parse_config_text",
    "run",
    "run_acceptance",
    "sweep",
    "validate",
]
