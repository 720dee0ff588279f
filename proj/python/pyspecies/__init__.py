"""Species-sampling inference under the Pitman-Yor prior."""

from ._core import (
    DiscretePosterior,
    DomainError,
    Error,
    NumericalError,
    ParseError,
    PathologyError,
    PypParams,
    SampleSummary,
    SizeGuardError,
    coverage,
    eppf_log,
    epsf_log,
    fit,
    k_n_log_pmf,
    prevalence,
    sample_partition,
    unseen,
)

__all__ = [
    "DiscretePosterior",
    "DomainError",
    "Error",
    "NumericalError",
    "ParseError",
    "PathologyError",
    "PypParams",
    "SampleSummary",
    "SizeGuardError",
    "coverage",
    "eppf_log",
    "epsf_log",
    "fit",
    "k_n_log_pmf",
    "prevalence",
    "sample_partition",
    "unseen",
]
