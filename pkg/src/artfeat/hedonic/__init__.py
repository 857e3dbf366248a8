"""Hedonic price regressions: design building, OLS, robust inference."""
from .design import DesignMatrix, build_design, subsample_rows, transform_inputs
from .ols import (
    STAR_LEGEND,
    FitResult,
    fit_model,
    inference,
    ols_beta,
    ols_fit,
    robust_covariance,
    significance_stars,
)
from .spec import ModelSpec, load_spec_file
from .suite import (
    SuiteEntry,
    benchmark_specs,
    cross_effect_specs,
    period_specs,
    render_markdown,
    render_tsv,
    run_specification_suite,
)
from .terms import BASE_CONTINUOUS, BASE_TERMS, DUMMY_BLOCKS, Term, parse_term

__all__ = [
    "BASE_CONTINUOUS",
    "BASE_TERMS",
    "DUMMY_BLOCKS",
    "DesignMatrix",
    "FitResult",
    "ModelSpec",
    "STAR_LEGEND",
    "SuiteEntry",
    "Term",
    "benchmark_specs",
    "build_design",
    "cross_effect_specs",
    "fit_model",
    "inference",
    "load_spec_file",
    "ols_beta",
    "ols_fit",
    "parse_term",
    "period_specs",
    "render_markdown",
    "render_tsv",
    "robust_covariance",
    "run_specification_suite",
    "significance_stars",
    "subsample_rows",
    "transform_inputs",
]
