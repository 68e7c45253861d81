"""Heavy-tailed random walks, stable processes and fractional Sobolev norms."""

from ._core import (
    ConfigError,
    DomainError,
    DyadicPath,
    ExperimentConfig,
    FitError,
    PerturbedTailLaw,
    ShapeError,
    StableLaw,
    SymmetricParetoLaw,
    abs_moment,
    block_sums,
    build_walk,
    cms_variate,
    diff_norm,
    fit_loglog,
    interp_error_sweep,
    limit_stable_scale,
    lp_part,
    moment_sweep,
    norm,
    phi_p,
    plan_kappa_upsilon,
    project,
    rate_sweep,
    sample,
    sample_stable,
    sample_stable_path,
    sample_walk_path,
    seminorm_p,
    stable_series_threshold,
    stable_upper_quantile,
    tail_amplitude,
    w1_sorted,
)

__version__ = "0.3.0"

__all__ = [name for name in dir() if not name.startswith("_")]
