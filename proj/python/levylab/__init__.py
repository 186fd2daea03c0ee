"""Heavy-tailed spin glass numerics."""

from ._core import (
    ConfigError,
    ConvergenceError,
    L_pmf,
    ResourceGuardError,
    a_N,
    beta_alpha,
    bond_overlap_limit,
    centering_integral,
    config_keys,
    derive_seed,
    exact_thermo,
    experiment_names,
    free_energy_limit,
    gamma_ell,
    pair_correlations,
    run,
    run_jsonl,
    sample_disorder,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "L_pmf",
    "ResourceGuardError",
    "a_N",
    "beta_alpha",
    "bond_overlap_limit",
    "centering_integral",
    "config_keys",
    "derive_seed",
    "exact_thermo",
    "experiment_names",
    "free_energy_limit",
    "gamma_ell",
    "pair_correlations",
    "run",
    "run_jsonl",
    "sample_disorder",
]
