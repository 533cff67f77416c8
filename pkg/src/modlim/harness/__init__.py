from .extrapolation import monotone_tail, observed_rate, richardson_extrapolate
from .lsc import lsc_approximant, lsc_approximation, reciprocal_integral_pl
from .reports import (
    config_digest,
    load_experiment_config,
    write_eta_outputs,
    write_lsc_csv,
    write_manifest,
    write_sweep_outputs,
    write_wide_csv,
)
from .sweeps import (
    epsilon_sweep,
    eta_sweep,
    riemann_upper_bound,
    sandwich_check,
    wide_family_bound,
    wide_family_check,
)

__all__ = [
    "monotone_tail",
    "observed_rate",
    "richardson_extrapolate",
    "lsc_approximant",
    "lsc_approximation",
    "reciprocal_integral_pl",
    "config_digest",
    "load_experiment_config",
    "write_eta_outputs",
    "write_lsc_csv",
    "write_manifest",
    "write_sweep_outputs",
    "write_wide_csv",
    "epsilon_sweep",
    "eta_sweep",
    "riemann_upper_bound",
    "sandwich_check",
    "wide_family_bound",
    "wide_family_check",
]
