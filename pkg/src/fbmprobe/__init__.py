"""Characterization of fractional Brownian dephasing noise with a qubit
probe: analytic channel dynamics, quantum estimation and discrimination
bounds, interaction-time optimization, and a Monte Carlo path oracle."""

from .backend import which_backend
from .dephasing import (Coupling, DephasingFamily, QubitState, beta,
                        covariance, covariance_matrix, evolve,
                        state_eigensystem, visibility)
from .metrology import (DiscriminationPair, MetricSample, bures_metric_bloch,
                        chernoff_q, evaluate_metrics, fidelity, g_bures_gamma,
                        g_qcb_gamma, helstrom_pe, helstrom_pe_general,
                        multicopy_bound, qfi_gamma)
from .montecarlo import (EstimationRun, MLEResult, PathSpec,
                         dephasing_phases, empirical_visibility, mle_gamma,
                         sample_paths, simulate_measurements)
from .optimize import (NoThresholdError, OptResult, TimeGrid,
                       chernoff_table, helstrom_table, maximize_gb_over_t,
                       metric_map_table, metric_time_window,
                       minimize_pe_over_t, minimize_q_over_t,
                       optimized_metric_table, threshold_lambda)
from .specfun import HurstPoint, digamma_fn, dv_gamma, ln_gamma_fn, v_gamma

__version__ = "0.1.0"

__all__ = [
    "Coupling", "DephasingFamily", "DiscriminationPair", "EstimationRun",
    "HurstPoint", "MLEResult", "MetricSample", "NoThresholdError",
    "OptResult", "PathSpec", "QubitState", "TimeGrid", "beta",
    "bures_metric_bloch", "chernoff_q", "chernoff_table", "covariance",
    "covariance_matrix", "dephasing_phases", "digamma_fn", "dv_gamma",
    "empirical_visibility", "evaluate_metrics", "evolve", "fidelity",
    "g_bures_gamma", "g_qcb_gamma", "helstrom_pe", "helstrom_pe_general",
    "helstrom_table", "ln_gamma_fn", "maximize_gb_over_t",
    "metric_map_table", "metric_time_window", "minimize_pe_over_t",
    "minimize_q_over_t", "mle_gamma", "multicopy_bound",
    "optimized_metric_table", "qfi_gamma", "sample_paths",
    "simulate_measurements", "state_eigensystem", "threshold_lambda",
    "v_gamma", "visibility", "which_backend",
]
