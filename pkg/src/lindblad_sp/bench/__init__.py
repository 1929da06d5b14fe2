"""Benchmark models, experiment harnesses and the ``lindblad`` CLI."""

from .experiments import (
    bound_audit, convergence_experiment, fit_slope, observable_decay_experiment, simulate,
)
from .io import ExperimentConfig, load_config, write_csv
from .zoo import ModelSpec, build_model, random_density, random_product_density, sample_states

__all__ = [
    "ExperimentConfig", "ModelSpec", "bound_audit", "build_model", "convergence_experiment",
    "fit_slope", "load_config", "observable_decay_experiment", "random_density",
    "random_product_density", "sample_states", "simulate", "write_csv",
]
