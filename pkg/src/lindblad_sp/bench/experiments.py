"""Convergence, error-bound, observable-decay and positivity harnesses.

Ensembles of initial states are propagated together (the integrators
broadcast over a leading batch axis), compared against the dense exact
propagator, and summarised as rows ready for :func:`lindblad_sp.bench.io.write_csv`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .. import config
from ..errors import BoundViolation, DimMismatch, LindbladError
from ..linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, hermitize
from ..model import LindbladModel
from ..oracle import apply_propagator, exact_propagator
from ..schemes import SchemeId, error_constant, propagate
from .io import ExperimentConfig
from .zoo import build_model, sample_states

log = logging.getLogger(__name__)

DECAY_INITIAL_STATE = 0.5 * (np.eye(2) + SIGMA_X / np.sqrt(6) + SIGMA_Y / np.sqrt(3) + SIGMA_Z / np.sqrt(2))


def batched_trace_norm(a: np.ndarray) -> np.ndarray:
    """Trace norms of a stack of Hermitian matrices."""
    return np.sum(np.abs(np.linalg.eigvalsh(hermitize(a))), axis=-1)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    n_lo: int
    n_hi: int
    n_points: int


def fit_slope(n_values, errors, floor: float = 100 * config.EXPM_TOL,
              ceiling: float = 0.5) -> SlopeFit:
    """Least-squares slope of ``log10(error)`` against ``log10(N)``.

    Points at or below ``floor`` (oracle noise) or above ``ceiling``
    (pre-asymptotic) are dropped; of the rest, only the top decade
    ``[N_top / 10, N_top]`` is fitted.
    """
    n = np.asarray(n_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    ok = (e > floor) & (e <= ceiling) & np.isfinite(e)
    if ok.sum() < 2:
        return SlopeFit(math.nan, math.nan, 0, 0, int(ok.sum()))
    top = n[ok].max()
    sel = ok & (n >= top / 10 - 1e-9)
    if sel.sum() < 2:
        sel = ok
    slope, intercept = np.polyfit(np.log10(n[sel]), np.log10(e[sel]), 1)
    return SlopeFit(float(slope), float(intercept), int(n[sel].min()), int(n[sel].max()), int(sel.sum()))


def _terminal_errors(scheme, model, t_final, n_steps, rho0, exact) -> np.ndarray:
    try:
        final = propagate(scheme, model, t_final, n_steps, rho0).final.state
    except LindbladError as err:
        raise type(err)(f"{scheme}, N={n_steps}: {err}") from err
    return batched_trace_norm(final - exact)


@dataclass(frozen=True)
class ConvergenceResult:
    rows: list
    slopes: dict
    per_sample: dict


CONVERGENCE_HEADER = ("scheme", "N", "dt", "mean_error", "stderr")


def convergence_experiment(cfg: ExperimentConfig, model: LindbladModel | None = None) -> ConvergenceResult:
    """Mean terminal trace-norm error for every scheme and step count."""
    model = model or build_model(cfg.model)
    states = sample_states(cfg.model, model.dim, cfg.n_samples, cfg.seed)
    exact = apply_propagator(exact_propagator(model, cfg.T), states, model.dim)
    rows, slopes, per_sample = [], {}, {}
    for scheme in cfg.schemes:
        means = []
        for n in sorted(cfg.N_values):
            errs = _terminal_errors(scheme, model, cfg.T, n, states, exact)
            per_sample[(str(scheme), n)] = errs
            se = float(np.std(errs, ddof=1) / np.sqrt(errs.size)) if errs.size > 1 else 0.0
            rows.append((str(scheme), n, cfg.T / n, float(errs.mean()), se))
            means.append(float(errs.mean()))
        slopes[str(scheme)] = fit = fit_slope(sorted(cfg.N_values), means)
        log.info("%s: slope %.3f over N in [%d, %d]", scheme, fit.slope, fit.n_lo, fit.n_hi)
    return ConvergenceResult(rows=rows, slopes=slopes, per_sample=per_sample)


AUDIT_HEADER = ("scheme", "N", "measured_error", "error_bound", "n_min", "within_regime")


def bound_audit(cfg: ExperimentConfig, model: LindbladModel | None = None,
                strict: bool = True) -> list:
    """Compare the worst per-sample terminal error with ``4 c T^(M+1) N^-M``.

    Only step counts with ``N >= T * n_min_factor`` are held to the bound.

    Raises:
        BoundViolation: when ``strict`` and any in-regime run exceeds it.
    """
    model = model or build_model(cfg.model)
    states = sample_states(cfg.model, model.dim, cfg.n_samples, cfg.seed)
    exact = apply_propagator(exact_propagator(model, cfg.T), states, model.dim)
    rows, violations = [], []
    for scheme in cfg.schemes:
        c, factor = error_constant(scheme, model)
        order = scheme.order
        n_min = cfg.T * factor
        for n in sorted(cfg.N_values):
            within = n >= n_min
            bound = 4 * c * cfg.T ** (order + 1) * float(n) ** (-order)
            errs = _terminal_errors(scheme, model, cfg.T, n, states, exact)
            worst = float(errs.max())
            rows.append((str(scheme), n, worst, bound, n_min, within))
            if within and worst > bound:
                violations.append((str(scheme), n, int(np.argmax(errs))))
    if strict and violations:
        raise BoundViolation(f"error bound exceeded for {violations}", violations)
    return rows


DECAY_HEADER = ("t", "scheme", "abs_sx", "abs_sy")


def observable_decay_experiment(model: LindbladModel, schemes, dt: float, n_steps: int,
                                rho0=None) -> list:
    """``|<sigma_x>|`` and ``|<sigma_y>|`` along fixed-step runs of a qubit model."""
    if model.dim != 2:
        raise DimMismatch("observable decay is defined for two-level models")
    rho0 = DECAY_INITIAL_STATE if rho0 is None else np.asarray(rho0, dtype=complex)
    rows = []
    for scheme in schemes:
        scheme = SchemeId.parse(scheme)
        run = propagate(scheme, model, dt * n_steps, n_steps, rho0, record=True)
        for k, out in enumerate(run.trajectory):
            rho = out.state
            rows.append((k * dt, str(scheme), abs(np.trace(SIGMA_X @ rho).real),
                         abs(np.trace(SIGMA_Y @ rho).real)))
    return rows


SIMULATE_HEADER = ("scheme", "step", "t", "raw_trace", "min_eig_raw", "purity", "error_vs_exact")


def simulate(cfg: ExperimentConfig, model: LindbladModel | None = None, rho0=None) -> list:
    """Step-by-step diagnostics of one fixed-step run per scheme."""
    model = model or build_model(cfg.model)
    if rho0 is None:
        rho0 = sample_states(cfg.model, model.dim, 1, cfg.seed)[0]
    n = int(cfg.N_values[0])
    dt = cfg.T / n
    step_prop = exact_propagator(model, dt)
    exact = [rho0]
    for _ in range(n):
        exact.append(apply_propagator(step_prop, exact[-1], model.dim))
    rows = []
    for scheme in cfg.schemes:
        run = propagate(scheme, model, cfg.T, n, rho0, record=True, diagnostics=True)
        for k, out in enumerate(run.trajectory):
            rho = out.state
            err = float(batched_trace_norm(rho - exact[k]))
            rows.append((str(scheme), k, k * dt, float(out.raw_trace),
                         float(out.min_eig_raw) if k else float(np.linalg.eigvalsh(rho0)[0]),
                         float(np.trace(rho @ rho).real), err))
    return rows
