"""One-step integrators for Lindblad equations.

Structure-preserving schemes are sums of Kraus maps built from truncated
propagators of ``J`` and the jump map ``L_L``; their outputs are positive
semidefinite for any step size and are renormalised to unit trace after each
step.  Runge-Kutta (Taylor) baselines are trace preserving but not positive.

Scheme names used on the command line and in configs::

    sp1  sp2tr  sp2mp  spm:M (M >= 3)  rk:M (M >= 1)

All step functions broadcast over leading batch axes of ``rho``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from . import config
from .errors import (
    IndefiniteState,
    InvalidStepSize,
    LindbladError,
    NonPositiveTrace,
    TermExplosion,
    UnsupportedScheme,
)
from .linalg import Array, dag, hermitize, kraus_apply, trace, truncated_exp_poly
from .model import LindbladModel, lindbladian_apply, ll_apply

_FIXED = {"sp1": 1, "sp2tr": 2, "sp2mp": 2}


@dataclass(frozen=True)
class SchemeId:
    kind: str
    order: int

    def __post_init__(self):
        if self.kind in _FIXED:
            if self.order != _FIXED[self.kind]:
                raise ValueError(f"{self.kind} has fixed order {_FIXED[self.kind]}")
        elif self.kind == "spm":
            if self.order < 3:
                raise ValueError("spm requires order >= 3; use sp1/sp2tr/sp2mp below that")
        elif self.kind == "rk":
            if self.order < 1:
                raise ValueError("rk requires order >= 1")
        else:
            raise ValueError(f"unknown scheme kind {self.kind!r}")

    @classmethod
    def parse(cls, name: "str | SchemeId") -> "SchemeId":
        if isinstance(name, SchemeId):
            return name
        text = name.strip().lower()
        if text in _FIXED:
            return cls(text, _FIXED[text])
        kind, sep, order = text.partition(":")
        if not sep or kind not in ("spm", "rk"):
            raise ValueError(f"cannot parse scheme name {name!r}")
        return cls(kind, int(order))

    @property
    def structure_preserving(self) -> bool:
        return self.kind != "rk"

    def __str__(self) -> str:
        return self.kind if self.kind in _FIXED else f"{self.kind}:{self.order}"


SP1 = SchemeId("sp1", 1)
SP2TR = SchemeId("sp2tr", 2)
SP2MP = SchemeId("sp2mp", 2)


def SPM(order: int) -> SchemeId:
    return SchemeId("spm", order)


def RK(order: int) -> SchemeId:
    return SchemeId("rk", order)


@dataclass(frozen=True)
class StepOutcome:
    """Normalised state plus the trace and smallest eigenvalue before normalisation.

    For batched input every field carries the batch axes.
    """

    state: Array
    raw_trace: "float | np.ndarray"
    min_eig_raw: "float | np.ndarray"


@dataclass(frozen=True)
class QuadratureGrid:
    level: int
    n_points: int
    midpoints: np.ndarray


def auto_grid_size(level: int, order: int, dt: float) -> int:
    """``ceil(dt ** (level - order))`` points, enough to keep the local order."""
    return max(1, math.ceil(dt ** (level - order) - 1e-9))


def quadrature_grid(level: int, order: int, dt: float, n_points: int | None = None) -> QuadratureGrid:
    n = auto_grid_size(level, order, dt) if n_points is None else int(n_points)
    if n < 1:
        raise ValueError("grid needs at least one point")
    mid = (np.arange(1, n + 1) - 0.5) * (dt / n)
    return QuadratureGrid(level=level, n_points=n, midpoints=mid)


def _grid_sizes(order: int, dt: float, grid_sizes: Sequence[int] | None) -> list[int]:
    if grid_sizes is None:
        return [auto_grid_size(m, order, dt) for m in range(1, order)]
    sizes = [int(n) for n in grid_sizes]
    if len(sizes) != order - 1 or min(sizes) < 1:
        raise ValueError(f"need {order - 1} positive grid sizes, got {grid_sizes}")
    return sizes


def spm_term_count(order: int, dt: float, grid_sizes: Sequence[int] | None = None) -> int:
    sizes = _grid_sizes(order, dt, grid_sizes)
    return sum(math.comb(n + m - 1, m) for m, n in enumerate(sizes, start=1))


def enumerate_spm_terms(order: int, dt: float, grid_sizes: Sequence[int] | None = None,
                        cap: int = config.TERM_CAP) -> list[tuple[float, tuple[float, ...]]]:
    """Weighted midpoint tuples of the order-``order`` scheme, levels ``1 .. order-1``.

    Each non-decreasing index tuple ``j_1 <= ... <= j_m`` over the level-``m``
    midpoints gets weight ``(dt/N_m)**m / prod(c_g!)`` where ``c_g`` are the
    multiplicities of its distinct indices.  The weights of one level add up to
    ``dt**m / m!``.

    Raises:
        TermExplosion: if more than ``cap`` tuples would be produced.
    """
    if order < 3:
        raise UnsupportedScheme("midpoint enumeration is defined for order >= 3")
    if dt <= 0:
        raise InvalidStepSize(f"step size must be positive, got {dt}")
    sizes = _grid_sizes(order, dt, grid_sizes)
    total = spm_term_count(order, dt, sizes)
    if total > cap:
        raise TermExplosion(f"order {order}, dt={dt} needs {total} terms (cap {cap})")
    terms = []
    for m, n in enumerate(sizes, start=1):
        mid = quadrature_grid(m, order, dt, n).midpoints
        cell = (dt / n) ** m
        for idx in combinations_with_replacement(range(n), m):
            _, counts = np.unique(idx, return_counts=True)
            weight = cell / math.prod(math.factorial(int(c)) for c in counts)
            terms.append((weight, tuple(float(mid[j]) for j in idx)))
    return terms


def _kraus_batch(p: Array, rho: Array) -> Array:
    """``P_j rho_j P_j^dagger`` with ``p`` of shape ``(n, d, d)`` against ``rho`` of shape ``(n, ..., d, d)``."""
    extra = rho.ndim - p.ndim
    p = p.reshape(p.shape[:1] + (1,) * extra + p.shape[1:])
    return p @ rho @ dag(p)


def _spm_level(model: LindbladModel, order: int, level: int, n: int, dt: float, rho: Array) -> Array:
    """Midpoint-rule approximation of the level-``level`` nested integral.

    Sweeps the ordered tuples by their last index.  ``runs[c][j]`` holds the
    weighted partial products of tuples ending with a run of ``c`` copies of
    index ``j``; extending a run by one divides by its new length, which
    reproduces the ``1/prod(c_g!)`` weights without listing tuples.
    """
    alpha = order - level
    j_mat = model.effective.j
    h = dt / n
    poly = {}

    def p(tau):
        key = round(tau / h * 2)
        if key not in poly:
            poly[key] = truncated_exp_poly(j_mat, tau, alpha)
        return poly[key]

    start = np.stack([p((j + 0.5) * h) for j in range(n)])
    runs = {1: ll_apply(model, _kraus_batch(start, np.broadcast_to(rho, (n,) + rho.shape)))}
    for _ in range(1, level):
        total = sum(runs.values())
        fresh = np.zeros_like(total)
        for lag in range(1, n):
            fresh[lag:] += kraus_apply(p(lag * h), total[: n - lag])
        extended = {1: ll_apply(model, fresh)}
        for c, val in runs.items():
            extended[c + 1] = ll_apply(model, val) / (c + 1)
        runs = extended
    total = sum(runs.values())
    end = start[::-1]
    return h**level * np.sum(_kraus_batch(end, total), axis=0)


def _check_dt(dt: float) -> float:
    dt = float(dt)
    if not dt > 0 or not math.isfinite(dt):
        raise InvalidStepSize(f"step size must be positive and finite, got {dt}")
    return dt


def step_unnormalized(scheme, model: LindbladModel, dt: float, rho,
                      grid_sizes: Sequence[int] | None = None,
                      term_cap: int = config.TERM_CAP) -> Array:
    """One step of the scheme without renormalisation.

    ``grid_sizes`` overrides the automatic midpoint counts of ``spm:M``.
    """
    scheme = SchemeId.parse(scheme)
    dt = _check_dt(dt)
    rho = model._check(rho)
    j = model.effective.j

    if scheme.kind == "rk":
        out = rho
        term = rho
        for m in range(1, scheme.order + 1):
            term = lindbladian_apply(model, term) * (dt / m)
            out = out + term
        return out

    if scheme.kind == "sp1":
        return kraus_apply(truncated_exp_poly(j, dt, 1), rho) + dt * ll_apply(model, rho)

    p2 = truncated_exp_poly(j, dt, 2)
    ll_rho = ll_apply(model, rho)
    tail = 0.5 * dt**2 * ll_apply(model, ll_rho)
    if scheme.kind == "sp2tr":
        p1 = truncated_exp_poly(j, dt, 1)
        return (kraus_apply(p2, rho)
                + 0.5 * dt * kraus_apply(p1, ll_rho)
                + 0.5 * dt * ll_apply(model, kraus_apply(p1, rho))
                + tail)
    if scheme.kind == "sp2mp":
        half = truncated_exp_poly(j, dt / 2, 1)
        mid = kraus_apply(half, ll_apply(model, kraus_apply(half, rho)))
        return kraus_apply(p2, rho) + dt * mid + tail

    order = scheme.order
    sizes = _grid_sizes(order, dt, grid_sizes)
    count = spm_term_count(order, dt, sizes)
    if count > term_cap:
        raise TermExplosion(f"{scheme} at dt={dt} needs {count} midpoint terms (cap {term_cap})")
    out = kraus_apply(truncated_exp_poly(j, dt, order), rho)
    for level, n in enumerate(sizes, start=1):
        out = out + _spm_level(model, order, level, n, dt, rho)
    top = rho
    for _ in range(order):
        top = ll_apply(model, top)
    return out + top * (dt**order / math.factorial(order))


def _min_eigs(sigma: Array):
    vals = np.linalg.eigvalsh(hermitize(sigma))[..., 0]
    return float(vals) if np.ndim(vals) == 0 else vals


def normalize(sigma, diagnostics: bool = True) -> StepOutcome:
    """Divide by the trace; the raw trace and smallest eigenvalue are kept.

    Raises:
        NonPositiveTrace: if any trace is at or below ``config.MIN_TRACE``.
    """
    sigma = np.asarray(sigma, dtype=complex)
    tr = trace(sigma).real
    if np.any(~(tr > config.MIN_TRACE)):
        raise NonPositiveTrace(f"unnormalised trace {np.min(tr)!r} is not positive")
    state = hermitize(sigma / np.asarray(tr)[..., None, None])
    raw = float(tr) if np.ndim(tr) == 0 else tr
    return StepOutcome(state=state, raw_trace=raw,
                       min_eig_raw=_min_eigs(sigma) if diagnostics else np.nan)


def step(scheme, model: LindbladModel, dt: float, rho, diagnostics: bool = True,
         **kwargs) -> StepOutcome:
    """Normalised step for structure-preserving schemes, plain step for RK.

    RK outputs are neither renormalised nor repaired; a state with a
    sufficiently negative eigenvalue only triggers an :class:`IndefiniteState`
    warning.
    """
    scheme = SchemeId.parse(scheme)
    sigma = step_unnormalized(scheme, model, dt, rho, **kwargs)
    if scheme.structure_preserving:
        return normalize(sigma, diagnostics=diagnostics)
    tr = trace(sigma).real
    raw = float(tr) if np.ndim(tr) == 0 else tr
    if not diagnostics:
        return StepOutcome(state=sigma, raw_trace=raw, min_eig_raw=np.nan)
    lam = _min_eigs(sigma)
    if np.min(lam) < -config.INDEFINITE_WARN:
        warnings.warn(f"{scheme} produced a state with eigenvalue {np.min(lam):.3e}",
                      IndefiniteState, stacklevel=2)
    return StepOutcome(state=sigma, raw_trace=raw, min_eig_raw=lam)


@dataclass(frozen=True)
class Propagation:
    final: StepOutcome
    trajectory: list | None = None


def propagate(scheme, model: LindbladModel, t_final: float, n_steps: int, rho0,
              record: bool = False, diagnostics: bool = False, **kwargs) -> Propagation:
    """Apply ``n_steps`` steps of size ``t_final / n_steps``.

    With ``record`` the trajectory lists every :class:`StepOutcome`, starting
    with the initial state.  A failing step re-raises its error with the step
    index in the message and as ``step_index``.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    scheme = SchemeId.parse(scheme)
    dt = float(t_final) / n_steps
    rho = model._check(rho0)
    outcome = StepOutcome(state=rho, raw_trace=trace(rho).real, min_eig_raw=np.nan)
    history = [outcome] if record else None
    for k in range(n_steps):
        try:
            outcome = step(scheme, model, dt, outcome.state, diagnostics=diagnostics, **kwargs)
        except LindbladError as err:
            wrapped = type(err)(f"step {k}: {err}")
            wrapped.step_index = k
            raise wrapped from err
        if record:
            history.append(outcome)
    return Propagation(final=outcome, trajectory=history)


def error_constant(scheme, model: LindbladModel) -> tuple[float, float]:
    """Global error constant ``c`` and step-count factor ``max{1, |J|_1, (2c)^(1/(M+1))}``.

    The fixed-step error after ``N`` steps up to time ``T`` is bounded by
    ``4 c T^(M+1) N^-M`` once ``N >= T * factor``.
    """
    scheme = SchemeId.parse(scheme)
    if not scheme.structure_preserving:
        raise UnsupportedScheme("error constants exist only for structure-preserving schemes")
    eff = model.effective
    ll, jn = eff.ll_norm, eff.j_trace_norm
    order = scheme.order
    if scheme.kind == "sp1":
        c = 12.0 * (1 + ll) ** 2
    elif scheme.kind == "sp2tr":
        c = 4.0 * (1 + ll) ** 3 + 3.0 * ll * jn**2
    elif scheme.kind == "sp2mp":
        c = 4.0 * (1 + ll) ** 3 + 2.0 * ll * jn**2
    else:
        c = 3 * math.e**2 * (1 + ll) ** (order + 1) / math.factorial(order + 1)
        c += sum(4 * math.e**8 * ll**m * jn / math.factorial(m - 1) for m in range(1, order))
    return c, max(1.0, jn, (2 * c) ** (1.0 / (order + 1)))
