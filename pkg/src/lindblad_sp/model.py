"""Lindblad generators and the splittings the integrators are built from.

A :class:`LindbladModel` holds ``H`` and the jump operators ``L_k``.  The
generator is split two ways:

* ``L = L_H + L_D`` -- commutator part plus dissipator.
* ``L = L_J + L_L`` with ``J = -i H_eff``, ``L_J(rho) = J rho + rho J^dagger``
  and ``L_L(rho) = sum_k L_k rho L_k^dagger``.

Both ``L_L`` and ``exp(t L_J)`` are completely positive, which is what the
Kraus-form schemes in :mod:`lindblad_sp.schemes` exploit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import config
from .errors import BadOrdering, BadParameter, DimMismatch, NotHermitian
from .linalg import Array, dag, hermitian_eigs, kraus_apply, trace_norm, truncated_exp_poly


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """Time-independent Lindblad equation ``(H, [L_1, ..., L_k])``.

    An empty ``lindblads`` list is allowed and gives von Neumann dynamics.
    """

    hamiltonian: Array
    lindblads: tuple = field(default_factory=tuple)

    def __post_init__(self):
        h = np.array(self.hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
            raise DimMismatch(f"Hamiltonian must be square, got {h.shape}")
        scale = max(1.0, float(np.abs(h).max(initial=0.0)))
        if np.abs(h - dag(h)).max(initial=0.0) > config.HERMITIAN_TOL * scale:
            raise NotHermitian("Hamiltonian is not Hermitian")
        if not np.all(np.isfinite(h)):
            raise BadParameter("Hamiltonian has non-finite entries")
        ls = []
        for k, op in enumerate(self.lindblads):
            op = np.array(op, dtype=complex)
            if op.shape != h.shape:
                raise DimMismatch(f"Lindblad operator {k} has shape {op.shape}, expected {h.shape}")
            if not np.all(np.isfinite(op)):
                raise BadParameter(f"Lindblad operator {k} has non-finite entries")
            op.setflags(write=False)
            ls.append(op)
        h.setflags(write=False)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "lindblads", tuple(ls))

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @cached_property
    def _lstack(self) -> Array:
        if not self.lindblads:
            return np.zeros((0, self.dim, self.dim), dtype=complex)
        return np.stack(self.lindblads)

    @cached_property
    def gamma(self) -> Array:
        """``sum_k L_k^dagger L_k``."""
        g = np.zeros((self.dim, self.dim), dtype=complex)
        for op in self.lindblads:
            g += dag(op) @ op
        return g

    @cached_property
    def effective(self) -> "EffectiveGenerator":
        return effective_generator(self)

    def _check(self, rho) -> Array:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape[-2:] != (self.dim, self.dim):
            raise DimMismatch(f"state of shape {rho.shape} does not match model dimension {self.dim}")
        return rho


@dataclass(frozen=True, eq=False)
class EffectiveGenerator:
    h_eff: Array
    j: Array
    j_trace_norm: float
    ll_norm: float


def effective_generator(model: LindbladModel) -> EffectiveGenerator:
    """``H_eff = H - (i/2) sum L^dagger L`` and the norms used by the error bounds.

    ``ll_norm`` is the induced trace norm of ``L_L``.  On positive trace-one
    inputs ``Tr L_L(F) = Tr(F gamma)`` is linear, so the supremum is the top
    eigenvalue of ``gamma``.
    """
    h_eff = model.hamiltonian + model.gamma / 2j
    j = -1j * h_eff
    ll_norm = float(hermitian_eigs(model.gamma)[-1]) if model.lindblads else 0.0
    return EffectiveGenerator(h_eff=h_eff, j=j, j_trace_norm=trace_norm(j), ll_norm=max(ll_norm, 0.0))


def hamiltonian_part(model: LindbladModel, rho) -> Array:
    rho = model._check(rho)
    h = model.hamiltonian
    return -1j * (h @ rho - rho @ h)


def dissipator_part(model: LindbladModel, rho) -> Array:
    rho = model._check(rho)
    g = model.gamma
    return ll_apply(model, rho) - 0.5 * (g @ rho + rho @ g)


def lindbladian_apply(model: LindbladModel, rho) -> Array:
    """``-i[H, rho] + sum_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho}/2)``."""
    return lj_apply(model, rho) + ll_apply(model, rho)


def lj_apply(model: LindbladModel, rho) -> Array:
    rho = model._check(rho)
    j = model.effective.j
    return j @ rho + rho @ dag(j)


def ll_apply(model: LindbladModel, rho) -> Array:
    rho = model._check(rho)
    if not model.lindblads:
        return np.zeros_like(rho)
    out = np.zeros_like(rho)
    for op in model.lindblads:
        out += op @ rho @ dag(op)
    return out


def truncated_propagator_apply(model: LindbladModel, order: int, t: float, s: float, rho) -> Array:
    """``P rho P^dagger`` with ``P`` the order-``order`` Taylor polynomial of ``exp((t-s) J)``."""
    rho = model._check(rho)
    return kraus_apply(truncated_exp_poly(model.effective.j, t - s, order), rho)


def f_operator_apply(model: LindbladModel, order: int, level: int, times: Sequence[float],
                     dt: float, rho) -> Array:
    """Alternating product of truncated propagators and ``L_L`` at the given times.

    Evaluates ``J(dt, s_m) L_L J(s_m, s_{m-1}) L_L ... L_L J(s_1, 0)`` on ``rho``
    where every propagator is truncated at ``order - level``.

    Raises:
        BadOrdering: if ``times`` is not non-decreasing inside ``[0, dt]`` or
            its length differs from ``level``.
    """
    if not 1 <= level <= order:
        raise ValueError(f"need 1 <= level <= order, got level={level}, order={order}")
    times = [float(s) for s in times]
    if len(times) != level:
        raise BadOrdering(f"expected {level} times, got {len(times)}")
    grid = [0.0, *times, float(dt)]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise BadOrdering(f"times {times} are not ascending within [0, {dt}]")
    alpha = order - level
    out = model._check(rho)
    for k, (lo, hi) in enumerate(zip(grid, grid[1:])):
        if k:
            out = ll_apply(model, out)
        out = truncated_propagator_apply(model, alpha, hi, lo, out)
    return out
