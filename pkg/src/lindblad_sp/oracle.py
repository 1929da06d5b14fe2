"""Exact propagators used as ground truth.

The generator is represented as a ``d^2 x d^2`` matrix under column stacking,
``vec(A rho B) = (B^T kron A) vec(rho)``, and exponentiated densely.  Cost is
``O(d^6)`` per squaring, so this is a verification tool for small systems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import DimMismatch
from .linalg import Array, dag, expm, hermitize, kraus_apply, trace
from .model import LindbladModel


def vec(rho) -> Array:
    """Column-stacked vectorisation; batch axes are kept in front."""
    rho = np.asarray(rho, dtype=complex)
    return np.swapaxes(rho, -1, -2).reshape(rho.shape[:-2] + (-1,))


def unvec(v, dim: int) -> Array:
    v = np.asarray(v, dtype=complex)
    return np.swapaxes(v.reshape(v.shape[:-1] + (dim, dim)), -1, -2)


@dataclass(frozen=True, eq=False)
class VectorizedGenerator:
    dim: int
    matrix: Array

    @property
    def dim_sq(self) -> int:
        return self.dim**2

    def apply(self, rho) -> Array:
        return unvec(vec(rho) @ self.matrix.T, self.dim)


def _check_dim(model: LindbladModel):
    if model.dim > config.MAX_ORACLE_DIM:
        raise DimMismatch(f"oracle is limited to d <= {config.MAX_ORACLE_DIM}, got {model.dim}")


def _jump_superop(model: LindbladModel) -> Array:
    d = model.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    for op in model.lindblads:
        out += np.kron(op.conj(), op)
    return out


def vectorize(model: LindbladModel) -> VectorizedGenerator:
    _check_dim(model)
    d = model.dim
    eye = np.eye(d)
    h = model.hamiltonian
    g = model.gamma
    mat = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    mat = mat + _jump_superop(model) - 0.5 * (np.kron(eye, g) + np.kron(g.T, eye))
    return VectorizedGenerator(dim=d, matrix=mat)


def exact_propagator(model: LindbladModel, t: float, tol: float = config.EXPM_TOL) -> Array:
    """``exp(t L)`` as a ``d^2 x d^2`` matrix acting on column-stacked states."""
    if t < 0:
        raise ValueError("exact propagation is defined for t >= 0")
    return expm(vectorize(model).matrix * t, tol=tol)


def apply_propagator(prop: Array, rho, dim: int) -> Array:
    out = hermitize(unvec(vec(rho) @ prop.T, dim))
    drift = np.max(np.abs(trace(out) - trace(np.asarray(rho))))
    if drift > 1e-10:
        raise ArithmeticError(f"exact propagation drifted in trace by {drift:.2e}")
    return out


def exact_propagate(model: LindbladModel, t: float, rho, tol: float = config.EXPM_TOL) -> Array:
    """``exp(t L)(rho)``, re-Hermitised; ``rho`` may be batched."""
    rho = model._check(rho)
    if t == 0:
        return rho.copy()
    return apply_propagator(exact_propagator(model, t, tol), rho, model.dim)


def lj_exact(model: LindbladModel, t: float, rho) -> Array:
    """``exp(tJ) rho exp(tJ)^dagger``: the exact no-jump evolution."""
    if t < 0:
        raise ValueError("lj_exact is defined for t >= 0")
    rho = model._check(rho)
    return kraus_apply(expm(model.effective.j * t), rho)


def ll_exact(model: LindbladModel, t: float, rho) -> Array:
    """``exp(t L_L)(rho)`` for any real ``t``; positivity is lost for ``t < 0``."""
    rho = model._check(rho)
    _check_dim(model)
    prop = expm(_jump_superop(model) * t)
    return hermitize(unvec(vec(rho) @ prop.T, model.dim))


def duhamel_truncation(model: LindbladModel, order: int, dt: float, rho, n_quad: int = 24) -> Array:
    """Duhamel series in ``L_L`` truncated at ``order`` with exact no-jump factors.

    The nested time integrals (``order <= 2``) are evaluated by Gauss-Legendre
    quadrature, mapping the triangle to the square for the double integral.
    Used only to check the truncation remainder bound.
    """
    if order not in (1, 2):
        raise ValueError("only orders 1 and 2 are supported")
    rho = model._check(rho)
    j = model.effective.j

    def no_jump(tau, x):
        return kraus_apply(expm(j * tau), x)

    def jump(x):
        return sum((op @ x @ dag(op) for op in model.lindblads), np.zeros_like(x))

    nodes, weights = np.polynomial.legendre.leggauss(n_quad)
    s = 0.5 * dt * (nodes + 1)
    w = 0.5 * dt * weights
    out = no_jump(dt, rho)
    for s1, w1 in zip(s, w):
        out = out + w1 * no_jump(dt - s1, jump(no_jump(s1, rho)))
    if order == 2:
        for s2, w2 in zip(s, w):
            # s1 = s2 * u on [0, s2]
            inner = np.zeros_like(rho)
            for u, wu in zip(0.5 * (nodes + 1), 0.5 * weights):
                s1 = s2 * u
                inner = inner + wu * s2 * no_jump(s2 - s1, jump(no_jump(s1, rho)))
            out = out + w2 * no_jump(dt - s2, jump(inner))
    return out
