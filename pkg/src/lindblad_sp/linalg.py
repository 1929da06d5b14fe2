"""Dense complex linear algebra shared by the integrators and the oracle.

Every function accepts a single ``(d, d)`` matrix; the ones used inside time
stepping (:func:`dag`, :func:`kraus_apply`, :func:`trace`) also broadcast over
leading batch axes so that an ensemble of states can be advanced at once.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray

from . import config
from .errors import DimMismatch, NotHermitian

Array = NDArray[np.complex128]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()


def dag(a: Array) -> Array:
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def trace(a: Array) -> Array:
    return np.trace(a, axis1=-2, axis2=-1)


def hermitize(a: Array) -> Array:
    return 0.5 * (a + dag(a))


def _square(a, name="matrix") -> Array:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatch(f"{name} must be square, got shape {a.shape}")
    return a


def hermitian_eigs(a) -> NDArray[np.float64]:
    """Ascending real eigenvalues of a Hermitian matrix.

    Backed by LAPACK ``heevd`` (Householder tridiagonalisation followed by
    divide and conquer).

    Raises:
        NotHermitian: if ``a`` departs from its adjoint by more than
            ``EIG_HERMITIAN_TOL`` relative to its largest entry.
    """
    a = _square(a)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if np.max(np.abs(a - dag(a)), initial=0.0) > config.EIG_HERMITIAN_TOL * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(hermitize(a))


def trace_norm(a) -> float:
    """Schatten-1 norm, the sum of singular values.

    Hermitian input takes the ``sum |eigenvalue|`` path; anything else goes
    through the eigenvalues of ``A^dagger A``.
    """
    a = _square(a)
    if a.size == 0:
        return 0.0
    if np.allclose(a, dag(a), rtol=0.0, atol=config.HERMITIAN_TOL * max(1.0, np.abs(a).max())):
        return float(np.sum(np.abs(np.linalg.eigvalsh(hermitize(a)))))
    gram = np.linalg.eigvalsh(dag(a) @ a)
    return float(np.sum(np.sqrt(np.clip(gram, 0.0, None))))


def min_eig(a) -> float:
    """Smallest eigenvalue of the Hermitian part (no symmetry check)."""
    return float(np.linalg.eigvalsh(hermitize(np.asarray(a, dtype=complex)))[0])


def kraus_apply(a, rho) -> Array:
    """``A rho A^dagger``; ``rho`` may carry leading batch axes."""
    a = np.asarray(a, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if a.shape[-1] != rho.shape[-2] or rho.shape[-1] != rho.shape[-2]:
        raise DimMismatch(f"cannot apply {a.shape} Kraus operator to {rho.shape} state")
    return a @ rho @ dag(a)


def truncated_exp_poly(j, tau: float, order: int) -> Array:
    """Taylor polynomial ``sum_{k<=order} (tau J)^k / k!`` of ``exp(tau J)``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    j = _square(j, "J")
    d = j.shape[0]
    out = np.eye(d, dtype=complex)
    term = np.eye(d, dtype=complex)
    for k in range(1, order + 1):
        term = term @ j * (tau / k)
        out = out + term
    return out


def kron(a, b) -> Array:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def expm(a, tol: float = config.EXPM_TOL) -> Array:
    """Matrix exponential by scaling and squaring of a Taylor series.

    The argument is scaled by ``2**-s`` until its max-row-sum norm is at most
    one, the series is summed until a term drops below ``tol`` in that norm,
    and the result is squared ``s`` times.
    """
    a = _square(a)
    norm = float(np.max(np.sum(np.abs(a), axis=1), initial=0.0))
    s = max(0, math.ceil(math.log2(norm))) if norm > 1.0 else 0
    x = a / (2.0**s)
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, 200):
        term = term @ x / k
        out = out + term
        if np.max(np.sum(np.abs(term), axis=1)) < tol:
            break
    for _ in range(s):
        out = out @ out
    return out


def is_density_matrix(rho, herm_tol: float = config.HERMITIAN_TOL,
                      trace_tol: float = config.TRACE_TOL,
                      psd_tol: float = config.PSD_TOL) -> bool:
    """Hermitian, unit trace and positive semidefinite, within the given slack."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if not np.all(np.isfinite(rho)):
        return False
    if np.max(np.abs(rho - dag(rho))) > herm_tol:
        return False
    if abs(trace(rho) - 1.0) > trace_tol:
        return False
    return min_eig(rho) >= -psd_tol
