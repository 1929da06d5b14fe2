"""Absolute stability on the dephasing test problem.

The test model is ``H = (b/2) sigma_z``, ``L = sqrt(a/2) sigma_z`` whose
off-diagonal entries obey ``x' = -lambda x`` with ``lambda = a + ib``.  One
normalised step acts on the Bloch vector as ``[[E, 0], [0, 1]]`` with
``E = [[alpha, beta], [-beta, alpha]]``; the iteration decays iff
``alpha^2 + beta^2 < 1``.  Only ``z = lambda * dt`` matters, so everything here
uses ``dt = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import config
from .errors import NonlinearMap, UnsupportedScheme
from .linalg import SIGMA_X, SIGMA_Y, SIGMA_Z
from .model import LindbladModel
from .schemes import SP1, SP2MP, SP2TR, RK, SchemeId, step

_I2 = np.eye(2, dtype=complex)
CLOSED_FORM_SCHEMES = (SP1, SP2TR, SP2MP, RK(1), RK(2))


def dephasing_model(a: float, b: float = 0.0) -> LindbladModel:
    if a < 0:
        raise ValueError("dephasing rate must be non-negative")
    return LindbladModel(0.5 * b * SIGMA_Z, (np.sqrt(a / 2) * SIGMA_Z,))


def bloch_state(rx: float, ry: float, rz: float) -> np.ndarray:
    return 0.5 * (_I2 + rx * SIGMA_X + ry * SIGMA_Y + rz * SIGMA_Z)


def bloch_vector(rho) -> np.ndarray:
    rho = np.asarray(rho)
    return np.array([np.trace(s @ rho).real for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)])


def _require_half_plane(z: complex) -> complex:
    z = complex(z)
    if not z.real > 0:
        raise ValueError(f"stability is analysed on Re(z) > 0 only, got z={z}")
    return z


@dataclass(frozen=True)
class StabilityPoint:
    z: complex
    alpha: float
    beta: float
    spectral_radius_sq: float
    verdict: str
    empirical: str | None = None

    @property
    def stable(self) -> bool:
        return self.verdict == "stable"


def classify(rho_sq: float, band: float = config.MARGINAL_BAND) -> str:
    if abs(rho_sq - 1.0) <= band:
        return "marginal"
    return "stable" if rho_sq < 1.0 else "unstable"


def bloch_e_matrix(scheme, z: complex, tol: float = 1e-10) -> tuple[float, float]:
    """Extract ``(alpha, beta)`` by stepping Bloch basis states once.

    Raises:
        NonlinearMap: if the estimates from different probe states disagree or
            ``r_z`` is not carried through unchanged.
    """
    scheme = SchemeId.parse(scheme)
    z = _require_half_plane(z)
    model = dephasing_model(z.real, z.imag)
    probes = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0.6, 0, 0.8), (0, 0, 1)]
    out = [bloch_vector(step(scheme, model, 1.0, bloch_state(*r), diagnostics=False).state)
           for r in probes]
    alphas = [out[0][0], -out[1][0], out[2][1], -out[3][1], out[4][0] / 0.6]
    betas = [-out[0][1], out[1][1], out[2][0], -out[3][0], -out[4][1] / 0.6]
    alpha, beta = float(np.mean(alphas)), float(np.mean(betas))
    slack = tol * max(1.0, abs(alpha), abs(beta))
    if np.ptp(alphas) > slack or np.ptp(betas) > slack:
        raise NonlinearMap(f"{scheme} at z={z}: Bloch map is not linear")
    rz = [o[2] for o in out]
    if max(abs(v) for v in rz[:4]) > slack or abs(rz[4] - 0.8) > slack or abs(rz[5] - 1.0) > slack:
        raise NonlinearMap(f"{scheme} at z={z}: r_z is not preserved")
    return alpha, beta


def closed_form_e(scheme, z: complex) -> tuple[float, float]:
    """Rational closed forms of ``(alpha, beta)`` for the five analysed schemes."""
    scheme = SchemeId.parse(scheme)
    z = _require_half_plane(z)
    a, b = z.real, z.imag
    if scheme == RK(1):
        return 1 - a, -b
    if scheme == RK(2):
        return 0.5 * (2 - 2 * a + a * a - b * b), b * (a - 1)
    if scheme == SP1:
        den = 16 + a * a + 4 * b * b
        return (16 - 16 * a + a * a - 4 * b * b) / den, 4 * b * (a - 4) / den
    if scheme == SP2TR:
        den = a**4 + 16 * a**3 + 8 * a**2 * b**2 + 64 * a * b**2 + 16 * (b**4 + 64)
        num = (a**4 - 48 * a**3 - 8 * a**2 * (3 * b**2 - 64) + 64 * a * (5 * b**2 - 16)
               + 16 * (b**4 - 32 * b**2 + 64))
        return num / den, 8 * b * (a - 4) * (a**2 - 24 * a - 4 * b**2 + 32) / den
    if scheme == SP2MP:
        den = (a**5 - 24 * a**4 + 8 * a**3 * (b**2 + 32) - 64 * a**2 * b**2 + 16 * a * b**4
               + 128 * (b**4 + 64))
        if not den > 0:
            raise ArithmeticError(f"midpoint denominator {den} is not positive at z={z}")
        num = (-a**5 + 40 * a**4 + 8 * a**3 * (3 * b**2 - 64) - 64 * a**2 * (9 * b**2 - 64)
               - 16 * a * (b**4 - 192 * b**2 + 512) + 128 * (b**4 - 32 * b**2 + 64))
        bnum = -8 * b * (a**4 - 32 * a**3 - 4 * a**2 * (b**2 - 72) + 64 * a * (b**2 - 16)
                         - 128 * (b**2 - 8))
        return num / den, bnum / den
    raise UnsupportedScheme(f"no closed form for {scheme}")


def in_stability_region(scheme, z: complex) -> bool:
    """Analytic stability predicate on the open right half-plane."""
    scheme = SchemeId.parse(scheme)
    z = _require_half_plane(z)
    if scheme in (SP1, SP2TR):
        return z.real != 4
    if scheme == SP2MP:
        return z not in (4 + 2j, 4 - 2j, 8 + 0j)
    if scheme == RK(1):
        return abs(z - 1) < 1
    if scheme == RK(2):
        return abs(z * z / 2 - z + 1) < 1
    raise UnsupportedScheme(f"no analytic region for {scheme}")


def g_polynomial(z: complex) -> float:
    """Degree-8 polynomial in ``(Re z, Im z)`` whose positivity is the midpoint-scheme region."""
    a, b = complex(z).real, complex(z).imag
    b2 = b * b
    return (a**8 - 48 * a**7 + 16 * a**6 * (b2 + 72) - 192 * a**5 * (3 * b2 + 88)
            + 32 * a**4 * (3 * b2**2 + 232 * b2 + 4768)
            - 256 * a**3 * (9 * b2**2 + 128 * b2 + 3200)
            + 256 * a**2 * (b2**3 + 80 * b2**2 + 352 * b2 + 9728)
            - 1024 * a * (3 * b2**3 + 56 * b2**2 + 384 * b2 + 4096)
            + 256 * (b2**2 + 8 * b2 + 128) ** 2)


# (power of a, power of b) -> coefficient, the expanded form of g_polynomial
G_MONOMIALS = {
    (8, 0): 1, (7, 0): -48, (6, 2): 16, (6, 0): 1152, (5, 2): -576, (5, 0): -16896,
    (4, 4): 96, (4, 2): 7424, (4, 0): 152576, (3, 4): -2304, (3, 2): -32768,
    (3, 0): -819200, (2, 6): 256, (2, 4): 20480, (2, 2): 90112, (2, 0): 2490368,
    (1, 6): -3072, (1, 4): -57344, (1, 2): -393216, (1, 0): -4194304,
    (0, 8): 256, (0, 6): 4096, (0, 4): 81920, (0, 2): 524288, (0, 0): 4194304,
}


def g_monomial_scale(z: complex) -> float:
    """``sum |c_ij a^i b^j|``, the natural magnitude against which ``G(z)`` is compared."""
    a, b = abs(complex(z).real), abs(complex(z).imag)
    return float(sum(abs(c) * a**i * b**j for (i, j), c in G_MONOMIALS.items()))


def g_real_axis(a: float) -> float:
    return (a - 8) ** 4 * (a**4 - 16 * a**3 + 256 * a**2 - 512 * a + 1024)


def empirical_verdict(scheme, z: complex, n_iter: int = 1000, threshold: float = 1e-6,
                      rz: float = 0.0) -> str:
    """Iterate the scheme from ``r = (1, 0, rz)`` and report whether ``(r_x, r_y)`` decays."""
    scheme = SchemeId.parse(scheme)
    z = _require_half_plane(z)
    model = dephasing_model(z.real, z.imag)
    rho = bloch_state(np.sqrt(1 - rz * rz), 0.0, rz)
    for _ in range(n_iter):
        rho = step(scheme, model, 1.0, rho, diagnostics=False).state
        r = bloch_vector(rho)
        size = float(np.hypot(r[0], r[1]))
        if size < threshold:
            return "decays"
        if not np.isfinite(size) or size > 1e12:
            break
    return "persists"


def scan_values(spec: str) -> np.ndarray:
    """Parse ``"lo:hi:step"`` into an inclusive grid."""
    lo, hi, inc = (float(x) for x in spec.split(":"))
    if inc <= 0 or hi < lo:
        raise ValueError(f"bad range {spec!r}")
    n = int(round((hi - lo) / inc)) + 1
    return lo + inc * np.arange(n)


def region_scan(scheme, re_values: Iterable[float], im_values: Iterable[float],
                empirical: bool = False, n_iter: int = 1000) -> list[StabilityPoint]:
    """Evaluate the extracted ``E`` matrix and its verdict on a grid of ``z``."""
    scheme = SchemeId.parse(scheme)
    re_values = np.asarray(list(re_values), dtype=float)
    if np.any(re_values <= 0):
        raise ValueError("region_scan refuses points with Re(z) <= 0")
    points = []
    for x in re_values:
        for y in im_values:
            z = complex(x, y)
            alpha, beta = bloch_e_matrix(scheme, z)
            rho_sq = alpha * alpha + beta * beta
            emp = empirical_verdict(scheme, z, n_iter) if empirical else None
            points.append(StabilityPoint(z, alpha, beta, rho_sq, classify(rho_sq), emp))
    return points
