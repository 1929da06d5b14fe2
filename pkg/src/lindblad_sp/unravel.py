"""Quantum-jump unraveling of the low-order Kraus-form schemes.

Every step of a trajectory picks one Kraus operator ``A_j`` with probability
``p_j = |A_j psi|^2 / sum_k |A_k psi|^2`` and keeps the unit-norm state
``A_j psi / |A_j psi|`` together with the accumulated log of the normalisers.
``exp(log_weight) |psi><psi|`` is then an unbiased estimator of the
unnormalised scheme applied to the initial state.

Trajectory ``i`` of a run seeded with ``seed`` draws from
``SeedSequence(seed, spawn_key=(i,))``, so results do not depend on how many
trajectories are run alongside it or in which order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateState, UnsupportedScheme
from .linalg import Array, dag, truncated_exp_poly
from .model import LindbladModel
from .schemes import SP1, SP2MP, SP2TR, SchemeId


@dataclass(frozen=True, eq=False)
class KrausDecomposition:
    operators: tuple
    source_scheme: SchemeId
    dt: float

    @property
    def stack(self) -> Array:
        return np.stack(self.operators)

    def apply(self, rho) -> Array:
        return sum(a @ rho @ dag(a) for a in self.operators)


def kraus_decompose(scheme, model: LindbladModel, dt: float) -> KrausDecomposition:
    """Kraus operators whose sum of conjugations is one unnormalised step."""
    scheme = SchemeId.parse(scheme)
    j = model.effective.j
    ls = model.lindblads
    if scheme == SP1:
        ops = [truncated_exp_poly(j, dt, 1)] + [np.sqrt(dt) * op for op in ls]
    elif scheme == SP2TR:
        p1 = truncated_exp_poly(j, dt, 1)
        ops = [truncated_exp_poly(j, dt, 2)]
        ops += [np.sqrt(dt / 2) * p1 @ op for op in ls]
        ops += [np.sqrt(dt / 2) * op @ p1 for op in ls]
        ops += [dt / np.sqrt(2) * a @ b for a in ls for b in ls]
    elif scheme == SP2MP:
        half = truncated_exp_poly(j, dt / 2, 1)
        ops = [truncated_exp_poly(j, dt, 2)]
        ops += [np.sqrt(dt) * half @ op @ half for op in ls]
        ops += [dt / np.sqrt(2) * a @ b for a in ls for b in ls]
    else:
        raise UnsupportedScheme(f"no Kraus decomposition is provided for {scheme}")
    return KrausDecomposition(operators=tuple(np.asarray(o, dtype=complex) for o in ops),
                              source_scheme=scheme, dt=float(dt))


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


@dataclass(frozen=True, eq=False)
class Trajectory:
    psi: np.ndarray
    log_weight: float
    rng: np.random.Generator
    index: int = 0

    @classmethod
    def start(cls, psi0, seed: int, index: int = 0) -> "Trajectory":
        psi0 = np.asarray(psi0, dtype=complex)
        return cls(psi0 / np.linalg.norm(psi0), 0.0, trajectory_rng(seed, index), index)

    def density(self) -> Array:
        return np.exp(self.log_weight) * np.outer(self.psi, self.psi.conj())


def _choose(cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Index of the first cumulative weight exceeding ``u * total`` (last axis)."""
    target = u[..., None] * cum[..., -1:]
    idx = np.sum(cum <= target, axis=-1)
    return np.minimum(idx, cum.shape[-1] - 1)


def jump_step(dec: KrausDecomposition, traj: Trajectory) -> Trajectory:
    """Advance one trajectory by one jump.

    Raises:
        DegenerateState: if every Kraus operator annihilates the state.
    """
    psi = traj.psi / np.linalg.norm(traj.psi)
    branches = dec.stack @ psi
    probs = np.sum(np.abs(branches) ** 2, axis=-1)
    total = float(probs.sum())
    if not total >= 1e-300:
        raise DegenerateState(f"trajectory {traj.index}: all branches vanish")
    j = int(_choose(np.cumsum(probs), np.asarray(traj.rng.random())))
    new = branches[j] / np.sqrt(probs[j])
    return replace(traj, psi=new, log_weight=traj.log_weight + np.log(total))


def jump_probabilities(dec: KrausDecomposition, psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    probs = np.sum(np.abs(dec.stack @ psi) ** 2, axis=-1)
    return probs / probs.sum()


@dataclass(frozen=True)
class DensityEstimate:
    mean: Array
    stderr: Array
    """Standard errors of real and imaginary parts, packed as ``se_re + 1j * se_im``."""
    n_traj: int


def monte_carlo_density(dec: KrausDecomposition, psi0, n_steps: int, n_traj: int,
                        seed: int, chunk: int = 4096) -> DensityEstimate:
    """Average ``exp(log_weight) |psi><psi|`` over ``n_traj`` trajectories.

    Trajectories are advanced together in chunks; each one consumes the same
    random numbers as it would under repeated :func:`jump_step` calls.
    """
    if n_traj < 2:
        raise ValueError("need at least two trajectories for an error estimate")
    psi0 = np.asarray(psi0, dtype=complex)
    psi0 = psi0 / np.linalg.norm(psi0)
    d = psi0.shape[0]
    ops = dec.stack
    count = 0
    mean = np.zeros((d, d), dtype=complex)
    m2_re = np.zeros((d, d))
    m2_im = np.zeros((d, d))
    for lo in range(0, n_traj, chunk):
        idx = np.arange(lo, min(n_traj, lo + chunk))
        u = np.stack([trajectory_rng(seed, int(i)).random(n_steps) for i in idx]) if n_steps else None
        psi = np.broadcast_to(psi0, (idx.size, d)).copy()
        logw = np.zeros(idx.size)
        for k in range(n_steps):
            branches = np.einsum("jab,tb->tja", ops, psi)
            probs = np.sum(np.abs(branches) ** 2, axis=-1)
            norm = probs.sum(axis=1)
            bad = np.flatnonzero(~(norm >= 1e-300))
            if bad.size:
                err = DegenerateState(f"trajectory {int(idx[bad[0]])}: all branches vanish at step {k}")
                err.trajectory_index = int(idx[bad[0]])
                raise err
            pick = _choose(np.cumsum(probs, axis=1), u[:, k])
            rows = np.arange(idx.size)
            psi = branches[rows, pick] / np.sqrt(probs[rows, pick])[:, None]
            logw += np.log(norm)
        samples = np.exp(logw)[:, None, None] * np.einsum("ta,tb->tab", psi, psi.conj())
        # merge chunk statistics (Chan et al. pairwise update)
        n_b = idx.size
        mean_b = samples.mean(axis=0)
        dev = samples - mean_b
        delta = mean_b - mean
        tot = count + n_b
        m2_re += np.sum(dev.real**2, axis=0) + delta.real**2 * count * n_b / tot
        m2_im += np.sum(dev.imag**2, axis=0) + delta.imag**2 * count * n_b / tot
        mean = mean + delta * (n_b / tot)
        count = tot
    se = np.sqrt(m2_re / (n_traj - 1) / n_traj) + 1j * np.sqrt(m2_im / (n_traj - 1) / n_traj)
    return DensityEstimate(mean=mean, stderr=se, n_traj=n_traj)


def deterministic_power(dec: KrausDecomposition, psi0, n_steps: int) -> Array:
    """The unnormalised scheme applied ``n_steps`` times to ``|psi0><psi0|``."""
    psi0 = np.asarray(psi0, dtype=complex)
    psi0 = psi0 / np.linalg.norm(psi0)
    rho = np.outer(psi0, psi0.conj())
    for _ in range(n_steps):
        rho = dec.apply(rho)
    return rho

