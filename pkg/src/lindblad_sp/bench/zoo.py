"""Benchmark models and random initial states."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import BadParameter
from ..linalg import SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z
from ..model import LindbladModel

# kind -> (parameter defaults, one-line description)
MODEL_KINDS: dict[str, tuple[dict[str, Any], str]] = {
    "dephasing": ({"a": 1.0, "b": 0.0},
                  "H = (b/2) sz, L = sqrt(a/2) sz; coherences decay like exp(-(a+ib)t)"),
    "two_level_decay": ({"lambda0": 1.0, "nu": 0.5},
                        "H = 0, L1 = sqrt(l0(nu+1)) s-, L2 = sqrt(l0 nu) s+"),
    "atom_photon": ({"omega": 1.0, "Omega": 1.0, "g": 1.0, "alpha": 1.0, "beta": 1.0,
                     "gamma": 1.0, "nu": 0.5, "eta": 0.5, "n_ph": 10},
                    "two-level atom coupled to one truncated photon mode, d = 2 n_ph"),
    "custom": ({}, "explicit H and list of L as [re, im] matrices"),
}


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        data = dict(data)
        kind = data.pop("kind", None)
        if kind not in MODEL_KINDS:
            raise BadParameter(f"unknown model kind {kind!r}; choose from {sorted(MODEL_KINDS)}")
        unknown = set(data) - set(MODEL_KINDS[kind][0]) - ({"H", "L"} if kind == "custom" else set())
        if unknown:
            raise BadParameter(f"unknown parameters for {kind}: {sorted(unknown)}")
        params = {**MODEL_KINDS[kind][0], **data}
        return cls(kind, params)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}


def parse_matrix(rows) -> np.ndarray:
    """Row-major matrix whose entries are numbers or ``[re, im]`` pairs."""
    def entry(x):
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise BadParameter(f"complex entry must be [re, im], got {x!r}")
            return complex(float(x[0]), float(x[1]))
        return complex(x)

    mat = np.array([[entry(x) for x in row] for row in rows], dtype=complex)
    if mat.ndim != 2:
        raise BadParameter("matrix must be a list of rows")
    return mat


def annihilation(n: int) -> np.ndarray:
    """Truncated ladder operator with ``a|k> = sqrt(k)|k-1>``."""
    return np.diag(np.sqrt(np.arange(1, n)), k=1).astype(complex)


def _nonneg(params, *names):
    for name in names:
        if params[name] < 0:
            raise BadParameter(f"{name} must be >= 0, got {params[name]}")


def build_model(spec: "ModelSpec | dict") -> LindbladModel:
    """Instantiate a benchmark model.

    Raises:
        BadParameter: naming the violated constraint.
    """
    if isinstance(spec, dict):
        spec = ModelSpec.from_dict(spec)
    p = spec.params
    if spec.kind == "dephasing":
        if not p["a"] > 0:
            raise BadParameter(f"dephasing rate a must be > 0, got {p['a']}")
        return LindbladModel(0.5 * p["b"] * SIGMA_Z, (np.sqrt(p["a"] / 2) * SIGMA_Z,))
    if spec.kind == "two_level_decay":
        _nonneg(p, "lambda0", "nu")
        l0, nu = p["lambda0"], p["nu"]
        return LindbladModel(np.zeros((2, 2)), (np.sqrt(l0 * (nu + 1)) * SIGMA_MINUS,
                                                np.sqrt(l0 * nu) * SIGMA_PLUS))
    if spec.kind == "atom_photon":
        _nonneg(p, "alpha", "beta", "gamma", "nu", "g")
        if not 0 <= p["eta"] <= 1:
            raise BadParameter(f"eta must lie in [0, 1], got {p['eta']}")
        n = int(p["n_ph"])
        if n < 1:
            raise BadParameter(f"n_ph must be >= 1, got {p['n_ph']}")
        a = annihilation(n)
        ad = a.conj().T
        i_at, i_ph = np.eye(2), np.eye(n)
        h = (np.kron(i_at, p["omega"] * ad @ a) + np.kron(p["Omega"] * SIGMA_Z, i_ph)
             - p["g"] * (np.kron(SIGMA_MINUS, ad) + np.kron(SIGMA_PLUS, a)))
        ls = (
            np.kron(i_at, np.sqrt(p["alpha"] * (p["nu"] + 1)) * a),
            np.kron(i_at, np.sqrt(p["alpha"] * p["nu"]) * ad),
            np.kron(np.sqrt(p["beta"] * (1 - p["eta"])) * SIGMA_MINUS, i_ph),
            np.kron(np.sqrt(p["beta"] * p["eta"]) * SIGMA_PLUS, i_ph),
            np.kron(np.sqrt(p["gamma"]) * SIGMA_Z, i_ph),
        )
        return LindbladModel(h, ls)
    if spec.kind == "custom":
        if "H" not in p:
            raise BadParameter("custom model needs 'H'")
        return LindbladModel(parse_matrix(p["H"]), tuple(parse_matrix(m) for m in p.get("L", [])))
    raise BadParameter(f"unknown model kind {spec.kind!r}")


def random_density(d: int, seed) -> np.ndarray:
    """Ginibre random state ``G G^dagger / Tr(G G^dagger)``."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_product_density(d_atom: int, d_field: int, seed) -> np.ndarray:
    ss = np.random.SeedSequence(seed if isinstance(seed, int) else list(seed))
    s_atom, s_field = ss.spawn(2)
    return np.kron(random_density(d_atom, s_atom), random_density(d_field, s_field))


def sample_states(spec: ModelSpec, dim: int, n: int, seed: int) -> np.ndarray:
    """``n`` seeded initial states; product states for the atom-photon model."""
    if spec.kind == "atom_photon":
        n_ph = int(spec.params["n_ph"])
        return np.stack([random_product_density(2, n_ph, (seed, k)) for k in range(n)])
    return np.stack([random_density(dim, (seed, k)) for k in range(n)])
