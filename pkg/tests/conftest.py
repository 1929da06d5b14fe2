from __future__ import annotations

import numpy as np
import pytest

from lindblad_sp.bench.zoo import random_density
from lindblad_sp.model import LindbladModel


def random_model(rng: np.random.Generator, d: int, n_ops: int = 2, scale: float = 1.0) -> LindbladModel:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = scale * (a + a.conj().T) / 2
    ls = tuple(scale * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2 * d)
               for _ in range(n_ops))
    return LindbladModel(h, ls)


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    return random_density(d, rng.integers(2**32))


def random_pure(rng: np.random.Generator, d: int) -> np.ndarray:
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return psi / np.linalg.norm(psi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria, one PASS/FAIL line each")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
