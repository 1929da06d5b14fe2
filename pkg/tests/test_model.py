from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lindblad_sp import model as lm
from lindblad_sp.bench.zoo import build_model
from lindblad_sp.errors import BadOrdering, DimMismatch, NotHermitian
from lindblad_sp.linalg import SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, SIGMA_Y, SIGMA_Z, kraus_apply, min_eig
from lindblad_sp.model import LindbladModel
from lindblad_sp.stability import dephasing_model

from conftest import random_model, random_pure, random_state

I2 = np.eye(2)
PLUS_X = (I2 + SIGMA_X) / 2


def test_model_validation():
    with pytest.raises(NotHermitian):
        LindbladModel(SIGMA_MINUS, ())
    with pytest.raises(DimMismatch):
        LindbladModel(SIGMA_Z, (np.eye(3),))
    m = LindbladModel(SIGMA_Z, ())
    assert m.dim == 2 and m.lindblads == ()
    with pytest.raises(DimMismatch):
        lm.lindbladian_apply(m, np.eye(3))


def test_model_is_immutable():
    m = dephasing_model(1.0)
    with pytest.raises(ValueError):
        m.hamiltonian[0, 0] = 5.0


def test_dephasing_generator_acts_on_coherences():
    lam = 0.7 + 1.3j
    m = dephasing_model(lam.real, lam.imag)
    rho = np.array([[0.6, 0.2 - 0.1j], [0.2 + 0.1j, 0.4]])
    out = lm.lindbladian_apply(m, rho)
    assert np.allclose(out, [[0, -lam * rho[0, 1]], [-np.conj(lam) * rho[1, 0], 0]], atol=1e-14)


def test_von_neumann_commutator():
    m = LindbladModel(SIGMA_Z, ())
    assert np.allclose(lm.lindbladian_apply(m, PLUS_X), SIGMA_Y)
    assert np.allclose(lm.hamiltonian_part(LindbladModel(np.zeros((2, 2)), ()), PLUS_X), 0)


def test_maximally_mixed_input(rng):
    m = random_model(rng, 3, n_ops=2)
    ls = m.lindblads
    expect = sum(op @ op.conj().T - op.conj().T @ op for op in ls) / 3
    assert np.allclose(lm.lindbladian_apply(m, np.eye(3) / 3), expect, atol=1e-13)


def test_dephasing_dissipator_and_jump_part():
    m = dephasing_model(1.0)
    # (a/2)(Z rho Z - rho) with rho = (I + X)/2 removes the X part at rate a
    assert np.allclose(lm.dissipator_part(m, PLUS_X), -SIGMA_X / 2, atol=1e-15)
    assert np.allclose(lm.ll_apply(m, PLUS_X), 0.5 * (I2 - SIGMA_X) / 2, atol=1e-15)


def test_effective_generator_dephasing():
    eff = lm.effective_generator(dephasing_model(1.0))
    assert np.allclose(eff.j, -0.25 * I2)
    assert eff.j_trace_norm == pytest.approx(0.5)
    assert eff.ll_norm == pytest.approx(0.5)


def test_effective_generator_without_jumps():
    eff = lm.effective_generator(LindbladModel(SIGMA_X, ()))
    assert np.allclose(eff.j, -1j * SIGMA_X)
    assert eff.ll_norm == 0.0


@pytest.mark.parametrize("l0,nu", [(1.0, 0.5), (3.0, 0.5), (5.0, 0.0)])
def test_two_level_decay_norm(l0, nu):
    m = build_model({"kind": "two_level_decay", "lambda0": l0, "nu": nu})
    # sigma_+ sigma_- projects on |0>, so the decay rate sits in the first slot
    assert np.allclose(m.gamma, np.diag([l0 * (nu + 1), l0 * nu]))
    assert m.effective.ll_norm == pytest.approx(l0 * (nu + 1))
    assert np.allclose(SIGMA_PLUS @ SIGMA_MINUS, np.diag([1, 0]))


def test_effective_generator_invariants(rng):
    for d in (2, 3, 5):
        m = random_model(rng, d, n_ops=3)
        eff = m.effective
        assert np.array_equal(eff.j, -1j * eff.h_eff)
        assert np.allclose(eff.j + eff.j.conj().T, -m.gamma, atol=1e-12)


def test_ll_norm_matches_pure_state_sampling(rng):
    """The closed form is the supremum of ``Tr L_L(|psi><psi|)`` over pure states."""
    for d in (2, 3, 4):
        m = random_model(rng, d, n_ops=2)
        psi = rng.standard_normal((10_000, d)) + 1j * rng.standard_normal((10_000, d))
        psi /= np.linalg.norm(psi, axis=1, keepdims=True)
        rho = np.einsum("na,nb->nab", psi, psi.conj())
        values = np.trace(lm.ll_apply(m, rho), axis1=1, axis2=2).real
        best = values.max()
        assert best <= m.effective.ll_norm * (1 + 1e-12)
        assert best >= m.effective.ll_norm * (1 - 0.1)
        # ascend from the best sample using only the jump map itself
        v = psi[np.argmax(values)]
        for _ in range(2000):
            grad = sum(op.conj().T @ (op @ v) for op in m.lindblads)
            v = grad / np.linalg.norm(grad)
        top = np.trace(lm.ll_apply(m, np.outer(v, v.conj()))).real
        assert top == pytest.approx(m.effective.ll_norm, rel=1e-6)


@settings(max_examples=50, deadline=None)
@given(d=st.integers(1, 5), k=st.integers(0, 3), seed=st.integers(0, 2**31))
def test_splittings_agree(d, k, seed):
    rng = np.random.default_rng(seed)
    m = random_model(rng, d, n_ops=k)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a + a.conj().T
    full = lm.lindbladian_apply(m, rho)
    scale = max(1.0, np.abs(full).max())
    assert np.allclose(lm.hamiltonian_part(m, rho) + lm.dissipator_part(m, rho), full, atol=1e-12 * scale)
    assert np.allclose(lm.lj_apply(m, rho) + lm.ll_apply(m, rho), full, atol=1e-12 * scale)
    assert abs(np.trace(full)) <= 1e-12 * d * scale
    for out in (full, lm.lj_apply(m, rho), lm.ll_apply(m, rho), lm.hamiltonian_part(m, rho)):
        assert np.allclose(out, out.conj().T, atol=1e-12 * scale)


def test_batched_generators(rng):
    m = random_model(rng, 3)
    rhos = np.stack([random_state(rng, 3) for _ in range(4)])
    batched = lm.lindbladian_apply(m, rhos)
    for r, out in zip(rhos, batched):
        assert np.allclose(lm.lindbladian_apply(m, r), out)


def test_truncated_propagator_examples(rng):
    m = dephasing_model(1.0)
    assert np.allclose(lm.truncated_propagator_apply(m, 1, 1.0, 0.0, PLUS_X), 9 / 16 * PLUS_X)
    rho = random_state(rng, 2)
    assert np.allclose(lm.truncated_propagator_apply(m, 0, 3.0, 1.0, rho), rho)
    assert np.allclose(lm.truncated_propagator_apply(m, 4, 0.3, 0.3, rho), rho)


def test_f_operator_examples(rng):
    m = random_model(rng, 3)
    rho = random_state(rng, 3)
    top = lm.ll_apply(m, lm.ll_apply(m, rho))
    for times in ([0.0, 0.0], [0.1, 0.4], [0.5, 0.5]):
        assert np.allclose(lm.f_operator_apply(m, 2, 2, times, 0.5, rho), top)
    assert np.allclose(lm.f_operator_apply(m, 1, 1, [0.3], 0.5, rho), lm.ll_apply(m, rho))

    dep = dephasing_model(1.0)
    p = np.eye(2) * 0.875  # 1 + J/2 with J = -I/4
    brute = kraus_apply(p, lm.ll_apply(dep, kraus_apply(p, PLUS_X)))
    assert np.allclose(lm.f_operator_apply(dep, 2, 1, [0.5], 1.0, PLUS_X), brute)


def test_f_operator_rejects_bad_times(rng):
    m = random_model(rng, 2)
    rho = random_state(rng, 2)
    with pytest.raises(BadOrdering):
        lm.f_operator_apply(m, 3, 2, [0.4, 0.2], 0.5, rho)
    with pytest.raises(BadOrdering):
        lm.f_operator_apply(m, 3, 2, [0.1, 0.6], 0.5, rho)
    with pytest.raises(BadOrdering):
        lm.f_operator_apply(m, 3, 2, [0.1], 0.5, rho)


def test_completely_positive_pieces(rng):
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(2, 5))
        m = random_model(rng, d, n_ops=int(rng.integers(1, 4)))
        psi = random_pure(rng, d)
        rho = np.outer(psi, psi.conj())
        dt = float(rng.uniform(0.01, 1.0))
        s = np.sort(rng.uniform(0, dt, 2))
        outs = [lm.ll_apply(m, rho),
                lm.truncated_propagator_apply(m, int(rng.integers(0, 4)), dt, s[0], rho),
                lm.f_operator_apply(m, 3, 2, s, dt, rho)]
        for out in outs:
            scale = max(1.0, np.trace(out).real)
            worst = min(worst, min_eig(out) / scale)
    assert worst >= -1e-10
