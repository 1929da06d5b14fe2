from __future__ import annotations

import numpy as np
import pytest

from lindblad_sp import stability as stab
from lindblad_sp.errors import UnsupportedScheme
from lindblad_sp.schemes import RK, SP1, SP2MP, SP2TR, SPM, step

FIVE = stab.CLOSED_FORM_SCHEMES


def test_sp1_at_unit_z():
    alpha, beta = stab.bloch_e_matrix(SP1, 1.0)
    assert alpha == pytest.approx(1 / 17, abs=1e-14) and abs(beta) < 1e-14
    assert stab.closed_form_e(SP1, 1.0) == pytest.approx((1 / 17, 0.0))


@pytest.mark.parametrize("a", [0.3, 1.0, 1.7, 2.5])
def test_forward_euler_on_real_axis(a):
    alpha, beta = stab.bloch_e_matrix(RK(1), a)
    assert alpha == pytest.approx(1 - a) and abs(beta) < 1e-14


@pytest.mark.parametrize("scheme", FIVE + (SPM(3),), ids=str)
def test_small_z_is_identity(scheme):
    alpha, beta = stab.bloch_e_matrix(scheme, 1e-7 + 1e-7j)
    assert alpha == pytest.approx(1.0, abs=1e-6) and abs(beta) < 1e-6


def test_closed_form_boundary_points():
    assert stab.closed_form_e(SP1, 4.0) == pytest.approx((-1.0, 0.0))
    assert stab.closed_form_e(RK(2), 2.0) == pytest.approx((1.0, 0.0))
    with pytest.raises(UnsupportedScheme):
        stab.closed_form_e(SPM(3), 1.0)


@pytest.mark.parametrize("scheme", FIVE, ids=str)
def test_closed_forms_match_extraction(scheme):
    for x in np.linspace(0.2, 10, 15):
        for y in np.linspace(-5, 5, 15):
            z = complex(x, y)
            num = stab.bloch_e_matrix(scheme, z)
            ref = stab.closed_form_e(scheme, z)
            assert np.allclose(num, ref, atol=1e-10, rtol=0)


def test_region_predicates():
    assert not stab.in_stability_region(SP1, 4 + 5j)
    assert stab.in_stability_region(SP1, 3) and stab.in_stability_region(SP1, 100)
    assert stab.in_stability_region(RK(1), 0.5) and not stab.in_stability_region(RK(1), 2.5)
    assert not stab.in_stability_region(SP2MP, 4 + 2j)
    assert stab.in_stability_region(SP2MP, 4 + 2.001j)
    assert not stab.in_stability_region(SP2MP, 8)
    assert not stab.in_stability_region(SP2TR, 4 - 1j)
    with pytest.raises(UnsupportedScheme):
        stab.in_stability_region(SPM(3), 1.0)


def test_half_plane_is_enforced():
    for z in (0.0, -1.0, 1j):
        with pytest.raises(ValueError):
            stab.bloch_e_matrix(SP1, z)
    with pytest.raises(ValueError):
        stab.region_scan(SP1, [0.0, 1.0], [0.0])


def test_classify_band():
    assert stab.classify(1.0 + 5e-10) == "marginal"
    assert stab.classify(0.999) == "stable"
    assert stab.classify(1.001) == "unstable"


def test_g_polynomial_roots_and_values():
    for root in (8, 4 + 2j, 4 - 2j):
        assert abs(stab.g_polynomial(root)) <= 1e-6 * stab.g_monomial_scale(root)
    assert stab.g_polynomial(2) == pytest.approx(1_181_952)
    assert stab.g_real_axis(2) == pytest.approx(1296 * 912)


def test_g_expanded_form_matches(rng):
    for _ in range(200):
        a, b = rng.uniform(0, 20), rng.uniform(-10, 10)
        expanded = sum(c * a**i * b**j for (i, j), c in stab.G_MONOMIALS.items())
        z = complex(a, b)
        assert stab.g_polynomial(z) == pytest.approx(expanded, rel=1e-9, abs=1e-9 * stab.g_monomial_scale(z))


def test_g_real_axis_factorisation():
    for a in np.linspace(0.1, 20, 60):
        assert stab.g_polynomial(a) == pytest.approx(stab.g_real_axis(a), rel=1e-6, abs=1e-6 * stab.g_monomial_scale(a))


def test_g_sign_matches_midpoint_region(rng):
    for _ in range(300):
        z = complex(rng.uniform(0.05, 12), rng.uniform(-6, 6))
        if min(abs(z - r) for r in (8, 4 + 2j, 4 - 2j)) < 1e-3:
            continue
        alpha, beta = stab.closed_form_e(SP2MP, z)
        assert (stab.g_polynomial(z) > 0) == (alpha**2 + beta**2 < 1)


@pytest.mark.parametrize("scheme", [SP1, SP2TR, SP2MP, SPM(3)], ids=str)
def test_diagonal_is_fixed(scheme):
    for z in (0.5 + 0.2j, 3 - 2j, 7.5 + 4j):
        model = stab.dephasing_model(z.real, z.imag)
        rho = stab.bloch_state(0.3, -0.2, 0.6)
        out = step(scheme, model, 1.0, rho).state
        assert stab.bloch_vector(out)[2] == pytest.approx(0.6, abs=1e-12)


def test_region_scan_rk2_real_axis():
    points = stab.region_scan(RK(2), np.arange(0.1, 4.0, 0.1), [0.0])
    for p in points:
        if abs(p.z.real - 2) > 1e-6:
            assert p.stable == (p.z.real < 2)
        else:
            assert p.verdict == "marginal"


def test_region_scan_sp1_line():
    points = stab.region_scan(SP1, stab.scan_values("3.8:4.2:0.1"), stab.scan_values("-1:1:0.5"))
    for p in points:
        on_line = abs(p.z.real - 4) < 0.05
        assert (p.verdict != "stable") == on_line


def test_region_scan_midpoint_exclusions():
    points = stab.region_scan(SP2MP, stab.scan_values("3.9:4.1:0.1"), stab.scan_values("1.9:2.1:0.1"))
    for p in points:
        assert (p.verdict != "stable") == (abs(p.z - (4 + 2j)) < 1e-9)


def test_empirical_verdicts_agree():
    for scheme, z, expect in [(SP1, 2 + 1j, "decays"), (RK(2), 2.5 + 0j, "persists"),
                              (RK(1), 0.5 + 0.2j, "decays"), (SP2MP, 6 + 3j, "decays")]:
        assert stab.empirical_verdict(scheme, z) == expect
    pts = stab.region_scan(RK(1), [0.5, 2.5], [0.0], empirical=True)
    assert [p.empirical for p in pts] == ["decays", "persists"]


def test_scan_values():
    assert np.allclose(stab.scan_values("0:1:0.25"), [0, 0.25, 0.5, 0.75, 1])
    with pytest.raises(ValueError):
        stab.scan_values("1:0:0.1")
