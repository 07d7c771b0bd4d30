import json
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vakhnenko.bilinear import (combined_bilinear_residual, combined_residual_poly,
                                derive_coefficients, exact_bilinear_residual, pde_residual,
                                pde_terms, verification_report)
from vakhnenko.errors import DomainError
from vakhnenko.exppoly import ExpPoly, PhaseBasis
from vakhnenko.soliton import (SolitonParams, TauFunction, UncertifiedTauWarning,
                               build_one_soliton, build_two_soliton, solve_wavenumber)


def one_soliton_F(alpha, v, omega_factor=1.0):
    K = solve_wavenumber(alpha, v)
    basis = PhaseBasis.of((K, omega_factor * K * v))
    return ExpPoly(basis, {(0, 0): 1.0, (2, 0): 1.0})


def uncertified_two_soliton(alpha, v1, v2, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UncertifiedTauWarning)
        return build_two_soliton(alpha, v1, v2, strict=False, **kw)[1]


# -- combined residual --------------------------------------------------------------

def test_vacuum_passes():
    r = combined_bilinear_residual(ExpPoly.constant(PhaseBasis.of((1.0, 0.2))), 0.5)
    assert r.passed and r.max_relative_coefficient == 0.0


def test_perturbed_dispersion_is_detected():
    r = combined_bilinear_residual(one_soliton_F(0.5, 0.24, 1.1), 0.5)
    assert not r.passed and r.offending_exponent is not None


def test_one_soliton_residual_closed_form():
    # R = -8K^2 E (1+E) [(2(a+2K)w - 1) + (2(2K-a)w - 1) E] with E = exp(2 eta)
    alpha, v = 0.5, 0.24
    F = one_soliton_F(alpha, v)
    K, w = F.basis.modes[0].K, F.basis.modes[0].omega
    b0 = 2 * (alpha + 2 * K) * w - 1
    b1 = 2 * (2 * K - alpha) * w - 1
    R = combined_residual_poly(F, alpha)
    want = {(2, 0): -8 * K * K * b0, (4, 0): -8 * K * K * (b0 + b1), (6, 0): -8 * K * K * b1}
    for key, c in want.items():
        assert R.coefficient(key) == pytest.approx(c, abs=1e-12)
    assert set(R.keys()) <= set(want)


def test_combined_residual_rejects_nonpositive_alpha():
    with pytest.raises(DomainError):
        combined_bilinear_residual(one_soliton_F(0.5, 0.24), 0.0)


def test_report_json():
    r = combined_bilinear_residual(one_soliton_F(0.5, 0.24), 0.5)
    d = json.loads(r.to_json())
    assert d["passed"] is False and d["offending_exponent"] == [6, 0]


# -- exact model ----------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.floats(0, 3), st.floats(0.05, 0.3))
def test_exact_one_soliton_certifies(alpha, v):
    _, tau = build_one_soliton(alpha, v, dispersion="exact")
    assert exact_bilinear_residual(tau.F, alpha).passed


@pytest.mark.parametrize("alpha", [0.1, 1.2, 2.6])
def test_exact_two_soliton_solves_pde(alpha):
    _, tau = build_two_soliton(alpha, 0.24, 0.12, dispersion="exact")
    assert pde_residual(tau).grid_max_abs <= 1e-8


def test_exact_bilinear_and_pde_agree_on_coupled_taus():
    # the single bilinear form is F^2 times the transformed equation
    for tau in (build_one_soliton(0.5, 0.24)[1], uncertified_two_soliton(1.2, 0.24, 0.12)):
        assert not exact_bilinear_residual(tau.F, tau.alpha).passed
        assert not pde_residual(tau).passed


# -- pde residual -----------------------------------------------------------------------

def test_pde_residual_vacuum():
    params, _ = build_one_soliton(0.5, 0.24)
    tau = TauFunction(F=ExpPoly.constant(params.basis()), params=params)
    assert pde_residual(tau).grid_max_abs == 0.0


def test_pde_residual_coupled_one_soliton_matches_closed_form():
    # residual of 1 + exp(2 eta) is -24 K (4K^2 w - K + a w) E / (1+E)^2, largest at eta = 0
    alpha, v = 5 / 6, 0.24
    params, tau = build_one_soliton(alpha, v)
    m = params.modes[0]
    peak = 6 * m.K * abs(4 * m.K ** 2 * m.omega - m.K + alpha * m.omega)
    r = pde_residual(tau, shape=(201, 201))
    assert r.grid_max_abs == pytest.approx(peak, rel=1e-4)
    assert not r.passed


def test_pde_terms_match_finite_differences():
    tau = uncertified_two_soliton(1.2, 0.24, 0.12)
    X, T, h = 0.7, -1.3, 1e-4
    t = pde_terms(tau, X, T)
    W = lambda x, s: float(tau.W(x, s))
    assert t["W"] == pytest.approx(W(X, T), rel=1e-13)
    assert t["W_X"] == pytest.approx((W(X + h, T) - W(X - h, T)) / (2 * h), rel=1e-7)
    assert t["W_T"] == pytest.approx((W(X, T + h) - W(X, T - h)) / (2 * h), rel=1e-7)
    Wx = lambda x, s: float(tau.U(x, s))
    WXT = lambda x: (Wx(x, T + h) - Wx(x, T - h)) / (2 * h)
    assert t["W_XXT"] == pytest.approx((WXT(X + h) - WXT(X - h)) / (2 * h), rel=1e-4)


def test_quotient_and_hirota_paths_agree():
    tau = uncertified_two_soliton(2.6, 0.24, 0.12)
    X, T = np.meshgrid(np.linspace(-5, 5, 11), np.linspace(-20, 20, 11))
    t = pde_terms(tau, X, T)
    np.testing.assert_allclose(t["W_X"], tau.U(X, T), rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(t["W_T"], tau.W_T(X, T), rtol=1e-9, atol=1e-12)


def test_worst_node_reported():
    r = pde_residual(build_one_soliton(0.5, 0.24)[1])
    X, T = r.worst_node
    assert -10 <= X <= 10 and -10 <= T <= 10


# -- coefficient oracle ---------------------------------------------------------------

def test_derive_A_B_match_closed_forms():
    rep = derive_coefficients(SolitonParams.from_velocities(1.2, [0.24, 0.12]))
    assert rep.formula_agrees[:2] == (True, True)
    for solved, printed in zip(rep.solved[:2], rep.printed[:2]):
        assert solved == pytest.approx(printed, rel=1e-10)


def test_derive_C_frozen_value():
    rep = derive_coefficients(SolitonParams.from_velocities(1.2, [0.24, 0.12]))
    assert rep.solved[2] == pytest.approx(0.19251067133307473, rel=1e-12)
    assert rep.printed[2] == pytest.approx(0.26013709293465187, rel=1e-12)
    assert rep.formula_agrees[2] is False
    assert not rep.consistent
    assert rep.residual.offending_exponent == (4, 4)


def test_derive_C_small_alpha_limit():
    p = SolitonParams.from_velocities(1e-7, [0.24, 0.12])
    K1, K2 = p.modes[0].K, p.modes[1].K
    want = ((K1 - K2) ** 2 * (K1 * K1 - K1 * K2 + K2 * K2)
            / ((K1 + K2) ** 2 * (K1 * K1 + K1 * K2 + K2 * K2)))
    assert derive_coefficients(p).solved[2] == pytest.approx(want, rel=1e-5)


def test_derive_requires_two_modes():
    with pytest.raises(DomainError):
        derive_coefficients(SolitonParams.from_velocities(1.2, [0.24]))


def test_verification_report_structure():
    rep = verification_report(1.2, 0.24, 0.12)
    assert set(rep["checks"]) == {"combined", "pde", "combined_literal_form"}
    assert rep["coefficients"]["formula_agrees"]["C"] is False
    assert rep["exact_reference"]["passed"] is True
    json.dumps(rep)
