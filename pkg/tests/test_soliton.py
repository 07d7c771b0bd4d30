import json
import math
import warnings

import numpy as np
import pytest
from scipy.special import expit
from hypothesis import given, settings, strategies as st

from vakhnenko.errors import CertificationError, DomainError, NonPositiveTauError
from vakhnenko.exppoly import ExpPoly
from vakhnenko.soliton import (SolitonMode, SolitonParams, TauFunction, UncertifiedTauWarning,
                               build_one_soliton, build_two_soliton, dispersion_residual,
                               eval_U, eval_W, exact_phase_shift, interaction_coefficients,
                               solve_wavenumber, two_soliton_poly)


# -- wave number ------------------------------------------------------------------

def test_wavenumber_alpha_zero():
    assert solve_wavenumber(0.0, 1.0) == pytest.approx(0.5, rel=1e-15)


def test_wavenumber_cusp_value():
    K = solve_wavenumber(5 / 6, 0.24)
    assert K == pytest.approx(1 / math.sqrt(6 * 0.24), rel=1e-14)
    assert abs(2 * (5 / 6 + 2 * K) * K * 0.24 - 1) < 1e-12


def test_wavenumber_matches_quadratic_roots():
    roots = np.roots([0.96, 0.576, -1.0])
    want = roots[roots > 0][0].real
    assert solve_wavenumber(1.2, 0.24) == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("v", [0.0, -1.0, float("nan"), float("inf")])
def test_wavenumber_rejects_bad_velocity(v):
    with pytest.raises(DomainError):
        solve_wavenumber(0.5, v)


def test_wavenumber_rejects_negative_alpha():
    with pytest.raises(DomainError):
        solve_wavenumber(-0.1, 0.5)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 10), st.floats(1e-3, 50))
def test_dispersion_invariants_hold(alpha, v):
    K = solve_wavenumber(alpha, v)
    assert K > 0
    assert abs(dispersion_residual(alpha, K, K * v)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 10), st.floats(1e-3, 10))
def test_exact_dispersion_invariant(alpha, v):
    if alpha * v >= 1:
        with pytest.raises(DomainError):
            solve_wavenumber(alpha, v, "exact")
        return
    K = solve_wavenumber(alpha, v, "exact")
    assert abs(dispersion_residual(alpha, K, K * v, "exact")) <= 1e-12


def test_models_coincide_without_dissipation():
    for v in (0.05, 0.3, 2.0):
        assert solve_wavenumber(0, v) == pytest.approx(solve_wavenumber(0, v, "exact"), rel=1e-14)


# -- params -----------------------------------------------------------------------

def test_params_reject_broken_dispersion():
    K = solve_wavenumber(0.5, 0.24)
    with pytest.raises(DomainError):
        SolitonParams(0.5, (SolitonMode(0.24, K, 1.1 * K * 0.24),))


def test_params_reject_three_modes():
    with pytest.raises(DomainError):
        SolitonParams.from_velocities(0.5, [0.1, 0.2, 0.3])


def test_params_round_trip():
    p = SolitonParams.from_velocities(1.2, [0.24, 0.12], [0.5, -1.0])
    assert SolitonParams.from_dict(json.loads(json.dumps(p.to_dict()))) == p
    assert p.kind == "two-soliton"


# -- one-soliton ------------------------------------------------------------------

def test_one_soliton_terms():
    _, tau = build_one_soliton(0.5, 0.24, eta0=0.3)
    assert list(tau.F.keys()) == [(0, 0), (2, 0)]
    assert tau.F.coefficient((0, 0)) == 1.0


def test_one_soliton_peak_on_zero_phase_locus():
    params, tau = build_one_soliton(0.5, 0.24)
    m = params.modes[0]
    T = 3.0
    X = np.linspace(-10, 20, 30001)
    Xpk = X[np.argmax(tau.U(X, T))]
    assert Xpk == pytest.approx(m.omega * T / m.K, abs=1e-3)


def test_values_at_zero_phase():
    params, tau = build_one_soliton(1.2, 0.24)
    K = params.modes[0].K
    assert eval_U(tau, 0.0, 0.0) == pytest.approx(6 * K * K, rel=1e-14)
    assert eval_W(tau, 0.0, 0.0) == pytest.approx(6 * K, rel=1e-14)


def test_far_field_vanishes():
    _, tau = build_one_soliton(1.2, 0.24)
    assert abs(eval_W(tau, -200.0, 0.0)) < 1e-100
    assert abs(eval_U(tau, -200.0, 0.0)) < 1e-100
    assert eval_W(tau, 2000.0, 0.0) == pytest.approx(12 * tau.params.modes[0].K)


@pytest.mark.parametrize("alpha,v", [(0.1, 0.05), (5 / 6, 0.24), (1.2, 0.24), (5.0, 1.0)])
def test_closed_forms(alpha, v):
    params, tau = build_one_soliton(alpha, v, eta0=0.4)
    m = params.modes[0]
    rng = np.random.default_rng(7)
    X = rng.uniform(-30, 30, 1000)
    T = rng.uniform(-30, 30, 1000)
    eta = m.K * X - m.omega * T + m.eta0
    # 1 + tanh(eta) == 2 expit(2 eta), without the cancellation for eta << 0
    np.testing.assert_allclose(eval_W(tau, X, T), 12 * m.K * expit(2 * eta), rtol=1e-10)
    np.testing.assert_allclose(eval_U(tau, X, T), 6 * m.K ** 2 / np.cosh(eta) ** 2, rtol=1e-10)
    np.testing.assert_allclose(tau.W_T(X, T), -6 * m.K * m.omega / np.cosh(eta) ** 2, rtol=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 5), st.floats(0.02, 2), st.floats(-20, 20))
def test_U_nonnegative_and_W_increasing(alpha, v, T):
    _, tau = build_one_soliton(alpha, v)
    X = np.linspace(-50, 50, 401)
    assert np.all(tau.U(X, T) >= 0)
    assert np.all(np.diff(tau.W(X, T)) >= 0)


def test_nonpositive_tau_detected():
    params, _ = build_one_soliton(0.5, 0.24)
    bad = TauFunction(F=ExpPoly(params.basis(), {(0, 0): 1.0, (2, 0): -1.0}), params=params)
    with pytest.raises(NonPositiveTauError, match="X="):
        bad.W(np.array([0.0, 1.0]), 0.0)


def test_one_soliton_certifies_only_in_exact_model():
    _, tau = build_one_soliton(0.5, 0.24, dispersion="exact")
    assert tau.certify().passed
    _, tau = build_one_soliton(0.0001, 0.24)
    # the coupled residual is O(alpha): small but nonzero
    r = tau.certify()
    assert 0 < r.max_relative_coefficient < 1e-3


# -- interaction coefficients -----------------------------------------------------

def test_coefficients_vanish_with_alpha():
    A, B, C = interaction_coefficients(SolitonParams.from_velocities(1e-9, [0.24, 0.12]))
    assert abs(A) < 1e-9 and abs(B) < 1e-9
    assert math.isfinite(C)


def test_coefficients_formula():
    p = SolitonParams.from_velocities(1.2, [0.24, 0.12])
    A, B, C = interaction_coefficients(p)
    K1, K2 = p.modes[0].K, p.modes[1].K
    assert A == pytest.approx(1.2 / (2 * (1.2 + 6 * K1)), rel=1e-15)
    assert B == pytest.approx(1.2 / (2 * (1.2 + 6 * K2)), rel=1e-15)
    assert C == pytest.approx(0.26013709293465187, rel=1e-12)


def test_coefficients_need_two_modes_and_alpha():
    with pytest.raises(DomainError):
        interaction_coefficients(SolitonParams.from_velocities(1.2, [0.24]))
    with pytest.raises(DomainError):
        interaction_coefficients(SolitonParams.from_velocities(0.0, [0.24, 0.12]))


def test_exact_phase_shift_without_dissipation():
    p = SolitonParams.from_velocities(0.0, [0.24, 0.12], dispersion="exact")
    K1, K2 = p.modes[0].K, p.modes[1].K
    want = ((K1 - K2) ** 2 * (K1 * K1 - K1 * K2 + K2 * K2)
            / ((K1 + K2) ** 2 * (K1 * K1 + K1 * K2 + K2 * K2)))
    assert exact_phase_shift(p) == pytest.approx(want, rel=1e-12)


# -- two-soliton ------------------------------------------------------------------

def test_two_soliton_strict_raises():
    with pytest.raises(CertificationError) as info:
        build_two_soliton(1.2, 0.24, 0.12)
    assert info.value.report is not None and not info.value.report.passed


def test_two_soliton_non_strict_warns_and_attaches_report():
    with pytest.warns(UncertifiedTauWarning):
        _, tau = build_two_soliton(1.2, 0.24, 0.12, strict=False)
    assert tau.certificate is not None and not tau.certificate.passed
    assert tau.kind == "two-soliton"
    assert set(tau.F.keys()) == {(0, 0), (2, 0), (0, 2), (4, 0), (0, 4), (2, 2)}


def test_two_soliton_exact_model_certifies():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        params, tau = build_two_soliton(1.2, 0.24, 0.12, dispersion="exact")
    assert tau.certificate.passed
    assert tau.coefficients[:2] == (0.0, 0.0)


def test_two_soliton_reorders_modes(caplog):
    with pytest.warns(UncertifiedTauWarning):
        params, _ = build_two_soliton(1.2, 0.12, 0.24, eta10=1.0, strict=False)
    assert [m.v for m in params.modes] == [0.24, 0.12]
    assert params.modes[1].eta0 == 1.0
    assert "reordering" in caplog.text


def test_two_soliton_degenerate_velocities():
    with pytest.raises(DomainError):
        build_two_soliton(1.2, 0.2, 0.2, strict=False)


def test_deleting_second_mode_recovers_one_soliton():
    params = SolitonParams.from_velocities(1.2, [0.24, 0.12])
    A, B, C = interaction_coefficients(params)
    F2 = two_soliton_poly(params.basis(), A, B, C)
    kept = ExpPoly(F2.basis, {k: c for k, c in F2 if k[1] == 0 and k[0] <= 2})
    _, tau1 = build_one_soliton(1.2, 0.24)
    assert dict(kept.terms) == {(0, 0): 1.0, (2, 0): 1.0}
    assert [c for _, c in kept] == [c for _, c in tau1.F]


def test_literal_form_uses_first_power_of_second_phase():
    params = SolitonParams.from_velocities(1.2, [0.24, 0.12])
    F = two_soliton_poly(params.basis(), 0.1, 0.2, 0.3, form="literal")
    assert (0, 1) in F.keys() and (2, 0) not in F.keys()


def test_tau_to_dict_is_json():
    with pytest.warns(UncertifiedTauWarning):
        _, tau = build_two_soliton(2.6, 0.24, 0.12, strict=False)
    d = json.loads(json.dumps(tau.to_dict()))
    assert d["kind"] == "two-soliton" and set(d["coefficients"]) == {"A", "B", "C"}
