import math

import numpy as np
import pytest

from quadosc import (DpoModel, InceForm, KineticDegenerate, OscillatorParams,
                     TruncationTooSmall, characteristic_form,
                     classify_periodicity, convergence_to_csv, fourier_trial,
                     periodicity_polynomials, report_to_json, to_ince_form,
                     trial_convergence)


def poly(coeffs, xi):
    c2, c1, c0 = coeffs
    return c2 * xi**2 + c1 * xi + c0


def test_ince_form_values():
    form = to_ince_form(OscillatorParams(omega=1.0, lam=0.5))
    assert form.a0 == pytest.approx(0.5, abs=1e-12)
    assert form.b0 == pytest.approx(1.0, abs=1e-12)
    assert form.c0 == pytest.approx(0.25, abs=1e-12)
    assert form.d0 == pytest.approx(-0.625, abs=1e-12)
    zero = to_ince_form(OscillatorParams(omega=1.0, lam=0.0))
    assert (zero.a0, zero.b0, zero.c0, zero.d0) == (0.0, 0.0, 1.0, 0.0)
    with pytest.raises(KineticDegenerate):
        to_ince_form(OscillatorParams(omega=1.0, lam=1.0))


def test_ince_form_roundtrip_to_characteristic():
    # the rescaled Ince coefficients must reproduce tau and sigma
    p = OscillatorParams(omega=2.0, lam=0.8)
    ince = to_ince_form(p)
    char = characteristic_form(DpoModel(p))
    w = p.omega
    for t in np.linspace(0.01, 2.5, 37):
        s = w * t
        denom = 1.0 + ince.a0 * math.cos(2 * s)
        mu1_coeff = w * ince.b0 * math.sin(2 * s) / denom
        mu_coeff = w * w * (ince.c0 + ince.d0 * math.cos(2 * s)) / denom
        assert -char.tau(t) == pytest.approx(mu1_coeff, abs=1e-10)
        assert 4.0 * char.sigma(t) == pytest.approx(mu_coeff, abs=1e-10)


def test_periodicity_polynomials_values():
    form = to_ince_form(OscillatorParams(omega=1.0, lam=0.5))
    p, q = periodicity_polynomials(form)
    assert poly(p, 0.0) == pytest.approx(0.3125, abs=1e-12)
    assert poly(p, 0.5) == pytest.approx(0.0625, abs=1e-12)
    assert poly(q, 1.0) == pytest.approx(0.125, abs=1e-12)


def test_q_is_shifted_p_as_polynomial():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a0, b0, c0, d0 = rng.uniform(-0.9, 0.9, 4)
        form = InceForm(a0=a0, b0=b0, c0=c0, d0=d0)
        p, q = periodicity_polynomials(form)
        for xi in rng.uniform(-5, 5, 10):
            assert poly(q, xi) == pytest.approx(2 * poly(p, xi - 0.5),
                                                rel=1e-12, abs=1e-12)


def test_completed_square_identity():
    rng = np.random.default_rng(4)
    for r in rng.uniform(0.01, 0.99, 20):
        form = to_ince_form(OscillatorParams(omega=1.0, lam=r))
        p, q = periodicity_polynomials(form)
        for xi in rng.uniform(-8, 8, 100):
            assert poly(p, xi) == pytest.approx(
                2 * r * ((xi - 0.5) ** 2 + r**2 / 4), rel=1e-12, abs=1e-12)
            assert poly(q, xi) == pytest.approx(
                4 * r * ((xi - 1.0) ** 2 + r**2 / 4), rel=1e-12, abs=1e-12)


def test_classify_dpo_ruled_out():
    form = to_ince_form(OscillatorParams(omega=1.0, lam=0.3))
    report = classify_periodicity(form)
    assert not report.pi_pair_possible
    assert not report.two_pi_pair_possible
    assert not report.degenerate
    assert report.p_min == pytest.approx(0.6 * 0.0225, abs=1e-12)
    assert report.q_min == pytest.approx(1.2 * 0.0225, abs=1e-12)


def test_classify_test_form_possible():
    form = InceForm(a0=0.3, b0=0.6, c0=1.0, d0=0.0)
    report = classify_periodicity(form)
    assert 0 in report.p_integer_zeros
    assert 1 in report.p_integer_zeros
    assert report.pi_pair_possible
    assert not report.two_pi_pair_possible


def test_classify_degenerate():
    form = to_ince_form(OscillatorParams(omega=1.0, lam=0.0))
    report = classify_periodicity(form)
    assert report.degenerate
    assert report.pi_pair_possible and report.two_pi_pair_possible


def test_classify_scale_invariance():
    r1 = classify_periodicity(to_ince_form(OscillatorParams(omega=1.0, lam=0.3)))
    r2 = classify_periodicity(to_ince_form(OscillatorParams(omega=2.5, lam=0.75)))
    assert r1.p_coeffs == pytest.approx(r2.p_coeffs, rel=1e-14)
    assert r1.p_min == pytest.approx(r2.p_min, rel=1e-14)
    assert r1.pi_pair_possible == r2.pi_pair_possible
    assert r1.two_pi_pair_possible == r2.two_pi_pair_possible


def test_classify_large_integer_root_caught_by_closed_form():
    # P = xi^2 - b0 xi has roots 0 and b0 = 120, beyond the scan range:
    # the quadratic-formula check must still flag it
    form = InceForm(a0=0.5, b0=120.0, c0=1.0, d0=0.0)
    report = classify_periodicity(form, xi_max=50)
    assert report.pi_pair_possible
    assert 120 in report.p_integer_zeros


def test_report_json():
    import json
    form = to_ince_form(OscillatorParams(omega=1.0, lam=0.5))
    obj = json.loads(report_to_json(classify_periodicity(form)))
    assert obj["pi_pair_possible"] is False
    assert obj["p_min"] == pytest.approx(0.0625)


def test_trial_exact_harmonic_cosine():
    form = InceForm(a0=0.0, b0=0.0, c0=1.0, d0=0.0)
    trial = fourier_trial(form, "cos-2pi", 8)
    assert trial.residual_norm <= 1e-12
    # solution is cos(s): all weight on the first harmonic
    assert trial.coefficients[0] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(trial.coefficients[1:])) <= 1e-12


def test_trial_exact_periodic_pair_c0_equals_4():
    # d0 = 0, b0 = 2 a0 and c0 = 4 admit the exact pi-periodic pair
    # sin(2s) and (a0/2 c0 ... ) checked via the defect oracle
    form = InceForm(a0=0.3, b0=0.6, c0=4.0, d0=0.0)
    for kind in ("sin-pi", "cos-pi"):
        for order in (8, 64):
            trial = fourier_trial(form, kind, order)
            assert trial.residual_norm <= 1e-8


def test_trial_no_periodic_solution_for_c0_equals_1():
    # integer zeros of P are necessary, not sufficient: this form passes
    # the P test yet its trial residual stays O(1) at every order
    form = InceForm(a0=0.3, b0=0.6, c0=1.0, d0=0.0)
    for order in (8, 16, 32, 64):
        trial = fourier_trial(form, "sin-pi", order)
        assert trial.residual_norm > 1e-3


def test_trial_dpo_stays_nonperiodic():
    form = to_ince_form(OscillatorParams(omega=1.0, lam=0.5))
    for kind in ("cos-pi", "sin-pi", "cos-2pi", "sin-2pi"):
        for order in (8, 16, 32, 64):
            trial = fourier_trial(form, kind, order)
            assert trial.residual_norm > 1e-3


def test_trial_normalization_and_svd_consistency():
    for form in (to_ince_form(OscillatorParams(omega=1.0, lam=0.5)),
                 InceForm(a0=0.3, b0=0.6, c0=4.0, d0=0.0)):
        for kind in ("cos-pi", "sin-2pi"):
            trial = fourier_trial(form, kind, 24)
            assert np.linalg.norm(trial.coefficients) == pytest.approx(1.0,
                                                                       abs=1e-12)
            first = trial.coefficients[np.argmax(
                np.abs(trial.coefficients) > 1e-12)]
            assert first > 0
            assert trial.matrix_defect <= 1e-10 * trial.matrix_norm
            assert len(trial.coefficients) == trial.order + 1


def test_trial_truncation_too_small():
    form = to_ince_form(OscillatorParams(omega=1.0, lam=0.5))
    with pytest.raises(TruncationTooSmall):
        fourier_trial(form, "sin-pi", 3)
    with pytest.raises(ValueError):
        fourier_trial(form, "sin-3pi", 8)


def test_trial_convergence_table_csv(tmp_path):
    form = InceForm(a0=0.3, b0=0.6, c0=4.0, d0=0.0)
    rows = trial_convergence(form, "sin-pi", [8, 16])
    path = tmp_path / "conv.csv"
    convergence_to_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("order")
    assert len(lines) == 3
    assert int(lines[1].split(",")[0]) == 8
