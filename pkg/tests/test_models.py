import json
import math

import numpy as np
import pytest

from quadosc import (DpoModel, GenericModel, NonFiniteCoefficient,
                     OscillatorParams, PumpOutOfDomain, PumpSchedule,
                     RaifordModel, dpo_coefficients, generic_coefficients,
                     model_from_json, model_to_json, raiford_coefficients)


def test_dpo_at_zero():
    p = OscillatorParams(omega=1.0, lam=0.2)
    co = dpo_coefficients(p, 0.0)
    assert co.a == pytest.approx(0.6, abs=1e-15)
    assert co.b == pytest.approx(0.4, abs=1e-15)
    assert co.c == 0.0 and co.d == 0.0


def test_dpo_harmonic_limit():
    p = OscillatorParams(omega=1.0, lam=0.0)
    for t in (0.0, 0.3, 2.7):
        co = dpo_coefficients(p, t)
        assert co.a == pytest.approx(0.5, abs=1e-15)
        assert co.b == pytest.approx(0.5, abs=1e-15)
        assert co.c == 0.0


def test_dpo_quarter_period():
    # 2wt = pi/2: cos term gone, cross term maximal
    p = OscillatorParams(omega=1.0, lam=0.5)
    co = dpo_coefficients(p, math.pi / 4)
    assert co.a == pytest.approx(0.5, abs=1e-12)
    assert co.b == pytest.approx(0.5, abs=1e-12)
    assert co.c == pytest.approx(0.25, abs=1e-12)
    assert co.d == pytest.approx(0.25, abs=1e-12)
    assert co.da == pytest.approx(-0.5, abs=1e-12)
    assert co.dc == pytest.approx(0.0, abs=1e-12)


def test_dpo_coefficient_bounds_over_period():
    p = OscillatorParams(omega=1.3, lam=0.6, m=2.0, hbar=0.7)
    r = p.lam / p.omega
    lo = p.hbar * (1 - r) / (2 * p.m)
    hi = p.hbar * (1 + r) / (2 * p.m)
    for t in np.linspace(0.0, 2 * np.pi / p.omega, 200):
        co = dpo_coefficients(p, t)
        assert lo - 1e-12 <= co.a <= hi + 1e-12


def test_dpo_product_identity():
    # a b (2m/hbar)(2hbar/m w^2) + (lam/w)^2 cos^2(2wt) = 1
    rng = np.random.default_rng(7)
    p = OscillatorParams(omega=1.4, lam=0.9, m=1.7, hbar=2.1)
    r = p.lam / p.omega
    for t in rng.uniform(-5, 5, 100):
        co = dpo_coefficients(p, t)
        lhs = co.a * co.b * 4.0 / p.omega**2 + r**2 * math.cos(2 * p.omega * t) ** 2
        assert lhs == pytest.approx(1.0, abs=1e-12)


def test_dpo_derivative_matches_central_difference():
    rng = np.random.default_rng(3)
    p = OscillatorParams(omega=0.9, lam=0.4, m=1.2, hbar=1.1)
    h = 1e-6
    for t in rng.uniform(0, 6, 20):
        co = dpo_coefficients(p, t)
        fd_a = (dpo_coefficients(p, t + h).a - dpo_coefficients(p, t - h).a) / (2 * h)
        fd_c = (dpo_coefficients(p, t + h).c - dpo_coefficients(p, t - h).c) / (2 * h)
        assert co.da == pytest.approx(fd_a, abs=1e-6)
        assert co.dc == pytest.approx(fd_c, abs=1e-6)


def test_raiford_constant_pump_equals_dpo():
    p = OscillatorParams(omega=1.1, lam=0.35, m=0.8, hbar=1.3)
    pump = PumpSchedule.constant(p.lam)
    for t in np.linspace(0.0, 7.0, 50):
        assert raiford_coefficients(p, pump, t) == dpo_coefficients(p, t)


def test_raiford_detuned_at_zero():
    p = OscillatorParams(omega=1.0, lam=0.2)
    pump = PumpSchedule.detuned(0.2, detuning=0.1)
    assert pump.phase(0.0) == 0.0
    co = raiford_coefficients(p, pump, 0.0)
    assert co.a == pytest.approx(0.6, abs=1e-15)
    assert co.b == pytest.approx(0.4, abs=1e-15)
    assert co.c == pytest.approx(0.0, abs=1e-15)


def test_raiford_pump_off():
    p = OscillatorParams(omega=1.6, lam=0.5, m=1.9, hbar=0.6)
    pump = PumpSchedule.constant(0.0)
    for t in (0.0, 0.9, 4.4):
        co = raiford_coefficients(p, pump, t)
        assert co.a == pytest.approx(p.hbar / (2 * p.m), abs=1e-15)
        assert co.b == pytest.approx(p.m * p.omega**2 / (2 * p.hbar), abs=1e-15)
        assert co.c == 0.0 and co.d == 0.0


def test_raiford_derivatives_by_chain_rule():
    p = OscillatorParams(omega=1.0, lam=0.3)
    pump = PumpSchedule.detuned(0.3, detuning=0.25)
    h = 1e-6
    for t in (0.2, 1.7):
        co = raiford_coefficients(p, pump, t)
        fd_a = (raiford_coefficients(p, pump, t + h).a
                - raiford_coefficients(p, pump, t - h).a) / (2 * h)
        fd_c = (raiford_coefficients(p, pump, t + h).c
                - raiford_coefficients(p, pump, t - h).c) / (2 * h)
        assert co.da == pytest.approx(fd_a, abs=1e-6)
        assert co.dc == pytest.approx(fd_c, abs=1e-6)


def test_tabulated_pump_domain_and_values():
    ts = np.linspace(0.0, 2.0, 21)
    pump = PumpSchedule.tabulated(ts, 0.2 + 0.05 * ts, phases=0.1 * ts**2)
    assert pump.amplitude(1.0) == pytest.approx(0.25, abs=1e-12)
    assert pump.dphase(1.0) == pytest.approx(0.2, abs=1e-9)
    with pytest.raises(PumpOutOfDomain):
        pump.amplitude(2.5)
    p = OscillatorParams(omega=1.0, lam=0.2)
    with pytest.raises(PumpOutOfDomain):
        raiford_coefficients(p, pump, -0.1)


def test_generic_constant_harmonic():
    co = generic_coefficients(lambda t: 0.5, lambda t: 0.5,
                              lambda t: 0.0, lambda t: 0.0, 1.3)
    assert (co.a, co.b, co.c, co.d) == (0.5, 0.5, 0.0, 0.0)
    assert co.da == pytest.approx(0.0, abs=1e-9)


def test_generic_analytic_derivative():
    co = generic_coefficients(lambda t: math.cos(t) ** 2, lambda t: 0.5,
                              lambda t: 0.0, lambda t: 0.0, 1.0,
                              user_da=lambda t: -math.sin(2 * t))
    assert co.da == pytest.approx(-math.sin(2.0), abs=1e-15)
    # and the central-difference fallback agrees
    co_fd = generic_coefficients(lambda t: math.cos(t) ** 2, lambda t: 0.5,
                                 lambda t: 0.0, lambda t: 0.0, 1.0)
    assert co_fd.da == pytest.approx(-math.sin(2.0), abs=1e-6)


def test_generic_nonfinite_raises():
    with pytest.raises(NonFiniteCoefficient):
        generic_coefficients(lambda t: float("nan"), lambda t: 0.5,
                             lambda t: 0.0, lambda t: 0.0, 0.5)


def test_params_validation():
    with pytest.raises(ValueError):
        OscillatorParams(omega=-1.0, lam=0.1)
    with pytest.raises(ValueError):
        OscillatorParams(omega=1.0, lam=-0.1)
    with pytest.raises(ValueError):
        OscillatorParams(omega=1.0, lam=0.1, m=0.0)
    assert OscillatorParams(omega=1.0, lam=1.2).kinetic_degenerate
    assert not OscillatorParams(omega=1.0, lam=0.9).kinetic_degenerate


def test_model_json_roundtrip():
    doc = {"model": "dpo", "m": 1.5, "omega": 2.0, "lambda": 0.4, "hbar": 0.9}
    model = model_from_json(doc)
    assert isinstance(model, DpoModel)
    assert model_to_json(model) == doc

    doc2 = {"model": "raiford", "m": 1.0, "omega": 1.0, "lambda": 0.2,
            "hbar": 1.0, "pump": {"kind": "detuned", "amplitude": 0.2,
                                  "detuning": 0.1}}
    model2 = model_from_json(doc2)
    assert isinstance(model2, RaifordModel)
    back = model_to_json(model2)
    assert back["pump"]["detuning"] == pytest.approx(0.1)


def test_model_json_generic_and_errors():
    model = model_from_json({"model": "generic", "a": "0.5", "b": "0.5",
                             "c": "0.0", "d": "0.0"})
    assert isinstance(model, GenericModel)
    assert model.coefficients(0.7).a == 0.5
    with pytest.raises(ValueError):
        model_from_json({"model": "dpo", "omega": 1.0, "bogus": 3})
    with pytest.raises(ValueError):
        model_from_json({"model": "unknown"})
    with pytest.raises(ValueError):
        model_from_json(json.loads("[1, 2]"))
