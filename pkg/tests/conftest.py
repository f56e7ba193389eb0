import numpy as np
import pytest

from quadosc import (DpoModel, OscillatorParams, characteristic_form,
                     solve_standard_pair)


@pytest.fixture(scope="session")
def params_harmonic():
    return OscillatorParams(omega=1.0, lam=0.0)


@pytest.fixture(scope="session")
def params_dpo02():
    return OscillatorParams(omega=1.0, lam=0.2)


@pytest.fixture(scope="session")
def params_dpo05():
    return OscillatorParams(omega=1.0, lam=0.5)


@pytest.fixture(scope="session")
def params_special():
    return OscillatorParams(omega=1.0, lam=1.0)


@pytest.fixture(scope="session")
def sol_harmonic(params_harmonic):
    form = characteristic_form(DpoModel(params_harmonic))
    return solve_standard_pair(form, None, t_max=2 * np.pi + 0.5)


@pytest.fixture(scope="session")
def sol_dpo02(params_dpo02):
    form = characteristic_form(DpoModel(params_dpo02))
    return solve_standard_pair(form, None, t_max=3.2)


@pytest.fixture(scope="session")
def sol_dpo05(params_dpo05):
    form = characteristic_form(DpoModel(params_dpo05))
    return solve_standard_pair(form, None, t_max=3.2)


@pytest.fixture(scope="session")
def sol_special(params_special):
    # a(t) = cos^2 t vanishes at pi/2; stay inside
    form = characteristic_form(DpoModel(params_special))
    return solve_standard_pair(form, None, t_max=1.45)
