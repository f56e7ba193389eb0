"""Characteristic equation of the propagator and its standard solution pair.

For a coefficient model (a, b, c, d) the characteristic equation reads

    mu'' - tau(t) mu' + 4 sigma(t) mu = 0,
    tau   = a'/a + 2c - 2d,
    sigma = a b - c d + a' c / (2 a) - c'/2,

integrated together with the integrating factor lam_f' = (c - d) lam_f,
lam_f(0) = 1.  The standard pair is fixed by

    mu0(0) = 0, mu0'(0) = 2 a(0)      and      mu1(0) != 0, mu1'(0) = 0.

sigma is the algebraic rewrite of the textbook form with the spurious c = 0
singularity removed.  By Abel's theorem the Wronskian W = mu0 mu1' - mu0' mu1
equals -2 mu1(0) lam_f(t)^2 a(t); the residual of that identity is the
solver's consistency gate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import KineticDegenerate, StepSizeUnderflow, ToleranceNotMet
from .models import QuadraticCoefficients

__all__ = [
    "CharacteristicForm",
    "CharacteristicSolution",
    "characteristic_form",
    "solve_standard_pair",
    "wronskian_residual",
    "solution_to_csv",
]

_A_FLOOR = 1e-12


class CharacteristicForm:
    """tau(t), sigma(t) evaluated on demand from a coefficient model."""

    def __init__(self, model):
        self.model = model
        c0 = self.coefficients(0.0)
        self.a0 = c0.a

    def coefficients(self, t: float) -> QuadraticCoefficients:
        return self.model.coefficients(t)

    def _checked(self, t: float) -> QuadraticCoefficients:
        co = self.coefficients(t)
        if abs(co.a) < _A_FLOOR:
            raise KineticDegenerate(f"|a({t})| < {_A_FLOOR}; form is singular")
        return co

    def a(self, t: float) -> float:
        return self.coefficients(t).a

    def c(self, t: float) -> float:
        return self.coefficients(t).c

    def tau(self, t: float) -> float:
        co = self._checked(t)
        return co.da / co.a + 2.0 * (co.c - co.d)

    def sigma(self, t: float) -> float:
        co = self._checked(t)
        return co.a * co.b - co.c * co.d + co.da * co.c / (2.0 * co.a) - co.dc / 2.0

    def tau_sigma(self, t: float) -> tuple[float, float]:
        co = self._checked(t)
        tau = co.da / co.a + 2.0 * (co.c - co.d)
        sigma = co.a * co.b - co.c * co.d + co.da * co.c / (2.0 * co.a) - co.dc / 2.0
        return tau, sigma


def characteristic_form(model) -> CharacteristicForm:
    """Build the characteristic form, failing fast if a(0) is degenerate."""
    form = CharacteristicForm(model)
    if abs(form.a0) < _A_FLOOR:
        raise KineticDegenerate("a(0) vanishes; no standard pair exists")
    return form


@dataclass(frozen=True)
class CharacteristicSolution:
    """Dense-output standard pair with the co-integrated integrating factor.

    State layout: y = (mu0, mu0', mu1, mu1', lam_f).  ``zeros`` lists the
    zeros of mu0 in (0, t_max], located by the solver's sign-change root
    finding on dense output.
    """

    form: CharacteristicForm
    a0: float
    mu1_init: float
    t_min: float
    t_max: float
    rtol: float
    atol: float
    zeros: tuple
    _forward: object
    _backward: object | None = None

    def state(self, t):
        """Vectorized state evaluation; t may be scalar or array.

        Refuses to extrapolate outside the solved interval.
        """
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tv = np.atleast_1d(t)
        slack = 1e-9 * max(1.0, abs(self.t_max))
        if np.any(tv < self.t_min - slack) or np.any(tv > self.t_max + slack):
            raise ValueError(
                f"t outside solved interval [{self.t_min}, {self.t_max}]")
        out = np.empty((5, tv.size))
        neg = tv < 0
        if np.any(neg):
            if self._backward is None:
                raise ValueError("solution was not computed for t < 0")
            out[:, neg] = self._backward(tv[neg])
        if np.any(~neg):
            out[:, ~neg] = self._forward(tv[~neg])
        return out[:, 0] if scalar else out

    def mu0(self, t):
        return self.state(t)[0]

    def dmu0(self, t):
        return self.state(t)[1]

    def mu1(self, t):
        return self.state(t)[2]

    def dmu1(self, t):
        return self.state(t)[3]

    def integrating_factor(self, t):
        return self.state(t)[4]

    def wronskian(self, t):
        y = self.state(t)
        return y[0] * y[3] - y[1] * y[2]


def solve_standard_pair(form: CharacteristicForm, a0: float | None, t_max: float,
                        rtol: float = 1e-10, atol: float = 1e-12,
                        mu1_init: float = 1.0, t_min: float = 0.0,
                        ) -> CharacteristicSolution:
    """Integrate the standard pair with dense output on [t_min, t_max].

    ``a0`` sets the initial slope mu0'(0) = 2 a0; pass None to use a(0) of
    the form.  Raises :class:`StepSizeUnderflow` when the integrator stalls
    (for example near a kinetic degeneracy) and :class:`ToleranceNotMet`
    when the final Wronskian residual exceeds 100 * rtol.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if rtol <= 0 or atol <= 0:
        raise ValueError("rtol and atol must be positive")
    if mu1_init == 0:
        raise ValueError("mu1(0) must be nonzero")
    if a0 is None:
        a0 = form.a0

    def rhs(t, y):
        tau, sigma = form.tau_sigma(t)
        co = form.coefficients(t)
        return (y[1], tau * y[1] - 4.0 * sigma * y[0],
                y[3], tau * y[3] - 4.0 * sigma * y[2],
                (co.c - co.d) * y[4])

    def mu0_event(t, y):
        return y[0]

    y0 = (0.0, 2.0 * a0, mu1_init, 0.0, 1.0)
    fwd = solve_ivp(rhs, (0.0, t_max), y0, method="DOP853", dense_output=True,
                    rtol=rtol, atol=atol, events=mu0_event)
    if fwd.status < 0:
        raise StepSizeUnderflow(f"integration failed: {fwd.message}")
    backward = None
    if t_min < 0:
        bwd = solve_ivp(rhs, (0.0, t_min), y0, method="DOP853",
                        dense_output=True, rtol=rtol, atol=atol)
        if bwd.status < 0:
            raise StepSizeUnderflow(f"backward integration failed: {bwd.message}")
        backward = bwd.sol

    zeros = tuple(float(z) for z in fwd.t_events[0] if 1e-12 < z <= t_max)
    sol = CharacteristicSolution(form=form, a0=a0, mu1_init=mu1_init,
                                 t_min=min(t_min, 0.0), t_max=t_max,
                                 rtol=rtol, atol=atol, zeros=zeros,
                                 _forward=fwd.sol, _backward=backward)
    final_res = wronskian_residual(sol, t_max)
    if final_res > 100.0 * rtol:
        raise ToleranceNotMet(
            f"Wronskian residual {final_res:.3e} exceeds {100.0 * rtol:.1e} at t_max")
    return sol


def wronskian_residual(sol: CharacteristicSolution, t):
    """|W(mu0, mu1)(t) + 2 mu1(0) lam_f(t)^2 a(t)|.

    The Abel constant is fixed by the initial data: W(0) = -mu0'(0) mu1(0)
    = -2 a(0) mu1(0) with lam_f(0) = 1.
    """
    t = np.asarray(t, dtype=float)
    y = sol.state(t)
    w = y[0] * y[3] - y[1] * y[2]
    a_vals = np.vectorize(lambda s: sol.form.a(s))(t) if t.ndim else sol.form.a(float(t))
    return np.abs(w + 2.0 * sol.mu1_init * y[4] ** 2 * a_vals)


def solution_to_csv(sol: CharacteristicSolution, ts, path):
    """Write (t, mu0, mu0', mu1, mu1', lam_f, wronskian_residual) rows."""
    ts = np.asarray(ts, dtype=float)
    y = sol.state(ts)
    res = wronskian_residual(sol, ts)
    header = ("t (time),mu0,mu0_prime,mu1,mu1_prime,"
              "lambda_f (dimensionless),wronskian_residual")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for k in range(ts.size):
            row = (ts[k], y[0, k], y[1, k], y[2, k], y[3, k], y[4, k], res[k])
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
