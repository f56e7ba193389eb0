"""Pinney modulus, accumulated phase and invariant eigenfunctions.

The positive solution mu(t) of the nonlinear auxiliary equation

    mu'' - tau mu' + 4 sigma mu = C0 (2 a(t))^2 / mu^3

is assembled from the standard pair by the law-of-cosines combination

    mu^2 = (mu'(0)/(2 a(0)) mu0 + mu(0)/mu1(0) mu1)^2 + (C0/mu(0)^2) mu0^2,

which is strictly positive wherever mu(0) != 0 and C0 > 0 (zeros of mu0 and
mu1 never coincide).  The accumulated phase obeys
d(phi)/dt = sqrt(C0) 2 a(t) / mu^2 with phi(0) = 0, and the eigenfunctions
of the quadratic dynamical invariant are Hermite-Gaussians of width mu with
eigenvalues 2 sqrt(C0) (n + 1/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .characteristic import CharacteristicSolution
from .errors import GridUnderResolved, InvalidInvariantConstant
from .fdops import d1_apply
from .models import OscillatorParams
from .propagator import WaveField

__all__ = [
    "HermiteGaussianSpec",
    "ErmakovSolution",
    "pinney_mu",
    "ermakov_solution",
    "ermakov_residual",
    "phase",
    "initial_conditions_from_gaussian",
    "hermite_function",
    "eigenfunction",
    "wavefunction",
    "apply_invariant",
    "ermakov_to_csv",
]


@dataclass(frozen=True)
class HermiteGaussianSpec:
    """Initial Hermite-Gaussian: inverse width epsilon, phase curvature delta,
    quantum number n."""

    epsilon: float
    delta: float = 0.0
    n: int = 0

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise ValueError("epsilon must be positive")
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    def on_grid(self, x) -> np.ndarray:
        """The initial wave function sqrt(eps/(sqrt(pi) 2^n n!))
        exp((i delta - eps^2/2) x^2) H_n(eps x)."""
        x = np.asarray(x, dtype=float)
        z = self.epsilon * x
        # orthonormal Hermite function carries exp(-z^2/2); restore it and
        # attach the curvature phase
        hn = hermite_function(self.n, z)
        return (math.sqrt(self.epsilon) * hn
                * np.exp(1j * self.delta * x ** 2))


def pinney_mu(sol: CharacteristicSolution, mu_init: float, dmu_init: float,
              C0: float, t):
    """Pinney modulus and derivative (mu, mu') at times t.

    mu is the positive root of the law-of-cosines combination; mu' follows
    by analytic differentiation, never by differencing dense output.
    """
    if C0 <= 0:
        raise InvalidInvariantConstant(f"C0 must be positive, got {C0}")
    if mu_init == 0:
        raise ValueError("mu(0) must be nonzero")
    y = sol.state(t)
    alpha = dmu_init / (2.0 * sol.a0)
    beta = mu_init / sol.mu1_init
    k = C0 / mu_init ** 2
    s = alpha * y[0] + beta * y[2]
    ds = alpha * y[1] + beta * y[3]
    mu = np.sqrt(s * s + k * y[0] ** 2)
    dmu = (s * ds + k * y[0] * y[1]) / mu
    return mu, dmu


@dataclass(frozen=True)
class ErmakovSolution:
    """Pinney solution tied to a solved standard pair."""

    sol: CharacteristicSolution
    mu_init: float
    dmu_init: float
    C0: float

    def __post_init__(self):
        if self.C0 <= 0:
            raise InvalidInvariantConstant(f"C0 must be positive, got {self.C0}")
        if self.mu_init == 0:
            raise ValueError("mu(0) must be nonzero")

    def mu(self, t):
        return pinney_mu(self.sol, self.mu_init, self.dmu_init, self.C0, t)

    def phase(self, t):
        return phase(self, t)


def ermakov_solution(sol: CharacteristicSolution, mu_init: float,
                     dmu_init: float, C0: float = 1.0) -> ErmakovSolution:
    return ErmakovSolution(sol=sol, mu_init=mu_init, dmu_init=dmu_init, C0=C0)


def ermakov_residual(es: ErmakovSolution, t: float, step: float = 1e-5) -> float:
    """|mu'' - tau mu' + 4 sigma mu - C0 (2a)^2 / mu^3| at time t.

    mu'' comes from centered differences of the analytic mu' at the given
    step, so the residual floor is set by the dense-output accuracy.
    """
    form = es.sol.form
    mu, dmu = es.mu(t)
    _, dmu_m = es.mu(t - step)
    _, dmu_p = es.mu(t + step)
    d2mu = (dmu_p - dmu_m) / (2.0 * step)
    tau, sigma = form.tau_sigma(t)
    a = form.a(t)
    return float(abs(d2mu - tau * dmu + 4.0 * sigma * mu
                     - es.C0 * (2.0 * a) ** 2 / mu ** 3))


def phase(es: ErmakovSolution, t):
    """phi(t) = integral of sqrt(C0) 2 a(s) / mu(s)^2 from 0 to t.

    Adaptive quadrature to 1e-10 absolute; the integrand is positive for
    lam/omega < 1, so phi is nondecreasing.
    """
    sqrt_c0 = math.sqrt(es.C0)
    form = es.sol.form

    def integrand(s):
        mu, _ = es.mu(s)
        return sqrt_c0 * 2.0 * form.a(s) / mu ** 2

    def one(tv):
        if tv == 0.0:
            return 0.0
        val, _ = quad(integrand, 0.0, tv, epsabs=1e-10, epsrel=1e-12, limit=400)
        return val

    t = np.asarray(t, dtype=float)
    if t.ndim == 0:
        return one(float(t))
    return np.array([one(float(tv)) for tv in t])


def initial_conditions_from_gaussian(spec: HermiteGaussianSpec, C0: float,
                                     params: OscillatorParams):
    """(mu(0), mu'(0)) that make the invariant eigenfunctions start at the
    requested Hermite-Gaussian: mu(0) = C0^(1/4)/eps,
    mu'(0) = 2 C0^(1/4) (hbar/m)(1 + lam/omega) delta / eps."""
    if C0 <= 0:
        raise InvalidInvariantConstant(f"C0 must be positive, got {C0}")
    q = C0 ** 0.25
    mu0 = q / spec.epsilon
    dmu0 = 2.0 * q * (params.hbar / params.m) * (1.0 + params.lam / params.omega) \
        * spec.delta / spec.epsilon
    return mu0, dmu0


def hermite_function(n: int, z):
    """Orthonormal Hermite function h_n(z) = H_n(z) e^(-z^2/2) /
    sqrt(sqrt(pi) 2^n n!) by the normalized three-term recurrence.

    The normalization is folded into the recurrence, so no factorials or
    raw Hermite values ever overflow.
    """
    z = np.asarray(z, dtype=float)
    h_prev = np.pi ** -0.25 * np.exp(-0.5 * z * z)
    if n == 0:
        return h_prev
    h_cur = math.sqrt(2.0) * z * h_prev
    for k in range(1, n):
        h_next = math.sqrt(2.0 / (k + 1.0)) * z * h_cur \
            - math.sqrt(k / (k + 1.0)) * h_prev
        h_prev, h_cur = h_cur, h_next
    return h_cur


def _gauge_phase(es: ErmakovSolution, params: OscillatorParams, t: float,
                 mu: float, dmu: float) -> float:
    """Quadratic-phase coefficient (m/2hbar)(mu'/mu - lam sin 2wt)/(1 + r cos 2wt)."""
    w, lam = params.omega, params.lam
    r = lam / w
    return (params.m / (2.0 * params.hbar)) \
        * (dmu / mu - lam * math.sin(2 * w * t)) \
        / (1.0 + r * math.cos(2 * w * t))


def eigenfunction(es: ErmakovSolution, params: OscillatorParams, n: int,
                  t: float, x) -> np.ndarray:
    """Orthonormal eigenfunction Psi_n(x, t) of the quadratic invariant.

    The overall constant is taken real positive (only its modulus is fixed
    by normalization: |D_n|^2 = C0^(1/4) / (sqrt(pi) 2^n n! mu)).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = np.asarray(x, dtype=float)
    mu, dmu = es.mu(t)
    mu, dmu = float(mu), float(dmu)
    theta = _gauge_phase(es, params, t, mu, dmu)
    z = x * es.C0 ** 0.25 / mu
    return math.sqrt(es.C0 ** 0.25 / mu) * hermite_function(n, z) \
        * np.exp(1j * theta * x ** 2)


def wavefunction(es: ErmakovSolution, params: OscillatorParams, n: int,
                 t: float, x) -> np.ndarray:
    """psi_n(x, t) = exp(-i (n + 1/2) phi(t)) Psi_n(x, t)."""
    return np.exp(-1j * (n + 0.5) * phase(es, t)) \
        * eigenfunction(es, params, n, t, x)


def apply_invariant(es: ErmakovSolution, params: OscillatorParams,
                    field: WaveField, t: float) -> WaveField:
    """Apply the quadratic invariant E = (mu p + f(t) x)^2 + (C0/mu^2) x^2.

    f(t) = (m/hbar)(lam sin 2wt mu - mu')/(1 + (lam/omega) cos 2wt) and
    p = -i d/dx is discretized by fourth-order central differences.  The
    square is expanded as two successive applications of mu p + f x.
    """
    amp = field.amplitudes
    peak = np.max(np.abs(amp))
    if max(abs(amp[0]), abs(amp[-1])) > 1e-10 * peak:
        raise GridUnderResolved("field has not decayed at the grid edges")
    mu, dmu = es.mu(t)
    mu, dmu = float(mu), float(dmu)
    w, lam = params.omega, params.lam
    f = (params.m / params.hbar) * (lam * math.sin(2 * w * t) * mu - dmu) \
        / (1.0 + (lam / w) * math.cos(2 * w * t))
    x = field.grid.points
    h = field.grid.h

    def a_op(psi):
        return -1j * mu * d1_apply(psi, h) + f * x * psi

    out = a_op(a_op(amp)) + (es.C0 / mu ** 2) * x ** 2 * amp
    return WaveField(grid=field.grid, amplitudes=out, t=t)


def ermakov_to_csv(es: ErmakovSolution, ts, path):
    """CSV rows (t, mu, mu', phi)."""
    ts = np.asarray(ts, dtype=float)
    mu, dmu = es.mu(ts)
    phi = phase(es, ts)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t (time),mu,mu_prime,phi (rad)\n")
        for k in range(ts.size):
            fh.write(f"{ts[k]:.17g},{mu[k]:.17g},{dmu[k]:.17g},{phi[k]:.17g}\n")
