"""Gaussian propagator kernel assembled from the standard solution pair.

The kernel is G(x, y, t) = (2 pi i mu0)^(-1/2) exp(i(alpha0 x^2 + beta0 x y
+ gamma0 y^2)) with

    alpha0 = mu0'/(4 a mu0) - c/(2a),
    beta0  = -lam_f/mu0,
    gamma0 = mu1/(2 mu1(0) mu0) + c(0)/(2 a(0)).

The square-root branch is tracked continuously from t -> 0+: principal
branch at small t, and the prefactor phase drops by pi/2 at every zero of
mu0 (Maslov-style continuity; the closed formula itself carries no branch
prescription).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .characteristic import CharacteristicSolution
from .errors import (CausticEncountered, GridUnderResolved,
                     NonConvergentIntegral, TailNotDecayed, TimeNotPositive)

__all__ = [
    "Grid",
    "WaveField",
    "PropagatorCoefficients",
    "GaussianState",
    "greens_coefficients",
    "greens_coefficients_mesh",
    "greens_kernel",
    "propagate_quadrature",
    "propagate_gaussian_analytic",
    "riccati_residual",
    "wavefield_to_csv",
    "wavefield_from_csv",
    "wavefield_meta",
    "coefficients_to_json",
]

_TAIL_THRESHOLD = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform spatial grid with N >= 16 points."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise ValueError("grid needs at least 16 points")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def extent(self) -> float:
        """Largest |x| on the grid, used by the phase-resolution gate."""
        return max(abs(self.x_min), abs(self.x_max))


@dataclass
class WaveField:
    """Complex amplitude samples on a uniform grid at one time."""

    grid: Grid
    amplitudes: np.ndarray
    t: float

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.grid.n,):
            raise ValueError("amplitude array does not match the grid")
        if not np.all(np.isfinite(amp.view(float))):
            raise ValueError("amplitudes must be finite")
        self.amplitudes = amp

    def norm(self) -> float:
        """Trapezoidal L2 norm."""
        return float(np.sqrt(np.trapezoid(np.abs(self.amplitudes) ** 2,
                                          dx=self.grid.h)))


@dataclass(frozen=True)
class PropagatorCoefficients:
    """Kernel data at one time: exponent coefficients and tracked prefactor.

    ``branch`` counts the zeros of mu0 crossed in (0, t); the amplitude
    prefactor is exp(-i pi/4 - i pi/2 branch) / sqrt(2 pi |mu0|).
    """

    t: float
    alpha0: float
    beta0: float
    gamma0: float
    mu0: float
    branch: int
    prefactor: complex = field(repr=False, default=0j)


def greens_coefficients(sol: CharacteristicSolution, t: float,
                        coeffs=None) -> PropagatorCoefficients:
    """Propagator coefficients at time t from a solved standard pair.

    ``coeffs`` overrides the coefficient source (defaults to the model the
    pair was solved with).  Raises :class:`TimeNotPositive` for t <= 0 and
    :class:`CausticEncountered` where mu0 vanishes.
    """
    if t <= 0:
        raise TimeNotPositive(f"propagator needs t > 0, got {t}")
    if coeffs is None:
        coeffs = sol.form
    y = sol.state(t)
    mu0, dmu0, mu1, lamf = y[0], y[1], y[2], y[4]
    if abs(mu0) < sol.atol * (1.0 + abs(mu1)):
        raise CausticEncountered(f"mu0({t}) = {mu0:.3e} is at a caustic")
    cot = coeffs.coefficients(t)
    co0 = coeffs.coefficients(0.0)
    alpha0 = dmu0 / (4.0 * cot.a * mu0) - cot.c / (2.0 * cot.a)
    beta0 = -lamf / mu0
    gamma0 = mu1 / (2.0 * sol.mu1_init * mu0) + co0.c / (2.0 * co0.a)
    branch = sum(1 for z in sol.zeros if z < t)
    prefactor = np.exp(-1j * (np.pi / 4.0 + np.pi / 2.0 * branch)) \
        / math.sqrt(2.0 * math.pi * abs(mu0))
    return PropagatorCoefficients(t=float(t), alpha0=float(alpha0),
                                  beta0=float(beta0), gamma0=float(gamma0),
                                  mu0=float(mu0), branch=branch,
                                  prefactor=complex(prefactor))


def greens_coefficients_mesh(sol: CharacteristicSolution, ts) -> list:
    """greens_coefficients over a mesh (single vectorized state evaluation)."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts <= 0):
        raise TimeNotPositive("mesh must be strictly positive")
    y = sol.state(ts)
    mu0, dmu0, mu1, lamf = y[0], y[1], y[2], y[4]
    bad = np.abs(mu0) < sol.atol * (1.0 + np.abs(mu1))
    if np.any(bad):
        raise CausticEncountered(
            f"mesh touches a caustic near t={ts[bad][0]:.6f}")
    co0 = sol.form.coefficients(0.0)
    zeros = np.asarray(sol.zeros)
    out = []
    for k, t in enumerate(ts):
        cot = sol.form.coefficients(float(t))
        alpha0 = dmu0[k] / (4.0 * cot.a * mu0[k]) - cot.c / (2.0 * cot.a)
        beta0 = -lamf[k] / mu0[k]
        gamma0 = mu1[k] / (2.0 * sol.mu1_init * mu0[k]) + co0.c / (2.0 * co0.a)
        branch = int(np.sum(zeros < t)) if zeros.size else 0
        prefactor = np.exp(-1j * (np.pi / 4.0 + np.pi / 2.0 * branch)) \
            / math.sqrt(2.0 * math.pi * abs(mu0[k]))
        out.append(PropagatorCoefficients(t=float(t), alpha0=float(alpha0),
                                          beta0=float(beta0),
                                          gamma0=float(gamma0),
                                          mu0=float(mu0[k]), branch=branch,
                                          prefactor=complex(prefactor)))
    return out


def greens_kernel(pc: PropagatorCoefficients, x, y):
    """Kernel values; x and y broadcast, |G| = (2 pi |mu0|)^(-1/2) throughout."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    phase = pc.alpha0 * x ** 2 + pc.beta0 * x * y + pc.gamma0 * y ** 2
    return pc.prefactor * np.exp(1j * phase)


def propagate_quadrature(pc: PropagatorCoefficients, chi: WaveField) -> WaveField:
    """Trapezoidal quadrature of G(x, y, t) chi(y) over the grid.

    Refuses under-resolved requests: the kernel phase must satisfy
    |beta0| * max|x| * h < pi/4, and chi must decay below 1e-12 relative
    amplitude at the grid edges.
    """
    grid = chi.grid
    x = grid.points
    if abs(pc.beta0) * grid.extent * grid.h >= math.pi / 4.0:
        raise GridUnderResolved(
            f"|beta0| x_max h = {abs(pc.beta0) * grid.extent * grid.h:.3f} "
            ">= pi/4; refine the grid or shrink the domain")
    amp = chi.amplitudes
    peak = np.max(np.abs(amp))
    if max(abs(amp[0]), abs(amp[-1])) > _TAIL_THRESHOLD * peak:
        raise TailNotDecayed("initial state has not decayed at the grid edges")
    w = np.full(grid.n, grid.h)
    w[0] = w[-1] = grid.h / 2.0
    weighted = amp * w * np.exp(1j * pc.gamma0 * x ** 2)
    out = np.empty(grid.n, dtype=complex)
    chunk = 512
    for i0 in range(0, grid.n, chunk):
        xs = x[i0:i0 + chunk, None]
        out[i0:i0 + chunk] = np.exp(1j * (pc.alpha0 * xs ** 2
                                          + pc.beta0 * xs * x[None, :])) @ weighted
    return WaveField(grid=grid, amplitudes=pc.prefactor * out, t=pc.t)


@dataclass(frozen=True)
class GaussianState:
    """Closed-form Gaussian psi(x) = amplitude * exp(quad_coeff * x^2)."""

    amplitude: complex
    quad_coeff: complex
    t: float

    def on_grid(self, grid: Grid) -> WaveField:
        x = grid.points
        return WaveField(grid=grid,
                         amplitudes=self.amplitude * np.exp(self.quad_coeff * x ** 2),
                         t=self.t)


def propagate_gaussian_analytic(pc: PropagatorCoefficients, epsilon: float,
                                delta: float) -> GaussianState:
    """Propagate the normalized Gaussian exp((i delta - eps^2/2) x^2) exactly.

    Uses int exp(-p y^2 + q y) dy = sqrt(pi/p) exp(q^2/(4p)) with
    p = eps^2/2 - i(gamma0 + delta) and q = i beta0 x, which converges for
    Re p > 0 (always true for eps > 0).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    p = 0.5 * epsilon ** 2 - 1j * (pc.gamma0 + delta)
    if p.real <= 0:
        raise NonConvergentIntegral(f"Re p = {p.real} <= 0")
    quad = 1j * pc.alpha0 - pc.beta0 ** 2 / (4.0 * p)
    norm = (epsilon ** 2 / math.pi) ** 0.25
    amplitude = pc.prefactor * np.sqrt(math.pi / p) * norm
    return GaussianState(amplitude=complex(amplitude), quad_coeff=complex(quad),
                         t=pc.t)


def riccati_residual(pcs, coeffs, guard_radius: float = 0.3) -> float:
    """Max centered-difference residual of d(gamma0)/dt + a beta0^2 = 0.

    ``pcs`` is a sequence of coefficients on a uniform mesh with spacing
    <= 1e-3.  gamma0 has a pole at every caustic, where a fixed-step
    difference quotient cannot represent its derivative, so interior points
    within ``guard_radius`` of a branch increment (a crossed zero of mu0)
    are excluded from the maximum.
    """
    ts = np.array([pc.t for pc in pcs])
    if ts.size < 3:
        raise ValueError("need at least three mesh points")
    dt = np.diff(ts)
    if np.any(np.abs(dt - dt[0]) > 1e-9 * max(1.0, abs(dt[0]))):
        raise ValueError("mesh must be uniform")
    if dt[0] > 1e-3 + 1e-12:
        raise ValueError("mesh spacing must be <= 1e-3")
    gamma = np.array([pc.gamma0 for pc in pcs])
    beta = np.array([pc.beta0 for pc in pcs])
    branch = np.array([pc.branch for pc in pcs])
    a_vals = np.array([coeffs.coefficients(float(t)).a for t in ts])
    dgamma = (gamma[2:] - gamma[:-2]) / (2.0 * dt[0])
    res = np.abs(dgamma + a_vals[1:-1] * beta[1:-1] ** 2)
    keep = np.ones(res.size, dtype=bool)
    jumps = np.nonzero(np.diff(branch))[0]
    for j in jumps:
        z = 0.5 * (ts[j] + ts[j + 1])
        keep &= np.abs(ts[1:-1] - z) > guard_radius
    if not np.any(keep):
        raise ValueError("guard radius excluded every mesh point")
    return float(res[keep].max())


def wavefield_to_csv(field: WaveField, path):
    """CSV rows (x, Re psi, Im psi)."""
    x = field.grid.points
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x (length),re_psi (length^-1/2),im_psi (length^-1/2)\n")
        for k in range(field.grid.n):
            fh.write(f"{x[k]:.17g},{field.amplitudes[k].real:.17g},"
                     f"{field.amplitudes[k].imag:.17g}\n")


def wavefield_from_csv(path, t: float = 0.0) -> WaveField:
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    x = data[:, 0]
    grid = Grid(x_min=float(x[0]), x_max=float(x[-1]), n=len(x))
    return WaveField(grid=grid, amplitudes=data[:, 1] + 1j * data[:, 2], t=t)


def wavefield_meta(field: WaveField) -> dict:
    return {"t": field.t,
            "grid": {"x_min": field.grid.x_min, "x_max": field.grid.x_max,
                     "n": field.grid.n},
            "norm": field.norm()}


def coefficients_to_json(pcs) -> str:
    """JSON rows (t, alpha0, beta0, gamma0, mu0, branch)."""
    rows = [{"t": pc.t, "alpha0": pc.alpha0, "beta0": pc.beta0,
             "gamma0": pc.gamma0, "mu0": pc.mu0, "branch": pc.branch}
            for pc in pcs]
    return json.dumps(rows, indent=2, sort_keys=True)
