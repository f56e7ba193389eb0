"""Independent ground truths: closed forms and a direct PDE integrator.

Nothing here touches the characteristic-ODE pipeline; these paths exist to
cross-validate it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import (BoundaryContamination, CausticEncountered, GridMismatch,
                     LinearSolveFailure)
from .propagator import Grid, WaveField

__all__ = [
    "OracleConfig",
    "CNDiagnostics",
    "special_case_mu",
    "special_case_green",
    "mehler_kernel",
    "crank_nicolson_evolve",
    "schrodinger_residual",
    "apply_hamiltonian",
]


@dataclass(frozen=True)
class OracleConfig:
    """Grid, time step and boundary treatment of the PDE oracle."""

    grid: Grid
    dt: float
    boundary: str = "dirichlet"

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.boundary != "dirichlet":
            raise ValueError("only hard-wall zero Dirichlet boundaries supported")


def special_case_mu(t):
    """Closed-form standard pair of the integrable case lam = omega = m = hbar = 1.

    mu0 = cos t sinh t + sin t cosh t,  mu1 = cos t cosh t + sin t sinh t,
    with derivatives mu0' = 2 cos t cosh t and mu1' = 2 cos t sinh t.
    Returns (mu0, mu1, mu0', mu1'); entire in t.
    """
    t = np.asarray(t, dtype=float)
    ct, st = np.cos(t), np.sin(t)
    ch, sh = np.cosh(t), np.sinh(t)
    return (ct * sh + st * ch, ct * ch + st * sh, 2.0 * ct * ch, 2.0 * ct * sh)


def special_case_green(x, y, t):
    """Closed-form kernel of the integrable special case.

    G = (2 pi i mu0)^(-1/2) exp(((x^2-y^2) sin t sinh t + 2xy
        - (x^2+y^2) cos t cosh t) / (2 i mu0)).
    """
    mu0 = float(special_case_mu(t)[0])
    if abs(mu0) < 1e-12:
        raise CausticEncountered(f"special-case mu0({t}) = 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    st, ct = math.sin(t), math.cos(t)
    sh, ch = math.sinh(t), math.cosh(t)
    num = (x ** 2 - y ** 2) * st * sh + 2.0 * x * y - (x ** 2 + y ** 2) * ct * ch
    return np.exp(num / (2j * mu0)) / np.sqrt(2j * np.pi * mu0)


def mehler_kernel(omega: float, m: float, hbar: float, x, y, t):
    """Harmonic-oscillator propagator (the lam = 0 reduction).

    G = (2 pi i (hbar/m omega) sin wt)^(-1/2)
        exp(i m omega ((x^2+y^2) cos wt - 2xy) / (2 hbar sin wt)).
    """
    s = math.sin(omega * t)
    if abs(s) < 1e-12:
        raise CausticEncountered(f"mehler kernel caustic at omega t = {omega * t}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    c = math.cos(omega * t)
    phase = m * omega * ((x ** 2 + y ** 2) * c - 2.0 * x * y) / (2.0 * hbar * s)
    return np.exp(1j * phase) / np.sqrt(2j * np.pi * (hbar / (m * omega)) * s)


# Banded Hamiltonian: H = -a D2 + b x^2 - i c (x D1 + D1 x), with fourth-order
# central stencils and zeros outside the grid (hard wall).  D2 is symmetric
# and D1 antisymmetric, so H is Hermitian and Crank-Nicolson stays unitary.

_D1C = {-2: -1.0, -1: 8.0, 0: 0.0, 1: -8.0, 2: 1.0}   # D1[j+k, j] * 12h
_D2C = {-2: -1.0, -1: 16.0, 0: -30.0, 1: 16.0, 2: -1.0}  # D2[j+k, j] * 12h^2


def _band_template(grid: Grid) -> dict:
    """Grid-static pieces of the banded Hamiltonian (reused every step)."""
    n = grid.n
    h = grid.h
    x = grid.points
    d2 = np.zeros((5, n))
    cross = np.zeros((5, n))
    for k in (-2, -1, 0, 1, 2):
        js = slice(max(0, -k), n - max(0, k))
        rows = slice(max(0, k), n - max(0, -k))  # i = j + k
        d2[2 + k, js] = _D2C[k] / (12.0 * h * h)
        cross[2 + k, js] = (_D1C[k] / (12.0 * h)) * (x[rows] + x[js])
    return {"d2": d2, "cross": cross, "xsq": x ** 2}


def _bands_from_coefficients(tmpl: dict, co) -> np.ndarray:
    """H = a p^2 + b x^2 + c px + d xp in solve_banded layout, bandwidth 2.

    c px + d xp = ((c+d)/2)(px + xp) - i (c-d)/2; the scalar part vanishes
    for every c = d model (dpo, raiford, harmonic).
    """
    ab = -co.a * tmpl["d2"] - (0.5j * (co.c + co.d)) * tmpl["cross"]
    ab[2, :] += co.b * tmpl["xsq"] - 0.5j * (co.c - co.d)
    return ab


def _hamiltonian_bands(model, t: float, grid: Grid) -> np.ndarray:
    return _bands_from_coefficients(_band_template(grid), model.coefficients(t))


def _band_matvec(ab: np.ndarray, psi: np.ndarray) -> np.ndarray:
    n = psi.size
    out = np.zeros(n, dtype=complex)
    for k in (-2, -1, 0, 1, 2):
        js = slice(max(0, -k), n - max(0, k))
        rows = slice(max(0, k), n - max(0, -k))
        out[rows] += ab[2 + k, js] * psi[js]
    return out


def apply_hamiltonian(model, t: float, field: WaveField) -> np.ndarray:
    """H psi with the oracle's discretization; returns a raw array."""
    ab = _hamiltonian_bands(model, t, field.grid)
    return _band_matvec(ab, field.amplitudes)


@dataclass(frozen=True)
class CNDiagnostics:
    steps: int
    max_norm_drift: float
    max_boundary_amplitude: float


def crank_nicolson_evolve(model, chi: WaveField, t_final: float,
                          cfg: OracleConfig, return_diagnostics: bool = False):
    """Trapezoidal-rule (Crank-Nicolson) evolution with midpoint coefficients.

    Each step solves (I + i dt/2 H(t + dt/2)) psi_new
    = (I - i dt/2 H(t + dt/2)) psi via a pentadiagonal solve.  Raises
    :class:`BoundaryContamination` if the hard-wall boundary amplitude
    exceeds 1e-8 during the evolution.
    """
    if cfg.grid != chi.grid:
        raise GridMismatch("initial state grid differs from oracle grid")
    dt = cfg.dt
    n_steps = int(round((t_final - chi.t) / dt))
    if n_steps <= 0 or abs(chi.t + n_steps * dt - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise ValueError("t_final - t0 must be a positive multiple of dt")
    psi = chi.amplitudes.copy()
    norm_prev = float(np.sqrt(np.sum(np.abs(psi) ** 2) * cfg.grid.h))
    max_drift = 0.0
    max_boundary = 0.0
    t = chi.t
    tmpl = _band_template(cfg.grid)
    for _ in range(n_steps):
        ab = _bands_from_coefficients(tmpl, model.coefficients(t + dt / 2.0))
        rhs = psi - 0.5j * dt * _band_matvec(ab, psi)
        lhs = 0.5j * dt * ab
        lhs[2, :] += 1.0
        try:
            psi = solve_banded((2, 2), lhs, rhs)
        except Exception as exc:  # scipy raises LinAlgError/ValueError
            raise LinearSolveFailure(str(exc)) from exc
        t += dt
        boundary = max(abs(psi[0]), abs(psi[-1]))
        max_boundary = max(max_boundary, boundary)
        if boundary > 1e-8:
            raise BoundaryContamination(
                f"boundary amplitude {boundary:.3e} at t = {t:.6f}")
        norm_now = float(np.sqrt(np.sum(np.abs(psi) ** 2) * cfg.grid.h))
        max_drift = max(max_drift, abs(norm_now - norm_prev))
        norm_prev = norm_now
    out = WaveField(grid=cfg.grid, amplitudes=psi, t=t_final)
    if return_diagnostics:
        return out, CNDiagnostics(steps=n_steps, max_norm_drift=max_drift,
                                  max_boundary_amplitude=max_boundary)
    return out


def schrodinger_residual(model, before: WaveField, now: WaveField,
                         after: WaveField) -> float:
    """|| i (psi(t+dt) - psi(t-dt)) / (2 dt) - H(t) psi(t) ||_2 / ||psi(t)||_2.

    The time derivative is a centered difference of the supplied snapshots;
    H uses the oracle discretization.
    """
    if before.grid != now.grid or now.grid != after.grid:
        raise GridMismatch("residual snapshots must share one grid")
    dt_minus = now.t - before.t
    dt_plus = after.t - now.t
    if abs(dt_minus - dt_plus) > 1e-12 * max(abs(dt_minus), 1.0):
        raise ValueError("snapshots must be equally spaced in time")
    dt = dt_plus
    dpsi = 1j * (after.amplitudes - before.amplitudes) / (2.0 * dt)
    hpsi = apply_hamiltonian(model, now.t, now)
    num = np.sqrt(np.sum(np.abs(dpsi - hpsi) ** 2))
    den = np.sqrt(np.sum(np.abs(now.amplitudes) ** 2))
    return float(num / den)
