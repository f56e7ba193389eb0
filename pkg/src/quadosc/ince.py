"""Canonical Ince form of the characteristic equation and periodicity analysis.

In the scaled time s = omega t the characteristic equation becomes

    (1 + a0 cos 2s) y'' + b0 sin 2s y' + (c0 + d0 cos 2s) y = 0

with a0 = lam/omega, b0 = 2 a0, c0 = 1 - 3 (lam/omega)^2 and
d0 = -(lam/omega)(1 + (lam/omega)^2).  Existence of two independent
pi- or 2pi-periodic solutions requires an integer zero of

    P(xi) = 2 a0 xi^2 - b0 xi - d0/2        (pi pair)
    Q(xi) = 2 P(xi - 1/2)                   (2pi pair)

which is a necessary condition only; the classifier reports "possible" or
"ruled out", never existence.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import KineticDegenerate, TruncationTooSmall
from .models import OscillatorParams

__all__ = [
    "InceForm",
    "PeriodicityReport",
    "FourierTrialSolution",
    "TRIAL_CLASSES",
    "to_ince_form",
    "periodicity_polynomials",
    "classify_periodicity",
    "fourier_trial",
    "trial_convergence",
    "report_to_json",
    "convergence_to_csv",
]

TRIAL_CLASSES = ("cos-pi", "sin-pi", "cos-2pi", "sin-2pi")


@dataclass(frozen=True)
class InceForm:
    """Dimensionless Ince-equation parameters plus the s = omega t scale."""

    a0: float
    b0: float
    c0: float
    d0: float
    omega: float = 1.0

    def __post_init__(self):
        if abs(self.a0) >= 1.0:
            raise KineticDegenerate(
                f"|a0| = {abs(self.a0)} >= 1; 1 + a0 cos 2s vanishes")


def to_ince_form(params: OscillatorParams) -> InceForm:
    """Map oscillator parameters to the canonical Ince form."""
    r = params.lam / params.omega
    if r >= 1.0:
        raise KineticDegenerate(f"lam/omega = {r} >= 1")
    return InceForm(a0=r, b0=2.0 * r, c0=1.0 - 3.0 * r * r,
                    d0=-r * (1.0 + r * r), omega=params.omega)


def periodicity_polynomials(form: InceForm):
    """Coefficient triples (quadratic, linear, constant) of P and Q."""
    p = (2.0 * form.a0, -form.b0, -form.d0 / 2.0)
    # Q(xi) = 2 P(xi - 1/2), expanded
    q = (4.0 * form.a0,
         -2.0 * (2.0 * form.a0 + form.b0),
         form.a0 + form.b0 - form.d0)
    return p, q


def _poly_eval(coeffs, xi):
    c2, c1, c0 = coeffs
    return c2 * xi * xi + c1 * xi + c0


def _poly_min(coeffs) -> float:
    c2, c1, c0 = coeffs
    if c2 > 0:
        return c0 - c1 * c1 / (4.0 * c2)
    if c2 == 0 and c1 == 0:
        return c0
    return -math.inf


def _integer_zeros(coeffs, xi_max: int):
    """Integer zeros by direct scan plus a closed-form integrality check."""
    c2, c1, c0 = coeffs
    zeros = set()
    for k in range(-xi_max, xi_max + 1):
        val = _poly_eval(coeffs, k)
        scale = abs(c2) * k * k + abs(c1) * abs(k) + abs(c0)
        if abs(val) <= 1e-9 * max(1.0, scale):
            zeros.add(k)
    # roots via the quadratic formula, rounded to the nearest integer
    if c2 != 0:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc >= 0:
            for sgn in (-1.0, 1.0):
                root = (-c1 + sgn * math.sqrt(disc)) / (2.0 * c2)
                if abs(root - round(root)) <= 1e-9:
                    zeros.add(int(round(root)))
    elif c1 != 0:
        root = -c0 / c1
        if abs(root - round(root)) <= 1e-9:
            zeros.add(int(round(root)))
    return tuple(sorted(zeros))


@dataclass(frozen=True)
class PeriodicityReport:
    """Periodic-pair necessary-condition verdicts for one Ince form.

    ``degenerate`` marks the lam = 0 case where both polynomials vanish
    identically and every integer is a zero.
    """

    p_coeffs: tuple
    q_coeffs: tuple
    xi_max: int
    p_integer_zeros: tuple
    q_integer_zeros: tuple
    p_min: float
    q_min: float
    pi_pair_possible: bool
    two_pi_pair_possible: bool
    degenerate: bool


def classify_periodicity(form: InceForm, xi_max: int = 50) -> PeriodicityReport:
    """Evaluate the integer-zero necessary condition for periodic pairs."""
    p, q = periodicity_polynomials(form)
    degenerate = all(v == 0.0 for v in p)
    if degenerate:
        all_ints = tuple(range(-xi_max, xi_max + 1))
        return PeriodicityReport(p_coeffs=p, q_coeffs=q, xi_max=xi_max,
                                 p_integer_zeros=all_ints,
                                 q_integer_zeros=all_ints,
                                 p_min=0.0, q_min=0.0,
                                 pi_pair_possible=True,
                                 two_pi_pair_possible=True,
                                 degenerate=True)
    pz = _integer_zeros(p, xi_max)
    qz = _integer_zeros(q, xi_max)
    return PeriodicityReport(p_coeffs=p, q_coeffs=q, xi_max=xi_max,
                             p_integer_zeros=pz, q_integer_zeros=qz,
                             p_min=_poly_min(p), q_min=_poly_min(q),
                             pi_pair_possible=bool(pz),
                             two_pi_pair_possible=bool(qz),
                             degenerate=False)


def report_to_json(report: PeriodicityReport) -> str:
    obj = {
        "p_coeffs": list(report.p_coeffs),
        "q_coeffs": list(report.q_coeffs),
        "xi_max": report.xi_max,
        "p_integer_zeros": list(report.p_integer_zeros),
        "q_integer_zeros": list(report.q_integer_zeros),
        "p_min": report.p_min,
        "q_min": report.q_min,
        "pi_pair_possible": report.pi_pair_possible,
        "two_pi_pair_possible": report.two_pi_pair_possible,
        "degenerate": report.degenerate,
    }
    return json.dumps(obj, indent=2, sort_keys=True)


def _harmonics(kind: str, order: int) -> np.ndarray:
    if kind == "cos-pi":
        return 2 * np.arange(0, order + 1)
    if kind == "sin-pi":
        return 2 * np.arange(1, order + 2)
    if kind in ("cos-2pi", "sin-2pi"):
        return 2 * np.arange(0, order + 1) + 1
    raise ValueError(f"unknown trial class {kind!r}; use one of {TRIAL_CLASSES}")


def _trial_matrix(form: InceForm, kind: str, order: int):
    """Projection matrix of the Ince operator on a truncated trig basis.

    Substituting cos(ns) or sin(ns) and applying product-to-sum identities
    couples each harmonic n to n and n +/- 2 only:

        L[trig(ns)] = (c0 - n^2) trig(ns)
                      + ((d0 - a0 n^2)/2 + b0 n/2) trig((n+2)s)
                      + ((d0 - a0 n^2)/2 - b0 n/2) trig((n-2)s)

    with the wraps cos(-ks) = cos(ks), sin(-ks) = -sin(ks), sin(0) = 0.
    Column j holds the expansion of L[basis_j]; harmonics outside the
    truncation are dropped.
    """
    ns = _harmonics(kind, order)
    index = {int(n): j for j, n in enumerate(ns)}
    m = np.zeros((order + 1, order + 1))
    is_sin = kind.startswith("sin")

    def add(n, j, coeff):
        if coeff == 0.0:
            return
        if is_sin:
            if n == 0:
                return
            if n < 0:
                n, coeff = -n, -coeff
        elif n < 0:
            n = -n
        if n in index:
            m[index[n], j] += coeff

    a0, b0, c0, d0 = form.a0, form.b0, form.c0, form.d0
    for j, n in enumerate(ns):
        n = int(n)
        add(n, j, c0 - n * n)
        add(n + 2, j, (d0 - a0 * n * n) / 2.0 + b0 * n / 2.0)
        add(n - 2, j, (d0 - a0 * n * n) / 2.0 - b0 * n / 2.0)
    return m, ns


@dataclass(frozen=True)
class FourierTrialSolution:
    """Truncated trig-series trial with its measured equation defect.

    ``residual_norm`` is the L2 norm over one period of the Ince-equation
    defect of the truncated series, evaluated by direct substitution on a
    1024-interval grid; it stays O(1) when no periodic solution of the
    requested class exists.  ``matrix_defect`` is the linear-algebra
    consistency |M v - sigma_min u| of the SVD output.
    """

    kind: str
    order: int
    harmonics: np.ndarray
    coefficients: np.ndarray
    residual_norm: float
    singular_value: float
    matrix_norm: float
    matrix_defect: float

    @property
    def period(self) -> float:
        return math.pi if self.kind.endswith("-pi") else 2.0 * math.pi

    def evaluate(self, s):
        """Trial series and its first two derivatives at scaled times s."""
        s = np.asarray(s, dtype=float)
        y = np.zeros_like(s)
        dy = np.zeros_like(s)
        d2y = np.zeros_like(s)
        is_sin = self.kind.startswith("sin")
        for cj, n in zip(self.coefficients, self.harmonics):
            n = float(n)
            if is_sin:
                y += cj * np.sin(n * s)
                dy += cj * n * np.cos(n * s)
                d2y += -cj * n * n * np.sin(n * s)
            else:
                y += cj * np.cos(n * s)
                dy += -cj * n * np.sin(n * s)
                d2y += -cj * n * n * np.cos(n * s)
        return y, dy, d2y

    def defect(self, form: InceForm, s):
        y, dy, d2y = self.evaluate(s)
        s = np.asarray(s, dtype=float)
        return ((1.0 + form.a0 * np.cos(2 * s)) * d2y
                + form.b0 * np.sin(2 * s) * dy
                + (form.c0 + form.d0 * np.cos(2 * s)) * y)


def fourier_trial(form: InceForm, kind: str, order: int) -> FourierTrialSolution:
    """Best truncated trig-series candidate of the requested class.

    Builds the (order+1)^2 banded projection system, takes the minimal
    singular vector (unit norm, first nonzero entry positive) and reports
    the defect norm by direct substitution over one period.
    """
    if order < 4:
        raise TruncationTooSmall(f"order {order} < 4")
    m, ns = _trial_matrix(form, kind, order)
    u_mat, svals, vh = np.linalg.svd(m)
    v = vh[-1]
    u_vec = u_mat[:, -1]
    first = np.argmax(np.abs(v) > 1e-12)
    if v[first] < 0:
        v, u_vec = -v, -u_vec
    matrix_defect = float(np.linalg.norm(m @ v - svals[-1] * u_vec))
    trial = FourierTrialSolution(kind=kind, order=order, harmonics=ns,
                                 coefficients=v, residual_norm=0.0,
                                 singular_value=float(svals[-1]),
                                 matrix_norm=float(svals[0]),
                                 matrix_defect=matrix_defect)
    s = np.linspace(0.0, trial.period, 1025)
    d = trial.defect(form, s)
    r = float(np.sqrt(np.trapezoid(d * d, s)))
    return FourierTrialSolution(kind=kind, order=order, harmonics=ns,
                                coefficients=v, residual_norm=r,
                                singular_value=float(svals[-1]),
                                matrix_norm=float(svals[0]),
                                matrix_defect=matrix_defect)


def trial_convergence(form: InceForm, kind: str, orders):
    """(N, r(N)) pairs for a sequence of truncation orders."""
    return [(int(n), fourier_trial(form, kind, int(n)).residual_norm)
            for n in orders]


def convergence_to_csv(rows, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("order (harmonics),residual_norm (L2 over one period)\n")
        for n, r in rows:
            fh.write(f"{n},{r:.17g}\n")
