"""Coefficient models for variable quadratic Hamiltonians.

All models produce the coefficients of

    H = a(t) p^2 + b(t) x^2 + c(t) px + d(t) xp,    p = -i d/dx,

with hbar folded into a and b, so that the downstream characteristic-equation
and propagator formulas hold literally.  Physical constants (m, omega, the
pump coupling, hbar) appear only inside the model constructors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import NonFiniteCoefficient, PumpOutOfDomain

__all__ = [
    "OscillatorParams",
    "PumpSchedule",
    "QuadraticCoefficients",
    "DpoModel",
    "RaifordModel",
    "GenericModel",
    "dpo_coefficients",
    "raiford_coefficients",
    "generic_coefficients",
    "model_to_json",
    "model_from_json",
]


@dataclass(frozen=True)
class OscillatorParams:
    """Physical parameters of the pumped oscillator mode.

    ``lam`` is the pump coupling strength (rad/time).  ``lam/omega >= 1``
    makes the kinetic coefficient a(t) touch zero; construction is allowed
    but such models are rejected by the ODE solver, not here.
    """

    omega: float
    lam: float = 0.0
    m: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.omega > 0):
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not (self.m > 0):
            raise ValueError(f"m must be positive, got {self.m}")
        if not (self.hbar > 0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.lam < 0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")

    @property
    def coupling_ratio(self) -> float:
        return self.lam / self.omega

    @property
    def kinetic_degenerate(self) -> bool:
        """True when a(t) touches zero somewhere (lam/omega >= 1)."""
        return self.lam / self.omega >= 1.0


@dataclass(frozen=True)
class PumpSchedule:
    """Time-dependent pump amplitude and phase with first derivatives.

    Use the constructors :meth:`constant`, :meth:`detuned` or
    :meth:`tabulated`; the generic constructor accepts arbitrary callables.
    """

    amplitude: Callable[[float], float]
    phase: Callable[[float], float]
    damplitude: Callable[[float], float]
    dphase: Callable[[float], float]
    domain: tuple[float, float] | None = None
    kind: str = "custom"

    @classmethod
    def constant(cls, amplitude: float) -> "PumpSchedule":
        """Constant pump, zero phase."""
        if amplitude < 0:
            raise ValueError("pump amplitude must be nonnegative")
        a = float(amplitude)
        return cls(lambda t: a, lambda t: 0.0, lambda t: 0.0, lambda t: 0.0,
                   kind="constant")

    @classmethod
    def detuned(cls, amplitude: float, detuning: float) -> "PumpSchedule":
        """Constant amplitude, linearly growing phase delta(t) = detuning * t."""
        if amplitude < 0:
            raise ValueError("pump amplitude must be nonnegative")
        a = float(amplitude)
        eps = float(detuning)
        return cls(lambda t: a, lambda t: eps * t, lambda t: 0.0,
                   lambda t: eps, kind="detuned")

    @classmethod
    def tabulated(cls, times, amplitudes, phases=None) -> "PumpSchedule":
        """Cubic-spline schedule through tabulated samples.

        Derivatives are the analytic derivatives of the interpolant.
        Queries outside [times[0], times[-1]] raise :class:`PumpOutOfDomain`.
        """
        times = np.asarray(times, dtype=float)
        amplitudes = np.asarray(amplitudes, dtype=float)
        if phases is None:
            phases = np.zeros_like(times)
        phases = np.asarray(phases, dtype=float)
        if times.ndim != 1 or len(times) < 4:
            raise ValueError("tabulated schedule needs at least 4 samples")
        if np.any(amplitudes < 0):
            raise ValueError("tabulated pump amplitudes must be nonnegative")
        amp = CubicSpline(times, amplitudes)
        ph = CubicSpline(times, phases)
        damp = amp.derivative()
        dph = ph.derivative()
        lo, hi = float(times[0]), float(times[-1])

        def guard(f):
            def wrapped(t):
                if t < lo or t > hi:
                    raise PumpOutOfDomain(
                        f"t={t} outside tabulated pump domain [{lo}, {hi}]")
                return float(f(t))
            return wrapped

        return cls(guard(amp), guard(ph), guard(damp), guard(dph),
                   domain=(lo, hi), kind="tabulated")


@dataclass(frozen=True)
class QuadraticCoefficients:
    """Coefficient values a, b, c, d at time t plus the derivatives a', c'."""

    t: float
    a: float
    b: float
    c: float
    d: float
    da: float
    dc: float


def _pump_core(params: OscillatorParams, lam: float, dlam: float, arg: float,
               darg: float, t: float) -> QuadraticCoefficients:
    # single arithmetic path so the constant pump reduces to the dpo
    # coefficients bit-for-bit
    w, m, hbar = params.omega, params.m, params.hbar
    cosg = math.cos(arg)
    sing = math.sin(arg)
    a = (hbar / (2 * m)) * (1 + (lam / w) * cosg)
    b = (m * w * w / (2 * hbar)) * (1 - (lam / w) * cosg)
    c = 0.5 * lam * sing
    da = (hbar / (2 * m * w)) * (dlam * cosg - lam * darg * sing)
    dc = 0.5 * (dlam * sing + lam * darg * cosg)
    return QuadraticCoefficients(t=t, a=a, b=b, c=c, d=c, da=da, dc=dc)


def dpo_coefficients(params: OscillatorParams, t: float) -> QuadraticCoefficients:
    """Coefficients of the degenerate parametric oscillator at time t.

    a = (hbar/2m)(1 + (lam/omega) cos 2wt)
    b = (m w^2/2 hbar)(1 - (lam/omega) cos 2wt)
    c = d = (lam/2) sin 2wt

    with exact analytic derivatives a', c'.
    """
    w = params.omega
    return _pump_core(params, params.lam, 0.0, 2 * w * t, 2 * w, t)


def raiford_coefficients(params: OscillatorParams, pump: PumpSchedule,
                         t: float) -> QuadraticCoefficients:
    """Coefficients for the time-dependent-pump extension.

    The pump amplitude lam(t) and phase delta(t) replace the constant pump:
    the oscillation argument becomes 2wt + delta(t) and derivatives follow by
    the chain rule using the pump derivatives.
    """
    w = params.omega
    return _pump_core(params, pump.amplitude(t), pump.damplitude(t),
                      2 * w * t + pump.phase(t), 2 * w + pump.dphase(t), t)


def generic_coefficients(user_a, user_b, user_c, user_d, t: float,
                         user_da=None, user_dc=None) -> QuadraticCoefficients:
    """Wrap user callables a(t), b(t), c(t), d(t) in the coefficient interface.

    Derivatives a', c' are taken from ``user_da``/``user_dc`` when supplied,
    otherwise by central differences with step h = 1e-6 * max(1, |t|).
    Raises :class:`NonFiniteCoefficient` if any evaluation is NaN or infinite.
    """
    h = 1e-6 * max(1.0, abs(t))
    a = float(user_a(t))
    b = float(user_b(t))
    c = float(user_c(t))
    d = float(user_d(t))
    da = float(user_da(t)) if user_da is not None else \
        (float(user_a(t + h)) - float(user_a(t - h))) / (2 * h)
    dc = float(user_dc(t)) if user_dc is not None else \
        (float(user_c(t + h)) - float(user_c(t - h))) / (2 * h)
    values = (a, b, c, d, da, dc)
    if not all(math.isfinite(v) for v in values):
        raise NonFiniteCoefficient(
            f"non-finite coefficient at t={t}: (a,b,c,d,a',c')={values}")
    return QuadraticCoefficients(t=t, a=a, b=b, c=c, d=d, da=da, dc=dc)


class DpoModel:
    """Degenerate parametric oscillator coefficient source."""

    def __init__(self, params: OscillatorParams):
        self.params = params

    def coefficients(self, t: float) -> QuadraticCoefficients:
        return dpo_coefficients(self.params, t)

    def __repr__(self):
        p = self.params
        return f"DpoModel(omega={p.omega}, lam={p.lam}, m={p.m}, hbar={p.hbar})"


class RaifordModel:
    """Pump-modulated oscillator coefficient source."""

    def __init__(self, params: OscillatorParams, pump: PumpSchedule):
        self.params = params
        self.pump = pump

    def coefficients(self, t: float) -> QuadraticCoefficients:
        return raiford_coefficients(self.params, self.pump, t)

    def __repr__(self):
        p = self.params
        return f"RaifordModel(omega={p.omega}, m={p.m}, hbar={p.hbar}, pump={self.pump.kind})"


class GenericModel:
    """Coefficient source built from user callables."""

    def __init__(self, a, b, c, d, da=None, dc=None):
        self._fns = (a, b, c, d, da, dc)

    def coefficients(self, t: float) -> QuadraticCoefficients:
        a, b, c, d, da, dc = self._fns
        return generic_coefficients(a, b, c, d, t, user_da=da, user_dc=dc)

    def __repr__(self):
        return "GenericModel(...)"


# JSON schema:
#   {"model": "dpo", "m": ..., "omega": ..., "lambda": ..., "hbar": ...}
#   {"model": "raiford", ..., "pump": {"kind": "constant"|"detuned"|"tabulated", ...}}
#   {"model": "generic", "a": "<expr in t>", "b": ..., "c": ..., "d": ...,
#    "da": optional, "dc": optional}
# Generic expressions are evaluated with numpy in scope and no builtins.

_EXPR_NAMES = {
    "np": np, "sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp,
    "sqrt": np.sqrt, "log": np.log, "pi": np.pi, "abs": np.abs,
    "cosh": np.cosh, "sinh": np.sinh, "tanh": np.tanh,
}


def _compile_expr(expr: str):
    code = compile(expr, "<model-config>", "eval")

    def f(t):
        return float(eval(code, {"__builtins__": {}}, dict(_EXPR_NAMES, t=t)))

    return f


def _require_keys(obj: dict, allowed: set, context: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ValueError(f"unknown keys in {context}: {sorted(unknown)}")


def _required(obj: dict, key: str, context: str):
    if key not in obj:
        raise ValueError(f"{context} is missing required key {key!r}")
    return obj[key]


def model_from_json(obj: dict):
    """Build a coefficient model from its JSON document."""
    if not isinstance(obj, dict) or "model" not in obj:
        raise ValueError("model document must be an object with a 'model' key")
    kind = obj["model"]
    if kind == "dpo":
        _require_keys(obj, {"model", "m", "omega", "lambda", "hbar"}, "dpo model")
        params = OscillatorParams(omega=float(_required(obj, "omega", "dpo model")),
                                  lam=float(obj.get("lambda", 0.0)),
                                  m=float(obj.get("m", 1.0)),
                                  hbar=float(obj.get("hbar", 1.0)))
        return DpoModel(params)
    if kind == "raiford":
        _require_keys(obj, {"model", "m", "omega", "lambda", "hbar", "pump"},
                      "raiford model")
        params = OscillatorParams(omega=float(_required(obj, "omega", "raiford model")),
                                  lam=float(obj.get("lambda", 0.0)),
                                  m=float(obj.get("m", 1.0)),
                                  hbar=float(obj.get("hbar", 1.0)))
        pump_obj = obj.get("pump", {"kind": "constant"})
        pkind = pump_obj.get("kind", "constant")
        if pkind == "constant":
            _require_keys(pump_obj, {"kind", "amplitude"}, "constant pump")
            pump = PumpSchedule.constant(float(pump_obj.get("amplitude", params.lam)))
        elif pkind == "detuned":
            _require_keys(pump_obj, {"kind", "amplitude", "detuning"}, "detuned pump")
            pump = PumpSchedule.detuned(float(pump_obj.get("amplitude", params.lam)),
                                        float(_required(pump_obj, "detuning",
                                                        "detuned pump")))
        elif pkind == "tabulated":
            _require_keys(pump_obj, {"kind", "times", "amplitudes", "phases"},
                          "tabulated pump")
            pump = PumpSchedule.tabulated(_required(pump_obj, "times", "tabulated pump"),
                                          _required(pump_obj, "amplitudes",
                                                    "tabulated pump"),
                                          pump_obj.get("phases"))
        else:
            raise ValueError(f"unknown pump kind {pkind!r}")
        return RaifordModel(params, pump)
    if kind == "generic":
        _require_keys(obj, {"model", "a", "b", "c", "d", "da", "dc"}, "generic model")
        fns = {k: _compile_expr(_required(obj, k, "generic model"))
               for k in ("a", "b", "c", "d")}
        da = _compile_expr(obj["da"]) if "da" in obj else None
        dc = _compile_expr(obj["dc"]) if "dc" in obj else None
        return GenericModel(fns["a"], fns["b"], fns["c"], fns["d"], da=da, dc=dc)
    raise ValueError(f"unknown model kind {kind!r}")


def model_to_json(model) -> dict:
    """Serialize a dpo or raiford model (generic models carry callables)."""
    if isinstance(model, DpoModel):
        p = model.params
        return {"model": "dpo", "m": p.m, "omega": p.omega,
                "lambda": p.lam, "hbar": p.hbar}
    if isinstance(model, RaifordModel):
        p = model.params
        pump = model.pump
        if pump.kind not in ("constant", "detuned"):
            raise ValueError("only constant/detuned pumps serialize to JSON")
        pump_obj = {"kind": pump.kind, "amplitude": pump.amplitude(0.0)}
        if pump.kind == "detuned":
            pump_obj["detuning"] = pump.dphase(0.0)
        return {"model": "raiford", "m": p.m, "omega": p.omega,
                "lambda": p.lam, "hbar": p.hbar, "pump": pump_obj}
    raise ValueError(f"cannot serialize model {model!r}")
