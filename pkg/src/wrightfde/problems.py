"""Problem definitions shared by the catalog and the Monte Carlo solver."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .odeint import OdeSystem
from .specfun import FracOrder, loggamma, mittag_leffler

FORCING_KINDS = ("zero", "const", "exp", "sin", "cos", "poly", "custom")


@dataclass(frozen=True)
class Forcing:
    """ODE-side forcing ``F(t)``; the fractional equation sees ``F_beta``.

    kinds and parameters::

        zero                      F = 0
        const   value             F = value
        exp     amp, rate         F = amp * exp(rate t)
        sin     amp, omega        F = amp * sin(omega t)
        cos     amp, omega        F = amp * cos(omega t)
        poly    coeffs            F = sum coeffs[j] t**j
        custom  func              any callable; no closed-form F_beta
    """

    kind: str = "zero"
    params: dict = field(default_factory=dict)
    func: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in FORCING_KINDS:
            raise DomainError(f"unknown forcing kind {self.kind!r}")
        if self.kind == "custom" and self.func is None:
            raise DomainError("custom forcing needs a callable")

    def _p(self, key, default):
        return float(self.params.get(key, default))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        k = self.kind
        if k == "zero":
            return np.zeros_like(t)
        if k == "const":
            return np.full_like(t, self._p("value", 1.0))
        if k == "exp":
            return self._p("amp", 1.0) * np.exp(self._p("rate", 1.0) * t)
        if k == "sin":
            return self._p("amp", 1.0) * np.sin(self._p("omega", 1.0) * t)
        if k == "cos":
            return self._p("amp", 1.0) * np.cos(self._p("omega", 1.0) * t)
        if k == "poly":
            return np.polynomial.polynomial.polyval(t, list(self.params.get("coeffs", (0.0,))))
        return np.asarray(self.func(t), dtype=float)

    def transformed(self, beta, t):
        """``F_beta(t) = E[F(T_beta(t))]``; None for custom forcing."""
        b = float(beta)
        t = np.asarray(t, dtype=float)
        tb = t ** b
        k = self.kind
        if k == "zero":
            return np.zeros_like(t)
        if k == "const":
            return np.full_like(t, self._p("value", 1.0))
        if k == "exp":
            return self._p("amp", 1.0) * mittag_leffler(self._p("rate", 1.0) * tb, b)
        if k in ("sin", "cos"):
            w = self._p("omega", 1.0)
            amp = self._p("amp", 1.0)
            if k == "cos":
                return amp * mittag_leffler(-(w * w) * tb * tb, 2 * b)
            return amp * w * tb * mittag_leffler(-(w * w) * tb * tb, 2 * b, b + 1)
        if k == "poly":
            out = np.zeros_like(t)
            for j, c in enumerate(self.params.get("coeffs", (0.0,))):
                if c:
                    out = out + c * math.exp(math.lgamma(j + 1) - loggamma(j * b + 1)) * t ** (j * b)
            return out
        return None

    def describe(self):
        k = self.kind
        if k == "zero":
            return "F(t) = 0"
        if k == "const":
            return f"F(t) = {self._p('value', 1.0):g}"
        if k == "exp":
            return f"F(t) = {self._p('amp', 1.0):g} exp({self._p('rate', 1.0):g} t), F_beta = amp E_beta(rate t^beta)"
        if k == "sin":
            return f"F(t) = {self._p('amp', 1.0):g} sin({self._p('omega', 1.0):g} t), F_beta = amp w t^beta E_(2beta,beta+1)(-w^2 t^(2beta))"
        if k == "cos":
            return f"F(t) = {self._p('amp', 1.0):g} cos({self._p('omega', 1.0):g} t), F_beta = amp E_(2beta)(-w^2 t^(2beta))"
        if k == "poly":
            return f"F(t) = polynomial {tuple(self.params.get('coeffs', ()))}, t^j -> j! t^(j beta)/Gamma(j beta + 1)"
        return "F(t) = custom callable"


@dataclass(frozen=True)
class LinearFdeProblem:
    """``sum_k a_k (D^beta)^k y + a_{n+1} y = F_beta`` solved through its ODE.

    ``coefficients = (a_1, ..., a_n, a_{n+1})``: ``a_k`` multiplies the
    k-fold sequential Caputo derivative (``z^(k)`` on the ODE side) and the
    last entry multiplies ``y``.  ``initial_conditions`` are
    ``z(0), z'(0), ..., z^(n-1)(0)``.
    """

    coefficients: tuple
    initial_conditions: tuple
    beta: FracOrder
    forcing: Forcing = field(default_factory=Forcing)
    preset: Optional[str] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        ics = tuple(float(c) for c in self.initial_conditions)
        if len(coeffs) < 2:
            raise DomainError("need at least a_1 and a_2 (order n >= 1)")
        if coeffs[-2] == 0.0:
            raise DomainError("leading coefficient a_n must be non-zero")
        if len(ics) != len(coeffs) - 1:
            raise DomainError(f"order {len(coeffs) - 1} problem needs {len(coeffs) - 1} initial conditions, got {len(ics)}")
        if not all(math.isfinite(v) for v in coeffs + ics):
            raise DomainError("coefficients and initial conditions must be finite")
        beta = self.beta if isinstance(self.beta, FracOrder) else FracOrder(self.beta)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "initial_conditions", ics)
        object.__setattr__(self, "beta", beta)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def with_beta(self, beta):
        return LinearFdeProblem(self.coefficients, self.initial_conditions, FracOrder(beta),
                                self.forcing, self.preset, dict(self.params))

    def ode_system(self) -> OdeSystem:
        """Companion-form first-order system for ``z, z', ..., z^(n-1)``."""
        n = self.order
        a = np.asarray(self.coefficients)
        lead = a[n - 1]
        # z^(n) = (F - a_{n+1} z - sum_{k<n} a_k z^(k)) / a_n
        lower = np.concatenate(([a[n]], a[: n - 1])) / lead
        forcing = self.forcing

        if forcing.kind == "zero":
            def rhs(t, y):
                out = np.empty_like(y)
                out[:-1] = y[1:]
                out[-1] = -(lower @ y)
                return out
        else:
            def rhs(t, y):
                out = np.empty_like(y)
                out[:-1] = y[1:]
                out[-1] = float(forcing(t)) / lead - (lower @ y)
                return out

        return OdeSystem(rhs, self.initial_conditions, 0.0)


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing evaluation times; ``0`` is allowed only first."""

    times: tuple

    def __post_init__(self):
        t = tuple(float(v) for v in self.times)
        if not t:
            raise DomainError("time grid is empty")
        if not all(math.isfinite(v) for v in t):
            raise DomainError("time grid must be finite")
        if t[0] < 0 or any(b <= a for a, b in zip(t, t[1:])):
            raise DomainError("time grid must be non-negative and strictly increasing")
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, t_max, n_points, include_zero=False):
        """``n_points`` equispaced points on ``(0, t_max]`` (or ``[0, t_max]``)."""
        if include_zero:
            return cls(tuple(np.linspace(0.0, t_max, n_points)))
        return cls(tuple(t_max * np.arange(1, n_points + 1) / n_points))

    def __len__(self):
        return len(self.times)

    def as_array(self):
        return np.asarray(self.times)
