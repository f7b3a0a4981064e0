"""Dormand-Prince 5(4) integrator with Hairer's quartic dense output."""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, IntegrationError

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10
MAX_STEPS = 1_000_000

# Butcher tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# fifth minus fourth order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# dense output (Hairer, Norsett & Wanner, contd5)
_D = np.array([
    -12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
    -10690763975 / 1880347072, 701980252875 / 199316789632,
    -1453857185 / 822651844, 69997945 / 29380423,
])


@dataclass(frozen=True)
class OdeSystem:
    """First-order system ``y' = rhs(t, y)`` with ``y(t0) = initial_state``."""

    rhs: Callable[[float, np.ndarray], np.ndarray]
    initial_state: tuple
    t0: float = 0.0

    def __post_init__(self):
        y0 = np.asarray(self.initial_state, dtype=float).ravel()
        if y0.size < 1 or not np.all(np.isfinite(y0)):
            raise DomainError("initial state must be a non-empty finite vector")
        object.__setattr__(self, "initial_state", tuple(y0.tolist()))

    @property
    def dimension(self) -> int:
        return len(self.initial_state)


@dataclass(frozen=True)
class DenseSolution:
    """Piecewise quartic interpolant over accepted steps.

    ``coeffs[i]`` holds the five vectors ``r1..r5`` of step ``i`` with
    ``y(t_i + theta h) = r1 + theta (r2 + (1-theta)(r3 + theta (r4 + (1-theta) r5)))``.
    """

    knots: np.ndarray
    states: np.ndarray
    coeffs: np.ndarray
    order: int = 4

    @property
    def t_span(self):
        return float(self.knots[0]), float(self.knots[-1])

    def __call__(self, t):
        return eval_at(self, t)


def _initial_step(f, t0, y0, f0, direction, rtol, atol):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = f(t0 + h0 * direction, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def _step(f, t, y, k1, h):
    k = np.empty((7, y.size))
    k[0] = k1
    for s in range(1, 7):
        k[s] = f(t + _C[s] * h, y + h * (np.asarray(_A[s]) @ k[:s]))
    y_new = y + h * (_B @ k)
    err = h * (_E @ k)
    return y_new, err, k


def integrate(sys: OdeSystem, t_end: float, rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
              fixed_step: Optional[float] = None, max_steps: int = MAX_STEPS) -> DenseSolution:
    """Integrate from ``sys.t0`` to ``t_end`` and keep the dense output.

    With ``fixed_step`` the error control is switched off and steps of that
    size are taken (the last one shortened to land on ``t_end``).
    """
    t0 = float(sys.t0)
    t_end = float(t_end)
    if t_end < t0:
        raise DomainError("t_end must be >= t0")
    if not (rtol > 0 and atol > 0):
        raise DomainError("tolerances must be positive")

    def f(t, y):
        return np.asarray(sys.rhs(t, y), dtype=float)

    y = np.asarray(sys.initial_state, dtype=float)
    knots = [t0]
    states = [y.copy()]
    coeffs = []
    if t_end == t0:
        return DenseSolution(np.array(knots), np.array(states), np.empty((0, 5, y.size)))

    k1 = f(t0, y)
    if fixed_step is not None:
        h = float(fixed_step)
        if not h > 0:
            raise DomainError("fixed_step must be positive")
    else:
        h = _initial_step(f, t0, y, k1, 1.0, rtol, atol)
    t = t0
    n_steps = 0
    while t < t_end:
        if n_steps >= max_steps:
            raise IntegrationError(f"exceeded {max_steps} steps", t)
        h = min(h, t_end - t)
        if fixed_step is None and h < 16 * np.finfo(float).eps * max(abs(t), 1.0):
            raise IntegrationError("step size underflow", t)
        y_new, err, k = _step(f, t, y, k1, h)
        n_steps += 1
        if fixed_step is not None:
            accept = True
        else:
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            enorm = math.sqrt(float(np.mean((err / scale) ** 2)))
            accept = enorm <= 1.0
            fac = 0.9 * enorm ** -0.2 if enorm > 0 else 5.0
            h_next = h * min(5.0, max(0.2, fac))
        if not np.all(np.isfinite(y_new)):
            raise IntegrationError("non-finite state", t)
        if accept:
            r2 = y_new - y
            r3 = h * k[0] - r2
            r4 = r2 - h * k[6] - r3
            r5 = h * (_D @ k)
            coeffs.append(np.stack([y, r2, r3, r4, r5]))
            t = t + h if t + h < t_end else t_end
            y = y_new
            k1 = k[6]
            knots.append(t)
            states.append(y.copy())
        if fixed_step is None:
            h = h_next if accept else min(h_next, h)
    return DenseSolution(np.array(knots), np.array(states), np.array(coeffs))


def eval_at(sol: DenseSolution, query_points) -> np.ndarray:
    """States at ``query_points``; shape ``(len(query_points), dimension)``.

    Knot queries return the stored state exactly.
    """
    q = np.asarray(query_points, dtype=float)
    scalar = q.ndim == 0
    q = np.atleast_1d(q)
    dim = sol.states.shape[1]
    if q.size == 0:
        return np.empty((0, dim))
    lo, hi = sol.t_span
    if q.min() < lo or q.max() > hi:
        raise DomainError(f"query outside the solution span [{lo}, {hi}]")
    if len(sol.knots) == 1:
        out = np.repeat(sol.states[:1], q.size, axis=0)
        return out[0] if scalar else out
    idx = np.clip(np.searchsorted(sol.knots, q, side="right") - 1, 0, len(sol.knots) - 2)
    t0 = sol.knots[idx]
    h = sol.knots[idx + 1] - t0
    th = ((q - t0) / h)[:, None]
    c = sol.coeffs[idx]
    out = c[:, 0] + th * (c[:, 1] + (1 - th) * (c[:, 2] + th * (c[:, 3] + (1 - th) * c[:, 4])))
    exact = q == t0
    out[exact] = sol.states[idx[exact]]
    at_end = q == sol.knots[-1]
    out[at_end] = sol.states[-1]
    return out[0] if scalar else out
