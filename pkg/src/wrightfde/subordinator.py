"""Sampling the inverse stable time ``T_beta(t)``.

The forward variate ``S`` (one-sided stable, ``E[exp(-lam S)] = exp(-lam**beta)``)
is drawn with Kanter's exact representation

    S = sin(beta pi U) / sin(pi U)**(1/beta) * (sin((1-beta) pi U) / E)**((1-beta)/beta)

with ``U ~ Uniform(0, 1)`` and ``E ~ Exp(1)``.  For fixed ``t`` the inverse
time has the same law as ``(t / S)**beta``; only these one-time marginals
are simulated, never whole paths.

Random streams are Philox counter-based generators keyed by
``(seed, stream_id)``, so a batch depends only on its own key and not on the
order or thread in which batches are produced.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOrderError, DomainError
from .specfun import FracOrder


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not 0 <= int(v) < 2**64:
                raise DomainError(f"{name} must be a 64-bit unsigned integer, got {v!r}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class TimeSampleBatch:
    t: float
    samples: np.ndarray

    @property
    def m(self) -> int:
        return len(self.samples)


def _order(beta) -> FracOrder:
    return beta if isinstance(beta, FracOrder) else FracOrder(beta)


def _log_kanter(beta, u, e):
    """log S for uniform ``u`` and unit exponential ``e`` (arrays)."""
    pu = np.pi * u
    return (
        np.log(np.sin(beta * pu))
        - np.log(np.sin(pu)) / beta
        + (1.0 - beta) / beta * (np.log(np.sin((1.0 - beta) * pu)) - np.log(e))
    )


def draw_base(gen: np.random.Generator, m: int):
    """The (U, E) pairs behind ``m`` stable draws.

    ``U`` is taken from the open interval so every log above is finite.
    """
    u = gen.random(m)
    u = np.where(u == 0.0, 0.5 * np.finfo(float).tiny, u)
    e = gen.standard_exponential(m)
    return u, e


def stable_from_base(beta: float, u, e):
    return np.exp(_log_kanter(beta, u, e))


def inverse_time_from_base(beta: float, t: float, u, e):
    # (t / S)**beta, computed in logs so huge or tiny S cannot overflow
    return np.exp(beta * (math.log(t) - _log_kanter(beta, u, e)))


def sample_stable_subordinator(beta, rng: RngStream, m=None):
    """One (or ``m``) positive one-sided ``beta``-stable variates.

    At ``beta == 1`` the law is the point mass at 1 and
    :class:`DegenerateOrderError` is raised; callers wanting the constant
    should special-case it.
    """
    order = _order(beta)
    if order.degenerate:
        raise DegenerateOrderError("the 1-stable subordinator is the constant 1")
    u, e = draw_base(rng.generator(), 1 if m is None else m)
    s = stable_from_base(order.beta, u, e)
    return float(s[0]) if m is None else s


def sample_inverse_time(beta, t, rng: RngStream) -> float:
    """One draw of ``T_beta(t)``; exactly ``t`` when ``beta == 1``."""
    return float(sample_batch(beta, t, 1, rng).samples[0])


def sample_batch(beta, t, m: int, rng: RngStream) -> TimeSampleBatch:
    """``m`` independent draws of ``T_beta(t)`` from one stream."""
    order = _order(beta)
    t = float(t)
    if not t > 0:
        raise DomainError(f"inverse time needs t > 0, got {t!r}")
    if int(m) < 1:
        raise DomainError(f"batch size must be >= 1, got {m!r}")
    if order.degenerate:
        return TimeSampleBatch(t, np.full(int(m), t))
    u, e = draw_base(rng.generator(), int(m))
    return TimeSampleBatch(t, inverse_time_from_base(order.beta, t, u, e))
