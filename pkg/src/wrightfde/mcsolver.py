"""Monte Carlo solution ``y_beta(t) = E[z(T_beta(t))]`` of linear sequential FDEs.

The associated ODE is integrated once, up to the largest sampled time over
the whole grid, and its dense output is evaluated at every sample.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .catalog import PRESETS, second_order_homogeneous, constants_from_initial
from .errors import DomainError
from .odeint import DEFAULT_ATOL, DEFAULT_RTOL, DenseSolution, eval_at, integrate
from .problems import LinearFdeProblem, TimeGrid
from .subordinator import RngStream, draw_base, inverse_time_from_base

# stream used for the shared base draws of ``coupled`` runs
COUPLED_STREAM = 2**63


@dataclass(frozen=True)
class McEstimate:
    t: float
    mean: float
    stderr: float
    m: int


@dataclass
class TrajectoryTable:
    """Columns ``t, mc_mean, mc_stderr, closed_form, abs_err``.

    ``closed_form`` and ``abs_err`` are NaN where no closed form exists.
    """

    t: np.ndarray
    mc_mean: np.ndarray
    mc_stderr: np.ndarray
    closed_form: np.ndarray
    abs_err: np.ndarray
    k: float = 4.0

    COLUMNS = ("t", "mc_mean", "mc_stderr", "closed_form", "abs_err")

    def __len__(self):
        return len(self.t)

    @property
    def err_within_k_se(self) -> np.ndarray:
        return self.abs_err <= self.k * self.mc_stderr

    def fraction_within(self) -> float:
        ok = self.err_within_k_se[np.isfinite(self.abs_err)]
        return float(ok.mean()) if ok.size else float("nan")

    def rows(self):
        cols = [getattr(self, c) for c in self.COLUMNS]
        return [tuple(float(c[i]) for c in cols) for i in range(len(self))]


def _sample_times(beta, t, m, seed, i, coupled_base):
    if beta == 1.0:
        return np.full(m, t)
    if coupled_base is not None:
        u, e = coupled_base
    else:
        u, e = draw_base(RngStream(seed, i).generator(), m)
    return inverse_time_from_base(beta, t, u, e)


def _summarize(t, vals):
    m = vals.size
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(m))
    return McEstimate(t, mean, stderr, m)


def solve_mc(prob: LinearFdeProblem, grid: TimeGrid, m: int, seed: int, threads: int = 1,
             coupled: bool = False, rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL):
    """Monte Carlo estimates of ``y_beta`` on ``grid``.

    Grid point ``i`` draws its batch from stream ``(seed, i)``, so results do
    not depend on ``threads``.  With ``coupled`` one base draw is shared by
    every grid point, which gives smooth but correlated curves.
    ``t = 0`` returns ``z(0)`` with zero standard error.
    """
    m = int(m)
    if m < 2:
        raise DomainError("need m >= 2 replicates for a standard error")
    if not isinstance(grid, TimeGrid):
        grid = TimeGrid(tuple(grid))
    RngStream(seed)  # validates the seed
    beta = prob.beta.beta
    times = grid.as_array()
    positive = [(i, t) for i, t in enumerate(times) if t > 0]

    base = draw_base(RngStream(seed, COUPLED_STREAM).generator(), m) if coupled and beta < 1 else None

    def draw(item):
        i, t = item
        return _sample_times(beta, t, m, seed, i, base)

    threads = max(1, int(threads))
    if threads > 1 and len(positive) > 1:
        with ThreadPoolExecutor(threads) as pool:
            batches = list(pool.map(draw, positive))
    else:
        batches = [draw(item) for item in positive]

    t_top = max((float(b.max()) for b in batches), default=0.0)
    sol = integrate(prob.ode_system(), t_top, rtol=rtol, atol=atol)

    def evaluate(batch):
        return eval_at(sol, batch)[:, 0]

    if threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(threads) as pool:
            values = list(pool.map(evaluate, batches))
    else:
        values = [evaluate(b) for b in batches]

    out = []
    by_index = {i: v for (i, _), v in zip(positive, values)}
    z0 = prob.initial_conditions[0]
    for i, t in enumerate(times):
        if t == 0:
            out.append(McEstimate(0.0, z0, 0.0, m))
        else:
            out.append(_summarize(float(t), by_index[i]))
    return out


def ode_solution(prob: LinearFdeProblem, t_end: float, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL) -> DenseSolution:
    return integrate(prob.ode_system(), t_end, rtol=rtol, atol=atol)


def solve_closed_form(prob: LinearFdeProblem, grid) -> Optional[np.ndarray]:
    """Analytic ``y_beta`` on the grid, or None when no formula applies.

    Presets use their catalog formula.  Otherwise unforced first- and
    second-order problems are handled through their characteristic roots.
    """
    times = grid.as_array() if isinstance(grid, TimeGrid) else np.asarray(grid, dtype=float)
    beta = prob.beta.beta
    if prob.preset is not None and prob.preset in PRESETS:
        preset = PRESETS[prob.preset]
        if preset.closed is not None:
            return np.asarray(preset.closed(beta, times, prob.params), dtype=float)
        return None
    if prob.forcing.kind != "zero":
        return None
    a = prob.coefficients
    if prob.order == 1:
        from .specfun import mittag_leffler
        return prob.initial_conditions[0] * np.asarray(mittag_leffler(-(a[1] / a[0]) * times ** beta, beta))
    if prob.order == 2:
        a2, a1, a0 = a[1], a[0], a[2]
        c1, c2 = constants_from_initial(a2, a1, a0, *prob.initial_conditions)
        return np.asarray(second_order_homogeneous(a2, a1, a0, c1, c2, beta, times), dtype=float)
    return None


def compare(mc, cf, k: float = 4.0) -> TrajectoryTable:
    """Tabulate estimates against closed-form values (``cf`` may be None)."""
    t = np.array([e.t for e in mc], dtype=float)
    mean = np.array([e.mean for e in mc], dtype=float)
    se = np.array([e.stderr for e in mc], dtype=float)
    if cf is None:
        cfv = np.full_like(t, np.nan)
    else:
        cfv = np.asarray(cf, dtype=float).ravel()
        if cfv.size != t.size:
            raise DomainError(f"length mismatch: {t.size} estimates vs {cfv.size} closed-form values")
    return TrajectoryTable(t, mean, se, cfv, np.abs(mean - cfv), k)
