"""Small feedforward network that learns next-step prediction from lag windows.

Plain numpy: tanh hidden layers, linear output, full-batch gradient descent
with optional momentum.  Inputs and targets share one affine map to
``[-1, 1]`` fitted on the training rows.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, TrainingDivergedError

_ACT = {
    "tanh": (np.tanh, lambda a: 1.0 - a * a),
    "sigmoid": (lambda z: 0.5 * (1.0 + np.tanh(0.5 * z)), lambda a: a * (1.0 - a)),
    "relu": (lambda z: np.maximum(z, 0.0), lambda a: (a > 0).astype(float)),
}


@dataclass(frozen=True)
class MlpConfig:
    hidden: tuple = (10, 10, 10)
    activation: str = "tanh"
    learning_rate: float = 1e-2
    epochs: int = 5000
    batch_size: Optional[int] = None  # None = full batch
    momentum: float = 0.9
    lag: int = 3
    seed: int = 0
    patience: int = 500

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if any(h < 1 for h in self.hidden):
            raise DomainError("layer widths must be positive")
        if self.lag < 1:
            raise DomainError("lag window must be >= 1")
        if self.activation not in _ACT:
            raise DomainError(f"unknown activation {self.activation!r}")
        if not (self.learning_rate > 0 and self.epochs >= 1 and 0 <= self.momentum < 1):
            raise DomainError("need learning_rate > 0, epochs >= 1, 0 <= momentum < 1")

    def widths(self):
        return (self.lag,) + self.hidden + (1,)


@dataclass
class LagDataset:
    lag: int
    x_train: np.ndarray
    y_train: np.ndarray
    x_val: np.ndarray
    y_val: np.ndarray
    x_test: np.ndarray
    y_test: np.ndarray


def _values(traj):
    v = getattr(traj, "mc_mean", traj)
    return np.asarray(v, dtype=float).ravel()


def lag_rows(values, w):
    """Sliding windows ``values[i:i+w] -> values[i+w]``."""
    v = np.asarray(values, dtype=float)
    if v.size < w + 1:
        raise DomainError(f"trajectory of length {v.size} too short for lag {w}")
    idx = np.arange(v.size - w)[:, None] + np.arange(w)[None, :]
    return v[idx], v[w:]


def build_lag_dataset(trajectories: Sequence, w: int, splits=(0.6, 0.2, 0.2)) -> LagDataset:
    """Rows from whole trajectories; the split is by trajectory, in order.

    Trajectories may be :class:`TrajectoryTable` objects (``mc_mean`` is
    used, ``t`` must be uniform) or plain sequences.
    """
    if w < 1:
        raise DomainError("lag window must be >= 1")
    n = len(trajectories)
    if n == 0:
        raise DomainError("no trajectories")
    fr = np.asarray(splits, dtype=float)
    if fr.size != 3 or np.any(fr < 0) or not math.isclose(fr.sum(), 1.0):
        raise DomainError("splits must be three non-negative fractions summing to 1")
    for tr in trajectories:
        t = getattr(tr, "t", None)
        if t is not None and len(t) > 2:
            d = np.diff(np.asarray(t, dtype=float))
            if np.max(np.abs(d - d[0])) > 1e-9 * max(abs(d[0]), 1e-300):
                raise DomainError("trajectory grid is not uniform")
    if n >= 3:
        n_val = max(1, int(round(fr[1] * n))) if fr[1] > 0 else 0
        n_test = max(1, int(round(fr[2] * n))) if fr[2] > 0 else 0
        n_train = n - n_val - n_test
    else:
        n_train, n_val, n_test = n, 0, 0
    if n_train < 1:
        raise DomainError("no trajectories left for training")

    def stack(group):
        if not group:
            return np.empty((0, w)), np.empty(0)
        rows = [lag_rows(_values(tr), w) for tr in group]
        return np.vstack([r[0] for r in rows]), np.concatenate([r[1] for r in rows])

    tr = stack(trajectories[:n_train])
    va = stack(trajectories[n_train:n_train + n_val])
    te = stack(trajectories[n_train + n_val:])
    return LagDataset(w, tr[0], tr[1], va[0], va[1], te[0], te[1])


# ---------------------------------------------------------------------------
# network
# ---------------------------------------------------------------------------

def init_params(widths, rng):
    """Glorot-uniform weights, zero biases; ``W[l]`` has shape (n_in, n_out)."""
    params = []
    for n_in, n_out in zip(widths[:-1], widths[1:]):
        lim = math.sqrt(6.0 / (n_in + n_out))
        params.append((rng.uniform(-lim, lim, (n_in, n_out)), np.zeros(n_out)))
    return params


def forward(params, x, activation="tanh"):
    act = _ACT[activation][0]
    acts = [x]
    a = x
    for i, (W, b) in enumerate(params):
        z = a @ W + b
        a = z if i == len(params) - 1 else act(z)
        acts.append(a)
    return a[:, 0], acts


def loss_and_grad(params, x, y, activation="tanh"):
    """Mean squared error and its gradient with respect to every W, b."""
    dact = _ACT[activation][1]
    out, acts = forward(params, x, activation)
    r = out - y
    loss = float(np.mean(r * r))
    delta = (2.0 / y.size) * r[:, None]
    grads = [None] * len(params)
    for i in range(len(params) - 1, -1, -1):
        W, _ = params[i]
        grads[i] = (acts[i].T @ delta, delta.sum(axis=0))
        if i:
            delta = (delta @ W.T) * dact(acts[i])
    return loss, grads


def flatten(params):
    return np.concatenate([np.concatenate([W.ravel(), b]) for W, b in params])


def unflatten(vec, widths):
    out, k = [], 0
    for n_in, n_out in zip(widths[:-1], widths[1:]):
        W = vec[k:k + n_in * n_out].reshape(n_in, n_out)
        k += n_in * n_out
        b = vec[k:k + n_out]
        k += n_out
        out.append((W.copy(), b.copy()))
    return out


@dataclass
class TrainedModel:
    config: MlpConfig
    params: list
    lo: float
    hi: float

    def _scale(self, v):
        return 2.0 * (np.asarray(v, dtype=float) - self.lo) / (self.hi - self.lo) - 1.0

    def _unscale(self, s):
        return self.lo + 0.5 * (np.asarray(s) + 1.0) * (self.hi - self.lo)

    def predict(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.config.lag:
            raise DomainError(f"inputs need {self.config.lag} columns")
        out, _ = forward(self.params, self._scale(x), self.config.activation)
        return self._unscale(out)

    def mse(self, x, y):
        if len(y) == 0:
            return float("nan")
        r = self.predict(x) - np.asarray(y, dtype=float)
        return float(np.mean(r * r))

    def to_dict(self):
        c = self.config
        return {
            "widths": list(c.widths()),
            "activation": c.activation,
            "lag": c.lag,
            "normalization": {"lo": self.lo, "hi": self.hi},
            "weights": [W.tolist() for W, _ in self.params],
            "biases": [b.tolist() for _, b in self.params],
            "config": {"learning_rate": c.learning_rate, "epochs": c.epochs, "momentum": c.momentum,
                       "seed": c.seed, "patience": c.patience, "batch_size": c.batch_size},
        }

    @classmethod
    def from_dict(cls, d):
        widths = d["widths"]
        cfg = dict(d.get("config", {}))
        config = MlpConfig(hidden=tuple(widths[1:-1]), activation=d["activation"], lag=int(d["lag"]), **cfg)
        params = [(np.asarray(W, dtype=float), np.asarray(b, dtype=float))
                  for W, b in zip(d["weights"], d["biases"])]
        return cls(config, params, float(d["normalization"]["lo"]), float(d["normalization"]["hi"]))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class LossHistory:
    train: list = field(default_factory=list)
    val: list = field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["epoch", "train_loss", "val_loss"])
            for i, tr in enumerate(self.train):
                va = self.val[i] if i < len(self.val) else float("nan")
                wr.writerow([i, format(tr, ".17g"), format(va, ".17g")])


def train(config: MlpConfig, data: LagDataset):
    """Fit the network; returns ``(TrainedModel, LossHistory)``.

    Losses are mean squared errors on the scaled data.  Training stops when
    the validation loss has not improved for ``patience`` epochs, and the
    best-validation weights are kept.  :class:`TrainingDivergedError` is
    raised if the training loss stays above 10x its initial value for 5
    consecutive epochs.
    """
    if data.lag != config.lag:
        raise DomainError(f"dataset lag {data.lag} differs from config lag {config.lag}")
    if data.y_train.size == 0:
        raise DomainError("empty training split")
    rng = np.random.default_rng(config.seed)
    both = np.concatenate((data.x_train.ravel(), data.y_train))
    lo, hi = float(both.min()), float(both.max())
    if hi - lo < 1e-12 * max(1.0, abs(lo)):
        lo, hi = lo - 1.0, hi + 1.0  # constant data
    model = TrainedModel(config, init_params(config.widths(), rng), lo, hi)
    xs, ys = model._scale(data.x_train), model._scale(data.y_train)
    have_val = data.y_val.size > 0
    xv, yv = (model._scale(data.x_val), model._scale(data.y_val)) if have_val else (None, None)

    params = model.params
    vel = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
    hist = LossHistory()
    best = (math.inf, [(W.copy(), b.copy()) for W, b in params])
    initial = None
    bad = 0
    n = ys.size
    bs = n if config.batch_size is None else max(1, min(int(config.batch_size), n))
    for epoch in range(config.epochs):
        order = rng.permutation(n) if bs < n else None
        for s in range(0, n, bs):
            sel = order[s:s + bs] if order is not None else slice(None)
            _, grads = loss_and_grad(params, xs[sel], ys[sel], config.activation)
            new_params, new_vel = [], []
            for (W, b), (vW, vb), (gW, gb) in zip(params, vel, grads):
                vW = config.momentum * vW - config.learning_rate * gW
                vb = config.momentum * vb - config.learning_rate * gb
                new_params.append((W + vW, b + vb))
                new_vel.append((vW, vb))
            params, vel = new_params, new_vel
        tr_loss = float(np.mean((forward(params, xs, config.activation)[0] - ys) ** 2))
        if not math.isfinite(tr_loss):
            raise TrainingDivergedError(f"non-finite training loss at epoch {epoch}")
        if initial is None:
            initial = tr_loss
        bad = bad + 1 if tr_loss > 10.0 * initial else 0
        if bad >= 5:
            raise TrainingDivergedError(f"training loss above 10x initial for 5 epochs (epoch {epoch})")
        hist.train.append(tr_loss)
        score = tr_loss
        if have_val:
            score = float(np.mean((forward(params, xv, config.activation)[0] - yv) ** 2))
            hist.val.append(score)
        if score < best[0]:
            best = (score, [(W.copy(), b.copy()) for W, b in params])
            hist.best_epoch = epoch
        elif epoch - hist.best_epoch >= config.patience:
            hist.stopped_early = True
            break
    model.params = best[1]
    return model, hist


def predict_rollout(model: TrainedModel, seed_window, steps: int):
    """Autoregressive forecast: each prediction is fed back as the newest input."""
    window = list(np.asarray(seed_window, dtype=float).ravel())
    if len(window) != model.config.lag:
        raise DomainError(f"seed window must have {model.config.lag} values")
    out = []
    for _ in range(int(steps)):
        nxt = float(model.predict(np.array([window]))[0])
        out.append(nxt)
        window = window[1:] + [nxt]
    return out


# ---------------------------------------------------------------------------
# data generation and the lag experiment
# ---------------------------------------------------------------------------

def simulate_trajectories(preset, beta, n_traj=50, t_max=5.0, n_points=100, m=10_000, seed=0,
                          threads=1, y0_key=None):
    """``n_traj`` coupled Monte Carlo trajectories with ``y0 ~ U(0, 1)``.

    Trajectory ``k`` uses Monte Carlo seed ``seed + 1 + k``; the initial
    values come from a separate generator keyed by ``seed``.  ``y0_key``
    defaults to the preset's initial-value parameter.
    """
    from .catalog import get_preset
    from .mcsolver import compare, solve_mc
    from .problems import TimeGrid

    p = get_preset(preset) if isinstance(preset, str) else preset
    y0_key = y0_key or p.ic_key
    if y0_key is None:
        raise DomainError(f"preset {p.name!r} has no initial-value parameter to randomize")
    grid = TimeGrid.uniform(t_max, n_points, include_zero=True)
    y0s = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,))).uniform(0.0, 1.0, n_traj)
    out = []
    for k, y0 in enumerate(y0s):
        prob = p.problem(beta, **{y0_key: float(y0)})
        est = solve_mc(prob, grid, m, seed + 1 + k, threads=threads, coupled=True)
        out.append(compare(est, None))
    return out


def memory_length_experiment(preset, betas, lags=(1, 2, 3, 5), config: Optional[MlpConfig] = None,
                             n_traj=50, t_max=5.0, n_points=100, m=10_000, seed=0, threads=1):
    """Held-out MSE for every (beta, lag).

    Returns rows ``{"beta", "lag", "test_mse", "ratio_to_best"}``; the
    comparison between lags is reported, not asserted.
    """
    lags = list(lags)
    if not lags:
        raise DomainError("need at least one lag")
    if not list(betas):
        raise DomainError("need at least one beta")
    base = config or MlpConfig()
    rows = []
    for beta in betas:
        trajs = simulate_trajectories(preset, beta, n_traj, t_max, n_points, m, seed, threads)
        mses = {}
        for w in lags:
            cfg = MlpConfig(base.hidden, base.activation, base.learning_rate, base.epochs,
                            base.batch_size, base.momentum, w, base.seed, base.patience)
            data = build_lag_dataset(trajs, w)
            model, _ = train(cfg, data)
            mses[w] = model.mse(data.x_test, data.y_test)
        best = min(mses.values())
        for w in lags:
            rows.append({"beta": float(beta), "lag": w, "test_mse": mses[w],
                         "ratio_to_best": mses[w] / best if best > 0 else float("nan")})
    return rows
