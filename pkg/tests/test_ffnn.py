import json

import numpy as np
import pytest

from wrightfde.errors import DomainError, TrainingDivergedError
from wrightfde.ffnn import (
    LagDataset, MlpConfig, TrainedModel, build_lag_dataset, flatten, init_params, lag_rows, loss_and_grad,
    memory_length_experiment, predict_rollout, simulate_trajectories, train, unflatten,
)

GRAD_CONFIGS = [((3,), "tanh", 2), ((4, 3), "tanh", 3), ((5, 5, 5), "tanh", 1), ((3, 2), "sigmoid", 4), ((6,), "tanh", 5)]


@pytest.mark.parametrize("hidden,act,lag", GRAD_CONFIGS)
def test_gradient_matches_central_differences(hidden, act, lag):
    rng = np.random.default_rng(hash((hidden, act, lag)) % 2**32)
    widths = (lag,) + hidden + (1,)
    x = rng.uniform(-1, 1, (7, lag))
    y = rng.uniform(-1, 1, 7)
    h = 1e-6
    for _ in range(100):
        params = init_params(widths, rng)
        params = [(W, rng.normal(0, 0.3, b.shape)) for W, b in params]
        _, grads = loss_and_grad(params, x, y, act)
        g = flatten(grads)
        v = flatten(params)
        fd = np.empty_like(v)
        for k in range(v.size):
            vp, vm = v.copy(), v.copy()
            vp[k] += h
            vm[k] -= h
            fd[k] = (loss_and_grad(unflatten(vp, widths), x, y, act)[0]
                     - loss_and_grad(unflatten(vm, widths), x, y, act)[0]) / (2 * h)
        assert np.linalg.norm(g - fd) <= 1e-5 * max(np.linalg.norm(fd), 1e-8)


def test_flatten_roundtrip():
    widths = (3, 4, 1)
    p = init_params(widths, np.random.default_rng(0))
    q = unflatten(flatten(p), widths)
    assert all(np.array_equal(a, c) and np.array_equal(b, d) for (a, b), (c, d) in zip(p, q))


class TestWindows:
    def test_single_row(self):
        x, y = lag_rows([1, 2, 3, 4], 3)
        assert x.tolist() == [[1, 2, 3]] and y.tolist() == [4]

    def test_lag_one(self):
        x, y = lag_rows([1, 2, 3, 4], 1)
        assert x.shape == (3, 1) and y.tolist() == [2, 3, 4]

    def test_too_short(self):
        with pytest.raises(DomainError):
            lag_rows([1, 2, 3], 3)

    def test_split_by_trajectory(self):
        trajs = [np.arange(10.0) + 100 * k for k in range(10)]
        d = build_lag_dataset(trajs, 2)
        assert d.y_train.size == 6 * 8 and d.y_val.size == 2 * 8 and d.y_test.size == 2 * 8
        train_vals = set(d.x_train.ravel()) | set(d.y_train)
        test_vals = set(d.x_test.ravel()) | set(d.y_test)
        assert not train_vals & test_vals
        assert np.all(np.diff(d.x_train, axis=1) == 1.0)

    def test_bad_splits(self):
        with pytest.raises(DomainError):
            build_lag_dataset([np.arange(5.0)] * 3, 1, splits=(0.5, 0.5, 0.5))

    def test_nonuniform_grid(self):
        class T:
            t = np.array([0.0, 1.0, 3.0])
            mc_mean = np.array([1.0, 2.0, 3.0])
        with pytest.raises(DomainError):
            build_lag_dataset([T()], 1)


def _dataset(fn, lag, n=30, length=20, seed=0):
    rng = np.random.default_rng(seed)
    trajs = []
    for _ in range(n):
        v = list(rng.uniform(-1, 1, lag))
        while len(v) < length:
            v.append(fn(v[-lag:]))
        trajs.append(np.array(v))
    return build_lag_dataset(trajs, lag)


def test_constant_target():
    d = _dataset(lambda w: 0.7, 2)
    d = LagDataset(2, np.full_like(d.x_train, 0.7), d.y_train, d.x_val[:0], d.y_val[:0], np.full((3, 2), 0.7), np.full(3, 0.7))
    model, _ = train(MlpConfig(hidden=(4,), lag=2, epochs=2000), d)
    assert model.mse(d.x_test, d.y_test) < 1e-8
    assert float(model.predict([[0.7, 0.7]])[0]) == pytest.approx(0.7, abs=1e-4)


def test_linear_map():
    d = _dataset(lambda w: float(np.mean(w)), 3)
    model, _ = train(MlpConfig(hidden=(), lag=3, epochs=5000, learning_rate=0.05), d)
    assert model.mse(d.x_test, d.y_test) <= 1e-6


def test_linear_loss_monotone():
    d = _dataset(lambda w: 0.3 * w[0] - 0.5 * w[1], 2)
    _, hist = train(MlpConfig(hidden=(), lag=2, epochs=300, learning_rate=0.01, momentum=0.0), d)
    assert np.all(np.diff(hist.train) <= 1e-15)


def test_deterministic():
    d = _dataset(lambda w: np.sin(w[0]) * 0.9, 2, seed=3)
    cfg = MlpConfig(hidden=(5, 5), lag=2, epochs=200, seed=4)
    (m1, h1), (m2, h2) = train(cfg, d), train(cfg, d)
    assert h1.train == h2.train and np.array_equal(flatten(m1.params), flatten(m2.params))


def test_divergence():
    d = _dataset(lambda w: 0.5 * w[0], 1)
    with pytest.raises(TrainingDivergedError):
        train(MlpConfig(hidden=(8,), lag=1, epochs=200, learning_rate=50.0, momentum=0.0), d)


def test_early_stop_and_csv(tmp_path):
    d = _dataset(lambda w: 0.5 * w[0], 1)
    _, hist = train(MlpConfig(hidden=(3,), lag=1, epochs=5000, patience=20), d)
    assert len(hist.train) == len(hist.val) <= 5000
    hist.write_csv(tmp_path / "loss.csv")
    lines = (tmp_path / "loss.csv").read_text().splitlines()
    assert lines[0] == "epoch,train_loss,val_loss" and len(lines) == len(hist.train) + 1


def test_lag_mismatch():
    d = _dataset(lambda w: 0.5 * w[0], 1)
    with pytest.raises(DomainError):
        train(MlpConfig(lag=2), d)


def test_json_roundtrip(tmp_path):
    d = _dataset(lambda w: 0.5 * w[0] + 0.2 * w[1], 2)
    model, _ = train(MlpConfig(hidden=(4, 4), lag=2, epochs=100), d)
    path = tmp_path / "model.json"
    model.save(path)
    doc = json.loads(path.read_text())
    assert doc["widths"] == [2, 4, 4, 1] and doc["activation"] == "tanh"
    back = TrainedModel.load(path)
    np.testing.assert_array_equal(back.predict(d.x_test), model.predict(d.x_test))


def test_rollout_basics():
    d = _dataset(lambda w: 0.5 * w[0] + 0.2 * w[1], 2)
    model, _ = train(MlpConfig(hidden=(4,), lag=2, epochs=100), d)
    assert predict_rollout(model, [0.1, 0.2], 0) == []
    one = predict_rollout(model, [0.1, 0.2], 1)
    assert one == [float(model.predict([[0.1, 0.2]])[0])]
    with pytest.raises(DomainError):
        predict_rollout(model, [0.1], 3)


def test_rollout_stays_in_range():
    trajs = simulate_trajectories("cubic-ffnn", 0.9, n_traj=15, n_points=60, m=2000, seed=2)
    d = build_lag_dataset(trajs, 3)
    model, _ = train(MlpConfig(lag=3, epochs=1500), d)
    lo, hi = float(d.y_train.min()), float(d.y_train.max())
    pad = 0.2 * (hi - lo)
    test = trajs[-1].mc_mean
    out = predict_rollout(model, test[:3], 20)
    assert all(lo - pad <= v <= hi + pad for v in out)


def test_memory_experiment_shape():
    cfg = MlpConfig(hidden=(4,), epochs=50)
    rows = memory_length_experiment("rc", [1.0], lags=(1, 2), config=cfg, n_traj=5, n_points=20, m=10)
    assert [r["lag"] for r in rows] == [1, 2] and min(r["ratio_to_best"] for r in rows) == 1.0
    with pytest.raises(DomainError):
        memory_length_experiment("rc", [1.0], lags=())


def test_config_validation():
    with pytest.raises(DomainError):
        MlpConfig(lag=0)
    with pytest.raises(DomainError):
        MlpConfig(activation="gelu")


def test_simulate_needs_initial_value_key():
    with pytest.raises(DomainError):
        simulate_trajectories("beam-uniform", 0.5, n_traj=2, n_points=5, m=10)
