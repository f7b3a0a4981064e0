"""Command-line entry point.

Exit codes: 0 success, 1 user error (bad arguments, unknown preset, I/O),
2 numerical failure.  Errors are reported on stderr as one JSON object.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError, IntegrationError, TrainingDivergedError, WrightFdeError

SEED_ENV = "WRIGHTFDE_SEED"
# argument names that never change results and are left out of the echo
_NOT_ECHOED = {"config", "output", "threads", "func", "command"}


class UserError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UserError(message)


def fmt(v):
    """Locale-independent 17-significant-digit text."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UserError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _parse_params(items):
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UserError(f"--param expects key=value, got {item!r}")
        try:
            out[key] = int(val) if val.lstrip("-").isdigit() else float(val)
        except ValueError:
            out[key] = val
    return out


def _floats(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UserError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(args, header, rows, meta=None):
    """Write rows as CSV or JSON to ``--output`` (or stdout) plus the echo."""
    if args.format == "json":
        doc = {"columns": list(header), "rows": [[_json_num(v) for v in r] for r in rows]}
        if meta:
            doc["meta"] = meta
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(header)
        for r in rows:
            wr.writerow([fmt(v) for v in r])
        text = buf.getvalue()
    _write_text(args.output, text)
    if args.output and args.output != "-":
        echo = json.dumps(_echo(args, meta), indent=1, sort_keys=True) + "\n"
        _write_text(args.output + ".config.json", echo)


def _json_num(v):
    if isinstance(v, str):
        return v
    f = float(v)
    if np.isfinite(f):
        return float(fmt(f))
    return None


def _write_text(path, text):
    if not path or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UserError(f"cannot write {path}: {exc.strerror}") from None


def _echo(args, meta=None):
    cfg = {k: v for k, v in vars(args).items() if k not in _NOT_ECHOED}
    doc = {"command": args.command, "config": cfg, "version": __version__}
    if meta:
        doc["meta"] = meta
    return doc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_solve(args):
    from .catalog import get_preset
    from .mcsolver import compare, solve_closed_form, solve_mc
    from .problems import TimeGrid

    preset = get_preset(args.preset)
    prob = preset.problem(args.beta, **_parse_params(args.param))
    grid = TimeGrid.uniform(args.t_max, args.points, include_zero=args.include_zero)
    est = solve_mc(prob, grid, args.m, args.seed, threads=args.threads, coupled=args.coupled)
    table = compare(est, solve_closed_form(prob, grid))
    meta = {"preset": preset.name, "equation": preset.equation, "ode": preset.ode,
            "forcing": prob.forcing.describe(), "params": prob.params}
    _emit(args, table.COLUMNS, table.rows(), meta)


def cmd_wave(args):
    from .wave import WaveProblem, solve_wave, uniform_x

    prob = WaveProblem.from_profile(args.profile, args.c, args.beta)
    x = uniform_x(args.x_min, args.x_max, args.nx)
    t = np.linspace(0.0, args.t_max, args.nt)
    fg = solve_wave(prob, x, t, args.m, args.seed, threads=args.threads)
    rows = [(x[j], t[i], fg.field[i, j], fg.stderr[i, j]) for i in range(t.size) for j in range(x.size)]
    _emit(args, ("x", "t", "u", "stderr"), rows, fg.meta)


def cmd_sample(args):
    from .subordinator import RngStream, sample_batch, sample_stable_subordinator

    rng = RngStream(args.seed, args.stream)
    if args.stable:
        vals = sample_stable_subordinator(args.beta, rng, args.m)
    else:
        vals = sample_batch(args.beta, args.t, args.m, rng).samples
    _emit(args, ("s",), [(v,) for v in vals])


def cmd_ml(args):
    from .specfun import mittag_leffler

    z = np.asarray(_floats(args.z))
    vals = np.atleast_1d(mittag_leffler(z, args.beta, args.alpha))
    _emit(args, ("z", "value"), list(zip(z, vals)))


def cmd_transform(args):
    from .catalog import eval_pair, get_pair

    pair = get_pair(args.pair)
    t = np.asarray(_floats(args.t))
    fb = np.atleast_1d(eval_pair(pair, args.beta, t))
    _emit(args, ("t", "f", "f_beta"), list(zip(t, pair.func(t), fb)), {"pair": pair.name, "formula": pair.formula})


def cmd_list_presets(args):
    from .catalog import list_presets

    rows = []
    for p in list_presets():
        defaults = " ".join(f"{k}={fmt(v)}" for k, v in p["defaults"].items())
        rows.append((p["name"], p["equation"], p["ode"], defaults, p["figure"], "yes" if p["closed_form"] else "no"))
    _emit(args, ("name", "equation", "ode", "defaults", "figure", "closed_form"), rows)


def _mlp_config(args, lag):
    from .ffnn import MlpConfig

    hidden = tuple(int(v) for v in _floats(args.hidden))
    return MlpConfig(hidden=hidden, learning_rate=args.lr, epochs=args.epochs, momentum=args.momentum,
                     lag=lag, seed=args.seed, patience=args.patience)


def cmd_ffnn_train(args):
    from .ffnn import build_lag_dataset, simulate_trajectories, train

    trajs = simulate_trajectories(args.preset, args.beta, args.n_traj, args.t_max, args.points, args.m,
                                  args.seed, args.threads)
    data = build_lag_dataset(trajs, args.lag)
    model, hist = train(_mlp_config(args, args.lag), data)
    if args.model:
        try:
            model.save(args.model)
        except OSError as exc:
            raise UserError(f"cannot write {args.model}: {exc.strerror}") from None
    if args.history:
        hist.write_csv(args.history)
    rows = [("train", model.mse(data.x_train, data.y_train)),
            ("val", model.mse(data.x_val, data.y_val)),
            ("test", model.mse(data.x_test, data.y_test))]
    _emit(args, ("split", "mse"), rows, {"best_epoch": hist.best_epoch, "epochs_run": len(hist.train)})


def cmd_ffnn_predict(args):
    from .ffnn import TrainedModel, predict_rollout

    try:
        model = TrainedModel.load(args.model)
    except OSError as exc:
        raise UserError(f"cannot read {args.model}: {exc.strerror}") from None
    vals = predict_rollout(model, _floats(args.window), args.steps)
    _emit(args, ("step", "value"), [(i + 1, v) for i, v in enumerate(vals)])


def cmd_ffnn_memory(args):
    from .ffnn import memory_length_experiment

    lags = [int(v) for v in _floats(args.lags)]
    rows = memory_length_experiment(args.preset, _floats(args.betas), lags, _mlp_config(args, 1),
                                    args.n_traj, args.t_max, args.points, args.m, args.seed, args.threads)
    _emit(args, ("beta", "lag", "test_mse", "ratio_to_best"),
          [(r["beta"], r["lag"], r["test_mse"], r["ratio_to_best"]) for r in rows])


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p, seed):
    p.add_argument("--seed", type=int, default=seed, help=f"RNG seed (default ${SEED_ENV} or 0)")
    p.add_argument("--threads", type=int, default=1, help="worker threads; results do not depend on it")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    p.add_argument("--config", default=None, help="JSON file of option values; flags override it")


def _ffnn_common(p):
    p.add_argument("--preset", default="cubic-ffnn")
    p.add_argument("--n-traj", type=int, default=50)
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--hidden", default="10,10,10")
    p.add_argument("--lr", type=float, default=1e-2)
    p.add_argument("--epochs", type=int, default=5000)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--patience", type=int, default=500)


def build_parser():
    seed = _default_seed()
    parser = _Parser(prog="wrightfde", description="Monte Carlo solutions of sequential Caputo FDEs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    subs = {}

    p = sub.add_parser("solve", help="Monte Carlo solution of a preset")
    p.add_argument("--preset", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--coupled", action="store_true", help="share one base draw across the grid")
    p.add_argument("--include-zero", action="store_true")
    p.set_defaults(func=cmd_solve)
    subs["solve"] = p

    p = sub.add_parser("wave", help="fractional d'Alembert field")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--profile", default="gauss10")
    p.add_argument("--x-min", type=float, default=-2.0)
    p.add_argument("--x-max", type=float, default=2.0)
    p.add_argument("--nx", type=int, default=81)
    p.add_argument("--t-max", type=float, default=2.0)
    p.add_argument("--nt", type=int, default=21)
    p.add_argument("--m", type=int, default=10_000)
    p.set_defaults(func=cmd_wave)
    subs["wave"] = p

    p = sub.add_parser("sample", help="draw inverse stable times (or stable variates)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--stable", action="store_true", help="draw S instead of T")
    p.set_defaults(func=cmd_sample)
    subs["sample"] = p

    p = sub.add_parser("ml", help="evaluate E_{beta,alpha}(z)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--z", required=True, help="comma-separated arguments; write --z=-1,2 for a leading minus")
    p.set_defaults(func=cmd_ml)
    subs["ml"] = p

    p = sub.add_parser("transform", help="evaluate a transform pair")
    p.add_argument("--pair", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--t", required=True, help="comma-separated times")
    p.set_defaults(func=cmd_transform)
    subs["transform"] = p

    p = sub.add_parser("list-presets", help="show the preset registry")
    p.set_defaults(func=cmd_list_presets)
    subs["list-presets"] = p

    p = sub.add_parser("ffnn", help="network surrogate")
    fsub = p.add_subparsers(dest="ffnn_command", parser_class=_Parser)
    q = fsub.add_parser("train")
    _ffnn_common(q)
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--lag", type=int, default=3)
    q.add_argument("--model", default=None, help="write the model JSON here")
    q.add_argument("--history", default=None, help="write the loss history CSV here")
    q.set_defaults(func=cmd_ffnn_train)
    subs["ffnn train"] = q
    q = fsub.add_parser("predict")
    q.add_argument("--model", required=True)
    q.add_argument("--window", required=True, help="comma-separated seed window")
    q.add_argument("--steps", type=int, default=20)
    q.set_defaults(func=cmd_ffnn_predict)
    subs["ffnn predict"] = q
    q = fsub.add_parser("memory-exp")
    _ffnn_common(q)
    q.add_argument("--betas", default="0.5,1")
    q.add_argument("--lags", default="1,2,3,5")
    q.set_defaults(func=cmd_ffnn_memory)
    subs["ffnn memory-exp"] = q

    for name, sp in subs.items():
        _common(sp, seed)
    return parser, subs


def _load_config(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UserError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UserError(f"config {path} is not valid JSON: {exc}") from None
    # accept either a bare mapping or a previous run's echo
    return doc.get("config", doc) if isinstance(doc, dict) else {}


def _config_path(argv):
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return None


def parse(argv):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    path = _config_path(argv)
    cfg = _load_config(path) if path else {}
    if cfg:
        # config values act as defaults for whichever subcommand is chosen
        for sp in subs.values():
            known = {a.dest for a in sp._actions}
            for a in sp._actions:
                if a.dest in cfg:
                    a.required = False
            sp.set_defaults(**{k: v for k, v in cfg.items() if k in known})
    args = parser.parse_args(argv)
    if args.command is None:
        raise UserError("missing subcommand")
    if args.command == "ffnn" and getattr(args, "ffnn_command", None) is None:
        raise UserError("missing ffnn subcommand (train, predict, memory-exp)")
    if cfg:
        key = args.command if args.command != "ffnn" else f"ffnn {args.ffnn_command}"
        known = {a.dest for a in subs[key]._actions}
        unknown = set(cfg) - known - {"ffnn_command"}
        if unknown:
            raise UserError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return args


def run(argv=None) -> int:
    try:
        args = parse(argv)
        args.func(args)
        return 0
    except (UserError, DomainError) as exc:
        code = 1
        err = exc
    except (ConvergenceError, IntegrationError, TrainingDivergedError, ArithmeticError) as exc:
        code = 2
        err = exc
    except (WrightFdeError, ValueError) as exc:
        code = 1
        err = exc
    sys.stderr.write(json.dumps({"error": type(err).__name__, "message": str(err), "exit_code": code}) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
