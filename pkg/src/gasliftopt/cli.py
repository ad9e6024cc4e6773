"""Command-line front end.

Subcommands: simulate-well, gen-data, train-sup, train-surrogate, train-weak,
eval, bench.  Reporting commands take --format json|text.  Exit status is 0
on success and 2 on infeasible or invalid input.
"""

import argparse
import os
import sys

from .bench import benchmark_runtime, emit_report, evaluate_assignments, evaluate_heuristic
from .exact import AllInfeasibleError
from .formulation import build_early_fixed_lp, dump_lp
from .neural import load_model, save_model
from .training import (
    TrainConfig,
    baseline_assignment,
    build_dsup,
    build_dweak,
    predict_assignment,
    read_dsup_csv,
    read_dweak_csv,
    sample_params,
    split_records,
    supervised_config,
    surrogate_config,
    train_supervised,
    train_surrogate,
    train_weak,
    weak_config,
    write_dsup_csv,
    write_dweak_csv,
)
from .well_model import ProblemParams, build_flow_table, default_grid

DSUP_FILE = "dsup.csv"
DWEAK_FILE = "dweak.csv"


def _cmd_simulate_well(args):
    params = ProblemParams(bsw=args.bsw, gor=args.gor, qgl_max=args.qgl_max)
    table = build_flow_table(params, default_grid())
    with open(args.out, "w") as fh:
        fh.write(table.to_json())
    print(f"wrote flow table to {args.out}")
    return 0


def _cmd_gen_data(args):
    params_list = sample_params(args.n, args.seed)
    dsup = build_dsup(params_list)
    dweak = build_dweak(params_list, candidates_per_instance=args.candidates, seed=args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    write_dsup_csv(dsup, os.path.join(args.out_dir, DSUP_FILE))
    write_dweak_csv(dweak, os.path.join(args.out_dir, DWEAK_FILE))
    print(f"wrote {len(dsup)} labeled and {len(dweak)} weak records to {args.out_dir}")
    return 0


def _load_config(args, default_factory):
    if args.config:
        with open(args.config) as fh:
            cfg = TrainConfig.from_json(fh.read())
        if args.seed is not None:
            cfg.seed = args.seed
        return cfg
    return default_factory(args.seed if args.seed is not None else 0)


def _cmd_train_sup(args):
    cfg = _load_config(args, supervised_config)
    records = read_dsup_csv(os.path.join(args.data, DSUP_FILE))
    train, _ = split_records(records, cfg.split_ratio, cfg.seed)
    result = train_supervised(train, cfg)
    save_model(result.model, args.out)
    print(f"trained on {len(train)} records; final loss {result.history[-1]:.6f}")
    return 0


def _cmd_train_surrogate(args):
    cfg = _load_config(args, surrogate_config)
    records = read_dweak_csv(os.path.join(args.data, DWEAK_FILE))
    train, _ = split_records(records, cfg.split_ratio, cfg.seed)
    result = train_surrogate(train, cfg)
    save_model(result.model, args.out)
    print(f"trained on {len(train)} records; final loss {result.history[-1]:.6f}")
    return 0


def _cmd_train_weak(args):
    cfg = _load_config(args, weak_config)
    surrogate = load_model(args.surrogate)
    records = read_dsup_csv(os.path.join(args.data, DSUP_FILE))
    train, _ = split_records(records, cfg.split_ratio, cfg.seed)
    result = train_weak([r.params for r in train], surrogate, cfg)
    save_model(result.model, args.out)
    print(f"trained on {len(train)} instances; final mean score {result.history[-1]:.4f}")
    return 0


def _cmd_eval(args):
    records = read_dsup_csv(os.path.join(args.data, DSUP_FILE))
    _, test = split_records(records, args.split_ratio, args.seed)
    if args.baseline:
        report = evaluate_assignments(lambda p: baseline_assignment(), test)
    else:
        model = load_model(args.model)
        report = evaluate_heuristic(model, test)
    if args.dump_lp is not None:
        record = test[args.dump_lp]
        zhat = (
            baseline_assignment()
            if args.baseline
            else predict_assignment(model, record.params)
        )
        table = build_flow_table(record.params, default_grid())
        print(dump_lp(build_early_fixed_lp(record.params, table, zhat)))
    print(emit_report(report, args.format))
    return 0


def _cmd_bench(args):
    model = load_model(args.model)
    records = read_dsup_csv(os.path.join(args.data, DSUP_FILE))
    report = benchmark_runtime(model, [r.params for r in records], args.reps)
    print(emit_report(report, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gasliftopt",
        description="Gas-lifted oil production: exact enumeration and learned early fixing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate-well", help="tabulate the synthetic well on the default grid")
    p.add_argument("--bsw", type=float, required=True)
    p.add_argument("--gor", type=float, required=True)
    p.add_argument("--qgl-max", type=float, default=12500.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate_well)

    p = sub.add_parser("gen-data", help="sample instances and write both datasets")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--candidates", type=int, default=12)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_gen_data)

    for name, fn in (
        ("train-sup", _cmd_train_sup),
        ("train-surrogate", _cmd_train_surrogate),
        ("train-weak", _cmd_train_weak),
    ):
        p = sub.add_parser(name, help=f"{name} on a generated dataset")
        p.add_argument("--data", required=True)
        p.add_argument("--config", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", required=True)
        if name == "train-weak":
            p.add_argument("--surrogate", required=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("eval", help="score a model (or the constant baseline) on the held-out split")
    p.add_argument("--model", default=None)
    p.add_argument("--data", required=True)
    p.add_argument("--baseline", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="split seed used at training time")
    p.add_argument("--split-ratio", type=float, default=0.8)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--dump-lp", type=int, default=None, metavar="INDEX",
                   help="also print the early-fixed LP of this test instance")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="time exact enumeration vs inference + one LP")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "eval" and not args.baseline and not args.model:
        parser.error("eval needs --model unless --baseline is given")
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, AllInfeasibleError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
