"""Command-line front door.

Subcommands: run, sweep, verify, solve-doa, bounds, instance.
Exit codes: 0 pass, 1 property failure, 2 usage error.
KCOVER_EPS overrides the comparison tolerance (default 1e-9).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import numeric
from .adversaries import (
    adv_al,
    adv_fl_an,
    adv_fl_un,
    adv_ul_un_general,
    adv_ul_un_k2,
    adv_us_un,
)
from .bounds import bound_table
from .errors import KcoverError
from .harness import (
    plot_script,
    replay_game,
    run_game,
    run_verify,
    sweep_csv,
    sweep_with_timing,
)
from .instance_io import instance_to_dict, read_instance, write_instance
from .policies import (
    AcceptAllPolicy,
    AnytimeThresholdPolicy,
    MultiThresholdPolicy,
    RejectUntilForcedPolicy,
    ThresholdPolicy,
    TwoPhaseThresholdPolicy,
)
from .thresholds import solve_doa

CSV_COLUMNS = (
    "k, soa_ub (threshold-policy bound), doa_c (two-phase objective), "
    "lower_bound, doa_omega, doa_theta1, doa_theta2, status"
)


def _parse_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    v = int(text)
    return v, v


def _build_adversary(args):
    name = args.adversary
    if name == "al":
        horizon = args.horizon or 2 * args.k + 2
        return adv_al(args.epsilon, args.k, horizon)
    if name == "ul-un-k2":
        return adv_ul_un_k2(args.n)
    if name == "ul-un-general":
        return adv_ul_un_general(args.k, args.n)
    if name == "fl-un":
        return adv_fl_un(args.k, args.n, args.m)
    if name == "fl-an":
        horizon = args.horizon or 2 * args.k + 4
        return adv_fl_an(args.k, args.m, horizon)
    if name == "us-un":
        return adv_us_un(args.k, args.n, args.parts_per_batch)
    raise KcoverError(f"unknown adversary {name!r}")


def _build_policy(args, k, n, setting, m):
    name = args.policy
    theta = args.theta
    if name == "soa":
        return ThresholdPolicy(k, n, theta=theta, setting=setting, m=m)
    if name == "soa-an":
        return AnytimeThresholdPolicy(k, theta=theta, setting=setting, m=m)
    if name == "doa":
        if args.theta1 is not None and args.theta2 is not None:
            omega = args.omega or max(1, round(0.8 * k))
            return TwoPhaseThresholdPolicy(k, n, omega, args.theta1, args.theta2)
        sol = solve_doa(k, n)
        return TwoPhaseThresholdPolicy(k, n, sol.omega, sol.theta1, sol.theta2)
    if name == "accept-all":
        return AcceptAllPolicy(k)
    if name == "reject-until-forced":
        return RejectUntilForcedPolicy(k, n)
    if name == "multi-threshold":
        if not args.thresholds:
            raise KcoverError("--thresholds is required for multi-threshold")
        values = [float(t) for t in args.thresholds.split(",")]
        return MultiThresholdPolicy(values)
    raise KcoverError(f"unknown policy {name!r}")


def _print_record(record) -> None:
    ratio = "inf" if record.ratio is None else f"{record.ratio:.9g}"
    print(
        f"setting={record.setting} k={record.k} n={record.n} "
        f"policy={record.policy} source={record.source}"
    )
    print(
        f"alg={record.alg_value:.9g} opt={record.opt_value:.9g} ratio={ratio}"
        + (
            f" declared-bound={record.declared_bound:.9g}"
            if record.declared_bound is not None
            else ""
        )
    )


def cmd_run(args) -> int:
    if args.instance:
        inst = read_instance(args.instance)
        m = inst.setting.m
        n = inst.n if inst.setting.count == "UN" else None
        policy = _build_policy(args, inst.quota, n, inst.setting.length, m)
        record = replay_game(policy, inst, source=str(args.instance))
    else:
        adversary = _build_adversary(args)
        policy = _build_policy(
            args,
            adversary.quota,
            adversary.total if adversary.known_count else None,
            adversary.setting.length,
            adversary.setting.m,
        )
        record, realized = run_game(policy, adversary)
        if args.save_instance:
            write_instance(realized, args.save_instance)
            print(f"realized instance written to {args.save_instance}")
    _print_record(record)
    if args.out:
        Path(args.out).write_text(
            json.dumps(record.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
        print(f"record written to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    rows, elapsed = sweep_with_timing(args.n, args.k_min, args.k_max, args.step)
    csv_text = sweep_csv(rows)
    out = Path(args.out)
    out.write_text(csv_text, encoding="utf-8")
    print(f"sweep n={args.n} k={args.k_min}..{args.k_max} step={args.step:g} "
          f"rows={len(rows)} elapsed={elapsed:.1f}s -> {out}")
    if args.plot_script:
        Path(args.plot_script).write_text(plot_script(), encoding="utf-8")
        print(f"plot script written to {args.plot_script}")
    return 0


def cmd_verify(args) -> int:
    suites = ("oracle", "adversary", "bounds") if args.suite == "all" else (args.suite,)
    report, passed, dumps = run_verify(
        trials=args.trials,
        max_n=args.max_n,
        seed=args.seed,
        suites=suites,
        k_range=_parse_range(args.k),
        n_range=_parse_range(args.n),
    )
    sys.stdout.write(report)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(report, encoding="utf-8")
        for i, (label, payload) in enumerate(dumps):
            path = out / f"counterexample-{i}.json"
            path.write_text(
                json.dumps({"check": label, **payload}, indent=2) + "\n",
                encoding="utf-8",
            )
            print(f"counterexample for {label} written to {path}")
    return 0 if passed else 1


def cmd_solve_doa(args) -> int:
    sol = solve_doa(args.k, args.n, args.step)
    print(
        f"k={args.k} n={args.n} step={args.step:g}: omega={sol.omega} "
        f"theta1={sol.theta1:.9g} theta2={sol.theta2:.9g} "
        f"s={sol.s:.9g} q={sol.q:.9g} C={sol.value:.9g}"
    )
    return 0


def cmd_bounds(args) -> int:
    rows = bound_table(args.k, args.n, args.m)
    print(f"{'setting':<8} {'lower':>12} {'upper':>12}  source")
    for r in rows:
        lower = f"{r.lower:.9g}" if isinstance(r.lower, float) else "unbounded"
        upper = f"{r.upper:.9g}" if r.upper is not None else "-"
        print(f"{r.setting:<8} {lower:>12} {upper:>12}  {r.source}")
    return 0


def cmd_instance(args) -> int:
    inst = read_instance(args.path)
    print(
        f"{args.path}: valid {inst.setting.label()} instance, "
        f"n={inst.n} k={inst.quota} target_len={inst.target_len:g}"
    )
    if args.normalize:
        write_instance(inst, args.normalize)
        print(f"normalized copy written to {args.normalize}")
    if args.show:
        print(json.dumps(instance_to_dict(inst), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kcover",
        description=(
            "Online maximum k-interval coverage toolkit: play threshold "
            "policies against adaptive stress generators, compare with the "
            "exact offline optimum, and evaluate worst-case ratio bounds. "
            "Set KCOVER_EPS to override the comparison tolerance."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="play one game: policy vs adversary or instance file")
    p.add_argument("--policy", required=True,
                   choices=["soa", "soa-an", "doa", "accept-all",
                            "reject-until-forced", "multi-threshold"])
    p.add_argument("--adversary",
                   choices=["al", "ul-un-k2", "ul-un-general", "fl-un", "fl-an", "us-un"])
    p.add_argument("--instance", help="replay a JSON instance file instead")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--m", type=float, default=2.0)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--horizon", type=int)
    p.add_argument("--parts-per-batch", type=int, default=3)
    p.add_argument("--theta", type=float)
    p.add_argument("--theta1", type=float)
    p.add_argument("--theta2", type=float)
    p.add_argument("--omega", type=int)
    p.add_argument("--thresholds", help="comma-separated non-increasing list")
    p.add_argument("--out", help="write the game record JSON here")
    p.add_argument("--save-instance", help="write the realized instance here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help=f"bound sweep CSV; columns: {CSV_COLUMNS}")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=99)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--plot-script", help="also write a matplotlib plot script")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the oracle/adversary/bounds suites")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--suite", default="all",
                   choices=["all", "oracle", "adversary", "bounds"])
    p.add_argument("--k", default="2..6", help="adversary quota range, e.g. 2..6")
    p.add_argument("--n", default="8..12", help="adversary count range, e.g. 8..12")
    p.add_argument("--out", help="directory for the report and counterexamples")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve-doa", help="grid-search the two-phase parameters")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(func=cmd_solve_doa)

    p = sub.add_parser("bounds", help="print the lower/upper bound table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=float, default=2.0)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("instance", help="validate (and normalize) an instance file")
    p.add_argument("path")
    p.add_argument("--normalize", help="write a canonicalized copy here")
    p.add_argument("--show", action="store_true")
    p.set_defaults(func=cmd_instance)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KcoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
