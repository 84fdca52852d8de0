"""Command line front end: bench, verify, metrics, plotdata."""

from __future__ import annotations

import argparse
import sys

from .harness import (
    ALGORITHM_TAGS,
    ExperimentConfig,
    SETTINGS,
    make_plotdata,
    read_csv,
    run_experiment,
    run_verification,
    write_csv,
    write_plotdata_csv,
)

DEFAULT_RANKING_DATA = "data/rankings_sample.csv"


def _parse_params(setting: str, raw: str) -> list:
    values = [v for v in raw.split(",") if v]
    if not values:
        raise ValueError("empty --params list")
    if setting in ("good-dom", "bad-dom"):
        return [float(v) for v in values]
    return [int(v) for v in values]


def _read_rank_column(path: str) -> list:
    """One integer rank per line; a single non-numeric header line is ok."""
    ranks = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                ranks.append(int(text))
            except ValueError:
                if lineno == 1:
                    continue
                raise ValueError(f"{path}:{lineno}: expected an integer rank, got {text!r}")
    if not ranks:
        raise ValueError(f"{path}: no ranks found")
    return ranks


def _cmd_bench(args) -> int:
    algos = [a for a in args.algos.split(",") if a]
    config = ExperimentConfig(
        algorithms=algos,
        setting=args.setting,
        n=args.n,
        params=_parse_params(args.setting, args.params),
        trials=args.trials,
        master_seed=args.seed,
        verify_strategy=args.verify,
        reps=args.reps,
        out_path=args.out,
        data_path=args.data,
        target_year=args.target_year,
    )
    records = run_experiment(config)
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    results = run_verification(args.n, args.seed)
    failures = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        print(f"{status} {name}{suffix}")
        failures += 0 if ok else 1
    if failures:
        print(f"{failures} of {len(results)} checks failed")
        return 1
    print(f"all {len(results)} checks passed")
    return 0


def _cmd_metrics(args) -> int:
    from .core import Permutation, PositionalPrediction
    from .metrics import compute_error_profile

    truth = Permutation(_read_rank_column(args.truth))
    prediction = PositionalPrediction(_read_rank_column(args.prediction))
    if len(truth) != len(prediction):
        raise ValueError("truth and prediction have different lengths")
    profile = compute_error_profile(truth, prediction)
    n = len(truth)
    print(f"n: {n}")
    for name, arr in (
        ("displacement", profile.eta_delta),
        ("left", profile.eta_left),
        ("right", profile.eta_right),
    ):
        print(f"eta_{name}: sum={int(arr.sum())} max={int(arr.max())} mean={arr.mean():.3f}")
        if args.per_item:
            print(f"  per-item: {arr.tolist()}")
    print(f"d_global: {profile.d_global}")
    return 0


def _cmd_plotdata(args) -> int:
    records = read_csv(args.in_path)
    rows = make_plotdata(records)
    write_plotdata_csv(rows, args.out)
    print(f"wrote {len(rows)} summary rows to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="augsort",
        description="benchmark harness for prediction-augmented sorting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run a seeded experiment grid and write a record CSV")
    bench.add_argument("--setting", required=True, choices=SETTINGS)
    bench.add_argument("--algos", required=True, help=f"comma list from: {','.join(ALGORITHM_TAGS)}")
    bench.add_argument("--n", type=int, required=True)
    bench.add_argument("--params", required=True, help="comma list of setting parameters")
    bench.add_argument("--trials", type=int, default=30)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--verify", choices=("linear", "galloping"), default="galloping")
    bench.add_argument("--reps", type=int, default=1, help="odd dirty-query repetition count")
    bench.add_argument("--out", required=True)
    bench.add_argument("--data", default=DEFAULT_RANKING_DATA, help="rankings CSV for the ranking setting")
    bench.add_argument("--target-year", type=int, default=None, help="truth year for the ranking setting")
    bench.set_defaults(func=_cmd_bench)

    verify = sub.add_parser("verify", help="run the desk-scale correctness suite")
    verify.add_argument("--n", type=int, default=256)
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(func=_cmd_verify)

    metrics = sub.add_parser("metrics", help="print the error profile of a prediction")
    metrics.add_argument("--truth", required=True, help="file with one true rank per line")
    metrics.add_argument("--prediction", required=True, help="file with one predicted rank per line")
    metrics.add_argument("--per-item", action="store_true")
    metrics.set_defaults(func=_cmd_metrics)

    plotdata = sub.add_parser("plotdata", help="summarize a record CSV into mean/std series")
    plotdata.add_argument("--in", dest="in_path", required=True)
    plotdata.add_argument("--out", required=True)
    plotdata.set_defaults(func=_cmd_plotdata)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
