"""Command-line entry point.

Subcommands: roar, permute (full campaigns), corr (correlation matrix CSV),
gen-sim (synthetic dataset CSV), fcp (one-shot contribution share and band).
Exit codes: 0 success, 1 usage error, 2 data/model error. Results go to files
and a summary line on stdout; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import sys

from .attribution import Method, linear_shap, most_significant, permutation_importance
from .data import (
    SyntheticSpec,
    Task,
    balanced_subsample,
    dataset_to_csv,
    generate_synthetic,
    load_csv,
    pearson_matrix,
)
from .eai_metric import compute_band, compute_fcp
from .errors import RoarbandError, UsageError
from .models import default_score, fit
from .proxy_engine import (
    Mode,
    band_hit_rate,
    campaign_to_csv,
    run_campaign,
)
from .report import campaign_trajectory, render_corr_csv, render_campaign_table, render_trajectory_svg

__all__ = ["main", "entrypoint", "build_parser", "cmd_fcp"]


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; remap so usage problems exit 1.
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    source = _Parser(add_help=False)
    source.add_argument("--data", help="CSV file with a header row")
    source.add_argument("--target", default="target",
                        help="target column name (default: target)")
    source.add_argument("--task", choices=["classification", "regression"],
                        help="task kind, required with --data")
    source.add_argument("--features",
                        help="comma-separated feature whitelist, in order")
    source.add_argument("--per-class", type=int, dest="per_class",
                        help="balanced subsample size per class")
    source.add_argument("--samples", type=int,
                        help="synthetic dataset: number of rows")
    source.add_argument("--informative", type=int,
                        help="synthetic dataset: informative feature count")
    source.add_argument("--redundant", type=int, default=0,
                        help="synthetic dataset: redundant feature count")
    source.add_argument("--noise", type=int, default=0,
                        help="synthetic dataset: noise feature count")
    source.add_argument("--class-sep", type=float, default=1.0, dest="class_sep",
                        help="synthetic dataset: distance between class means")
    source.add_argument("--seed", type=int, default=42,
                        help="seed for every random draw (default: 42)")

    analysis = _Parser(add_help=False)
    analysis.add_argument("--method", choices=["shap", "perm"], default="shap",
                          help="attribution method (default: shap)")
    analysis.add_argument("--repeats", type=int, default=5,
                          help="permutation-importance repeats (default: 5)")
    analysis.add_argument("--clamp-band", action="store_true", dest="clamp_band",
                          help="clamp displayed band endpoints to [0, 1]")

    parser = _Parser(prog="roarband",
                     description="Attribution-evaluation campaigns with "
                                 "expected-accuracy bands")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    for name, help_text in (("roar", "remove-and-retrain campaign"),
                            ("permute", "permute-and-retrain campaign")):
        p = sub.add_parser(name, parents=[source, analysis], help=help_text)
        p.add_argument("--holdout", type=float,
                       help="evaluate on a held-out row fraction instead of "
                            "the training data")
        p.add_argument("--out", required=True,
                       help="output file prefix")

    sub.add_parser("fcp", parents=[source, analysis],
                   help="fit once and print accuracy, MSF, FCP and band")

    p = sub.add_parser("corr", parents=[source],
                       help="write the Pearson correlation matrix CSV")
    p.add_argument("--include-target", action=argparse.BooleanOptionalAction,
                   default=True, help="append the target as the last column")
    p.add_argument("--out", required=True, help="output file prefix")

    p = sub.add_parser("gen-sim", parents=[source],
                       help="generate a synthetic classification dataset CSV")
    p.add_argument("--out", required=True, help="output CSV path")
    return parser


def _positive(args, name, minimum, label):
    value = getattr(args, name, None)
    if value is not None and value < minimum:
        raise UsageError(f"--{label} must be at least {minimum}")


def _validate(args) -> None:
    _positive(args, "samples", 2, "samples")
    _positive(args, "informative", 1, "informative")
    _positive(args, "redundant", 0, "redundant")
    _positive(args, "noise", 0, "noise")
    _positive(args, "per_class", 1, "per-class")
    _positive(args, "repeats", 1, "repeats")
    if getattr(args, "class_sep", 1.0) <= 0:
        raise UsageError("--class-sep must be positive")
    holdout = getattr(args, "holdout", None)
    if holdout is not None and not (0.0 < holdout < 1.0):
        raise UsageError("--holdout must be a fraction in (0, 1)")


def _synthetic_spec(args) -> SyntheticSpec:
    if args.informative is None:
        raise UsageError("--informative is required with --samples")
    return SyntheticSpec(args.samples, args.informative, args.redundant,
                         args.noise, args.class_sep, args.seed)


def _resolve_dataset(args):
    has_file = args.data is not None
    has_synth = args.samples is not None
    if has_file and has_synth:
        raise UsageError("give either --data or --samples, not both")
    if not has_file and not has_synth:
        raise UsageError("a data source is required: --data FILE or --samples N")
    if has_file:
        if args.task is None:
            raise UsageError("--task is required with --data")
        whitelist = None
        if args.features:
            whitelist = [s.strip() for s in args.features.split(",") if s.strip()]
        d = load_csv(args.data, args.target, Task(args.task), whitelist)
    else:
        if args.task == "regression":
            raise UsageError("synthetic data is classification only")
        d = generate_synthetic(_synthetic_spec(args))
    if args.per_class is not None:
        d = balanced_subsample(d, args.per_class, args.seed)
    return d


def _echo(args) -> str:
    parts = [args.command]
    order = ["data", "target", "task", "features", "per_class", "samples",
             "informative", "redundant", "noise", "class_sep", "method",
             "repeats", "holdout", "include_target", "clamp_band", "seed",
             "out"]
    synthetic_only = {"informative", "redundant", "noise", "class_sep"}
    for name in order:
        if not hasattr(args, name):
            continue
        if name in synthetic_only and getattr(args, "samples", None) is None:
            continue
        value = getattr(args, name)
        flag = "--" + name.replace("_", "-")
        if isinstance(value, bool):
            if name == "include_target":
                parts.append(flag if value else "--no-include-target")
            elif value:
                parts.append(flag)
        elif value is not None:
            parts.append(f"{flag} {value}")
    return "run: roarband " + " ".join(parts)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _campaign_command(args, mode: Mode) -> str:
    d = _resolve_dataset(args)
    report = run_campaign(d, mode, Method(args.method), args.seed,
                          repeats=args.repeats,
                          holdout_fraction=getattr(args, "holdout", None))
    _write(f"{args.out}_campaign.csv", campaign_to_csv(report))
    _write(f"{args.out}_campaign.txt",
           render_campaign_table(report, clamp=args.clamp_band))
    _write(f"{args.out}_trajectory.svg",
           render_trajectory_svg(campaign_trajectory(report, clamp=args.clamp_band)))
    first = report.records[0]
    bits = [f"{mode.value}: iterations={len(report.records)}",
            f"MSF[1]={first.msf}", f"acc[1]={first.accuracy:.4f}"]
    testable = [r for r in report.records if r.within_previous_band is not None]
    if testable:
        bits.append(f"hit_rate={band_hit_rate(report):.4f}")
    if report.truncated:
        bits.append("truncated=yes")
    bits.append(f"seed={args.seed}")
    bits.append(f"out={args.out}")
    return " ".join(bits)


def cmd_fcp(args) -> str:
    """Fit once; report accuracy, most significant feature, its contribution
    share and the expected-accuracy band, all to 4 decimals."""
    d = _resolve_dataset(args)
    model = fit(d)
    accuracy = default_score(model, d.features, d.target)
    if Method(args.method) is Method.LINEAR_SHAP:
        attr = linear_shap(model, d)
    else:
        attr = permutation_importance(model, d, repeats=args.repeats,
                                      seed=args.seed)
    msf, top = most_significant(attr)
    share = compute_fcp(top, attr.global_scores)
    band = compute_band(accuracy, share)
    lo, hi = band.lower, band.upper
    if args.clamp_band:
        lo, hi = max(lo, 0.0), min(hi, 1.0)
    return (f"acc={accuracy:.4f} msf={msf} fcp={share:.4f} "
            f"band=[{lo:.4f}, {hi:.4f}]")


def _corr_command(args) -> str:
    d = _resolve_dataset(args)
    matrix = pearson_matrix(d, include_target=args.include_target)
    names = list(d.feature_names) + (["target"] if args.include_target else [])
    path = f"{args.out}_corr.csv"
    _write(path, render_corr_csv(matrix, names))
    return f"corr: columns={len(names)} seed={args.seed} out={path}"


def _gen_sim_command(args) -> str:
    if args.samples is None:
        raise UsageError("gen-sim requires --samples")
    if args.data is not None:
        raise UsageError("gen-sim generates data; --data does not apply")
    d = generate_synthetic(_synthetic_spec(args))
    _write(args.out, dataset_to_csv(d))
    return (f"gen-sim: samples={d.n_samples} features={d.n_features} "
            f"seed={args.seed} out={args.out}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    handlers = {
        "roar": lambda a: _campaign_command(a, Mode.ROAR),
        "permute": lambda a: _campaign_command(a, Mode.PERMUTE),
        "fcp": cmd_fcp,
        "corr": _corr_command,
        "gen-sim": _gen_sim_command,
    }
    try:
        print(_echo(args))
        print(handlers[args.command](args))
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except RoarbandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
