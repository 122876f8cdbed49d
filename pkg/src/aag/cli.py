"""Command-line front end for subspace discovery, training, and scoring.

Exit codes: 0 success, 1 usage error, 2 data or schema error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .ensemble import EnsembleModel, classify_table, fit_ensemble, split_indices
from .errors import AagError
from .evaluation import f1_score, generate_setting1, generate_setting3, stability_index
from .grouping import SubspaceSet, run_aag
from .preprocess import DEFAULT_MISSING, apply_preprocessor, fit_preprocessor, load_csv

log = logging.getLogger("aag")

USAGE_ERROR = 1
DATA_ERROR = 2
INTERNAL_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _timed(phase: str, fn, *args, **kwargs):
    start = time.perf_counter()
    result = fn(*args, **kwargs)
    log.info("%s: %.3fs", phase, time.perf_counter() - start)
    return result


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aag", description=__doc__)
    parser.add_argument("--version", action="version", version=f"aag {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, model=False):
        p.add_argument("--input", required=True, help="input CSV file")
        p.add_argument("--output", required=True, help="output file")
        if model:
            p.add_argument("--model", required=True, help="model JSON file")
        p.add_argument("--delimiter", default=",")
        p.add_argument("--missing-marker", action="append", default=None,
                       help="missing-value marker (repeatable; default: empty and '?')")

    def add_fit_params(p):
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--bins", type=int, default=10)
        p.add_argument("--cap", type=int, default=3)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--val-fraction", type=float, default=0.3)
        p.add_argument("--include-singletons", action="store_true")

    p = sub.add_parser("subspaces", help="discover correlated attribute subspaces")
    add_io(p)
    add_fit_params(p)

    p = sub.add_parser("train", help="train an anomaly-detection ensemble")
    add_io(p)
    add_fit_params(p)

    p = sub.add_parser("score", help="score rows with a trained ensemble")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--missing-marker", action="append", default=None)

    p = sub.add_parser("bench", help="run a benchmark setting end to end")
    add_io(p)
    add_fit_params(p)
    p.add_argument("--class-column", required=True)
    p.add_argument("--setting", type=int, choices=(1, 3), required=True)
    p.add_argument("--fraction", type=float, default=0.1,
                   help="fraction of attributes perturbed (setting 1)")
    p.add_argument("--minority-fraction", type=float, default=0.1,
                   help="fraction of minority rows used as novelties (setting 3)")
    p.add_argument("--repeats", type=int, default=20)

    p = sub.add_parser("stability", help="stability index over repeated resampled runs")
    add_io(p)
    add_fit_params(p)
    p.add_argument("--repeats", type=int, default=20)
    return parser


def _markers(args):
    return tuple(args.missing_marker) if args.missing_marker else DEFAULT_MISSING


def _load(args):
    return _timed("load", load_csv, args.input, delimiter=args.delimiter,
                  missing_markers=_markers(args))


def _discover(table, args) -> SubspaceSet:
    return _timed("aag", run_aag, table, cap=args.cap,
                  include_singletons=args.include_singletons)


def _train_model(raw, args) -> EnsembleModel:
    pp = _timed("preprocess", fit_preprocessor, raw, bins=args.bins)
    coded = apply_preprocessor(pp, raw)
    fit_idx, _ = split_indices(coded.n_rows, args.val_fraction, args.seed)
    result = _discover(coded.take_rows(np.sort(fit_idx)), args)
    subspaces = result.attr_sets()
    if not subspaces:
        subspaces = [tuple(range(coded.n_attrs))]
    return _timed("ensemble-fit", fit_ensemble, coded, subspaces, alpha=args.alpha,
                  val_fraction=args.val_fraction, seed=args.seed, preprocess=pp)


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def cmd_subspaces(args) -> int:
    raw = _load(args)
    pp = _timed("preprocess", fit_preprocessor, raw, bins=args.bins)
    table = apply_preprocessor(pp, raw)
    result = _discover(table, args)
    _write(args.output, result.to_json())
    return 0


def cmd_train(args) -> int:
    raw = _load(args)
    model = _train_model(raw, args)
    _write(args.output, model.to_json())
    return 0


def cmd_score(args) -> int:
    model = EnsembleModel.from_json(Path(args.model).read_text(encoding="utf-8"))
    if model.preprocess is None:
        raise AagError("model file carries no preprocessing parameters")
    raw = _load(args)
    coded = apply_preprocessor(model.preprocess, raw)
    scores, labels = _timed("score", classify_table, model, coded)
    lines = ["row_index,score,label"]
    lines += [f"{i},{s:.6f},{label}" for i, (s, label) in enumerate(zip(scores, labels))]
    _write(args.output, "\n".join(lines) + "\n")
    return 0


def cmd_bench(args) -> int:
    raw = _load(args)
    lines = ["repeat,seed,tp,fp,fn,tn,f1"]
    f1_values = []
    for rep in range(args.repeats):
        seed = args.seed + rep
        if args.setting == 1:
            split = generate_setting1(raw, args.class_column, args.fraction, seed)
        else:
            split = generate_setting3(raw, args.class_column, args.minority_fraction, seed)
        rep_args = argparse.Namespace(**{**vars(args), "seed": seed})
        model = _train_model(split.train, rep_args)
        coded = apply_preprocessor(model.preprocess, split.test)
        _, labels = classify_table(model, coded)
        predictions = [1 if label == "anomaly" else 0 for label in labels]
        report = f1_score(split.test_labels, predictions)
        f1_values.append(report.f1)
        lines.append(f"{rep},{seed},{report.csv_line()}")
        log.info("bench repeat %d: f1=%.4f", rep, report.f1)
    mean = sum(f1_values) / len(f1_values)
    lines.append(f"mean,,,,,,{mean:.6f}")
    _write(args.output, "\n".join(lines) + "\n")
    print(f"setting={args.setting},repeats={args.repeats},mean_f1={mean:.6f}")
    return 0


def cmd_stability(args) -> int:
    raw = _load(args)
    runs = []
    for rep in range(args.repeats):
        rng = np.random.default_rng(args.seed + rep)
        keep = np.sort(rng.permutation(raw.n_rows)[: max(2, int(round(0.7 * raw.n_rows)))])
        sample = raw.take_rows(keep)
        pp = fit_preprocessor(sample, bins=args.bins)
        table = apply_preprocessor(pp, sample)
        runs.append(run_aag(table, cap=args.cap, include_singletons=args.include_singletons))
    report = _timed("stability", stability_index, runs)
    _write(args.output, report.to_json())
    print(f"runs={report.run_count},si={report.si:.6f}")
    return 0


COMMANDS = {
    "subspaces": cmd_subspaces,
    "train": cmd_train,
    "score": cmd_score,
    "bench": cmd_bench,
    "stability": cmd_stability,
}


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(name)s %(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (AagError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # invariant violation; report and flag as internal
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
