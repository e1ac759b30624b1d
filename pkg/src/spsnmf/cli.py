"""Command line entry point: ``spsnmf {run,graph,fractions}``."""

import argparse
import logging
import sys

from ._errors import DatasetError
from .bench import (
    ExperimentSpec,
    load_csv_dataset,
    run_experiment,
    run_fraction_sweep,
    write_similarity,
)
from .graph import GraphConfig, build_similarity
from .pipeline import SpsConfig

EXIT_OK, EXIT_ARGS, EXIT_DATA, EXIT_ALL_FAILED = 0, 2, 3, 4

log = logging.getLogger("spsnmf")


def _label_col(text):
    try:
        return int(text)
    except ValueError:
        return text


def _modes(text):
    modes = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in modes if m not in ("hard", "soft", "baseline")]
    if bad or not modes:
        raise argparse.ArgumentTypeError(f"invalid mode list {text!r}")
    return modes


def build_parser():
    parser = argparse.ArgumentParser(prog="spsnmf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dataset", required=True, help="CSV file with features and labels")
    common.add_argument("--label-col", type=_label_col, default=-1,
                        help="label column name or index (default: last)")
    common.add_argument("--knn", type=int, default=7, help="neighbours in the similarity graph")
    common.add_argument("--out", required=True, help="output directory (or file for `graph`)")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--k", type=int, help="number of clusters (default: number of labels)")
    solver.add_argument("--mode", type=_modes, default=("hard",),
                        help="comma-separated subset of hard,soft,baseline")
    solver.add_argument("--init-fraction", type=float, default=0.5)
    solver.add_argument("--step", type=float, default=0.1)
    solver.add_argument("--sweeps-per-round", type=int, default=10)
    solver.add_argument("--tol", type=float, default=1e-6)
    solver.add_argument("--max-sweeps", type=int, default=1000)
    solver.add_argument("--trials", type=int, default=10)
    solver.add_argument("--seed", type=int, default=0)
    solver.add_argument("--workers", type=int, default=1)
    solver.add_argument("--no-timing", action="store_true",
                        help="write null wall times so reports are reproducible")

    sub.add_parser("run", parents=[common, solver], help="run repeated trials")
    sub.add_parser("fractions", parents=[common, solver],
                   help="sweep the initial fraction over 0.1, 0.2, ..., 1.0")
    sub.add_parser("graph", parents=[common], help="write the similarity matrix as CSV")
    return parser


def _spec(args):
    data = load_csv_dataset(args.dataset, args.label_col)
    k = args.k if args.k is not None else data.n_classes
    solver = SpsConfig(k=k, init_fraction=args.init_fraction, fraction_step=args.step,
                       sweeps_per_round=args.sweeps_per_round, conv_tol=args.tol,
                       max_sweeps=args.max_sweeps, seed=args.seed)
    return ExperimentSpec(dataset=args.dataset, out_dir=args.out, solver=solver,
                          label_col=args.label_col, graph=GraphConfig(k_nn=args.knn),
                          trials=args.trials, modes=args.mode, workers=args.workers,
                          record_time=not args.no_timing)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    try:
        if args.command == "graph":
            data = load_csv_dataset(args.dataset, args.label_col)
            X = build_similarity(data.features, GraphConfig(k_nn=args.knn))
            write_similarity(X, args.out)
            log.info("wrote %dx%d similarity matrix to %s", *X.shape, args.out)
            return EXIT_OK
        spec = _spec(args)
    except DatasetError as exc:
        log.error("dataset error: %s", exc)
        return EXIT_DATA
    except ValueError as exc:
        log.error("invalid arguments: %s", exc)
        return EXIT_ARGS

    if args.command == "fractions":
        rows = run_fraction_sweep(spec)
        if all(acc is None for *_, acc in rows):
            return EXIT_ALL_FAILED
        log.info("wrote %d fraction rows to %s", len(rows), args.out)
        return EXIT_OK

    report = run_experiment(spec)
    for mode, row in report.summary.items():
        log.info("%-8s ACC %.4f  NMI %.4f  ARI %.4f  (%d trials, %d failed)", mode,
                 row["acc_mean"], row["nmi_mean"], row["ari_mean"], row["trials"], row["failed"])
    return EXIT_ALL_FAILED if report.all_failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
