"""Repeated-trial benchmark harness over CSV datasets."""

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._errors import DatasetError, MissingLabelColumn, ParseError
from .graph import GraphConfig, build_similarity
from .metrics import accuracy, ari, nmi
from .pipeline import SpsConfig, run_spsnmf

__all__ = [
    "LabeledDataset",
    "ExperimentSpec",
    "TrialReport",
    "load_csv_dataset",
    "run_experiment",
    "run_fraction_sweep",
    "emit_traces",
    "write_similarity",
    "fmt",
]

TRACE_HEADER = ["sweep", "objective", "active_samples", "mean_weight"]
METRICS = ("acc", "nmi", "ari")


def fmt(x):
    """Fixed report formatting: 6 significant digits."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return format(float(x), ".6g")


@dataclass
class LabeledDataset:
    features: np.ndarray
    labels: np.ndarray
    name: str
    class_names: list = field(default_factory=list)

    @property
    def n_classes(self):
        return len(self.class_names)


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv_dataset(path, label_selector=-1):
    """Read a CSV file of numeric features plus one label column.

    Parameters
    ----------
    path : str or Path
    label_selector : int or str
        Column index (negative counts from the end) or header name.

    A first row with more non-numeric cells than the second is taken as a
    header.  Labels are renumbered ``0..C-1`` in order of first appearance.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except (OSError, UnicodeDecodeError) as exc:
        raise DatasetError(f"{path}: cannot read file: {exc}") from exc
    if len(rows) < 2:
        raise ParseError(f"{path}: need at least two rows")

    non_numeric = [sum(not _is_number(c) for c in r) for r in rows[:2]]
    header = None
    if non_numeric[0] > non_numeric[1]:
        header, rows = [c.strip() for c in rows[0]], rows[1:]
        first_line = 2
    else:
        first_line = 1
    if len(rows) < 2:
        raise ParseError(f"{path}: need at least two data rows")

    width = len(rows[0])
    if isinstance(label_selector, str):
        if header is None or label_selector not in header:
            raise MissingLabelColumn(f"{path}: no column named {label_selector!r}")
        label_idx = header.index(label_selector)
    else:
        if not -width <= label_selector < width:
            raise MissingLabelColumn(f"{path}: label column {label_selector} out of range")
        label_idx = label_selector % width

    features = np.empty((len(rows), width - 1))
    raw_labels = []
    for r, row in enumerate(rows):
        line = r + first_line
        if len(row) != width:
            raise ParseError(f"{path}: line {line} has {len(row)} fields, expected {width}",
                             row=line)
        raw_labels.append(row[label_idx].strip())
        feats = row[:label_idx] + row[label_idx + 1:]
        for j, cell in enumerate(feats):
            col = j if j < label_idx else j + 1
            try:
                features[r, j] = float(cell)
            except ValueError:
                name = header[col] if header else col
                raise ParseError(
                    f"{path}: line {line}, column {name!r}: cannot parse {cell!r} as a number",
                    row=line, column=col) from None
    if not np.all(np.isfinite(features)):
        raise ParseError(f"{path}: non-finite feature value")

    class_names = list(dict.fromkeys(raw_labels))
    index = {c: i for i, c in enumerate(class_names)}
    labels = np.array([index[c] for c in raw_labels], dtype=np.int64)
    return LabeledDataset(features, labels, path.stem, class_names)


@dataclass
class ExperimentSpec:
    """What to run: dataset, graph and solver settings, trials and modes.

    ``solver.mode`` and ``solver.seed`` are overridden per trial; trial ``t``
    uses seed ``solver.seed + t``.  With ``record_time=False`` the wall-time
    field is written as null so output files are reproducible byte for byte.
    """

    dataset: str
    out_dir: str
    solver: SpsConfig
    label_col: int | str = -1
    graph: GraphConfig = field(default_factory=GraphConfig)
    trials: int = 10
    modes: tuple = ("hard",)
    workers: int = 1
    record_time: bool = True
    write_traces: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.modes:
            raise ValueError("at least one mode is required")


@dataclass
class TrialReport:
    records: list
    summary: dict

    @property
    def all_failed(self):
        return all(r.get("error") for r in self.records)


def _trial(X, labels, cfg, dataset, record_time):
    start = time.perf_counter()
    try:
        res = run_spsnmf(X, cfg)
    except Exception as exc:  # a failed trial is reported, not fatal
        return {"dataset": dataset, "mode": cfg.mode, "seed": cfg.seed,
                "acc": None, "nmi": None, "ari": None, "sweeps": None,
                "converged": False, "seconds": None, "error": repr(exc)}, None
    elapsed = time.perf_counter() - start
    record = {
        "dataset": dataset,
        "mode": cfg.mode,
        "seed": cfg.seed,
        "acc": accuracy(res.labels, labels),
        "nmi": nmi(res.labels, labels),
        "ari": ari(res.labels, labels),
        "sweeps": res.sweeps_used,
        "converged": res.converged,
        "seconds": elapsed if record_time else None,
    }
    return record, res


def _map(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map yields in submission order whatever the completion order
            return list(pool.map(fn, *zip(*jobs)))
    return [fn(*job) for job in jobs]


def summarize(records, modes):
    """Per-mode mean and sample standard deviation of each metric."""
    summary = {}
    for mode in modes:
        ok = [r for r in records if r["mode"] == mode and not r.get("error")]
        row = {
            "trials": sum(r["mode"] == mode for r in records),
            "failed": sum(r["mode"] == mode and bool(r.get("error")) for r in records),
            "converged": sum(bool(r["converged"]) for r in ok),
        }
        for m in METRICS + ("sweeps",):
            vals = np.array([r[m] for r in ok], dtype=np.float64)
            row[f"{m}_mean"] = float(np.mean(vals)) if vals.size else float("nan")
            row[f"{m}_std"] = float(np.std(vals, ddof=1)) if vals.size > 1 else float("nan")
        summary[mode] = row
    return summary


SUMMARY_COLUMNS = ["trials", "failed", "converged",
                   "acc_mean", "acc_std", "nmi_mean", "nmi_std",
                   "ari_mean", "ari_std", "sweeps_mean", "sweeps_std"]


def _write_summary(path, summary):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["mode"] + SUMMARY_COLUMNS)
        for mode, row in summary.items():
            writer.writerow([mode] + [row[c] if c in ("trials", "failed", "converged")
                                      else fmt(row[c]) for c in SUMMARY_COLUMNS])


def _write_jsonl(path, records):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")


def _prepare(spec):
    data = load_csv_dataset(spec.dataset, spec.label_col)
    X = build_similarity(data.features, spec.graph)
    return data, X


def run_experiment(spec):
    """Run every (mode, trial) pair and write the report files.

    Writes ``trials.jsonl``, ``summary.csv`` and, unless disabled, one trace
    CSV per trial under ``traces/``.  Records are ordered by mode, then trial.
    """
    data, X = _prepare(spec)
    jobs = [(X, data.labels, replace(spec.solver, mode=mode, seed=spec.solver.seed + t),
             data.name, spec.record_time)
            for mode in spec.modes for t in range(spec.trials)]
    results = _map(_trial, jobs, spec.workers)
    records = [r for r, _ in results]

    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_jsonl(out / "trials.jsonl", records)
    summary = summarize(records, spec.modes)
    _write_summary(out / "summary.csv", summary)
    if spec.write_traces:
        (out / "traces").mkdir(exist_ok=True)
        for (_, _, cfg, _, _), (_, res) in zip(jobs, results):
            if res is not None:
                t = cfg.seed - spec.solver.seed
                emit_traces(res, out / "traces" / f"{cfg.mode}_trial{t}.csv")
    return TrialReport(records, summary)


def run_fraction_sweep(spec, fractions=None):
    """Final ACC as a function of the initial admitted fraction.

    Writes ``fractions.csv`` with one row per (mode, fraction, trial).
    Baseline mode ignores the fraction and is skipped.
    """
    if fractions is None:
        fractions = [round(0.1 * i, 1) for i in range(1, 11)]
    data, X = _prepare(spec)
    modes = [m for m in spec.modes if m != "baseline"]
    jobs = [(X, data.labels,
             replace(spec.solver, mode=mode, init_fraction=p, seed=spec.solver.seed + t),
             data.name, False)
            for mode in modes for p in fractions for t in range(spec.trials)]
    results = _map(_trial, jobs, spec.workers)

    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    with open(out / "fractions.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["mode", "fraction", "seed", "acc"])
        for (_, _, cfg, _, _), (rec, _) in zip(jobs, results):
            writer.writerow([cfg.mode, fmt(cfg.init_fraction), cfg.seed, fmt(rec["acc"])])
            rows.append((cfg.mode, cfg.init_fraction, cfg.seed, rec["acc"]))
    return rows


def emit_traces(result, path):
    """Write the per-sweep trace of `result` as CSV."""
    tr = result.trace
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for t, f, a, m in zip(tr.sweep, tr.objective, tr.active_samples, tr.mean_weight):
            writer.writerow([t, fmt(f), a, fmt(m)])
    return path


def write_similarity(X, path):
    """Dump a similarity matrix as headerless CSV at full precision."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(X):
            writer.writerow([format(x, ".17g") for x in row])
    return path
