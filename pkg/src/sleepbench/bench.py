"""End-to-end pipeline runs under a worker-count sweep.

A run executes ingest -> featurize -> split -> reduce -> train -> eval,
applying the worker count to featurization, RF/GBT tree fitting, and
batch prediction. Metrics are a pure function of the configuration:
sweeping workers changes only the stage wall times (monotonic clock).
The reduction basis is fitted on the training split and applied to both
sides.
"""

import json
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .classify import ModelSpec, fit_model, predict_batch
from .errors import DataLoadError, EmptyReport, MalformedCsv, SleepBenchError
from .evaluate import MetricsReport, confusion, headline, report, split
from .features import Dataset, build_dataset, dataset_from_csv
from .ingest import (
    balanced_stage_sequence,
    epoch_split,
    parse_csv_hypnogram,
    parse_edf,
    parse_tal_annotations,
    pick_channel,
    synthesize_recording,
)
from .reduction import pca_fit, svd_reduce_fit, transform

REDUCTION_KINDS = ("none", "pca", "svd")


@dataclass(frozen=True)
class SyntheticSource:
    """Generate n_epochs cycling through the six stages."""

    n_epochs: int
    seed: int
    sample_rate_hz: float = 100.0


@dataclass(frozen=True)
class FileSource:
    """Paired EDF recordings and hypnogram files (TAL bytes or CSV)."""

    edf_paths: tuple[str, ...]
    hypnogram_paths: tuple[str, ...]
    channel: str | None = None


@dataclass(frozen=True)
class CsvSource:
    """A pre-featurized dataset CSV; featurization becomes a no-op."""

    path: str


@dataclass(frozen=True)
class ReductionSpec:
    kind: str = "none"
    k: int = 30

    def __post_init__(self):
        if self.kind not in REDUCTION_KINDS:
            raise ValueError(f"reduction kind must be one of {REDUCTION_KINDS}")
        if self.kind != "none" and not 1 <= self.k <= 75:
            raise ValueError(f"reduction k must be in [1, 75], got {self.k}")

    @property
    def label(self) -> str:
        return self.kind


@dataclass(frozen=True)
class PipelineConfig:
    source: SyntheticSource | FileSource | CsvSource
    model: ModelSpec
    reductions: tuple[ReductionSpec, ...] = (ReductionSpec(),)
    train_fraction: float = 0.8
    split_seed: int = 42
    worker_counts: tuple[int, ...] = (1,)

    def __post_init__(self):
        if not self.reductions:
            raise ValueError("reductions must be nonempty")
        if not self.worker_counts:
            raise ValueError("worker_counts must be nonempty")
        if any(w < 1 for w in self.worker_counts):
            raise ValueError("worker counts must be positive")
        if list(self.worker_counts) != sorted(self.worker_counts):
            raise ValueError("worker_counts must be sorted ascending")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")


@dataclass
class StageTimes:
    ingest_s: float = 0.0
    featurize_s: float = 0.0
    reduce_s: float = 0.0
    train_s: float = 0.0
    eval_s: float = 0.0


@dataclass
class BenchRow:
    algorithm: str
    reduction: str
    workers: int
    accuracy: float
    precision: float
    recall: float
    stage_times: StageTimes
    total_s: float


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    environment: str = ""


def load_epochs(source) -> tuple[list, float]:
    """Resolve a data source into (labeled epochs, sample rate)."""
    if isinstance(source, SyntheticSource):
        recording, hypnogram = synthesize_recording(
            balanced_stage_sequence(source.n_epochs),
            sample_rate_hz=source.sample_rate_hz,
            seed=source.seed,
        )
        return epoch_split(recording, hypnogram), recording.sample_rate_hz

    if len(source.edf_paths) != len(source.hypnogram_paths):
        raise DataLoadError(
            f"{len(source.edf_paths)} EDF paths vs "
            f"{len(source.hypnogram_paths)} hypnogram paths"
        )
    epochs = []
    rate = None
    for edf_path, hyp_path in zip(source.edf_paths, source.hypnogram_paths):
        try:
            edf_bytes = Path(edf_path).read_bytes()
            hyp_bytes = Path(hyp_path).read_bytes()
        except OSError as exc:
            raise DataLoadError(str(exc)) from exc
        try:
            recording = pick_channel(parse_edf(edf_bytes), source.channel)
        except LookupError as exc:
            raise DataLoadError(str(exc)) from exc
        if hyp_path.endswith(".csv"):
            hypnogram = parse_csv_hypnogram(hyp_bytes.decode("utf-8"))
        else:
            hypnogram = parse_tal_annotations(hyp_bytes)
        if rate is None:
            rate = recording.sample_rate_hz
        elif rate != recording.sample_rate_hz:
            raise DataLoadError(
                f"mixed sampling rates: {rate} vs {recording.sample_rate_hz}"
            )
        epochs.extend(epoch_split(recording, hypnogram))
    if not epochs:
        raise DataLoadError("no labeled epochs in the configured sources")
    return epochs, rate


def _reduce_datasets(train: Dataset, test: Dataset, reduction: ReductionSpec):
    if reduction.kind == "none":
        return train, test
    fit = pca_fit if reduction.kind == "pca" else svd_reduce_fit
    basis = fit(train.X, reduction.k)
    names = tuple(f"{reduction.kind}{i}" for i in range(reduction.k))
    return (
        Dataset(X=transform(basis, train.X), y=train.y, feature_names=names),
        Dataset(X=transform(basis, test.X), y=test.y, feature_names=names),
    )


def run_pipeline(
    config: PipelineConfig,
    workers: int,
    reduction: ReductionSpec | None = None,
) -> tuple[MetricsReport, StageTimes]:
    """One full run; stage wall times come from a monotonic clock."""
    reduction = reduction if reduction is not None else config.reductions[0]
    times = StageTimes()
    clock = time.perf_counter

    t0 = clock()
    if isinstance(config.source, CsvSource):
        try:
            text = Path(config.source.path).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataLoadError(str(exc)) from exc
        try:
            dataset = dataset_from_csv(text)
        except MalformedCsv as exc:
            raise DataLoadError(str(exc)) from exc
        times.ingest_s = clock() - t0
        t0 = clock()
        times.featurize_s = clock() - t0
    else:
        epochs, rate = load_epochs(config.source)
        times.ingest_s = clock() - t0
        t0 = clock()
        dataset = build_dataset(epochs, rate, workers=workers)
        times.featurize_s = clock() - t0

    train, test = split(dataset, config.train_fraction, config.split_seed)

    t0 = clock()
    train, test = _reduce_datasets(train, test, reduction)
    times.reduce_s = clock() - t0

    t0 = clock()
    model = fit_model(train, config.model, workers=workers)
    times.train_s = clock() - t0

    t0 = clock()
    predictions = predict_batch(model, test.X, workers=workers)
    cm = confusion(test.y, predictions, class_list=model.class_list)
    metrics = report(cm)
    times.eval_s = clock() - t0

    return metrics, times


def sweep(config: PipelineConfig, average: str = "macro") -> BenchReport:
    """One row per (reduction, worker count); metrics repeat, times differ."""
    rows = []
    for reduction in config.reductions:
        for workers in config.worker_counts:
            t0 = time.perf_counter()
            metrics, times = run_pipeline(config, workers, reduction)
            total = time.perf_counter() - t0
            p, r = headline(metrics, average)
            rows.append(
                BenchRow(
                    algorithm=config.model.algorithm,
                    reduction=reduction.label,
                    workers=workers,
                    accuracy=metrics.accuracy,
                    precision=p,
                    recall=r,
                    stage_times=times,
                    total_s=total,
                )
            )
    environment = (
        f"cores={os.cpu_count()} "
        f"timestamp={datetime.now(timezone.utc).isoformat(timespec='seconds')}"
    )
    return BenchReport(rows=rows, environment=environment)


_CSV_HEADER = "algo,reduce,workers,A,P,R,featurize_s,reduce_s,train_s,eval_s,total_s"


def emit_report(bench_report: BenchReport, format: str = "csv") -> bytes:
    """Serialize a report; CSV carries the fixed 11-column table shape."""
    if not bench_report.rows:
        raise EmptyReport("report has no rows")
    if format == "csv":
        lines = [_CSV_HEADER]
        for row in bench_report.rows:
            t = row.stage_times
            lines.append(",".join([
                row.algorithm,
                row.reduction,
                str(row.workers),
                repr(row.accuracy),
                repr(row.precision),
                repr(row.recall),
                repr(t.featurize_s),
                repr(t.reduce_s),
                repr(t.train_s),
                repr(t.eval_s),
                repr(row.total_s),
            ]))
        return ("\n".join(lines) + "\n").encode("utf-8")
    if format == "json":
        payload = {
            "environment": bench_report.environment,
            "rows": [
                {
                    "algo": row.algorithm,
                    "reduce": row.reduction,
                    "workers": row.workers,
                    "A": row.accuracy,
                    "P": row.precision,
                    "R": row.recall,
                    "stage_times": {
                        "ingest_s": row.stage_times.ingest_s,
                        "featurize_s": row.stage_times.featurize_s,
                        "reduce_s": row.stage_times.reduce_s,
                        "train_s": row.stage_times.train_s,
                        "eval_s": row.stage_times.eval_s,
                    },
                    "total_s": row.total_s,
                }
                for row in bench_report.rows
            ],
        }
        return (json.dumps(payload, indent=2) + "\n").encode("utf-8")
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def parse_report(data: bytes, format: str = "csv") -> BenchReport:
    """Inverse of emit_report (the CSV shape has no ingest_s/environment)."""
    text = data.decode("utf-8")
    if format == "csv":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines or lines[0] != _CSV_HEADER:
            raise SleepBenchError(f"unexpected report header: {lines[:1]!r}")
        rows = []
        for line in lines[1:]:
            parts = line.split(",")
            if len(parts) != 11:
                raise SleepBenchError(f"expected 11 report columns: {line!r}")
            rows.append(
                BenchRow(
                    algorithm=parts[0],
                    reduction=parts[1],
                    workers=int(parts[2]),
                    accuracy=float(parts[3]),
                    precision=float(parts[4]),
                    recall=float(parts[5]),
                    stage_times=StageTimes(
                        featurize_s=float(parts[6]),
                        reduce_s=float(parts[7]),
                        train_s=float(parts[8]),
                        eval_s=float(parts[9]),
                    ),
                    total_s=float(parts[10]),
                )
            )
        return BenchReport(rows=rows, environment="")
    if format == "json":
        payload = json.loads(text)
        rows = [
            BenchRow(
                algorithm=row["algo"],
                reduction=row["reduce"],
                workers=int(row["workers"]),
                accuracy=float(row["A"]),
                precision=float(row["P"]),
                recall=float(row["R"]),
                stage_times=StageTimes(**row["stage_times"]),
                total_s=float(row["total_s"]),
            )
            for row in payload["rows"]
        ]
        return BenchReport(rows=rows, environment=payload["environment"])
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
