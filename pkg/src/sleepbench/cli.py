"""Command-line interface.

Subcommands: ingest, synth, train, eval, bench. Exit codes: 0 success,
1 usage error, 2 data error, 3 internal error. The bench subcommand
optionally reads a JSON config file mirroring PipelineConfig; explicit
flags override config values.
"""

import argparse
import json
import sys
import time
import traceback
from pathlib import Path

from .bench import (
    CsvSource,
    FileSource,
    PipelineConfig,
    ReductionSpec,
    SyntheticSource,
    emit_report,
    load_epochs,
    sweep,
)
from .classify import (
    ALGORITHMS,
    ModelSpec,
    fit_model,
    model_from_dict,
    model_to_dict,
    predict_batch,
)
from .errors import SleepBenchError
from .evaluate import confusion, metrics_to_csv, metrics_to_json, report
from .features import Dataset, build_dataset, dataset_from_csv, dataset_to_csv
from .ingest import balanced_stage_sequence, epoch_split, synthesize_recording
from .reduction import basis_from_dict, basis_to_dict, pca_fit, svd_reduce_fit, transform

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _build_parser() -> _Parser:
    parser = _Parser(prog="sleepbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ingest", help="EDF + hypnogram files -> dataset CSV")
    p.add_argument("--edf", nargs="+", required=True)
    p.add_argument("--hypnogram", nargs="+", required=True)
    p.add_argument("--channel", default=None, help="channel label (default: first EEG)")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="synthetic recording -> dataset CSV")
    p.add_argument("--stages", type=int, required=True, help="number of epochs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rate", type=float, default=100.0, help="sampling rate (Hz)")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="fit a model on a dataset CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--reduce", choices=("none", "pca", "svd"), default="none")
    p.add_argument("--k", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--model-out", required=True)

    p = sub.add_parser("eval", help="evaluate a saved model on a dataset CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--average", choices=("macro", "micro"), default="macro")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("bench", help="worker-count sweep over the full pipeline")
    p.add_argument("--config", default=None, help="JSON config mirroring PipelineConfig")
    p.add_argument("--data", default=None,
                   help="dataset CSV path or synth spec 'synth:<epochs>:<seed>'")
    p.add_argument("--algo", choices=ALGORITHMS, default=None)
    p.add_argument("--reduce", default=None,
                   help="comma list from {none,pca,svd} (default none)")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="model seed")
    p.add_argument("--train-fraction", type=float, default=None)
    p.add_argument("--split-seed", type=int, default=None)
    p.add_argument("--workers", default=None, help="comma list, e.g. 1,2,4,8")
    p.add_argument("--average", choices=("macro", "micro"), default="macro")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="report path (default: stdout)")

    return parser


def _write(path: str | None, data: str) -> None:
    if path is None:
        sys.stdout.write(data)
    else:
        Path(path).write_text(data, encoding="utf-8")


def _cmd_ingest(args) -> int:
    if len(args.edf) != len(args.hypnogram):
        raise _UsageError(
            f"{len(args.edf)} --edf paths vs {len(args.hypnogram)} --hypnogram paths"
        )
    source = FileSource(
        edf_paths=tuple(args.edf),
        hypnogram_paths=tuple(args.hypnogram),
        channel=args.channel,
    )
    epochs, rate = load_epochs(source)
    dataset = build_dataset(epochs, rate, workers=args.workers)
    _write(args.out, dataset_to_csv(dataset))
    print(f"wrote {dataset.n_rows} epochs x {dataset.n_features} features to {args.out}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    recording, hypnogram = synthesize_recording(
        balanced_stage_sequence(args.stages), sample_rate_hz=args.rate, seed=args.seed
    )
    epochs = epoch_split(recording, hypnogram)
    dataset = build_dataset(epochs, recording.sample_rate_hz, workers=args.workers)
    _write(args.out, dataset_to_csv(dataset))
    print(f"wrote {dataset.n_rows} epochs x {dataset.n_features} features to {args.out}")
    return EXIT_OK


def _cmd_train(args) -> int:
    dataset = dataset_from_csv(Path(args.data).read_text(encoding="utf-8"))
    basis = None
    if args.reduce != "none":
        fit = pca_fit if args.reduce == "pca" else svd_reduce_fit
        basis = fit(dataset.X, args.k)
        dataset = Dataset(
            X=transform(basis, dataset.X),
            y=dataset.y,
            feature_names=tuple(f"{args.reduce}{i}" for i in range(args.k)),
        )
    spec = ModelSpec(algorithm=args.algo, seed=args.seed)
    model = fit_model(dataset, spec, workers=args.workers)

    payload = model_to_dict(model)
    payload["reduction"] = basis_to_dict(basis) if basis is not None else None
    Path(args.model_out).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    print(f"trained {args.algo} on {dataset.n_rows} rows -> {args.model_out}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    dataset = dataset_from_csv(Path(args.data).read_text(encoding="utf-8"))
    payload = json.loads(Path(args.model).read_text(encoding="utf-8"))
    model = model_from_dict(payload)

    t0 = time.perf_counter()
    X = dataset.X
    reduce_label = "none"
    if payload.get("reduction"):
        basis = basis_from_dict(payload["reduction"])
        X = transform(basis, X)
        reduce_label = basis.kind
    predictions = predict_batch(model, X, workers=args.workers)
    metrics = report(confusion(dataset.y, predictions, class_list=model.class_list))
    seconds = time.perf_counter() - t0

    emit = metrics_to_csv if args.format == "csv" else metrics_to_json
    _write(args.out, emit(
        metrics,
        algo=model.spec.algorithm,
        reduce=reduce_label,
        workers=args.workers,
        seconds=seconds,
        average=args.average,
    ))
    return EXIT_OK


def _parse_synth_spec(text: str) -> SyntheticSource:
    parts = text.split(":")
    if len(parts) != 3 or parts[0] != "synth":
        raise _UsageError(f"expected 'synth:<epochs>:<seed>', got {text!r}")
    try:
        return SyntheticSource(n_epochs=int(parts[1]), seed=int(parts[2]))
    except ValueError:
        raise _UsageError(f"bad synth spec {text!r}") from None


def _config_from_file(path: str) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _source_from_config(raw: dict):
    if "synthetic" in raw:
        return SyntheticSource(**raw["synthetic"])
    if "files" in raw:
        f = raw["files"]
        return FileSource(
            edf_paths=tuple(f["edf"]),
            hypnogram_paths=tuple(f["hypnogram"]),
            channel=f.get("channel"),
        )
    if "dataset_csv" in raw:
        return CsvSource(path=raw["dataset_csv"])
    raise _UsageError("config data source must be synthetic, files, or dataset_csv")


def _cmd_bench(args) -> int:
    raw = _config_from_file(args.config) if args.config else {}

    if args.data is not None:
        if args.data.startswith("synth:"):
            source = _parse_synth_spec(args.data)
        else:
            source = CsvSource(path=args.data)
    elif "data" in raw:
        source = _source_from_config(raw["data"])
    else:
        raise _UsageError("bench needs --data or a config file with a data source")

    model_raw = raw.get("algorithm", {})
    algo = args.algo or model_raw.get("algorithm")
    if algo is None:
        raise _UsageError("bench needs --algo or a config file with an algorithm")
    # config hyperparameters only apply to the algorithm they were written for
    hyperparameters = (
        dict(model_raw.get("hyperparameters", {}))
        if algo == model_raw.get("algorithm")
        else {}
    )
    spec = ModelSpec(
        algorithm=algo,
        hyperparameters=hyperparameters,
        seed=args.seed if args.seed is not None else model_raw.get("seed", 0),
    )

    k = args.k if args.k is not None else raw.get("k", 30)
    if args.reduce is not None:
        kinds = [kind.strip() for kind in args.reduce.split(",") if kind.strip()]
    else:
        kinds = raw.get("reductions", ["none"])
    reductions = tuple(ReductionSpec(kind=kind, k=k) for kind in kinds)

    if args.workers is not None:
        try:
            worker_counts = tuple(int(w) for w in str(args.workers).split(",") if w)
        except ValueError:
            raise _UsageError(f"bad --workers list {args.workers!r}") from None
        if not worker_counts or any(w < 1 for w in worker_counts):
            raise _UsageError(f"worker counts must be >= 1: {args.workers!r}")
    else:
        worker_counts = tuple(raw.get("worker_counts", [1]))

    config = PipelineConfig(
        source=source,
        model=spec,
        reductions=reductions,
        train_fraction=(
            args.train_fraction
            if args.train_fraction is not None
            else raw.get("train_fraction", 0.8)
        ),
        split_seed=(
            args.split_seed if args.split_seed is not None else raw.get("split_seed", 42)
        ),
        worker_counts=worker_counts,
    )
    bench_report = sweep(config, average=args.average)
    data = emit_report(bench_report, format=args.format).decode("utf-8")
    _write(args.out, data)
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "synth": _cmd_synth,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required")
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SleepBenchError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except KeyboardInterrupt:
        raise
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
