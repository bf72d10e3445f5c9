import pytest

from sleepbench.bench import (
    BenchReport,
    CsvSource,
    FileSource,
    PipelineConfig,
    ReductionSpec,
    SyntheticSource,
    emit_report,
    load_epochs,
    parse_report,
    run_pipeline,
    sweep,
)
from sleepbench.classify import ModelSpec
from sleepbench.errors import DataLoadError, EmptyReport

_SOURCE = SyntheticSource(n_epochs=36, seed=8)


def _config(algo="nb", **overrides):
    defaults = dict(
        source=_SOURCE,
        model=ModelSpec(algo, {"num_trees": 8} if algo == "rf" else {}, seed=1),
        reductions=(ReductionSpec("none"),),
        train_fraction=0.75,
        split_seed=5,
        worker_counts=(1,),
    )
    defaults.update(overrides)
    return PipelineConfig(**defaults)


def test_reduction_spec_validation():
    with pytest.raises(ValueError):
        ReductionSpec("lda")
    with pytest.raises(ValueError):
        ReductionSpec("pca", k=0)
    with pytest.raises(ValueError):
        ReductionSpec("svd", k=76)
    ReductionSpec("none", k=0)  # k is ignored for the raw variant


def test_pipeline_config_validation():
    with pytest.raises(ValueError):
        _config(worker_counts=())
    with pytest.raises(ValueError):
        _config(worker_counts=(4, 1))
    with pytest.raises(ValueError):
        _config(worker_counts=(0,))
    with pytest.raises(ValueError):
        _config(reductions=())
    with pytest.raises(ValueError):
        _config(train_fraction=1.5)


def test_metrics_identical_across_workers():
    config = _config("nb")
    a, _ = run_pipeline(config, workers=1)
    b, _ = run_pipeline(config, workers=4)
    assert a == b


def test_stage_times_positive():
    _, times = run_pipeline(_config("nb"), workers=1)
    for name in ("ingest_s", "featurize_s", "reduce_s", "train_s", "eval_s"):
        assert getattr(times, name) > 0.0


def test_reductions_change_feature_count_not_contract():
    config = _config("dt", reductions=(ReductionSpec("pca", k=5),))
    metrics, _ = run_pipeline(config, workers=1)
    assert 0.0 <= metrics.accuracy <= 1.0

    config = _config("dt", reductions=(ReductionSpec("svd", k=5),))
    metrics, _ = run_pipeline(config, workers=1)
    assert 0.0 <= metrics.accuracy <= 1.0


def test_missing_file_is_data_load_error():
    config = _config(
        source=FileSource(edf_paths=("no-such.edf",), hypnogram_paths=("no.csv",))
    )
    with pytest.raises(DataLoadError):
        run_pipeline(config, workers=1)
    with pytest.raises(DataLoadError):
        load_epochs(
            FileSource(edf_paths=("a.edf",), hypnogram_paths=("x.csv", "y.csv"))
        )
    with pytest.raises(DataLoadError):
        run_pipeline(_config(source=CsvSource("no-such.csv")), workers=1)


def test_sweep_structure_single_row():
    report = sweep(_config("nb"))
    assert len(report.rows) == 1
    assert report.rows[0].workers == 1
    assert report.rows[0].algorithm == "nb"
    assert "cores=" in report.environment


def test_sweep_cartesian_structure_and_metric_repeats():
    config = _config(
        "nb",
        reductions=(ReductionSpec("none"), ReductionSpec("pca", 10), ReductionSpec("svd", 10)),
        worker_counts=(1, 2),
    )
    report = sweep(config)
    assert len(report.rows) == 6
    by_reduction = {}
    for row in report.rows:
        key = row.reduction
        triple = (row.accuracy, row.precision, row.recall)
        by_reduction.setdefault(key, set()).add(triple)
    # rows that differ only in workers have identical metrics
    assert all(len(v) == 1 for v in by_reduction.values())
    assert set(by_reduction) == {"none", "pca", "svd"}


def test_emit_report_csv_shape():
    report = sweep(_config("nb"))
    data = emit_report(report, format="csv").decode()
    lines = data.strip().splitlines()
    assert lines[0] == "algo,reduce,workers,A,P,R,featurize_s,reduce_s,train_s,eval_s,total_s"
    assert len(lines) == 2
    assert lines[1].startswith("nb,none,1,")


def test_report_round_trips():
    report = sweep(_config("dt", worker_counts=(1, 2)))

    json_back = parse_report(emit_report(report, "json"), "json")
    assert json_back.environment == report.environment
    assert json_back.rows == report.rows

    csv_back = parse_report(emit_report(report, "csv"), "csv")
    for original, parsed in zip(report.rows, csv_back.rows):
        assert parsed.algorithm == original.algorithm
        assert parsed.reduction == original.reduction
        assert parsed.workers == original.workers
        assert parsed.accuracy == original.accuracy
        assert parsed.precision == original.precision
        assert parsed.recall == original.recall
        assert parsed.stage_times.featurize_s == original.stage_times.featurize_s
        assert parsed.stage_times.train_s == original.stage_times.train_s
        assert parsed.total_s == original.total_s


def test_emit_empty_report():
    with pytest.raises(EmptyReport):
        emit_report(BenchReport(rows=[]), "csv")


def test_csv_source_round_trip(tmp_path, synthetic_dataset):
    from sleepbench.features import dataset_to_csv

    path = tmp_path / "data.csv"
    path.write_text(dataset_to_csv(synthetic_dataset))
    config = _config("dt", source=CsvSource(str(path)))
    metrics, times = run_pipeline(config, workers=1)
    assert 0.0 <= metrics.accuracy <= 1.0
    assert times.ingest_s > 0.0
