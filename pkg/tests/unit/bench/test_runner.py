#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from tablevis_tools.backends import clear_backend_cache, get_backend, stamp_image
from tablevis_tools.bench import InstanceFailure, InstanceRow, load_dataset, run_bench, run_instance
from tablevis_tools.core.config import AppConfig, BackendConfig, MockScript
from tablevis_tools.judge import ScoresDocument, scores_key
from tablevis_tools.runstore import RunStore, verify_store
from tablevis_tools.tables import TableInstance

if TYPE_CHECKING:
    from pathlib import Path

    from tablevis_tools.bench import BenchDataset
    from tablevis_tools.core.config import PipelineConfig


@pytest.fixture
def dataset(fixtures_dir: Path) -> BenchDataset:
    return load_dataset(fixtures_dir / "dataset.jsonl")


def _all_backends(cfg: AppConfig) -> list[BackendConfig]:
    p, j = cfg.pipeline, cfg.judge
    return [p.rewrite, p.generate, p.reflect, p.refine, j.judge, j.aesthetic]


def _total_calls(cfg: AppConfig) -> int:
    return sum(sum(get_backend(backend).calls.values()) for backend in _all_backends(cfg))


def test_mock_benchmark(dataset: BenchDataset, tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    store = RunStore(tmp_path)

    report = run_bench(dataset, cfg.pipeline, cfg.judge, store, concurrency=2)

    assert report.ok
    assert [row.instance_id for row in report.rows] == dataset.ids
    for row in report.rows:
        assert (row.da, row.tr, row.rr, row.aa) == pytest.approx((90.0, 97.0, 100.0, 90.0))
        assert row.score == pytest.approx((90.0 + 97.0 + 100.0 + 90.0 + 10 * row.aq) / 5)
        assert store.has_document(scores_key(row.instance_id))
    assert [row.n_total for row in report.rows] == [4, 6, 2, 4]
    assert sum(bucket.count for bucket in report.histogram) == len(dataset.instances)
    assert verify_store(store) == []


def test_resume_makes_no_calls_and_keeps_scores(dataset: BenchDataset, tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    store = RunStore(tmp_path)
    first = run_bench(dataset, cfg.pipeline, cfg.judge, store)
    before = {i: (tmp_path / "runs" / i / "scores.json").read_bytes() for i in dataset.ids}

    clear_backend_cache()
    second = run_bench(dataset, cfg.pipeline, cfg.judge, store, resume=True)

    assert _total_calls(cfg) == 0
    assert second.rows == first.rows
    assert {i: (tmp_path / "runs" / i / "scores.json").read_bytes() for i in dataset.ids} == before


def test_resume_runs_missing_instances_only(dataset: BenchDataset, tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    store = RunStore(tmp_path)
    run_bench(dataset, cfg.pipeline, cfg.judge, store)
    (tmp_path / "runs" / "survey" / "scores.json").unlink()

    clear_backend_cache()
    report = run_bench(dataset, cfg.pipeline, cfg.judge, store, resume=True)

    assert report.ok
    assert get_backend(cfg.pipeline.rewrite).calls["chat"] == 1
    assert store.has_document(scores_key("survey"))


def test_instance_concurrency_is_bounded(dataset: BenchDataset, tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    slow = cfg.pipeline.model_copy(update={"generate": BackendConfig.mock(MockScript(name="slow", latency_ms=50))})

    report = run_bench(dataset, slow, cfg.judge, RunStore(tmp_path), concurrency=2)

    assert report.ok
    assert 1 <= get_backend(slow.generate).peak_in_flight <= 2  # noqa: PLR2004


def test_backend_in_flight_cap(dataset: BenchDataset, tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    capped = BackendConfig.mock(MockScript(name="capped", latency_ms=20), max_in_flight=1)
    pipeline = cfg.pipeline.model_copy(update={"generate": capped})

    run_bench(dataset, pipeline, cfg.judge, RunStore(tmp_path), concurrency=4)

    assert get_backend(capped).peak_in_flight == 1
    assert get_backend(capped).calls["generate"] == len(dataset.instances)


def test_failures_are_reported_and_do_not_stop_the_run(dataset: BenchDataset, tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    refusing: PipelineConfig = cfg.pipeline.model_copy(
        update={"generate": BackendConfig.mock(MockScript(name="refusing", refuse_images=True))}
    )

    report = run_bench(dataset, refusing, cfg.judge, RunStore(tmp_path))

    assert not report.ok
    assert report.rows == ()
    assert [f.instance_id for f in report.failures] == dataset.ids
    assert {(f.stage, f.error_type) for f in report.failures} == {("pipeline", "PipelineRunError")}


def test_per_round_scores(dataset: BenchDataset, tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    store = RunStore(tmp_path)

    report = run_bench(dataset, cfg.pipeline, cfg.judge, store, per_round=True)

    assert report.ok
    for row in report.rows:
        assert len(row.round_scores) == cfg.pipeline.max_rounds + 1
        assert row.round_scores[-1] == pytest.approx(row.score)
        assert row.round_scores[2] == row.round_scores[3]
    assert len(report.round_means) == cfg.pipeline.max_rounds + 1

    clear_backend_cache()
    resumed = run_bench(dataset, cfg.pipeline, cfg.judge, store, resume=True, per_round=True)
    assert resumed.rows == report.rows
    assert _total_calls(cfg) == 0


def test_reference_images(tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    image_path = tmp_path / "gt.png"
    image_path.write_bytes(stamp_image(b"ground truth").data)
    table = "| A | B |\n|---|---|\n| 1 | 2 |"
    with_image = TableInstance.from_markdown("gt", table, reference_image=image_path.as_posix())
    without = TableInstance.from_markdown("none", table)
    store = RunStore(tmp_path / "out")

    row = run_instance(with_image, cfg.pipeline, cfg.judge, store, reference_images=True)
    failure = run_instance(without, cfg.pipeline, cfg.judge, store, reference_images=True)

    assert isinstance(row, InstanceRow)
    reference = store.read_document(scores_key("gt", "reference"), ScoresDocument)
    assert reference.image == stamp_image(b"ground truth").sha256
    assert not store.has_document(scores_key("gt"))
    assert get_backend(cfg.pipeline.rewrite).calls["chat"] == 0
    assert isinstance(failure, InstanceFailure)
    assert (failure.stage, failure.error_type) == ("reference", "MissingReferenceImage")


def test_reference_scores_are_not_resumed_as_pipeline_scores(tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    image_path = tmp_path / "gt.png"
    image_path.write_bytes(stamp_image(b"ground truth").data)
    table = TableInstance.from_markdown("gt", "| A | B |\n|---|---|\n| 1 | 2 |", reference_image=image_path.as_posix())
    store = RunStore(tmp_path / "out")
    run_instance(table, cfg.pipeline, cfg.judge, store, reference_images=True)

    clear_backend_cache()
    row = run_instance(table, cfg.pipeline, cfg.judge, store, resume=True)

    assert isinstance(row, InstanceRow)
    assert get_backend(cfg.pipeline.generate).calls["generate"] == 1
    final = store.read_document(scores_key("gt"), ScoresDocument).image
    assert final != stamp_image(b"ground truth").sha256


def test_unreadable_reference_image(tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    table = TableInstance.from_markdown("gt", "| A |\n|---|\n| 1 |", reference_image=(tmp_path / "nope.png").as_posix())
    failure = run_instance(table, cfg.pipeline, cfg.judge, RunStore(tmp_path / "out"), reference_images=True)
    assert isinstance(failure, InstanceFailure)
    assert failure.error_type == "FileNotFoundError"


def test_invalid_concurrency(dataset: BenchDataset, tmp_path: Path) -> None:
    cfg = AppConfig.mock()
    with pytest.raises(ValueError, match="concurrency"):
        run_bench(dataset, cfg.pipeline, cfg.judge, RunStore(tmp_path), concurrency=0)
