#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Benchmark datasets, execution and reports."""

from __future__ import annotations

from tablevis_tools.bench.dataset import BenchDataset, DatasetLine, load_dataset
from tablevis_tools.bench.report import (
    BenchReport,
    DimensionMeans,
    HistogramBucket,
    InstanceFailure,
    InstanceRow,
    emit_report,
    histogram,
    load_report,
    stats,
)
from tablevis_tools.bench.runner import run_bench, run_instance

__all__ = [
    "BenchDataset",
    "BenchReport",
    "DatasetLine",
    "DimensionMeans",
    "HistogramBucket",
    "InstanceFailure",
    "InstanceRow",
    "emit_report",
    "histogram",
    "load_dataset",
    "load_report",
    "run_bench",
    "run_instance",
    "stats",
]
