"""Rewriting fine-tuning samples from tables with ground-truth images."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

from pathlib import Path

import click

from tablevis_tools.backends import ImageBlob
from tablevis_tools.bench import load_dataset
from tablevis_tools.cli.common import BadInput, config_options, load_app_config, open_store, out_option
from tablevis_tools.cli.datagen.common import batch_option, write_batch
from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import DatasetError
from tablevis_tools.datagen import SkipRecord, build_rewrite_samples
from tablevis_tools.tables import TableInstance


@click.command("rewrite")  # type: ignore[misc]
@click.option(  # type: ignore[misc]
    "--dataset",
    "dataset_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="JSON lines dataset; instances need a reference_image_path",
)
@click.option(  # type: ignore[misc]
    "--concurrency",
    type=click.IntRange(min=1),
    default=consts.compute.DEFAULT_CONCURRENCY,
    show_default=True,
    help="Number of instances processed in parallel",
)
@config_options
@batch_option
@out_option
def datagen_rewrite(
    dataset_path: Path,
    concurrency: int,
    config_path: Path | None,
    batch: str,
    out: Path,
    *,
    mock: bool = False,
) -> None:
    """Describes each ground-truth image, then reasons from the table to that description."""
    cfg = load_app_config(config_path, mock=mock)
    try:
        dataset = load_dataset(dataset_path)
    except DatasetError as ex:
        raise BadInput(str(ex)) from ex
    store = open_store(out)

    items: list[tuple[TableInstance, ImageBlob]] = []
    skips: list[SkipRecord] = []
    for instance in dataset.instances:
        if instance.reference_image is None:
            skips.append(SkipRecord(item_id=instance.id, reason="no reference image"))
            continue
        try:
            items.append((instance, ImageBlob.from_file(Path(instance.reference_image))))
        except OSError as ex:
            skips.append(SkipRecord(item_id=instance.id, reason=f"cannot read reference image: {ex}"))

    samples, failed = build_rewrite_samples(items, cfg.judge.judge, concurrency, cfg.judge.templates_dir)
    write_batch(store, "rewrite", batch, samples, [*skips, *failed])
