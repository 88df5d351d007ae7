"""Rollout filtering of refinement samples."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path

import click
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from tablevis_tools.cli.common import config_options, load_app_config, open_store, out_option, read_jsonl
from tablevis_tools.cli.datagen.common import batch_option, input_option, read_image, write_batch
from tablevis_tools.core import consts
from tablevis_tools.datagen import RefinementSample, RolloutOutcome, SkipRecord, rollout_filter


class RolloutInput(BaseModel):
    """Input line: an initial image with the instruction to refine it."""

    model_config = ConfigDict(frozen=True)

    initial_image_path: str
    instruction: str = Field(min_length=1)
    table_markdown: str


@click.command("rollout")  # type: ignore[misc]
@input_option
@click.option(  # type: ignore[misc]
    "--k",
    "k",
    type=click.IntRange(min=2),
    default=consts.pipeline.ROLLOUT_K,
    show_default=True,
    help="Number of edited candidates per sample",
)
@click.option(  # type: ignore[misc]
    "--concurrency",
    type=click.IntRange(min=1),
    default=consts.compute.DEFAULT_CONCURRENCY,
    show_default=True,
    help="Number of samples processed in parallel",
)
@config_options
@batch_option
@out_option
def datagen_rollout(
    input_path: Path,
    k: int,
    concurrency: int,
    config_path: Path | None,
    batch: str,
    out: Path,
    *,
    mock: bool = False,
) -> None:
    """Edits every sample k times and keeps those whose candidates are not unanimously better or worse."""
    cfg = load_app_config(config_path, mock=mock)
    inputs = read_jsonl(input_path, RolloutInput)
    store = open_store(out)

    images = [read_image(item.initial_image_path, input_path.parent) for item in inputs]
    samples = [
        RefinementSample(initial_image=image.sha256, instruction=item.instruction, table_markdown=item.table_markdown)
        for item, image in zip(inputs, images, strict=True)
    ]

    outcomes: dict[int, RolloutOutcome] = {}
    with ThreadPoolExecutor(max_workers=concurrency, thread_name_prefix="rollout") as executor:
        futures = {
            executor.submit(
                rollout_filter,
                sample,
                image,
                cfg.pipeline.refine,
                cfg.judge.judge,
                k,
                store,
                cfg.judge.templates_dir,
            ): idx
            for idx, (sample, image) in enumerate(zip(samples, images, strict=True))
        }
        for future in tqdm(as_completed(futures), total=len(futures), desc="Rollout filtering", unit="sample"):
            outcomes[futures[future]] = future.result()

    ordered = [outcomes[idx] for idx in range(len(samples))]
    skips = [
        SkipRecord(item_id=f"sample-{idx}", reason=outcome.reason or "discarded")
        for idx, outcome in enumerate(ordered)
        if not outcome.kept
    ]
    write_batch(store, "rollout", batch, [outcome.to_record() for outcome in ordered], skips)
