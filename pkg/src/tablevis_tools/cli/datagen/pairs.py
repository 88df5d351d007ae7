"""Preference pairs voted on by two judges."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

from pathlib import Path

import click
from pydantic import BaseModel, ConfigDict

from tablevis_tools.cli.common import (
    BadInput,
    config_options,
    load_app_config,
    open_store,
    out_option,
    read_jsonl,
)
from tablevis_tools.cli.datagen.common import batch_option, input_option, read_image, write_batch
from tablevis_tools.core import consts
from tablevis_tools.datagen import PairCandidate, build_preference_pairs
from tablevis_tools.datagen.models import PairSource


class PairInput(BaseModel):
    """Input line: a prompt with two images and the comparison they come from."""

    model_config = ConfigDict(frozen=True)

    prompt: str
    image_a_path: str
    image_b_path: str
    source: PairSource


@click.command("pairs")  # type: ignore[misc]
@input_option
@click.option(  # type: ignore[misc]
    "--concurrency",
    type=click.IntRange(min=1),
    default=consts.compute.DEFAULT_CONCURRENCY,
    show_default=True,
    help="Number of pairs voted on in parallel",
)
@config_options
@batch_option
@out_option
def datagen_pairs(
    input_path: Path,
    concurrency: int,
    config_path: Path | None,
    batch: str,
    out: Path,
    *,
    mock: bool = False,
) -> None:
    """Keeps the image pairs on which the judge and the secondary judge agree on a winner."""
    cfg = load_app_config(config_path, mock=mock)
    if cfg.judge_secondary is None:
        msg = "Preference voting needs a judge_secondary backend in the config"
        raise BadInput(msg)
    if cfg.judge_secondary == cfg.judge.judge:
        msg = "judge and judge_secondary must be different backends"
        raise BadInput(msg)

    inputs = read_jsonl(input_path, PairInput)
    candidates = [
        PairCandidate(
            prompt=item.prompt,
            image_a=read_image(item.image_a_path, input_path.parent),
            image_b=read_image(item.image_b_path, input_path.parent),
            source=item.source,
        )
        for item in inputs
    ]
    store = open_store(out)
    pairs, skips = build_preference_pairs(
        candidates,
        (cfg.judge.judge, cfg.judge_secondary),
        store=store,
        templates_dir=cfg.judge.templates_dir,
        concurrency=concurrency,
    )
    write_batch(store, "pairs", batch, [pair.to_record() for pair in pairs], skips)
