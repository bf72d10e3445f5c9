"""Slicing recordings into labeled 30-second epochs."""

from dataclasses import dataclass

import numpy as np

from ..errors import IndexOutOfRange
from ..stages import SleepStage
from .edf import Recording
from .hypnogram import Hypnogram


@dataclass(frozen=True, eq=False)
class LabeledEpoch:
    """One scored window: exactly round(30 * fs) samples and a real stage."""

    samples: np.ndarray
    stage: SleepStage
    source: tuple[str, int]  # (subject_id, epoch_index)


def epoch_split(recording: Recording, hypnogram: Hypnogram) -> list[LabeledEpoch]:
    """One LabeledEpoch per non-Excluded hypnogram entry.

    Excluded entries are dropped; recording samples past the last entry
    (including a trailing partial epoch) are ignored. Every entry must
    lie fully inside the recording.
    """
    n = round(hypnogram.epoch_seconds * recording.sample_rate_hz)
    total = recording.samples.size

    epochs = []
    for index, stage in hypnogram.entries:
        end = (index + 1) * n
        if end > total:
            raise IndexOutOfRange(
                f"epoch {index} needs samples up to {end}, recording has {total}"
            )
        if stage is SleepStage.EXCLUDED:
            continue
        epochs.append(
            LabeledEpoch(
                samples=recording.samples[index * n:end],
                stage=stage,
                source=(recording.subject_id, index),
            )
        )
    return epochs
