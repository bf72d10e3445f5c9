"""Synthetic single-channel recordings with stage-dependent content.

Each 30-second epoch is one sinusoid: frequency drawn uniformly from the
stage's characteristic band, peak amplitude at the midpoint of the
stage's amplitude range, plus +/-5 uV uniform noise. Output is a pure
function of (stage_sequence, sample_rate_hz, seed).
"""

import numpy as np

from ..errors import EmptyStageSequence
from ..stages import EPOCH_SECONDS, STAGES, SleepStage
from .edf import Recording
from .hypnogram import Hypnogram

#: Dominant frequency range (Hz) per stage.
STAGE_FREQUENCY_HZ = {
    SleepStage.WAKE: (15.0, 50.0),
    SleepStage.S1: (4.0, 8.0),
    SleepStage.S2: (4.0, 15.0),
    SleepStage.S3: (2.0, 4.0),
    SleepStage.S4: (0.5, 2.0),
    SleepStage.REM: (15.0, 30.0),
}

#: Peak amplitude range (uV) per stage; "< 50" rows read as (0, 50).
STAGE_AMPLITUDE_UV = {
    SleepStage.WAKE: (0.0, 50.0),
    SleepStage.S1: (50.0, 100.0),
    SleepStage.S2: (50.0, 150.0),
    SleepStage.S3: (100.0, 150.0),
    SleepStage.S4: (100.0, 200.0),
    SleepStage.REM: (0.0, 50.0),
}

NOISE_UV = 5.0
MIN_SAMPLE_RATE_HZ = 64.0  # keeps the wake band below Nyquist


def synthesize_recording(
    stage_sequence: list[SleepStage],
    sample_rate_hz: float = 100.0,
    seed: int = 0,
) -> tuple[Recording, Hypnogram]:
    """Generate a recording plus matching hypnogram for the given stages."""
    if len(stage_sequence) == 0:
        raise EmptyStageSequence("stage_sequence must contain at least one epoch")
    if sample_rate_hz < MIN_SAMPLE_RATE_HZ:
        raise ValueError(f"sample_rate_hz must be >= {MIN_SAMPLE_RATE_HZ:g}")
    for stage in stage_sequence:
        if stage not in STAGE_FREQUENCY_HZ:
            raise ValueError(f"cannot synthesize stage {stage!r}")

    rng = np.random.default_rng(seed)
    n = round(EPOCH_SECONDS * sample_rate_hz)
    t = np.arange(n) / sample_rate_hz

    chunks = []
    for stage in stage_sequence:
        lo, hi = STAGE_FREQUENCY_HZ[stage]
        freq = rng.uniform(lo, hi)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        amp_lo, amp_hi = STAGE_AMPLITUDE_UV[stage]
        amplitude = 0.5 * (amp_lo + amp_hi)
        noise = rng.uniform(-NOISE_UV, NOISE_UV, size=n)
        chunks.append(amplitude * np.sin(2.0 * np.pi * freq * t + phase) + noise)

    recording = Recording(
        subject_id=f"synthetic-{seed}",
        channel_label="EEG synth",
        sample_rate_hz=float(sample_rate_hz),
        samples=np.concatenate(chunks),
    )
    hypnogram = Hypnogram(
        entries=tuple((i, stage) for i, stage in enumerate(stage_sequence))
    )
    return recording, hypnogram


def balanced_stage_sequence(n_epochs: int) -> list[SleepStage]:
    """Cycle W,1,2,3,4,R; a multiple of six gives perfectly balanced classes."""
    return [STAGES[i % len(STAGES)] for i in range(n_epochs)]
