"""Recording ingestion: EDF parsing, hypnograms, synthesis, epoching."""

from .edf import (
    Recording,
    parse_edf,
    parse_edf_digital,
    pick_channel,
    quantize,
    write_edf,
)
from .epochs import LabeledEpoch, epoch_split
from .hypnogram import (
    Hypnogram,
    format_csv_hypnogram,
    parse_csv_hypnogram,
    parse_tal_annotations,
)
from .synthetic import (
    NOISE_UV,
    STAGE_AMPLITUDE_UV,
    STAGE_FREQUENCY_HZ,
    balanced_stage_sequence,
    synthesize_recording,
)

__all__ = [
    "Recording",
    "LabeledEpoch",
    "Hypnogram",
    "parse_edf",
    "parse_edf_digital",
    "pick_channel",
    "quantize",
    "write_edf",
    "epoch_split",
    "parse_csv_hypnogram",
    "parse_tal_annotations",
    "format_csv_hypnogram",
    "synthesize_recording",
    "balanced_stage_sequence",
    "STAGE_FREQUENCY_HZ",
    "STAGE_AMPLITUDE_UV",
    "NOISE_UV",
]
