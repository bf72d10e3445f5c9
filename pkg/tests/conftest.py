import numpy as np
import pytest

from sleepbench.features import build_dataset
from sleepbench.ingest import balanced_stage_sequence, epoch_split, synthesize_recording


@pytest.fixture(scope="session")
def synthetic_dataset():
    """120 balanced synthetic epochs, featurized once per session."""
    recording, hypnogram = synthesize_recording(
        balanced_stage_sequence(120), sample_rate_hz=100.0, seed=11
    )
    epochs = epoch_split(recording, hypnogram)
    return build_dataset(epochs, recording.sample_rate_hz, workers=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
