"""Sleep-stage classification pipeline and worker-scaling benchmark.

Pipeline: parse (or synthesize) EEG recordings, slice them into labeled
30-second epochs, extract 75 band statistics per epoch, optionally
reduce with PCA/SVD, classify with one of five from-scratch models, and
measure per-stage wall time across worker counts.
"""

from .stages import EPOCH_SECONDS, STAGES, SleepStage

__version__ = "0.1.0"

__all__ = ["SleepStage", "STAGES", "EPOCH_SECONDS", "__version__"]
