"""Sleep stage labels and their text tokens."""

import enum


class SleepStage(enum.IntEnum):
    """Six-class stage set plus an ingestion-only Excluded sentinel.

    Integer values define the fixed class order used everywhere a
    tie-break says "earlier class". Excluded marks epochs dropped before
    featurization and never reaches a Dataset.
    """

    WAKE = 0
    S1 = 1
    S2 = 2
    S3 = 3
    S4 = 4
    REM = 5
    EXCLUDED = -1

    @property
    def token(self) -> str:
        return _STAGE_TO_TOKEN[self]


#: Classifier-facing stages in fixed order W,1,2,3,4,R.
STAGES: tuple[SleepStage, ...] = (
    SleepStage.WAKE,
    SleepStage.S1,
    SleepStage.S2,
    SleepStage.S3,
    SleepStage.S4,
    SleepStage.REM,
)

EPOCH_SECONDS = 30.0

_STAGE_TO_TOKEN = {
    SleepStage.WAKE: "W",
    SleepStage.S1: "1",
    SleepStage.S2: "2",
    SleepStage.S3: "3",
    SleepStage.S4: "4",
    SleepStage.REM: "R",
    SleepStage.EXCLUDED: "?",
}

#: Accepted stage tokens; "?" and "M" (movement) both map to Excluded.
TOKEN_TO_STAGE = {
    "W": SleepStage.WAKE,
    "1": SleepStage.S1,
    "2": SleepStage.S2,
    "3": SleepStage.S3,
    "4": SleepStage.S4,
    "R": SleepStage.REM,
    "?": SleepStage.EXCLUDED,
    "M": SleepStage.EXCLUDED,
}
