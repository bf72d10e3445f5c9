"""Hypnogram parsing: EDF+ style annotation lists and a CSV sidecar format.

Both produce the same structure: 30-second epoch indices paired with
stage labels. Annotation texts "Sleep stage ?" and "Movement time" (CSV
tokens "?" and "M") become the Excluded sentinel.
"""

import math
import warnings
from dataclasses import dataclass

from ..errors import (
    BadStageToken,
    MalformedCsv,
    MalformedTAL,
    NonAlignedOnsetWarning,
    NonMonotoneIndex,
)
from ..stages import EPOCH_SECONDS, SleepStage, TOKEN_TO_STAGE

_DURATION_SEP = 0x15
_TEXT_SEP = 0x14
_TAL_END = 0x00

_ANNOTATION_STAGES = {
    "Sleep stage W": SleepStage.WAKE,
    "Sleep stage 1": SleepStage.S1,
    "Sleep stage 2": SleepStage.S2,
    "Sleep stage 3": SleepStage.S3,
    "Sleep stage 4": SleepStage.S4,
    "Sleep stage R": SleepStage.REM,
    "Sleep stage ?": SleepStage.EXCLUDED,
    "Movement time": SleepStage.EXCLUDED,
}


@dataclass(frozen=True)
class Hypnogram:
    """Stage label per 30-second epoch, sparse over epoch indices."""

    entries: tuple[tuple[int, SleepStage], ...]
    epoch_seconds: float = EPOCH_SECONDS

    def __post_init__(self):
        if self.epoch_seconds != EPOCH_SECONDS:
            raise ValueError(f"epoch_seconds is fixed at {EPOCH_SECONDS}")
        last = -1
        for index, _ in self.entries:
            if index < 0:
                raise ValueError(f"negative epoch index {index}")
            if index <= last:
                raise ValueError("epoch indices must be strictly increasing")
            last = index

    def stages(self) -> list[SleepStage]:
        return [stage for _, stage in self.entries]


def parse_tal_annotations(data: bytes) -> Hypnogram:
    """Decode a byte sequence of time-stamped annotation lists.

    Each TAL is ``onset [0x15 duration] (0x14 text)+ 0x14 0x00`` with the
    onset prefixed by '+' or '-'. Unrecognized annotation texts are
    ignored. Overlapping stage annotations resolve to the last one seen.
    """
    by_index: dict[int, SleepStage] = {}
    pos = 0
    while pos < len(data):
        if data[pos] == _TAL_END:  # padding between / after TALs
            pos += 1
            continue
        end = data.find(bytes([_TAL_END]), pos)
        if end < 0:
            raise MalformedTAL("missing 0x00 terminator")
        _parse_one_tal(data[pos:end], by_index)
        pos = end + 1
    return Hypnogram(entries=tuple(sorted(by_index.items())))


def _parse_one_tal(chunk: bytes, out: dict) -> None:
    if not chunk.endswith(bytes([_TEXT_SEP])):
        raise MalformedTAL(f"annotation list not terminated by 0x14: {chunk!r}")
    fields = chunk[:-1].split(bytes([_TEXT_SEP]))
    head, texts = fields[0], fields[1:]

    if bytes([_DURATION_SEP]) in head:
        onset_raw, duration_raw = head.split(bytes([_DURATION_SEP]), 1)
        duration = _parse_number(duration_raw, "duration")
    else:
        onset_raw = head
        duration = None

    if onset_raw[:1] not in (b"+", b"-"):
        raise MalformedTAL(f"onset must start with '+' or '-': {onset_raw!r}")
    onset = _parse_number(onset_raw, "onset")

    for text in texts:
        stage = _ANNOTATION_STAGES.get(text.decode("utf-8", errors="replace"))
        if stage is None:
            continue
        # A stage annotation with no duration covers its own epoch.
        span = EPOCH_SECONDS if duration is None else duration
        first = _onset_to_epoch(onset)
        if first < 0:
            raise MalformedTAL(f"stage annotation at negative onset {onset}")
        for k in range(int(math.floor(span / EPOCH_SECONDS))):
            out[first + k] = stage


def _parse_number(raw: bytes, what: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise MalformedTAL(f"unparseable {what}: {raw!r}") from None


def _onset_to_epoch(onset: float) -> int:
    if math.fmod(onset, EPOCH_SECONDS) != 0.0:
        warnings.warn(
            f"onset {onset} s is not a multiple of {EPOCH_SECONDS:g} s; "
            "rounding down",
            NonAlignedOnsetWarning,
            stacklevel=3,
        )
    return int(math.floor(onset / EPOCH_SECONDS))


def parse_csv_hypnogram(text: str) -> Hypnogram:
    """Parse "epoch_index,stage" lines; stage in {W,1,2,3,4,R,?,M}."""
    entries: list[tuple[int, SleepStage]] = []
    last = -1
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise MalformedCsv(f"line {lineno}: expected 'epoch_index,stage'")
        try:
            index = int(parts[0].strip())
        except ValueError:
            raise MalformedCsv(f"line {lineno}: bad epoch index {parts[0]!r}") from None
        token = parts[1].strip()
        stage = TOKEN_TO_STAGE.get(token)
        if stage is None:
            raise BadStageToken(f"line {lineno}: unknown stage token {token!r}")
        if index <= last:
            raise NonMonotoneIndex(
                f"line {lineno}: index {index} after {last} must increase"
            )
        entries.append((index, stage))
        last = index
    return Hypnogram(entries=tuple(entries))


def format_csv_hypnogram(hypnogram: Hypnogram) -> str:
    """Inverse of parse_csv_hypnogram (Excluded serializes as '?')."""
    lines = [f"{index},{stage.token}" for index, stage in hypnogram.entries]
    return "\n".join(lines) + ("\n" if lines else "")
