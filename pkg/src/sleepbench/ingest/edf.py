"""Reading and writing plain EDF files.

Layout: a 256-byte fixed-width ASCII header, then 256 more header bytes
per signal (field-major), then data records of 16-bit little-endian
two's-complement samples. Physical values are recovered as

    physical = (digital - dig_min) * (phys_max - phys_min)
                                   / (dig_max - dig_min) + phys_min

The writer exists to produce test fixtures and demo files; it quantizes
each signal into the full 16-bit range over a slightly widened copy of
its physical range, so a write/parse round trip preserves digital
samples exactly and physical samples to within half a quantization step.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateCalibration, MalformedHeader, Truncated

HEADER_BYTES = 256
SIGNAL_HEADER_BYTES = 256
_VERSION_FIELD = b"0       "
_DIG_MIN = -32768
_DIG_MAX = 32767


@dataclass(frozen=True, eq=False)
class Recording:
    """One channel of physical-unit (microvolt) samples."""

    subject_id: str
    channel_label: str
    sample_rate_hz: float
    samples: np.ndarray
    start_time: float = 0.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if self.start_time < 0:
            raise ValueError("start_time must be >= 0")
        object.__setattr__(self, "samples", samples)

    @property
    def duration_seconds(self) -> float:
        return self.samples.size / self.sample_rate_hz


@dataclass(frozen=True)
class _Layout:
    """Parsed header: everything needed to locate and scale samples."""

    patient: str
    n_records: int
    record_seconds: float
    labels: tuple[str, ...]
    phys_min: tuple[float, ...]
    phys_max: tuple[float, ...]
    dig_min: tuple[int, ...]
    dig_max: tuple[int, ...]
    samples_per_record: tuple[int, ...]
    data_offset: int


def _text(data: bytes, start: int, width: int) -> str:
    return data[start:start + width].decode("ascii", errors="replace").strip()


def _int_field(data: bytes, start: int, width: int, name: str) -> int:
    raw = _text(data, start, width)
    try:
        return int(raw)
    except ValueError:
        raise MalformedHeader(f"non-numeric {name} field: {raw!r}") from None


def _float_field(data: bytes, start: int, width: int, name: str) -> float:
    raw = _text(data, start, width)
    try:
        return float(raw)
    except ValueError:
        raise MalformedHeader(f"non-numeric {name} field: {raw!r}") from None


def _parse_layout(data: bytes) -> _Layout:
    if len(data) < HEADER_BYTES:
        raise Truncated(f"need at least {HEADER_BYTES} header bytes, got {len(data)}")
    if data[0:8] != _VERSION_FIELD:
        raise MalformedHeader(f"unsupported version field: {data[0:8]!r}")

    patient = _text(data, 8, 80)
    header_bytes = _int_field(data, 184, 8, "header size")
    n_records = _int_field(data, 236, 8, "record count")
    record_seconds = _float_field(data, 244, 8, "record duration")
    n_signals = _int_field(data, 252, 4, "signal count")

    if n_signals <= 0:
        raise MalformedHeader(f"signal count must be positive, got {n_signals}")
    if n_records < 0:
        raise MalformedHeader(f"record count must be >= 0, got {n_records}")
    if record_seconds <= 0:
        raise MalformedHeader(f"record duration must be positive, got {record_seconds}")

    expected_header = HEADER_BYTES + n_signals * SIGNAL_HEADER_BYTES
    if header_bytes != expected_header:
        raise MalformedHeader(
            f"declared header size {header_bytes} != {expected_header} "
            f"for {n_signals} signals"
        )
    if len(data) < expected_header:
        raise Truncated(f"header needs {expected_header} bytes, got {len(data)}")

    # Signal headers are field-major: all labels, then all transducers, ...
    cursor = HEADER_BYTES

    def block(width: int) -> list[bytes]:
        nonlocal cursor
        fields = [data[cursor + i * width:cursor + (i + 1) * width]
                  for i in range(n_signals)]
        cursor += n_signals * width
        return fields

    labels = tuple(f.decode("ascii", errors="replace").strip() for f in block(16))
    block(80)  # transducer type
    block(8)   # physical dimension
    raw_pmin, raw_pmax = block(8), block(8)
    raw_dmin, raw_dmax = block(8), block(8)
    block(80)  # prefiltering
    raw_spr = block(8)

    def floats(raw: list[bytes], name: str) -> tuple[float, ...]:
        return tuple(_float_field(f, 0, 8, name) for f in raw)

    def ints(raw: list[bytes], name: str) -> tuple[int, ...]:
        return tuple(_int_field(f, 0, 8, name) for f in raw)

    phys_min = floats(raw_pmin, "physical min")
    phys_max = floats(raw_pmax, "physical max")
    dig_min = ints(raw_dmin, "digital min")
    dig_max = ints(raw_dmax, "digital max")
    samples_per_record = ints(raw_spr, "samples per record")
    if any(s <= 0 for s in samples_per_record):
        raise MalformedHeader("samples per record must be positive")

    record_size = 2 * sum(samples_per_record)
    expected_total = expected_header + n_records * record_size
    if len(data) < expected_total:
        raise Truncated(
            f"header declares {expected_total} bytes, file has {len(data)}"
        )
    if len(data) > expected_total:
        raise MalformedHeader(
            f"record count mismatch: {len(data) - expected_total} trailing "
            f"bytes beyond the {n_records} declared records"
        )

    return _Layout(
        patient=patient,
        n_records=n_records,
        record_seconds=record_seconds,
        labels=labels,
        phys_min=phys_min,
        phys_max=phys_max,
        dig_min=dig_min,
        dig_max=dig_max,
        samples_per_record=samples_per_record,
        data_offset=expected_header,
    )


def _read_digital(data: bytes, layout: _Layout) -> list[np.ndarray]:
    per_record = sum(layout.samples_per_record)
    raw = np.frombuffer(
        data,
        dtype="<i2",
        offset=layout.data_offset,
        count=layout.n_records * per_record,
    ).reshape(layout.n_records, per_record)

    out = []
    col = 0
    for width in layout.samples_per_record:
        out.append(raw[:, col:col + width].reshape(-1).copy())
        col += width
    return out


def parse_edf(data: bytes) -> list[Recording]:
    """Parse EDF bytes into one Recording per signal."""
    layout = _parse_layout(data)
    digital = _read_digital(data, layout)

    recordings = []
    for i, dig in enumerate(digital):
        if layout.dig_max[i] == layout.dig_min[i]:
            raise DegenerateCalibration(
                f"signal {i} ({layout.labels[i]!r}): digital min == max"
            )
        scale = (layout.phys_max[i] - layout.phys_min[i]) / (
            layout.dig_max[i] - layout.dig_min[i]
        )
        physical = (dig.astype(np.float64) - layout.dig_min[i]) * scale + layout.phys_min[i]
        recordings.append(
            Recording(
                subject_id=layout.patient or "unknown",
                channel_label=layout.labels[i],
                sample_rate_hz=layout.samples_per_record[i] / layout.record_seconds,
                samples=physical,
            )
        )
    return recordings


def parse_edf_digital(data: bytes) -> list[np.ndarray]:
    """Parse EDF bytes into the raw int16 sample array per signal."""
    layout = _parse_layout(data)
    return _read_digital(data, layout)


def pick_channel(recordings: list[Recording], channel: str | None = None) -> Recording:
    """Select one channel: exact label, case-insensitive substring, or the
    first EEG channel (falling back to the first signal)."""
    if channel is not None:
        for rec in recordings:
            if rec.channel_label == channel:
                return rec
        lowered = channel.lower()
        for rec in recordings:
            if lowered in rec.channel_label.lower():
                return rec
        raise LookupError(
            f"channel {channel!r} not found in "
            f"{[r.channel_label for r in recordings]}"
        )
    for rec in recordings:
        if rec.channel_label.lower().startswith("eeg"):
            return rec
    return recordings[0]


def _fixed(value: str, width: int) -> bytes:
    raw = value.encode("ascii", errors="replace")[:width]
    return raw.ljust(width)


def _physical_bounds(samples: np.ndarray) -> tuple[float, float]:
    # Widen by one hundredth so the written 2-decimal fields strictly
    # bracket the data; also handles constant signals.
    lo = (math.floor(float(samples.min()) * 100.0) - 1) / 100.0
    hi = (math.ceil(float(samples.max()) * 100.0) + 1) / 100.0
    lo_text, hi_text = f"{lo:.2f}", f"{hi:.2f}"
    if len(lo_text) > 8 or len(hi_text) > 8:
        raise ValueError(f"physical range [{lo}, {hi}] does not fit an 8-char field")
    return float(lo_text), float(hi_text)


def quantize(samples: np.ndarray, phys_min: float, phys_max: float) -> np.ndarray:
    """Map physical samples onto the full signed 16-bit range."""
    span = phys_max - phys_min
    scaled = (np.asarray(samples, dtype=np.float64) - phys_min) / span
    dig = np.rint(scaled * (_DIG_MAX - _DIG_MIN)) + _DIG_MIN
    return np.clip(dig, _DIG_MIN, _DIG_MAX).astype(np.int16)


def write_edf(recordings: list[Recording], record_seconds: float = 30.0) -> bytes:
    """Serialize recordings as one EDF file (one signal each).

    Every recording must span the same whole number of data records;
    the default record length matches the 30-second epoch convention.
    """
    if not recordings:
        raise ValueError("need at least one recording")

    spr = [round(record_seconds * r.sample_rate_hz) for r in recordings]
    if any(s <= 0 for s in spr):
        raise ValueError("record_seconds too short for the sampling rate")
    n_records = None
    for rec, s in zip(recordings, spr):
        if rec.samples.size % s != 0:
            raise ValueError(
                f"{rec.channel_label!r}: {rec.samples.size} samples is not a "
                f"whole number of {record_seconds}-second records"
            )
        count = rec.samples.size // s
        if n_records is None:
            n_records = count
        elif count != n_records:
            raise ValueError("recordings span different numbers of records")

    bounds = [_physical_bounds(r.samples) for r in recordings]
    digital = [
        quantize(r.samples, lo, hi) for r, (lo, hi) in zip(recordings, bounds)
    ]

    n_signals = len(recordings)
    header = b"".join([
        _VERSION_FIELD,
        _fixed(recordings[0].subject_id, 80),
        _fixed("", 80),
        _fixed("01.01.00", 8),
        _fixed("00.00.00", 8),
        _fixed(str(HEADER_BYTES + n_signals * SIGNAL_HEADER_BYTES), 8),
        _fixed("", 44),
        _fixed(str(n_records), 8),
        _fixed(f"{record_seconds:g}", 8),
        _fixed(str(n_signals), 4),
    ])

    def column(width: int, values: list[str]) -> bytes:
        return b"".join(_fixed(v, width) for v in values)

    signal_header = b"".join([
        column(16, [r.channel_label for r in recordings]),
        column(80, ["" for _ in recordings]),
        column(8, ["uV" for _ in recordings]),
        column(8, [f"{lo:.2f}" for lo, _ in bounds]),
        column(8, [f"{hi:.2f}" for _, hi in bounds]),
        column(8, [str(_DIG_MIN) for _ in recordings]),
        column(8, [str(_DIG_MAX) for _ in recordings]),
        column(80, ["" for _ in recordings]),
        column(8, [str(s) for s in spr]),
        column(32, ["" for _ in recordings]),
    ])

    chunks = [header, signal_header]
    for rec_idx in range(n_records):
        for sig_idx in range(n_signals):
            width = spr[sig_idx]
            chunk = digital[sig_idx][rec_idx * width:(rec_idx + 1) * width]
            chunks.append(chunk.astype("<i2").tobytes())
    return b"".join(chunks)
