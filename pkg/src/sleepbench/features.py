"""Per-epoch feature extraction: five frequency bands x 15 statistics.

Band separation is a brick-wall filter in the frequency domain: forward
real FFT, zero every bin outside the band's half-open [lo, hi) range,
inverse FFT. Features are computed on the band-filtered time signals and
concatenated band-major into a 75-value vector.
"""

from dataclasses import dataclass
from functools import partial

import numpy as np

from .errors import (
    BadStageToken,
    BandAboveNyquist,
    MalformedCsv,
    NonFiniteInput,
    TooShort,
)
from .ingest.epochs import LabeledEpoch
from .parallel import parallel_map
from .stages import SleepStage, TOKEN_TO_STAGE

#: Half-open band edges in Hz, ordered by lower edge.
BANDS: tuple[tuple[str, float, float], ...] = (
    ("delta", 0.5, 4.0),
    ("theta", 4.0, 8.0),
    ("alpha", 8.0, 12.0),
    ("sigma", 12.0, 16.0),
    ("beta", 16.0, 32.0),
)

#: The 15 per-band statistics in output order. Slot 13 repeats slot 9
#: (skewness appears twice by design, keeping the vector at 75 values).
BAND_FEATURES: tuple[str, ...] = (
    "mean",
    "harmonic_mean",
    "trimmed_mean",
    "energy",
    "entropy",
    "min",
    "median",
    "max",
    "std",
    "skewness",
    "q25",
    "q75",
    "iqr",
    "skewness2",
    "kurtosis",
)

FEATURE_NAMES: tuple[str, ...] = tuple(
    f"{band}_{feat}" for band, _, _ in BANDS for feat in BAND_FEATURES
)
N_FEATURES = len(FEATURE_NAMES)

MIN_FEATURE_SAMPLES = 4
MIN_SAMPLE_RATE_HZ = 64.0
ENTROPY_BINS = 100
_ABS_FLOOR = 1e-12     # harmonic-mean floor on |x|
_MOMENT_FLOOR = 1e-12  # m2 below this reports zero skewness/kurtosis


def band_decompose(samples, sample_rate_hz: float) -> list[np.ndarray]:
    """Split a signal into the five bands; outputs match the input length."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise TooShort(f"need at least 2 samples, got {x.size}")
    if sample_rate_hz < MIN_SAMPLE_RATE_HZ:
        raise BandAboveNyquist(
            f"sample rate {sample_rate_hz:g} Hz cannot represent the "
            f"{BANDS[-1][0]} band up to {BANDS[-1][2]:g} Hz"
        )
    spectrum = np.fft.rfft(x)
    freqs = np.fft.rfftfreq(x.size, d=1.0 / sample_rate_hz)
    out = []
    for _, lo, hi in BANDS:
        mask = (freqs >= lo) & (freqs < hi)
        out.append(np.fft.irfft(np.where(mask, spectrum, 0.0), n=x.size))
    return out


def feature_15(band_signal) -> np.ndarray:
    """The 15 statistics of one band signal, in BAND_FEATURES order.

    Conventions: harmonic mean over |x| floored at 1e-12; trimmed mean
    keeps values inside the Tukey fences [q25 - 1.5 IQR, q75 + 1.5 IQR];
    entropy is Shannon entropy (natural log) of a 100-bin histogram over
    [min, max]; std uses the n-1 divisor; skewness/kurtosis use central
    moments with the n divisor and report 0 when m2 < 1e-12; quantiles
    interpolate linearly at rank (n-1)*p.
    """
    x = np.asarray(band_signal, dtype=np.float64)
    if x.ndim != 1 or x.size < MIN_FEATURE_SAMPLES:
        raise TooShort(f"need at least {MIN_FEATURE_SAMPLES} samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("band signal contains NaN or infinity")

    n = x.size
    mean = float(np.mean(x))
    harmonic = n / float(np.sum(1.0 / np.maximum(np.abs(x), _ABS_FLOOR)))

    q25, median, q75 = (float(q) for q in np.quantile(x, (0.25, 0.5, 0.75)))
    iqr = q75 - q25
    inside = x[(x >= q25 - 1.5 * iqr) & (x <= q75 + 1.5 * iqr)]
    trimmed = float(np.mean(inside)) if inside.size else mean

    energy = float(np.dot(x, x))
    lo, hi = float(np.min(x)), float(np.max(x))
    entropy = _histogram_entropy(x, lo, hi)
    std = float(np.std(x, ddof=1))

    d = x - mean
    m2 = float(np.mean(d * d))
    if m2 < _MOMENT_FLOOR:
        skewness, kurtosis = 0.0, 0.0
    else:
        skewness = float(np.mean(d ** 3)) / m2 ** 1.5
        kurtosis = float(np.mean(d ** 4)) / (m2 * m2) - 3.0

    return np.array([
        mean, harmonic, trimmed, energy, entropy,
        lo, median, hi, std, skewness,
        q25, q75, iqr, skewness, kurtosis,
    ])


def _histogram_entropy(x: np.ndarray, lo: float, hi: float) -> float:
    if hi == lo:
        return 0.0
    counts, _ = np.histogram(x, bins=ENTROPY_BINS, range=(lo, hi))
    p = counts[counts > 0] / x.size
    return float(-np.sum(p * np.log(p)))


def featurize_samples(samples, sample_rate_hz: float) -> np.ndarray:
    """75-value feature vector for one epoch's samples, band-major."""
    bands = band_decompose(samples, sample_rate_hz)
    return np.concatenate([feature_15(band) for band in bands])


def featurize(epoch: LabeledEpoch, sample_rate_hz: float) -> np.ndarray:
    return featurize_samples(epoch.samples, sample_rate_hz)


@dataclass(eq=False)
class Dataset:
    """Feature matrix with stage labels (integer SleepStage codes)."""

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2:
            raise ValueError("X must be 2-D")
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError(
                f"{self.X.shape[0]} feature rows vs {self.y.shape[0]} labels"
            )
        if len(self.feature_names) != self.X.shape[1]:
            raise ValueError("feature_names must match the column count")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("feature matrix must be finite")

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def stages(self) -> list[SleepStage]:
        return [SleepStage(code) for code in self.y]


def build_dataset(
    epochs: list[LabeledEpoch],
    sample_rate_hz: float,
    workers: int = 1,
) -> Dataset:
    """Featurize epochs in order; output is identical for any worker count."""
    if not epochs:
        return Dataset(
            X=np.empty((0, N_FEATURES)),
            y=np.empty(0, dtype=np.int64),
            feature_names=FEATURE_NAMES,
        )
    worker_fn = partial(featurize_samples, sample_rate_hz=sample_rate_hz)
    rows = parallel_map(worker_fn, [e.samples for e in epochs], workers=workers)
    return Dataset(
        X=np.stack(rows),
        y=np.array([int(e.stage) for e in epochs], dtype=np.int64),
        feature_names=FEATURE_NAMES,
    )


def dataset_to_csv(dataset: Dataset) -> str:
    """Serialize as "label,f0,...": stage tokens plus shortest round-trip floats."""
    header = "label," + ",".join(f"f{i}" for i in range(dataset.n_features))
    lines = [header]
    for code, row in zip(dataset.y, dataset.X):
        token = SleepStage(int(code)).token
        lines.append(token + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def dataset_from_csv(text: str) -> Dataset:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise MalformedCsv("empty dataset file")
    header = lines[0].split(",")
    if header[0] != "label":
        raise MalformedCsv(f"first column must be 'label', got {header[0]!r}")
    names = tuple(header[1:])

    rows, labels = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(header):
            raise MalformedCsv(
                f"line {lineno}: expected {len(header)} columns, got {len(parts)}"
            )
        stage = TOKEN_TO_STAGE.get(parts[0])
        if stage is None or stage is SleepStage.EXCLUDED:
            raise BadStageToken(f"line {lineno}: bad label token {parts[0]!r}")
        labels.append(int(stage))
        try:
            rows.append([float(v) for v in parts[1:]])
        except ValueError:
            raise MalformedCsv(f"line {lineno}: non-numeric feature value") from None

    return Dataset(
        X=np.array(rows, dtype=np.float64).reshape(len(rows), len(names)),
        y=np.array(labels, dtype=np.int64),
        feature_names=names,
    )
