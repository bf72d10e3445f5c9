"""Exception types shared across the package.

Collected here so the CLI can map any data-shaped failure onto a single
exit code.
"""


class SleepBenchError(Exception):
    """Base class for all errors raised by this package."""


# EDF and annotation parsing

class MalformedHeader(SleepBenchError):
    """A fixed-width EDF header field is invalid or inconsistent."""


class Truncated(SleepBenchError):
    """File is shorter than its header declares."""


class DegenerateCalibration(SleepBenchError):
    """Digital min equals digital max; physical scaling is undefined."""


class MalformedTAL(SleepBenchError):
    """A time-stamped annotation list violates the TAL byte grammar."""


class MalformedCsv(SleepBenchError):
    """A CSV line does not match the expected column layout."""


class BadStageToken(SleepBenchError):
    """Stage token outside {W,1,2,3,4,R,?,M}."""


class NonMonotoneIndex(SleepBenchError):
    """Hypnogram epoch indices must be strictly increasing."""


class NonAlignedOnsetWarning(UserWarning):
    """Annotation onset is not on a 30-second boundary; index rounded down."""


# Synthesis and epoching

class EmptyStageSequence(SleepBenchError):
    """Cannot synthesize a recording from zero epochs."""


class IndexOutOfRange(SleepBenchError):
    """Hypnogram entry references samples beyond the recording."""


# Feature extraction

class TooShort(SleepBenchError):
    """Input signal has too few samples."""


class BandAboveNyquist(SleepBenchError):
    """Sampling rate cannot represent the highest analysis band."""


class NonFiniteInput(SleepBenchError):
    """Input contains NaN or infinity."""


# Dimensionality reduction

class BadK(SleepBenchError):
    """Requested component count is out of range for the data."""


class DimensionMismatch(SleepBenchError):
    """Matrix column count does not match the fitted dimension."""


# Classification

class EmptyDataset(SleepBenchError):
    """Fit requires at least one row."""


class SingleClass(SleepBenchError):
    """Fit requires at least two distinct classes."""


# Evaluation

class DegenerateSplit(SleepBenchError):
    """Requested split would leave one side empty."""


class LengthMismatch(SleepBenchError):
    """Label sequences differ in length."""


class EmptyInput(SleepBenchError):
    """Metric requires at least one evaluated example."""


class BadClass(SleepBenchError):
    """Class label not present in the confusion matrix."""


# Benchmark orchestration

class DataLoadError(SleepBenchError):
    """A configured data source could not be resolved."""


class EmptyReport(SleepBenchError):
    """Report contains no rows."""
