"""Steel Plates Faults loading, binary labelling, feature scaling and splits.

The raw file has 34 numeric columns per row: 27 plate measurements followed by
seven one-hot fault indicators. Six named fault classes are mapped to the
positive label (target 1.0) and ``Other_Faults`` to the negative label
(target 2.0).
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

N_FEATURES = 27
N_INDICATORS = 7
N_COLUMNS = N_FEATURES + N_INDICATORS
COUNTS_TEST_POSITIVES = 311
COUNTS_TEST_NEGATIVES = 77

FEATURE_NAMES = (
    "X_Minimum", "X_Maximum", "Y_Minimum", "Y_Maximum", "Pixels_Areas",
    "X_Perimeter", "Y_Perimeter", "Sum_of_Luminosity", "Minimum_of_Luminosity",
    "Maximum_of_Luminosity", "Length_of_Conveyer", "TypeOfSteel_A300",
    "TypeOfSteel_A400", "Steel_Plate_Thickness", "Edges_Index", "Empty_Index",
    "Square_Index", "Outside_X_Index", "Edges_X_Index", "Edges_Y_Index",
    "Outside_Global_Index", "LogOfAreas", "Log_X_Index", "Log_Y_Index",
    "Orientation_Index", "Luminosity_Index", "SigmoidOfAreas",
)


class FaultClass(enum.IntEnum):
    """Fault indicator columns, valued by their index in the indicator block."""

    PASTRY = 0
    Z_SCRATCH = 1
    K_SCRATCH = 2
    STAINS = 3
    DIRTINESS = 4
    BUMPS = 5
    OTHER_FAULTS = 6

    @property
    def column_name(self) -> str:
        return _INDICATOR_NAMES[self]


_INDICATOR_NAMES = ("Pastry", "Z_Scratch", "K_Scatch", "Stains", "Dirtiness", "Bumps", "Other_Faults")


class Label(enum.IntEnum):
    """Binary label; the integer value is the regression target."""

    POSITIVE = 1
    NEGATIVE = 2


class PreprocessMode(str, enum.Enum):
    MINMAX = "minmax"
    SIGN = "sign"


class FeatureSet(str, enum.Enum):
    BASE27 = "base27"
    WITH_INDICATORS33 = "with-indicators33"


class SplitMode(str, enum.Enum):
    RATIO_80_20 = "ratio"
    PAPER_COUNTS = "paper-counts"


class DatasetError(ValueError):
    """Base class for malformed input data."""


class MissingFileError(DatasetError, FileNotFoundError):
    pass


class RowArityError(DatasetError):
    def __init__(self, row: int, found: int, expected: int = N_COLUMNS):
        super().__init__(f"line {row}: found {found} fields, expected {expected}")
        self.row, self.found, self.expected = row, found, expected


class NonNumericFieldError(DatasetError):
    def __init__(self, row: int, col: int, text: str = ""):
        super().__init__(f"line {row}, column {col}: non-numeric field {text!r}")
        self.row, self.col = row, col


class BadIndicatorError(DatasetError):
    def __init__(self, row: int):
        super().__init__(f"line {row}: fault indicators must be one-hot")
        self.row = row


class EmptyInputError(DatasetError):
    pass


class InsufficientClassCountError(DatasetError):
    pass


@dataclass(frozen=True)
class RawRecord:
    features: tuple[float, ...]
    fault_indicators: tuple[int, ...]

    @property
    def fault(self) -> FaultClass:
        return FaultClass(self.fault_indicators.index(1))


@dataclass(frozen=True)
class BinarySample:
    features: np.ndarray
    label: Label


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Immutable column-major view of binary samples.

    ``features`` is ``(n, d)``, ``labels`` holds :class:`Label` integer
    values, ``faults`` holds the :class:`FaultClass` index of each row and
    ``rows`` the 0-based row index in the source file.
    """

    features: np.ndarray
    labels: np.ndarray
    faults: np.ndarray
    rows: np.ndarray
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        for arr in (self.features, self.labels, self.faults, self.rows):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, i: int) -> BinarySample:
        return BinarySample(self.features[i], Label(int(self.labels[i])))

    def __iter__(self) -> Iterator[BinarySample]:
        return (self[i] for i in range(len(self)))

    @property
    def targets(self) -> np.ndarray:
        """Regression targets, shape ``(n, 1)``."""
        return self.labels.astype(np.float64).reshape(-1, 1)

    @property
    def n_positive(self) -> int:
        return int(np.sum(self.labels == Label.POSITIVE))

    @property
    def n_negative(self) -> int:
        return int(np.sum(self.labels == Label.NEGATIVE))

    def take(self, idx: np.ndarray) -> "SampleSet":
        idx = np.asarray(idx, dtype=np.intp)
        return SampleSet(
            np.ascontiguousarray(self.features[idx]), self.labels[idx].copy(),
            self.faults[idx].copy(), self.rows[idx].copy(), self.feature_names,
        )


@dataclass(frozen=True, eq=False)
class DatasetSplit:
    train: SampleSet
    test: SampleSet
    seed: int
    mode: SplitMode
    train_index: np.ndarray = field(repr=False)
    test_index: np.ndarray = field(repr=False)

    def manifest(self) -> dict:
        return {
            "mode": self.mode.value,
            "seed": int(self.seed),
            "train": [int(i) for i in self.train_index],
            "test": [int(i) for i in self.test_index],
        }


def _detect_delimiter(line: str) -> str | None:
    if "\t" in line:
        return "\t"
    if "," in line:
        return ","
    return None  # any whitespace


def load_raw(path: str | os.PathLike, delimiter: str | None = None) -> list[RawRecord]:
    """Read a 34-column Steel Plates Faults text file.

    ``delimiter=None`` auto-detects tab, comma, or whitespace from the first
    non-empty line. Blank lines are skipped; line numbers in errors are
    1-based.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"data file not found: {path}")
    records = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if delimiter is None:
                delimiter = _detect_delimiter(line) or " "
            parts = line.split() if delimiter == " " else [p.strip() for p in line.split(delimiter)]
            if len(parts) != N_COLUMNS:
                raise RowArityError(lineno, len(parts))
            values = []
            for col, text in enumerate(parts, start=1):
                try:
                    v = float(text)
                except ValueError:
                    raise NonNumericFieldError(lineno, col, text) from None
                if not math.isfinite(v):
                    raise NonNumericFieldError(lineno, col, text)
                values.append(v)
            flags = values[N_FEATURES:]
            if any(f not in (0.0, 1.0) for f in flags) or sum(flags) != 1.0:
                raise BadIndicatorError(lineno)
            records.append(RawRecord(tuple(values[:N_FEATURES]), tuple(int(f) for f in flags)))
    return records


def binarize(records: Sequence[RawRecord]) -> SampleSet:
    """Label each record Positive (named fault) or Negative (Other_Faults)."""
    n = len(records)
    feats = np.array([r.features for r in records], dtype=np.float64).reshape(n, N_FEATURES)
    faults = np.array([r.fault for r in records], dtype=np.int64)
    labels = np.where(faults == FaultClass.OTHER_FAULTS, Label.NEGATIVE, Label.POSITIVE).astype(np.int64)
    return SampleSet(feats, labels, faults, np.arange(n, dtype=np.int64))


def _minmax(col: np.ndarray) -> np.ndarray:
    lo, hi = col.min(), col.max()
    if hi == lo:
        return np.zeros_like(col)
    return (col - lo) / (hi - lo)


def preprocess(samples: SampleSet, mode: PreprocessMode | str = PreprocessMode.MINMAX,
               feature_set: FeatureSet | str = FeatureSet.BASE27) -> SampleSet:
    """Scale features to [0, 1] using statistics of the whole sample set.

    ``SIGN`` mode turns every column that contains a negative value into a
    0/1 indicator of ``value > 0`` and min-max scales the rest.
    ``WITH_INDICATORS33`` appends the six named-fault indicator columns.
    """
    mode = PreprocessMode(mode)
    feature_set = FeatureSet(feature_set)
    if len(samples) == 0:
        raise EmptyInputError("cannot preprocess an empty sample set")
    X = samples.features
    out = np.empty_like(X)
    for j in range(X.shape[1]):
        col = X[:, j]
        if mode is PreprocessMode.SIGN and np.any(col < 0):
            out[:, j] = (col > 0).astype(np.float64)
        else:
            out[:, j] = _minmax(col)
    names = samples.feature_names
    if feature_set is FeatureSet.WITH_INDICATORS33:
        onehot = np.zeros((len(samples), FaultClass.OTHER_FAULTS), dtype=np.float64)
        named = samples.faults < FaultClass.OTHER_FAULTS
        onehot[np.flatnonzero(named), samples.faults[named]] = 1.0
        out = np.hstack([out, onehot])
        names = names + _INDICATOR_NAMES[:6]
    return SampleSet(np.ascontiguousarray(out), samples.labels.copy(), samples.faults.copy(),
                     samples.rows.copy(), names)


def train_size(n: int, fraction: float = 0.8) -> int:
    """Round-half-up of ``fraction * n``."""
    return int(math.floor(fraction * n + 0.5))


def split(samples: SampleSet, mode: SplitMode | str = SplitMode.RATIO_80_20, seed: int = 0) -> DatasetSplit:
    """Deterministic train/test partition; index arrays are sorted."""
    mode = SplitMode(mode)
    n = len(samples)
    if n < 2:
        raise EmptyInputError("need at least two samples to split")
    rng = np.random.default_rng(seed)
    if mode is SplitMode.RATIO_80_20:
        perm = rng.permutation(n)
        k = train_size(n)
        train_idx, test_idx = np.sort(perm[:k]), np.sort(perm[k:])
    else:
        pos = np.flatnonzero(samples.labels == Label.POSITIVE)
        neg = np.flatnonzero(samples.labels == Label.NEGATIVE)
        if len(pos) < COUNTS_TEST_POSITIVES or len(neg) < COUNTS_TEST_NEGATIVES:
            raise InsufficientClassCountError(
                f"need {COUNTS_TEST_POSITIVES} positive / {COUNTS_TEST_NEGATIVES} negative samples, "
                f"have {len(pos)} / {len(neg)}")
        test_idx = np.sort(np.concatenate([
            rng.choice(pos, COUNTS_TEST_POSITIVES, replace=False),
            rng.choice(neg, COUNTS_TEST_NEGATIVES, replace=False),
        ]))
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        train_idx = np.flatnonzero(mask)
    return DatasetSplit(samples.take(train_idx), samples.take(test_idx), int(seed), mode,
                        train_idx.astype(np.int64), test_idx.astype(np.int64))


def dumps_samples(samples: SampleSet) -> str:
    """Comma-separated dump with a one-line header (features..., label)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(samples.feature_names) + ["label"])
    for row, lab in zip(samples.features, samples.labels):
        w.writerow([repr(float(v)) for v in row] + [int(lab)])
    return buf.getvalue()


def write_manifest(ds: DatasetSplit, path: str | os.PathLike) -> None:
    Path(path).write_text(json.dumps(ds.manifest(), indent=1) + "\n", encoding="utf-8")


def read_manifest(path: str | os.PathLike) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def apply_manifest(samples: SampleSet, manifest: dict) -> DatasetSplit:
    train_idx = np.asarray(manifest["train"], dtype=np.int64)
    test_idx = np.asarray(manifest["test"], dtype=np.int64)
    return DatasetSplit(samples.take(train_idx), samples.take(test_idx), int(manifest["seed"]),
                        SplitMode(manifest["mode"]), train_idx, test_idx)
