"""Confusion matrix, reliability metrics and ROC analysis for binary labels."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .dataset import EmptyInputError, Label


class LengthMismatch(ValueError):
    pass


class SingleClass(ValueError):
    pass


def _as_labels(values) -> np.ndarray:
    out = []
    for v in values:
        v = getattr(v, "label", v)
        out.append(int(Label(int(v))))
    return np.asarray(out, dtype=np.int64)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion(predictions: Sequence, labels: Sequence) -> ConfusionMatrix:
    """Count outcomes; ``predictions`` may hold :class:`Prediction` objects
    or labels."""
    pred = _as_labels(predictions)
    true = _as_labels(labels)
    if len(pred) != len(true):
        raise LengthMismatch(f"{len(pred)} predictions vs {len(true)} labels")
    if len(pred) == 0:
        raise EmptyInputError("confusion matrix of no samples")
    P, N = Label.POSITIVE, Label.NEGATIVE
    return ConfusionMatrix(
        tp=int(np.sum((pred == P) & (true == P))),
        fp=int(np.sum((pred == P) & (true == N))),
        tn=int(np.sum((pred == N) & (true == N))),
        fn=int(np.sum((pred == N) & (true == P))),
    )


def _ratio(num: int, den: int) -> float | None:
    return None if den == 0 else num / den


@dataclass(frozen=True)
class MetricsReport:
    """Derived rates; ``None`` marks an undefined 0/0 ratio."""

    sensitivity: float | None
    specificity: float | None
    ppv: float | None
    npv: float | None
    accuracy: float
    mse: float

    def as_dict(self) -> dict:
        return asdict(self)


def derive_metrics(cm: ConfusionMatrix, mse: float) -> MetricsReport:
    if cm.total == 0:
        raise EmptyInputError("metrics of an empty confusion matrix")
    return MetricsReport(
        sensitivity=_ratio(cm.tp, cm.tp + cm.fn),
        specificity=_ratio(cm.tn, cm.tn + cm.fp),
        ppv=_ratio(cm.tp, cm.tp + cm.fp),
        npv=_ratio(cm.tn, cm.tn + cm.fn),
        accuracy=(cm.tp + cm.tn) / cm.total,
        mse=float(mse),
    )


@dataclass(frozen=True)
class RocCurve:
    fpr: tuple[float, ...]
    tpr: tuple[float, ...]
    auc: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr, self.tpr))

    def to_csv(self) -> str:
        return "fpr,tpr\n" + "".join(f"{f!r},{t!r}\n" for f, t in self.points)


def roc(scores_positive: Sequence[float], labels: Sequence) -> RocCurve:
    """ROC over every distinct score; samples with equal scores move together.

    A sample is called positive when its score is at or above the threshold.
    """
    s = np.asarray(scores_positive, dtype=np.float64)
    y = _as_labels(labels)
    if len(s) != len(y):
        raise LengthMismatch(f"{len(s)} scores vs {len(y)} labels")
    pos = y == Label.POSITIVE
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("ROC needs both positive and negative samples")
    order = np.argsort(-s, kind="stable")
    s, pos = s[order], pos[order]
    # last index of each run of equal scores, descending
    ends = np.flatnonzero(np.r_[s[1:] != s[:-1], True])
    tps = np.cumsum(pos)[ends]
    fps = (ends + 1) - tps
    tpr = np.r_[0.0, tps / n_pos]
    fpr = np.r_[0.0, fps / n_neg]
    auc = float(np.sum((fpr[1:] - fpr[:-1]) * (tpr[1:] + tpr[:-1]) / 2.0))
    return RocCurve(tuple(float(v) for v in fpr), tuple(float(v) for v in tpr), auc)


def roc_svg(curves: dict[str, RocCurve], size: int = 360, title: str = "ROC") -> str:
    """Standalone SVG line plot on the unit square with a chance diagonal."""
    pad = 40
    w = size - 2 * pad
    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

    def xy(f, t):
        return f"{pad + f * w:.2f},{pad + (1.0 - t) * w:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="{pad}" y="{pad}" width="{w}" height="{w}" fill="none" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad + w}" x2="{pad + w}" y2="{pad}" stroke="gray" stroke-dasharray="4 4"/>',
        f'<text x="{size / 2}" y="{pad / 2}" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{size / 2}" y="{size - 8}" text-anchor="middle" font-size="12">False positive rate</text>',
        f'<text x="12" y="{size / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 12 {size / 2})">True positive rate</text>',
    ]
    for k, v in enumerate((0.0, 0.5, 1.0)):
        parts.append(f'<text x="{pad + v * w:.1f}" y="{pad + w + 14}" text-anchor="middle" font-size="10">{v}</text>')
        parts.append(f'<text x="{pad - 6}" y="{pad + (1 - v) * w + 3:.1f}" text-anchor="end" font-size="10">{v}</text>')
    for k, (name, c) in enumerate(curves.items()):
        color = colors[k % len(colors)]
        pts = " ".join(xy(f, t) for f, t in c.points)
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{pad + w - 4}" y="{pad + w - 8 - 14 * k}" text-anchor="end" font-size="11" '
                     f'fill="{color}">{name} (AUC {c.auc:.3f})</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
