"""Synthetic stand-in for the Steel Plates Faults file.

Same shape as the real data (34 columns, one-hot fault block) and the same
per-class row counts, so split-protocol numbers match; feature values are
random with a class-dependent signal and mean nothing physically.
"""
import numpy as np

CLASS_COUNTS = (158, 190, 391, 72, 55, 402, 673)  # Pastry .. Other_Faults


def make_rows(counts=CLASS_COUNTS, seed=0, signal=1.0):
    rng = np.random.default_rng(seed)
    faults = np.repeat(np.arange(7), counts)
    rng.shuffle(faults)
    n = len(faults)
    center = rng.normal(0.0, 1.0, (7, 27))
    z = rng.normal(0.0, 1.0, (n, 27)) + signal * center[faults]
    # mimic the real value scales: large counts, bounded indices, signed indices
    scale = np.ones(27)
    scale[:4] = 300.0
    scale[4:8] = [2000.0, 100.0, 100.0, 2e5]
    offset = np.zeros(27)
    offset[:8] = [800, 850, 1.6e6, 1.6e6, 3000, 150, 150, 3e5]
    X = offset + scale * z
    X[:, 11] = (z[:, 11] > 0).astype(float)     # steel type indicators
    X[:, 12] = 1.0 - X[:, 11]
    X[:, 24] = np.tanh(z[:, 24])                # orientation index in (-1, 1)
    X[:, 25] = np.tanh(z[:, 25])                # luminosity index
    ind = np.zeros((n, 7))
    ind[np.arange(n), faults] = 1.0
    return np.hstack([X, ind]), faults


def write_file(path, counts=CLASS_COUNTS, seed=0, delimiter="\t", signal=1.0):
    rows, _ = make_rows(counts, seed, signal)
    with open(path, "w") as fh:
        for r in rows:
            fh.write(delimiter.join(repr(float(v)) if i < 27 else str(int(v)) for i, v in enumerate(r)) + "\n")
    return path
