"""Numpy fallback for the compiled kernels in ``_core.pyx`` (same signatures)."""
import numpy as np


def _split(params, ni, hidden, outputs, cascade):
    p = np.asarray(params, dtype=np.float64)
    k = hidden * ni
    w_ih = p[:k].reshape(hidden, ni)
    b_h = p[k:k + hidden]
    k += hidden
    w_ho = p[k:k + hidden * outputs].reshape(outputs, hidden)
    k += hidden * outputs
    b_o = p[k:k + outputs]
    k += outputs
    w_io = p[k:k + outputs * ni].reshape(outputs, ni) if cascade else None
    return w_ih, b_h, w_ho, b_o, w_io


def _sigmoid(z):
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def forward(X, params, hidden, outputs, cascade):
    X = np.asarray(X, dtype=np.float64)
    w_ih, b_h, w_ho, b_o, w_io = _split(params, X.shape[1], hidden, outputs, cascade)
    out = _sigmoid(X @ w_ih.T + b_h) @ w_ho.T + b_o
    if cascade:
        out = out + X @ w_io.T
    return out


def population_mse(X, Y, P, hidden, outputs, cascade, num_threads=1):
    # num_threads accepted for signature parity; evaluation is sequential
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    res = np.empty(len(P), dtype=np.float64)
    for k, row in enumerate(P):
        err = Y - forward(X, row, hidden, outputs, cascade)
        res[k] = np.mean(err * err)
    return res
