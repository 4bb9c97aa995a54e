# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled MLP forward / MSE kernels (see ``_mlp_kernel.h`` for the layout).

Same signatures as the numpy fallback in ``_pure``. Each genome's error sum is
accumulated sequentially, so ``population_mse`` does not depend on
``num_threads``.
"""
import numpy as np
from cython.parallel cimport prange


cdef extern from "_mlp_kernel.h" nogil:
    double pf_mlp_run(const double* X, const double* y, Py_ssize_t n,
                      Py_ssize_t ni, const double* p, Py_ssize_t nh,
                      Py_ssize_t no, int cascade, double* out)
    void pf_logistic(double* z, Py_ssize_t n)


def _check(X, hidden, outputs, cascade, dim):
    ni = X.shape[1]
    need = hidden * ni + hidden + hidden * outputs + outputs + (outputs * ni if cascade else 0)
    if dim != need:
        raise ValueError(f"genome length {dim} does not match topology ({need})")


def population_mse(const double[:, ::1] X, const double[:, ::1] Y,
                   const double[:, ::1] P, Py_ssize_t hidden,
                   Py_ssize_t outputs, bint cascade, int num_threads=1):
    """Mean squared error of every genome row of ``P`` on ``(X, Y)``."""
    cdef Py_ssize_t m = P.shape[0]
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t ni = X.shape[1]
    cdef Py_ssize_t k
    cdef int flag = 1 if cascade else 0
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    if m == 0:
        return out
    _check(X, hidden, outputs, cascade, P.shape[1])
    if Y.shape[0] != n or Y.shape[1] != outputs:
        raise ValueError("target shape does not match samples/outputs")
    if n == 0:
        raise ValueError("no samples")
    if num_threads < 1:
        num_threads = 1
    with nogil:
        for k in prange(m, num_threads=num_threads, schedule="static"):
            res[k] = pf_mlp_run(&X[0, 0], &Y[0, 0], n, ni, &P[k, 0],
                                hidden, outputs, flag, NULL)
    if np.any(out < 0.0):
        raise MemoryError("kernel workspace allocation failed")
    return out


def forward(const double[:, ::1] X, const double[::1] params,
            Py_ssize_t hidden, Py_ssize_t outputs, bint cascade):
    """Raw linear outputs, shape ``(n, outputs)``."""
    cdef Py_ssize_t n = X.shape[0]
    _check(X, hidden, outputs, cascade, params.shape[0])
    result = np.empty((n, outputs), dtype=np.float64)
    if n == 0:
        return result
    cdef double[:, ::1] R = result
    cdef double status
    with nogil:
        status = pf_mlp_run(&X[0, 0], NULL, n, X.shape[1], &params[0],
                            hidden, outputs, 1 if cascade else 0, &R[0, 0])
    if status < 0.0:
        raise MemoryError("kernel workspace allocation failed")
    return result


def logistic(double[::1] z):
    """In-place logistic function (exposed for accuracy tests)."""
    if z.shape[0]:
        pf_logistic(&z[0], z.shape[0])
