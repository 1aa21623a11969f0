# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled inner kernels for the fuzzy c-means iteration loop."""
import numpy as np

cimport numpy as cnp
from libc.math cimport pow, sqrt

cnp.import_array()


def pairwise_distances(double[:, ::1] data, double[:, ::1] centers):
    """Euclidean distances, shape (c, n)."""
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t k = data.shape[1]
    cdef Py_ssize_t c = centers.shape[0]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((c, n))
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, j, p
    cdef double acc, diff
    for i in range(c):
        for j in range(n):
            acc = 0.0
            for p in range(k):
                diff = data[j, p] - centers[i, p]
                acc += diff * diff
            ov[i, j] = sqrt(acc)
    return out


def memberships_from_distances(double[:, ::1] dist, double m):
    """Fuzzy membership update from a (c, n) distance matrix.

    Columns sum to 1; a zero distance makes the column crisp at the
    lowest-index zero cluster.
    """
    cdef Py_ssize_t c = dist.shape[0]
    cdef Py_ssize_t n = dist.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((c, n))
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, j
    cdef double expo = -2.0 / (m - 1.0)
    cdef double total, w
    cdef Py_ssize_t zero_at
    for j in range(n):
        zero_at = -1
        for i in range(c):
            if dist[i, j] == 0.0:
                zero_at = i
                break
        if zero_at >= 0:
            for i in range(c):
                ov[i, j] = 1.0 if i == zero_at else 0.0
            continue
        total = 0.0
        for i in range(c):
            w = pow(dist[i, j], expo)
            ov[i, j] = w
            total += w
        for i in range(c):
            ov[i, j] /= total
    return out


def weighted_centers(double[:, ::1] weights, double[:, ::1] data):
    """Centers v_i = sum_k w_ik x_k / sum_k w_ik for a (c, n) weight matrix."""
    cdef Py_ssize_t c = weights.shape[0]
    cdef Py_ssize_t n = weights.shape[1]
    cdef Py_ssize_t k = data.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.zeros((c, k))
    cdef double[:, ::1] ov = out
    cdef cnp.ndarray[double, ndim=1] mass = np.zeros(c)
    cdef double[::1] mv = mass
    cdef Py_ssize_t i, j, p
    cdef double w
    for i in range(c):
        for j in range(n):
            w = weights[i, j]
            mv[i] += w
            for p in range(k):
                ov[i, p] += w * data[j, p]
    for i in range(c):
        if mv[i] > 0.0:
            for p in range(k):
                ov[i, p] /= mv[i]
    return out, mass
