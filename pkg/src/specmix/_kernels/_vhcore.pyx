# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the Lloyd iteration.

Semantics must stay in lockstep with _vhcore_py: nearest center by strict
comparison (first index wins on ties), sequential accumulation in row order.
"""
from libc.math cimport fabs, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


def assign_points(const double[:, ::1] rows, const double[:, ::1] centers, bint l1):
    """Label each row with its nearest center and return the distances.

    Distances are Euclidean (l1=False) or L1 (l1=True). Ties go to the
    smallest center index.
    """
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t d = rows.shape[1]
    cdef Py_ssize_t k = centers.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] labels = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dists = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] labels_v = labels
    cdef double[::1] dists_v = dists
    cdef Py_ssize_t i, j, c
    cdef double best, acc, diff
    for i in range(n):
        best = -1.0
        for c in range(k):
            acc = 0.0
            if l1:
                for j in range(d):
                    acc += fabs(rows[i, j] - centers[c, j])
            else:
                for j in range(d):
                    diff = rows[i, j] - centers[c, j]
                    acc += diff * diff
            if best < 0.0 or acc < best:
                best = acc
                labels_v[i] = c
        dists_v[i] = best if l1 else sqrt(best)
    return labels, dists


def accumulate_clusters(const double[:, ::1] rows, const cnp.int64_t[::1] labels, Py_ssize_t k):
    """Per-cluster coordinate sums and member counts, accumulated in row order."""
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t d = rows.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] sums = np.zeros((k, d), dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(k, dtype=np.int64)
    cdef double[:, ::1] sums_v = sums
    cdef cnp.int64_t[::1] counts_v = counts
    cdef Py_ssize_t i, j, c
    for i in range(n):
        c = labels[i]
        counts_v[c] += 1
        for j in range(d):
            sums_v[c, j] += rows[i, j]
    return sums, counts
