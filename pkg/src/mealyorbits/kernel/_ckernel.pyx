# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend; mirrors pykernel exactly."""

import numpy as np

from libc.stdint cimport int64_t, uint8_t


def advance_action(int64_t[:, ::1] out, int64_t[:, ::1] nxt,
                   int64_t[:, ::1] img, int64_t[:, ::1] sec):
    cdef Py_ssize_t n_gen = img.shape[0]
    cdef Py_ssize_t n_words = img.shape[1]
    cdef Py_ssize_t k = out.shape[1]
    img2_arr = np.empty((n_gen, n_words * k), dtype=np.int64)
    sec2_arr = np.empty((n_gen, n_words * k), dtype=np.int64)
    cdef int64_t[:, ::1] img2 = img2_arr
    cdef int64_t[:, ::1] sec2 = sec2_arr
    cdef Py_ssize_t g, v, x
    cdef int64_t s, base
    for g in range(n_gen):
        for v in range(n_words):
            s = sec[g, v]
            base = img[g, v] * k
            for x in range(k):
                img2[g, v * k + x] = base + out[s, x]
                sec2[g, v * k + x] = nxt[s, x]
    return img2_arr, sec2_arr


cdef inline int64_t _find(int64_t[::1] parent, int64_t v) nogil:
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


def union_roots(int64_t[:, ::1] img, uint8_t[:, ::1] mask):
    cdef Py_ssize_t n_gen = img.shape[0]
    cdef Py_ssize_t n = img.shape[1]
    parent_arr = np.arange(n, dtype=np.int64)
    cdef int64_t[::1] parent = parent_arr
    cdef Py_ssize_t g, v
    cdef int64_t a, b, tmp
    for g in range(n_gen):
        for v in range(n):
            if mask[g, v]:
                a = _find(parent, v)
                b = _find(parent, img[g, v])
                if a != b:
                    if b < a:
                        tmp = a
                        a = b
                        b = tmp
                    parent[b] = a
    roots_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] roots = roots_arr
    for v in range(n):
        roots[v] = _find(parent, v)
    return roots_arr
