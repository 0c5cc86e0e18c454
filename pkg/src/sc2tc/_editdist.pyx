# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Levenshtein kernels; see ``_editdist_py`` for the reference twin."""
from cpython.mem cimport PyMem_Free, PyMem_Malloc


cdef Py_ssize_t _distance(str a, str b) except -1:
    cdef Py_ssize_t n = len(a), m = len(b), i, j, best, sub
    cdef Py_UCS4 ca
    cdef Py_ssize_t *prev
    cdef Py_ssize_t *cur
    cdef Py_ssize_t *tmp
    if n < m:
        a, b = b, a
        n, m = m, n
    if m == 0:
        return n
    prev = <Py_ssize_t *> PyMem_Malloc((m + 1) * sizeof(Py_ssize_t))
    cur = <Py_ssize_t *> PyMem_Malloc((m + 1) * sizeof(Py_ssize_t))
    if prev == NULL or cur == NULL:
        PyMem_Free(prev)
        PyMem_Free(cur)
        raise MemoryError()
    try:
        for j in range(m + 1):
            prev[j] = j
        for i in range(1, n + 1):
            ca = a[i - 1]
            cur[0] = i
            for j in range(1, m + 1):
                sub = prev[j - 1] + (0 if ca == b[j - 1] else 1)
                best = prev[j] + 1
                if cur[j - 1] + 1 < best:
                    best = cur[j - 1] + 1
                if sub < best:
                    best = sub
                cur[j] = best
            tmp = prev
            prev = cur
            cur = tmp
        return prev[m]
    finally:
        PyMem_Free(prev)
        PyMem_Free(cur)


def edit_distance(str a, str b):
    """Character Levenshtein distance with unit costs."""
    return _distance(a, b)


def total_edit_distance(list predictions, list references):
    cdef Py_ssize_t total = 0, i
    if len(predictions) != len(references):
        raise ValueError("length mismatch")
    for i in range(len(predictions)):
        total += _distance(predictions[i], references[i])
    return total
