# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled point-counting kernel; same contract as the numpy version."""
from libc.stdint cimport int8_t, int64_t, uint8_t

import numpy as np


cdef inline int64_t _mod(int64_t a, int64_t p) noexcept nogil:
    cdef int64_t r = a % p
    if r < 0:
        r += p
    return r


cdef inline int _degree(const int64_t* a, int top) noexcept nogil:
    cdef int d = top
    while d >= 0 and a[d] == 0:
        d -= 1
    return d


cdef int64_t _inverse(int64_t a, int64_t p) noexcept nogil:
    cdef int64_t r = 1, b = _mod(a, p), e = p - 2
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


cdef bint _squarefree(const int64_t* c, int64_t p) noexcept nogil:
    cdef int64_t a[7]
    cdef int64_t b[7]
    cdef int64_t tmp[7]
    cdef int i, da, db, dt, shift
    cdef int64_t inv, q
    for i in range(7):
        a[i] = _mod(c[i], p)
        b[i] = 0
    da = _degree(a, 6)
    if da < 0:
        return False
    if da == 0:
        return True
    for i in range(1, da + 1):
        b[i - 1] = (i * a[i]) % p
    db = _degree(b, 6)
    if db < 0:
        return False
    while db >= 0:
        inv = _inverse(b[db], p)
        while da >= db:
            q = a[da] * inv % p
            shift = da - db
            for i in range(db + 1):
                a[i + shift] = _mod(a[i + shift] - q * b[i], p)
            da = _degree(a, da - 1)
        for i in range(7):
            tmp[i] = a[i]
            a[i] = b[i]
            b[i] = tmp[i]
        dt = da
        da = db
        db = dt
    return da == 0


def is_squarefree(coeffs, long long p):
    cdef int64_t c[7]
    cdef int i
    for i in range(7):
        c[i] = int(coeffs[i]) if i < len(coeffs) else 0
    return bool(_squarefree(c, p))


cdef void _count_rows(const int64_t[:, ::1] coeffs, int64_t p, int64_t nonres,
                      const int8_t[::1] chi, const int64_t[:, ::1] pow1,
                      const int64_t[:, ::1] pow_u, const int64_t[:, ::1] pow_v,
                      uint8_t[::1] sqfree, int64_t[::1] n1, int64_t[::1] n2) noexcept nogil:
    cdef Py_ssize_t r, x, i, nrows = coeffs.shape[0]
    cdef Py_ssize_t pp = p * p
    cdef int k, deg
    cdef int64_t acc, a, b, norm, s1, s2, inf1, inf2
    cdef int64_t c[7]
    for r in range(nrows):
        for k in range(7):
            c[k] = _mod(coeffs[r, k], p)
        if not _squarefree(&c[0], p):
            sqfree[r] = 0
            n1[r] = -1
            n2[r] = -1
            continue
        sqfree[r] = 1
        deg = _degree(&c[0], 6)
        if deg % 2 == 1:
            inf1 = 1
            inf2 = 1
        else:
            inf1 = 1 + chi[c[deg]]
            inf2 = 2
        s1 = 0
        for x in range(p):
            acc = 0
            for k in range(deg + 1):
                acc += c[k] * pow1[k, x]
            s1 += chi[acc % p]
        s2 = 0
        for i in range(pp):
            a = 0
            b = 0
            for k in range(deg + 1):
                a += c[k] * pow_u[k, i]
                b += c[k] * pow_v[k, i]
            a = a % p
            b = b % p
            norm = _mod(a * a - nonres * (b * b % p), p)
            s2 += chi[norm]
        n1[r] = p + s1 + inf1
        n2[r] = pp + s2 + inf2


def count_models(coeffs, tables):
    """Squarefree flag and point counts over F_p, F_{p^2} for each row."""
    cdef const int64_t[:, ::1] cv = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef Py_ssize_t n = cv.shape[0]
    sqfree = np.zeros(n, dtype=np.uint8)
    n1 = np.empty(n, dtype=np.int64)
    n2 = np.empty(n, dtype=np.int64)
    cdef uint8_t[::1] sv = sqfree
    cdef int64_t[::1] n1v = n1
    cdef int64_t[::1] n2v = n2
    cdef const int8_t[::1] chi = tables.chi
    cdef const int64_t[:, ::1] pow1 = tables.pow1
    cdef const int64_t[:, ::1] pow_u = tables.pow_u
    cdef const int64_t[:, ::1] pow_v = tables.pow_v
    cdef int64_t p = tables.p
    cdef int64_t nonres = tables.nonres
    with nogil:
        _count_rows(cv, p, nonres, chi, pow1, pow_u, pow_v, sv, n1v, n2v)
    return sqfree.astype(bool), n1, n2
