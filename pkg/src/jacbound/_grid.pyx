# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice maximizer; same contract as ``_grid_py.grid_max``."""

from libc.stdlib cimport malloc, free

cdef double POLE_EPS = 1e-9


def grid_max(pair, coef, double scale, long total):
    cdef Py_ssize_t k = len(pair)
    cdef long *m = <long *> malloc(k * sizeof(long))
    cdef long *bm = <long *> malloc(k * sizeof(long))
    cdef long *pr = <long *> malloc(k * sizeof(long))
    cdef double *x = <double *> malloc(k * sizeof(double))
    cdef double *cf = <double *> malloc(k * sizeof(double))
    cdef Py_ssize_t i
    cdef long s = 0
    cdef long long n_points = 0, n_poles = 0
    cdef double best = -1.0, num, den, fac, v
    cdef bint pole
    if not m or not bm or not pr or not x or not cf:
        free(m); free(bm); free(pr); free(x); free(cf)
        raise MemoryError()
    try:
        for i in range(k):
            m[i] = 0
            bm[i] = 0
            x[i] = 0.0
            pr[i] = pair[i]
            cf[i] = coef[i]
        while True:
            n_points += 1
            num = 1.0
            den = 1.0
            pole = False
            for i in range(k):
                num *= x[i]
                fac = 1.0 - x[i] + cf[i] * x[pr[i]]
                if fac < POLE_EPS:
                    pole = True
                    break
                den *= fac * fac
            if pole:
                n_poles += 1
            else:
                v = num / den
                if v > best:
                    best = v
                    for i in range(k):
                        bm[i] = m[i]
            i = k - 1
            m[i] += 1
            x[i] = scale * m[i]
            s += 1
            while s > total:
                s -= m[i]
                m[i] = 0
                x[i] = 0.0
                i -= 1
                if i < 0:
                    return [bm[t] for t in range(k)], best, n_points, n_poles
                m[i] += 1
                x[i] = scale * m[i]
                s += 1
    finally:
        free(m); free(bm); free(pr); free(x); free(cf)
