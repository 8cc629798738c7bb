# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same API and semantics as ``_kernels_py``."""
from libc.math cimport sqrt, atan2, asin, fabs, copysign, M_PI

import numpy as np

BACKEND = "cython"


cdef inline void _edges(double c, double* a, double* b) noexcept nogil:
    cdef double rc = sqrt(c)
    a[0] = (1.0 - rc) * (1.0 - rc)
    b[0] = (1.0 + rc) * (1.0 + rc)


cdef inline double _atom(double c) noexcept nogil:
    return 1.0 - 1.0 / c if c > 1.0 else 0.0


cdef inline double _pdf(double c, double x, double a, double b) noexcept nogil:
    if x <= a or x >= b or x <= 0.0:
        return 0.0
    return sqrt((b - x) * (x - a)) / (2.0 * M_PI * c * x)


cdef inline double _cdf(double c, double x, double a, double b, double atom) noexcept nogil:
    cdef double s, t1, t2, d, num, f
    if x < 0.0:
        return 0.0
    if x >= b:
        return 1.0
    if x <= a:
        return atom
    s = sqrt((b - x) * (x - a))
    t1 = atan2(b + a - 2.0 * x, 2.0 * s)
    t2 = 0.0
    if c != 1.0:
        d = 1.0 - c
        num = 2.0 * a * b - (a + b) * x
        t2 = d * atan2(copysign(1.0, d) * num, 2.0 * fabs(d) * s)
    f = (M_PI * c + s - (1.0 + c) * t1 + t2) / (2.0 * M_PI * c)
    if c > 1.0:
        return 0.5 * (c - 1.0) / c + f
    return f


cdef inline double _tail(double c, double x, double a, double b) noexcept nogil:
    cdef double u, s, v
    if x <= a:
        return 0.0
    if x >= b:
        return 1.0
    u = x - (1.0 + c)
    s = sqrt((b - x) * (x - a))
    v = u / (2.0 * sqrt(c))
    if v > 1.0:
        v = 1.0
    elif v < -1.0:
        v = -1.0
    return (0.5 * u * s + 2.0 * c * asin(v) + M_PI * c) / (2.0 * M_PI * c)


def pdf_unit(double c, x):
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef double a, b
    _edges(c, &a, &b)
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _pdf(c, xs[i], a, b)
    return out.reshape(np.shape(x))


def cdf_unit(double c, x):
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef double a, b, atom = _atom(c)
    _edges(c, &a, &b)
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _cdf(c, xs[i], a, b, atom)
    return out.reshape(np.shape(x))


def tail_mass_unit(double c, x):
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef double a, b
    _edges(c, &a, &b)
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _tail(c, xs[i], a, b)
    return out.reshape(np.shape(x))


def cdf_inverse_unit(double c, double u, double xtol, int maxiter):
    cdef double a, b, mid, atom = _atom(c)
    cdef int it
    _edges(c, &a, &b)
    cdef double lo = a, hi = b
    with nogil:
        for it in range(maxiter):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _cdf(c, mid, a, b, atom) >= u:
                hi = mid
            else:
                lo = mid
            if hi - lo <= xtol * (1.0 if hi > 1.0 else hi):
                break
    return hi


def tail_mass_inverse_unit(double c, double u, double xtol, int maxiter):
    cdef double a, b, mid
    cdef int it
    _edges(c, &a, &b)
    cdef double lo = a, hi = b
    with nogil:
        for it in range(maxiter):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _tail(c, mid, a, b) >= u:
                hi = mid
            else:
                lo = mid
            if hi - lo <= xtol * (1.0 if hi > 1.0 else hi):
                break
    return hi


def cpv_count(lam_in, double t, double tau):
    cdef const double[::1] lam = np.ascontiguousarray(lam_in, dtype=np.float64)
    cdef Py_ssize_t p = lam.shape[0], q
    cdef double total = 0.0, cum = 0.0, tie
    cdef Py_ssize_t best = 0
    for q in range(p):
        total += lam[q]
    tie = tau * lam[0]
    for q in range(1, p):
        cum += lam[q - 1]
        if cum / total > t:
            break
        if lam[q - 1] - lam[q] > tie:
            best = q
    return best


cdef inline double _step_at(const double[::1] xs, const double[::1] ys, double x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = xs.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if xs[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return 0.0 if lo == 0 else ys[lo - 1]


cdef bint _feasible(const double[::1] xf, const double[::1] yf, const double[::1] xg,
                    const double[::1] yg,
                    double eps) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(xf.shape[0]):
        if _step_at(xg, yg, xf[k] + eps) < yf[k] - eps:
            return False
        if _step_at(xg, yg, xf[k] - eps) > yf[k] + eps:
            return False
    for k in range(xg.shape[0]):
        if yg[k] < _step_at(xf, yf, xg[k] - eps) - eps:
            return False
        if yg[k] > _step_at(xf, yf, xg[k] + eps) + eps:
            return False
    return True


def levy_feasible(xf, yf, xg, yg, double eps):
    cdef const double[::1] a = np.ascontiguousarray(xf, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(yf, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(xg, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(yg, dtype=np.float64)
    return bool(_feasible(a, b, c, d, eps))


def levy_steps(xf, yf, xg, yg, double hi, double tol):
    cdef const double[::1] a = np.ascontiguousarray(xf, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(yf, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(xg, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(yg, dtype=np.float64)
    cdef double lo = 0.0, mid
    with nogil:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _feasible(a, b, c, d, mid):
                hi = mid
            else:
                lo = mid
    return hi
