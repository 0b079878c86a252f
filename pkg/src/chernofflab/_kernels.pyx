# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Poisson window kernels; mirrors ``_kernels_py``."""

from libc.math cimport exp, log, sqrt, fabs, ceil, M_PI

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

cdef double _LOG_SQRT_2PI = 0.5 * log(2.0 * M_PI)

cdef double[16] _STIRLERR
_STIRLERR[:] = [
    0.0,
    0.08106146679532726,
    0.0413406959554093,
    0.02767792568499834,
    0.020790672103765093,
    0.016644691189821193,
    0.013876128823070748,
    0.01189670994589177,
    0.010411265261972096,
    0.009255462182712733,
    0.00833056343336287,
    0.007573675487951841,
    0.00694284010720953,
    0.006408994188004207,
    0.0059513701127588475,
    0.005554733551962801,
]

cdef double _S0 = 1.0 / 12.0
cdef double _S1 = 1.0 / 360.0
cdef double _S2 = 1.0 / 1260.0
cdef double _S3 = 1.0 / 1680.0
cdef double _S4 = 1.0 / 1188.0


cdef inline double _stirlerr(long m) nogil:
    cdef double nn
    if m <= 15:
        return _STIRLERR[m]
    nn = (<double>m) * m
    if m > 500:
        return (_S0 - _S1 / nn) / m
    if m > 80:
        return (_S0 - (_S1 - _S2 / nn) / nn) / m
    if m > 35:
        return (_S0 - (_S1 - (_S2 - _S3 / nn) / nn) / nn) / m
    return (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / m


cdef inline double _bd0(double x, double mu) nogil:
    cdef double v, s, ej, s1
    cdef long j
    if fabs(x - mu) < 0.1 * (x + mu):
        v = (x - mu) / (x + mu)
        s = (x - mu) * v
        ej = 2.0 * x * v
        v = v * v
        j = 1
        while True:
            ej *= v
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
    return x * log(x / mu) + mu - x


cdef inline double _logpmf(long m, double mu) nogil:
    if m == 0:
        return -mu
    return -_stirlerr(m) - _bd0(<double>m, mu) - _LOG_SQRT_2PI - 0.5 * log(<double>m)


def stirlerr(long m):
    return _stirlerr(m)


def bd0(double x, double mu):
    return _bd0(x, mu)


def poisson_logpmf(long m, double mu):
    return _logpmf(m, mu)


def poisson_window(long n):
    cdef long w = <long>ceil(12.0 * sqrt(<double>n))
    if w < 60:
        w = 60
    return max(0, n - w), n + w


def poisson_weights(long n, long m_lo, long m_hi):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m_hi - m_lo + 1)
    cdef double mu = <double>n
    cdef long m
    for m in range(m_lo, m_hi + 1):
        out[m - m_lo] = exp(_logpmf(m, mu))
    return out


def poisson_moments(long n, double eps):
    cdef long m_lo, m_hi, m
    cdef double mu = <double>n
    cdef double p, k, y, t
    cdef double acc[6]
    cdef double comp[6]
    cdef int i
    m_lo, m_hi = poisson_window(n)
    for i in range(6):
        acc[i] = 0.0
        comp[i] = 0.0
    with nogil:
        for m in range(m_lo, m_hi + 1):
            p = exp(_logpmf(m, mu))
            k = fabs(<double>(m - n))
            _kahan(acc, comp, 0, p)
            _kahan(acc, comp, 1, p * k)
            _kahan(acc, comp, 2, p * k * k)
            if k > eps:
                _kahan(acc, comp, 4, p * k)
                _kahan(acc, comp, 5, p)
            else:
                _kahan(acc, comp, 3, p * k)
    return (acc[0], acc[1], acc[2], acc[3], acc[4], acc[5])


cdef inline void _kahan(double* acc, double* comp, int i, double v) nogil:
    cdef double y = v - comp[i]
    cdef double t = acc[i] + y
    comp[i] = (t - acc[i]) - y
    acc[i] = t
