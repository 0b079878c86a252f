"""Pure-Python Poisson window kernels.

Reference implementation of the routines compiled in ``_kernels.pyx``.  Both
modules must agree to the last few ulps; ``tests/test_kernels.py`` checks it.

Weights use Loader's saddle-point form
``log p(m; n) = -stirlerr(m) - bd0(m, n) - log(2 pi m) / 2``, which keeps
full relative precision far into the tails, unlike differences of
``lgamma`` values near ``n = 10**6``.
"""

import math

BACKEND = "python"

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# stirlerr(m) = lgamma(m+1) - (m+1/2) log m + m - log sqrt(2 pi), m = 0..15
_STIRLERR = (
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
)

_S0 = 1.0 / 12.0
_S1 = 1.0 / 360.0
_S2 = 1.0 / 1260.0
_S3 = 1.0 / 1680.0
_S4 = 1.0 / 1188.0


def stirlerr(m):
    if m <= 15:
        return _STIRLERR[int(m)]
    nn = float(m) * m
    if m > 500:
        return (_S0 - _S1 / nn) / m
    if m > 80:
        return (_S0 - (_S1 - _S2 / nn) / nn) / m
    if m > 35:
        return (_S0 - (_S1 - (_S2 - _S3 / nn) / nn) / nn) / m
    return (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / m


def bd0(x, mu):
    """``x log(x/mu) + mu - x`` without cancellation near ``x = mu``."""
    if abs(x - mu) < 0.1 * (x + mu):
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
    return x * math.log(x / mu) + mu - x


def poisson_logpmf(m, mu):
    if m == 0:
        return -mu
    return -stirlerr(m) - bd0(float(m), mu) - _LOG_SQRT_2PI - 0.5 * math.log(m)


def poisson_window(n):
    w = max(60, math.ceil(12.0 * math.sqrt(n)))
    return max(0, n - w), n + w


def poisson_weights(n, m_lo, m_hi):
    mu = float(n)
    return [math.exp(poisson_logpmf(m, mu)) for m in range(m_lo, m_hi + 1)]


def poisson_moments(n, eps):
    """Kahan-compensated window sums for Poisson(n).

    Returns ``(mass, abs_moment, var_sum, central_abs, tail_abs, tail_prob)``.
    The tail is ``|m - n| > eps``; a negative ``eps`` puts everything in the
    tail.
    """
    m_lo, m_hi = poisson_window(n)
    mu = float(n)
    acc = [0.0] * 6
    comp = [0.0] * 6

    def add(i, v):
        y = v - comp[i]
        t = acc[i] + y
        comp[i] = (t - acc[i]) - y
        acc[i] = t

    for m in range(m_lo, m_hi + 1):
        p = math.exp(poisson_logpmf(m, mu))
        k = abs(m - n)
        add(0, p)
        add(1, p * k)
        add(2, p * k * k)
        if k > eps:
            add(4, p * k)
            add(5, p)
        else:
            add(3, p * k)
    return tuple(acc)
