"""Compiled and pure-Python kernels agree, and both match mpmath."""

import math

import mpmath
import pytest

from chernofflab import _kernels_py

try:
    from chernofflab import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
BACKENDS.append(
    pytest.param(_kernels_c, id="cython", marks=pytest.mark.skipif(_kernels_c is None, reason="no extension"))
)

mpmath.mp.dps = 40


def exact_pmf(m, n):
    return mpmath.exp(m * mpmath.log(n) - n - mpmath.loggamma(m + 1)) if m else mpmath.exp(-n)


@pytest.mark.parametrize("k", BACKENDS)
@pytest.mark.parametrize(
    "n,m",
    [(1, 0), (1, 1), (1, 7), (10, 3), (10, 10), (100, 40), (100, 160), (10**4, 9700), (10**6, 10**6),
     (10**6, 10**6 - 12000), (10**6, 10**6 + 12000)],
)
def test_pmf_against_mpmath(k, n, m):
    ref = exact_pmf(m, n)
    got = math.exp(k.poisson_logpmf(m, float(n)))
    assert abs(got / float(ref) - 1.0) < 2e-14


@pytest.mark.parametrize("k", BACKENDS)
def test_window(k):
    assert k.poisson_window(1) == (0, 61)
    assert k.poisson_window(10**4) == (10**4 - 1200, 10**4 + 1200)


@pytest.mark.parametrize("k", BACKENDS)
def test_stirlerr_continuity(k):
    # table/series switch at 15/16 must agree with lgamma
    for m in (14, 15, 16, 17, 35, 36, 80, 81, 500, 501):
        ref = mpmath.loggamma(m + 1) - (m + 0.5) * mpmath.log(m) + m - mpmath.log(mpmath.sqrt(2 * mpmath.pi))
        assert k.stirlerr(m) == pytest.approx(float(ref), rel=1e-14)


@pytest.mark.skipif(_kernels_c is None, reason="no extension")
@pytest.mark.parametrize("n", [1, 2, 10, 99, 1000, 12345, 10**6])
@pytest.mark.parametrize("eps", [-1.0, 0.5, 1.0, 21.5])
def test_backends_agree(n, eps):
    a = _kernels_py.poisson_moments(n, eps)
    b = _kernels_c.poisson_moments(n, eps)
    for x, y in zip(a, b):
        assert x == pytest.approx(y, rel=1e-14, abs=1e-300)


@pytest.mark.skipif(_kernels_c is None, reason="no extension")
def test_weights_agree():
    lo, hi = _kernels_py.poisson_window(500)
    a = _kernels_py.poisson_weights(500, lo, hi)
    b = _kernels_c.poisson_weights(500, lo, hi)
    assert max(abs(x / y - 1.0) for x, y in zip(a, b) if y > 0) < 1e-14


def test_env_forces_fallback():
    import os
    import subprocess
    import sys

    code = "import chernofflab; print(chernofflab.BACKEND)"
    env = {**os.environ, "CHERNOFFLAB_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_benchmark_runs():
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    rows = bench.run([50], repeat=1)
    assert {r["kernel"] for r in rows} == {"poisson_moments", "poisson_weights"}
    for r in rows:
        assert r["python"] > 0
        if _kernels_c is not None:
            assert r["max_rel_diff"] <= 1e-14
