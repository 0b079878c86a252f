"""Exit criteria, each at its stated tolerance and runtime budget.

Every criterion prints one ``PASS`` or ``FAIL`` line.  Under pytest the lines
appear in the terminal summary; ``python tests/test_acceptance.py`` runs the
criteria directly.
"""

import functools
import math
import time

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from chernofflab.approximants import euler_defect, resolvent_defect, trotter_defect
from chernofflab.cli import main as cli_main
from chernofflab.defects import (
    VIOLATED,
    audit_bound,
    bound_cube_root,
    chernoff_defect_vec,
    bound_sqrt_n,
    bound_thm22,
    quasisectorial_in_regime,
    ritt_constant,
)
from chernofflab.families import FamilySpec, corpus, generator_of, make_operator
from chernofflab.poisson import (
    abs_moment_closed_form,
    poisson_abs_moment,
    poisson_var_sum,
    tail_claim_audit,
)
from chernofflab.rates import DYADIC_GRID, sweep
from chernofflab.regions import min_semi_angle, numerical_range_boundary

pytestmark = pytest.mark.acceptance

RESULTS: list[str] = []


def criterion(number: int, title: str, budget_s: float):
    """Time the body, check the budget, record one PASS/FAIL line."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            detail, ok = "", False
            try:
                detail = fn(*args, **kwargs) or ""
                ok = True
            except AssertionError as exc:
                detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
                raise
            finally:
                dt = time.perf_counter() - t0
                in_budget = dt < budget_s
                verdict = "PASS" if ok and in_budget else "FAIL"
                note = detail if in_budget else f"{detail}; over budget"
                RESULTS.append(f"{verdict} criterion {number:2d} {title} [{dt:.2f}s < {budget_s:g}s] {note}")
            assert in_budget, f"criterion {number} took {dt:.2f}s, budget {budget_s}s"

        return run

    return wrap


def contraction_corpus():
    """200 random contractions, dims 1..8 with 25 seeds each, 5 vectors each."""
    specs = [FamilySpec("random_contraction", d, 10_000 + 100 * d) for d in range(1, 9)]
    rng = np.random.Generator(np.random.PCG64(2024))
    out = []
    for C, _ in corpus(specs, 25, n_angles=64):
        d = C.shape[0]
        xs = [rng.standard_normal(d) + 1j * rng.standard_normal(d) for _ in range(5)]
        out.append((C, xs))
    return out


@criterion(1, "Poisson variance identity", 1.0)
def test_c01_variance_identity():
    worst = 0.0
    for n in (1, 10, 100, 1000, 10000):
        err = abs(poisson_var_sum(n) / n - 1.0)
        assert err <= 1e-10, f"n={n}: rel err {err:.3g}"
        worst = max(worst, err)
    return f"max rel err {worst:.2e}"


@criterion(2, "Poisson absolute moment", 1.0)
def test_c02_absolute_moment():
    worst = 0.0
    for n in [2**k for k in range(14)] + [10**4]:
        got, ref = poisson_abs_moment(n), abs_moment_closed_form(n)
        err = abs(got / ref - 1.0)
        assert err <= 1e-9, f"n={n}: rel err {err:.3g}"
        assert got <= math.sqrt(n), f"n={n}: {got} > sqrt(n)"
        worst = max(worst, err)
    return f"max rel err {worst:.2e}"


@criterion(3, "sqrt(n) lemma on 200 contractions", 120.0)
def test_c03_sqrt_n_lemma():
    checks = violations = 0
    for C, xs in contraction_corpus():
        for x in xs:
            for n in range(1, 65):
                lhs, drive = chernoff_defect_vec(C, x, n)
                rhs = bound_sqrt_n(n, drive)
                violations += lhs > rhs + 1e-9 * (1 + rhs)
                checks += 1
    assert checks == 200 * 5 * 64
    assert violations == 0, f"{violations} violations"
    return f"{checks} checks, 0 violations"


@criterion(4, "two-term bound on 200 contractions", 120.0)
def test_c04_two_term_bound():
    checks = violations = 0
    for C, xs in contraction_corpus():
        for x in xs:
            xn = float(np.linalg.norm(x))
            for n in range(1, 65):
                lhs, drive = chernoff_defect_vec(C, x, n)
                for delta in (-1 / 6, 0.0, 1 / 6):
                    rhs = bound_thm22(n, delta, xn, drive)
                    violations += lhs > rhs + 1e-9 * (1 + rhs)
                    checks += 1
    assert violations == 0, f"{violations} violations"
    return f"{checks} checks, 0 violations"


@criterion(5, "lemma2 and tail-claim audits", 1.0)
def test_c05_validity_range(tmp_path):
    import json

    assert cli_main(["probe", "--out", str(tmp_path)]) == 0
    (p,) = json.loads((tmp_path / "probe.json").read_text())["probes"]
    assert p["theta"] == 1e-3 and p["n"] == 10**6 and p["delta"] == pytest.approx(-1 / 6)
    assert abs(p["ratio"] - 393.5) <= 1.0, f"ratio {p['ratio']}"
    assert p["lemma2"]["rhs_over_drive"] == pytest.approx(200.0, rel=1e-12)
    assert p["ratio"] > p["lemma2"]["rhs_over_drive"]
    assert p["lemma2"]["verdict"] == VIOLATED
    assert tail_claim_audit(100, 1 / 6).verdict == VIOLATED
    assert tail_claim_audit(10**4, 1 / 6).verdict == "holds"
    return f"ratio {p['ratio']:.3f} > 200; tail n=100 violated, n=1e4 holds"


@criterion(6, "quasi-sectorial (2K+2)/n^(1/3) bound", 300.0)
def test_c06_quasisectorial():
    grid = [2**k for k in range(3, 12)]  # 8 .. 2048
    violations = checked = 0
    worst = math.inf
    for s in range(50):
        spec = FamilySpec("resolvent_quasisectorial", 1 + s % 8, 500 + s, {"alpha": math.pi / 4, "t": 1.0})
        C, cert = make_operator(spec)
        assert cert.semi_angle_min <= math.pi / 4 + 1e-3
        ritt = ritt_constant(C, 512)
        for a in audit_bound(C, "norm", grid, 1 / 6, "quasi_sectorial", ritt):
            if a.verdict == "out-of-regime":
                continue
            assert a.rhs == pytest.approx(bound_cube_root(a.context["n"], ritt.K_hat), rel=1e-12)
            checked += 1
            violations += a.verdict == VIOLATED
            worst = min(worst, a.margin)
    assert all(quasisectorial_in_regime(n, 1 / 6) for n in grid)
    assert violations == 0, f"{violations} violations"
    return f"{checked} checks, min margin {worst:.3f}"


@criterion(7, "self-adjoint O(1/n) rates", 120.0)
def test_c07_selfadjoint_rates():
    spec = FamilySpec("selfadjoint_contraction", 8, 100, {"spectrum": "log_gap", "min_gap": 1e-5})
    Cs = [C for C, _ in corpus([spec], 8)]
    chern = sweep("chernoff", {"C": Cs}, DYADIC_GRID)
    As = [generator_of(FamilySpec("msectorial", 8, s, {"alpha": 0.0})) for s in range(5)]
    for A in As:
        assert np.array_equal(A, A.conj().T)
    euler = sweep("euler", {"A": As}, DYADIC_GRID)
    for rep in (chern, euler):
        assert 0.9 <= rep.fit_exponent <= 1.1, f"{rep.kind}: p={rep.fit_exponent:.4f}"
    return f"chernoff p={chern.fit_exponent:.4f}, euler p={euler.fit_exponent:.4f}"


@criterion(8, "Euler limit for m-sectorial generators", 60.0)
def test_c08_euler_limit():
    worst = 0.0
    count = 0
    for d in range(1, 9):
        for alpha in (0.0, math.pi / 8, math.pi / 4):
            for seed in range(3):
                A = generator_of(FamilySpec("msectorial", d, 700 + seed, {"alpha": alpha}))
                hi, lo = euler_defect(A, 1.0, 4096), euler_defect(A, 1.0, 16)
                assert hi <= 1e-2, f"d={d} alpha={alpha:.3f}: {hi:.3g}"
                assert hi <= lo
                worst = max(worst, hi)
                count += 1
    return f"{count} generators, max defect at n=4096 {worst:.2e}"


@criterion(9, "Trotter limit", 60.0)
def test_c09_trotter_limit():
    A = np.array([[1.0, 0.0], [0.0, 0.0]])
    B = np.array([[0.5, 0.5], [0.5, 0.5]])
    assert np.linalg.eigvalsh(A).min() >= 0 and np.linalg.eigvalsh(B).min() >= -1e-15
    assert np.abs(A @ B - B @ A).max() > 0
    rep = sweep("trotter", {"A": A, "B": B}, DYADIC_GRID)
    last = dict(rep.points)[4096]
    assert last <= 1e-3, f"defect at 4096: {last:.3g}"
    assert rep.fit_exponent >= 0.9, f"p={rep.fit_exponent:.4f}"
    Ac, Bc = np.diag([1.0, 2.0, 0.5]), np.diag([0.3, 0.0, 4.0])
    worst = max(trotter_defect(Ac, Bc, 1.0, n) for n in range(1, 65))
    worst = max(worst, *(v for _, v in sweep("trotter", {"A": Ac, "B": Bc}, DYADIC_GRID).points))
    assert worst <= 1e-11, f"commuting defect {worst:.3g}"
    return f"p={rep.fit_exponent:.4f}, defect(4096)={last:.2e}, commuting max {worst:.1e}"


@criterion(10, "resolvent O(s) asymptotic", 1.0)
def test_c10_resolvent_order_s():
    fixtures = {"d=1": np.array([[1.0]]), "d=4": np.diag([0.5, 1.0, 2.0, 4.0])}
    spreads = []
    for name, A in fixtures.items():
        ratios = []
        for s in (1e-2, 1e-3, 1e-4):
            direct, product = resolvent_defect(A, s, 1.0)
            assert abs(direct - product) <= 1e-10 * product, f"{name} s={s}: routes differ"
            ratios.append(direct / s)
        spread = (max(ratios) - min(ratios)) / min(ratios)
        assert spread < 0.05, f"{name}: defect/s varies by {spread:.3%}"
        spreads.append(f"{name} {spread:.2%}")
    return "defect/s spread " + ", ".join(spreads)


@criterion(11, "geometry", 10.0)
def test_c11_geometry():
    J, _ = make_operator(FamilySpec("jordan_block", 2))
    angle = min_semi_angle(J)
    assert abs(angle - math.pi / 6) <= 1e-4, f"Jordan angle {angle}"
    worst_hull = 0.0
    for seed in range(5):
        A = generator_of(FamilySpec("msectorial", 6, 40 + seed))
        ev = np.linalg.eigvals(A)
        hull = ConvexHull(np.column_stack([ev.real, ev.imag]))
        pts = numerical_range_boundary(A).points
        # signed distance to each facet; <= 0 inside
        signed = hull.equations[:, :2] @ np.vstack([pts.real, pts.imag]) + hull.equations[:, 2:3]
        outside = float(np.max(signed))
        # every sample lies on some hull edge
        on_edge = float(np.max(np.min(np.abs(signed), axis=0)))
        worst_hull = max(worst_hull, outside, on_edge)
    assert worst_hull <= 1e-8, f"numerical range off hull by {worst_hull:.3g}"
    ritt = ritt_constant(np.diag(np.linspace(0.0, 1.0, 511)), 512)
    assert abs(ritt.K_hat - 0.5) <= 1e-9, f"K_hat {ritt.K_hat!r}"
    return f"Jordan angle {angle:.7f}, hull dist {worst_hull:.1e}, K_hat {ritt.K_hat!r}"


if __name__ == "__main__":
    import inspect
    import sys
    import tempfile
    from pathlib import Path

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c"):
            try:
                if "tmp_path" in inspect.signature(fn).parameters:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                failed += 1
            print(RESULTS[-1])
    sys.exit(1 if failed else 0)
