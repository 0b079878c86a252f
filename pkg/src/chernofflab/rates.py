"""n-sweeps of defects and power-law rate fits."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .approximants import euler_defect, resolvent_defect, trotter_defect
from .defects import chernoff_defect_norm
from .linalg import InputError, as_mat

DYADIC_GRID = tuple(2**k for k in range(4, 13))  # 16 .. 4096
NOISE_FLOOR = 1e-14
# sweeps of n-fold products also drop points at the accumulated rounding
# level, ROUNDOFF_STEPS * n * eps
ROUNDOFF_STEPS = 16
DEFECT_KINDS = ("chernoff", "trotter", "euler", "resolvent_s")
UNDEFINED = "undefined"


class FitError(ValueError):
    """Fewer than three points above the noise floor."""


def fit_power(points: Iterable[tuple[float, float]]) -> tuple[float, float, float]:
    """Least-squares fit of ``value = c * n**(-p)`` in log-log space.

    Returns ``(p, c, residual)`` with ``residual`` the RMS log-space misfit.
    Points with ``value <= 1e-14`` are dropped.
    """
    pts = [(float(n), float(v)) for n, v in points if v > NOISE_FLOOR]
    if len(pts) < 3:
        raise FitError(f"need >= 3 points above {NOISE_FLOOR:g}, got {len(pts)}")
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    design = np.column_stack([np.ones_like(x), -x])
    (log_c, p), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (log_c - p * x)
    return float(p), float(math.exp(log_c)), float(math.sqrt(np.mean(resid**2)))


@dataclass
class RateReport:
    points: list[tuple[int | float, float]]
    fit_exponent: float | str
    fit_prefactor: float | None
    fit_residual: float | None
    window: tuple[float, float] | None
    kind: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def fitted(self) -> bool:
        return self.fit_exponent != UNDEFINED

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "points": [{"n": n, "value": v} for n, v in self.points],
            "fit_exponent": self.fit_exponent,
            "fit_prefactor": self.fit_prefactor,
            "fit_residual": self.fit_residual,
            "window": list(self.window) if self.window else None,
            "meta": self.meta,
        }

    def to_csv(self, extra: dict | None = None) -> str:
        """``n,value`` rows followed by a ``#fit`` footer row with p, c, residual."""
        extra = extra or {}
        cols = ["n", "value", *extra]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for n, v in self.points:
            w.writerow([_fmt(n), repr(float(v)), *extra.values()])
        w.writerow(["#fit", f"p={_fmt(self.fit_exponent)}", f"c={_fmt(self.fit_prefactor)}",
                    f"residual={_fmt(self.fit_residual)}"])
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def roundoff_floor(n: int) -> float:
    return max(NOISE_FLOOR, ROUNDOFF_STEPS * n * float(np.finfo(float).eps))


def report_from_points(points: Sequence[tuple[float, float]], kind: str = "", meta=None,
                       floor: Callable[[float], float] | None = None) -> RateReport:
    """Sort ``points`` and fit those above the floor (1e-14 unless ``floor`` is given)."""
    pts = sorted((n, float(v)) for n, v in points)
    ns = [n for n, _ in pts]
    if len(set(ns)) != len(ns):
        raise InputError("sweep points must have distinct n")
    usable = [(n, v) for n, v in pts if v > (floor(n) if floor else NOISE_FLOOR)]
    if len(usable) < 3:
        return RateReport(pts, UNDEFINED, None, None, None, kind, dict(meta or {}))
    p, c, r = fit_power(usable)
    return RateReport(pts, p, c, r, (usable[0][0], usable[-1][0]), kind, dict(meta or {}))


def _as_list(subject) -> list[np.ndarray]:
    if isinstance(subject, (list, tuple)) and subject and np.ndim(subject[0]) == 2:
        return [as_mat(M) for M in subject]
    return [as_mat(subject)]


def sweep(defect_kind: str, subject: dict, n_grid: Sequence[int] = DYADIC_GRID) -> RateReport:
    """Evaluate a defect on ``n_grid`` and fit a power law.

    ``subject`` keys by kind:

    * ``chernoff``: ``C`` (a contraction, or a list; the worst case over the
      list is reported at each n)
    * ``trotter``: ``A``, ``B``, optional ``t`` (default 1), ``reverse``
    * ``euler``: ``A`` (or a list, worst case), optional ``t``
    * ``resolvent_s``: ``A``, ``zeta`` (default 1); ``s = 1/n``

    Every point is reported.  The fit skips points at or below
    ``roundoff_floor(n)`` for the product kinds.
    """
    if defect_kind not in DEFECT_KINDS:
        raise InputError(f"unknown defect kind {defect_kind!r}")
    grid = [int(n) for n in n_grid]
    if not grid:
        raise InputError("n_grid is empty")
    if any(n < 1 for n in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise InputError("n_grid must be strictly increasing positive integers")
    t = float(subject.get("t", 1.0))
    try:
        if defect_kind == "chernoff":
            Cs = _as_list(subject["C"])
            values = [max(chernoff_defect_norm(C, n) for C in Cs) for n in grid]
        elif defect_kind == "trotter":
            A, B = as_mat(subject["A"]), as_mat(subject["B"])
            rev = bool(subject.get("reverse", False))
            values = [trotter_defect(A, B, t, n, rev) for n in grid]
        elif defect_kind == "euler":
            As = _as_list(subject["A"])
            values = [max(euler_defect(A, t, n) for A in As) for n in grid]
        else:
            A = as_mat(subject["A"])
            zeta = complex(subject.get("zeta", 1.0))
            values = [resolvent_defect(A, 1.0 / n, zeta)[0] for n in grid]
    except KeyError as exc:
        raise InputError(f"{defect_kind} sweep needs subject key {exc}") from None
    # resolvent_s is not an n-fold product; only the fixed floor applies
    floor = None if defect_kind == "resolvent_s" else roundoff_floor
    return report_from_points(list(zip(grid, values)), kind=defect_kind, floor=floor)


def read_points_csv(text: str) -> list[tuple[float, float]]:
    """Parse ``n,value`` rows; a header row and ``#`` rows are skipped."""
    pts = []
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].startswith("#"):
            continue
        try:
            n, v = float(row[0]), float(row[1])
        except (ValueError, IndexError):
            if not pts:
                continue  # header
            raise InputError(f"bad CSV row {row!r}") from None
        pts.append((int(n) if n.is_integer() else n, v))
    return pts
