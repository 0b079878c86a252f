"""Regions D_alpha and S_alpha, sampled numerical ranges, classification.

``D_alpha`` is the convex hull of the disc ``|z| <= sin(alpha)`` and the
vertex ``z = 1``: a disc joined to a sector of half-angle ``alpha`` opening
leftward from 1 and cut off at ``|z - 1| = cos(alpha)``, where its edges
touch the disc.  ``S_alpha`` is the sector ``|arg z| <= alpha``.

Numerical ranges are sampled: for each angle ``theta`` on a uniform grid the
top eigenvector ``v`` of the Hermitian part of ``exp(i theta) M`` gives the
boundary point ``v* M v``, which maximises ``Re(exp(i theta) z)`` over
``W(M)``.  Every verdict below is a verdict at that sampling resolution.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import ComputationError, InputError, as_mat, opnorm

HALF_PI = 0.5 * math.pi
DEFAULT_N_ANGLES = 256
ALPHA_TOL = 1e-6
ALPHA_MAX = HALF_PI - 1e-6
SAMPLE_TOL = 1e-9
NOT_QUASI_SECTORIAL = "not-quasi-sectorial"


def default_tol(z) -> float:
    return 1e-9 * (1.0 + abs(z))


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha < HALF_PI:
        raise InputError(f"semi-angle must lie in [0, pi/2), got {alpha}")
    return alpha


def _segment_distance(w, alpha, length):
    """Distance from ``w`` to the segments ``{r e^{+-i alpha}: 0 <= r <= length}``."""
    best = None
    for sign in (1.0, -1.0):
        e = np.exp(1j * sign * alpha)
        r = np.clip((w * np.conj(e)).real, 0.0, length)
        dist = np.abs(w - r * e)
        best = dist if best is None else np.minimum(best, dist)
    return best


def dist_to_D_alpha(z, alpha: float):
    """Euclidean distance from ``z`` (scalar or array) to ``D_alpha``."""
    alpha = _check_alpha(alpha)
    z = np.asarray(z, dtype=complex)
    disc = np.maximum(0.0, np.abs(z) - math.sin(alpha))
    w = 1.0 - z
    rho = math.cos(alpha)
    aw = np.abs(w)
    arg = np.abs(np.angle(w))  # angle(0) == 0
    inside_wedge = arg <= alpha
    cap = np.where(
        inside_wedge,
        np.maximum(0.0, aw - rho),
        _segment_distance(w, alpha, rho),
    )
    out = np.minimum(disc, cap)
    return float(out) if out.ndim == 0 else out


def dist_to_sector(z, alpha: float):
    alpha = _check_alpha(alpha)
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    arg = np.abs(np.angle(z))
    excess = arg - alpha
    out = np.where(
        excess <= 0.0,
        0.0,
        np.where(excess >= HALF_PI, r, r * np.sin(np.clip(excess, 0.0, HALF_PI))),
    )
    return float(out) if out.ndim == 0 else out


def in_D_alpha(z: complex, alpha: float, tol: float | None = None) -> bool:
    tol = default_tol(z) if tol is None else float(tol)
    if tol < 0:
        raise InputError("tol must be nonnegative")
    return bool(dist_to_D_alpha(complex(z), alpha) <= tol)


def in_sector(z: complex, alpha: float, tol: float | None = None) -> bool:
    tol = default_tol(z) if tol is None else float(tol)
    if tol < 0:
        raise InputError("tol must be nonnegative")
    return bool(dist_to_sector(complex(z), alpha) <= tol)


@dataclass(frozen=True)
class NumericalRangeBoundary:
    angles: np.ndarray
    points: np.ndarray

    def __len__(self) -> int:
        return len(self.points)

    def to_csv(self, extra: dict | None = None) -> str:
        """``theta,re,im`` rows; ``extra`` adds constant columns."""
        extra = extra or {}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", "re", "im", *extra])
        for th, z in zip(self.angles, self.points):
            w.writerow([repr(float(th)), repr(float(z.real)), repr(float(z.imag)), *extra.values()])
        return buf.getvalue()


def numerical_range_boundary(M, n_angles: int = DEFAULT_N_ANGLES) -> NumericalRangeBoundary:
    M = as_mat(M)
    if int(n_angles) != n_angles or n_angles < 64:
        raise InputError(f"n_angles must be an integer >= 64, got {n_angles!r}")
    n_angles = int(n_angles)
    theta = 2.0 * math.pi * np.arange(n_angles) / n_angles
    rot = np.exp(1j * theta)[:, None, None] * M[None, :, :]
    H = 0.5 * (rot + np.conj(np.swapaxes(rot, 1, 2)))
    try:
        _, vecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(f"eigensolver failed: {exc}") from None
    v = vecs[:, :, -1]
    points = np.einsum("ki,ij,kj->k", v.conj(), M, v)
    return NumericalRangeBoundary(angles=theta, points=points)


def _all_in_D(points: np.ndarray, alpha: float, tol: float) -> bool:
    return bool(np.all(dist_to_D_alpha(points, alpha) <= tol))


def min_semi_angle_of_points(points: Sequence[complex], tol: float = SAMPLE_TOL):
    """Least ``alpha`` (to 1e-6 rad) with every point in ``D_alpha``.

    ``D_alpha`` meets the unit circle only at 1 when ``alpha < pi/2``, so
    any point on the circle away from 1 is rejected outright; at
    ``alpha = pi/2 - 1e-6`` the disc radius differs from 1 by 5e-13, far
    below the membership tolerance.
    """
    pts = np.asarray(points, dtype=complex)
    on_circle = np.abs(pts) >= 1.0 - tol
    if np.any(on_circle & (np.abs(1.0 - pts) > tol)):
        return NOT_QUASI_SECTORIAL
    if not _all_in_D(pts, ALPHA_MAX, tol):
        return NOT_QUASI_SECTORIAL
    if _all_in_D(pts, 0.0, tol):
        return 0.0
    lo, hi = 0.0, ALPHA_MAX
    while hi - lo > ALPHA_TOL:
        mid = 0.5 * (lo + hi)
        if _all_in_D(pts, mid, tol):
            hi = mid
        else:
            lo = mid
    return hi


def min_semi_angle(M, n_angles: int = DEFAULT_N_ANGLES):
    """Least semi-angle of a contraction, or ``"not-quasi-sectorial"``."""
    M = as_mat(M)
    norm = opnorm(M)
    if norm > 1.0 + 1e-10:
        raise InputError(f"min_semi_angle needs a contraction (norm {norm:.12g})")
    return min_semi_angle_of_points(numerical_range_boundary(M, n_angles).points)


def sector_angle_of_points(points: Sequence[complex], tol: float = SAMPLE_TOL) -> float:
    """Least ``alpha`` with every point in ``S_alpha`` (points near 0 ignored)."""
    pts = np.asarray(points, dtype=complex)
    pts = pts[np.abs(pts) > tol]
    if pts.size == 0:
        return 0.0
    return float(np.max(np.abs(np.angle(pts))))


@dataclass(frozen=True)
class SectorialCert:
    is_contraction: bool
    contraction_slack: float
    semi_angle_min: float | str | None
    region_checked: str
    n_angles: int

    def to_dict(self) -> dict:
        return {
            "is_contraction": self.is_contraction,
            "contraction_slack": self.contraction_slack,
            "semi_angle_min": self.semi_angle_min,
            "region_checked": self.region_checked,
            "n_angles": self.n_angles,
        }


def classify(M, region: str = "D_alpha", n_angles: int = DEFAULT_N_ANGLES) -> SectorialCert:
    """Certificate for ``M``: contraction status and least semi-angle.

    With ``region="D_alpha"`` the angle is the quasi-sectorial semi-angle
    (contractions only, ``None`` otherwise); with ``region="S_alpha"`` it is
    the least sector angle containing the sampled numerical range, or
    ``"not-m-sectorial"`` when that angle reaches pi/2.
    """
    M = as_mat(M)
    norm = opnorm(M)
    is_contraction = norm <= 1.0 + 1e-10
    boundary = numerical_range_boundary(M, n_angles)
    if region == "D_alpha":
        angle = min_semi_angle_of_points(boundary.points) if is_contraction else None
    elif region == "S_alpha":
        angle = sector_angle_of_points(boundary.points)
        if angle >= HALF_PI - SAMPLE_TOL:
            angle = "not-m-sectorial"
    else:
        raise InputError(f"region must be 'D_alpha' or 'S_alpha', got {region!r}")
    return SectorialCert(
        is_contraction=bool(is_contraction),
        contraction_slack=1.0 - norm,
        semi_angle_min=angle,
        region_checked=region,
        n_angles=int(n_angles),
    )
