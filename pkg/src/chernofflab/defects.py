"""Chernoff defects, their upper bounds, and bound audits.

The Chernoff defect of a contraction ``C`` is ``C**n - exp(n(C - 1))``,
measured either in operator norm or on a vector.  Each ``bound_*`` function
returns the right-hand side of one estimate; :func:`audit_bound` compares
defect and bound over an n-sweep and records a :class:`BoundAudit` per n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    InputError,
    as_mat,
    as_vec,
    expm,
    fingerprint,
    identity,
    opnorm,
    powm,
    vecnorm,
)

CONTRACTION_TOL = 1e-10
BOUND_IDS = ("sqrt_n", "lemma2", "thm22", "quasi_sectorial")
# Bounds that are theorems; ``--strict`` fails only on these.
ASSERTED_BOUNDS = frozenset({"sqrt_n", "thm22", "quasi_sectorial"})

HOLDS = "holds"
VIOLATED = "violated"
OUT_OF_REGIME = "out-of-regime"


@dataclass(frozen=True)
class BoundAudit:
    lhs: float
    rhs: float
    margin: float
    verdict: str
    context: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def row(self) -> dict:
        return {
            "bound_id": self.context.get("bound_id"),
            "n": self.context.get("n"),
            "delta": self.context.get("delta"),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "verdict": self.verdict,
            "fingerprint": self.context.get("fingerprint"),
        }


def verdict_for(lhs: float, rhs: float) -> str:
    return HOLDS if rhs - lhs >= -1e-9 * (1.0 + rhs) else VIOLATED


def make_audit(lhs: float, rhs: float, *, in_regime: bool = True, **context) -> BoundAudit:
    lhs, rhs = float(lhs), float(rhs)
    verdict = verdict_for(lhs, rhs) if in_regime else OUT_OF_REGIME
    return BoundAudit(lhs=lhs, rhs=rhs, margin=rhs - lhs, verdict=verdict, context=context)


def min_margin(audits: Sequence[BoundAudit]) -> float:
    """Smallest margin among in-regime audits (``inf`` if there are none)."""
    margins = [a.margin for a in audits if a.verdict != OUT_OF_REGIME]
    return min(margins) if margins else math.inf


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    return int(n)


def check_contraction(C, name: str = "C") -> np.ndarray:
    C = as_mat(C, name)
    norm = opnorm(C)
    if norm > 1.0 + CONTRACTION_TOL:
        raise InputError(f"{name} is not a contraction (norm {norm:.12g})")
    return C


def _defect_matrix(C: np.ndarray, n: int) -> np.ndarray:
    return powm(C, n) - expm(n * (C - identity(C.shape[0])))


def chernoff_defect_norm(C, n) -> float:
    """``||C**n - exp(n(C - 1))||`` for a contraction ``C``."""
    C = check_contraction(C)
    return opnorm(_defect_matrix(C, _check_n(n)))


def chernoff_defect_vec(C, x, n) -> tuple[float, float]:
    """Return ``(||(C**n - exp(n(C-1))) x||, ||(C - 1) x||)``."""
    C = check_contraction(C)
    x = as_vec(x, C.shape[0], "x")
    if not np.any(x):
        raise InputError("x must be nonzero")
    n = _check_n(n)
    lhs = vecnorm(_defect_matrix(C, n) @ x)
    drive = vecnorm(C @ x - x)
    return lhs, drive


def bound_sqrt_n(n, drive: float) -> float:
    return math.sqrt(n) * drive


def bound_lemma2(n, delta: float, drive: float) -> float:
    return (n ** (-2.0 * delta) + n ** (delta + 0.5)) * drive


def bound_thm22(n, delta: float, x_norm: float, phi_drive: float) -> float:
    return 2.0 * n ** (-2.0 * delta) * x_norm + n ** (delta + 0.5) * phi_drive


def bound_quasisectorial(n, delta: float, K: float) -> float:
    return 2.0 * n ** (-2.0 * delta) + 2.0 * K * n ** (delta - 0.5)


def bound_cube_root(n, K: float) -> float:
    """The ``delta = 1/6`` case, ``(2K + 2) / n**(1/3)``."""
    return (2.0 * K + 2.0) / n ** (1.0 / 3.0)


def quasisectorial_in_regime(n: int, delta: float) -> bool:
    """Central-step guard ``[eps_n] <= (n+1)/2`` with ``eps_n = n**(delta+1/2)``."""
    return math.floor(n ** (delta + 0.5)) <= (n + 1) / 2


@dataclass(frozen=True)
class RittEstimate:
    K_hat: float
    N_max: int
    argmax_n: int

    @property
    def at_horizon(self) -> bool:
        """True when the maximum sits at ``N_max`` and may not have stabilised."""
        return self.argmax_n == self.N_max

    @property
    def M(self) -> float:
        return 2.0 * self.K_hat + 2.0


def ritt_constant(C, N_max: int = 512) -> RittEstimate:
    """``max_{1<=n<=N_max} (n+1) ||C**n (1 - C)||``."""
    C = check_contraction(C)
    if int(N_max) != N_max or N_max < 16:
        raise InputError(f"N_max must be an integer >= 16, got {N_max!r}")
    N_max = int(N_max)
    d = C.shape[0]
    diagonal = not np.any(C - np.diag(np.diag(C)))
    if diagonal:
        c = np.diag(C)
        P = c * (1.0 - c)
    else:
        P = C @ (identity(d) - C)
    best, arg = -1.0, 1
    for n in range(1, N_max + 1):
        if n > 1:
            P = c * P if diagonal else C @ P
        val = (n + 1) * (float(np.max(np.abs(P))) if diagonal else opnorm(P))
        if val > best:
            best, arg = val, n
    return RittEstimate(K_hat=best, N_max=N_max, argmax_n=arg)


def audit_bound(
    C,
    x,
    n_sweep: Sequence[int],
    delta: float = 0.0,
    bound_id: str = "sqrt_n",
    ritt: RittEstimate | None = None,
) -> list[BoundAudit]:
    """Compare a Chernoff defect with one bound for every n in ``n_sweep``.

    ``x`` is a vector for the strong (vector) form or the string ``"norm"``
    for the operator-norm form, where drives become ``||1 - C||`` and
    ``||x|| = 1``.  ``quasi_sectorial`` is operator-norm only and needs a
    :class:`RittEstimate`; n below the central-step guard is reported as
    out-of-regime instead of being judged.
    """
    if bound_id not in BOUND_IDS:
        raise InputError(f"unknown bound_id {bound_id!r}; expected one of {BOUND_IDS}")
    C = check_contraction(C)
    d = C.shape[0]
    norm_mode = isinstance(x, str)
    if norm_mode and x != "norm":
        raise InputError(f"x must be a vector or 'norm', got {x!r}")
    if bound_id == "quasi_sectorial":
        if not norm_mode:
            raise InputError("quasi_sectorial is an operator-norm bound; pass x='norm'")
        if ritt is None:
            raise InputError("quasi_sectorial needs a RittEstimate")
    fp = fingerprint(C)
    one_minus_C = identity(d) - C
    if norm_mode:
        drive, x_norm = opnorm(one_minus_C), 1.0
    else:
        xv = as_vec(x, d, "x")
        if not np.any(xv):
            raise InputError("x must be nonzero")
        drive, x_norm = vecnorm(one_minus_C @ xv), vecnorm(xv)

    audits = []
    for n in n_sweep:
        n = _check_n(n)
        D = _defect_matrix(C, n)
        lhs = opnorm(D) if norm_mode else vecnorm(D @ xv)
        in_regime = True
        if bound_id == "sqrt_n":
            rhs = bound_sqrt_n(n, drive)
        elif bound_id == "lemma2":
            rhs = bound_lemma2(n, delta, drive)
        elif bound_id == "thm22":
            rhs = bound_thm22(n, delta, x_norm, drive)
        else:
            rhs = bound_quasisectorial(n, delta, ritt.K_hat)
            in_regime = quasisectorial_in_regime(n, delta)
        audits.append(
            make_audit(
                lhs,
                rhs,
                in_regime=in_regime,
                bound_id=bound_id,
                n=n,
                delta=float(delta),
                fingerprint=fp,
            )
        )
    return audits
