"""Chernoff functions and the approximation formulas built on them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import (
    InputError,
    as_mat,
    expm,
    identity,
    mat_from_json,
    opnorm,
    powm,
    resolvent,
)


class FamilyContractError(RuntimeError):
    """A Chernoff family returned a non-contraction or ``F(0) != 1``."""


@dataclass(frozen=True)
class ChernoffFamily:
    """A map ``t -> F(t)`` into contractions with ``F(0) = 1``.

    ``evaluate`` checks the contract on every call; ``fn`` is the raw map.
    """

    fn: Callable[[float], np.ndarray]
    label: str
    dim: int

    def evaluate(self, t: float) -> np.ndarray:
        t = float(t)
        if t < 0:
            raise InputError(f"family parameter must be >= 0, got {t}")
        F = as_mat(self.fn(t), self.label)
        if F.shape[0] != self.dim:
            raise FamilyContractError(f"{self.label}: dim {F.shape[0]} != {self.dim}")
        norm = opnorm(F)
        if norm > 1.0 + 1e-10:
            raise FamilyContractError(f"{self.label}({t:g}) has norm {norm:.12g} > 1")
        if t == 0.0 and opnorm(F - identity(self.dim)) > 1e-12:
            raise FamilyContractError(f"{self.label}(0) is not the identity")
        return F

    __call__ = evaluate


def exact_family(A) -> ChernoffFamily:
    A = as_mat(A, "A")
    return ChernoffFamily(lambda t: expm(-t * A), "exact", A.shape[0])


def euler_family(A) -> ChernoffFamily:
    A = as_mat(A, "A")
    return ChernoffFamily(lambda t: resolvent(t * A, 1.0), "euler", A.shape[0])


def trotter_family(A, B, reverse: bool = False) -> ChernoffFamily:
    """``t -> exp(-tA) exp(-tB)``; ``reverse=True`` puts B first."""
    A = as_mat(A, "A")
    B = as_mat(B, "B")
    if A.shape != B.shape:
        raise InputError("A and B must have the same dimension")
    if reverse:
        return ChernoffFamily(lambda t: expm(-t * B) @ expm(-t * A), "trotter-reversed", A.shape[0])
    return ChernoffFamily(lambda t: expm(-t * A) @ expm(-t * B), "trotter", A.shape[0])


def family_from_name(name: str, A=None, B=None, reverse: bool = False) -> ChernoffFamily:
    """Resolve ``"euler"``, ``"trotter"``, ``"exact"`` or ``"file:<path>"``.

    A ``file:`` path holds a JSON object with a matrix literal under ``"A"``
    and optionally ``"B"``; with B present the family is Trotter, otherwise
    Euler.
    """
    if name.startswith("file:"):
        with open(name[5:]) as fh:
            obj = json.load(fh)
        if "A" not in obj:
            raise InputError(f"{name}: family file needs an 'A' matrix")
        A = mat_from_json(obj["A"])
        if "B" in obj:
            return trotter_family(A, mat_from_json(obj["B"]), reverse)
        return euler_family(A)
    if A is None:
        raise InputError(f"family {name!r} needs a generator A")
    if name == "euler":
        return euler_family(A)
    if name == "exact":
        return exact_family(A)
    if name == "trotter":
        if B is None:
            raise InputError("trotter family needs A and B")
        return trotter_family(A, B, reverse)
    raise InputError(f"unknown family {name!r}")


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    return int(n)


def chernoff_iterate(F: ChernoffFamily, t: float, n: int) -> np.ndarray:
    """``F(t/n)**n``."""
    n = _check_n(n)
    if t < 0:
        raise InputError("t must be >= 0")
    return powm(F.evaluate(t / n), n)


def generator_approx(F: ChernoffFamily, s: float, n: int) -> np.ndarray:
    """``(1 - F(s/n)) / (s/n)``."""
    n = _check_n(n)
    if not s > 0:
        raise InputError("s must be > 0")
    h = s / n
    return (identity(F.dim) - F.evaluate(h)) / h


def derivative_at_zero(F: ChernoffFamily, h: float = 1e-4) -> np.ndarray:
    """One-sided difference quotient ``(F(h) - 1)/h``; should approach ``-A``."""
    return (F.evaluate(h) - identity(F.dim)) / h


def exact_semigroup(A, t: float) -> np.ndarray:
    return expm(-float(t) * as_mat(A, "A"))


def trotter_approx(A, B, t: float, n: int, reverse: bool = False) -> np.ndarray:
    """``(exp(-tA/n) exp(-tB/n))**n``."""
    A = as_mat(A, "A")
    B = as_mat(B, "B")
    n = _check_n(n)
    h = float(t) / n
    step = expm(-h * B) @ expm(-h * A) if reverse else expm(-h * A) @ expm(-h * B)
    return powm(step, n)


def euler_approx(A, t: float, n: int) -> np.ndarray:
    """``(1 + tA/n)**-n``; raises SingularityError if ``1 + tA/n`` is singular."""
    A = as_mat(A, "A")
    n = _check_n(n)
    return powm(resolvent(float(t) / n * A, 1.0), n)


def trotter_defect(A, B, t: float, n: int, reverse: bool = False) -> float:
    A = as_mat(A, "A")
    B = as_mat(B, "B")
    return opnorm(trotter_approx(A, B, t, n, reverse) - exact_semigroup(A + B, t))


def euler_defect(A, t: float, n: int) -> float:
    return opnorm(euler_approx(A, t, n) - exact_semigroup(A, t))


def resolvent_defect(A, s: float, zeta: complex) -> tuple[float, float]:
    """Resolvent distance between ``X(s) = (1 - (1 + sA)^{-1})/s`` and ``A``.

    Returns ``(direct, product_form)``: the norm of the difference of the two
    resolvents at ``zeta``, and ``s ||A (zeta + A + zeta s A)^{-1} A (zeta +
    A)^{-1}||``.  ``X(s)`` is formed as ``A (1 + sA)^{-1}``, the same operator
    without the O(eps/s) cancellation of ``1 - (1 + sA)^{-1}``.
    """
    A = as_mat(A, "A")
    s = float(s)
    if not s > 0:
        raise InputError("s must be > 0")
    X = A @ resolvent(s * A, 1.0)
    R0 = resolvent(A, zeta)
    direct = opnorm(resolvent(X, zeta) - R0)
    product = s * opnorm(A @ resolvent(A + zeta * s * A, zeta) @ A @ R0)
    return direct, product
