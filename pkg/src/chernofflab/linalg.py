"""Dense complex matrix kernel.

Every operator in the package is a square ``complex128`` numpy array.  The
helpers here validate inputs, and implement the handful of primitives the
rest of the package builds on: operator norm, matrix exponential, integer
powers, resolvents and extreme Hermitian eigenvalues.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

MAX_DIM = 512
RESOLVENT_COND_MAX = 1e12

# Taylor degree for the scaled exponential: 0.5**19 / 19! ~ 2e-23.
_EXPM_DEGREE = 18
_EXPM_SCALED_NORM = 0.5
_EXPM_MAX_SQUARINGS = 1024


class InputError(ValueError):
    """Invalid operator, vector or parameter."""


class ComputationError(ArithmeticError):
    """A numerical routine could not deliver its contracted accuracy."""


class SingularityError(ComputationError):
    """Shifted operator is singular or too ill-conditioned to invert."""

    def __init__(self, message: str, cond: float):
        super().__init__(message)
        self.cond = cond


def as_mat(M, name: str = "matrix") -> np.ndarray:
    """Validate ``M`` and return it as a square complex128 array."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"{name} must be square, got shape {A.shape}")
    if A.shape[0] < 1:
        raise InputError(f"{name} must have dim >= 1")
    if A.shape[0] > MAX_DIM:
        raise InputError(f"{name} dim {A.shape[0]} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} has non-finite entries")
    return A


def as_vec(x, dim: int | None = None, name: str = "vector") -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise InputError(f"{name} has dim {v.shape[0]}, operator has dim {dim}")
    if not np.all(np.isfinite(v)):
        raise InputError(f"{name} has non-finite entries")
    return v


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def _is_diagonal(A: np.ndarray) -> bool:
    return not np.any(A - np.diag(np.diag(A)))


def opnorm(M) -> float:
    """Largest singular value of ``M``."""
    A = as_mat(M)
    if _is_diagonal(A):
        return float(np.max(np.abs(np.diag(A))))
    return float(np.linalg.svd(A, compute_uv=False)[0])


def vecnorm(x) -> float:
    return float(np.linalg.norm(as_vec(x)))


def expm(M) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    The argument is scaled by ``2**-s`` so that its 1-norm is at most 0.5,
    the degree-18 Taylor polynomial is evaluated by Horner's rule and the
    result is squared ``s`` times.
    """
    A = as_mat(M)
    d = A.shape[0]
    norm1 = float(np.max(np.sum(np.abs(A), axis=0)))
    if norm1 == 0.0:
        return identity(d)
    s = max(0, math.ceil(math.log2(norm1 / _EXPM_SCALED_NORM)))
    if s > _EXPM_MAX_SQUARINGS:
        raise ComputationError(f"expm: norm {norm1:.3g} out of range for squaring")
    X = A / (2.0**s)
    E = identity(d)
    for k in range(_EXPM_DEGREE, 0, -1):
        E = identity(d) + (X @ E) / k
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            E = E @ E
    if not np.all(np.isfinite(E)):
        raise ComputationError(f"expm overflow for norm {norm1:.3g}")
    return E


def powm(M, n: int) -> np.ndarray:
    """``M**n`` by binary exponentiation; ``M**0`` is the identity."""
    A = as_mat(M)
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise InputError(f"power must be a nonnegative integer, got {n!r}")
    n = int(n)
    result = identity(A.shape[0])
    base = A
    first = True
    while n:
        if n & 1:
            result = base.copy() if first else result @ base
            first = False
        n >>= 1
        if n:
            base = base @ base
    return result


def resolvent(A, zeta: complex) -> np.ndarray:
    """``(zeta*I + A)^{-1}``, refusing ill-conditioned shifts."""
    A = as_mat(A)
    d = A.shape[0]
    S = zeta * identity(d) + A
    sv = np.linalg.svd(S, compute_uv=False)
    cond = math.inf if sv[-1] == 0.0 else float(sv[0] / sv[-1])
    if not cond <= RESOLVENT_COND_MAX:
        raise SingularityError(
            f"zeta*I + A is singular or ill-conditioned (cond={cond:.3g})", cond
        )
    R = np.linalg.solve(S, identity(d))
    residual = opnorm(S @ R - identity(d))
    if residual > 1e-10:
        raise SingularityError(f"resolvent residual {residual:.3g} exceeds 1e-10", cond)
    return R


def herm_eig_extremes(H) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a Hermitian matrix."""
    H = as_mat(H)
    skew = np.max(np.abs(H - H.conj().T)) if H.size else 0.0
    if skew > 1e-12 * (1.0 + np.max(np.abs(H))):
        raise InputError(f"matrix is not Hermitian (max skew {skew:.3g})")
    w = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
    return float(w[0]), float(w[-1])


def fingerprint(M) -> str:
    """Dimension plus a hash of the entries rounded to 1e-12."""
    A = as_mat(M)
    rounded = np.round(np.stack([A.real, A.imag]), 12) + 0.0
    digest = hashlib.sha256(np.ascontiguousarray(rounded).tobytes()).hexdigest()
    return f"d{A.shape[0]}-{digest[:16]}"


# -- matrix literal files ---------------------------------------------------


def mat_to_json(M) -> dict:
    A = as_mat(M)
    return {
        "dim": int(A.shape[0]),
        "re": A.real.tolist(),
        "im": A.imag.tolist(),
    }


def _rows(name: str, rows, dim: int) -> list[list[float]]:
    if not isinstance(rows, list) or len(rows) != dim:
        raise InputError(f"'{name}' must be a list of {dim} rows")
    for r in rows:
        if not isinstance(r, list) or len(r) != dim:
            raise InputError(f"'{name}' is ragged or has the wrong row length")
        for v in r:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InputError(f"'{name}' has a non-numeric entry {v!r}")
    return rows


def mat_from_json(obj: dict) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InputError("matrix literal must be a JSON object")
    unknown = set(obj) - {"dim", "re", "im"}
    if unknown:
        raise InputError(f"unknown matrix keys: {sorted(unknown)}")
    dim = obj.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputError("'dim' must be a positive integer")
    re = np.array(_rows("re", obj.get("re"), dim), dtype=float)
    im_rows = obj.get("im")
    im = np.zeros_like(re) if im_rows is None else np.array(_rows("im", im_rows, dim), dtype=float)
    return as_mat(re + 1j * im)


def dumps_mat(M) -> str:
    return json.dumps(mat_to_json(M), sort_keys=True)


def load_mat(path) -> np.ndarray:
    with open(Path(path)) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from None
    return mat_from_json(obj)
