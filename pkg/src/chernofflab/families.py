"""Seeded generators for the operator classes the estimates quantify over.

Generation is a pure function of ``(kind, dim, seed, params)``.  Randomness
comes from numpy's PCG64 bit generator, seeded with the 64-bit ``seed``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .linalg import InputError, as_mat, load_mat, resolvent
from .regions import DEFAULT_N_ANGLES, SectorialCert, classify

RNG_ALGORITHM = "numpy.random.PCG64"

KINDS = (
    "random_contraction",
    "selfadjoint_contraction",
    "msectorial",
    "resolvent_quasisectorial",
    "scalar_unitary_probe",
    "jordan_block",
    "diagonal_file",
)

_PARAMS = {
    "random_contraction": {"scale"},
    "selfadjoint_contraction": {"spectrum", "min_gap"},
    "msectorial": {"alpha", "r_max"},
    "resolvent_quasisectorial": {"alpha", "r_max", "t"},
    "scalar_unitary_probe": {"theta"},
    "jordan_block": set(),
    "diagonal_file": {"path", "diag_re", "diag_im"},
}


class GenerationError(RuntimeError):
    """A generated operator failed its own classification certificate."""


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    dim: int = 2
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown family kind {self.kind!r}")
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise InputError(f"dim must be a positive integer, got {self.dim!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        unknown = set(self.params) - _PARAMS[self.kind]
        if unknown:
            raise InputError(f"{self.kind}: unknown params {sorted(unknown)}")

    @classmethod
    def from_dict(cls, obj: dict) -> "FamilySpec":
        unknown = set(obj) - {"kind", "dim", "seed", "params"}
        if unknown:
            raise InputError(f"unknown FamilySpec keys {sorted(unknown)}")
        if "kind" not in obj:
            raise InputError("FamilySpec needs 'kind'")
        return cls(
            kind=obj["kind"],
            dim=obj.get("dim", 2),
            seed=obj.get("seed", 0),
            params=dict(obj.get("params", {})),
        )

    def to_dict(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "seed": self.seed, "params": dict(self.params)}

    def with_seed(self, seed: int) -> "FamilySpec":
        return FamilySpec(self.kind, self.dim, seed % 2**64, dict(self.params))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex normal entries, ``E|z|^2 = 1``."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    Z = complex_gaussian(rng, (dim, dim))
    Q, R = np.linalg.qr(Z)
    diag = np.diag(R)
    phases = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
    return Q * phases[None, :]


def _alpha(params: dict) -> float:
    alpha = float(params.get("alpha", math.pi / 4))
    if not 0.0 <= alpha < math.pi / 2:
        raise InputError(f"alpha must lie in [0, pi/2), got {alpha}")
    return alpha


def _random_contraction(spec, rng):
    d = spec.dim
    # singular values of G spread over roughly [0, 2 scale]; clipping leaves a mix
    scale = float(spec.params.get("scale", 1.5))
    G = scale * complex_gaussian(rng, (d, d)) / math.sqrt(d)
    U, s, Vh = np.linalg.svd(G)
    return (U * np.minimum(s, 1.0)[None, :]) @ Vh


def _selfadjoint_contraction(spec, rng):
    d = spec.dim
    U = haar_unitary(rng, d)
    spectrum = spec.params.get("spectrum", "uniform")
    if spectrum == "uniform":
        lam = rng.uniform(0.0, 1.0, d)
    elif spectrum == "log_gap":
        # 1 - lambda log-uniform on [min_gap, 1]: resolves every scale near 1
        min_gap = float(spec.params.get("min_gap", 1e-4))
        if not 0.0 < min_gap < 1.0:
            raise InputError(f"min_gap must lie in (0, 1), got {min_gap}")
        lam = 1.0 - min_gap ** rng.uniform(0.0, 1.0, d)
    else:
        raise InputError(f"unknown spectrum {spectrum!r}")
    C = (U * lam[None, :]) @ U.conj().T
    return 0.5 * (C + C.conj().T)


def _msectorial(spec, rng):
    d = spec.dim
    alpha = _alpha(spec.params)
    r_max = float(spec.params.get("r_max", 2.0))
    if not r_max > 0:
        raise InputError("r_max must be > 0")
    V = haar_unitary(rng, d)
    r = rng.uniform(0.0, r_max, d)
    phi = rng.uniform(-alpha, alpha, d)
    A = (V * (r * np.exp(1j * phi))[None, :]) @ V.conj().T
    if alpha == 0.0:
        A = 0.5 * (A + A.conj().T)
    return A


def _resolvent_quasisectorial(spec, rng):
    t = float(spec.params.get("t", 1.0))
    if not t >= 0:
        raise InputError("t must be >= 0")
    A = _msectorial(spec, rng)
    return resolvent(t * A, 1.0)


def _scalar_unitary_probe(spec, rng):
    if spec.dim != 1:
        raise InputError("scalar_unitary_probe has dim 1")
    theta = float(spec.params.get("theta", 1e-3))
    return np.array([[np.exp(1j * theta)]])


def _jordan_block(spec, rng):
    return np.eye(spec.dim, k=1, dtype=complex)


def _diagonal_file(spec, rng):
    p = spec.params
    if "path" in p:
        with open(p["path"]) as fh:
            obj = json.load(fh)
        if "dim" in obj:
            M = load_mat(p["path"])
        else:
            M = np.diag(_diag_entries(obj))
    else:
        M = np.diag(_diag_entries(p))
    if M.shape[0] != spec.dim:
        raise InputError(f"diagonal_file: dim {M.shape[0]} does not match spec dim {spec.dim}")
    return M


def _diag_entries(obj: dict) -> np.ndarray:
    if "diag_re" not in obj:
        raise InputError("diagonal entries need 'diag_re' (and optionally 'diag_im')")
    re = np.asarray(obj["diag_re"], dtype=float)
    im = np.asarray(obj.get("diag_im", np.zeros_like(re)), dtype=float)
    if re.ndim != 1 or re.shape != im.shape:
        raise InputError("'diag_re' and 'diag_im' must be equal-length lists")
    return re + 1j * im


_BUILDERS = {
    "random_contraction": _random_contraction,
    "selfadjoint_contraction": _selfadjoint_contraction,
    "msectorial": _msectorial,
    "resolvent_quasisectorial": _resolvent_quasisectorial,
    "scalar_unitary_probe": _scalar_unitary_probe,
    "jordan_block": _jordan_block,
    "diagonal_file": _diagonal_file,
}


def _certify(spec: FamilySpec, M: np.ndarray, n_angles: int) -> SectorialCert:
    kind = spec.kind
    region = "S_alpha" if kind == "msectorial" else "D_alpha"
    cert = classify(M, region=region, n_angles=n_angles)

    def fail(msg):
        raise GenerationError(f"{kind} (dim={spec.dim}, seed={spec.seed}): {msg}")

    if kind not in ("msectorial", "diagonal_file") and not cert.is_contraction:
        fail(f"not a contraction (slack {cert.contraction_slack:.3g})")
    angle = cert.semi_angle_min
    if kind == "selfadjoint_contraction" and not (isinstance(angle, float) and angle <= 1e-6):
        fail(f"self-adjoint contraction has semi-angle {angle}")
    if kind == "msectorial" and not (isinstance(angle, float) and angle <= _alpha(spec.params) + 1e-6):
        fail(f"numerical range leaves the sector (angle {angle})")
    if kind == "resolvent_quasisectorial" and not (
        isinstance(angle, float) and angle <= _alpha(spec.params) + 1e-3
    ):
        fail(f"resolvent is not quasi-sectorial at the construction angle (got {angle})")
    return cert


def make_operator(spec: FamilySpec, n_angles: int = DEFAULT_N_ANGLES) -> tuple[np.ndarray, SectorialCert]:
    """Build the operator described by ``spec`` and its certificate."""
    M = as_mat(_BUILDERS[spec.kind](spec, _rng(spec.seed)))
    return M, _certify(spec, M, n_angles)


def corpus(
    spec_list: Iterable[FamilySpec], count: int, n_angles: int = DEFAULT_N_ANGLES
) -> list[tuple[np.ndarray, SectorialCert]]:
    """``count`` operators per spec, from seeds ``seed, seed+1, ...``."""
    if int(count) != count or count < 1:
        raise InputError(f"count must be a positive integer, got {count!r}")
    out = []
    for spec in spec_list:
        for i in range(int(count)):
            out.append(make_operator(spec.with_seed(spec.seed + i), n_angles))
    return out


def generator_of(spec: FamilySpec) -> np.ndarray:
    """The m-sectorial generator behind a ``resolvent_quasisectorial`` spec."""
    if spec.kind not in ("msectorial", "resolvent_quasisectorial"):
        raise InputError(f"{spec.kind} has no generator")
    return as_mat(_msectorial(spec, _rng(spec.seed)))


__all__ = [
    "FamilySpec",
    "GenerationError",
    "KINDS",
    "RNG_ALGORITHM",
    "corpus",
    "generator_of",
    "haar_unitary",
    "make_operator",
]
