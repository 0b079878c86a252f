"""Command-line front end.

    chernofflab <command> --config run.json [--out DIR] [--svg] [--strict] [--seed N]

Exit status: 0 success, 1 an asserted bound was violated under ``--strict``,
2 invalid config or input (a JSON error object is written to stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from . import __version__
from ._core import BACKEND
from .approximants import resolvent_defect
from .defects import (
    ASSERTED_BOUNDS,
    OUT_OF_REGIME,
    VIOLATED,
    audit_bound,
    bound_lemma2,
    bound_sqrt_n,
    chernoff_defect_vec,
    min_margin,
    ritt_constant,
    verdict_for,
)
from .families import RNG_ALGORITHM, FamilySpec, make_operator
from .linalg import ComputationError, InputError, fingerprint, load_mat, mat_from_json
from .poisson import tail_claim_audit
from .rates import DYADIC_GRID, read_points_csv, report_from_points, sweep
from .regions import classify, numerical_range_boundary
from .report import canonical_json, config_hash, loglog_svg, rows_to_csv, write_atomic

COMMANDS = ("poisson", "defect", "trotter", "euler", "resolvent", "numrange", "fit", "probe")


class _Config(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


OperatorRef = dict[str, Any]


def resolve_operator(ref: OperatorRef, base: Path) -> np.ndarray:
    """An operator given as a FamilySpec, ``{"file": path}`` or a matrix literal."""
    if not isinstance(ref, dict):
        raise InputError("operator must be a JSON object")
    if "kind" in ref:
        return make_operator(FamilySpec.from_dict(ref))[0]
    if "file" in ref:
        if set(ref) != {"file"}:
            raise InputError(f"unknown operator keys {sorted(set(ref) - {'file'})}")
        path = Path(ref["file"])
        return load_mat(path if path.is_absolute() else base / path)
    if "dim" in ref:
        return mat_from_json(ref)
    raise InputError("operator needs 'kind', 'file' or a matrix literal ('dim', 're', 'im')")


def _grid(v: list[int]) -> list[int]:
    if not v:
        raise ValueError("grid must be nonempty")
    if any(n < 1 for n in v) or any(b <= a for a, b in zip(v, v[1:])):
        raise ValueError("grid must be strictly increasing positive integers")
    return v


class PoissonConfig(_Config):
    n: list[int] = Field(default_factory=lambda: [1, 10, 100, 1000, 10000])
    delta: list[float] = Field(default_factory=lambda: [1 / 6])

    _g = field_validator("n")(_grid)


class CorpusConfig(_Config):
    specs: list[dict[str, Any]]
    count: int = Field(1, ge=1)


class DefectConfig(_Config):
    operators: list[OperatorRef] = Field(default_factory=list)
    corpus: Optional[CorpusConfig] = None
    vectors: int = Field(0, ge=0, description="random vectors per operator; 0 audits in operator norm")
    n_grid: list[int] = Field(default_factory=lambda: list(range(1, 65)))
    delta: list[float] = Field(default_factory=lambda: [1 / 6])
    bounds: list[Literal["sqrt_n", "lemma2", "thm22", "quasi_sectorial"]] = Field(
        default_factory=lambda: ["sqrt_n", "thm22"]
    )
    N_max: int = Field(512, ge=16)
    seed: int = Field(0, ge=0, lt=2**64)

    _g = field_validator("n_grid")(_grid)


class TrotterConfig(_Config):
    A: OperatorRef = Field(default_factory=lambda: {"dim": 2, "re": [[1, 0], [0, 0]]})
    B: OperatorRef = Field(default_factory=lambda: {"dim": 2, "re": [[0.5, 0.5], [0.5, 0.5]]})
    t: float = 1.0
    reverse: bool = False
    n_grid: list[int] = Field(default_factory=lambda: list(DYADIC_GRID))

    _g = field_validator("n_grid")(_grid)


class EulerConfig(_Config):
    A: OperatorRef = Field(default_factory=lambda: {"dim": 1, "re": [[1]]})
    t: float = 1.0
    n_grid: list[int] = Field(default_factory=lambda: list(DYADIC_GRID))

    _g = field_validator("n_grid")(_grid)


class ResolventConfig(_Config):
    A: OperatorRef = Field(default_factory=lambda: {"dim": 1, "re": [[1]]})
    zeta_re: float = 1.0
    zeta_im: float = 0.0
    n_grid: list[int] = Field(default_factory=lambda: [10**k for k in range(1, 7)])

    _g = field_validator("n_grid")(_grid)


class NumrangeConfig(_Config):
    operator: OperatorRef
    n_angles: int = Field(256, ge=64)
    region: Literal["D_alpha", "S_alpha"] = "D_alpha"


class FitConfig(_Config):
    input: str


class ProbeConfig(_Config):
    theta: list[float] = Field(default_factory=lambda: [1e-3])
    n: list[int] = Field(default_factory=lambda: [10**6])
    delta: float = -1 / 6


_SCHEMAS: dict[str, type[_Config]] = {
    "poisson": PoissonConfig,
    "defect": DefectConfig,
    "trotter": TrotterConfig,
    "euler": EulerConfig,
    "resolvent": ResolventConfig,
    "numrange": NumrangeConfig,
    "fit": FitConfig,
    "probe": ProbeConfig,
}


class Run:
    """Per-invocation context: output directory, hashes and flags."""

    def __init__(self, command: str, cfg: _Config, raw: dict, out: Path, base: Path, svg: bool):
        self.command = command
        self.cfg = cfg
        self.out = out
        self.base = base
        self.svg = svg
        self.hash = config_hash({"command": command, "config": raw})
        self.violations = 0
        self.files: list[str] = []

    def write(self, suffix: str, text: str) -> None:
        path = write_atomic(self.out / f"{self.command}.{suffix}", text)
        self.files.append(path.name)

    def summary(self, body: dict) -> None:
        body = {
            "command": self.command,
            "config_hash": self.hash,
            "backend": BACKEND,
            "rng": RNG_ALGORITHM,
            **body,
        }
        self.write("json", canonical_json(body))


# -- commands -----------------------------------------------------------------


def cmd_poisson(run: Run) -> None:
    cfg: PoissonConfig = run.cfg
    rows = []
    for n in cfg.n:
        for delta in cfg.delta:
            ta = tail_claim_audit(n, delta)
            sp = ta.split
            rows.append(
                {
                    "n": n,
                    "delta": delta,
                    "epsilon": sp.epsilon_n,
                    "central_abs": sp.central_abs,
                    "tail_abs": sp.tail_abs,
                    "tail_prob": sp.tail_prob,
                    "claim_rhs": ta.claim.rhs,
                    "verdict": ta.claim.verdict,
                    "rigorous_verdict": ta.rigorous.verdict,
                    "var_sum": sp.var_sum,
                    "abs_moment": sp.abs_moment,
                    "sqrt_n": math.sqrt(n),
                    "fingerprint": "poisson",
                    "config_hash": run.hash,
                }
            )
    cols = list(rows[0])
    run.write("csv", rows_to_csv(cols, rows))
    run.summary(
        {
            "rows": len(rows),
            "tail_claim_violations": sum(r["verdict"] == VIOLATED for r in rows),
            "max_var_sum_rel_err": max(abs(r["var_sum"] / r["n"] - 1.0) for r in rows),
        }
    )
    if run.svg:
        series = []
        for delta in cfg.delta:
            sel = [r for r in rows if r["delta"] == delta]
            ns = [r["n"] for r in sel]
            series.append((f"tail d={delta:.3g}", ns, [r["tail_abs"] for r in sel], False))
            series.append((f"n^-2d d={delta:.3g}", ns, [r["claim_rhs"] for r in sel], True))
        run.write("svg", loglog_svg(series, title="Poisson tail vs claimed bound", ylabel="tail sum"))


def _defect_operators(run: Run) -> list[np.ndarray]:
    cfg: DefectConfig = run.cfg
    ops = [resolve_operator(ref, run.base) for ref in cfg.operators]
    if cfg.corpus:
        for raw in cfg.corpus.specs:
            spec = FamilySpec.from_dict(raw)
            for i in range(cfg.corpus.count):
                ops.append(make_operator(spec.with_seed(spec.seed + i))[0])
    if not ops:
        raise InputError("defect needs 'operators' or 'corpus'")
    return ops


def cmd_defect(run: Run) -> None:
    cfg: DefectConfig = run.cfg
    if "quasi_sectorial" in cfg.bounds and cfg.vectors:
        raise InputError("quasi_sectorial is an operator-norm bound; set vectors to 0")
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    rows, per_bound, ritts = [], {}, []
    series = []
    for C in _defect_operators(run):
        d = C.shape[0]
        probes: list = ["norm"]
        if cfg.vectors:
            probes = [rng.standard_normal(d) + 1j * rng.standard_normal(d) for _ in range(cfg.vectors)]
        ritt = ritt_constant(C, cfg.N_max) if "quasi_sectorial" in cfg.bounds else None
        if ritt is not None:
            ritts.append({"fingerprint": fingerprint(C), "K_hat": ritt.K_hat, "N_max": ritt.N_max,
                          "argmax_n": ritt.argmax_n, "at_horizon": ritt.at_horizon})
        for bound_id in cfg.bounds:
            deltas = [0.0] if bound_id == "sqrt_n" else cfg.delta
            for delta in deltas:
                for k, x in enumerate(probes):
                    audits = audit_bound(C, x, cfg.n_grid, delta, bound_id, ritt)
                    for a in audits:
                        row = a.row()
                        row.update(vector=k if cfg.vectors else "norm", config_hash=run.hash)
                        rows.append(row)
                    stats = per_bound.setdefault(
                        bound_id, {"audits": 0, "violations": 0, "out_of_regime": 0, "min_margin": math.inf}
                    )
                    stats["audits"] += len(audits)
                    stats["violations"] += sum(a.verdict == VIOLATED for a in audits)
                    stats["out_of_regime"] += sum(a.verdict == OUT_OF_REGIME for a in audits)
                    stats["min_margin"] = min(stats["min_margin"], min_margin(audits))
                    if run.svg and len(series) < 6 and k == 0:
                        ns = [a.context["n"] for a in audits]
                        lbl = f"{bound_id} d={delta:.3g}"
                        if not series:
                            series.append(("defect", ns, [a.lhs for a in audits], False))
                        series.append((lbl, ns, [a.rhs for a in audits], True))
    cols = ["bound_id", "n", "delta", "lhs", "rhs", "margin", "verdict", "fingerprint", "vector", "config_hash"]
    run.write("csv", rows_to_csv(cols, rows))
    for bid, stats in per_bound.items():
        if bid in ASSERTED_BOUNDS:
            run.violations += stats["violations"]
        if stats["min_margin"] == math.inf:
            stats["min_margin"] = None
    body = {"bounds": per_bound, "rows": len(rows)}
    if ritts:
        body["ritt"] = ritts
    run.summary(body)
    if run.svg:
        run.write("svg", loglog_svg(series, title="Chernoff defect vs bounds"))


def _rate_outputs(run: Run, report, fp: str, extra_summary: dict | None = None) -> None:
    run.write("csv", report.to_csv({"fingerprint": fp, "config_hash": run.hash}))
    body = report.to_dict()
    body.update(fingerprint=fp, **(extra_summary or {}))
    run.summary(body)
    if run.svg:
        ns = [n for n, _ in report.points]
        series = [(f"{report.kind} defect", ns, [v for _, v in report.points], False)]
        if report.fitted:
            p, c = report.fit_exponent, report.fit_prefactor
            series.append((f"fit {c:.3g} n^-{p:.3f}", ns, [c * n**-p for n in ns], True))
        run.write("svg", loglog_svg(series, title=f"{report.kind} defect"))


def cmd_trotter(run: Run) -> None:
    cfg: TrotterConfig = run.cfg
    A = resolve_operator(cfg.A, run.base)
    B = resolve_operator(cfg.B, run.base)
    rep = sweep("trotter", {"A": A, "B": B, "t": cfg.t, "reverse": cfg.reverse}, cfg.n_grid)
    _rate_outputs(run, rep, f"{fingerprint(A)}+{fingerprint(B)}")


def cmd_euler(run: Run) -> None:
    cfg: EulerConfig = run.cfg
    A = resolve_operator(cfg.A, run.base)
    rep = sweep("euler", {"A": A, "t": cfg.t}, cfg.n_grid)
    _rate_outputs(run, rep, fingerprint(A))


def cmd_resolvent(run: Run) -> None:
    cfg: ResolventConfig = run.cfg
    A = resolve_operator(cfg.A, run.base)
    zeta = complex(cfg.zeta_re, cfg.zeta_im)
    rep = sweep("resolvent_s", {"A": A, "zeta": zeta}, cfg.n_grid)
    agreement = []
    for n in cfg.n_grid:
        direct, product = resolvent_defect(A, 1.0 / n, zeta)
        agreement.append(abs(direct - product) / max(direct, product, 1e-300))
    _rate_outputs(run, rep, fingerprint(A), {"max_route_rel_diff": max(agreement)})


def cmd_numrange(run: Run) -> None:
    cfg: NumrangeConfig = run.cfg
    M = resolve_operator(cfg.operator, run.base)
    b = numerical_range_boundary(M, cfg.n_angles)
    run.write("csv", b.to_csv({"fingerprint": fingerprint(M), "config_hash": run.hash}))
    cert = classify(M, region=cfg.region, n_angles=cfg.n_angles)
    run.summary({"fingerprint": fingerprint(M), "certificate": cert.to_dict()})


def cmd_fit(run: Run) -> None:
    cfg: FitConfig = run.cfg
    path = Path(cfg.input)
    path = path if path.is_absolute() else run.base / path
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    rep = report_from_points(read_points_csv(text), kind="external")
    _rate_outputs(run, rep, "external")


def cmd_probe(run: Run) -> None:
    cfg: ProbeConfig = run.cfg
    rows, results = [], []
    for theta in cfg.theta:
        C = make_operator(FamilySpec("scalar_unitary_probe", 1, 0, {"theta": theta}))[0]
        fp = fingerprint(C)
        for n in cfg.n:
            lhs, drive = chernoff_defect_vec(C, [1.0], n)
            ratio = lhs / drive
            sq = bound_sqrt_n(n, 1.0)
            l2 = bound_lemma2(n, cfg.delta, 1.0)
            entry = {
                "theta": theta,
                "n": n,
                "delta": cfg.delta,
                "lhs": lhs,
                "drive": drive,
                "ratio": ratio,
                "sqrt_n": {"rhs_over_drive": sq, "verdict": verdict_for(ratio, sq)},
                "lemma2": {"rhs_over_drive": l2, "verdict": verdict_for(ratio, l2)},
                "fingerprint": fp,
            }
            results.append(entry)
            for bid in ("sqrt_n", "lemma2"):
                rhs = entry[bid]["rhs_over_drive"] * drive
                rows.append(
                    {
                        "bound_id": bid,
                        "n": n,
                        "delta": 0.0 if bid == "sqrt_n" else cfg.delta,
                        "lhs": lhs,
                        "rhs": rhs,
                        "margin": rhs - lhs,
                        "verdict": entry[bid]["verdict"],
                        "fingerprint": fp,
                        "config_hash": run.hash,
                    }
                )
            if entry["sqrt_n"]["verdict"] == VIOLATED:
                run.violations += 1
    cols = ["bound_id", "n", "delta", "lhs", "rhs", "margin", "verdict", "fingerprint", "config_hash"]
    run.write("csv", rows_to_csv(cols, rows))
    run.summary({"probes": results})


_HANDLERS: dict[str, Callable[[Run], None]] = {
    "poisson": cmd_poisson,
    "defect": cmd_defect,
    "trotter": cmd_trotter,
    "euler": cmd_euler,
    "resolvent": cmd_resolvent,
    "numrange": cmd_numrange,
    "fit": cmd_fit,
    "probe": cmd_probe,
}


def _error(kind: str, message: str, code: int = 2) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chernofflab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="JSON config file (defaults apply when omitted)")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--svg", action="store_true", help="also write a log-log SVG plot")
    p.add_argument("--strict", action="store_true", help="exit 1 on any asserted-bound violation")
    p.add_argument("--seed", type=int, help="override the config seed (unsigned 64-bit)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    raw: dict = {}
    base = Path(".")
    if args.config is not None:
        base = args.config.parent
        try:
            raw = json.loads(args.config.read_text())
        except OSError as exc:
            return _error("InputError", f"cannot read config: {exc.strerror}")
        except json.JSONDecodeError as exc:
            return _error("InputError", f"config is not valid JSON: {exc}")
        if not isinstance(raw, dict):
            return _error("InputError", "config must be a JSON object")
    if args.seed is not None:
        if args.command != "defect":
            return _error("InputError", f"--seed applies to 'defect' only, not {args.command!r}")
        if not 0 <= args.seed < 2**64:
            return _error("InputError", "--seed must be an unsigned 64-bit integer")
        raw = {**raw, "seed": args.seed}
    try:
        cfg = _SCHEMAS[args.command].model_validate(raw)
    except ValidationError as exc:
        return _error("ConfigError", exc.json(include_url=False, include_input=False))
    run = Run(args.command, cfg, raw, args.out, base, args.svg)
    try:
        _HANDLERS[args.command](run)
    except (InputError, ValueError) as exc:
        return _error(type(exc).__name__, str(exc))
    except (ComputationError, ArithmeticError, RuntimeError) as exc:
        return _error(type(exc).__name__, str(exc))
    if args.strict and run.violations:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
