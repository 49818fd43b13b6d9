"""Command-line front end.

    lresonance <subcommand> [--config PATH] [--X N[,N...]] [--theta Q]
               [--window LO:HI] [--out PATH] [--format csv|json] [--threads K]

Subcommands: constants, lvalues, resonate, scan, poisson, identities.  A
config file holds ``key = value`` lines (``#`` starts a comment); flags
override it.  Exit status is 0 when every in-run check passed, 1 when one
failed and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction

from . import __version__
from .arith import build_mult_tables
from .errors import LabError
from .identities import (
    label_character,
    phi_mellin_zero,
    poisson_check,
    smoothed_prime_sum,
    triple_sum_check,
    vaughan_max_residual,
)
from .kernels import AFE_FACTOR_AT_ZERO, RESIDUE, VKernel, v_kernel
from .lcentral import AfeParams, afe_params, batch_l_values
from .moments import moment_report, predicted_growth
from .resonator import ResonatorParams, enumerate_support
from .specfun import digamma

COMMANDS = ("constants", "lvalues", "resonate", "scan", "poisson", "identities")
SCHEMA_VERSION = 1
C0_REFERENCE = -0.102544468575064


class UsageError(LabError, ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on.  ``log2_y_max = None`` picks the
    truncation from the family size."""

    command: str
    X: tuple[int, ...] = (10_000,)
    theta: float = 1.0 / 19.0
    window: tuple[float, float] | None = None
    strict: bool = False
    log2_y_max: int | None = None
    u: float = 0.5
    h: float = 1.0 / 128.0
    n: tuple[int, ...] = (1, 3, 9, 15)
    vaughan_n: int = 100_000
    out: str | None = None
    format: str = "json"
    threads: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown subcommand {self.command!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")
        if self.threads < 1:
            raise UsageError(f"threads must be >= 1, got {self.threads}")
        if not self.X:
            raise UsageError("X needs at least one value")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["X"] = list(self.X)
        out["n"] = list(self.n)
        out["window"] = None if self.window is None else list(self.window)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        for key in ("X", "n"):
            if key in data:
                data[key] = tuple(int(v) for v in data[key])
        if data.get("window") is not None:
            data["window"] = tuple(float(v) for v in data["window"])
        return cls(**data)

    def afe(self, X: int) -> AfeParams:
        base = AfeParams.for_scale(X) if self.log2_y_max is None else afe_params(self.log2_y_max)
        if (self.u, self.h) != (0.5, 1.0 / 128.0):
            base = replace(base, kernel=VKernel(u=self.u, h=self.h))
        return base

    def resonator_params(self, X: int) -> ResonatorParams:
        return ResonatorParams(X, self.theta, window=self.window, strict=self.strict)


def _parse_theta(text: str) -> float:
    return float(Fraction(text.strip()))


def _parse_window(text: str) -> tuple[float, float] | None:
    text = text.strip()
    if text.lower() in ("", "none", "default"):
        return None
    lo, sep, hi = text.partition(":")
    if not sep:
        raise UsageError(f"window must look like LO:HI, got {text!r}")
    return float(lo), float(hi)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(float(v)) for v in text.split(",") if v.strip())


def _parse_optional_int(text: str) -> int | None:
    return None if text.strip().lower() in ("", "none", "auto") else int(text)


_PARSERS = {
    "command": str.strip,
    "X": _parse_ints,
    "theta": _parse_theta,
    "window": _parse_window,
    "strict": _parse_bool,
    "log2_y_max": _parse_optional_int,
    "u": float,
    "h": lambda t: float(Fraction(t.strip())),
    "n": _parse_ints,
    "vaughan_n": lambda t: int(float(t)),
    "out": lambda t: t.strip() or None,
    "format": lambda t: t.strip().lower(),
    "threads": int,
}


def parse_config_text(text: str) -> dict:
    """``key = value`` lines to typed values; unknown keys are rejected."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise UsageError(f"config line {lineno}: expected key = value")
        if key not in _PARSERS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = _PARSERS[key](value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"config line {lineno}: bad value for {key}: {exc}") from exc
    return out


def _check(name: str, value: float, reference: float, tol: float) -> dict:
    err = abs(value - reference)
    return {"check": name, "value": value, "reference": reference,
            "error": err, "tolerance": tol, "passed": bool(err < tol)}


def run_constants(cfg: RunConfig) -> dict:
    kernel = VKernel(u=cfg.u, h=cfg.h)
    rows = [
        _check("c0_closed_form", RESIDUE.c0_printed, C0_REFERENCE, 1e-12),
        _check("half_psi_quarter", 0.5 * digamma(0.25), -1691.0 / 800.0, 1e-4),
        _check("phi_mellin_zero", phi_mellin_zero(), 5.0 / 6.0, 1e-10),
        _check("v_small_y", v_kernel(1e-4, kernel), AFE_FACTOR_AT_ZERO, 1e-2),
    ]
    info = {"c0_residue": RESIDUE.c0, "c0_offset": RESIDUE.c0_printed - RESIDUE.c0}
    return {"rows": rows, "info": info, "passed": all(r["passed"] for r in rows)}


def run_lvalues(cfg: RunConfig) -> dict:
    rows = []
    for X in cfg.X:
        for rec in batch_l_values(X, cfg.afe(X), threads=cfg.threads):
            rows.append({"X": X, "p": rec.p, "value": rec.value,
                         "method": rec.method, "terms": rec.terms})
    return {"rows": rows, "passed": all(math.isfinite(r["value"]) for r in rows)}


def run_resonate(cfg: RunConfig) -> dict:
    X = cfg.X[0]
    res = enumerate_support(cfg.resonator_params(X))
    rows = [{"m": int(m), "b": float(b)} for m, b in zip(res.support, res.coeffs)]
    info = {"M": res.params.M, "L": res.params.scale_L,
            "window": list(res.params.effective_window),
            "overridden": res.params.overridden, "degenerate": res.degenerate,
            "support_size": len(res)}
    return {"rows": rows, "info": info, "passed": True}


def run_scan(cfg: RunConfig) -> dict:
    rows = []
    for X in cfg.X:
        lv = batch_l_values(X, cfg.afe(X), threads=cfg.threads)
        res = enumerate_support(cfg.resonator_params(X))
        rep = moment_report(res, lv, X, threads=cfg.threads)
        row = rep.as_dict()
        row["predicted"] = predicted_growth(X, cfg.theta)
        row["log2_y_max"] = cfg.afe(X).log2_y_max
        row["passed"] = bool(rep.ratio <= rep.scan_max and rep.m1_total > 0)
        rows.append(row)
    return {"rows": rows, "passed": all(r["passed"] for r in rows)}


def run_poisson(cfg: RunConfig) -> dict:
    rows = []
    for n in cfg.n:
        for X in cfg.X:
            c = poisson_check(n, X)
            rows.append({"n": n, "X": X, "lhs": c.lhs, "main_term": c.main_term,
                         "residual": c.residual,
                         "normalized_residual": c.normalized_residual})
    return {"rows": rows, "passed": all(math.isfinite(r["lhs"]) for r in rows)}


def run_identities(cfg: RunConfig) -> dict:
    X = cfg.X[0]
    N = max(cfg.vaughan_n, 2 * X)
    tables = build_mult_tables(N)
    rows = []
    r_cube = vaughan_max_residual(cfg.vaughan_n, tables)
    r_fixed = vaughan_max_residual(cfg.vaughan_n, tables, V=20)
    rows.append({"check": "vaughan_cube_root_V", "value": r_cube, "bound": 1e-9,
                 "passed": r_cube < 1e-9})
    rows.append({"check": "vaughan_V20", "value": r_fixed, "bound": 1e-9,
                 "passed": r_fixed < 1e-9})
    res = enumerate_support(cfg.resonator_params(X))
    if not res.degenerate:
        t = triple_sum_check(res, alpha=None if res.params.scale_L > math.e else 0.5)
        rows.append({"check": "triple_sum_tail", "value": t.tail, "bound": t.rankin_bound,
                     "passed": bool(-1e-12 * t.extended <= t.tail <= t.rankin_bound)})
    principal = smoothed_prime_sum(None, X, 0.0, tables).real
    chi = label_character(2, 3)
    twisted = abs(smoothed_prime_sum(chi, X, 0.0, tables))
    rows.append({"check": "principal_prime_sum_over_X", "value": principal / X,
                 "bound": 5.0 / 6.0, "passed": abs(principal / X - 5.0 / 6.0) < 0.05 * 5.0 / 6.0})
    rows.append({"check": "twisted_prime_sum_ratio", "value": twisted / principal,
                 "bound": 0.1, "passed": twisted / principal < 0.1})
    return {"rows": rows, "passed": all(r["passed"] for r in rows)}


_RUNNERS = {
    "constants": run_constants,
    "lvalues": run_lvalues,
    "resonate": run_resonate,
    "scan": run_scan,
    "poisson": run_poisson,
    "identities": run_identities,
}


def _finite(obj):
    """Strict JSON: non-finite floats (an empty window, an undefined L)
    become null."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


@dataclass
class Report:
    config: RunConfig
    payload: dict
    version: str = field(default=f"{__version__}+schema{SCHEMA_VERSION}")
    elapsed_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.payload.get("passed", True))

    def to_json(self) -> str:
        doc = {"config": self.config.to_dict(), "payload": _finite(self.payload),
               "version": self.version, "elapsed_seconds": self.elapsed_seconds}
        return json.dumps(doc, indent=2, allow_nan=False)

    def to_csv(self) -> str:
        rows = self.payload.get("rows", [])
        buf = io.StringIO()
        if rows:
            cols = list(rows[0])
            writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: json.dumps(v) if isinstance(v, list) else v
                                 for k, v in r.items()})
        return buf.getvalue()

    def render(self) -> str:
        return self.to_json() if self.config.format == "json" else self.to_csv()


def run(cfg: RunConfig) -> Report:
    """Execute one subcommand and write its report when ``cfg.out`` is set."""
    t0 = time.perf_counter()
    payload = _RUNNERS[cfg.command](cfg)
    report = Report(cfg, payload, elapsed_seconds=time.perf_counter() - t0)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(report.render())
    return report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lresonance", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config")
    ap.add_argument("--X")
    ap.add_argument("--theta")
    ap.add_argument("--window")
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--threads", type=int)
    return ap


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    for key in ("X", "theta", "window", "out", "format"):
        raw = getattr(args, key)
        if raw is not None:
            values[key] = _PARSERS[key](raw)
    if args.threads is not None:
        values["threads"] = args.threads
    values["command"] = args.command
    return RunConfig(**values)


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except (UsageError, ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run(cfg)
    except LabError as exc:
        print(f"{type(exc).__name__} during {cfg.command}: {exc}", file=sys.stderr)
        return 1
    if not cfg.out:
        sys.stdout.write(report.render())
        if not report.render().endswith("\n"):
            sys.stdout.write("\n")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
