"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 hard disagreement between a
condition that holds and an identity that fails.  Structured results are
JSON; orbit dumps are CSV ``n,x,y,band``.  ``FLOORLAB_WORKERS`` overrides the
worker count.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from floorlab import __version__
from floorlab.exact_numbers import (
    FieldElement,
    IntPolynomial,
    MOutOfRange,
    construct_characteristic_alpha,
    isolate_positive_roots,
    parse_algebraic,
    power_in_field,
    refine,
    sign_of,
)
from floorlab.figures import FIGURES, UnknownFigure, emit_figure
from floorlab.identity_engine import (
    DEFAULT_VIOLATION_CAP,
    IdentityCase,
    Variant,
    check_identity,
    classify,
    condition_verdict,
    first_violation,
    scan_identity,
)
from floorlab.oracle import DecimalEvaluator
from floorlab.torus_lab import (
    Linear,
    Polynomial,
    dump_csv,
    empirical_distribution,
    identity_region,
    orbit_dump,
    weyl_sum,
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration and results


@dataclass
class CampaignConfig:
    variant: str = "main"
    alpha: Optional[str] = None
    beta: Optional[str] = None
    l: int = 1
    k: int = 1
    m: int = 1
    delta: Optional[str] = None
    poly: Optional[str] = None
    n: Optional[int] = None
    n_lo: Optional[int] = None
    n_hi: Optional[int] = None
    N: Optional[int] = None
    out: Optional[str] = None
    workers: Optional[int] = None
    cap: int = DEFAULT_VIOLATION_CAP

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def validate(self) -> IdentityCase:
        try:
            variant = Variant(self.variant)
        except ValueError:
            raise UsageError(f"variant: unknown variant {self.variant!r}") from None
        if self.alpha is None:
            raise UsageError("alpha: required")
        for name in ("l", "k", "m"):
            if int(getattr(self, name)) < 1:
                raise UsageError(f"{name}: must be a positive integer")
        if self.cap < 1:
            raise UsageError("cap: must be positive")
        alpha = _parse_number("alpha", self.alpha)
        kw: dict[str, Any] = dict(l=int(self.l), k=int(self.k), m=int(self.m))
        if variant is Variant.DELTA:
            if self.delta is None:
                raise UsageError("delta: required for the delta variant")
            try:
                kw["delta"] = Fraction(self.delta)
            except ValueError:
                raise UsageError(f"delta: not a rational number: {self.delta!r}") from None
        if variant is Variant.POLY:
            if not self.poly:
                raise UsageError("poly: required for the poly variant")
            try:
                kw["poly"] = IntPolynomial(int(c) for c in self.poly.split(","))
            except ValueError:
                raise UsageError(f"poly: expected comma-separated integers, got {self.poly!r}") from None
        if variant is Variant.PAIR:
            if self.beta is None:
                raise UsageError("beta: required for the pair variant")
            kw["beta"] = _parse_number("beta", self.beta)
        if variant in (Variant.Z1, Variant.Z2, Variant.TRIPLE):
            kw = {}
        elif variant is Variant.PAIR:
            kw = {"m": kw["m"], "beta": kw["beta"]}
        try:
            return IdentityCase(variant, alpha, **kw)
        except ValueError as exc:
            raise UsageError(f"{self.variant}: {exc}") from None


def _parse_number(name: str, text: str):
    try:
        return parse_algebraic(text)
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(f"{name}: {exc}") from None


TIMING_FIELDS = ("timing",)


@dataclass
class RunResult:
    command: str
    config: dict
    verdicts: dict
    violations: list = field(default_factory=list)
    condition: Optional[dict] = None
    timing: dict = field(default_factory=dict)
    tool_version: str = __version__
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunResult":
        return cls(**json.loads(text))

    def without_timing(self) -> dict:
        d = self.to_dict()
        for k in TIMING_FIELDS:
            d.pop(k, None)
        return d


def _report_dict(r) -> dict:
    return {"n": r.n, "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual}


def _emit(result: RunResult, out: Optional[str], stream) -> None:
    text = result.to_json()
    if out:
        Path(out).write_text(text)
    stream.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _config_from_args(args) -> CampaignConfig:
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"config: {exc}") from None
        return CampaignConfig.from_dict(data)
    return CampaignConfig(
        variant=args.variant,
        alpha=args.alpha,
        beta=args.beta,
        l=args.l,
        k=args.k,
        m=args.m,
        delta=args.delta,
        poly=args.poly,
        n=getattr(args, "n", None),
        n_lo=getattr(args, "n_lo", None),
        n_hi=getattr(args, "n_hi", None),
        out=args.out,
        workers=args.workers,
        cap=args.cap,
    )


def cmd_verify(args, stream=sys.stdout) -> int:
    cfg = _config_from_args(args)
    case = cfg.validate()
    if cfg.n is None or cfg.n < 1:
        raise UsageError("n: a positive scan bound is required")
    t0 = time.perf_counter()
    cond, rep, note = condition_verdict(case)
    scan = scan_identity(case, -cfg.n, cfg.n, cap=cfg.cap, workers=cfg.workers)
    status = classify(cond, scan.holds)
    elapsed = time.perf_counter() - t0
    result = RunResult(
        command="verify",
        config=cfg.to_dict(),
        verdicts={
            "case": case.describe(),
            "condition": cond,
            "identity_holds": scan.holds,
            "checked": scan.checked,
            "skipped": scan.skipped,
            "violation_count": scan.violation_count,
            "first_violation": scan.first_violation_n,
            "status": status,
            "note": note,
        },
        violations=[_report_dict(r) for r in scan.violations],
        condition=None if rep is None else rep.to_dict(),
        timing={"seconds": round(elapsed, 3)},
        provenance={"verdicts": "exact", "violations": "exact", "condition": "exact", "timing": "measured"},
    )
    _emit(result, cfg.out, stream)
    return 2 if status == "disagreement" else 0


def cmd_scan(args, stream=sys.stdout) -> int:
    cfg = _config_from_args(args)
    case = cfg.validate()
    if cfg.n_lo is None or cfg.n_hi is None:
        if cfg.n is None:
            raise UsageError("n-lo/n-hi: scan range required (or --n for |n| <= N)")
        cfg.n_lo, cfg.n_hi = -cfg.n, cfg.n
    if cfg.n_lo > cfg.n_hi:
        raise UsageError("n-lo: must not exceed n-hi")
    t0 = time.perf_counter()
    scan = scan_identity(case, cfg.n_lo, cfg.n_hi, cap=cfg.cap, workers=cfg.workers)
    result = RunResult(
        command="scan",
        config=cfg.to_dict(),
        verdicts={
            "case": case.describe(),
            "identity_holds": scan.holds,
            "checked": scan.checked,
            "skipped": scan.skipped,
            "violation_count": scan.violation_count,
            "first_violation": scan.first_violation_n,
        },
        violations=[_report_dict(r) for r in scan.violations],
        timing={"seconds": round(time.perf_counter() - t0, 3)},
        provenance={"verdicts": "exact", "violations": "exact", "timing": "measured"},
    )
    _emit(result, cfg.out, stream)
    return 0


def enumerate_families(l_max: int, k_max: int, m_max: int, quick_n: int = 1000) -> list[dict]:
    rows = []
    for l in range(1, l_max + 1):
        for k in range(1, k_max + 1):
            for m in range(1, m_max + 1):
                M = 1
                while M**k < (m + 1) ** l:
                    alpha = construct_characteristic_alpha(l, k, m, M)
                    row = {"l": l, "k": k, "m": m, "M": M, "alpha": str(alpha), "approx": f"{alpha.approx():.12g}"}
                    if quick_n:
                        scan = scan_identity(IdentityCase.mvar(alpha, l, k, m), -quick_n, quick_n, workers=1)
                        row["quick_scan"] = {"n_max": quick_n, "violations": scan.violation_count}
                    rows.append(row)
                    M += 1
    return rows


def cmd_enumerate(args, stream=sys.stdout) -> int:
    for name in ("l_max", "k_max", "m_max"):
        if getattr(args, name) < 1:
            raise UsageError(f"{name.replace('_', '-')}: must be >= 1")
    t0 = time.perf_counter()
    rows = enumerate_families(args.l_max, args.k_max, args.m_max, args.quick_n)
    result = RunResult(
        command="enumerate",
        config={"l_max": args.l_max, "k_max": args.k_max, "m_max": args.m_max, "quick_n": args.quick_n},
        verdicts={"families": rows, "count": len(rows)},
        timing={"seconds": round(time.perf_counter() - t0, 3)},
        provenance={"families": "exact", "approx": "derived", "quick_scan": "exact"},
    )
    _emit(result, args.out, stream)
    return 0


def cmd_dist(args, stream=sys.stdout) -> int:
    alpha = _parse_number("alpha", args.alpha)
    if args.m < 1 or args.N < 1:
        raise UsageError("m/N: must be positive")
    if alpha.is_rational:
        raise UsageError("alpha: the r(n) distribution needs an irrational alpha")
    t0 = time.perf_counter()
    dist = empirical_distribution(alpha, args.m, args.N)
    result = RunResult(
        command="dist",
        config={"alpha": args.alpha, "m": args.m, "N": args.N, "tolerance": args.tol},
        verdicts={
            "counts": list(dist.counts),
            "frequencies": [float(f) for f in dist.frequencies],
            "deviations": list(dist.deviations),
            "max_deviation": max(dist.deviations),
            "within_tolerance": max(dist.deviations) <= args.tol,
        },
        timing={"seconds": round(time.perf_counter() - t0, 3)},
        provenance={"counts": "exact", "frequencies": "derived", "deviations": "derived"},
    )
    _emit(result, args.out, stream)
    return 0


def cmd_weyl(args, stream=sys.stdout) -> int:
    try:
        k = [int(c) for c in args.k.split(",")]
    except ValueError:
        raise UsageError(f"k: expected comma-separated integers, got {args.k!r}") from None
    if args.poly_coeff:
        coeffs = [(_parse_number("coeff", c),) for c in args.poly_coeff]
        spec = Polynomial(tuple(coeffs))
    elif args.theta:
        spec = Linear(tuple(_parse_number("theta", t) for t in args.theta))
    else:
        raise UsageError("theta: give --theta (linear) or --coeff (polynomial)")
    if args.N < 1:
        raise UsageError("N: must be positive")
    try:
        res = weyl_sum(spec, k, args.N)
    except ValueError as exc:
        raise UsageError(f"k: {exc}") from None
    result = RunResult(
        command="weyl",
        config={"theta": args.theta, "coeff": args.poly_coeff, "k": k, "N": args.N},
        verdicts={"magnitude": res.magnitude, "phase_error_bound": res.phase_error_bound, "precision": res.precision},
        provenance={"magnitude": "numeric"},
    )
    _emit(result, args.out, stream)
    return 0


def cmd_orbit(args, stream=sys.stdout) -> int:
    alpha = _parse_number("alpha", args.alpha)
    if min(args.l, args.k, args.m) < 1 or args.n < 1:
        raise UsageError("l/k/m/n: must be positive")
    recs = orbit_dump(alpha, args.l, args.k, range(1, args.n + 1), identity_region(alpha, args.k, args.m), args.digits)
    text = dump_csv(recs)
    if args.out:
        Path(args.out).write_text(text)
    else:
        stream.write(text)
    return 0


def cmd_fig(args, stream=sys.stdout) -> int:
    try:
        summary = emit_figure(args.figure, args.out, args.points)
    except UnknownFigure as exc:
        raise UsageError(f"figure: {exc}") from None
    stream.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def _in_unit_to_two(alpha) -> bool:
    a = alpha.element()
    return sign_of(a - 1) > 0 and sign_of(a - 2) < 0


def search_triple(A: int, n_max: int, rescan_factor: int = 10) -> dict:
    found: dict[str, dict] = {}
    for a in range(A + 1):
        for b in range(A + 1):
            for c in range(A + 1):
                for root in isolate_positive_roots([-c, -b, -a, 1]):
                    if root.is_rational or not _in_unit_to_two(root):
                        continue
                    key = str(root.defining_poly) + ":" + str(refine(root, Fraction(1, 2**80))[0])
                    entry = found.setdefault(key, {"alpha": root, "cubics": []})
                    entry["cubics"].append([a, b, c])
    candidates, survivors = [], []
    for entry in sorted(found.values(), key=lambda e: e["alpha"].approx()):
        alpha = entry.pop("alpha")
        case = IdentityCase.triple(alpha)
        rec = {"alpha": str(alpha), "approx": f"{alpha.approx():.15g}", "cubics": entry["cubics"]}
        viol = first_violation(case, n_max)
        if viol is None:
            viol = first_violation(case, n_max * rescan_factor)
            rec["rescanned_to"] = n_max * rescan_factor
        if viol is None:
            rec["survivor"] = True
            rec["note"] = "no violation found up to the rescan bound; this is not a characterization"
            survivors.append(rec)
            continue
        ev = DecimalEvaluator(alpha, 200)
        one = power_in_field(alpha, 1)
        o = ev.floor(ev.floor(ev.floor(viol.n, one), one), one) + 1
        rec.update(first_violation=viol.n, lhs=viol.lhs, rhs=viol.rhs, oracle_lhs=o, oracle_rhs=ev.floor(viol.n, power_in_field(alpha, 3)))
        rec["oracle_confirmed"] = rec["oracle_lhs"] == viol.lhs and rec["oracle_rhs"] == viol.rhs
        candidates.append(rec)
    return {
        "violated": candidates,
        "survivors": survivors,
        "claim": "evidence only; the triple-bracket question stays open and no number is declared characterized",
    }


def cmd_search_triple(args, stream=sys.stdout) -> int:
    if args.A < 0 or args.n_max < 1:
        raise UsageError("A/n-max: A >= 0 and n-max >= 1 required")
    t0 = time.perf_counter()
    report = search_triple(args.A, args.n_max)
    result = RunResult(
        command="search-triple",
        config={"A": args.A, "n_max": args.n_max},
        verdicts=report,
        timing={"seconds": round(time.perf_counter() - t0, 3)},
        provenance={"first_violation": "exact", "oracle": "decimal-200"},
    )
    _emit(result, args.out, stream)
    return 0


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _case_args(p):
    p.add_argument("--config", help="JSON campaign config (replaces the flags below)")
    p.add_argument("--variant", default="main", help="z1, z2, main, delta, mvar, pair, poly, triple")
    p.add_argument("--alpha", help='root([c0,...,cd],lo,hi) or p/q')
    p.add_argument("--beta", help="second number for the pair variant")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--delta", help="rational shift for the delta variant, e.g. 7/10")
    p.add_argument("--poly", help="P coefficients, constant term first, e.g. 1,4 for 4X+1")
    p.add_argument("--cap", type=int, default=DEFAULT_VIOLATION_CAP, help="max listed violations")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", help="write the JSON result here as well")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="floorlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"floorlab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("verify", help="condition vs identity over |n| <= N")
    _case_args(p)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="identity scan over [n-lo, n-hi]")
    _case_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--n-lo", type=int)
    p.add_argument("--n-hi", type=int)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("enumerate", help="list the characterized families")
    p.add_argument("--l-max", type=int, default=1)
    p.add_argument("--k-max", type=int, default=1)
    p.add_argument("--m-max", type=int, default=1)
    p.add_argument("--quick-n", type=int, default=1000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("dist", help="r(n) band frequencies")
    p.add_argument("--alpha", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--N", type=int, default=100000)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("weyl", help="Weyl sum magnitude")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--linear", action="store_true", help="x(n) = n*theta (default)")
    mode.add_argument("--poly", action="store_true", help="x(n) = sum coeff_j n^j")
    p.add_argument("--theta", action="append", help="component of theta; repeat for d > 1")
    p.add_argument("--coeff", dest="poly_coeff", action="append", help="coefficient of n^j, j = 0, 1, ...")
    p.add_argument("--k", default="1", help="frequency vector, comma-separated")
    p.add_argument("--N", type=int, default=10000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("orbit", help="orbit dump as CSV n,x,y,band")
    p.add_argument("--alpha", required=True)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--digits", type=int, default=12)
    p.add_argument("--out")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("fig", help="regenerate figure data")
    p.add_argument("figure", help=", ".join(FIGURES))
    p.add_argument("--out", default="figures")
    p.add_argument("--points", type=int)
    p.set_defaults(func=cmd_fig)

    p = sub.add_parser("search-triple", help="triple-bracket falsification campaign")
    p.add_argument("--A", type=int, default=3)
    p.add_argument("--n-max", type=int, default=10000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search_triple)
    return parser


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("a subcommand is required")
        if getattr(args, "workers", None) is None and os.environ.get("FLOORLAB_WORKERS"):
            args.workers = int(os.environ["FLOORLAB_WORKERS"])
        return args.func(args, stream)
    except UsageError as exc:
        print(f"floorlab: usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
