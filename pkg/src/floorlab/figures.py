"""Parameters and emitters for the orbit figures.

Each figure is an orbit dump (``n,x,y,band``), a table of line segments
(region boundaries, detected line support, overlays) and a JSON summary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from floorlab.exact_numbers import AlgebraicReal, compare, construct_characteristic_alpha, parse_algebraic, rational_number
from floorlab.torus_lab import (
    LineFit,
    RegionSpec,
    band_counts,
    clip_line,
    detect_line_support,
    dump_csv,
    identity_region,
    orbit,
    region_membership,
    verify_line_support,
    DumpRecord,
)

FIGURES = ("fig1-left", "fig1-mid", "fig1-right", "fig2")

# the middle panel is drawn from this decimal; 1/2 + sqrt(2) is the quadratic
# root agreeing with it to every printed digit
FIG1_MID_DECIMAL = "1.914213562"


class UnknownFigure(ValueError):
    pass


@dataclass
class FigureSpec:
    name: str
    alpha: AlgebraicReal
    points: int
    region: RegionSpec
    overlay_slopes: tuple = ()
    source_constant: Optional[str] = None


def _golden() -> AlgebraicReal:
    return construct_characteristic_alpha(1, 1, 1, 1)


def figure_spec(name: str, points: Optional[int] = None) -> FigureSpec:
    if name == "fig1-left":
        a = parse_algebraic("root([-4,0,0,1],1,2)")
        return FigureSpec(name, a, points or 250, RegionSpec(_golden(), 1))
    if name == "fig1-mid":
        a = parse_algebraic("root([-7,-4,4],1,2)")
        dec = Fraction(FIG1_MID_DECIMAL)
        # the printed constant must be the 9-digit truncation of the exact root
        assert compare(a, rational_number(dec)) > 0 and compare(a, rational_number(dec + Fraction(1, 10**9))) < 0
        return FigureSpec(name, a, points or 150, RegionSpec(_golden(), 1), source_constant=FIG1_MID_DECIMAL)
    if name == "fig1-right":
        a = construct_characteristic_alpha(1, 1, 2, 1)
        return FigureSpec(name, a, points or 100, RegionSpec(_golden(), 1))
    if name == "fig2":
        a = construct_characteristic_alpha(1, 1, 2, 1)
        return FigureSpec(name, a, points or 10000, identity_region(a, 1, 2), overlay_slopes=(1, 2, 3))
    raise UnknownFigure(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")


def emit_figure(name: str, out_dir, points: Optional[int] = None, digits: int = 12) -> dict:
    spec = figure_spec(name, points)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pts = orbit(spec.alpha, 1, 1, range(1, spec.points + 1))
    records = []
    for pt in pts:
        x, y = pt.decimal(digits)
        records.append(DumpRecord(pt.n, x, y, region_membership(pt, spec.region)))
    (out_dir / f"{name}.csv").write_text(dump_csv(records))

    counts, outside = band_counts(pts, spec.region)
    fit = detect_line_support(spec.alpha, 1, 1)
    segments = []
    slope = spec.region.approx_slope()
    for j in range(spec.region.band_count + 1):
        segments.append(("region_boundary", clip_line(slope, -j)))
    if isinstance(fit, LineFit):
        for t in fit.intercepts:
            segments.append((f"support_s{fit.slope}_t{t}", clip_line(float(fit.slope), float(t))))
    for s in spec.overlay_slopes:
        for j in range(1, s + 1):
            segments.append((f"overlay_s{s}_j{j}", clip_line(float(s), float(1 - j))))
    lines = ["curve,x0,y0,x1,y1"]
    for label, seg in segments:
        if seg is not None:
            (x0, y0), (x1, y1) = seg
            lines.append(f"{label},{x0:.12g},{y0:.12g},{x1:.12g},{y1:.12g}")
    (out_dir / f"{name}_lines.csv").write_text("\n".join(lines) + "\n")

    summary = {
        "figure": name,
        "alpha": str(spec.alpha),
        "points": spec.points,
        "region": {"slope": slope, "bands": spec.region.band_count},
        "band_counts": list(counts),
        "band_densities": [c / spec.points for c in counts],
        "outside": outside,
    }
    if spec.source_constant:
        summary["source_constant"] = spec.source_constant
    if isinstance(fit, LineFit):
        summary["line_support"] = {
            "slope": str(fit.slope),
            "intercepts": [str(t) for t in fit.intercepts],
            "all_points_on_lines": verify_line_support(fit, pts),
        }
    else:
        summary["line_support"] = {"none": fit.reason}
    (out_dir / f"{name}.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary
