"""Write orbit dumps, line tables and summaries for all figures."""

import argparse

from floorlab.figures import FIGURES, emit_figure

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="figures")
    args = p.parse_args()
    for name in FIGURES:
        s = emit_figure(name, args.out)
        print(name, "bands", s["band_counts"], "outside", s["outside"], "lines", s["line_support"])
