"""Sweep every characterized family with l, k, m <= bound and scan the
m-variant identity over |n| <= n_max.  Writes one JSON row per family."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from floorlab.exact_numbers import construct_characteristic_alpha
from floorlab.identity_engine import IdentityCase, check_condition, scan_identity


@dataclass
class SweepConfig:
    bound: int = 3
    n_max: int = 10_000
    workers: int = 1
    out: str = "family_sweep.json"


def run(cfg: SweepConfig) -> list[dict]:
    rows = []
    for l in range(1, cfg.bound + 1):
        for k in range(1, cfg.bound + 1):
            for m in range(1, cfg.bound + 1):
                M = 1
                while M**k < (m + 1) ** l:
                    t0 = time.perf_counter()
                    a = construct_characteristic_alpha(l, k, m, M)
                    rep = check_condition(a, l, k, m)
                    scan = scan_identity(IdentityCase.mvar(a, l, k, m), -cfg.n_max, cfg.n_max, workers=cfg.workers)
                    rows.append(dict(l=l, k=k, m=m, M=M, alpha=str(a), condition=rep.holds,
                                     violations=scan.violation_count, seconds=round(time.perf_counter() - t0, 2)))
                    print(f"l={l} k={k} m={m} M={M}: condition={rep.holds} violations={scan.violation_count}")
                    M += 1
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for f, v in asdict(SweepConfig()).items():
        p.add_argument(f"--{f.replace('_', '-')}", type=type(v), default=v)
    cfg = SweepConfig(**vars(p.parse_args()))
    rows = run(cfg)
    with open(cfg.out, "w") as fh:
        json.dump({"config": asdict(cfg), "families": rows}, fh, indent=2)
    print(f"{len(rows)} families, {sum(r['violations'] for r in rows)} violations in total")
