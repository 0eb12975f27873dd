"""Both golden-ratio identities over |n| <= N, with timing."""

import argparse
import time

from floorlab.exact_numbers import construct_characteristic_alpha
from floorlab.identity_engine import IdentityCase, scan_identity

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--N", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=None)
    args = p.parse_args()
    golden = construct_characteristic_alpha(1, 1, 1, 1)
    for case in (IdentityCase.z1(golden), IdentityCase.z2(golden)):
        t0 = time.perf_counter()
        s = scan_identity(case, -args.N, args.N, workers=args.workers)
        print(f"{case.variant.value}: checked {s.checked}, skipped {s.skipped}, "
              f"violations {s.violation_count}, {time.perf_counter() - t0:.1f}s")
