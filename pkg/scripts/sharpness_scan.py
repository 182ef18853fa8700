#!/usr/bin/env python3
"""Scan the scaled center excess sqrt(t) * (tail(d, t, 0) - 1/2) over t.

For d = 2 and odd d this quantity stays bounded away from zero (the matching
lower bound); for even d >= 4 no such bound is established, so those rows
are exploratory output, printed with a marker."""

import argparse
import math

from hypbm import sharpness_at_zero, sharpness_d2_integral

KNOWN_LIMITS = {
    2: 2.0 * math.log(2.0) / math.sqrt(2.0 * math.pi),
    3: 1.0 / math.sqrt(2.0 * math.pi),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3, 4, 5, 6, 7])
    ap.add_argument("--t", type=float, nargs="+", default=[1.0, 10.0, 100.0, 1000.0, 10000.0])
    args = ap.parse_args()

    for d in args.d:
        established = d == 2 or d % 2 == 1
        marker = "" if established else "  [exploratory: no lower bound established]"
        vals = [sharpness_at_zero(d, t) for t in args.t]
        series = "  ".join(f"t={t:g}:{v:.5f}" for t, v in zip(args.t, vals))
        limit = KNOWN_LIMITS.get(d)
        suffix = f"  (limit {limit:.5f})" if limit else ""
        print(f"d={d}: {series}{suffix}{marker}")

    t_big = max(args.t)
    print(
        f"d=2 independent integral route at t={t_big:g}: "
        f"sqrt(t)*excess = {math.sqrt(t_big) * sharpness_d2_integral(t_big):.6f}"
    )


if __name__ == "__main__":
    main()
