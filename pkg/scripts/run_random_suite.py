"""Run the invariant suite over seeded random instances and summarize.

    python3 scripts/run_random_suite.py --count 50 --family graphic
"""
import argparse
import time
from collections import Counter

from matroid_modulus.checks import VerifyConfig, run_checks
from matroid_modulus.formats import parse, random_instance_text


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--base-seed", type=int, default=0)
    ap.add_argument("--family", choices=("graphic", "linear"), default="graphic")
    ap.add_argument("--max-size", type=int, default=8)
    args = ap.parse_args()

    totals = Counter()
    bad = []
    start = time.perf_counter()
    for seed in range(args.base_seed, args.base_seed + args.count):
        size = 3 + seed % (args.max_size - 2)
        m = parse(random_instance_text(seed, args.family, size))
        results = run_checks(m, VerifyConfig(seed=seed))
        totals.update(r.status for r in results)
        bad += [(seed, r.line()) for r in results if not r.ok]
        print(f"seed {seed:3d}  |E|={m.n}  r={m.full_rank}  "
              f"{sum(r.status == 'pass' for r in results)} pass  {sum(r.status == 'skip' for r in results)} skip")
    print(f"\n{totals['pass']} passed, {totals['skip']} skipped, {totals['fail']} failed "
          f"in {time.perf_counter() - start:.1f}s")
    for seed, line in bad:
        print(f"seed {seed}: {line}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
