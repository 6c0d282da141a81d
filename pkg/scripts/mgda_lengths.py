"""Run the stochastic search over a set of lengths and tabulate the outcome."""

import argparse
import time

from golaybeam.mgda import MgdaConfig, search_with_restarts

DEFAULT = (3, 5, 6, 7, 9, 11, 13, 14, 15, 17, 19, 21)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("lengths", nargs="*", type=int, default=list(DEFAULT))
    ap.add_argument("--eps-percent", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--restarts", type=int, default=10)
    args = ap.parse_args(argv)

    print(f"{'M':>4} {'target':>8} {'sidelobe':>9} {'conv':>5} {'restarts':>8} {'evals':>10} {'sec':>7}")
    for m in args.lengths:
        cfg = MgdaConfig.from_percent(args.eps_percent, 1, m, seed=args.seed)
        t0 = time.perf_counter()
        res = search_with_restarts(m, cfg, args.restarts)
        dt = time.perf_counter() - t0
        print(f"{m:4d} {cfg.tolerance:8.4f} {res.achieved_sidelobe:9.4f} {str(res.converged):>5} "
              f"{res.restarts:8d} {res.iterations:10d} {dt:7.2f}")


if __name__ == "__main__":
    main()
