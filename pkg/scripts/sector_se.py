"""Average spectral efficiency in a 120 degree sector for the broad beam and baselines."""

import argparse

from golaybeam.baselines import amplitude_taper_weights, dft_weights, phase_taper_weights
from golaybeam.evaluation import SectorConfig, evaluate_method
from golaybeam.mgda import MgdaConfig, search_with_restarts
from golaybeam.sequences import pair7


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--drops", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--searched", action="store_true", help="use a freshly searched M=7 pair")
    args = ap.parse_args(argv)

    cfg = SectorConfig(drops=args.drops, seed=args.seed)
    proposed = pair7()
    if args.searched:
        proposed = search_with_restarts(7, MgdaConfig.from_percent(1, 1, 7, seed=args.seed)).pair()
    methods = {
        "proposed": proposed,
        "dft": dft_weights(7),
        "phase_taper": phase_taper_weights(7),
        "amp_taper": amplitude_taper_weights(7).weights,
    }
    print("snr_db    " + "".join(f"{k:>12s}" for k in methods))
    reports = {k: evaluate_method(w, config=cfg, label=k) for k, w in methods.items()}
    for i, snr in enumerate(cfg.snr_db):
        print(f"{snr:6.0f}    " + "".join(f"{r.mean_se[i]:12.3f}" for r in reports.values()))


if __name__ == "__main__":
    main()
