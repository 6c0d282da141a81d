"""Build the 32 x 14 array from the length-7 pair and check its hemisphere ripple."""

import argparse

import numpy as np

from golaybeam.cli import WeightFile, write_weight_file
from golaybeam.expansion import URA_32X14_STEPS, chain_gain, sidelobe_bound_after_expansion, ura_32x14
from golaybeam.patterns import AngleGrid, ArrayGeometry, array_factor_power
from golaybeam.sequences import max_sidelobe, pair7, ripple_bound


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="write the weight file here")
    ap.add_argument("--step", type=float, default=1.0, help="hemisphere grid step in degrees")
    args = ap.parse_args(argv)

    proto = pair7()
    big = ura_32x14(proto)
    level = 2 * proto.size * chain_gain(URA_32X14_STEPS)
    bound, lvl = ripple_bound(proto.size, max_sidelobe(proto.a, proto.b)), 2.0 * proto.size
    for step in URA_32X14_STEPS:
        bound = sidelobe_bound_after_expansion(bound, 0.0, len(step.u), proto_level=lvl)
        lvl *= 2 * len(step.u)

    af = array_factor_power(big, ArrayGeometry.for_weights(big), AngleGrid.hemisphere(args.step)).values
    dev = np.max(np.abs(af - level))
    print(f"shape={big.shape[0]}x{big.shape[1]} unimodular={big.is_unimodular()}")
    print(f"level={level} min={af.min():.2f} max={af.max():.2f} deviation={dev:.2f} bound={bound:.2f}")
    print(f"ripple_db={10 * np.log10(af.max() / af.min()):.3f}")
    if args.out:
        write_weight_file(args.out, WeightFile.from_pair(big, {"generator": "ura_32x14"}))
    return 0 if dev <= bound else 1


if __name__ == "__main__":
    raise SystemExit(main())
