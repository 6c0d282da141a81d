"""4 x 7 array from the length-7 pair with expanders [j, 1] and [-1, -j]."""

import argparse

import numpy as np

from golaybeam.cli import WeightFile, write_weight_file
from golaybeam.expansion import ura_4x7
from golaybeam.patterns import AngleGrid, ArrayGeometry, array_factor_power
from golaybeam.sequences import pair7


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    proto = pair7()
    arr = ura_4x7(proto)
    grid = AngleGrid.hemisphere(2)
    af = array_factor_power(arr, ArrayGeometry.for_weights(arr), grid).values
    # every elevation row should be four times the linear pattern at the same azimuth
    lin = array_factor_power(proto, ArrayGeometry(7), grid).values
    print(f"shape={arr.shape} unimodular={arr.is_unimodular()}")
    print(f"max |AF - 4*AF_proto| = {np.max(np.abs(af - 4 * lin)):.2e}")
    np.set_printoptions(precision=3, suppress=True)
    print("phases A (rad):")
    print(np.mod(np.angle(arr.a), 2 * np.pi))
    if args.out:
        write_weight_file(args.out, WeightFile.from_pair(arr, {"generator": "ura_4x7"}))


if __name__ == "__main__":
    main()
