"""Horizontal-plane EIRP cuts of the broad-beam pair and the three baselines, as CSV."""

import argparse
import csv
import sys

import numpy as np

from golaybeam.baselines import amplitude_taper_weights, dft_weights, phase_taper_weights
from golaybeam.patterns import AngleGrid, ArrayGeometry, ElementModel, eirp_pattern, hpbw, ripple
from golaybeam.sequences import pair7


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    ap.add_argument("--step", type=float, default=0.5, help="azimuth step in degrees")
    args = ap.parse_args(argv)

    m = 7
    geometry = ArrayGeometry(m)
    grid = AngleGrid.azimuth_cut(args.step)
    model = ElementModel()
    methods = {
        "proposed": pair7(),
        "dft": dft_weights(m),
        "phase_taper": phase_taper_weights(m),
        "amp_taper": amplitude_taper_weights(m).weights,
    }
    cuts = {k: eirp_pattern(w, geometry, model, grid) for k, w in methods.items()}

    for k, p in cuts.items():
        sector = ripple(p, (-np.pi / 3, np.pi / 3))
        print(f"{k:12s} hpbw={hpbw(p):6.2f} deg  sector_ripple={sector:5.2f} dB  "
              f"peak={10 * np.log10(p.values.max()):5.2f} dBW", file=sys.stderr)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh)
    writer.writerow(["phi_deg", *[f"{k}_dbw" for k in cuts]])
    db = {k: 10 * np.log10(np.maximum(p.values[0], 1e-40)) for k, p in cuts.items()}
    for i, phi in enumerate(np.rad2deg(grid.phi)):
        writer.writerow([f"{phi:.2f}", *[f"{db[k][i]:.4f}" for k in cuts]])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
