"""Heralded signal duration against balanced dispersion beta_s = beta_i = beta."""

import argparse
from pathlib import Path

import numpy as np

from spdcsim.io import write_table
from spdcsim.presets import preset
from spdcsim.propagate import check_nonnegative, duration_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="kdp-asymmetric")
    ap.add_argument("--beta-p", type=float, default=-4.77e-26)
    ap.add_argument("--num", type=int, default=81)
    ap.add_argument("--numeric", action="store_true", help="also measure widths from the numerical CWF (slow)")
    ap.add_argument("--out", type=Path, default=Path("out/duration.csv"))
    args = ap.parse_args()

    cfg = preset(args.preset).with_(beta_p=args.beta_p)
    span = 3 * abs(args.beta_p) or 1e-25
    curve = duration_sweep(cfg, np.linspace(-span, span, args.num), numeric=args.numeric)
    check_nonnegative(curve)
    print(f"Delta_t_0 = {curve.Delta_t_0:.4e} s, minimum Delta_t_M = {curve.Delta_t_M_min:.4e} s "
          f"at beta = {curve.beta_min:.4e} s^2")
    if args.beta_p:
        print(f"beta_min / -beta_p = {curve.beta_min / -args.beta_p:.5f}")
    cols = {"beta": curve.beta, "Delta_t_M": curve.Delta_t_M, "Delta": curve.Delta}
    if curve.numeric is not None:
        cols["Delta_t_M_numeric"] = curve.numeric
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_table(args.out, cols)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
