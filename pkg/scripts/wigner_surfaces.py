"""Wigner surfaces of the PASCS and coherent states on a square grid.

Writes one CSV per state into ``results/wigner/`` and prints the minimum of
each surface (negative values mark nonclassical states).
"""

import argparse
from pathlib import Path

import numpy as np

from pascs_qkd.formats import Table, write_table
from pascs_qkd.states import PascsParams, wigner_pascs

STATES = {
    "pascs_1": PascsParams.pascs(1.0),
    "coherent_1.5": PascsParams.coherent(1.5),
    "pascs_0.55": PascsParams.pascs(0.55),
    "pascs_-0.55": PascsParams.pascs(-0.55),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results/wigner")
    parser.add_argument("--step", type=float, default=0.05)
    args = parser.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    axis = np.round(np.arange(-3.5, 3.5 + args.step / 2, args.step), 10)
    zr, zi = np.meshgrid(axis, axis, indexing="ij")
    for name, params in STATES.items():
        w = wigner_pascs(params, zr + 1j * zi)
        rows = np.column_stack([zr.ravel(), zi.ravel(), w.ravel()]).tolist()
        write_table(Table("wigner", ["zr", "zi", "w"], rows, {"state": name}, {"min_w": float(w.min())}),
                    out / f"{name}.csv", "csv")
        print(f"{name:>14}: min W = {w.min():+.5f}, max W = {w.max():.5f}")


if __name__ == "__main__":
    main()
