"""Optimal amplitude, accepted fraction and Eve's success rate versus threshold.

The amplitude is fixed by the intrinsic error rate 1.15e-3 on a lossless line.
"""

from pascs_qkd import cli
from pascs_qkd.formats import read_table


def main():
    path = "results/intercept.csv"
    cli.main(["intercept", "--beta-c-range", "0:1.5:0.1", "--out", path])
    table = read_table(path)
    print(f"{'family':>8} {'beta_c':>6} {'alpha':>7} {'r_acc':>7} {'P_corr':>7}")
    for r in table.records():
        print(f"{r['family']:>8} {r['beta_c']:6.2f} {r['alpha_opt']:7.4f} {r['r_acc']:7.4f} {r['p_corr']:7.4f}")


if __name__ == "__main__":
    from pathlib import Path

    Path("results").mkdir(exist_ok=True)
    main()
