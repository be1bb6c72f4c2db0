"""Secret key rate over the (alpha, beta_c) plane at T^2 = 0.75 for both families.

Full grid, step 0.05. Takes about a minute per family on one core; pass
``--workers`` to spread rows over processes.
"""

import argparse

from pascs_qkd import cli


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t2", default="0.75")
    parser.add_argument("--workers", default="1")
    args = parser.parse_args()
    for family in ("coherent", "pascs"):
        cli.main(["keyrate-sweep", "--family", family, "--t2", args.t2, "--workers", args.workers,
                  "--out", f"results/keyrate_{family}.csv"])


if __name__ == "__main__":
    from pathlib import Path

    Path("results").mkdir(exist_ok=True)
    main()
