"""Componentwise accuracy of the binary64 SBD against exact arithmetic, per family and size.

Nodes and parameters are rounded to doubles first and the exact reference is
computed from those rounded values, so the numbers measure the algorithm only.

    python scripts/accuracy_sweep.py --sizes 4 8 16 24 32 --seeds 20
"""

import argparse
import csv
import sys

from vtsbd.cli import binary64_twin
from vtsbd.families import FAMILIES, sbd
from vtsbd.oracle import compare_sbd
from vtsbd.sampling import random_config
from vtsbd.scalars import BINARY64, EPS


def sweep(sizes, seeds):
    for family in FAMILIES:
        for n in sizes:
            worst = 0.0
            for seed in range(seeds):
                twin = binary64_twin(random_config(family, n, seed))
                report = compare_sbd(sbd(twin, BINARY64), sbd(twin))
                worst = max(worst, float(report.max_rel_error))
            yield {"family": family, "n": n, "seeds": seeds, "max_rel_error": worst,
                   "in_units_of_n_eps": worst / (n * EPS)}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 12, 16, 24])
    parser.add_argument("--seeds", type=int, default=20)
    args = parser.parse_args()
    writer = None
    for row in sweep(args.sizes, args.seeds):
        if writer is None:
            writer = csv.DictWriter(sys.stdout, fieldnames=list(row))
            writer.writeheader()
        writer.writerow(row)


if __name__ == "__main__":
    main()
