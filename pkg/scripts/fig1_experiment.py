"""Write the 24 x 24 q-Bernstein-Vandermonde artifacts (SBD, exact rank, 212-bit matrix).

    python scripts/fig1_experiment.py --out runs/fig1
"""

import argparse
import json
from pathlib import Path

from vtsbd.cli import run_fig1


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="runs/fig1")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    print(json.dumps(run_fig1(out), indent=2))


if __name__ == "__main__":
    main()
