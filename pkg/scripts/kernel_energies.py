"""Expected 2-energy of every isotropic projection kernel with n points, ranked per n.

    python scripts/kernel_energies.py --d 4 --n-max 600 --max-degree 12 > kernels_d4.csv
"""
import argparse
import sys

from sphere_dpp.cli import kernel_table
from sphere_dpp.formats import rows_to_csv

COLUMNS = ["d", "n", "degrees", "harmonic", "F_quadratic_form", "E2_expected", "rank"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=600)
    ap.add_argument("--max-degree", type=int, default=12)
    args = ap.parse_args()
    rows = kernel_table(args.d, range(1, args.n_max + 1), args.max_degree, min_count=2)
    sys.stdout.write(rows_to_csv(rows, COLUMNS, vars(args)))


if __name__ == "__main__":
    main()
