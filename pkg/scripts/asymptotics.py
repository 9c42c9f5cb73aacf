"""Compare exact expected energies of the harmonic ensemble with their large-n expansions.

For 0 < s < d the slope of n^2 V_s - E E_s against n^{1+s/d} is fitted over a range of L;
for s = d the leading ratio E E_d / (n^2 log n) is tabulated against its limit.
"""
import argparse

import numpy as np

from sphere_dpp.energy import (asymptotic_riesz_constant, continuous_vs, expected_riesz_harmonic,
                               expected_riesz_quadrature, singular_leading_coefficient)
from sphere_dpp.kernels import HarmonicEnsemble, dim_pi


def slope_fit(d, s, Ls):
    xs = [dim_pi(d, L) ** (1 + s / d) for L in Ls]
    ys = [dim_pi(d, L) ** 2 * continuous_vs(d, s) - expected_riesz_harmonic(d, L, s) for L in Ls]
    return np.polyfit(xs, ys, 1)[0]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L-min", type=int, default=10)
    ap.add_argument("--L-max", type=int, default=60)
    args = ap.parse_args()
    Ls = range(args.L_min, args.L_max + 1)
    print("d,s,fitted_slope,C_s_d,rel_err")
    for d, s in [(2, 1.0), (3, 1.5), (4, 2.0), (2, 0.5), (3, 2.5)]:
        fit, c = slope_fit(d, s, Ls), asymptotic_riesz_constant(d, s)
        print(f"{d},{s},{fit:.8g},{c:.8g},{abs(fit - c) / c:.2e}")
    print()
    print("d,L,n,ratio,limit,rel_gap")
    for d in (2, 3, 4):
        for L in (15, 30, 60, 120, 240):
            e = HarmonicEnsemble(d, L)
            ratio = expected_riesz_quadrature(e, d) / (e.n ** 2 * np.log(e.n))
            lim = singular_leading_coefficient(d)
            print(f"{d},{L},{e.n},{ratio:.8g},{lim:.8g},{abs(ratio / lim - 1):.4f}")


if __name__ == "__main__":
    main()
