"""Median spherical-cap discrepancy of harmonic-ensemble and uniform samples on S^2 versus n."""
import argparse

import numpy as np

from sphere_dpp.kernels import HarmonicEnsemble
from sphere_dpp.sampling import RngStream, map_trials, sample_dpp, sample_uniform
from sphere_dpp.stats import discrepancy_estimate, growth_exponent


class Trial:
    def __init__(self, L, uniform):
        self.L, self.uniform = L, uniform

    def __call__(self, rng):
        e = HarmonicEnsemble(2, self.L)
        x = sample_uniform(2, e.n, rng) if self.uniform else sample_dpp(e, rng)
        return discrepancy_estimate(x, x.n, RngStream(rng.seed, rng.stream_id + 2**32))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, nargs="+", default=[8, 16, 32])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()
    print("L,n,median_dpp,median_uniform")
    ns, med = [], {True: [], False: []}
    for L in args.L:
        ns.append((L + 1) ** 2)
        for uniform in (False, True):
            vals = map_trials(Trial(L, uniform), args.trials, RngStream(args.seed + L, 0), args.threads)
            med[uniform].append(float(np.median(vals)))
        print(f"{L},{ns[-1]},{med[False][-1]:.5f},{med[True][-1]:.5f}")
    for uniform, label in ((False, "harmonic"), (True, "uniform")):
        m = np.array(med[uniform])
        print(f"# {label}: slope {growth_exponent(ns, m):.3f}, "
              f"slope after dividing by log n {growth_exponent(ns, m / np.log(ns)):.3f}")


if __name__ == "__main__":
    main()
