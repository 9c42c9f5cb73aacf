"""Acceptance criteria 1-11, each at its stated tolerance.

Every criterion prints one line "criterion k: PASS|FAIL  <measurements>".
Run through pytest (lines are repeated in the terminal summary) or directly:

    python tests/test_acceptance.py [k ...]
"""
from __future__ import annotations

import math
import sys
import time

import mpmath as mp
import numpy as np
import pytest

from sphere_dpp.energy import (asymptotic_riesz_constant, continuous_vs, discrete_log, discrete_riesz,
                               expected_e2_closed_form, expected_log_harmonic, expected_riesz_harmonic,
                               expected_riesz_quadrature, log_asymptotic_constant, log_energy_from_derivative,
                               q_integral, q_integral_quadrature, quadratic_form_exact,
                               singular_asymptotic_constant, singular_leading_coefficient)
from sphere_dpp.kernels import HarmonicEnsemble, dim_pi, enumerate_projection_kernels
from sphere_dpp.sampling import RngStream, sample_uniform
from sphere_dpp.stats import (CapSpec, PairHistogram, close_pair_count, close_pair_threshold, expected_close_pairs, count_in_cap,
                              discrepancy_estimate, equal_measure_edges, expected_close_pairs_bound,
                              expected_pair_histogram, growth_exponent, hotelling_pvalue, jacobi_bound_check,
                              orthant_chi_square, sample_statistics, separation, variance_cap_semianalytic,
                              variance_with_jackknife)

SEED = 20240607


def _mean_se(values):
    v = np.asarray(values, dtype=float)
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(len(v)))


# --- 1 ---------------------------------------------------------------------------

def criterion_1():
    start = time.perf_counter()
    worst = 0.0
    for d in range(2, 7):
        for L in range(1, 41):
            e = HarmonicEnsemble(d, L)
            for s in (0.3, 0.5 * d, 0.9 * d):
                a = expected_riesz_harmonic(d, L, s)
                b = expected_riesz_quadrature(e, s)
                worst = max(worst, abs(a - b) / abs(b))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 60
    return ok, f"max rel diff closed form vs quadrature {worst:.2e} (tol 1e-9), {elapsed:.1f}s"


# --- 2 ---------------------------------------------------------------------------

class _Energies:
    def __call__(self, x):
        return discrete_riesz(x, 1.0), discrete_log(x)


def criterion_2():
    e = HarmonicEnsemble(2, 8)
    start = time.perf_counter()
    vals = np.array(sample_statistics(e, _Energies(), 200, RngStream(SEED, 0)))
    elapsed = time.perf_counter() - start
    m1, se1 = _mean_se(vals[:, 0])
    m0, se0 = _mean_se(vals[:, 1])
    want1 = expected_riesz_harmonic(2, 8, 1.0)
    want0 = expected_log_harmonic(2, 8)
    z1, z0 = (m1 - want1) / se1, (m0 - want0) / se0
    ok = abs(z1) <= 3 and abs(z0) <= 3 and elapsed < 600
    return ok, (f"E_1 mean {m1:.2f} vs {want1:.2f} (z={z1:+.2f}); E_0 mean {m0:.2f} vs {want0:.2f} "
                f"(z={z0:+.2f}); {elapsed:.1f}s")


# --- 3 ---------------------------------------------------------------------------

def criterion_3():
    worst = 0.0
    for d in (2, 3, 4):
        for L in (2, 5, 10, 20):
            a = log_energy_from_derivative(d, L, 1e-5)
            b = expected_log_harmonic(d, L)
            worst = max(worst, abs(a - b) / abs(b))
    return worst <= 1e-6, f"max rel diff one-sided derivative vs log closed form {worst:.2e} (tol 1e-6)"


# --- 4 ---------------------------------------------------------------------------

def criterion_4():
    with mp.workdps(30):
        c2 = float(mp.mpf(1) / 2 + mp.log(2) - mp.euler)
        c22 = float(mp.euler - mp.mpf(3) / 8)
    errs = {
        "C_2": abs(log_asymptotic_constant(2) - c2),
        "C_22": abs(singular_asymptotic_constant(2) - c22),
        "V_1(S^2)": abs(continuous_vs(2, 1.0) - 1.0),
        "V_2(S^d), d=3..12": max(abs(continuous_vs(d, 2.0) - (d - 1) / (2 * d - 4)) for d in range(3, 13)),
    }
    worst = max(errs.values())
    detail = ", ".join(f"{k} err {v:.1e}" for k, v in errs.items())
    return worst <= 1e-10, f"C_2={log_asymptotic_constant(2):.6f}, C_22={singular_asymptotic_constant(2):.6f}; {detail}"


# --- 5 ---------------------------------------------------------------------------

def criterion_5():
    parts = []
    ok = True
    for d, s in [(2, 1.0), (3, 1.5), (4, 2.0)]:
        xs, ys = [], []
        for L in range(10, 61):
            n = dim_pi(d, L)
            xs.append(n ** (1 + s / d))
            ys.append(n * n * continuous_vs(d, s) - expected_riesz_harmonic(d, L, s))
        slope = np.polyfit(xs, ys, 1)[0]
        c = asymptotic_riesz_constant(d, s)
        rel = abs(slope - c) / c
        ok &= rel <= 0.02
        parts.append(f"(d={d},s={s}) slope rel err {rel:.2%}")
    for d in (2, 3, 4):
        e = HarmonicEnsemble(d, 60)
        n = e.n
        ratio = expected_riesz_quadrature(e, d) / (n * n * math.log(n))
        gap = abs(ratio / singular_leading_coefficient(d) - 1)
        ok &= gap <= 0.02
        parts.append(f"E_d/(n^2 log n) gap at L=60, d={d}: {gap:.2%}")
    return ok, "; ".join(parts) + " (tol 2%)"


# --- 6 ---------------------------------------------------------------------------

def criterion_6():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    count = 0
    for d in (3, 4, 6):
        picked = 0
        while picked < 50:
            n = int(rng.integers(2, 601))
            ks = enumerate_projection_kernels(d, n, 12)
            if not ks:
                continue
            k = ks[int(rng.integers(len(ks)))]
            a = expected_e2_closed_form(k)
            b = expected_riesz_quadrature(k, 2.0)
            worst = max(worst, abs(a - b) / abs(b))
            picked += 1
        count += picked
    qworst = max(abs(q_integral(d, k, j) - q_integral_quadrature(d, k, j)) / q_integral(d, k, j)
                 for d in (3, 4, 5, 6) for k in range(11) for j in range(11))
    ok = worst <= 1e-10 and qworst <= 1e-10
    return ok, f"{count} kernels: max rel diff E_2 {worst:.2e}; Q-integrals k,j<=10: {qworst:.2e} (tol 1e-10)"


# --- 7 ---------------------------------------------------------------------------

def _optimality(d, n_max, max_degree):
    checked = with_harmonic = violations = 0
    harmonic_n = {dim_pi(d, L) for L in range(max_degree + 1)}
    start = time.perf_counter()
    for n in range(1, n_max + 1):
        ks = enumerate_projection_kernels(d, n, max_degree)
        if len(ks) < 2:
            continue
        checked += 1
        if n not in harmonic_n:
            continue
        with_harmonic += 1
        forms = [quadratic_form_exact(k) for k in ks]
        h = [i for i, k in enumerate(ks) if k.is_harmonic()][0]
        # E_2 = V_2 (n^2 - F): strict minimum of E_2 is strict maximum of F
        if any(f >= forms[h] for i, f in enumerate(forms) if i != h):
            violations += 1
    return checked, with_harmonic, violations, time.perf_counter() - start


def criterion_7():
    checked, with_h, bad, elapsed = _optimality(4, 600, 12)
    ok = bad == 0 and with_h > 0 and elapsed < 300
    return ok, (f"d=4: {checked} values of n with >=2 kernels, {with_h} with a harmonic kernel, "
                f"{bad} where it is not the strict minimiser ({elapsed:.1f}s)")


# --- 8 ---------------------------------------------------------------------------

class _FirstAndPairs:
    def __init__(self, edges):
        self.hist = PairHistogram(edges)

    def __call__(self, x):
        return x.points[0].copy(), x.points.copy(), self.hist(x)


def criterion_8():
    e = HarmonicEnsemble(2, 4)
    edges = equal_measure_edges(2, 20)
    draws = sample_statistics(e, _FirstAndPairs(edges), 10_000, RngStream(SEED, 8))
    first = np.array([d[0] for d in draws])
    # point t mod n of trial t: every sampler position, one independent point per trial
    rotating = np.array([d[1][t % e.n] for t, d in enumerate(draws)])
    _, p_first = orthant_chi_square(first)
    _, p_rot = orthant_chi_square(rotating)
    hist = np.array([d[2] for d in draws[:2000]])
    _, p_pair = hotelling_pvalue(hist, expected_pair_histogram(e, edges))
    ok = min(p_first, p_rot, p_pair) > 1e-3
    return ok, (f"first-point orthant chi2 p={p_first:.3f}, position t mod n p={p_rot:.3f} (10^4 trials); "
                f"pair correlation over 20 bins p={p_pair:.3f} (2000 trials)")


# --- 9 ---------------------------------------------------------------------------

def criterion_9():
    ok = True
    parts = []
    cap = CapSpec.with_measure(2, 0.3)
    for L in (4, 6, 8):
        e = HarmonicEnsemble(2, L)
        counts = np.array(sample_statistics(e, _CapCount(cap), 5000, RngStream(SEED, 900 + L)), dtype=float)
        var, se = variance_with_jackknife(counts)
        exact = variance_cap_semianalytic(e, cap)
        z = (var - exact) / se
        mean = counts.mean()
        ok &= abs(z) <= 3 and var < mean and exact < e.n * 0.3
        parts.append(f"L={L}: MC {var:.3f}+-{se:.3f} vs {exact:.3f} (z={z:+.2f}), E(n_A)={mean:.2f}")
    vals = [variance_cap_semianalytic(HarmonicEnsemble(2, L), cap) for L in (8, 16, 32)]
    alpha = growth_exponent([8, 16, 32], vals)
    ok &= 1.0 <= alpha <= 1.5
    parts.append(f"growth exponent over L=8,16,32: {alpha:.3f} (band [1, 1.5])")
    return ok, "; ".join(parts)


class _CapCount:
    def __init__(self, cap):
        self.cap = cap

    def __call__(self, x):
        return count_in_cap(x, self.cap)


# --- 10 --------------------------------------------------------------------------

class _SepAndPairs:
    def __init__(self, t):
        self.t = t

    def __call__(self, x):
        return separation(x), close_pair_count(x, self.t)


def criterion_10():
    ok = True
    parts = []
    seps = None
    for d, L in [(2, 8), (3, 5)]:
        e = HarmonicEnsemble(d, L)
        t = 0.8 * close_pair_threshold(e)
        res = np.array(sample_statistics(e, _SepAndPairs(t), 500, RngStream(SEED, 1000 + d)))
        mean_g, se_g = _mean_se(res[:, 1])
        bound = expected_close_pairs_bound(e, t)
        ok &= mean_g <= bound
        parts.append(f"(d={d},L={L}) MC mean G={mean_g:.4f}+-{se_g:.4f} vs bound {bound:.4f} "
                     f"(exact E G={expected_close_pairs(e, t):.4f})")
        if d == 2:
            seps = res[:, 0]
    n = 81
    for alpha in (0.5, 1.0):
        hits = seps <= alpha * n ** -0.75
        p = hits.mean()
        se = math.sqrt(p * (1 - p) / len(hits))
        ok &= p <= alpha ** 4 / 64 + 3 * se
        parts.append(f"P(sep<={alpha} n^-3/4)={p:.4f} vs {alpha ** 4 / 64:.4f}+3SE")
    worst = max(max(r.lower_violation, r.square_violation)
                for r in (jacobi_bound_check(d, L, 1000) for d in range(2, 7) for L in range(1, 31)))
    ok &= worst <= 1e-12
    parts.append(f"Jacobi bound worst violation {worst:.1e}")
    return ok, "; ".join(parts)


# --- 11 --------------------------------------------------------------------------

class _Discrepancy:
    def __init__(self, seed):
        self.seed = seed

    def __call__(self, x):
        return discrepancy_estimate(x, x.n, RngStream(self.seed, x.meta["stream_id"] + 2**32))


def _dpp_discrepancies(L, trials, seed):
    return np.array(sample_statistics(HarmonicEnsemble(2, L), _Discrepancy(seed), trials, RngStream(seed, 0)))


def criterion_11():
    trials = 20
    dpp = _dpp_discrepancies(31, trials, SEED + 31)
    uni = np.array([discrepancy_estimate(sample_uniform(2, 1024, RngStream(SEED + 1, t)), 1024,
                                         RngStream(SEED + 1, t + 2**32)) for t in range(trials)])
    ordered = np.median(dpp) < np.median(uni)
    ns, meds = [], []
    for L in (8, 16, 32):
        ns.append(dim_pi(2, L))
        meds.append(float(np.median(_dpp_discrepancies(L, trials, SEED + L))))
    slope = growth_exponent(ns, meds)
    ok = ordered and -0.85 <= slope <= -0.65
    return ok, (f"n=1024 medians: harmonic {np.median(dpp):.4f} < uniform {np.median(uni):.4f} is {ordered}; "
                f"log-log slope over n={ns}: {slope:.3f} (band [-0.85, -0.65]); "
                f"slope of median/log n: {growth_exponent(ns, np.array(meds) / np.log(ns)):.3f}")


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 12)}


def report(k):
    ok, detail = CRITERIA[k]()
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, flush=True)
    return ok, line


@pytest.mark.parametrize("k", list(CRITERIA))
def test_criterion(k, acceptance_lines):
    ok, line = report(k)
    acceptance_lines.append(line)
    assert ok, line


if __name__ == "__main__":
    chosen = [int(a) for a in sys.argv[1:]] or list(CRITERIA)
    results = [report(k)[0] for k in chosen]
    sys.exit(0 if all(results) else 1)
