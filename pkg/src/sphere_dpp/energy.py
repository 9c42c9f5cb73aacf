"""Discrete energies of point sets and expected energies of isotropic projection DPPs.

Energies follow the ordered-pair convention sum_{i != j}, so every unordered
pair is counted twice, both in the discrete sums and in the expectations.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ComparisonError, DivergentEnergyError, DomainError, PoleError, SingularConfigurationError
from .kernels import HarmonicEnsemble, IsotropicProjectionKernel, Kernel, dim_pi, kernel_eval
from .quadrature import gauss_jacobi_rule, surface_ratio
from .sampling import PointConfiguration, resolve_threads
from .specfun import digamma, gegenbauer_eval, harmonic_number, hyp4f3_terminating

COINCIDENT = 1e-14
BLOCK = 256
FD_STEP = 1e-5


@dataclass
class EnergyReport:
    s: float
    n: int
    discrete_value: float
    expected_value: Optional[float] = None
    asymptotic_value: Optional[float] = None

    def to_dict(self) -> dict:
        return {"s": self.s, "n": self.n, "discrete": self.discrete_value,
                "expected": self.expected_value, "asymptotic": self.asymptotic_value}


# --- discrete energies -------------------------------------------------------

def _block_sums(points: np.ndarray, pair_fn, threads: int | None) -> float:
    """Sum pair_fn(dist) over unordered pairs i < j, deterministic in block order."""
    n = len(points)
    starts = list(range(0, max(n - 1, 0), BLOCK))

    def block(start):
        stop = min(start + BLOCK, n - 1)
        partial = []
        for i in range(start, stop):
            dist = np.linalg.norm(points[i + 1:] - points[i], axis=1)
            if dist.size and dist.min() < COINCIDENT:
                raise SingularConfigurationError(f"point {i} coincides with a later point")
            partial.append(math.fsum(pair_fn(dist)))
        return math.fsum(partial)

    workers = resolve_threads(threads)
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(block, starts))
    else:
        sums = [block(s) for s in starts]
    return math.fsum(sums)


def discrete_riesz(x: PointConfiguration, s: float, threads: int | None = None) -> float:
    if not s > 0:
        raise DomainError(f"Riesz exponent must be positive, got {s}; use discrete_log for s = 0")
    return 2.0 * _block_sums(x.points, lambda r: r ** (-s), threads)


def discrete_log(x: PointConfiguration, threads: int | None = None) -> float:
    return 2.0 * _block_sums(x.points, lambda r: -np.log(r), threads)


def discrete_energy(x: PointConfiguration, s: float, threads: int | None = None) -> float:
    """Riesz s-energy for s > 0, logarithmic energy for s == 0."""
    return discrete_log(x, threads) if s == 0 else discrete_riesz(x, s, threads)


# --- continuous energies -----------------------------------------------------

def continuous_vs(d: int, s: float) -> float:
    """Riesz s-energy V_s(S^d) of the normalized surface measure."""
    if s >= d:
        raise PoleError(f"V_s(S^{d}) is infinite for s >= d (s={s})")
    if s < 0:
        raise DomainError(f"continuous_vs needs 0 <= s < d, got {s}")
    return math.exp(
        (d - s - 1) * math.log(2) + math.lgamma((d + 1) / 2) + math.lgamma((d - s) / 2)
        - 0.5 * math.log(math.pi) - math.lgamma(d - s / 2)
    )


def continuous_vs_beta(d: int, s: float) -> float:
    """Same quantity through the Beta-function form (independent route)."""
    lam = (d - 2) / 2
    log_beta = math.lgamma(lam + 1) + math.lgamma(lam + 1 - s / 2) - math.lgamma(2 * lam + 2 - s / 2)
    return surface_ratio(d) * 2 ** (d - s - 1) * math.exp(log_beta)


def continuous_vlog(d: int) -> float:
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    return 0.5 * (digamma(d) - digamma(d / 2)) - math.log(2)


def one_sided_derivative(g, h: float = FD_STEP, g0: float | None = None) -> float:
    """Second-order one-sided difference (-3 g(0) + 4 g(h) - g(2h)) / (2h)."""
    if g0 is None:
        g0 = g(0.0)
    return (-3.0 * g0 + 4.0 * g(h) - g(2 * h)) / (2 * h)


# --- harmonic ensemble closed forms ------------------------------------------

def _ln_binom_half(d: int, L: int) -> float:
    # log binom(L + d/2, L)
    return math.lgamma(L + d / 2 + 1) - math.lgamma(L + 1) - math.lgamma(d / 2 + 1)


def ln_c_sdL(d: int, L: int, s: float) -> float:
    """log C_{s,d}(L) = log[Gamma(L+d/2) Gamma(L+d/2+1) Gamma(L+s/2+1) / (Gamma(L+1)^2 Gamma(L-s/2+d))]."""
    return (math.lgamma(L + d / 2) + math.lgamma(L + d / 2 + 1) + math.lgamma(L + s / 2 + 1)
            - 2 * math.lgamma(L + 1) - math.lgamma(L - s / 2 + d))


def expected_riesz_harmonic(d: int, L: int, s: float) -> float:
    """Expected Riesz s-energy of the harmonic ensemble, closed 4F3 form, 0 < s < d.

    s = 0 is accepted as the limit of the same formula, which is the
    expected number of ordered pairs n (n - 1).
    """
    if not 0 <= s < d:
        raise DomainError(f"closed form valid for 0 < s < d, got s={s}, d={d}")
    n = dim_pi(d, L)
    ln_pref = ((d - 1 - s) * math.log(2) + math.log(surface_ratio(d)) + 2 * math.log(n)
               - 2 * _ln_binom_half(d, L)
               + math.lgamma((d - s) / 2) - math.lgamma(1 + d / 2) - math.lgamma(1 + s / 2)
               + ln_c_sdL(d, L, s))
    vs = continuous_vs(d, s)
    return n * n * vs - math.exp(ln_pref) * hyp4f3_terminating(d, L, s)


def _kernel_nodes(kernel: Kernel) -> int:
    return kernel.max_degree + kernel.d + 8


def expected_riesz_quadrature(kernel: Kernel, s: float, m: int | None = None) -> float:
    """Expected Riesz s-energy of any isotropic projection DPP by exact Gauss-Jacobi quadrature.

    For s < d the energy is n^2 V_s minus a Jacobi-weighted integral of K^2;
    for d <= s < d + 2 the difference (n^2 - K(t)^2) / (1 - t), a polynomial,
    is integrated against (1 - t)^{(d - s)/2} (1 + t)^{d/2 - 1}.
    """
    d = kernel.d
    if not 0 < s < d + 2:
        raise DivergentEnergyError(f"expected s-energy is infinite unless 0 < s < d + 2 (s={s}, d={d})")
    n = kernel.trace
    m = m or _kernel_nodes(kernel)
    ratio = surface_ratio(d)
    if s < d:
        rule = gauss_jacobi_rule(d / 2 - 1 - s / 2, d / 2 - 1, m)
        k2 = kernel_eval(kernel, rule.nodes) ** 2
        log_b = math.lgamma(d / 2) + math.lgamma(d / 2 - s / 2) - math.lgamma(d - s / 2)
        first = n * n * 2 ** (d - 1 - s / 2) * math.exp(log_b)
        return ratio * 2 ** (-s / 2) * (first - rule.integrate(k2))
    rule = gauss_jacobi_rule(d / 2 - s / 2, d / 2 - 1, m)
    kt = kernel_eval(kernel, rule.nodes)
    quotient = (n - kt) * (n + kt) / (1 - rule.nodes)
    return ratio * 2 ** (-s / 2) * rule.integrate(quotient)


def asymptotic_riesz_constant(d: int, s: float) -> float:
    """C_{s,d} in E E_s = V_s n^2 - C_{s,d} n^{1 + s/d} + o(n^{1 + s/d})."""
    if not 0 < s < d:
        raise DomainError(f"asymptotic constant defined for 0 < s < d, got {s}")
    ln_rest = (math.log(d) + math.lgamma(1 + d / 2) + math.lgamma((1 + s) / 2) + math.lgamma(d - s / 2)
               - 0.5 * math.log(math.pi) - math.lgamma(1 + s / 2) - math.lgamma(1 + (s + d) / 2))
    ln_fact = (-1 + s / d) * math.lgamma(d + 1)
    return 2 ** (s - s / d) * continuous_vs(d, s) * math.exp(ln_fact + ln_rest)


def expected_log_harmonic(d: int, L: int) -> float:
    n = dim_pi(d, L)
    inner = (math.fsum(1.0 / (d / 2 + k) for k in range(1, L + 1)) + harmonic_number(L + d - 1)
             + digamma(0.5) - digamma(d / 2))
    return n * n * continuous_vlog(d) - n / 2 * inner


def log_energy_from_derivative(d: int, L: int, h: float = FD_STEP) -> float:
    """d/ds at s = 0+ of the closed-form Riesz expectation (one-sided, step h)."""
    return one_sided_derivative(lambda s: expected_riesz_harmonic(d, L, s), h)


def log_asymptotic_constant(d: int) -> float:
    return math.log(2 / math.factorial(d)) / d + math.log(2) + digamma(d / 2) + 1 / d


def singular_asymptotic_constant(d: int) -> float:
    """C_{d,d} in E E_d = omega_{d-1}/(d omega_d) n^2 log n + C_{d,d} n^2 + o(n^2)."""
    return (surface_ratio(d) / 2 * (digamma(d + 1) - digamma(d / 2 + 1)) - digamma(d / 2)
            - 1 / d - math.log(2 / math.factorial(d)) / d)


def singular_second_order_constant(d: int) -> float:
    """n^2 coefficient of E E_d obtained when omega_{d-1}/omega_d multiplies every term.

    Carrying the limit of n^2 V_s (1 - U(s)) through s -> d gives
    R [F'(d) - psi(d/2) - 1/d - log(2/d!)/d] with R = omega_{d-1}/omega_d;
    exact quadrature of E E_d converges to this value, not to
    singular_asymptotic_constant.
    """
    r = surface_ratio(d)
    return r * (0.5 * (digamma(d + 1) - digamma(d / 2 + 1)) - digamma(d / 2)
                - 1 / d - math.log(2 / math.factorial(d)) / d)


def singular_leading_coefficient(d: int) -> float:
    return surface_ratio(d) / d


def asymptotic_energy(d: int, L: int, s: float) -> float:
    """Two-term asymptotic prediction for the harmonic ensemble with n = pi_L points."""
    n = dim_pi(d, L)
    if s == 0:
        return n * n * continuous_vlog(d) - n * math.log(n) / d + log_asymptotic_constant(d) * n
    if s == d:
        return singular_leading_coefficient(d) * n * n * math.log(n) + singular_second_order_constant(d) * n * n
    return continuous_vs(d, s) * n * n - asymptotic_riesz_constant(d, s) * n ** (1 + s / d)


def expected_energy(kernel: Kernel, s: float) -> float:
    """Best available expectation: closed forms for the harmonic ensemble, quadrature otherwise."""
    if isinstance(kernel, HarmonicEnsemble):
        if s == 0:
            return expected_log_harmonic(kernel.d, kernel.L)
        if s < kernel.d:
            return expected_riesz_harmonic(kernel.d, kernel.L, s)
    elif s == 0:
        raise DomainError("log-energy expectation is only available for the harmonic ensemble")
    return expected_riesz_quadrature(kernel, s)


def energy_report(x: PointConfiguration, s: float, kernel: Kernel | None = None,
                  threads: int | None = None) -> EnergyReport:
    rep = EnergyReport(s=s, n=x.n, discrete_value=discrete_energy(x, s, threads))
    if kernel is not None:
        rep.expected_value = expected_energy(kernel, s)
        if isinstance(kernel, HarmonicEnsemble) and (s <= kernel.d):
            rep.asymptotic_value = asymptotic_energy(kernel.d, kernel.L, s)
    return rep


# --- the s = 2 machinery -----------------------------------------------------

def _require_d3(d):
    if d < 3:
        raise PoleError(f"the s = 2 closed forms need d >= 3 (V_2 has a pole at d = 2), got d={d}")


def q_integral(d: int, k: int, j: int) -> float:
    """Integral of (1-t)^{d/2-2} (1+t)^{d/2-1} C_k C_j (Gegenbauer, parameter (d-1)/2) over [-1, 1]."""
    _require_d3(d)
    lo = min(k, j)
    log_b = math.lgamma(d / 2) + math.lgamma(d / 2 - 1) - math.lgamma(d - 1)
    return math.comb(d + lo - 2, lo) * 2 ** (d - 2) * math.exp(log_b)


def q_integral_quadrature(d: int, k: int, j: int) -> float:
    """The defining integral of q_integral, by Gauss-Jacobi (oracle)."""
    _require_d3(d)
    rule = gauss_jacobi_rule(d / 2 - 2, d / 2 - 1, (k + j) // 2 + 4)
    lam = (d - 1) / 2
    return rule.integrate(gegenbauer_eval(lam, k, rule.nodes) * gegenbauer_eval(lam, j, rule.nodes))


def _as_projection(kernel: Kernel) -> IsotropicProjectionKernel:
    return kernel.as_projection() if isinstance(kernel, HarmonicEnsemble) else kernel


def quadratic_form_exact(kernel: Kernel) -> Fraction:
    """sum_l a_l binom(d+l-2, l) (a_l + 2 sum_{j>l} a_j), exactly."""
    k = _as_projection(kernel)
    d = k.d
    a = k.coefficients()
    total = Fraction(0)
    tail = Fraction(0)
    for ell in range(len(a) - 1, -1, -1):
        if a[ell]:
            total += a[ell] * math.comb(d + ell - 2, ell) * (a[ell] + 2 * tail)
        tail += a[ell]
    return total


def kernel_quadratic_form(kernel: Kernel) -> float:
    """F(a) = a^T M a with M_kj = binom(d + min(k, j) - 2, min(k, j))."""
    k = _as_projection(kernel)
    _require_d3(k.d)
    a = np.array([float(c) for c in k.coefficients()])
    idx = np.arange(len(a))
    lo = np.minimum.outer(idx, idx)
    M = np.vectorize(lambda q: float(math.comb(k.d + q - 2, q)))(lo)
    return float(a @ M @ a)


def expected_e2_closed_form(kernel: Kernel) -> float:
    """Expected Riesz 2-energy, d >= 3, from the Gegenbauer coefficients."""
    k = _as_projection(kernel)
    _require_d3(k.d)
    n = k.trace
    return continuous_vs(k.d, 2) * float(n * n - quadratic_form_exact(k))


def expected_e2_harmonic_sum(d: int, L: int) -> float:
    """Harmonic-kernel specialization written out with a_l = (2l + d - 1)/(d - 1)."""
    _require_d3(d)
    n = dim_pi(d, L)
    a = [Fraction(2 * ell + d - 1, d - 1) for ell in range(L + 1)]
    s = sum(a[ell] * math.comb(d + ell - 2, ell) * (a[ell] + 2 * sum(a[ell + 1:], Fraction(0)))
            for ell in range(L + 1))
    return continuous_vs(d, 2) * float(n * n - s)


@dataclass
class KernelComparison:
    ordering: str
    energy_a: float
    energy_b: float
    form_a: float
    form_b: float
    holes_hypothesis: bool

    def to_dict(self) -> dict:
        return asdict(self)


def holes_hypothesis(a: Kernel, b: Kernel) -> bool:
    """True when every hole of a (a_i = 0 below some a_j > 0) is also a hole of b."""
    da = set(_as_projection(a).degrees)
    db = set(_as_projection(b).degrees)
    top = max(da)
    return all(i not in db for i in range(top) if i not in da)


def compare_kernels(a: Kernel, b: Kernel) -> KernelComparison:
    """Order the expected 2-energies of two kernels with the same d >= 3 and trace.

    ``ordering`` is '<', '=' or '>' for E_a versus E_b; it is decided from the
    exact rational quadratic forms, so ties are exact.
    """
    ka, kb = _as_projection(a), _as_projection(b)
    if ka.d != kb.d or ka.trace != kb.trace:
        raise ComparisonError(f"kernels differ in dimension or trace: {ka.to_dict()} vs {kb.to_dict()}")
    _require_d3(ka.d)
    fa, fb = quadratic_form_exact(ka), quadratic_form_exact(kb)
    ordering = "=" if fa == fb else ("<" if fa > fb else ">")
    return KernelComparison(ordering, expected_e2_closed_form(ka), expected_e2_closed_form(kb),
                            float(fa), float(fb), holes_hypothesis(ka, kb))
