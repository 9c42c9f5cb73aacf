"""Scalar special functions and orthogonal polynomial evaluation.

Jacobi and Gegenbauer polynomials are evaluated with the forward three-term
recurrence in the degree; all functions accept scalars or numpy arrays for
the argument ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class PolyParams:
    """Jacobi parameters ``(alpha, beta)`` and a degree."""

    alpha: float
    beta: float
    degree: int

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise DomainError(
                f"Jacobi exponents must exceed -1, got ({self.alpha}, {self.beta})"
            )
        if self.degree < 0 or int(self.degree) != self.degree:
            raise DomainError(f"degree must be a non-negative integer, got {self.degree}")

    @classmethod
    def harmonic(cls, d: int, L: int) -> "PolyParams":
        """Parameters ``(1 + lam, lam)``, ``lam = (d - 2) / 2`` of the kernel K_L on S^d."""
        lam = (d - 2) / 2
        return cls(1 + lam, lam, L)


def ln_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def digamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return float(special.digamma(x))


def harmonic_number(k: int) -> float:
    if k < 0:
        raise DomainError(f"harmonic number of negative index {k}")
    return math.fsum(1.0 / j for j in range(1, k + 1))


def ln_binom(x: float, k: int) -> float:
    """log of the generalized binomial coefficient binom(x, k) for x > k - 1."""
    return math.lgamma(x + 1) - math.lgamma(k + 1) - math.lgamma(x - k + 1)


def ln_pochhammer(x: float, k: float) -> float:
    """log of (x)_k = Gamma(x + k) / Gamma(x) for x > 0, x + k > 0."""
    return math.lgamma(x + k) - math.lgamma(x)


def jacobi_eval(p: PolyParams, t):
    """P_n^{(alpha, beta)}(t), normalized so that P_n(1) = binom(n + alpha, n)."""
    a, b, n = p.alpha, p.beta, p.degree
    t = np.asarray(t, dtype=float)
    if n == 0:
        return np.ones_like(t)[()]
    p_prev = np.ones_like(t)
    p_cur = (a + 1) + (a + b + 2) * (t - 1) / 2
    ab = a + b
    a2b2 = a * a - b * b
    for k in range(2, n + 1):
        c = 2 * k + ab
        denom = 2 * k * (k + ab) * (c - 2)
        c1 = (c - 1) * c * (c - 2) / denom
        c0 = (c - 1) * a2b2 / denom
        cm = 2 * (k + a - 1) * (k + b - 1) * c / denom
        p_prev, p_cur = p_cur, (c1 * t + c0) * p_cur - cm * p_prev
    return p_cur[()]


def gegenbauer_eval(lambda_param: float, k: int, t):
    """Gegenbauer C_k^lambda(t) with the standard normalization C_k(1) = binom(k + 2 lambda - 1, k)."""
    if lambda_param <= 0:
        raise DomainError(f"Gegenbauer parameter must be positive, got {lambda_param}")
    t = np.asarray(t, dtype=float)
    if k == 0:
        return np.ones_like(t)[()]
    c_prev = np.ones_like(t)
    c_cur = 2 * lambda_param * t
    for j in range(2, k + 1):
        c_prev, c_cur = c_cur, (2 * (j + lambda_param - 1) * t * c_cur - (j + 2 * lambda_param - 2) * c_prev) / j
    return c_cur[()]


def gegenbauer_all(lambda_param: float, kmax: int, t) -> np.ndarray:
    """Array of C_0..C_kmax evaluated at t, stacked along a new leading axis."""
    t = np.asarray(t, dtype=float)
    out = np.empty((kmax + 1,) + t.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2 * lambda_param * t
    for j in range(2, kmax + 1):
        out[j] = (2 * (j + lambda_param - 1) * t * out[j - 1] - (j + 2 * lambda_param - 2) * out[j - 2]) / j
    return out


def _check_hyp_domain(d, L, s):
    if d < 2 or L < 0:
        raise DomainError(f"need d >= 2 and L >= 0, got d={d}, L={L}")
    if not 0 <= s <= d:
        raise DomainError(f"terminating 4F3 defined for 0 < s < d, got s={s}, d={d}")


def hyp4f3_terms(d: int, L: int, s: float) -> list[float]:
    """Terms k = 0..L of the terminating 4F3 series F_L(s), by running Pochhammer ratios."""
    _check_hyp_domain(d, L, s)
    terms = [1.0]
    term = 1.0
    for k in range(L):
        num = (-L + k) * (d + L + k) * ((d - s) / 2 + k) * (-s / 2 + k)
        den = (d / 2 + 1 + k) * (d - s / 2 + L + k) * (-s / 2 - L + k) * (k + 1)
        term *= num / den
        terms.append(term)
    return terms


def hyp4f3_terminating(d: int, L: int, s: float) -> float:
    """F_L(s) = 4F3(-L, d+L, (d-s)/2, -s/2; d/2+1, d-s/2+L, -s/2-L; 1)."""
    _check_hyp_domain(d, L, s)
    if s == 0 or s == d:
        return 1.0
    return math.fsum(hyp4f3_terms(d, L, s))


def hyp4f3_ratio_terms(d: int, L: int, s: float) -> list[float]:
    """(-L)_k (d+L)_k / ((d-s/2+L)_k (-s/2-L)_k) for k = 0..L."""
    out = [1.0]
    r = 1.0
    for k in range(L):
        r *= (-L + k) * (d + L + k) / ((d - s / 2 + L + k) * (-s / 2 - L + k))
        out.append(r)
    return out


def gauss_2f1_at_one(d: int, s: float) -> float:
    """2F1((d-s)/2, -s/2; d/2+1; 1) by Gauss's summation theorem."""
    if not s > -1:
        raise DomainError(f"Gauss summation requires s > -1, got {s}")
    return math.exp(
        math.lgamma(1 + d / 2) + math.lgamma(1 + s)
        - math.lgamma(1 + s / 2) - math.lgamma(1 + (d + s) / 2)
    )
