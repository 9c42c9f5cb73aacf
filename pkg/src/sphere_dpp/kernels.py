"""Isotropic projection kernels on S^d.

A rotation-invariant projection kernel is a finite sum of zonal harmonics,
so it is stored as the set of included degrees; the Gegenbauer coefficient
of an included degree ell is forced to be (2 ell + d - 1) / (d - 1).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DomainError, NumericalError
from .specfun import PolyParams, gegenbauer_all, jacobi_eval

MAX_ENUMERATED = 10**6


def dim_harmonic(d: int, ell: int) -> int:
    """Dimension h_ell of the degree-ell spherical harmonics on S^d."""
    if d < 2 or ell < 0:
        raise DomainError(f"need d >= 2 and ell >= 0, got d={d}, ell={ell}")
    # (2l + d - 1)/(l + d - 1) * binom(l + d - 1, l) = (2l + d - 1) * (l + d - 2)! / (l! (d - 1)!)
    return (2 * ell + d - 1) * math.comb(ell + d - 2, ell) // (d - 1)


def dim_pi(d: int, L: int) -> int:
    """Dimension pi_L of the polynomials of degree <= L restricted to S^d."""
    if d < 2 or L < 0:
        raise DomainError(f"need d >= 2 and L >= 0, got d={d}, L={L}")
    return (2 * L + d) * math.comb(d + L - 1, L) // d


def zonal_coefficient(d: int, ell: int) -> Fraction:
    """Gegenbauer coefficient a_ell = (2 ell + d - 1)/(d - 1) of the zonal harmonic Z_ell."""
    return Fraction(2 * ell + d - 1, d - 1)


@dataclass(frozen=True)
class HarmonicEnsemble:
    d: int
    L: int

    def __post_init__(self):
        if self.d < 2 or self.L < 0:
            raise DomainError(f"harmonic ensemble needs d >= 2, L >= 0, got {self}")

    @property
    def lam(self) -> float:
        return (self.d - 2) / 2

    @property
    def n(self) -> int:
        return dim_pi(self.d, self.L)

    trace = n

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(range(self.L + 1))

    @property
    def max_degree(self) -> int:
        return self.L

    def as_projection(self) -> "IsotropicProjectionKernel":
        return IsotropicProjectionKernel(self.d, self.degrees)

    def to_dict(self) -> dict:
        return {"d": self.d, "L": self.L}

    def __call__(self, t):
        return harmonic_kernel_eval(self, t)


@dataclass(frozen=True)
class IsotropicProjectionKernel:
    d: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        degs = tuple(sorted(set(int(x) for x in self.degrees)))
        if self.d < 2:
            raise DomainError(f"isotropic kernels implemented for d >= 2, got {self.d}")
        if not degs or degs[0] < 0:
            raise DomainError(f"degree set must be non-empty and non-negative, got {self.degrees}")
        object.__setattr__(self, "degrees", degs)

    @property
    def trace(self) -> int:
        return sum(dim_harmonic(self.d, ell) for ell in self.degrees)

    n = trace

    @property
    def max_degree(self) -> int:
        return self.degrees[-1]

    def coefficients(self) -> list[Fraction]:
        """Dense coefficient vector a_0..a_maxdeg (zero for excluded degrees)."""
        a = [Fraction(0)] * (self.max_degree + 1)
        for ell in self.degrees:
            a[ell] = zonal_coefficient(self.d, ell)
        return a

    def is_harmonic(self) -> bool:
        return self.degrees == tuple(range(self.max_degree + 1))

    def to_dict(self) -> dict:
        return {"d": self.d, "degrees": list(self.degrees)}

    def __call__(self, t):
        return isotropic_kernel_eval(self, t)


Kernel = Union[HarmonicEnsemble, IsotropicProjectionKernel]


def harmonic_kernel_eval(e: HarmonicEnsemble, t):
    """K_L(t) = pi_L / binom(L + d/2, L) * P_L^{(1+lam, lam)}(t)."""
    p = PolyParams.harmonic(e.d, e.L)
    scale = e.n * math.exp(
        math.lgamma(e.L + 1) + math.lgamma(e.d / 2 + 1) - math.lgamma(e.L + e.d / 2 + 1)
    )
    return scale * jacobi_eval(p, t)


def isotropic_kernel_eval(k: IsotropicProjectionKernel, t):
    """Sum of zonal harmonics over the degree set, from one Gegenbauer recurrence pass."""
    d = k.d
    lam = (d - 1) / 2
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    c_prev = np.ones_like(t)
    c_cur = 2 * lam * t
    included = set(k.degrees)
    if 0 in included:
        out += 1.0
    if 1 in included:
        out += (d + 1) / (d - 1) * c_cur
    for j in range(2, k.max_degree + 1):
        c_prev, c_cur = c_cur, (2 * (j + lam - 1) * t * c_cur - (j + 2 * lam - 2) * c_prev) / j
        if j in included:
            out += (2 * j + d - 1) / (d - 1) * c_cur
    return out[()]


def kernel_eval(k: Kernel, t):
    if isinstance(k, HarmonicEnsemble):
        return harmonic_kernel_eval(k, t)
    return isotropic_kernel_eval(k, t)


def zonal_harmonics(d: int, kmax: int, t) -> np.ndarray:
    """Z_0..Z_kmax at t (leading axis is the degree)."""
    c = gegenbauer_all((d - 1) / 2, kmax, t)
    scale = np.array([(2 * j + d - 1) / (d - 1) for j in range(kmax + 1)])
    return c * scale.reshape((-1,) + (1,) * (c.ndim - 1))


def enumerate_projection_kernels(d: int, n: int, max_degree: int,
                                 limit: int = MAX_ENUMERATED) -> list[IsotropicProjectionKernel]:
    """All degree subsets of {0..max_degree} whose harmonic dimensions sum to n.

    Results come in lexicographic order of the sorted degree lists. More than
    ``limit`` matches raises, with the count in the message.
    """
    if d < 2 or n < 1 or max_degree < 0:
        raise DomainError(f"need d >= 2, n >= 1, max_degree >= 0; got {d}, {n}, {max_degree}")
    h = [dim_harmonic(d, ell) for ell in range(max_degree + 1)]
    suffix = [0] * (max_degree + 2)
    for ell in range(max_degree, -1, -1):
        suffix[ell] = suffix[ell + 1] + h[ell]
    found: list[tuple[int, ...]] = []
    count = 0

    def walk(start, total, chosen):
        nonlocal count
        for ell in range(start, max_degree + 1):
            new = total + h[ell]
            if new > n:
                # h is increasing in ell, nothing further fits
                break
            chosen.append(ell)
            if new == n:
                count += 1
                if count > limit:
                    raise NumericalError(f"more than {limit} kernels with trace {n}; refusing to enumerate")
                found.append(tuple(chosen))
            elif new + suffix[ell + 1] >= n:
                walk(ell + 1, new, chosen)
            chosen.pop()

    walk(0, 0, [])
    return [IsotropicProjectionKernel(d, degs) for degs in found]


def count_projection_kernels(d: int, n: int, max_degree: int) -> int:
    """Number of degree subsets with trace n, by dynamic programming (no enumeration)."""
    ways = [0] * (n + 1)
    ways[0] = 1
    for ell in range(max_degree + 1):
        h = dim_harmonic(d, ell)
        for total in range(n, h - 1, -1):
            ways[total] += ways[total - h]
    return ways[n]


def kernel_from_dict(spec: dict) -> Kernel:
    """Inverse of ``to_dict``: {"d", "L"} is the harmonic ensemble, {"d", "degrees"} a general kernel."""
    if "L" in spec:
        return HarmonicEnsemble(int(spec["d"]), int(spec["L"]))
    if "degrees" in spec:
        return IsotropicProjectionKernel(int(spec["d"]), tuple(spec["degrees"]))
    raise DomainError(f"kernel spec needs 'L' or 'degrees': {spec}")


def load_kernel(path) -> Kernel:
    with open(path) as fh:
        return kernel_from_dict(json.load(fh))
