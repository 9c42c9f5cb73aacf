"""Gauss-Jacobi rules and the Funk-Hecke reduction of zonal integrals on S^d."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

EIG_TOL = 1e-14
EIG_MAX_ITER = 50


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights for the weight (1 - t)^alpha (1 + t)^beta on [-1, 1]."""

    alpha: float
    beta: float
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values) -> float:
        """Apply the rule to integrand values sampled at ``nodes``."""
        return math.fsum(self.weights * np.asarray(values, dtype=float))


def jacobi_moment0(alpha: float, beta: float) -> float:
    """Integral of (1 - t)^alpha (1 + t)^beta over [-1, 1], i.e. 2^{a+b+1} B(a+1, b+1)."""
    return math.exp(
        (alpha + beta + 1) * math.log(2)
        + math.lgamma(alpha + 1) + math.lgamma(beta + 1) - math.lgamma(alpha + beta + 2)
    )


def jacobi_recurrence(alpha: float, beta: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Monic recurrence coefficients (a_k, b_k) of the Jacobi polynomials, k < m.

    ``b[0]`` holds the zeroth moment; ``b[k]`` for k >= 1 is the squared
    off-diagonal entry of the Jacobi matrix.
    """
    a = np.empty(m)
    b = np.empty(m)
    ab = alpha + beta
    a[0] = (beta - alpha) / (ab + 2)
    b[0] = jacobi_moment0(alpha, beta)
    for k in range(1, m):
        c = 2 * k + ab
        a[k] = (beta * beta - alpha * alpha) / (c * (c + 2))
        if k == 1:
            b[k] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        else:
            b[k] = 4 * k * (k + alpha) * (k + beta) * (k + ab) / (c * c * (c + 1) * (c - 1))
    return a, b


def tridiagonal_eig_first(diag, offdiag, tol: float = EIG_TOL, max_iter: int = EIG_MAX_ITER):
    """Eigenvalues and first eigenvector components of a symmetric tridiagonal matrix.

    Implicit QL with Wilkinson-type shifts; only the first row of the
    eigenvector matrix is accumulated (all Golub-Welsch needs).
    """
    d = [float(x) for x in diag]
    n = len(d)
    e = [float(x) for x in offdiag] + [0.0]
    z = [0.0] * n
    z[0] = 1.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                raise ConvergenceError(
                    f"tridiagonal QL did not converge for eigenvalue {l} in {max_iter} iterations"
                )
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    d = np.array(d)
    z = np.array(z)
    order = np.argsort(d)
    return d[order], z[order]


@lru_cache(maxsize=512)
def _rule(alpha: float, beta: float, m: int) -> QuadratureRule:
    a, b = jacobi_recurrence(alpha, beta, m)
    nodes, first = tridiagonal_eig_first(a, np.sqrt(b[1:]))
    weights = b[0] * first**2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(alpha, beta, nodes, weights)


def gauss_jacobi_rule(alpha: float, beta: float, m: int) -> QuadratureRule:
    """m-point Gauss-Jacobi rule (Golub-Welsch), exact up to degree 2m - 1."""
    if m < 1 or int(m) != m:
        raise DomainError(f"number of nodes must be a positive integer, got {m}")
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"weight exponents must exceed -1, got ({alpha}, {beta})")
    return _rule(float(alpha), float(beta), int(m))


def sphere_surface(d: int) -> float:
    """Surface area omega_d of the unit sphere S^d in R^{d+1}."""
    if d < 1:
        raise DomainError(f"sphere dimension must be >= 1, got {d}")
    return 2 * math.exp((d + 1) / 2 * math.log(math.pi) - math.lgamma((d + 1) / 2))


def surface_ratio(d: int) -> float:
    """omega_{d-1} / omega_d."""
    return math.exp(math.lgamma((d + 1) / 2) - math.lgamma(d / 2)) / math.sqrt(math.pi)


def zonal_integral(d: int, g, extra_alpha: float = 0.0, extra_beta: float = 0.0,
                   m: int = 64) -> float:
    """Integral over S^d (normalized measure) of x -> g(<x, v>).

    Extra exponents multiply the Funk-Hecke weight (1 - t^2)^{d/2 - 1} by
    (1 - t)^extra_alpha (1 + t)^extra_beta, so endpoint singularities of the
    integrand can be absorbed into the weight instead of being sampled.
    """
    if d < 2:
        raise DomainError(f"zonal reduction implemented for d >= 2, got {d}")
    alpha = d / 2 - 1 + extra_alpha
    beta = d / 2 - 1 + extra_beta
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"non-integrable weight exponents ({alpha}, {beta})")
    rule = gauss_jacobi_rule(alpha, beta, m)
    return surface_ratio(d) * rule.integrate(g(rule.nodes))
