"""Distribution-quality statistics of point configurations on S^d.

Cap counts and their variance, the variance of a coordinate statistic,
a lower estimate of the spherical-cap discrepancy, the separation distance
and close-pair counts, and the two sampler checks (orthant uniformity of
single points, binned pair correlation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate
from scipy import stats as sps
from scipy.spatial import cKDTree
from scipy.special import betainc, betaincinv

from .errors import AccuracyError, DomainError
from .kernels import HarmonicEnsemble, Kernel, kernel_eval
from .quadrature import gauss_jacobi_rule, sphere_surface, surface_ratio
from .sampling import PointConfiguration, RngStream, map_trials, sample_dpp, uniform_points
from .specfun import PolyParams, jacobi_eval

SEMIANALYTIC_RTOL = 1e-4
CENTER_CHUNK = 256


@dataclass(frozen=True)
class CapSpec:
    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        if abs(np.linalg.norm(c) - 1) > 1e-12:
            raise DomainError(f"cap center must be a unit vector, |c| = {np.linalg.norm(c)!r}")
        if not 0 < self.radius < math.pi:
            raise DomainError(f"cap radius must lie in (0, pi), got {self.radius}")
        object.__setattr__(self, "center", tuple(float(v) for v in c))

    @property
    def d(self) -> int:
        return len(self.center) - 1

    @classmethod
    def north(cls, d: int, radius: float) -> "CapSpec":
        return cls((0.0,) * d + (1.0,), radius)

    @classmethod
    def with_measure(cls, d: int, measure: float) -> "CapSpec":
        return cls.north(d, cap_radius(d, measure))


@dataclass
class StatReport:
    name: str
    estimate: float
    stderr: Optional[float] = None
    trials: int = 1
    reference: Optional[float] = None

    def __post_init__(self):
        if (self.stderr is not None) != (self.trials > 1):
            raise DomainError("standard error is reported exactly when trials > 1")

    def to_dict(self) -> dict:
        return {"statistic": self.name, "estimate": self.estimate, "stderr": self.stderr,
                "trials": self.trials, "reference": self.reference}


# --- caps ---------------------------------------------------------------------

def cap_measure(d: int, radius):
    """Normalized area of a cap of geodesic radius r: I_{sin^2(r/2)}(d/2, d/2)."""
    return betainc(d / 2, d / 2, np.sin(np.asarray(radius) / 2) ** 2)[()]


def cap_radius(d: int, measure: float) -> float:
    """Inverse of cap_measure."""
    if not 0 < measure < 1:
        raise DomainError(f"cap measure must lie in (0, 1), got {measure}")
    return 2 * math.asin(math.sqrt(float(betaincinv(d / 2, d / 2, measure))))


def count_in_cap(x: PointConfiguration, cap: CapSpec) -> int:
    if x.n == 0:
        return 0
    return int(np.count_nonzero(x.points @ np.asarray(cap.center) >= math.cos(cap.radius)))


class CapCounter:
    """Picklable reducer PointConfiguration -> count in a fixed cap."""

    def __init__(self, cap: CapSpec):
        self.cap = cap

    def __call__(self, x: PointConfiguration) -> int:
        return count_in_cap(x, self.cap)


class _DrawAndReduce:
    def __init__(self, kernel: Kernel, reduce):
        self.kernel = kernel
        self.reduce = reduce

    def __call__(self, rng: RngStream):
        return self.reduce(sample_dpp(self.kernel, rng))


def sample_statistics(kernel: Kernel, reduce, trials: int, rng: RngStream,
                      threads: int | None = None) -> list:
    """reduce(draw_t) for t < trials, one independent DPP draw per stream."""
    return map_trials(_DrawAndReduce(kernel, reduce), trials, rng, threads)


def variance_with_jackknife(values) -> tuple[float, float]:
    """Unbiased sample variance and its delete-one jackknife standard error."""
    v = np.asarray(values, dtype=float)
    n = len(v)
    if n < 2:
        raise DomainError("need at least two values for a variance")
    var = float(np.var(v, ddof=1))
    if n < 3:
        return var, float("nan")
    total, total2 = v.sum(), (v * v).sum()
    m = n - 1
    loo_mean = (total - v) / m
    loo = ((total2 - v * v) - m * loo_mean ** 2) / (m - 1)
    se = math.sqrt((n - 1) / n * float(np.sum((loo - loo.mean()) ** 2)))
    return var, se


def variance_cap_mc(kernel: Kernel, cap: CapSpec, trials: int, rng: RngStream,
                    threads: int | None = None) -> StatReport:
    if trials < 2:
        raise DomainError(f"variance needs trials >= 2, got {trials}")
    counts = sample_statistics(kernel, CapCounter(cap), trials, rng, threads)
    var, se = variance_with_jackknife(counts)
    return StatReport("var_n_A_mc", var, se, trials)


def _legendre(m: int):
    return np.polynomial.legendre.leggauss(m)


def _cap_variance(kernel: Kernel, r: float, m: int) -> float:
    """Integral over x in A, y outside A of K(<x, y>)^2, with A a cap of radius r <= pi/2."""
    d = kernel.d
    ratio = surface_ratio(d)
    z, w = _legendre(m)
    # outer: colatitude eta of x in (0, r)
    eta = r * (z + 1) / 2
    w_eta = r / 2 * w * ratio * np.sin(eta) ** (d - 1)
    # inner, region where y is surely outside: theta in (r + eta, pi)
    lo = r + eta
    th_out = lo[:, None] + (math.pi - lo)[:, None] * (z[None, :] + 1) / 2
    wt_out = (math.pi - lo)[:, None] / 2 * w[None, :]
    full = (wt_out * np.sin(th_out) ** (d - 1) * kernel_eval(kernel, np.cos(th_out)) ** 2).sum(axis=1)
    # transition theta in (r - eta, r + eta); cosine map removes the square-root edges
    a = (r - eta)[:, None]
    b = (r + eta)[:, None]
    phi = math.pi * (z[None, :] + 1) / 2
    th = a + (b - a) * (1 - np.cos(phi)) / 2
    dth = (b - a) * np.sin(phi) / 2 * math.pi / 2 * w[None, :]
    ws = (math.cos(r) - np.cos(th) * np.cos(eta)[:, None]) / (np.sin(th) * np.sin(eta)[:, None])
    frac = betainc((d - 1) / 2, (d - 1) / 2, np.clip((1 + ws) / 2, 0.0, 1.0))
    part = (dth * np.sin(th) ** (d - 1) * kernel_eval(kernel, np.cos(th)) ** 2 * frac).sum(axis=1)
    return float(np.dot(w_eta, ratio * (full + part)))


def variance_cap_semianalytic(kernel: Kernel, cap: CapSpec, m: int | None = None) -> float:
    """Var(n_A) as the double integral of K^2 over A x A^c, by nested quadrature.

    The cap and its complement give the same value, so the integral is always
    taken over the cap of radius min(r, pi - r). m and 2m nodes per axis must
    agree to 1e-4 relative; the default m = 2 max_degree + 32 resolves the
    oscillation of K^2 along both axes.
    """
    if cap.d != kernel.d:
        raise DomainError(f"cap lives on S^{cap.d}, kernel on S^{kernel.d}")
    r = min(cap.radius, math.pi - cap.radius)
    m = m or 2 * kernel.max_degree + 32
    coarse = _cap_variance(kernel, r, m)
    fine = _cap_variance(kernel, r, 2 * m)
    if abs(coarse - fine) > SEMIANALYTIC_RTOL * abs(fine):
        raise AccuracyError(f"cap variance unresolved: {coarse!r} with {m} nodes, {fine!r} with {2 * m}")
    return fine


def variance_coordinate_statistic(kernel: Kernel) -> float:
    """Exact Var(sum_i x_i) for one coordinate function."""
    d = kernel.d
    rule = gauss_jacobi_rule(d / 2, d / 2 - 1, kernel.max_degree + d + 8)
    return surface_ratio(d) * rule.integrate(kernel_eval(kernel, rule.nodes) ** 2) / (d + 1)


def growth_exponent(xs, ys) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


# --- discrepancy --------------------------------------------------------------

def _center_sup(points: np.ndarray, centers: np.ndarray, d: int) -> float:
    """Max over the given centers of the exact sup over radii of |n_A / n - mu(A)|."""
    n = len(points)
    k = np.arange(1, n + 1)
    best = 0.0
    for start in range(0, len(centers), CENTER_CHUNK):
        t = centers[start:start + CENTER_CHUNK] @ points.T
        t = -np.sort(-np.clip(t, -1.0, 1.0), axis=1)
        mu = cap_measure(d, np.arccos(t))
        # closed cap through the k-th nearest point holds k points; just inside it holds k - 1
        gap = np.maximum(k / n - mu, mu - (k - 1) / n)
        best = max(best, float(gap.max()))
    return best


def discrepancy_estimate(x: PointConfiguration, probes: int, rng: RngStream) -> float:
    """Lower estimate of the spherical-cap discrepancy.

    Centers are every point of x and ``probes`` uniformly random directions;
    for each center the supremum over all radii is exact, since the count
    only changes at radii through data points. Random centers come from a
    fixed stream, so a larger ``probes`` only enlarges the family.
    """
    if probes < 1:
        raise DomainError(f"probes must be >= 1, got {probes}")
    if x.n == 0:
        return 0.0
    centers = np.vstack([x.points, uniform_points(rng.generator(), probes, x.d)])
    return _center_sup(x.points, centers, x.d)


# --- separation and close pairs ----------------------------------------------

def _pair_distances(points: np.ndarray, i, j) -> np.ndarray:
    # one formula for every distance, so separation and close_pair_count agree bit for bit
    return np.linalg.norm(points[i] - points[j], axis=-1)


def separation(x: PointConfiguration) -> float:
    if x.n < 2:
        raise DomainError("separation distance needs at least two points")
    _, idx = cKDTree(x.points).query(x.points, k=2)
    return float(_pair_distances(x.points, np.arange(x.n), idx[:, 1]).min())


def close_pair_count(x: PointConfiguration, t: float) -> int:
    """Number of unordered pairs i < j with |x_i - x_j| <= t."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    n = x.n
    if t >= 2:
        return n * (n - 1) // 2
    if n < 2:
        return 0
    pairs = cKDTree(x.points).query_pairs(t * (1 + 1e-9) + 1e-15, output_type="ndarray")
    if len(pairs) == 0:
        return 0
    return int(np.count_nonzero(_pair_distances(x.points, pairs[:, 0], pairs[:, 1]) <= t))


def close_pair_threshold(e: HarmonicEnsemble) -> float:
    return (e.d + 6) / ((2 * e.L + e.d) * e.L)


def expected_close_pairs_bound(e: HarmonicEnsemble, t: float) -> float:
    """Upper bound for E G(t, x) valid for 0 <= t <= (d+6)/((2L+d)L)."""
    d, L = e.d, e.L
    if L < 1:
        raise DomainError("close-pair bound needs L >= 1")
    if not 0 <= t <= close_pair_threshold(e):
        raise DomainError(f"t={t} outside [0, {close_pair_threshold(e)}]")
    ratio = sphere_surface(d - 1) / sphere_surface(d)
    return L * (L + d) * e.n ** 2 * ratio * t ** (d + 2) / (2 * (d + 2) ** 2)


def expected_close_pairs(kernel: Kernel, t: float) -> float:
    """Exact E G(t, x): the pair intensity n^2 - K^2 integrated over chordal distance <= t."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    d, n = kernel.d, kernel.trace
    lo = max(-1.0, 1 - t * t / 2)

    def dens(u):
        return (n * n - kernel_eval(kernel, u) ** 2) * (1 - u * u) ** (d / 2 - 1)

    val = integrate.quad(dens, lo, 1.0, epsabs=0, epsrel=1e-12, limit=200)[0]
    return surface_ratio(d) * val / 2


def separation_scaled_bound(alpha: float) -> float:
    """Limit of the d = 2 close-pair bound at t = alpha n^{-3/4}."""
    return alpha ** 4 / 64


@dataclass
class JacobiBoundReport:
    d: int
    L: int
    grid: int
    lower_violation: float
    square_violation: float
    tol: float = 1e-12

    @property
    def ok(self) -> bool:
        return max(self.lower_violation, self.square_violation) <= self.tol

    def to_dict(self) -> dict:
        return {"d": self.d, "L": self.L, "grid": self.grid, "lower_violation": self.lower_violation,
                "square_violation": self.square_violation, "ok": self.ok}


def jacobi_bound_check(d: int, L: int, grid: int) -> JacobiBoundReport:
    """Check 1 - c s <= P(1-s)/P(1) and 1 - (P(1-s)/P(1))^2 <= 2 c s, c = (L^2 + L d)/(d + 2)."""
    if grid < 2:
        raise DomainError(f"grid must be >= 2, got {grid}")
    if L < 1:
        raise DomainError("the bound is stated for L >= 1")
    s = np.linspace(0.0, (d + 6) / ((2 * L + d) * L), grid)
    p = PolyParams.harmonic(d, L)
    ratio = jacobi_eval(p, 1 - s) / jacobi_eval(p, 1.0)
    c = (L * L + L * d) / (d + 2)
    lower = float(np.max(np.maximum(1 - c * s - ratio, 0.0)))
    square = float(np.max(np.maximum(1 - ratio ** 2 - 2 * c * s, 0.0)))
    return JacobiBoundReport(d, L, grid, lower, square)


# --- sampler checks -----------------------------------------------------------

def orthant_chi_square(points) -> tuple[float, float]:
    """Chi-square statistic and p-value of orthant counts against equal cell probabilities."""
    pts = np.asarray(points, dtype=float)
    cells = (pts > 0).astype(int) @ (1 << np.arange(pts.shape[1]))
    counts = np.bincount(cells, minlength=1 << pts.shape[1])
    res = sps.chisquare(counts)
    return float(res.statistic), float(res.pvalue)


def equal_measure_edges(d: int, bins: int) -> np.ndarray:
    """Edges in t = <x, y> splitting the zonal measure of S^d into equal parts."""
    q = np.linspace(0, 1, bins + 1)
    edges = 2 * betaincinv(d / 2, d / 2, q) - 1
    edges[0], edges[-1] = -1.0, 1.0
    return edges


def pair_histogram(x: PointConfiguration, edges: np.ndarray) -> np.ndarray:
    """Unordered-pair counts of inner products in each bin."""
    g = x.points @ x.points.T
    iu = np.triu_indices(x.n, 1)
    return np.histogram(np.clip(g[iu], -1, 1), bins=edges)[0]


class PairHistogram:
    def __init__(self, edges):
        self.edges = np.asarray(edges)

    def __call__(self, x: PointConfiguration) -> np.ndarray:
        return pair_histogram(x, self.edges)


def expected_pair_histogram(kernel: Kernel, edges: np.ndarray) -> np.ndarray:
    """Expected unordered-pair counts per bin from the pair intensity n^2 - K(t)^2."""
    d = kernel.d
    n = kernel.trace
    ratio = surface_ratio(d)

    def dens(t):
        return (n * n - kernel_eval(kernel, t) ** 2) * (1 - t * t) ** (d / 2 - 1)

    out = [integrate.quad(dens, a, b, epsabs=0, epsrel=1e-12, limit=200)[0] for a, b in zip(edges[:-1], edges[1:])]
    return ratio * np.array(out) / 2


def hotelling_pvalue(samples, mean) -> tuple[float, float]:
    """Hotelling T^2 test of a mean vector; the last coordinate is dropped (counts sum to a constant)."""
    x = np.asarray(samples, dtype=float)[:, :-1]
    mu = np.asarray(mean, dtype=float)[:-1]
    N, p = x.shape
    diff = x.mean(axis=0) - mu
    cov = np.cov(x, rowvar=False)
    t2 = float(N * diff @ np.linalg.solve(cov, diff))
    f = (N - p) / (p * (N - 1)) * t2
    return t2, float(sps.f.sf(f, p, N - p))
