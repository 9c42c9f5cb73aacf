"""Exact sampling of isotropic projection DPPs on S^d, and i.i.d. uniform points.

The DPP sampler is the sequential (HKPV) scheme written purely in terms of
the kernel: after i points the next one has density
(K(x, x) - k_x^T G_i^{-1} k_x) / (n - i) with respect to the uniform
measure, where G_i is the Gram matrix of the accepted points. Each
conditional is sampled by rejection from the uniform law, accepting with
probability 1 - v_i(x) / n. The Cholesky factor of G_i grows by one row per
accepted point; that row is exactly the triangular solve already computed
for the acceptance test.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DegeneracyError, DomainError, SamplerStallError
from .kernels import HarmonicEnsemble, Kernel, kernel_eval

MAX_PROPOSALS = 10**6
ACCEPT_SLACK = 1e-8
PIVOT_FLOOR = 1e-10
THREADS_ENV = "SPHERE_DPP_THREADS"


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by (seed, stream_id)."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for v in (self.seed, self.stream_id):
            if not 0 <= v < 2**64:
                raise DomainError(f"seed and stream_id must be 64-bit unsigned, got {v}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))

    def trial(self, t: int) -> "RngStream":
        """Stream for Monte Carlo trial t (same seed, stream_id = t)."""
        return RngStream(self.seed, t)


@dataclass
class PointConfiguration:
    d: int
    points: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, self.d + 1)
        self.points = pts

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def check_unit(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.linalg.norm(self.points, axis=1) - 1) <= tol))


def uniform_points(gen: np.random.Generator, n: int, d: int) -> np.ndarray:
    x = gen.standard_normal((n, d + 1))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x


def sample_uniform(d: int, n: int, rng: RngStream) -> PointConfiguration:
    if d < 2 or n < 1:
        raise DomainError(f"need d >= 2 and n >= 1, got d={d}, n={n}")
    return PointConfiguration(d, uniform_points(rng.generator(), n, d))


def _batch_size(n: int, i: int) -> int:
    # about twice the expected number of proposals n / (n - i)
    return min(4 + (2 * n) // (n - i), 4096)


def sample_dpp(kernel: Kernel, rng: RngStream, max_proposals: int = MAX_PROPOSALS) -> PointConfiguration:
    """One exact draw of the determinantal process with the given projection kernel."""
    d = kernel.d
    n = kernel.trace
    gen = rng.generator()
    X = np.empty((n, d + 1))
    chol = np.zeros((n, n))
    X[0] = uniform_points(gen, 1, d)[0]
    chol[0, 0] = math.sqrt(n)
    for i in range(1, n):
        tried = 0
        while True:
            b = _batch_size(n, i)
            cand = uniform_points(gen, b, d)
            u = gen.random(b)
            t = cand @ X[:i].T
            np.clip(t, -1.0, 1.0, out=t)
            kx = kernel_eval(kernel, t)
            w = solve_triangular(chol[:i, :i], kx.T, lower=True, check_finite=False)
            v = np.einsum("ij,ij->j", w, w)
            accept = 1.0 - v / n
            if accept.min() < -ACCEPT_SLACK:
                raise DegeneracyError(
                    f"conditional density negative ({accept.min():.3e}) at step {i} of {n}"
                )
            hits = np.flatnonzero(u < accept)
            if hits.size:
                j = hits[0]
                break
            tried += b
            if tried > max_proposals:
                raise SamplerStallError(f"no acceptance after {tried} proposals at step {i} of {n}")
        pivot2 = n - min(v[j], n)
        if pivot2 < PIVOT_FLOOR * n:
            raise DegeneracyError(f"Cholesky pivot {pivot2:.3e} below floor at step {i}")
        X[i] = cand[j]
        chol[i, :i] = w[:, j]
        chol[i, i] = math.sqrt(pivot2)
    return PointConfiguration(d, X, {"kernel": kernel.to_dict(), "seed": rng.seed,
                                     "stream_id": rng.stream_id})


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, int(threads))


def map_trials(fn, trials: int, rng: RngStream, threads: int | None = None) -> list:
    """Evaluate fn(rng.trial(t)) for t = 0..trials-1, in trial order.

    Each trial owns its stream, so results do not depend on the worker count.
    ``fn`` must be picklable when more than one worker is used.
    """
    streams = [rng.trial(t) for t in range(trials)]
    workers = resolve_threads(threads)
    if workers == 1 or trials < 2:
        return [fn(s) for s in streams]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, streams, chunksize=max(1, trials // (4 * workers))))


class DPPSampler:
    """Picklable callable ``stream -> PointConfiguration`` for use with map_trials."""

    def __init__(self, kernel: Kernel, reduce=None):
        self.kernel = kernel
        self.reduce = reduce

    def __call__(self, rng: RngStream):
        x = sample_dpp(self.kernel, rng)
        return x if self.reduce is None else self.reduce(x)


def harmonic(d: int, L: int) -> HarmonicEnsemble:
    return HarmonicEnsemble(d, L)
