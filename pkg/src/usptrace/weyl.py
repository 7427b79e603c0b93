"""Weyl measure on conjugacy classes of USp(2g), g in {1, 2, 3}.

A class is given either by its Frobenius angles theta in [0, pi]^g or by
the coefficient vector t = 2 cos(theta) in [-2, 2]^g.  This module provides
the two densities, a quadrature rule against them and an exact sampler.
"""
from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError

SUPPORTED_G = (1, 2, 3)

# sup of lambda_g over [-2, 2]^g; used as rejection envelopes
ENVELOPE = {1: 1.0 / math.pi, 2: 2.0 / math.pi**2, 3: 9.0 / (2.0 * math.pi**3)}


def _check_g(g: int) -> None:
    if g not in SUPPORTED_G:
        raise DomainError(f"g must be one of {SUPPORTED_G}, got {g}")


@dataclass(frozen=True)
class ConjugacyClass:
    """Canonical representative: pi >= theta[0] >= ... >= theta[g-1] >= 0."""

    theta: tuple[float, ...]

    def __post_init__(self):
        th = tuple(float(x) for x in self.theta)
        object.__setattr__(self, "theta", th)
        _check_g(len(th))
        if any(x < 0.0 or x > math.pi for x in th):
            raise DomainError("angles must lie in [0, pi]")
        if any(th[i] < th[i + 1] for i in range(len(th) - 1)):
            raise DomainError("angles must be sorted in decreasing order")

    @property
    def g(self) -> int:
        return len(self.theta)

    @classmethod
    def canonical(cls, angles) -> "ConjugacyClass":
        """Representative of the class containing the torus element with these angles.

        Angles are reduced modulo 2 pi, folded by theta -> -theta (the Weyl
        group flips signs) and sorted.
        """
        folded = []
        for a in angles:
            r = math.fmod(float(a), 2.0 * math.pi)
            if r < 0.0:
                r += 2.0 * math.pi
            if r > math.pi:
                r = 2.0 * math.pi - r
            folded.append(min(max(r, 0.0), math.pi))
        return cls(tuple(sorted(folded, reverse=True)))

    def matrix(self) -> np.ndarray:
        """The diagonal torus element diag(e^{i theta}, e^{-i theta})."""
        ph = np.exp(1j * np.asarray(self.theta))
        return np.diag(np.concatenate([ph, ph.conj()]))


@dataclass(frozen=True)
class CoefficientVector:
    """Point t of the box [-2, 2]^g, stored sorted ascending."""

    t: tuple[float, ...]

    def __post_init__(self):
        tt = tuple(float(x) for x in self.t)
        object.__setattr__(self, "t", tt)
        _check_g(len(tt))
        if any(abs(x) > 2.0 for x in tt):
            raise DomainError("coefficients must lie in [-2, 2]")
        if any(tt[i] > tt[i + 1] for i in range(len(tt) - 1)):
            raise DomainError("coefficients must be sorted in increasing order")

    @property
    def g(self) -> int:
        return len(self.t)

    @classmethod
    def canonical(cls, t) -> "CoefficientVector":
        return cls(tuple(sorted(float(x) for x in t)))


def angles_to_t(c: ConjugacyClass) -> CoefficientVector:
    return CoefficientVector.canonical(2.0 * math.cos(x) for x in c.theta)


def t_to_angles(v: CoefficientVector) -> ConjugacyClass:
    return ConjugacyClass.canonical(math.acos(min(max(0.5 * x, -1.0), 1.0)) for x in v.t)


# ---------------------------------------------------------------------------
# densities


def _as_rows(x, attr: str) -> np.ndarray:
    if isinstance(x, (ConjugacyClass, CoefficientVector)):
        return np.asarray(getattr(x, attr), dtype=float)
    return np.asarray(x, dtype=float)


def _vandermonde_sq(t: np.ndarray) -> np.ndarray:
    g = t.shape[-1]
    out = np.ones(t.shape[:-1])
    for j in range(g):
        for k in range(j + 1, g):
            d = t[..., k] - t[..., j]
            out = out * d * d
    return out


def density_theta(c) -> float | np.ndarray:
    """Weyl density on [0, pi]^g in angle coordinates.

    Accepts a ConjugacyClass or an array whose last axis holds the g angles.
    """
    th = _as_rows(c, "theta")
    g = th.shape[-1]
    _check_g(g)
    s = np.sin(th)
    val = np.prod((2.0 / math.pi) * s * s, axis=-1) * _vandermonde_sq(2.0 * np.cos(th)) / math.factorial(g)
    return float(val) if val.ndim == 0 else val


def density_t(v) -> float | np.ndarray:
    """Weyl density lambda_g(t) = D0(t) sqrt(D1(t)) / ((2 pi)^g g!) on [-2, 2]^g."""
    t = _as_rows(v, "t")
    g = t.shape[-1]
    _check_g(g)
    if np.any(np.abs(t) > 2.0):
        raise DomainError("density_t is defined on [-2, 2]^g only")
    d1 = np.prod(4.0 - t * t, axis=-1)
    val = _vandermonde_sq(t) * np.sqrt(d1) / ((2.0 * math.pi) ** g * math.factorial(g))
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# quadrature

_MAX_NODES = 1 << 22
_CHUNK = 1 << 18


def _midpoint_rule(f, g: int, n: int) -> float:
    """Midpoint rule with n nodes per axis in angle coordinates.

    In angles the integrand f(2 cos theta) delta(theta) extends to an even
    2 pi-periodic function, so this rule converges geometrically for smooth
    f and is exact for trigonometric polynomials of low degree.
    """
    th1 = (np.arange(n) + 0.5) * (math.pi / n)
    grids = np.meshgrid(*([th1] * g), indexing="ij")
    theta = np.stack([x.ravel() for x in grids], axis=-1)
    total = 0.0
    for start in range(0, theta.shape[0], _CHUNK):
        block = theta[start : start + _CHUNK]
        t = 2.0 * np.cos(block)
        vals = np.asarray(f(t), dtype=float) * density_theta(block)
        total += math.fsum(vals)
    return total * (math.pi / n) ** g


def integrate(f: Callable[[np.ndarray], np.ndarray], g: int, tol: float = 1e-10) -> float:
    """Integral of a symmetric function f against the Weyl measure on [-2, 2]^g.

    ``f`` is called with an (N, g) array of coefficient vectors and must
    return N values.  The node count doubles until two successive estimates
    agree to ``tol``; if the node budget runs out an AccuracyError carrying
    the best estimate is raised.
    """
    _check_g(g)
    if tol <= 0:
        raise DomainError("tol must be positive")
    n = 8
    prev = _midpoint_rule(f, g, n)
    while (2 * n) ** g <= _MAX_NODES:
        n *= 2
        cur = _midpoint_rule(f, g, n)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise AccuracyError(f"Weyl quadrature did not reach tol={tol}", best=prev, est_error=abs(cur - prev))


# ---------------------------------------------------------------------------
# exact sampling

SAMPLE_CHUNK = 1 << 16


@dataclass
class ClassSample(Sequence):
    """A batch of sampled classes stored as arrays.

    Rows are canonical: theta decreasing, t increasing.  Indexing yields
    ConjugacyClass objects.
    """

    g: int
    theta: np.ndarray
    t: np.ndarray
    n_proposed: int

    def __len__(self):
        return self.theta.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [ConjugacyClass(tuple(row)) for row in self.theta[i]]
        return ConjugacyClass(tuple(self.theta[i]))

    @property
    def trace(self) -> np.ndarray:
        return self.t.sum(axis=1)

    @property
    def acceptance_rate(self) -> float:
        return len(self) / self.n_proposed


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed) & (2**64 - 1), index])))


def _sample_chunk(g: int, quota: int, seed: int, index: int) -> tuple[np.ndarray, int]:
    rng = _chunk_rng(seed, index)
    bound = ENVELOPE[g]
    rate = 1.0 / (bound * 4.0**g)
    kept = []
    have = 0
    proposed = 0
    while have < quota:
        batch = int((quota - have) / rate * 1.1) + 64
        t = rng.uniform(-2.0, 2.0, size=(batch, g))
        u = rng.uniform(0.0, 1.0, size=batch)
        lam = density_t(t)
        if np.any(lam > bound * (1.0 + 1e-12)):
            raise AssertionError(f"Weyl density exceeds the sampling envelope for g={g}")
        acc = np.nonzero(u * bound < lam)[0]
        need = quota - have
        if acc.size > need:
            acc = acc[:need]
            proposed += int(acc[-1]) + 1
        else:
            proposed += batch
        kept.append(t[acc])
        have += acc.size
    return np.concatenate(kept), proposed


def sample(g: int, n: int, seed: int, threads: int | None = None) -> ClassSample:
    """Draw n independent classes from the Weyl measure by rejection.

    Proposals are uniform on [-2, 2]^g and accepted with probability
    lambda_g(t) / sup(lambda_g).  Work is split in fixed chunks, each with
    its own stream derived from (seed, chunk index), so the result does not
    depend on the number of threads.
    """
    _check_g(g)
    if n < 1:
        raise DomainError("n must be at least 1")
    quotas = [min(SAMPLE_CHUNK, n - k) for k in range(0, n, SAMPLE_CHUNK)]
    jobs = [(g, q, seed, i) for i, q in enumerate(quotas)]
    if threads is not None and threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: _sample_chunk(*job), jobs))
    else:
        parts = [_sample_chunk(*job) for job in jobs]
    t = np.sort(np.concatenate([p[0] for p in parts]), axis=1)
    theta = np.arccos(np.clip(0.5 * t, -1.0, 1.0))
    return ClassSample(g=g, theta=theta, t=t, n_proposed=sum(p[1] for p in parts))
