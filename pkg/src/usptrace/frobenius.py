"""Genus-2 curves y^2 = f(x) over small prime fields.

Point counts over F_p and F_{p^2} determine the zeta function of the
curve, hence its normalised Frobenius class.  Scanning many curves and
comparing the resulting traces with the USp(4) law is the experiment
this module supports.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .distribution import cdf_tau_g2, moments
from .errors import CountingError, DomainError, InvalidCurveError, ScanTooLargeError
from .symmetric import PalindromicPolynomial, in_sigma, sym_from_coeffs

MAX_EXHAUSTIVE_PRIME = 7
SCAN_CHUNK = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % k for k in range(3, r + 1, 2))


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not (3 <= self.p < 2**20) or not _is_prime(self.p):
            raise DomainError(f"need an odd prime below 2^20, got {self.p}")

    def chi(self, a: int) -> int:
        """Quadratic character (Legendre symbol) of a."""
        a %= self.p
        if a == 0:
            return 0
        return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1


@dataclass(frozen=True)
class QuadExtField:
    """F_{p^2} as pairs (u, v) meaning u + v sqrt(d), d the least non-residue."""

    p: int
    non_residue: int = field(init=False)

    def __post_init__(self):
        base = PrimeField(self.p)
        d = next(a for a in range(2, self.p) if base.chi(a) == -1)
        object.__setattr__(self, "non_residue", d)

    def mul(self, x, y):
        p, d = self.p, self.non_residue
        return ((x[0] * y[0] + d * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def power(self, x, e: int):
        out = (1, 0)
        while e:
            if e & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            e >>= 1
        return out

    def is_square(self, x) -> bool:
        """Euler's criterion in F_{p^2}: x^((p^2 - 1)/2) == 1 (0 counts as a square)."""
        if x[0] % self.p == 0 and x[1] % self.p == 0:
            return True
        return self.power(x, (self.p * self.p - 1) // 2) == (1, 0)


@dataclass(frozen=True)
class HyperellipticCurve:
    """The model y^2 = f(x) over F_p; ``f`` lists coefficients from the constant term up."""

    p: int
    f: tuple
    check_genus: bool = True

    def __post_init__(self):
        PrimeField(self.p)
        coeffs = [int(c) % self.p for c in self.f]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) > 7:
            raise InvalidCurveError("degree of f must be at most 6")
        object.__setattr__(self, "f", tuple(coeffs))
        if self.check_genus:
            if self.degree not in (5, 6):
                raise InvalidCurveError(f"genus 2 needs deg f in {{5, 6}}, got {self.degree}")
            if not _core.is_squarefree(list(coeffs), self.p):
                raise InvalidCurveError("f is not squarefree: the model is singular")

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def packed(self) -> str:
        return ":".join(str(c) for c in self.f)

    def row(self) -> np.ndarray:
        out = np.zeros((1, 7), dtype=np.int64)
        out[0, : len(self.f)] = self.f
        return out


def count_points(c: HyperellipticCurve, ext_degree: int = 1) -> int:
    """Projective points of the smooth model over F_p (1) or F_{p^2} (2)."""
    if ext_degree not in (1, 2):
        raise DomainError("ext_degree must be 1 or 2")
    if c.p > _core.MAX_TABLE_PRIME:
        raise DomainError(f"point counting enumerates F_(p^2); limited to p <= {_core.MAX_TABLE_PRIME}")
    if not _core.is_squarefree(list(c.f), c.p):
        raise InvalidCurveError("f is not squarefree: the model is singular")
    _, n1, n2 = _core.count_models(c.row(), c.p)
    return int(n1[0] if ext_degree == 1 else n2[0])


# ---------------------------------------------------------------------------
# Weil data


def weil_coefficients(p: int, n1, n2):
    """(c1, c2) with L(u) = u^4 - c1 u^3 + c2 u^2 - c1 p u + p^2.

    Works on ints or integer arrays.  The Frobenius power sums are
    P1 = p + 1 - N1 and P2 = p^2 + 1 - N2, and P2 = c1^2 - 2 c2.
    """
    c1 = p + 1 - n1
    p2 = p * p + 1 - n2
    twice = c1 * c1 - p2
    if np.any(np.asarray(twice) % 2):
        raise CountingError("c1^2 - P2 is odd: the counts cannot come from a genus-2 curve")
    return c1, twice // 2


def weil_box_ok(p: int, c1, c2):
    """Exact integer test that the unitarised L-polynomial lies in the alcove.

    With a1 = c1/sqrt(p) and a2 = c2/p the alcove conditions for g = 2
    become, after clearing sqrt(p):
        c1^2 <= 16 p,  c2 + 2p >= 0,  (c2 + 2p)^2 >= 4 p c1^2,
        c1^2 - 4 c2 + 8 p >= 0.
    """
    c1 = np.asarray(c1, dtype=object) if np.ndim(c1) == 0 else np.asarray(c1, dtype=np.int64)
    c2 = np.asarray(c2, dtype=object) if np.ndim(c2) == 0 else np.asarray(c2, dtype=np.int64)
    sq = c1 * c1
    shifted = c2 + 2 * p
    ok = (sq <= 16 * p) & (shifted >= 0) & (shifted * shifted >= 4 * p * sq) & (sq - 4 * c2 + 8 * p >= 0)
    return bool(ok) if np.ndim(ok) == 0 else ok


@dataclass(frozen=True)
class WeilData:
    p: int
    N1: int
    N2: int
    c1: int
    c2: int

    @classmethod
    def from_counts(cls, p: int, n1: int, n2: int) -> "WeilData":
        c1, c2 = weil_coefficients(p, int(n1), int(n2))
        return cls(p, int(n1), int(n2), int(c1), int(c2))

    @property
    def a1(self) -> float:
        return self.c1 / math.sqrt(self.p)

    @property
    def a2(self) -> float:
        return self.c2 / self.p

    @property
    def trace(self) -> float:
        return self.a1

    def l_polynomial(self) -> tuple[int, ...]:
        """Integer coefficients of L(u), highest degree first."""
        p = self.p
        return (1, -self.c1, self.c2, -self.c1 * p, p * p)

    def palindromic(self) -> PalindromicPolynomial:
        return PalindromicPolynomial((1.0, self.a1, self.a2))

    def counts(self) -> tuple[int, int]:
        """(N1, N2) recomputed from (c1, c2)."""
        p = self.p
        return p + 1 - self.c1, p * p + 1 - (self.c1 * self.c1 - 2 * self.c2)


def validate_weil(w, exact: bool = True) -> bool:
    """Does the (unitarised) L-polynomial come from a class of USp(4)?

    ``w`` is a WeilData, a PalindromicPolynomial or a tuple (1, a1, a2).
    For WeilData the default is the exact integer test; otherwise the
    polynomial is mapped to its real Weil polynomial and tested for
    membership in the symmetric alcove.
    """
    if isinstance(w, WeilData):
        if exact:
            return weil_box_ok(w.p, w.c1, w.c2)
        w = w.palindromic()
    if not isinstance(w, PalindromicPolynomial):
        w = PalindromicPolynomial(tuple(w))
    return bool(in_sigma(sym_from_coeffs(w)).in_sigma)


def weil_data(c: HyperellipticCurve) -> WeilData:
    w = WeilData.from_counts(c.p, count_points(c, 1), count_points(c, 2))
    if not validate_weil(w):
        raise CountingError(f"point counts {w.N1}, {w.N2} violate the Weil bounds for {c}")
    return w


# ---------------------------------------------------------------------------
# scanning


def model_counts(p: int) -> tuple[int, int]:
    """Number of degree-5 and degree-6 models (nonzero leading coefficient)."""
    return (p - 1) * p**5, (p - 1) * p**6


def decode_models(idx: np.ndarray, p: int) -> np.ndarray:
    """Coefficient rows for model indices; degree-5 models come first."""
    idx = np.asarray(idx, dtype=np.int64)
    n5, _ = model_counts(p)
    out = np.zeros((idx.size, 7), dtype=np.int64)
    is5 = idx < n5
    j = np.where(is5, idx, idx - n5)
    low = np.where(is5, p**5, p**6)
    rest = j % low
    lead = 1 + j // low
    for k in range(6):
        out[:, k] = rest % p
        rest = rest // p
    out[is5, 5] = lead[is5]
    out[is5, 6] = 0
    out[~is5, 6] = lead[~is5]
    return out


@dataclass
class EmpiricalDistribution:
    """Per-curve data from a scan, with moment and CDF accessors for the trace."""

    p: int
    mode: str
    coeffs: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    c1: np.ndarray
    c2: np.ndarray

    def __len__(self):
        return self.n1.size

    @property
    def degree(self) -> np.ndarray:
        return np.where(self.coeffs[:, 6] != 0, 6, 5)

    @property
    def a1(self) -> np.ndarray:
        return self.c1 / math.sqrt(self.p)

    @property
    def a2(self) -> np.ndarray:
        return self.c2 / self.p

    trace = a1

    def moment(self, k: int) -> float:
        return float(np.mean(self.a1**k))

    def atoms(self):
        """Distinct traces, their masses, and the CDF just after each."""
        vals, counts = np.unique(self.c1, return_counts=True)
        mass = counts / counts.sum()
        return vals / math.sqrt(self.p), mass, np.cumsum(mass)

    def cdf(self, x):
        xs, _, cum = self.atoms()
        i = np.searchsorted(xs, x, side="right")
        return np.where(i > 0, cum[np.maximum(i - 1, 0)], 0.0)

    def weil_failures(self) -> np.ndarray:
        return np.nonzero(~weil_box_ok(self.p, self.c1, self.c2))[0]

    def with_counts(self, n1, n2) -> "EmpiricalDistribution":
        """Same curves with replaced counts; the Weil data are recomputed and checked."""
        c1, c2 = weil_coefficients(self.p, np.asarray(n1), np.asarray(n2))
        out = EmpiricalDistribution(self.p, self.mode, self.coeffs, np.asarray(n1), np.asarray(n2), c1, c2)
        _raise_on_failures(out)
        return out

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "deg", "f", "N1", "N2", "c1", "c2", "a1", "a2"])
        deg = self.degree
        a1, a2 = self.a1, self.a2
        for i in range(len(self)):
            packed = ":".join(str(int(c)) for c in self.coeffs[i, : deg[i] + 1])
            w.writerow(
                [self.p, int(deg[i]), packed, int(self.n1[i]), int(self.n2[i]), int(self.c1[i]), int(self.c2[i]),
                 f"{a1[i]:.17g}", f"{a2[i]:.17g}"]
            )

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _raise_on_failures(e: EmpiricalDistribution) -> None:
    bad = e.weil_failures()
    if bad.size:
        i = int(bad[0])
        raise CountingError(
            f"{bad.size} curve(s) fail Weil validation at p={e.p}; first: f={e.coeffs[i].tolist()} "
            f"N1={int(e.n1[i])} N2={int(e.n2[i])}"
        )


def _scan_exhaustive_chunk(p: int, start: int, stop: int):
    rows = decode_models(np.arange(start, stop, dtype=np.int64), p)
    sq, n1, n2 = _core.count_models(rows, p)
    return rows[sq], n1[sq], n2[sq]


def _scan_sample_chunk(p: int, quota: int, seed: int, index: int):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed) & (2**64 - 1), index])))
    total = sum(model_counts(p))
    parts = []
    have = 0
    while have < quota:
        draw = int((quota - have) * (1.0 + 2.0 / p)) + 32
        rows = decode_models(rng.integers(0, total, size=draw), p)
        sq, n1, n2 = _core.count_models(rows, p)
        keep = np.nonzero(sq)[0][: quota - have]
        parts.append((rows[keep], n1[keep], n2[keep]))
        have += keep.size
    return tuple(np.concatenate([q[k] for q in parts]) for k in range(3))


def scan_curves(p: int, mode: str = "exhaustive", n_samples: int | None = None, seed: int = 0,
                threads: int | None = None) -> EmpiricalDistribution:
    """Point counts and Weil data for squarefree degree-5 and degree-6 models.

    ``exhaustive`` visits every model with nonzero leading coefficient
    (allowed for p <= 7); ``sample`` draws ``n_samples`` models uniformly,
    rejecting singular ones.  Work is split into fixed chunks with streams
    derived from (seed, chunk), so results do not depend on ``threads``.
    Every extracted Weil datum is validated; a failure raises CountingError.
    """
    PrimeField(p)
    if mode == "exhaustive":
        n_models = sum(model_counts(p))
        if p > MAX_EXHAUSTIVE_PRIME:
            raise ScanTooLargeError(
                f"exhaustive scan at p={p} would visit {n_models} models; use mode='sample'", n_models
            )
        jobs = [(p, s, min(s + SCAN_CHUNK, n_models)) for s in range(0, n_models, SCAN_CHUNK)]
        worker = _scan_exhaustive_chunk
    elif mode == "sample":
        if not n_samples or n_samples < 1:
            raise DomainError("sample mode needs n_samples >= 1")
        quotas = [min(SCAN_CHUNK, n_samples - s) for s in range(0, n_samples, SCAN_CHUNK)]
        jobs = [(p, q, seed, i) for i, q in enumerate(quotas)]
        worker = _scan_sample_chunk
    else:
        raise DomainError(f"unknown mode {mode!r}")
    if threads and threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: worker(*job), jobs))
    else:
        parts = [worker(*job) for job in jobs]
    rows = np.concatenate([q[0] for q in parts])
    n1 = np.concatenate([q[1] for q in parts])
    n2 = np.concatenate([q[2] for q in parts])
    c1, c2 = weil_coefficients(p, n1, n2)
    e = EmpiricalDistribution(p, mode, rows, n1, n2, c1, c2)
    _raise_on_failures(e)
    return e


# ---------------------------------------------------------------------------
# comparison with the USp(4) law

MODEL_NOTE = (
    "averages are over squarefree models y^2 = f(x) with deg f in {5, 6}, "
    "not over isomorphism classes of curves; expect O(1/p) distortion"
)


@dataclass
class TheoryReport:
    p: int
    mode: str
    n_curves: int
    sup_cdf_distance: float
    mean_a1: float
    mean_a2: float
    mean_n1: float
    mean_s2: float
    moments_empirical: list
    moments_theory: list
    residuals: dict
    note: str = MODEL_NOTE

    def to_dict(self) -> dict:
        def dec(x):
            return f"{x:.17g}"

        return {
            "p": self.p,
            "mode": self.mode,
            "n_curves": self.n_curves,
            "sup_cdf_distance": dec(self.sup_cdf_distance),
            "mean_a1": dec(self.mean_a1),
            "mean_a2": dec(self.mean_a2),
            "mean_N1": dec(self.mean_n1),
            "mean_s2": dec(self.mean_s2),
            "moments_empirical": [dec(x) for x in self.moments_empirical],
            "moments_theory": [int(x) for x in self.moments_theory],
            "residuals_scaled_by_sqrt_p": {k: dec(v) for k, v in self.residuals.items()},
            "note": self.note,
        }


def sup_cdf_distance(e: EmpiricalDistribution) -> float:
    """Kolmogorov distance between the empirical trace law and the USp(4) law.

    The empirical CDF is a step function, so the supremum is attained at an
    atom, on one side or the other of its jump.
    """
    xs, mass, cum = e.atoms()
    phi = cdf_tau_g2(xs)
    before = cum - mass
    return float(max(np.max(np.abs(cum - phi)), np.max(np.abs(before - phi))))


def compare_to_theory(e: EmpiricalDistribution) -> TheoryReport:
    a1, a2 = e.a1, e.a2
    emp = [float(np.mean(a1**k)) for k in range(1, 7)]
    theory = moments("tau_g2", 6).values[1:]
    dist = sup_cdf_distance(e)
    mean_a1 = float(np.mean(a1))
    mean_a2 = float(np.mean(a2))
    root = math.sqrt(e.p)
    residuals = {
        "mean_a1": root * mean_a1,
        "mean_a2_minus_1": root * (mean_a2 - 1.0),
        "sup_cdf_distance": root * dist,
    }
    for k, (x, y) in enumerate(zip(emp, theory), start=1):
        residuals[f"moment_{k}"] = root * (x - y)
    return TheoryReport(
        p=e.p,
        mode=e.mode,
        n_curves=len(e),
        sup_cdf_distance=dist,
        mean_a1=mean_a1,
        mean_a2=mean_a2,
        mean_n1=float(np.mean(e.n1)),
        mean_s2=mean_a2 - 2.0,
        moments_empirical=emp,
        moments_theory=theory,
        residuals=residuals,
    )
