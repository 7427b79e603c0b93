"""Laws of traces and related characters under the Weyl measure.

Character tags used throughout:

* ``tau_g1``, ``tau_g2``, ``tau_g3``: trace of the standard representation
  of USp(2), USp(4), USp(6); supports [-2g, 2g].
* ``rho``: trace on SU(2) x SU(2) embedded in USp(4), i.e. t_1 + t_2 with
  t_1, t_2 independent semicircular; support [-4, 4].
* ``tau2``: s_2 = t_1 t_2 on USp(4), which is the trace of the second
  exterior power minus its two trivial contributions (mean -1, support
  [-4, 4]).
* ``chi2``: s_2 + 1, the character of the 5-dimensional irreducible
  representation of USp(4) (mean 0, variance 1, support [-3, 5]).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy import integrate as sint
from scipy import optimize

from . import weyl
from .errors import AccuracyError, DomainError
from .specfun import (
    bessel_j_upto,
    elliptic_ke_complement,
    gauss_2f1,
    hyp1f2_series,
    legendre_p_half,
    legendre_poly,
    legendre_poly_coeffs,
)
from .symmetric import SymmetricPoint, d0 as sym_d0, d1 as sym_d1, in_sigma

TAGS = ("tau_g1", "tau_g2", "tau_g3", "rho", "tau2", "chi2")
SUPPORT = {
    "tau_g1": (-2.0, 2.0),
    "tau_g2": (-4.0, 4.0),
    "tau_g3": (-6.0, 6.0),
    "rho": (-4.0, 4.0),
    "tau2": (-4.0, 4.0),
    "chi2": (-3.0, 5.0),
}

F_TAU_G2_AT_0 = 64.0 / (15.0 * math.pi**2)
F_RHO_AT_0 = 8.0 / (3.0 * math.pi**2)
TAU2_SWITCH = 0.05
# below this |x| the g = 2 trace density equals its value at 0 to rounding
# (the deviation is O(x^2 log x)); the singular closed forms are not evaluated
FLAT_NEAR_ZERO = 1e-100


@dataclass
class MomentSequence:
    which: str
    values: list

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def even(self) -> list:
        return self.values[::2]


@dataclass
class DensityCurve:
    which: str
    xs: np.ndarray
    ys: np.ndarray
    method: str
    meta: dict = field(default_factory=dict)

    def trapezoid_mass(self) -> float:
        return float(np.trapezoid(self.ys, self.xs))


# ---------------------------------------------------------------------------
# genus 2 trace density


def _tau_g2_hypergeometric(x: float) -> float:
    m = 1.0 - x * x / 16.0
    return m**4 * gauss_2f1(1.5, 2.5, 5.0, m) / (4.0 * math.pi)


def _tau_g2_elliptic(x: float) -> float:
    if abs(x) < FLAT_NEAR_ZERO:
        return F_TAU_G2_AT_0
    mc = x * x / 16.0
    k, e = elliptic_ke_complement(1.0 - mc, mc)
    return F_TAU_G2_AT_0 * ((1.0 + 14.0 * mc + mc * mc) * e - 8.0 * mc * (1.0 + mc) * k)


def _tau_g2_legendre(x: float) -> float:
    ax = abs(x)
    if ax < FLAT_NEAR_ZERO:
        return F_TAU_G2_AT_0
    m = 1.0 - ax * ax / 16.0
    z = (ax * ax + 16.0) / (8.0 * ax)
    return -64.0 / (15.0 * math.pi) * math.sqrt(ax) * m * m * legendre_p_half(2, z)


def _meijer_g(z: float) -> float:
    """G^{2,0}_{2,2} value used by the trace law, through its Legendre form."""
    r = math.sqrt(z)
    return 4.0 / 3.0 * (1.0 - z) ** 2 * math.sqrt(r) * legendre_p_half(-2, (z + 1.0) / (2.0 * r))


def _tau_g2_meijer(x: float) -> float:
    if abs(x) < FLAT_NEAR_ZERO:
        return F_TAU_G2_AT_0
    return 6.0 / math.pi * _meijer_g(x * x / 16.0)


def _tau_g2_slice(x: float) -> float:
    return f_tau_slice(2, x)


_TAU_G2_METHODS = {
    "hypergeometric": _tau_g2_hypergeometric,
    "legendre": _tau_g2_legendre,
    "elliptic": _tau_g2_elliptic,
    "meijer": _tau_g2_meijer,
    "slice": _tau_g2_slice,
}
TAU_G2_METHODS = tuple(_TAU_G2_METHODS) + ("auto",)


def _f_tau_g2_array(x: np.ndarray) -> np.ndarray:
    ax = np.abs(np.asarray(x, dtype=float))
    out = np.zeros_like(ax)
    near = (ax >= FLAT_NEAR_ZERO) & (ax <= 3.5)
    if np.any(near):
        mc = ax[near] ** 2 / 16.0
        k, e = elliptic_ke_complement(1.0 - mc, mc)
        out[near] = F_TAU_G2_AT_0 * ((1.0 + 14.0 * mc + mc * mc) * e - 8.0 * mc * (1.0 + mc) * k)
    out[ax < FLAT_NEAR_ZERO] = F_TAU_G2_AT_0
    far = (ax > 3.5) & (ax < 4.0)
    if np.any(far):
        m = 1.0 - ax[far] ** 2 / 16.0
        term = np.ones_like(m)
        total = np.ones_like(m)
        for n in range(80):
            term = term * (1.5 + n) * (2.5 + n) / ((5.0 + n) * (n + 1.0)) * m
            total += term
        out[far] = m**4 * total / (4.0 * math.pi)
    return out


def f_tau_g2(x, method: str = "auto"):
    """Density of the trace on USp(4).

    ``method`` selects one of five independent evaluation routes; ``auto``
    uses the elliptic-integral form for |x| <= 3.5 and the hypergeometric
    series beyond.  Arrays are accepted with ``method="auto"``.  The density
    is zero outside [-4, 4].
    """
    if np.ndim(x) > 0:
        if method != "auto":
            raise DomainError("array input is supported with method='auto' only")
        return _f_tau_g2_array(x)
    x = float(x)
    if abs(x) >= 4.0:
        return 0.0
    if method == "auto":
        method = "elliptic" if abs(x) <= 3.5 else "hypergeometric"
    try:
        fn = _TAU_G2_METHODS[method]
    except KeyError:
        raise DomainError(f"unknown method {method!r}; choose from {TAU_G2_METHODS}") from None
    return fn(x)


@lru_cache(maxsize=4)
def _cdf_panels(n_panels: int = 256, n_nodes: int = 20):
    edges = np.linspace(0.0, 4.0, n_panels + 1)
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    masses = np.empty(n_panels)
    for i in range(n_panels):
        a, b = edges[i], edges[i + 1]
        xs = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        masses[i] = 0.5 * (b - a) * np.dot(weights, _f_tau_g2_array(xs))
    cum = np.concatenate([[0.0], np.cumsum(masses)])
    return edges, cum, nodes, weights


def cdf_tau_g2(x):
    """Distribution function of the USp(4) trace.

    Scalars use adaptive quadrature of the density from 0 and the symmetry
    Phi(-x) = 1 - Phi(x).  Arrays use a fixed composite Gauss-Legendre rule
    on 256 panels, accurate to about 1e-14.
    """
    if np.ndim(x) > 0:
        xa = np.asarray(x, dtype=float)
        ax = np.minimum(np.abs(xa), 4.0)
        edges, cum, nodes, weights = _cdf_panels()
        h = edges[1] - edges[0]
        k = np.minimum((ax / h).astype(int), len(edges) - 2)
        left = edges[k]
        xs = left[:, None] + 0.5 * (ax - left)[:, None] * (nodes[None, :] + 1.0)
        part = 0.5 * (ax - left) * (_f_tau_g2_array(xs.ravel()).reshape(xs.shape) @ weights)
        half = cum[k] + part
        return 0.5 + np.sign(xa) * half
    x = float(x)
    if x <= -4.0:
        return 0.0
    if x >= 4.0:
        return 1.0
    half, _ = sint.quad(f_tau_g2, 0.0, abs(x), epsabs=1e-14, epsrel=1e-13, limit=200)
    val = 0.5 + math.copysign(half, x) if x != 0.0 else 0.5
    return min(max(val, 0.0), 1.0)


# ---------------------------------------------------------------------------
# other closed-form densities


def f_rho(x: float) -> float:
    """Density of the trace on SU(2) x SU(2)."""
    x = float(x)
    if abs(x) >= 4.0:
        return 0.0
    m = 1.0 - x * x / 16.0
    return m * m * gauss_2f1(0.5, 1.5, 3.0, m) / (2.0 * math.pi)


def _tau2_slice(x: float) -> float:
    """Density of s_2 at x by integrating the symmetric density over s_1.

    The admissible s_1 satisfy s_1^2 >= 4x and |s_1| <= (x + 4)/2; the
    integrand is even in s_1 so only s_1 >= 0 is integrated.
    """
    h = 0.5 * (x + 4.0)
    if x <= 0.0:
        # weight sqrt(h - s) on [0, h]
        val, err = sint.quad(
            lambda s: 2.0 * math.sqrt(s * s - 4.0 * x) * math.sqrt(h + s),
            0.0,
            h,
            weight="alg",
            wvar=(0.0, 0.5),
            epsabs=1e-14,
            epsrel=1e-12,
        )
    else:
        r = 2.0 * math.sqrt(x)
        val, err = sint.quad(
            lambda s: 2.0 * math.sqrt(s + r) * math.sqrt(h + s),
            r,
            h,
            weight="alg",
            wvar=(0.5, 0.5),
            epsabs=1e-14,
            epsrel=1e-12,
        )
    return 2.0 * val / (4.0 * math.pi**2)


def _tau2_elliptic(x: float) -> float:
    y = -x
    mc = 16.0 / (y * y)
    k, e = elliptic_ke_complement(1.0 - mc, mc)
    bracket = y * (y * y - 24.0 * y + 16.0) * e + 4.0 * (3.0 * y * y - 8.0 * y + 48.0) * k
    return math.copysign(1.0, y) * bracket / (24.0 * math.pi**2)


def f_tau2(x: float, method: str = "auto") -> float:
    """Density of s_2 = t_1 t_2 on USp(4).

    The closed form in elliptic integrals of parameter 1 - 16/x^2 is used
    for |x| >= 0.05 and the one-dimensional slice integral below that.
    """
    x = float(x)
    if abs(x) >= 4.0:
        return 0.0
    if method == "auto":
        method = "slice" if abs(x) < TAU2_SWITCH else "elliptic"
    if method == "slice":
        return _tau2_slice(x)
    if method == "elliptic":
        if x == 0.0:
            raise DomainError("the elliptic form of the s_2 density is singular at 0")
        return _tau2_elliptic(x)
    raise DomainError(f"unknown method {method!r}")


def f_chi2(x: float) -> float:
    """Density of the 5-dimensional irreducible character s_2 + 1."""
    return f_tau2(float(x) - 1.0)


def f_semicircle(x: float) -> float:
    x = float(x)
    if abs(x) >= 2.0:
        return 0.0
    return math.sqrt(4.0 - x * x) / (2.0 * math.pi)


def nu_density(p) -> float:
    """Joint density of (s_1, ..., s_g) under Haar measure; 0 outside the alcove."""
    p = p if isinstance(p, SymmetricPoint) else SymmetricPoint(tuple(p))
    if not in_sigma(p).in_sigma:
        return 0.0
    a = float(sym_d0(p))
    b = float(sym_d1(p))
    return math.sqrt(max(a, 0.0) * max(b, 0.0)) / (2.0 * math.pi) ** p.g


# ---------------------------------------------------------------------------
# slicing the symmetric density


def _slice_g2(x: float, tol: float) -> float:
    ax = abs(x)
    a = 2.0 * ax - 4.0
    b = ax * ax / 4.0
    if b <= a:
        return 0.0
    c = -2.0 * ax - 4.0
    # nu_2 = sqrt((x^2 - 4 s)((s + 4)^2 - 4 x^2)) / (4 pi^2)
    #      = 2 sqrt((s - a)(b - s)) sqrt(s - c) / (4 pi^2)
    val, err = sint.quad(
        lambda s: 2.0 * math.sqrt(s - c), a, b, weight="alg", wvar=(0.5, 0.5), epsabs=tol * 1e-2, epsrel=1e-13
    )
    if err > tol:
        raise AccuracyError("slice integral did not converge", best=val / (4 * math.pi**2), est_error=err)
    return val / (4.0 * math.pi**2)


def _g3_bounds(x: float, s2: float):
    """Inner s_3 interval of the g = 3 slice at (x, s2) and the outer roots."""
    disc = x * x - 3.0 * s2
    if disc < 0.0:
        return None
    root = 2.0 * disc**1.5
    base = 9.0 * x * s2 - 2.0 * x**3
    r_lo = (base - root) / 27.0
    r_hi = (base + root) / 27.0
    ell = -(2.0 * s2 + 4.0 * x + 8.0)
    up = 2.0 * s2 - 4.0 * x + 8.0
    lo, hi = max(r_lo, ell), min(r_hi, up)
    if hi <= lo:
        return None
    return lo, hi, min(r_lo, ell), max(r_hi, up)


def _g3_inner(x: float, s2: float, tol: float) -> float:
    bounds = _g3_bounds(x, s2)
    if bounds is None:
        return 0.0
    lo, hi, olo, ohi = bounds
    val, _ = sint.quad(
        lambda s: math.sqrt(max((s - olo) * (ohi - s), 0.0)),
        lo,
        hi,
        weight="alg",
        wvar=(0.5, 0.5),
        epsabs=tol,
        epsrel=1e-11,
    )
    return math.sqrt(27.0) * val / (8.0 * math.pi**3)


def _slice_g3(x: float, tol: float) -> float:
    x = abs(x)
    top = x * x / 3.0
    bottom = 4.0 * x - 12.0
    if top <= bottom:
        return 0.0
    # locate where the inner interval is nonempty and where its endpoints
    # switch between the discriminant roots and the linear forms
    grid = np.linspace(bottom, top, 801)

    def lo_gap(s2):
        d = x * x - 3.0 * s2
        root = 2.0 * max(d, 0.0) ** 1.5
        return (9.0 * x * s2 - 2.0 * x**3 - root) / 27.0 + (2.0 * s2 + 4.0 * x + 8.0)

    def hi_gap(s2):
        d = x * x - 3.0 * s2
        root = 2.0 * max(d, 0.0) ** 1.5
        return (9.0 * x * s2 - 2.0 * x**3 + root) / 27.0 - (2.0 * s2 - 4.0 * x + 8.0)

    def width(s2):
        b = _g3_bounds(x, s2)
        return -1.0 if b is None else b[1] - b[0]

    feasible = [s for s in grid if width(s) > 0.0]
    if not feasible:
        return 0.0
    a = float(feasible[0])
    b = float(top)
    i0 = int(np.searchsorted(grid, a))
    if i0 > 0:
        a = optimize.brentq(width, grid[i0 - 1], grid[i0], xtol=1e-14)
    points = []
    for fn in (lo_gap, hi_gap):
        vals = [fn(s) for s in grid]
        for i in range(len(grid) - 1):
            if vals[i] == 0.0 or vals[i] * vals[i + 1] < 0.0:
                r = optimize.brentq(fn, grid[i], grid[i + 1], xtol=1e-14) if vals[i] != 0.0 else grid[i]
                if a < r < b:
                    points.append(float(r))
    val, err = sint.quad(
        lambda s2: _g3_inner(x, s2, tol * 1e-2),
        a,
        b,
        points=sorted(set(points)) or None,
        epsabs=tol,
        epsrel=1e-10,
        limit=400,
    )
    if err > tol:
        raise AccuracyError("g=3 slice integral did not converge", best=val, est_error=err)
    return val


def f_tau_slice(g: int, x: float, tol: float = 1e-9) -> float:
    """Trace density at x obtained by integrating nu_g over the slice s_1 = x.

    For g = 2 this is a one-dimensional integral in s_2; for g = 3 a
    two-dimensional one over (s_2, s_3), restricted by all linear forms and
    the discriminant condition.
    """
    x = float(x)
    if g not in (2, 3):
        raise DomainError("slicing is implemented for g = 2 and g = 3")
    if abs(x) >= 2 * g:
        return 0.0
    if g == 2:
        return _slice_g2(x, tol)
    return _slice_g3(x, tol)


# ---------------------------------------------------------------------------
# characteristic functions

# Each law's characteristic function is a finite sum of
#   coef * J_1(2t)^pa * J_2(2t)^pb * t^k
# obtained from the Hankel-determinant form of the Weyl integral.
_BESSEL_TERMS = {
    "tau_g1": ((1, 1, 0, -1),),
    "tau_g2": ((4, 2, 0, -2), (-6, 1, 1, -3), (4, 0, 2, -2)),
    "tau_g3": ((-96, 3, 0, -5), (264, 2, 1, -6), (-96, 1, 2, -5), (-144, 1, 2, -7), (120, 0, 3, -6)),
    "rho": ((1, 2, 0, -2),),
}

_SERIES_TERMS = 60


def _bessel_closed(which: str, t: float) -> float:
    _, j1, j2 = bessel_j_upto(2, 2.0 * t)
    return sum(c * j1**pa * j2**pb * t**k for c, pa, pb, k in _BESSEL_TERMS[which])


def _poly_mul(a: list, b: list, n: int) -> list:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def charfn_series_coeffs(which: str, n_terms: int = _SERIES_TERMS) -> tuple:
    """Exact Taylor coefficients c_n with charfn(t) = sum_n c_n t^(2n)."""
    if which not in _BESSEL_TERMS:
        raise DomainError(f"no Bessel form for {which!r}")
    size = 2 * n_terms + 8
    j1 = [Fraction(0)] * size
    j2 = [Fraction(0)] * size
    for k in range(size):
        if 2 * k + 1 < size:
            j1[2 * k + 1] = Fraction((-1) ** k, math.factorial(k) * math.factorial(k + 1))
        if 2 * k + 2 < size:
            j2[2 * k + 2] = Fraction((-1) ** k, math.factorial(k) * math.factorial(k + 2))
    total: dict[int, Fraction] = {}
    for c, pa, pb, shift in _BESSEL_TERMS[which]:
        prod = [Fraction(1)] + [Fraction(0)] * (size - 1)
        for _ in range(pa):
            prod = _poly_mul(prod, j1, size)
        for _ in range(pb):
            prod = _poly_mul(prod, j2, size)
        for e, v in enumerate(prod):
            if v:
                total[e + shift] = total.get(e + shift, Fraction(0)) + c * v
    if any(v for e, v in total.items() if e < 0):
        raise AssertionError("negative powers do not cancel in the Bessel form")
    if any(total.get(2 * n + 1, 0) for n in range(n_terms)):
        raise AssertionError("odd powers in an even characteristic function")
    return tuple(total.get(2 * n, Fraction(0)) for n in range(n_terms))


def _series_eval(which: str, t: float) -> float:
    coeffs = charfn_series_coeffs(which)
    t2 = t * t
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t2 + float(c)
    return acc


_SERIES_RADIUS = {"tau_g1": 0.5, "tau_g2": 0.5, "tau_g3": 1.5, "rho": 0.5}


def charfn(which: str, t: float, method: str = "auto") -> float:
    """Characteristic function E[exp(i t X)] (real, the laws are symmetric).

    ``auto`` sums the exact Taylor series near 0, where the Bessel form
    suffers cancellation, and uses the Bessel form elsewhere.  ``bessel``
    and ``series`` force one route; ``quadrature`` integrates cos(t x)
    against the Weyl measure directly (slow, for checking).
    """
    t = float(t)
    if which not in _BESSEL_TERMS:
        raise DomainError(f"charfn supports {tuple(_BESSEL_TERMS)}")
    if method == "quadrature":
        return charfn_quadrature(which, t)
    if t == 0.0:
        return 1.0
    if method == "series" or (method == "auto" and abs(t) < _SERIES_RADIUS[which]):
        return _series_eval(which, t)
    if method in ("bessel", "auto"):
        return _bessel_closed(which, t)
    raise DomainError(f"unknown method {method!r}")


def charfn_quadrature(which: str, t: float, tol: float = 1e-9) -> float:
    g = {"tau_g1": 1, "tau_g2": 2, "tau_g3": 3}.get(which)
    if which == "rho":
        # independent semicircles: the square of the g = 1 transform
        return weyl.integrate(lambda v: np.cos(t * v[:, 0]), 1, tol) ** 2
    if g is None:
        raise DomainError(f"no quadrature route for {which!r}")
    return weyl.integrate(lambda v: np.cos(t * v.sum(axis=1)), g, tol)


def hyp1f2_tau_g2(t: float) -> float:
    """1F2(3/2; 3, 4; -4 t^2), the hypergeometric form of the USp(4) transform."""
    return hyp1f2_series(1.5, 3.0, 4.0, -4.0 * t * t).value


# ---------------------------------------------------------------------------
# moments


def _catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def mihailovs(n: int) -> int:
    """Even moment M_(2n) of the USp(4) trace."""
    num = 6 * math.factorial(2 * n) * math.factorial(2 * n + 2)
    den = math.factorial(n) * math.factorial(n + 1) * math.factorial(n + 2) * math.factorial(n + 3)
    return num // den


@lru_cache(maxsize=None)
def _vandermonde_sq_poly(g: int) -> dict:
    poly = {(0,) * g: 1}
    for j, k in combinations(range(g), 2):
        for _ in range(2):
            nxt: dict = {}
            for e, c in poly.items():
                for var, sign in ((k, 1), (j, -1)):
                    ne = list(e)
                    ne[var] += 1
                    ne = tuple(ne)
                    nxt[ne] = nxt.get(ne, 0) + sign * c
            poly = {e: c for e, c in nxt.items() if c}
    return poly


def _compositions(k: int, parts: int):
    if parts == 1:
        yield (k,)
        return
    for a in range(k + 1):
        for rest in _compositions(k - a, parts - 1):
            yield (a,) + rest


def weyl_trace_moment_exact(g: int, k: int) -> int:
    """E[(t_1 + ... + t_g)^k] under the Weyl measure, exactly.

    The Weyl density factors as (1/g!) * prod_{j<k}(t_k - t_j)^2 times a
    product of semicircle densities, whose moments are Catalan numbers.
    """
    if k % 2:
        return 0
    sc = [(_catalan(e // 2) if e % 2 == 0 else 0) for e in range(k + 2 * g + 2)]
    total = 0
    multinom_cache = {}
    vdm = _vandermonde_sq_poly(g)
    for comp in _compositions(k, g):
        coef = multinom_cache.setdefault(comp, math.factorial(k) // math.prod(math.factorial(a) for a in comp))
        for e, c in vdm.items():
            prod = c
            for a, ee in zip(comp, e):
                prod *= sc[a + ee]
                if not prod:
                    break
            total += coef * prod
    q, r = divmod(total, math.factorial(g))
    if r:
        raise AssertionError("trace moment is not an integer")
    return q


def _round_checked(values: list[float], rel: float) -> list[int]:
    out = []
    for v in values:
        r = round(v)
        if abs(v - r) > rel * max(1.0, abs(v)):
            raise AccuracyError(f"moment {v} is not within {rel} of an integer", best=v)
        out.append(int(r))
    return out


def moments(which: str, upto: int, method: str = "exact") -> MomentSequence:
    """Moments M_0..M_upto of a character law.

    Closed forms give exact integers.  For ``tau_g3`` three independent
    routes exist: ``exact`` (semicircle expansion of the Weyl density),
    ``quadrature`` (Weyl quadrature of s_1^k, rounded after an integrality
    check) and ``series`` (Taylor coefficients of the Bessel form).
    """
    if which not in TAGS:
        raise DomainError(f"unknown law {which!r}")
    if upto < 0 or upto > 60:
        raise DomainError("upto must be in 0..60")
    vals: list
    if which == "tau_g1":
        vals = [(_catalan(n // 2) if n % 2 == 0 else 0) for n in range(upto + 1)]
    elif which == "tau_g2":
        vals = [(mihailovs(n // 2) if n % 2 == 0 else 0) for n in range(upto + 1)]
    elif which == "rho":
        vals = [(_catalan(n // 2) * _catalan(n // 2 + 1) if n % 2 == 0 else 0) for n in range(upto + 1)]
    elif which in ("tau2", "chi2"):
        base = []
        for n in range(upto + 1):
            h = n // 2
            base.append(_catalan(h) * _catalan(h + 1) if n % 2 == 0 else -_catalan(h + 1) ** 2)
        if which == "tau2":
            vals = base
        else:
            vals = [sum(math.comb(n, j) * base[j] for j in range(n + 1)) for n in range(upto + 1)]
    else:
        if method == "exact":
            vals = [weyl_trace_moment_exact(3, n) for n in range(upto + 1)]
        elif method == "quadrature":
            if upto > 18:
                raise DomainError("quadrature moments are limited to order 18")
            raw = [
                weyl.integrate(lambda v, n=n: v.sum(axis=1) ** n, 3, tol=1e-9 * 6.0**n) if n % 2 == 0 else 0.0
                for n in range(upto + 1)
            ]
            vals = _round_checked(raw, 1e-6)
        elif method == "series":
            coeffs = charfn_series_coeffs("tau_g3", max(upto // 2 + 1, 2))
            vals = []
            for n in range(upto + 1):
                if n % 2:
                    vals.append(0)
                else:
                    v = (-1) ** (n // 2) * math.factorial(n) * coeffs[n // 2]
                    vals.append(int(v) if v.denominator == 1 else v)
        else:
            raise DomainError(f"unknown method {method!r}")
    return MomentSequence(which, vals)


# ---------------------------------------------------------------------------
# moment-based reconstruction for g = 3


@lru_cache(maxsize=8)
def _legendre_coefficients_g3(order: int) -> tuple:
    mom = moments("tau_g3", order).values
    coeffs = []
    for k in range(order + 1):
        if k % 2:
            coeffs.append(0.0)
            continue
        pk = legendre_poly_coeffs(k)
        expectation = sum(c * Fraction(mom[j], 6**j) for j, c in enumerate(pk) if c)
        coeffs.append(float(Fraction(2 * k + 1, 2) * expectation))
    return tuple(coeffs)


def f_tau_g3_reconstruct(x, order: int = 40):
    """USp(6) trace density from its moments through a Legendre series on [-6, 6].

    Coefficients are formed in exact rational arithmetic from the integer
    moments, so only the final summation is done in floating point.
    """
    if order < 0 or order > 60:
        raise DomainError("order must be in 0..60")
    coeffs = _legendre_coefficients_g3(order)
    xa = np.asarray(x, dtype=float)
    y = xa / 6.0
    total = np.zeros_like(y)
    for k, c in enumerate(coeffs):
        if c:
            total = total + c * legendre_poly(k, y)
    total = np.where(np.abs(xa) <= 6.0, total / 6.0, 0.0)
    return float(total) if total.ndim == 0 else total


# ---------------------------------------------------------------------------
# dispatch used by the command line


def density(which: str, x: float, method: str = "auto") -> float:
    if which == "tau_g1":
        return f_semicircle(x)
    if which == "tau_g2":
        return f_tau_g2(x, method)
    if which == "tau_g3":
        if method in ("auto", "slice"):
            return f_tau_slice(3, x)
        if method == "reconstruct":
            return float(f_tau_g3_reconstruct(x))
        raise DomainError(f"unknown method {method!r} for tau_g3")
    if which == "rho":
        return f_rho(x)
    if which == "tau2":
        return f_tau2(x)
    if which == "chi2":
        return f_chi2(x)
    raise DomainError(f"unknown law {which!r}")


def density_curve(which: str, xs, method: str = "auto") -> DensityCurve:
    xs = np.asarray(xs, dtype=float)
    ys = np.array([density(which, x, method) for x in xs])
    return DensityCurve(which, xs, ys, method)


def cdf(which: str, x: float) -> float:
    """Distribution function by quadrature of the density."""
    if which == "tau_g2":
        return cdf_tau_g2(x)
    lo, hi = SUPPORT[which]
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    pts = [p for p in (-2.0, 0.0, 2.0) if lo < p < x]
    val, _ = sint.quad(lambda s: density(which, s), lo, x, points=pts or None, epsabs=1e-11, limit=200)
    return min(max(val, 0.0), 1.0)
