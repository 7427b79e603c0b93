"""Viète coordinates of real Weil polynomials and the symmetric alcove.

For t in [-2, 2]^g the point s = (s_1, ..., s_g) of elementary symmetric
functions of t determines the class; the set of such s is the symmetric
alcove, cut out by linear forms (the polytope Theta_g) together with the
nonnegativity of the bezoutian minors (real-rootedness, Pi_g).

All functions use only ring operations where possible, so they accept
ints and Fractions (exact results) as well as floats or numpy arrays
(evaluated componentwise).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError
from .specfun import chebyshev_c_coeffs

TOL_GEOM = 1e-9


@dataclass(frozen=True)
class SymmetricPoint:
    s: tuple

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(self.s))
        if len(self.s) < 1:
            raise DomainError("a symmetric point needs g >= 1 coordinates")

    @property
    def g(self) -> int:
        return len(self.s)

    def signed(self) -> tuple:
        """(1, s_1, ..., s_g) with s_0 = 1 prepended."""
        return (1,) + self.s


@dataclass(frozen=True)
class PalindromicPolynomial:
    """Monic palindromic polynomial of degree 2g, half of it stored.

    The full polynomial is sum_n (-1)^n a_n u^(2g-n) with a_(2g-n) = a_n.
    """

    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if len(self.a) < 2:
            raise DomainError("need at least (a_0, a_1)")
        a0 = self.a[0]
        if not isinstance(a0, np.ndarray) and abs(a0 - 1) > 1e-12:
            raise DomainError("palindromic polynomials here are monic: a_0 must be 1")

    @property
    def g(self) -> int:
        return len(self.a) - 1

    def full(self) -> tuple:
        """(a_0, ..., a_2g) using a_(2g-n) = a_n."""
        return self.a + self.a[-2::-1]

    def coefficients(self) -> list:
        """Signed monomial coefficients, highest degree first."""
        return [(-1) ** n * c for n, c in enumerate(self.full())]


@dataclass
class MembershipReport:
    in_pi: bool
    in_theta: bool
    in_sigma: bool
    minors: tuple
    forms: tuple

    def to_dict(self) -> dict:
        return {
            "in_pi": bool(self.in_pi),
            "in_theta": bool(self.in_theta),
            "in_sigma": bool(self.in_sigma),
            "minors": [_plain(x) for x in self.minors],
            "forms": [[_plain(a), _plain(b)] for a, b in self.forms],
        }


def _plain(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def _as_point(p) -> SymmetricPoint:
    return p if isinstance(p, SymmetricPoint) else SymmetricPoint(tuple(p))


def _all_at_least(values, bound):
    out = True
    for v in values:
        out = np.logical_and(out, v >= bound)
    return bool(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Viète map and power sums


def viete(t) -> SymmetricPoint:
    """Elementary symmetric functions of t, by expanding prod (u - t_j)."""
    e = [1]
    for x in t:
        nxt = e + [0]
        for k in range(len(e), 0, -1):
            nxt[k] = nxt[k] + x * e[k - 1]
        e = nxt
    return SymmetricPoint(tuple(e[1:]))


def _partitions(n: int, g: int):
    """Multiplicity vectors b with b_1 + 2 b_2 + ... + g b_g = n."""

    def rec(i, remaining):
        if i == 0:
            if remaining == 0:
                yield ()
            return
        for b in range(remaining // i + 1):
            for rest in rec(i - 1, remaining - i * b):
                yield rest + (b,)

    yield from rec(min(n, g), n)


def _girard(s: tuple, n: int):
    """p_n as a polynomial in s via Girard's partition formula (n <= g)."""
    total = 0
    for b in _partitions(n, len(s)):
        k = sum(b)
        coef = n * math.factorial(k - 1)
        denom = 1
        for bi in b:
            denom *= math.factorial(bi)
        coef = (-1) ** (n - k) * (coef // denom)
        term = coef
        for i, bi in enumerate(b):
            if bi:
                term = term * s[i] ** bi
        total = total + term
    return total


def girard_power_sums(p, upto: int) -> list:
    """Power sums p_1..p_upto of the roots of u^g - s_1 u^(g-1) + ... .

    Degrees up to g use Girard's formula; higher ones the Newton recurrence
    with s_n = 0 for n > g.
    """
    p = _as_point(p)
    s, g = p.s, p.g
    if upto < 1:
        raise DomainError("upto must be >= 1")
    sums = []
    for n in range(1, upto + 1):
        if n <= g:
            sums.append(_girard(s, n))
        else:
            acc = 0
            for j in range(1, g + 1):
                acc = acc + (-1) ** (j - 1) * s[j - 1] * sums[n - j - 1]
            sums.append(acc)
    return sums


def jacobian_factor(t):
    """prod_{j<k} |t_k - t_j|, the Jacobian of the Viète map."""
    out = 1
    for a, b in combinations(t, 2):
        out = out * abs(b - a)
    return out


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def bezoutian_minors(p) -> tuple:
    """Leading principal minors m_1..m_g of the Hankel matrix (p_(i+k))."""
    p = _as_point(p)
    g = p.g
    sums = [g] + (girard_power_sums(p, 2 * g - 2) if g > 1 else [])
    h = [[sums[i + k] for k in range(g)] for i in range(g)]
    return tuple(_det([row[:j] for row in h[:j]]) for j in range(1, g + 1))


def d0(p):
    """Discriminant-like minor m_g; equals prod (t_k - t_j)^2 on the image."""
    return bezoutian_minors(p)[-1]


def in_pi(p, tol: float = TOL_GEOM):
    """True iff all roots of the real Weil polynomial are real (minors >= -tol)."""
    return _all_at_least(bezoutian_minors(p)[1:], -tol)


# ---------------------------------------------------------------------------
# linear forms and the alcove


def linear_forms(p, lam=2) -> tuple:
    """Pairs (L_i^+, L_i^-) for i = 1..g evaluated at lambda = lam.

    L_i^+ = sum_{k=0}^{i} C(g - i + k, k) s_(i-k) lam^k with s_0 = 1, and
    L_i^- is the same form with s_j replaced by (-1)^j s_j.
    """
    p = _as_point(p)
    g = p.g
    s = p.signed()
    forms = []
    for i in range(1, g + 1):
        plus = 0
        minus = 0
        for k in range(i + 1):
            c = math.comb(g - i + k, k) * lam**k
            plus = plus + c * s[i - k]
            minus = minus + c * (-1) ** (i - k) * s[i - k]
        forms.append((plus, minus))
    return tuple(forms)


def in_theta(p, tol: float = TOL_GEOM):
    return _all_at_least([v for pair in linear_forms(p) for v in pair], -tol)


def in_sigma(p, tol: float = TOL_GEOM) -> MembershipReport:
    minors = bezoutian_minors(p)
    forms = linear_forms(p)
    pi_ok = _all_at_least(minors[1:], -tol)
    theta_ok = _all_at_least([v for pair in forms for v in pair], -tol)
    return MembershipReport(pi_ok, theta_ok, np.logical_and(pi_ok, theta_ok) if np.ndim(pi_ok) else (pi_ok and theta_ok), minors, forms)


def d1(p):
    """L_g^+ L_g^-; equals prod (4 - t_j^2) on the image of the Viète map."""
    plus, minus = linear_forms(p)[-1]
    return plus * minus


def in_delta3(p, tol: float = TOL_GEOM):
    """Membership in the tetrahedron bounded by L_3^{+-} = 0 and L_0^{+-} = 0 (g = 3).

    Diagnostic only: compared against the alcove in the tests, never used
    as its definition.
    """
    p = _as_point(p)
    if p.g != 3:
        raise DomainError("the tetrahedron diagnostic is for g = 3")
    s1, s2, s3 = p.s
    l3p, l3m = linear_forms(p)[-1]
    l0p = 24 + 4 * s1 - 2 * s2 - 3 * s3
    l0m = 24 - 4 * s1 - 2 * s2 + 3 * s3
    return _all_at_least([l3p, l3m, l0p, l0m], -tol)


# ---------------------------------------------------------------------------
# coefficients of palindromic polynomials


def q_matrix(g: int) -> list[list[int]]:
    """Integer matrix sending (1, s_1, ..., s_g) to (a_0, ..., a_g)."""
    q = [[0] * (g + 1) for _ in range(g + 1)]
    for n in range(g + 1):
        for j in range(n // 2 + 1):
            q[n][n - 2 * j] = math.comb(g + 2 * j - n, j)
    return q


def coeffs_from_sym(p) -> PalindromicPolynomial:
    """Half-coefficients a_0..a_g of u^g h_s(u + 1/u)."""
    p = _as_point(p)
    s = p.signed()
    q = q_matrix(p.g)
    a = []
    for row in q:
        acc = 0
        for coef, sv in zip(row, s):
            if coef:
                acc = acc + coef * sv
        a.append(acc)
    return PalindromicPolynomial(tuple(a))


def sym_from_coeffs(poly: PalindromicPolynomial) -> SymmetricPoint:
    """Inverse of coeffs_from_sym through the Chebyshev reciprocal map.

    h(u) = sum_n (-1)^n a_n c_(g-n)(u) is the real Weil polynomial; its
    coefficients give s with the sign convention h = sum (-1)^n s_n u^(g-n).
    """
    g = poly.g
    h = [0] * (g + 1)
    for n, an in enumerate(poly.a):
        sign = (-1) ** n
        for k, c in enumerate(chebyshev_c_coeffs(g - n)):
            if c:
                h[k] = h[k] + sign * c * an
    return SymmetricPoint(tuple((-1) ** n * h[g - n] for n in range(1, g + 1)))


def exterior_trace(v, n: int):
    """Trace of the n-th exterior power of the standard representation.

    ``v`` is a CoefficientVector or a plain sequence t.
    """
    t = tuple(getattr(v, "t", v))
    g = len(t)
    if n < 0 or n > 2 * g:
        raise DomainError(f"exterior power {n} does not exist for dimension {2 * g}")
    if n > g:
        n = 2 * g - n
    return coeffs_from_sym(viete(t)).a[n]

