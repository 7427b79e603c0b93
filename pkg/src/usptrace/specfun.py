"""Real special functions used by the trace densities.

Everything here is a pure function of its arguments.  Scalars are plain
floats; the elliptic integrals, Chebyshev and Legendre polynomials also
accept numpy arrays.
"""
from __future__ import annotations

import decimal
import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import AccuracyError, DomainError, UnsupportedOrderError

_EPS = 2.220446049250313e-16
_MAX_TERMS = 100_000


class SpecFunResult(NamedTuple):
    value: float
    est_error: float


# ---------------------------------------------------------------------------
# Gamma and digamma


def rgamma(x: float) -> float:
    """1/Gamma(x), equal to 0 at the poles x = 0, -1, -2, ..."""
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def digamma(x: float) -> float:
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"digamma has a pole at {x}")
    acc = 0.0
    if x < 0.5:
        # reflection keeps the argument on the positive side
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    f = 1.0 / (x * x)
    tail = f * (-1 / 12 + f * (1 / 120 + f * (-1 / 252 + f * (1 / 240 + f * (-1 / 132 + f * (691 / 32760 - f / 12))))))
    return acc + math.log(x) - 0.5 / x + tail


def _is_nonpos_int(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


# ---------------------------------------------------------------------------
# Bessel functions of the first kind

_MAX_BESSEL_ORDER = 8


def _bessel_series(n: int, x: float) -> float:
    half = 0.5 * x
    term = half**n / math.factorial(n)
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if abs(term) < 1e-17 * abs(total) or term == 0.0:
            return total


def _bessel_miller(nmax: int, x: float) -> list[float]:
    """J_0..J_nmax at x > 0 by backward recurrence, normalised with
    J_0 + 2 (J_2 + J_4 + ...) = 1."""
    big = max(nmax, int(x))
    start = big + 20 + int(math.sqrt(60.0 * big))
    start += start % 2
    vals = [0.0] * (nmax + 1)
    j_next, j_cur = 0.0, 1e-30
    norm = 0.0
    for k in range(start, 0, -1):
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if k - 1 <= nmax:
            vals[k - 1] = j_cur
        if k - 1 > 0 and (k - 1) % 2 == 0:
            norm += 2.0 * j_cur
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            norm *= 1e-250
            vals = [v * 1e-250 for v in vals]
    norm += j_cur
    return [v / norm for v in vals]


def bessel_j(order: int, x: float) -> float:
    """Bessel function J_order(x) for integer order 0..8.

    Small arguments use the ascending series; otherwise Miller's backward
    recurrence with the Neumann-sum normalisation, which stays accurate to
    about 1e-15 absolute for every argument we need.
    """
    if not isinstance(order, (int, np.integer)) or not 0 <= order <= _MAX_BESSEL_ORDER:
        raise UnsupportedOrderError(f"bessel_j supports integer orders 0..{_MAX_BESSEL_ORDER}, got {order}")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("bessel_j needs a finite argument")
    sign = -1.0 if (x < 0 and order % 2) else 1.0
    ax = abs(x)
    if ax == 0.0:
        return 1.0 if order == 0 else 0.0
    if ax <= 2.0:
        return sign * _bessel_series(order, ax)
    return sign * _bessel_miller(order, ax)[order]


def bessel_j_upto(nmax: int, x: float) -> list[float]:
    """[J_0(x), ..., J_nmax(x)] sharing one recurrence pass."""
    if not 0 <= nmax <= _MAX_BESSEL_ORDER:
        raise UnsupportedOrderError(f"orders up to {_MAX_BESSEL_ORDER} are supported")
    x = float(x)
    ax = abs(x)
    if ax == 0.0:
        vals = [1.0] + [0.0] * nmax
    elif ax <= 2.0:
        vals = [_bessel_series(k, ax) for k in range(nmax + 1)]
    else:
        vals = _bessel_miller(nmax, ax)
    if x < 0:
        vals = [-v if k % 2 else v for k, v in enumerate(vals)]
    return vals


# ---------------------------------------------------------------------------
# Gauss hypergeometric function


def _ratio_bound(a: float, b: float, c: float, n: int) -> float:
    """Upper bound for |(a+k)(b+k)/((c+k)(k+1))| over all k >= n (n > |c|)."""
    return (n + abs(a)) / (n - abs(c)) * max(1.0, (n + abs(b)) / (n + 1.0))


def _series_2f1(a: float, b: float, c: float, z: float) -> SpecFunResult:
    term = 1.0
    total = 1.0
    abs_sum = 1.0
    n = 0
    while n < _MAX_TERMS:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        n += 1
        total += term
        abs_sum += abs(term)
        if term == 0.0:
            return SpecFunResult(total, 2.0 * n * _EPS * abs_sum)
        if n > abs(c) + 1:
            rho = _ratio_bound(a, b, c, n) * abs(z)
            if rho < 1.0:
                tail = abs(term) * rho / (1.0 - rho)
                if tail <= 0.25 * _EPS * abs(total):
                    return SpecFunResult(total, tail + 2.0 * n * _EPS * abs_sum)
    raise AccuracyError("2F1 series did not converge", best=total)


def _one_minus_z_integer(a: float, b: float, m: int, w: float) -> SpecFunResult:
    """2F1(a, b; a+b+m; 1-w) for integer m >= 0 and 0 < w <= 0.25 (log case)."""
    c = a + b + m
    finite = 0.0
    if m > 0:
        pref = math.gamma(m) * math.gamma(c) * rgamma(a + m) * rgamma(b + m)
        term = 1.0
        part = 1.0
        for n in range(1, m):
            term *= (a + n - 1) * (b + n - 1) / (n * (n - m)) * w
            part += term
        finite = pref * part
    pref2 = math.gamma(c) * rgamma(a) * rgamma(b) * (-1.0) ** m
    if pref2 == 0.0:
        return SpecFunResult(finite, 4 * _EPS * abs(finite))
    lw = math.log(w)
    psi_n1 = digamma(1.0)
    psi_nm1 = digamma(m + 1.0)
    psi_a = digamma(a + m)
    psi_b = digamma(b + m)
    coef = 1.0 / math.factorial(m)
    total = 0.0
    abs_sum = 0.0
    n = 0
    while n < _MAX_TERMS:
        term = coef * (lw - psi_n1 - psi_nm1 + psi_a + psi_b)
        total += term
        abs_sum += abs(term)
        if n > 2 and abs(term) <= 0.1 * _EPS * abs(total) and abs(coef) <= _EPS * abs(total):
            break
        coef *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * w
        psi_n1 += 1.0 / (n + 1)
        psi_nm1 += 1.0 / (n + m + 1)
        psi_a += 1.0 / (a + m + n)
        psi_b += 1.0 / (b + m + n)
        n += 1
    else:
        raise AccuracyError("2F1 logarithmic series did not converge", best=total)
    wm = w**m
    value = finite - pref2 * wm * total
    err = 8 * _EPS * (abs(finite) + abs(pref2 * wm) * abs_sum) + abs(pref2 * wm * term)
    return SpecFunResult(value, err)


def _one_minus_z(a: float, b: float, c: float, z: float) -> SpecFunResult:
    w = 1.0 - z
    m = c - a - b
    mi = round(m)
    if abs(m - mi) < 1e-12:
        if mi < 0:
            # Euler: 2F1(a,b;c;z) = (1-z)^(c-a-b) 2F1(c-a, c-b; c; z)
            inner = _one_minus_z_integer(c - a, c - b, -mi, w)
            scale = w**m
            return SpecFunResult(scale * inner.value, scale * inner.est_error)
        return _one_minus_z_integer(a, b, mi, w)
    g1 = math.gamma(c) * math.gamma(m) * rgamma(c - a) * rgamma(c - b)
    g2 = math.gamma(c) * math.gamma(-m) * rgamma(a) * rgamma(b) * w**m
    f1 = _series_2f1(a, b, 1.0 - m, w) if g1 != 0.0 else SpecFunResult(0.0, 0.0)
    f2 = _series_2f1(c - a, c - b, 1.0 + m, w) if g2 != 0.0 else SpecFunResult(0.0, 0.0)
    value = g1 * f1.value + g2 * f2.value
    err = abs(g1) * f1.est_error + abs(g2) * f2.est_error + 8 * _EPS * (abs(g1 * f1.value) + abs(g2 * f2.value))
    return SpecFunResult(value, err)


def gauss_2f1_result(a: float, b: float, c: float, z: float) -> SpecFunResult:
    """2F1(a, b; c; z) for real z <= 1 together with an error estimate."""
    a, b, c, z = float(a), float(b), float(c), float(z)
    if _is_nonpos_int(c):
        raise DomainError(f"2F1 undefined for c = {c}")
    if z > 1.0:
        raise DomainError("2F1 is only provided for z <= 1")
    if z == 0.0:
        return SpecFunResult(1.0, 0.0)
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return _series_2f1(a, b, c, z)
    if z == 1.0:
        if c - a - b <= 0:
            raise DomainError("2F1 diverges at z = 1 unless c - a - b > 0")
        value = math.gamma(c) * math.gamma(c - a - b) * rgamma(c - a) * rgamma(c - b)
        return SpecFunResult(value, 8 * _EPS * abs(value))
    if z < 0.0:
        # Pfaff transformation moves the argument into (0, 1)
        inner = gauss_2f1_result(a, c - b, c, z / (z - 1.0))
        scale = (1.0 - z) ** (-a)
        return SpecFunResult(scale * inner.value, scale * inner.est_error + 4 * _EPS * abs(scale * inner.value))
    if z <= 0.75:
        return _series_2f1(a, b, c, z)
    return _one_minus_z(a, b, c, z)


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 1.

    At z = 1 the Gauss summation value is returned (needs c - a - b > 0).
    Arguments above 0.75 go through the z -> 1 - z connection formulas,
    including the logarithmic case when c - a - b is an integer.
    """
    return gauss_2f1_result(a, b, c, z).value


def _hyp1f2_decimal(a: float, b1: float, b2: float, z: float, digits: int) -> float:
    """The same series summed in decimal arithmetic with ``digits`` significant digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        da, d1, d2, dz = (decimal.Decimal(v) for v in (a, b1, b2, z))
        term = decimal.Decimal(1)
        total = decimal.Decimal(1)
        small = decimal.Decimal(10) ** (-digits)
        n = 0
        while n < _MAX_TERMS:
            term = term * (da + n) / ((d1 + n) * (d2 + n) * (n + 1)) * dz
            n += 1
            total += term
            if abs(term) <= small * abs(total) and n > abs(z) ** (1 / 3):
                return float(total)
    raise AccuracyError("1F2 series did not converge", best=float(total))


def hyp1f2_series(a: float, b1: float, b2: float, z: float) -> SpecFunResult:
    """1F2(a; b1, b2; z) by its everywhere-convergent power series.

    For large negative z the terms grow far beyond the sum and cancel; the
    float pass measures that growth and, when it would cost digits, the
    series is summed again in decimal arithmetic with enough guard digits.
    """
    term = 1.0
    total = 1.0
    abs_sum = 1.0
    n = 0
    while n < _MAX_TERMS:
        term *= (a + n) / ((b1 + n) * (b2 + n) * (n + 1.0)) * z
        n += 1
        total += term
        abs_sum += abs(term)
        if abs(term) < 0.1 * _EPS * abs_sum and n > abs(z) ** (1 / 3):
            break
    else:
        raise AccuracyError("1F2 series did not converge", best=total)
    if not math.isfinite(abs_sum):
        raise AccuracyError("1F2 series terms overflow", best=total)
    if abs_sum > 1e3 * abs(total):
        # the float total is unreliable here, so the needed precision is
        # found by summing twice and raising it until both passes agree
        digits = 30 + int(math.log10(abs_sum))
        value = _hyp1f2_decimal(a, b1, b2, z, digits)
        for _ in range(8):
            digits += 20
            again = _hyp1f2_decimal(a, b1, b2, z, digits)
            if abs(again - value) <= _EPS * abs(again):
                return SpecFunResult(again, _EPS * abs(again))
            value = again
        raise AccuracyError("1F2 series lost too many digits to cancellation", best=value)
    return SpecFunResult(total, 4 * n * _EPS * abs_sum)


# ---------------------------------------------------------------------------
# Associated Legendre functions of degree 1/2


def _legendre_minus_m(nu: float, m: int, z: float) -> float:
    """P^{-m}_nu(z) for z > 1 through its 2F1 representation."""
    ratio = ((z - 1.0) / (z + 1.0)) ** (0.5 * m)
    return ratio / math.factorial(m) * gauss_2f1(-nu, nu + 1.0, 1.0 + m, 0.5 * (1.0 - z))


def legendre_p_half(order: int, z: float) -> float:
    """Associated Legendre function P^order_{1/2}(z) of the first kind, z > 1.

    Order -2 comes straight from the hypergeometric representation; order 2
    follows from the integer-order reflection factor
    Gamma(nu + m + 1) / Gamma(nu - m + 1), which is -15/16 here.
    """
    if order not in (-2, 2):
        raise UnsupportedOrderError("legendre_p_half supports orders -2 and 2")
    z = float(z)
    if not z > 1.0:
        raise DomainError("legendre_p_half needs z > 1")
    base = _legendre_minus_m(0.5, 2, z)
    if order == -2:
        return base
    return math.gamma(3.5) * rgamma(-0.5) * base


# ---------------------------------------------------------------------------
# Complete elliptic integrals (parameter convention)


def _ke_unit_interval(m, mc):
    """K and E by the AGM for 0 <= m < 1 given also mc = 1 - m."""
    a = np.ones_like(m)
    b = np.sqrt(mc)
    s = 0.5 * m
    weight = 0.5
    for _ in range(64):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        weight *= 2.0
        s = s + weight * c * c
        # c^2 is negligible once c is below 1e-15 relative; iterating on
        # would only accumulate weight * rounding^2
        if np.all(np.abs(c) <= 1e-15 * a):
            break
    k = 0.5 * np.pi / a
    return k, k * (1.0 - s)


def elliptic_ke_complement(m, mc):
    """(K(m), E(m)) for m < 1, given the complement mc = 1 - m separately.

    Passing mc avoids losing digits when m is within rounding of 1.
    Negative parameters use the imaginary-modulus transformation.
    """
    m = np.asarray(m, dtype=float)
    mc = np.asarray(mc, dtype=float)
    if np.any(mc <= 0.0):
        raise DomainError("K(m) diverges for m >= 1")
    neg = m < 0.0
    m_pos = np.where(neg, -m / mc, m)
    mc_pos = np.where(neg, 1.0 / mc, mc)
    k, e = _ke_unit_interval(m_pos, mc_pos)
    root = np.sqrt(mc_pos)
    k = np.where(neg, root * k, k)
    e = np.where(neg, e / root, e)
    if k.ndim == 0:
        return float(k), float(e)
    return k, e


def elliptic_ke(m):
    """Complete elliptic integrals (K(m), E(m)) of the first and second kind.

    The parameter convention is used: K(m) = int_0^{pi/2} (1 - m sin^2)^(-1/2).
    Works for any m < 1, scalar or array.
    """
    m = np.asarray(m, dtype=float)
    if np.any(m >= 1.0):
        raise DomainError("K(m) diverges for m >= 1")
    return elliptic_ke_complement(m, 1.0 - m)


def elliptic_k(m):
    return elliptic_ke(m)[0]


def elliptic_e(m):
    """E(m) for m <= 1 (E(1) = 1)."""
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr > 1.0):
        raise DomainError("E(m) is only real for m <= 1")
    at_one = m_arr == 1.0
    _, e = elliptic_ke_complement(np.where(at_one, 0.0, m_arr), np.where(at_one, 1.0, 1.0 - m_arr))
    e = np.where(at_one, 1.0, e)
    return float(e) if e.ndim == 0 else e


# ---------------------------------------------------------------------------
# Polynomial families and integers


def chebyshev_c(n: int, u):
    """c_n(u) = 2 T_n(u/2) for n >= 1 and c_0 = 1, so c_n(x + 1/x) = x^n + x^-n."""
    if n < 0:
        raise DomainError("chebyshev_c needs n >= 0")
    if n == 0:
        return np.ones_like(u) if isinstance(u, np.ndarray) else 1.0
    prev, cur = 2.0, u
    for _ in range(n - 1):
        prev, cur = cur, u * cur - prev
    return cur


def chebyshev_c_coeffs(n: int) -> list[int]:
    """Integer coefficients of c_n, lowest degree first."""
    if n == 0:
        return [1]
    prev, cur = [2], [0, 1]
    for _ in range(n - 1):
        nxt = [0] + cur
        for i, v in enumerate(prev):
            nxt[i] -= v
        prev, cur = cur, nxt
    return cur


def catalan(n: int) -> int:
    """n-th Catalan number; limited to n <= 33 so the result fits in 64 bits."""
    if n < 0:
        raise DomainError("catalan needs n >= 0")
    if n > 33:
        raise OverflowError("catalan(n) exceeds 64 bits for n > 33")
    return math.comb(2 * n, n) // (n + 1)


def legendre_poly(n: int, x):
    """Legendre polynomial P_n(x) by the three-term recurrence."""
    if n < 0:
        raise DomainError("legendre_poly needs n >= 0")
    if n == 0:
        return np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
    prev, cur = (np.ones_like(x) if isinstance(x, np.ndarray) else 1.0), x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1) * x * cur - k * prev) / (k + 1)
    return cur


def legendre_poly_coeffs(n: int) -> list[Fraction]:
    """Exact coefficients of P_n, lowest degree first."""
    if n < 0:
        raise DomainError("legendre_poly_coeffs needs n >= 0")
    prev, cur = [Fraction(1)], [Fraction(0), Fraction(1)]
    if n == 0:
        return prev
    for k in range(1, n):
        nxt = [Fraction(0)] * (k + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += Fraction(2 * k + 1, k + 1) * c
        for i, c in enumerate(prev):
            nxt[i] -= Fraction(k, k + 1) * c
        prev, cur = cur, nxt
    return cur
