"""Pure numpy implementation of the point-counting kernel."""
from __future__ import annotations

import numpy as np

from ._tables import FieldTables

_ROWS = 4096


def _degree(c: list[int]) -> int:
    d = len(c) - 1
    while d >= 0 and c[d] == 0:
        d -= 1
    return d


def is_squarefree(coeffs, p: int) -> bool:
    """gcd(f, f') is a nonzero constant (f given lowest degree first)."""
    a = [int(x) % p for x in coeffs]
    da = _degree(a)
    if da < 0:
        return False
    if da == 0:
        return True
    b = [(i * a[i]) % p for i in range(1, da + 1)]
    db = _degree(b)
    if db < 0:
        return False
    while db >= 0:
        inv = pow(b[db], p - 2, p)
        while da >= db:
            q = a[da] * inv % p
            shift = da - db
            for i in range(db + 1):
                a[i + shift] = (a[i + shift] - q * b[i]) % p
            da = _degree(a[:da])
        a, b, da, db = b, a, db, da
    return da == 0


def count_models(coeffs: np.ndarray, t: FieldTables):
    """Squarefree flag and point counts over F_p, F_{p^2} for each row.

    ``coeffs`` is an (B, 7) integer array, lowest degree first.  Rows that
    are not squarefree get counts -1.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    p = t.p
    n = coeffs.shape[0]
    sqfree = np.array([is_squarefree(row, p) for row in coeffs], dtype=bool)
    n1 = np.full(n, -1, dtype=np.int64)
    n2 = np.full(n, -1, dtype=np.int64)
    nz = coeffs != 0
    deg = np.where(nz.any(axis=1), 6 - np.argmax(nz[:, ::-1], axis=1), -1)
    lead = coeffs[np.arange(n), np.maximum(deg, 0)] % p
    odd = deg % 2 == 1
    inf1 = np.where(odd, 1, 1 + t.chi[lead].astype(np.int64))
    inf2 = np.where(odd, 1, 2)
    chi = t.chi.astype(np.int64)
    # float products are exact here: every partial sum is below 7 p^2 < 2^53
    pow1 = t.pow1.astype(np.float64)
    pow_u = t.pow_u.astype(np.float64)
    pow_v = t.pow_v.astype(np.float64)
    for start in range(0, n, _ROWS):
        sl = slice(start, start + _ROWS)
        c = coeffs[sl].astype(np.float64)
        f1 = (c @ pow1).astype(np.int64) % p
        s1 = chi[f1].sum(axis=1)
        a = (c @ pow_u).astype(np.int64) % p
        b = (c @ pow_v).astype(np.int64) % p
        norm = (a * a - t.nonres * (b * b % p)) % p
        s2 = chi[norm].sum(axis=1)
        n1[sl] = p + s1 + inf1[sl]
        n2[sl] = p * p + s2 + inf2[sl]
    n1[~sqfree] = -1
    n2[~sqfree] = -1
    return sqfree, n1, n2
