"""Lookup tables for counting points over F_p and F_{p^2}."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_TABLE_PRIME = 1021
MAX_COEFFS = 7  # polynomials of degree <= 6


@dataclass(frozen=True)
class FieldTables:
    p: int
    nonres: int
    chi: np.ndarray  # int8, quadratic character on F_p
    pow1: np.ndarray  # int64 (7, p): x^k mod p
    pow_u: np.ndarray  # int64 (7, p*p): first coordinate of x^k in F_{p^2}
    pow_v: np.ndarray  # int64 (7, p*p): second coordinate


def quadratic_character(p: int) -> np.ndarray:
    chi = -np.ones(p, dtype=np.int8)
    chi[0] = 0
    chi[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    return chi


def least_nonresidue(p: int) -> int:
    chi = quadratic_character(p)
    return int(np.nonzero(chi == -1)[0][0])


@lru_cache(maxsize=8)
def field_tables(p: int) -> FieldTables:
    """Tables for F_p and F_{p^2} = F_p(sqrt(d)), d the least non-residue.

    Element u + v sqrt(d) of F_{p^2} has index u + p v, so the first p
    indices are the elements of F_p.
    """
    if p > MAX_TABLE_PRIME:
        raise ValueError(f"point-count tables are limited to p <= {MAX_TABLE_PRIME}")
    chi = quadratic_character(p)
    d = least_nonresidue(p)
    x = np.arange(p, dtype=np.int64)
    pow1 = np.empty((MAX_COEFFS, p), dtype=np.int64)
    pow1[0] = 1
    for k in range(1, MAX_COEFFS):
        pow1[k] = pow1[k - 1] * x % p
    idx = np.arange(p * p, dtype=np.int64)
    u, v = idx % p, idx // p
    pow_u = np.empty((MAX_COEFFS, p * p), dtype=np.int64)
    pow_v = np.empty((MAX_COEFFS, p * p), dtype=np.int64)
    pow_u[0], pow_v[0] = 1, 0
    for k in range(1, MAX_COEFFS):
        a, b = pow_u[k - 1], pow_v[k - 1]
        pow_u[k] = (a * u + d * b % p * v) % p
        pow_v[k] = (a * v + b * u) % p
    for arr in (chi, pow1, pow_u, pow_v):
        arr.setflags(write=False)
    return FieldTables(p, d, chi, pow1, pow_u, pow_v)
