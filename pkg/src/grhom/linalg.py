"""Exact linear algebra over a prime field GF(p).

Matrices are numpy ``int64`` arrays with entries in ``[0, p)``.  Primes
must be below 2**31 so that products of two reduced entries fit in 64 bits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_PRIME = 2**31


class NotAComplexError(ValueError):
    """Raised when two composable differentials do not compose to zero."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)) or p >= MAX_PRIME:
        raise ValueError(f"modulus must be a prime below 2^31, got {p!r}")
    return int(p)


def field_inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(p)")
    return pow(a, -1, p)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` without int64 overflow (split ``b`` into 16-bit halves)."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    lo = b & 0xFFFF
    hi = b >> 16
    out = (a @ hi) % p
    out = (out * 65536) % p
    return (out + (a @ lo) % p) % p


def as_matrix(rows, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Build a reduced ``int64`` matrix from nested sequences."""
    m = np.array(rows, dtype=np.int64)
    if shape is not None:
        m = m.reshape(shape)
    if m.ndim != 2:
        m = m.reshape((m.shape[0], -1)) if m.size else np.zeros(shape or (0, 0), np.int64)
    return m % p


@dataclass(frozen=True)
class RowReduction:
    rank: int
    pivots: tuple[int, ...]
    kernel: np.ndarray  # columns form a basis of the null space
    echelon: np.ndarray  # reduced row echelon form, ``rank`` nonzero rows


def _rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def row_reduce(m: np.ndarray, p: int) -> RowReduction:
    """Gaussian elimination with first-nonzero pivoting."""
    m = np.asarray(m, dtype=np.int64)
    rows, cols = m.shape
    ech, pivots = _rref(m, p)
    pset = set(pivots)
    free = [c for c in range(cols) if c not in pset]
    ker = np.zeros((cols, len(free)), dtype=np.int64)
    if free:
        ker[free, range(len(free))] = 1
        if pivots:
            ker[np.ix_(pivots, range(len(free)))] = (-ech[:, free]) % p
    return RowReduction(len(pivots), tuple(pivots), ker, ech)


def rank(m: np.ndarray, p: int) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return len(_rref(m, p)[1])


@dataclass(frozen=True)
class Cohomology:
    dim: int
    basis: np.ndarray  # columns: cycles whose classes form a basis of H


def cohomology_rank(d_in: np.ndarray, d_out: np.ndarray, p: int) -> Cohomology:
    """Cohomology of ``V_in --d_in--> V --d_out--> V_out`` at ``V``.

    The returned cycles extend a basis of the boundaries to one of the cycles.
    """
    d_in = np.asarray(d_in, dtype=np.int64)
    d_out = np.asarray(d_out, dtype=np.int64)
    n = d_in.shape[0] if d_in.ndim == 2 else d_out.shape[1]
    if d_out.shape[1] != n:
        raise ValueError("differentials are not composable")
    if d_in.size and d_out.size and np.any(matmul_mod(d_out, d_in, p)):
        raise NotAComplexError("d_out . d_in != 0")
    ker = row_reduce(d_out, p).kernel if d_out.shape[0] else np.eye(n, dtype=np.int64)
    z = ker.shape[1]
    if d_in.size == 0:
        return Cohomology(z, ker)
    # boundaries first, then cycles: pivots falling on cycle columns pick the complement
    stacked = np.concatenate([d_in % p, ker], axis=1)
    red = row_reduce(stacked, p)
    nb = d_in.shape[1]
    chosen = [c - nb for c in red.pivots if c >= nb]
    b = red.rank - len(chosen)
    return Cohomology(z - b, ker[:, chosen])


def sparse_rank(columns, p: int) -> int:
    """Rank of a matrix given as a list of sparse columns ``{row: value}``.

    Columns are eliminated incrementally against pivots keyed by their
    smallest row; sparse inputs stay sparse in practice.
    """
    pivots: dict[int, dict[int, int]] = {}
    rk = 0
    for col in sorted(columns, key=len):
        v = {r: c % p for r, c in col.items() if c % p}
        while v:
            r = min(v)
            piv = pivots.get(r)
            if piv is None:
                inv = pow(v[r], -1, p)
                pivots[r] = {k: c * inv % p for k, c in v.items()}
                rk += 1
                break
            c = v[r]
            for k, a in piv.items():
                nv = (v.get(k, 0) - c * a) % p
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
    return rk
