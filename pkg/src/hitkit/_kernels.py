"""Compiled row-reduction kernels used by the identity tester."""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def _rref_gf2_packed(M, d):
    # M: (m, W) uint64, bit c of a row lives in word c >> 6, bit c & 63
    m, W = M.shape
    piv = np.empty(min(m, d), np.int64)
    one = np.uint64(1)
    r = 0
    for c in range(d):
        if r == m:
            break
        w = c >> 6
        b = np.uint64(c & 63)
        i = r
        while i < m and ((M[i, w] >> b) & one) == 0:
            i += 1
        if i == m:
            continue
        if i != r:
            for k in range(W):
                t = M[r, k]
                M[r, k] = M[i, k]
                M[i, k] = t
        for j in range(m):
            if j != r and ((M[j, w] >> b) & one):
                for k in range(w, W):
                    M[j, k] ^= M[r, k]
        piv[r] = c
        r += 1
    return piv[:r], r


@numba.njit(cache=True)
def _rref_modp(M, p):
    # M: (m, d) int64 with entries in [0, p)
    m, d = M.shape
    piv = np.empty(min(m, d), np.int64)
    r = 0
    for c in range(d):
        if r == m:
            break
        i = r
        while i < m and M[i, c] == 0:
            i += 1
        if i == m:
            continue
        if i != r:
            for k in range(d):
                t = M[r, k]
                M[r, k] = M[i, k]
                M[i, k] = t
        # normalise pivot to 1 via Fermat inverse
        a = M[r, c]
        inv = 1
        e = p - 2
        base = a
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for k in range(c, d):
            M[r, k] = (M[r, k] * inv) % p
        for j in range(m):
            if j != r and M[j, c] != 0:
                f = M[j, c]
                for k in range(c, d):
                    M[j, k] = (M[j, k] - f * M[r, k]) % p
        piv[r] = c
        r += 1
    return piv[:r], r


def rref(F: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Pivot columns and basis rows (reduced echelon form) of ``F`` over GF(p)."""
    m, d = F.shape
    if m == 0 or d == 0:
        return np.zeros(0, np.int64), np.zeros((0, d), F.dtype)
    if p == 2:
        P = np.packbits(F.astype(np.uint8), axis=1, bitorder="little")
        W = (P.shape[1] + 7) // 8
        P = np.pad(P, ((0, 0), (0, W * 8 - P.shape[1])))
        M = np.ascontiguousarray(P).view("<u8").copy()
        piv, r = _rref_gf2_packed(M, d)
        B = np.unpackbits(M[:r].view(np.uint8), axis=1, bitorder="little", count=d)
        return piv, B.astype(np.int64)
    M = np.ascontiguousarray(F, dtype=np.int64) % p
    piv, r = _rref_modp(M, p)
    return piv, M[:r].copy()
