"""Prime-field primitives: sparse polynomials, univariate roots, exact rank."""

from __future__ import annotations

import hashlib
from typing import Dict, Sequence, Tuple

import numpy as np
from sympy import ZZ
from sympy.ntheory import isprime, sqrt_mod
from sympy.polys.galoistools import gf_edf_zassenhaus, gf_gcd, gf_monic, gf_pow_mod, gf_strip, gf_sub

Poly = Dict[Tuple[int, ...], int]

MAX_PRIME = 2 ** 31


class RankCapError(RuntimeError):
    """Elimination frontier larger than the configured cap."""


def check_prime(p: int) -> int:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p >= MAX_PRIME:
        raise ValueError(f"prime {p} too large for int64 elimination (must be < 2^31)")
    return p


def derive_seed(seed: int, *tags) -> int:
    """Deterministic 63-bit seed from a user seed and a sequence of tags."""
    text = "/".join([str(seed), *map(str, tags)])
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big") >> 1


def poly_eval(poly: Poly, point: Sequence[int], p: int) -> int:
    total = 0
    for exps, c in poly.items():
        term = c
        for x, e in zip(point, exps):
            if e:
                term = term * pow(x, e, p) % p
        total += term
    return total % p


def poly_diff(poly: Poly, var: int, p: int) -> Poly:
    out: Poly = {}
    for exps, c in poly.items():
        e = exps[var]
        if e:
            new = exps[:var] + (e - 1,) + exps[var + 1:]
            out[new] = (out.get(new, 0) + c * e) % p
    return {k: v for k, v in out.items() if v}


def univariate_roots(coeffs: Sequence[int], p: int) -> list[int]:
    """All roots in F_p of ``sum coeffs[i] t^i`` (low to high), sorted."""
    f = gf_strip([c % p for c in reversed(coeffs)])
    if len(f) <= 1:
        return []
    f = gf_monic(f, p, ZZ)[1]
    xp = gf_pow_mod([1, 0], p, f, p, ZZ)
    g = gf_gcd(f, gf_sub(xp, [1, 0], p, ZZ), p, ZZ)
    if len(g) <= 1:
        return []
    roots = [(-lin[1]) % p for lin in gf_edf_zassenhaus(g, 1, p, ZZ)]
    return sorted(roots)


def square_root(a: int, p: int) -> int | None:
    """A square root of ``a`` mod ``p`` or ``None`` for non-residues."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    return sqrt_mod(a, p)


def rank_mod_p(matrix: np.ndarray, p: int, cap: int = 50_000) -> int:
    """Rank over F_p by forward Gaussian elimination (first nonzero pivot)."""
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return 0
    if rows * cols > cap:
        raise RankCapError(f"{rows}x{cols} matrix exceeds elimination cap {cap}")
    a = np.array(matrix, dtype=np.int64) % p
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), -1, p)
        a[rank] = a[rank] * inv % p
        below = a[rank + 1:, col].copy()
        if below.any():
            a[rank + 1:] = (a[rank + 1:] - np.outer(below, a[rank]) % p) % p
        rank += 1
    return rank
