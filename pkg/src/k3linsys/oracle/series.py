"""Truncated bivariate power series over F_p and implicit-function lifting.

A series is an ``(M+1, M+1)`` int64 array ``s[i, j]`` = coefficient of
``u^i v^j``; entries with ``i + j > M`` are kept at zero.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field import Poly, poly_diff


def _mask(order: int) -> np.ndarray:
    i, j = np.indices((order + 1, order + 1))
    return (i + j) <= order


def zeros(order: int) -> np.ndarray:
    return np.zeros((order + 1, order + 1), dtype=np.int64)


def constant(c: int, order: int) -> np.ndarray:
    s = zeros(order)
    s[0, 0] = c
    return s


def shifted_param(c: int, which: int, order: int, p: int) -> np.ndarray:
    """The series ``c + u`` (which=0) or ``c + v`` (which=1)."""
    s = constant(c % p, order)
    if order >= 1:
        s[(1, 0) if which == 0 else (0, 1)] = 1
    return s


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    order = a.shape[0] - 1
    out = zeros(order)
    for i, j in zip(*np.nonzero(a)):
        if i + j > order:
            continue
        out[i:, j:] = (out[i:, j:] + a[i, j] * b[: order + 1 - i, : order + 1 - j]) % p
    out[~_mask(order)] = 0
    return out


def truncate(a: np.ndarray, degree: int) -> np.ndarray:
    """Zero out all terms of total degree > ``degree``."""
    out = a.copy()
    i, j = np.indices(a.shape)
    out[(i + j) > degree] = 0
    return out


def homogeneous_part(a: np.ndarray, degree: int) -> np.ndarray:
    out = zeros(a.shape[0] - 1)
    i, j = np.indices(a.shape)
    sel = (i + j) == degree
    out[sel] = a[sel]
    return out


def lowest_degree(a: np.ndarray) -> int | None:
    """Total degree of the lowest nonzero term, ``None`` for the zero series."""
    i, j = np.nonzero(a)
    if i.size == 0:
        return None
    return int((i + j).min())


def powers(s: np.ndarray, top: int, p: int) -> list[np.ndarray]:
    out = [constant(1, s.shape[0] - 1)]
    for _ in range(top):
        out.append(mul(out[-1], s, p))
    return out


def compose(poly: Poly, args: Sequence[np.ndarray], p: int) -> np.ndarray:
    """Substitute series ``args`` for the variables of ``poly``."""
    order = args[0].shape[0] - 1
    if not poly:
        return zeros(order)
    top = max(max(e) for e in poly)
    pw = [powers(a, top, p) for a in args]
    out = zeros(order)
    for exps, c in poly.items():
        term = constant(c % p, order)
        for k, e in enumerate(exps):
            if e:
                term = mul(term, pw[k][e], p)
        out = (out + term) % p
    return out


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    """Multiplicative inverse of a unit series by Newton doubling."""
    order = a.shape[0] - 1
    a0 = int(a[0, 0]) % p
    if a0 == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv = constant(pow(a0, -1, p), order)
    prec = 1
    two = constant(2, order)
    while prec <= order:
        prec = min(2 * prec, order + 1)
        inv = truncate(mul(inv, (two - mul(a, inv, p)) % p, p), prec - 1)
    return inv


def _substituted(args: list[np.ndarray], dep: int, z: np.ndarray) -> list[np.ndarray]:
    full = list(args)
    full[dep] = z
    return full


def newton_lift(poly: Poly, args: list[np.ndarray], dep: int, z0: int, order: int, p: int) -> np.ndarray:
    """Series ``Z`` with ``poly(args[dep := Z]) = 0`` mod degree ``order+1``.

    ``args`` holds the series for the independent coordinates; the entry at
    ``dep`` is ignored.  Precision doubles at each Newton step.
    """
    dpoly = poly_diff(poly, dep, p)
    z = constant(z0 % p, order)
    prec = 1
    while prec <= order:
        prec = min(2 * prec, order + 1)
        full = _substituted(args, dep, z)
        value = compose(poly, full, p)
        slope = compose(dpoly, full, p)
        z = truncate((z - mul(value, inverse(slope, p), p)) % p, prec - 1)
    return z


def lift_order_by_order(poly: Poly, args: list[np.ndarray], dep: int, z0: int, order: int, p: int) -> np.ndarray:
    """Same series as :func:`newton_lift`, solved one total degree at a time."""
    dpoly = poly_diff(poly, dep, p)
    z = constant(z0 % p, order)
    base = [int(a[0, 0]) for a in args]
    base[dep] = z0 % p
    const = [constant(c, order) for c in base]
    inv_slope = pow(int(compose(dpoly, const, p)[0, 0]), -1, p)
    for k in range(1, order + 1):
        residual = compose(poly, _substituted(args, dep, z), p)
        z = (z - homogeneous_part(residual, k) * inv_slope) % p
    return z
