"""Independent plane-curve interpolation over F_p, used to check the planar base facts."""

from math import comb

import numpy as np

from k3linsys.oracle.field import rank_mod_p


def planar_actual_dim(degree: int, m: int, count: int, p: int = 1_000_003, seed: int = 0) -> int:
    """dim of degree-``degree`` plane curves with ``count`` random ``m``-fold points.

    Hasse derivatives of x^a y^b at (x0, y0): C(a,i) C(b,j) x0^(a-i) y0^(b-j).
    """
    rng = np.random.default_rng(seed)
    monos = [(a, b) for t in range(degree + 1) for a in range(t + 1) for b in [t - a]]
    rows = []
    for _ in range(count):
        x0, y0 = (int(v) for v in rng.integers(1, p, size=2))
        for s in range(m):
            for i in range(s + 1):
                j = s - i
                rows.append([comb(a, i) * pow(x0, a - i, p) * comb(b, j) * pow(y0, b - j, p) % p
                             if a >= i and b >= j else 0 for a, b in monos])
    matrix = np.array(rows, dtype=np.int64).reshape(len(rows), len(monos))
    return len(monos) - rank_mod_p(matrix, p) - 1
