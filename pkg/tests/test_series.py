import numpy as np
import pytest

from k3linsys.oracle import series
from k3linsys.oracle.field import poly_diff, poly_eval

P = 1_000_003


def _quartic_setup(order, seed=0):
    """A random affine quartic through a random point, with nonzero z-partial."""
    rng = np.random.default_rng(seed)
    poly = {}
    for a in range(5):
        for b in range(5 - a):
            for c in range(5 - a - b):
                poly[(a, b, c)] = int(rng.integers(0, P))
    x0, y0, z0 = (int(v) for v in rng.integers(0, P, size=3))
    poly[(0, 0, 0)] = (poly[(0, 0, 0)] - poly_eval(poly, (x0, y0, z0), P)) % P
    assert poly_eval(poly, (x0, y0, z0), P) == 0
    args = [series.shifted_param(x0, 0, order, P), series.shifted_param(y0, 1, order, P),
            series.constant(0, order)]
    return poly, args, (x0, y0, z0)


@pytest.mark.parametrize("order", [0, 1, 3, 6, 9])
def test_newton_matches_order_by_order(order):
    poly, args, (_, _, z0) = _quartic_setup(order)
    z_newton = series.newton_lift(poly, args, 2, z0, order, P)
    z_slow = series.lift_order_by_order(poly, args, 2, z0, order, P)
    assert np.array_equal(z_newton, z_slow)
    full = list(args)
    full[2] = z_newton
    assert not series.compose(poly, full, P).any()


def test_first_order_is_tangent_plane():
    poly, args, pt = _quartic_setup(1, seed=3)
    z = series.newton_lift(poly, args, 2, pt[2], 1, P)
    fx, fy, fz = (poly_eval(poly_diff(poly, k, P), pt, P) for k in range(3))
    inv = pow(fz, -1, P)
    assert z[0, 0] == pt[2]
    assert z[1, 0] == (-fx * inv) % P
    assert z[0, 1] == (-fy * inv) % P


def test_order_zero_is_constant():
    poly, args, pt = _quartic_setup(0, seed=4)
    z = series.newton_lift(poly, args, 2, pt[2], 0, P)
    assert z.shape == (1, 1) and z[0, 0] == pt[2]


def test_doubling_preserves_prefix():
    poly, args4, pt = _quartic_setup(4, seed=5)
    _, args8, _ = _quartic_setup(8, seed=5)
    z4 = series.newton_lift(poly, args4, 2, pt[2], 4, P)
    z8 = series.newton_lift(poly, args8, 2, pt[2], 8, P)
    assert np.array_equal(series.truncate(z8, 4)[:5, :5], z4)


def test_inverse():
    rng = np.random.default_rng(2)
    a = series.truncate(rng.integers(0, P, size=(7, 7)), 6)
    a[0, 0] = 17
    assert np.array_equal(series.mul(a, series.inverse(a, P), P), series.constant(1, 6))
    a[0, 0] = 0
    with pytest.raises(ZeroDivisionError):
        series.inverse(a, P)


def test_mul_matches_naive():
    rng = np.random.default_rng(9)
    order = 5
    a = series.truncate(rng.integers(0, P, size=(6, 6)), order)
    b = series.truncate(rng.integers(0, P, size=(6, 6)), order)
    naive = np.zeros((6, 6), dtype=object)
    for i in range(6):
        for j in range(6):
            for k in range(6):
                for l in range(6):
                    if i + j + k + l <= order:
                        naive[i + k, j + l] += int(a[i, j]) * int(b[k, l])
    assert np.array_equal(series.mul(a, b, P), (naive % P).astype(np.int64))


def test_lowest_degree():
    s = series.zeros(3)
    assert series.lowest_degree(s) is None
    s[1, 1] = 4
    assert series.lowest_degree(s) == 2
