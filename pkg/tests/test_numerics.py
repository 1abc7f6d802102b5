import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3linsys.numerics import (
    ClassError,
    SystemClass,
    add,
    additivity_defect,
    canonical_pairing,
    expected_dim,
    format_mults,
    intersect,
    parse_mults,
    self_intersection,
    virtual_dim,
)


def S(n, d, *mults):
    return SystemClass(n, d, mults)


@pytest.mark.parametrize("cls, v", [
    (S(4, 1, 2), 0),
    (S(2, 0), 1),
    (S(10, 1, 3), 0),
    (S(4, 2, 4), -1),
])
def test_virtual_dim_examples(cls, v):
    assert virtual_dim(cls) == v


@pytest.mark.parametrize("cls, v, e", [
    (S(4, 3, 6), -2, -1),
    (S(2, 1, 1), 1, 1),
    (S(2, 0), 1, 1),
])
def test_expected_dim_examples(cls, v, e):
    pair = expected_dim(cls)
    assert (pair.v, pair.e) == (v, e)


def test_intersect_examples():
    assert intersect(S(2, 1, 1, 1), S(2, 1, 1, 0)) == 1
    assert intersect(S(4, 1, 2), S(4, 1, 2)) == 0
    assert self_intersection(S(6, 1, 2, 1)) == 1


def test_add_examples():
    assert add(S(4, 1, 2), S(4, 1, 2)) == S(4, 2, 4)
    assert add(S(2, 1, 1, 1), S(2, 1, 1, 0)) == S(2, 2, 2, 1)
    assert add(S(4, 0), S(4, 3, 6)) == S(4, 3, 6)


def test_additivity_defect_examples():
    a, b = S(4, 1, 2, 0, 0, 0), S(4, 1, 1, 1, 1, 0)
    assert (virtual_dim(a), virtual_dim(b), intersect(a, b)) == (0, 0, 2)
    assert virtual_dim(add(a, b)) == 1
    assert additivity_defect(a, b) == 0
    assert additivity_defect(S(2, 1, 1), S(2, 1, 1)) == 0
    assert additivity_defect(S(6, 0), S(6, 5, 3, 2)) == 0


def test_canonical_pairing_examples():
    assert canonical_pairing(S(4, 2, 4)) == 4
    assert canonical_pairing(S(8, 3)) == 0
    cls = S(2, 3, 3, 3)
    assert canonical_pairing(cls) == 6
    assert (self_intersection(cls) - 6) // 2 + 1 == -2 == virtual_dim(cls)


@pytest.mark.parametrize("bad", [(3, 1), (0, 1), (-2, 1), (4, -1)])
def test_malformed_classes_rejected(bad):
    with pytest.raises(ClassError):
        SystemClass(*bad)


def test_negative_multiplicity_rejected():
    with pytest.raises(ClassError):
        S(4, 1, -1)


def test_mismatched_n():
    with pytest.raises(ClassError):
        intersect(S(2, 1, 1), S(4, 1, 1))
    with pytest.raises(ClassError):
        add(S(2, 1), S(4, 1))


def test_huge_values_exact():
    big = 10 ** 6
    cls = SystemClass(10, big, (big,) * 3)
    assert virtual_dim(cls) == big * big * 5 + 1 - 3 * big * (big + 1) // 2


def test_shorthand_roundtrip():
    assert parse_mults("2^4,3") == (2, 2, 2, 2, 3)
    assert parse_mults("") == ()
    assert format_mults((2, 2, 2, 2, 3)) == "2^4,3"
    with pytest.raises(ClassError):
        parse_mults("2^x")


def test_catalog_virtual_dims():
    for cls in (S(2, 1, 1, 1), S(4, 1, 2), S(4, 1, 1, 1, 1), S(6, 1, 2, 1), S(10, 1, 3)):
        assert virtual_dim(cls) == 0
    assert virtual_dim(S(2, 1, 1)) == 1


def test_normalized_strips_zeros():
    assert S(4, 2, 0, 3, 0).normalized() == S(4, 2, 3)


ns = st.sampled_from([2, 4, 6, 8, 10])
mults = st.lists(st.integers(0, 12), max_size=8)


@st.composite
def class_pairs(draw):
    n = draw(ns)
    return (SystemClass(n, draw(st.integers(0, 20)), tuple(draw(mults))),
            SystemClass(n, draw(st.integers(0, 20)), tuple(draw(mults))))


@settings(max_examples=300)
@given(class_pairs())
def test_additivity_identity(pair):
    assert additivity_defect(*pair) == 0


@settings(max_examples=300)
@given(class_pairs())
def test_riemann_roch(pair):
    cls = pair[0]
    assert virtual_dim(cls) == (self_intersection(cls) - canonical_pairing(cls)) // 2 + 1


@settings(max_examples=200)
@given(class_pairs(), st.integers(0, 20), mults)
def test_intersection_symmetric_bilinear(pair, d, ms):
    a, b = pair
    c = SystemClass(a.n, d, tuple(ms))
    assert intersect(a, b) == intersect(b, a)
    assert intersect(add(a, b), c) == intersect(a, c) + intersect(b, c)


@given(class_pairs(), st.integers(1, 30))
def test_appending_point_decreases_v(pair, m):
    cls = pair[0]
    extended = SystemClass(cls.n, cls.d, cls.mults + (m,))
    assert virtual_dim(cls) - virtual_dim(extended) == m * (m + 1) // 2
