import pytest
from hypothesis import given, strategies as st

from satsys.grid import (
    GridPoint,
    GridShape,
    comparable,
    cover_edges,
    divisor_covers,
    divisor_pairs,
    divisors,
    factorize,
    horizontal_edge,
    in_shape,
    is_cover_pair,
    is_prime,
    leq,
    meet,
    point_order,
    points,
    two_prime_shape,
    vertical_edge,
)

pts_3_2 = st.tuples(st.integers(0, 3), st.integers(0, 2)).map(lambda t: GridPoint(*t))


def test_points_count_and_order():
    shape = GridShape(3, 2)
    ps = points(shape)
    assert len(ps) == 12 == shape.point_count
    assert ps == tuple(sorted(ps))
    assert ps[0] == GridPoint(0, 0)
    assert ps[-1] == GridPoint(3, 2)


def test_shape_validation():
    with pytest.raises(ValueError):
        GridShape(-1, 0).validate()
    with pytest.raises(ValueError):
        points(GridShape(2, -3))


def test_cover_edges_3_2():
    edges = cover_edges(GridShape(3, 2))
    assert len(edges) == 17  # 3*3 horizontal + 2*4 vertical
    assert len(set(edges)) == 17
    horiz = [e for e in edges if e.orientation == "horizontal"]
    vert = [e for e in edges if e.orientation == "vertical"]
    assert len(horiz) == 9 and len(vert) == 8
    assert horizontal_edge(2, 1) in edges
    assert vertical_edge(3, 1) in edges
    for e in edges:
        assert is_cover_pair(e.source, e.target)


def test_edge_json():
    assert horizontal_edge(1, 2).to_json() == [[1, 2], [2, 2]]
    assert vertical_edge(0, 0).to_json() == [[0, 0], [0, 1]]


def test_meet_examples():
    assert meet(GridPoint(2, 1), GridPoint(1, 3)) == GridPoint(1, 1)
    assert meet(GridPoint(0, 4), GridPoint(3, 0)) == GridPoint(0, 0)


@given(pts_3_2, pts_3_2)
def test_meet_is_lower_bound(x, y):
    w = meet(x, y)
    assert leq(w, x) and leq(w, y)


@given(pts_3_2, pts_3_2, pts_3_2)
def test_meet_is_greatest_lower_bound(x, y, z):
    if leq(z, x) and leq(z, y):
        assert leq(z, meet(x, y))


@given(pts_3_2, pts_3_2, pts_3_2)
def test_leq_partial_order(x, y, z):
    assert leq(x, x)
    if leq(x, y) and leq(y, x):
        assert x == y
    if leq(x, y) and leq(y, z):
        assert leq(x, z)


@given(pts_3_2, pts_3_2)
def test_comparable_symmetry(x, y):
    assert comparable(x, y) == comparable(y, x)


def test_in_shape():
    s = GridShape(2, 1)
    assert in_shape(GridPoint(2, 1), s)
    assert not in_shape(GridPoint(3, 0), s)
    assert not in_shape(GridPoint(0, 2), s)


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}
    assert factorize(97) == {97: 1}
    with pytest.raises(ValueError):
        factorize(0)


def test_is_prime():
    assert [k for k in range(2, 30) if is_prime(k)] == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
    ]
    assert not is_prime(1)


def test_divisors():
    assert divisors(12) == (1, 2, 3, 4, 6, 12)
    assert divisors(1) == (1,)
    assert divisors(49) == (1, 7, 49)


def test_divisor_pairs_and_covers():
    assert divisor_pairs(12) == (
        (1, 2), (1, 3), (1, 4), (1, 6), (1, 12),
        (2, 4), (2, 6), (2, 12),
        (3, 6), (3, 12),
        (4, 12), (6, 12),
    )
    assert divisor_covers(12) == (
        (1, 2), (1, 3), (2, 4), (2, 6), (3, 6), (4, 12), (6, 12),
    )


def test_two_prime_shape():
    assert two_prime_shape(200, 2, 5) == GridShape(3, 2)
    assert two_prime_shape(7, 7, None) == GridShape(1, 0)
    assert two_prime_shape(1, 3, 5) == GridShape(0, 0)
    assert two_prime_shape(125, None, 5) == GridShape(0, 3)
    with pytest.raises(ValueError):
        two_prime_shape(30, 2, 3)  # leftover factor 5


def test_point_order():
    assert point_order(GridPoint(2, 1), 3, 5) == 45
    assert point_order(GridPoint(0, 0), None, None) == 1
    assert point_order(GridPoint(0, 3), None, 7) == 343
    with pytest.raises(ValueError):
        point_order(GridPoint(1, 0), None, 7)
