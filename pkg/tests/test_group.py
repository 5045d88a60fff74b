from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vilenkin_lab.errors import CapacityError, DomainError, UsageError
from vilenkin_lab.group import (GroupPoint, Interval, RadixSequence, add, annulus, annulus_index, contains, expand,
                                measure, neg, rank, unrank)

from conftest import RADICES

m234 = RadixSequence((2, 3, 4))
m23 = RadixSequence((2, 3))


def test_cumulative_orders():
    r = RadixSequence((2, 3, 4, 5))
    assert r.M == (1, 2, 6, 24, 120)
    assert r.m_star == 5
    assert r.lcm == 60


@pytest.mark.parametrize("m", [(1, 2), (2, 0), ()])
def test_rejects_bad_radix(m):
    with pytest.raises(ValueError):
        RadixSequence(m)


def test_parse_and_cycle():
    assert RadixSequence.parse("2,3", repeat=5).m == (2, 3, 2, 3, 2)
    assert RadixSequence.parse(" 2, 4 ").m == (2, 4)
    with pytest.raises(UsageError):
        RadixSequence.parse("2,x")


def test_expand_example():
    e = expand(17, m234)
    assert e.digits == (1, 2, 2)
    assert (e.low, e.high, e.rho) == (0, 2, 2)


@pytest.mark.parametrize("name", sorted(RADICES))
def test_expand_named_indices(name):
    r = RADICES[name]
    M = r.M
    for k in range(1, r.n_max):
        e = expand(M[k], r)
        assert (e.low, e.high, e.rho) == (k, k, 0)
        e = expand(M[k] + M[k - 1], r)
        assert (e.low, e.high, e.rho) == (k - 1, k, 1)
        e = expand(M[k] + 1, r)
        assert (e.low, e.high, e.rho) == (0, k, k)


def test_expand_errors():
    with pytest.raises(DomainError):
        expand(0, m234)
    with pytest.raises(CapacityError):
        expand(24, m234)


@given(st.sampled_from(sorted(RADICES)), st.data())
def test_expand_recomposes(name, data):
    r = RADICES[name]
    n = data.draw(st.integers(1, r.M[-1] - 1))
    e = expand(n, r)
    assert sum(d * M for d, M in zip(e.digits, r.M)) == n
    assert e.digits[e.low] != 0 and e.digits[e.high] != 0
    assert all(d == 0 for d in e.digits[e.high + 1:])
    assert r.M[e.high] <= n < r.M[e.high + 1]


def test_rank_examples():
    assert unrank(0, 2, m23) == GroupPoint.zero(2, m23)
    assert unrank(5, 2, m23).coords == (1, 2)
    with pytest.raises(CapacityError):
        unrank(6, 2, m23)


@pytest.mark.parametrize("name", sorted(RADICES))
def test_rank_round_trip(name):
    r = RADICES[name]
    N = 3
    assert [rank(unrank(t, N, r)) for t in range(r.M[N])] == list(range(r.M[N]))
    assert np.array_equal(r.coordinates(N) @ np.asarray(r.M[:N]), np.arange(r.M[N]))


def test_add_neg_examples():
    x = GroupPoint((1, 2), m23)
    assert add(x, x).coords == (0, 1)
    assert neg(x).coords == (1, 1)
    assert add(x, GroupPoint.zero(2, m23)) == x
    assert x - x == GroupPoint.zero(2, m23)


def test_add_mismatch():
    with pytest.raises(UsageError):
        add(GroupPoint((1, 2), m23), GroupPoint((1,), m23))
    with pytest.raises(UsageError):
        add(GroupPoint((1,), m23), GroupPoint((1,), m234))


def test_abelian_group_exhaustive():
    r = RadixSequence((2, 3, 4))
    pts = [unrank(t, 3, r) for t in range(r.M[3])]
    table = np.array([[rank(add(x, y)) for y in pts] for x in pts])
    assert np.array_equal(table, table.T)
    for i in range(len(pts)):
        assert np.array_equal(table[table[i]], table[i][table])
    zero = GroupPoint.zero(3, r)
    assert all(add(x, neg(x)) == zero for x in pts)


def point_strategy(r, N):
    return st.tuples(*[st.integers(0, r.m[j] - 1) for j in range(N)]).map(lambda c: GroupPoint(c, r))


@given(point_strategy(RADICES["mixed"], 5), point_strategy(RADICES["mixed"], 5), point_strategy(RADICES["mixed"], 5))
def test_group_axioms_property(x, y, z):
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert (x - y) + y == x


def test_interval_examples():
    zero = GroupPoint.zero(2, m23)
    I0 = Interval(zero, 0)
    assert all(contains(I0, unrank(t, 2, m23)) for t in range(6))
    assert measure(I0) == 1
    assert Interval(zero, 1).measure() == Fraction(1, 2)
    assert Interval(zero, 1).mask(2).tolist() == [True, False, True, False, True, False]


def test_interval_depth_errors():
    with pytest.raises(DomainError):
        Interval(GroupPoint.zero(2, m23), 3)
    with pytest.raises(DomainError):
        contains(Interval(GroupPoint.zero(2, m23), 2), GroupPoint((0,), m23))


def test_annulus_examples():
    r = RadixSequence((2, 2))
    assert [p.coords for p in annulus(0, 2, r)] == [(1, 0), (1, 1)]
    assert sorted(p.coords for p in annulus(1, 2, m23)) == [(0, 1), (0, 2)]
    with pytest.raises(DomainError):
        list(annulus(2, 2, m23))


@pytest.mark.parametrize("name,N", [("walsh", 6), ("twothree", 5), ("mixed", 4)])
def test_annulus_partition(name, N):
    r = RADICES[name]
    M = r.M[N]
    seen = np.zeros(M, dtype=int)
    for s in range(N):
        pts = list(annulus(s, N, r))
        assert len(pts) == M // r.M[s] - M // r.M[s + 1]
        for p in pts:
            seen[rank(p)] += 1
    inside = Interval(GroupPoint.zero(N, r), N).mask(N)
    assert np.all(seen + inside == 1)
    idx = annulus_index(r, N)
    assert np.array_equal(idx == N, inside)
    total = sum(Fraction(1, r.M[s]) - Fraction(1, r.M[s + 1]) for s in range(N))
    assert total == 1 - Fraction(1, M)


def test_unit_point():
    e1 = GroupPoint.unit(1, 3, m234)
    assert e1.coords == (0, 1, 0)
    assert e1.truncate(2).coords == (0, 1)
    assert e1.truncate(3) == e1
