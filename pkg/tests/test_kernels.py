import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vilenkin_lab.errors import CapacityError, DomainError
from vilenkin_lab.group import GroupPoint, Interval, RadixSequence, annulus, expand, rank, unrank
from vilenkin_lab.harness.oracles import naive_dirichlet
from vilenkin_lab.kernels import (dirichlet_block, dirichlet_closed, dirichlet_direct, dirichlet_table,
                                  iter_dirichlet, kernel_reports, lemma2_scan, lemma3_minorant_check,
                                  local_kernel_integral, lp_quasinorm, weak_lp_norm, weak_lp_norms)
from vilenkin_lab.transform import CylinderFunction

from conftest import RADICES

walsh = RadixSequence.walsh(12)


def test_trivial_kernels():
    r = RADICES["twothree"]
    N = 4
    assert np.all(dirichlet_direct(1, N, r).values == 1)
    assert np.all(dirichlet_direct(0, N, r).values == 0)
    for n in (1, 5, 17, r.M[N]):
        assert dirichlet_direct(n, N, r).values[0] == pytest.approx(n)


def test_walsh_d3_table():
    D3 = dirichlet_direct(3, 2, walsh).values
    # ranks are little-endian: rank(x0, x1) = x0 + 2 x1
    assert D3.real.tolist() == [3, 1, 1, -1]
    assert lp_quasinorm(D3, 1) == 1.5
    assert np.allclose(dirichlet_closed(3, 2, walsh).values, D3, atol=1e-15)


def test_block_examples():
    r = RadixSequence((2, 3, 2))
    assert np.all(dirichlet_block(0, 2, r).values == 1)
    D = dirichlet_block(1, 2, r).values
    coords = r.coordinates(2)
    assert np.array_equal(D, np.where(coords[:, 0] == 0, 2.0, 0.0))
    for k in range(3):
        assert dirichlet_block(k, 3, r).integral() == 1
    with pytest.raises(CapacityError):
        dirichlet_block(3, 2, r)


@pytest.mark.parametrize("radix,N", [(RadixSequence.walsh(10), 10), (RadixSequence.cycle((2, 3), 7), 7),
                                     (RadixSequence.cycle((3, 4), 5), 5)])
def test_three_way_agreement(radix, N):
    M = radix.M[N]
    assert M <= 1024
    table = dirichlet_table(N, radix)
    worst = max(np.abs(table[n] - dirichlet_closed(n, N, radix).values).max() for n in range(1, M + 1))
    assert worst < 1e-9
    for k in range(N + 1):
        assert np.abs(table[radix.M[k]] - dirichlet_block(k, N, radix).values).max() < 1e-9
        off = dirichlet_block(k, N, radix).values == 0
        assert np.abs(table[radix.M[k]][off]).max(initial=0.0) <= 1e-11


@given(st.sampled_from(sorted(RADICES)), st.data())
def test_direct_matches_float_oracle(name, data):
    r = RADICES[name]
    N = 3
    n = data.draw(st.integers(0, r.M[N]))
    assert np.abs(dirichlet_direct(n, N, r).values - naive_dirichlet(n, r, N)).max() <= 1e-10


def test_iter_matches_table():
    r = RADICES["mixed"]
    N = 3
    table = dirichlet_table(N, r)
    rows = dict(iter_dirichlet(N, r))
    assert sorted(rows) == list(range(1, r.M[N]))
    assert all(np.abs(rows[n] - table[n]).max() <= 1e-12 for n in rows)


def test_closed_form_zero_digit_terms():
    # with n_0 = 0 the j = 0 term vanishes, so off I_1 only the psi_n factor times higher blocks remain (all zero)
    r = RADICES["twothree"]
    N = 4
    coords = r.coordinates(N)
    for n in range(2, r.M[N], 2):
        if expand(n, r).digits[0] == 0:
            D = dirichlet_closed(n, N, r).values
            assert np.abs(D[coords[:, 0] != 0]).max() <= 1e-12


def test_kernel_index_errors():
    with pytest.raises(CapacityError):
        dirichlet_direct(17, 4, walsh)
    with pytest.raises(CapacityError):
        dirichlet_closed(0, 4, walsh)


def test_lp_examples():
    r = RadixSequence.walsh(4)
    c = CylinderFunction.constant(-3, r, 4)
    assert lp_quasinorm(c, 0.5) == pytest.approx(3)
    assert weak_lp_norm(c, 0.5) == pytest.approx(3)
    ind = Interval(GroupPoint.zero(4, r), 1).mask(4).astype(float)
    assert lp_quasinorm(ind, 0.5) == pytest.approx(0.25)
    assert weak_lp_norm(ind, 0.5) == pytest.approx(0.25)
    for k in range(5):
        assert lp_quasinorm(dirichlet_block(k, 4, r), 1) == pytest.approx(1)
    assert lp_quasinorm(np.array([1.0, -4.0]), math.inf) == 4
    with pytest.raises(DomainError):
        lp_quasinorm(c, 0)
    with pytest.raises(DomainError):
        weak_lp_norm(c, -1)


def brute_weak(values, p):
    a = np.abs(values)
    return max(v * np.mean(a >= v) ** (1 / p) for v in np.unique(a))


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=40), st.sampled_from([0.25, 0.5, 1.0, 2.0]))
def test_weak_norm_exact_and_chebyshev(vals, p):
    a = np.asarray(vals)
    w = weak_lp_norm(a, p)
    assert w == pytest.approx(brute_weak(a, p), rel=1e-12, abs=1e-300)
    assert w <= lp_quasinorm(a, p) * (1 + 1e-12)
    assert weak_lp_norms(a[None, :], p)[0] == pytest.approx(w, rel=1e-12, abs=1e-300)


def brute_local_integral(n, x, N, radix):
    w = next(k for k, Mk in enumerate(radix.M) if n <= Mk)
    W = max(N, w)
    D = naive_dirichlet(n, radix, W)
    xw = x.truncate(W)
    total = 0.0
    for t in range(radix.M[W]):
        tp = unrank(t, W, radix)
        if all(c == 0 for c in tp.coords[:N]):
            total += abs(D[rank(xw - tp)])
    return total / radix.M[W]


@pytest.mark.parametrize("name", ["walsh", "twothree", "mixed"])
def test_local_integral_against_double_sum(name, rng):
    r = RADICES[name]
    for _ in range(8):
        N = int(rng.integers(1, 4))
        n = int(rng.integers(1, r.M[4]))
        x = unrank(int(rng.integers(0, r.M[N])), N, r)
        assert local_kernel_integral(n, x, N) == pytest.approx(brute_local_integral(n, x, N, r), abs=1e-12)


def test_local_integral_support_and_origin():
    r = RADICES["twothree"]
    N = 3
    for s in range(N):
        for x in annulus(s, N, r):
            assert local_kernel_integral(r.M[N], x, N) == pytest.approx(0, abs=1e-12)
    # D_{M_N} is M_N on I_N, so the integral over I_N at the origin is one
    assert local_kernel_integral(r.M[N], GroupPoint.zero(N, r), N) == pytest.approx(1)


def test_lemma2_scan_matches_brute_force():
    r = RADICES["twothree"]
    width = 3
    scans = lemma2_scan(r, width)
    for N, scan in scans.items():
        best = 0.0
        for n in range(1, r.M[width]):
            for s in range(N):
                for x in annulus(s, N, r):
                    best = max(best, r.M[N] / r.M[s] * brute_local_integral(n, x.truncate(width), N, r))
        assert scan.max_ratio == pytest.approx(best, rel=1e-12)
        assert math.isfinite(scan.max_ratio)


def test_lemma3_walsh_example():
    res = lemma3_minorant_check(5, 4, walsh)
    assert res and (res.low, res.high) == (0, 2)
    assert res.min_abs == pytest.approx(1)
    assert res.bound == 1
    D5, D1 = dirichlet_direct(5, 4, walsh).values, dirichlet_direct(1, 4, walsh).values
    on = Interval(GroupPoint.unit(0, 4, walsh), 1).mask(4)
    assert np.allclose(np.abs(D5[on]), np.abs(D1[on]))


def test_lemma3_preconditions():
    with pytest.raises(DomainError):
        lemma3_minorant_check(8, 5, walsh)
    with pytest.raises(DomainError):
        lemma3_minorant_check(17, 4, RadixSequence.walsh(6))


def test_lemma3_exhaustive_small():
    r = RadixSequence.cycle((2, 3, 2), 4)
    N = 4
    table = dirichlet_table(N, r)
    eligible = [n for n in range(1, r.M[N]) if expand(n, r).rho >= 1]
    results = [lemma3_minorant_check(n, N, r, table=table) for n in eligible]
    assert all(results)
    assert all(res.min_abs >= res.bound - 1e-9 for res in results)


def test_lemma3_reports_failures_with_witness():
    r = RadixSequence.walsh(4)
    table = dirichlet_table(4, r).copy()
    table[5] = 0
    res = lemma3_minorant_check(5, 4, r, table=table)
    assert not res
    assert res.failures and {"n", "x_rank", "abs_Dn", "bound"} <= set(res.failures[0])


@pytest.mark.parametrize("name,N", [("walsh", 6), ("twothree", 4)])
def test_kernel_report_l1_at_least_one(name, N):
    reports = list(kernel_reports(N, RADICES[name]))
    assert len(reports) == RADICES[name].M[N] - 1
    assert min(r.l1_norm for r in reports) >= 1 - 1e-12
