import numpy as np
import pytest
from hypothesis import given, strategies as st

from vilenkin_lab.errors import CapacityError, DomainError, UsageError
from vilenkin_lab.families import SubsequenceFamily
from vilenkin_lab.group import GroupPoint, Interval, RadixSequence, expand
from vilenkin_lab.hardy import (Atom, AtomicDecomposition, CounterexampleSpec, Martingale, assemble, block_atom,
                                build_counterexample, closed_form_spectrum, coarsen, condexp,
                                counterexample_atom, counterexample_coefficient, hardy_norm, maximal_function,
                                random_atom, random_decomposition, select_subsequence, validate_atom)
from vilenkin_lab.harness.oracles import naive_forward
from vilenkin_lab.kernels import lp_quasinorm
from vilenkin_lab.transform import CylinderFunction, forward, partial_sum

from conftest import RADICES

walsh = RadixSequence.walsh(12)


def rand_f(r, N, rng):
    M = r.M[N]
    return CylinderFunction(r, N, rng.standard_normal(M) + 1j * rng.standard_normal(M))


def test_condexp_examples(rng):
    r = RADICES["twothree"]
    N = 4
    f = rand_f(r, N, rng)
    assert condexp(f, N).allclose(f, 0)
    assert condexp(f, 0).allclose(CylinderFunction.constant(f.integral(), r, N), 1e-12)
    psi3 = CylinderFunction.character(3, walsh, 3)
    assert condexp(psi3, 1).allclose(CylinderFunction.zeros(walsh, 3), 1e-15)
    with pytest.raises(CapacityError):
        condexp(f, N + 1)


@given(st.sampled_from(sorted(RADICES)), st.integers(0, 2**32 - 1))
def test_condexp_is_partial_sum(name, seed):
    r = RADICES[name]
    N = 4
    f = rand_f(r, N, np.random.default_rng(seed))
    F = forward(f)
    for n in range(N + 1):
        assert condexp(f, n).allclose(partial_sum(f, r.M[n], F), 1e-10)


@given(st.integers(0, 2**32 - 1), st.integers(0, 5), st.integers(0, 5))
def test_tower_property(seed, n, k):
    r = RADICES["mixed"]
    f = rand_f(r, 5, np.random.default_rng(seed))
    assert condexp(condexp(f, n), k).allclose(condexp(f, min(n, k)), 1e-12)


def test_martingale_adaptedness(rng):
    r = RADICES["twothree"]
    f = rand_f(r, 5, rng)
    mart = Martingale.from_function(f)
    assert mart.resolution == 5 and mart.is_adapted()
    assert mart.limit.allclose(f, 1e-15)
    broken = list(mart.levels)
    broken[2] = broken[2] + CylinderFunction.constant(1.0, r, 2)
    assert not Martingale(r, broken).is_adapted()
    with pytest.raises(UsageError):
        Martingale(r, [coarsen(f, 1)])


def test_maximal_function_examples(rng):
    r = RadixSequence.walsh(5)
    one = CylinderFunction.constant(1, r, 5)
    assert np.allclose(maximal_function(one).values, 1)
    assert np.allclose(maximal_function(CylinderFunction.character(1, r, 5)).values, 1)
    f = rand_f(r, 5, rng)
    assert np.all(maximal_function(f).values >= np.abs(f.values) - 1e-15)


def test_hardy_norm_examples(rng):
    r = RADICES["mixed"]
    assert hardy_norm(CylinderFunction.constant(-2j, r, 3), 0.5) == pytest.approx(2)
    f = rand_f(r, 4, rng)
    for p in (0.25, 0.5, 1.0):
        assert hardy_norm(f, p) >= lp_quasinorm(f, p) - 1e-12
    with pytest.raises(DomainError):
        hardy_norm(f, 0)


def test_validate_atom_examples():
    r = RadixSequence.walsh(3)
    I0 = Interval(GroupPoint.zero(3, r), 0)
    assert validate_atom(Atom(I0, CylinderFunction.character(1, r, 3), 1.0))
    bad = validate_atom(Atom(I0, CylinderFunction.constant(1, r, 3), 1.0))
    assert not bad and "mean" in bad.reasons[0]
    I1 = Interval(GroupPoint.zero(3, r), 1)
    leak = Atom(I1, CylinderFunction(r, 3, [1, 0, -1, 0, 0, 0, 0, 0.5]), 1.0)
    assert any("off the support" in reason for reason in validate_atom(leak).reasons)
    big = Atom(I1, CylinderFunction(r, 3, [3, 0, -3, 0, 0, 0, 0, 0]), 1.0)
    assert any("exceeds" in reason for reason in validate_atom(big).reasons)


def test_atom_sup_tolerance_is_multiplicative():
    r = RadixSequence.walsh(4)
    I2 = Interval(GroupPoint.zero(4, r), 2)
    v = np.where(I2.mask(4), 1.0, 0.0) * CylinderFunction.character(4, r, 4).values
    ok = Atom(I2, CylinderFunction(r, 4, v * 16 * (1 + 5e-11)), 0.5)
    over = Atom(I2, CylinderFunction(r, 4, v * 16 * (1 + 5e-10)), 0.5)
    assert validate_atom(ok) and not validate_atom(over)


@pytest.mark.parametrize("name", ["walsh", "twothree", "mixed"])
@pytest.mark.parametrize("p", [0.25, 0.5, 1.0])
def test_generated_atoms_validate(name, p, rng):
    r = RADICES[name]
    N = 4
    for _ in range(10):
        assert validate_atom(random_atom(r, N, p, rng))
        assert validate_atom(random_atom(r, N, p, rng, real=True))
        assert validate_atom(block_atom(r, N, p, rng))


def test_assemble_examples(rng):
    r = RADICES["twothree"]
    a = random_atom(r, 4, 0.5, rng)
    assert assemble(AtomicDecomposition([1.0], [a]), 4).allclose(a.values, 1e-15)
    assert np.all(assemble(AtomicDecomposition([], []), 2, r, 4).values == 0)
    with pytest.raises(UsageError):
        assemble(AtomicDecomposition([], []), 2)
    with pytest.raises(UsageError):
        AtomicDecomposition([1.0, 2.0], [a])


@pytest.mark.parametrize("p", [0.5, 1.0])
def test_assembled_hardy_norm_bounded_by_coefficients(p):
    r = RADICES["walsh"]
    worst = 0.0
    for i in range(20):
        d = random_decomposition(r, 8, p, np.random.default_rng([7, i]), 4)
        f = assemble(d, 8)
        for n in range(9):
            assert assemble(d, n).allclose(condexp(f, n), 1e-10)
        worst = max(worst, hardy_norm(f, p) ** p / d.coefficient_sum(p))
    # each atom has H_p quasinorm^p at most one here, and the p-th power is subadditive
    assert 0 < worst <= 1 + 1e-9


def test_counterexample_single_block():
    spec = CounterexampleSpec(0.5, (5,), 6, walsh)
    ce = build_counterexample(spec)
    F = ce.spectrum.values
    assert np.allclose(F[4:8], 2) and np.abs(np.delete(F, range(4, 8))).max() <= 1e-12
    direct = naive_forward(ce.martingale.limit.values, walsh, 6)
    assert np.abs(direct - closed_form_spectrum(spec)).max() <= 1e-9


@pytest.mark.parametrize("radix,N,K", [(walsh, 10, 3), (RadixSequence.cycle((2, 3), 10), 10, 3),
                                       (RadixSequence.cycle((3, 4), 7), 7, 2)])
@pytest.mark.parametrize("p", [0.5, 0.25])
def test_counterexample_invariants(radix, N, K, p):
    spec = select_subsequence(SubsequenceFamily.builtin("Mn+1"), p, K, radix, N)
    ce = build_counterexample(spec)
    scale = np.abs(ce.martingale.limit.values).max()
    assert ce.martingale.is_adapted(1e-12 * scale)
    assert np.abs(ce.spectrum.values - closed_form_spectrum(spec)).max() <= 1e-9
    assert all(validate_atom(a) for a in ce.decomposition.atoms)
    assert ce.decomposition.coefficients == [counterexample_coefficient(n, p, radix) for n in spec.indices]
    assert np.isfinite(ce.decomposition.coefficient_sum(p))
    # the p-th power of the quasinorm is subadditive and every atom has H_p norm <= m_* here
    h = hardy_norm(ce.martingale.limit, p)
    assert h ** p <= radix.m_star ** p * ce.decomposition.coefficient_sum(p) * (1 + 1e-9)


def test_counterexample_atom_formula():
    a = counterexample_atom(3, 0.5, walsh, 6)
    assert validate_atom(a)
    assert a.support.depth == 3
    # sup of the block kernel is M_{h+1} - M_h, attained on I_{h+1}
    assert np.abs(a.values.values).max() == pytest.approx(a.bound * (walsh.m[3] - 1) / walsh.m_star)


def test_select_subsequence_example():
    spec = select_subsequence(SubsequenceFamily.builtin("Mn+1"), 0.5, 3, walsh, 10)
    assert [e.high for e in spec.expansions()] == [2, 4, 6]
    assert spec.growth_ratios() == pytest.approx([2 ** 0.5, 2, 2 ** 1.5])
    assert spec.indices[0] >= 3
    assert list(spec.indices) == sorted(set(spec.indices))


def test_select_subsequence_rejections():
    with pytest.raises(DomainError, match="bounded rho"):
        select_subsequence(SubsequenceFamily.builtin("Mn"), 0.5, 3, walsh, 10)
    with pytest.raises(DomainError):
        select_subsequence(SubsequenceFamily.builtin("Mn+1"), 1.0, 3, walsh, 10)
    with pytest.raises(DomainError, match="only"):
        select_subsequence(SubsequenceFamily.builtin("Mn+1"), 0.5, 6, walsh, 10)


@pytest.mark.parametrize("indices,N,msg", [((2,), 6, "n_0 >= 3"), ((9, 5), 6, "increasing"),
                                           ((33,), 5, r"\|n_k\| \+ 1"), ((5, 6), 6, "disjoint")])
def test_spec_validation(indices, N, msg):
    with pytest.raises(DomainError, match=msg):
        CounterexampleSpec(0.5, indices, N, walsh)
    with pytest.raises(DomainError):
        CounterexampleSpec(1.0, (5,), 6, walsh)


def test_tail_sum_is_geometric():
    spec = select_subsequence(SubsequenceFamily.builtin("Mn+1"), 0.5, 5, walsh, 12)
    ratios = spec.growth_ratios()
    assert all(b * b >= 2 * a * a * (1 - 1e-12) for a, b in zip(ratios, ratios[1:]))
    assert spec.tail_sum() <= 1 / ratios[0] / (1 - 2 ** -0.5) + 1e-12
    assert all(expand(n, walsh).low == 0 for n in spec.indices)
