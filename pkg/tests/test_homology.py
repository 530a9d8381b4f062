import random

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_factors

from conftest import random_complex
from looptor.homology import (
    GradedComplex,
    HomologyError,
    HomologyGroup,
    expected_mod_p,
    homology,
    homology_all,
    invariant_factors,
    kunneth,
    mod_p_dimensions,
    rank_mod_p,
    smith_normal_form,
)

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_snf_small():
    assert smith_normal_form([[2, 4], [6, 8]]) == ([2, 4], 2)
    assert smith_normal_form([[0, 0], [0, 0]]) == ([], 0)
    assert smith_normal_form([[2, 0], [0, 3]]) == ([1, 6], 2)


@given(matrices)
def test_snf_matches_sympy(M):
    ours, rank = smith_normal_form(M)
    theirs = [abs(int(v)) for v in sympy_factors(Matrix(M), domain=ZZ) if v != 0]
    assert ours == theirs
    assert rank == Matrix(M).rank()
    assert all(b % a == 0 for a, b in zip(ours, ours[1:]))


@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_mod_p_rank_counts_factors_prime_to_p(M, p):
    factors, _ = smith_normal_form(M)
    assert rank_mod_p(M, p) == sum(1 for f in factors if f % p)


@given(st.randoms(use_true_random=False))
def test_random_complex_homology(rnd):
    C, H = random_complex(rnd)
    assert C.check_d_squared() == []
    got = homology_all(C, range(4))
    assert got == H
    for p in (2, 3, 5):
        dims = mod_p_dimensions(C, p, range(4))
        assert dims == {k: expected_mod_p(H, p, k) for k in range(4)}


@given(st.randoms(use_true_random=False))
def test_homology_is_basis_order_independent(rnd):
    C, H = random_complex(rnd)
    perms = {k: rnd.sample(range(len(b)), len(b)) for k, b in C.bases.items()}
    assert homology_all(C.permuted(perms), range(4)) == homology_all(C, range(4))


def test_circle_and_torsion():
    # circle: one vertex, one edge with zero boundary
    C = GradedComplex({0: ["v"], 1: ["e"]}, {1: [[0]]})
    assert homology_all(C) == {0: HomologyGroup(1), 1: HomologyGroup(1)}
    T = GradedComplex({0: ["v"], 1: ["e"]}, {1: [[2]]})
    assert homology(T, 0) == HomologyGroup(0, (2,))
    assert str(homology(T, 0)) == "Z/2"
    assert str(HomologyGroup(3, (2, 4))) == "Z^3 + Z/2 + Z/4"
    assert str(HomologyGroup(0)) == "0"


def test_d_squared_detected():
    C = GradedComplex({0: [0], 1: [0], 2: [0]}, {1: [[1]], 2: [[1]]})
    with pytest.raises(HomologyError):
        homology(C, 1)


def test_invariant_factors():
    assert invariant_factors([2, 3]) == (6,)
    assert invariant_factors([2, 4, 3]) == (2, 12)
    assert invariant_factors([1, 1]) == ()
    assert invariant_factors([6, 10]) == (2, 30)


def test_kunneth_tor_term():
    # RP^2 x RP^2 in low degrees: H = Z, Z/2, 0 for RP^2
    RP2 = {0: HomologyGroup(1), 1: HomologyGroup(0, (2,)), 2: HomologyGroup(0)}
    assert kunneth(RP2, RP2, 1) == HomologyGroup(0, (2, 2))
    assert kunneth(RP2, RP2, 2) == HomologyGroup(0, (2,))
    assert kunneth(RP2, RP2, 3) == HomologyGroup(0, (2,))
