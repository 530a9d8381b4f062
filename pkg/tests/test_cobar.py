import pytest
from hypothesis import given, strategies as st

from looptor.chains import Chain
from looptor.cobar import (
    InfiniteBasis,
    UNIT,
    chain_map_defect,
    cobar_basis,
    cobar_complex,
    cobar_diff,
    cobar_homology,
    d_squared,
    format_monomial,
    generators,
)
from looptor.homology import HomologyGroup
from looptor.loop_group import loop_group
from looptor.simplicial import reduced_simplex, sphere, wedge_of_spheres

Z = HomologyGroup(1)
ZERO = HomologyGroup(0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_loop_space_of_sphere(n):
    # H_k(Omega S^n) is Z in multiples of n - 1 (tensor algebra on one generator)
    H = cobar_homology(sphere(n), 6)
    assert H == {k: Z if k % (n - 1) == 0 else ZERO for k in range(7)}


def test_wedge_of_two_spheres():
    # tensor algebra on two degree-1 classes
    H = cobar_homology(wedge_of_spheres([2, 2]), 4)
    assert [H[k] for k in range(5)] == [HomologyGroup(2**k) for k in range(5)]


def test_wedge_of_mixed_spheres():
    # generators in degrees 1 and 2: ranks satisfy r_k = r_{k-1} + r_{k-2}
    H = cobar_homology(wedge_of_spheres([2, 3]), 5)
    assert [H[k].betti for k in range(6)] == [1, 1, 2, 3, 5, 8]
    assert all(not h.torsion for h in H.values())


def test_generator_differential_of_three_cell():
    X = reduced_simplex(3)
    c = X.gen
    x = c("0,1,2,3")
    expected = Chain(
        {
            (c("0,1"), c("1,2,3")): -1,
            (c("0,2,3"),): 1,
            (c("0,1,2"), c("2,3")): 1,
            (c("0,1,3"),): -1,
        }
    )
    assert cobar_diff(X, (x,)) == expected


def test_degenerate_edge_is_unit():
    X = sphere(2)
    x = X.gen("x")
    # the product term and the face term are both the unit and cancel
    assert cobar_diff(X, (x,)) == Chain()


def test_infinite_basis_without_cap():
    with pytest.raises(InfiniteBasis, match="nondegenerate edges"):
        cobar_basis(reduced_simplex(3), 1)
    assert len(cobar_basis(reduced_simplex(3), 0, max_length=2)) == 1 + 6 + 36


def test_basis_and_format():
    X = wedge_of_spheres([2, 3])
    assert len(cobar_basis(X, 3)) == 3
    assert format_monomial(UNIT) == "1"
    assert format_monomial((sphere(2).gen("x"),)) == "c[x]"
    assert cobar_complex(sphere(3), 4).check_d_squared() == []


@pytest.mark.parametrize("X", [reduced_simplex(3), reduced_simplex(4), sphere(3), wedge_of_spheres([2, 2])], ids=lambda X: X.name)
def test_d_squared_on_capped_monomials(X):
    gens = generators(X)
    cap = 3 if len(gens) < 20 else 2
    for k in range(4):
        for m in cobar_basis(X, k, max_length=cap):
            assert d_squared(X, m) == Chain()


@pytest.mark.parametrize("X", [reduced_simplex(3), sphere(2), sphere(3), wedge_of_spheres([2, 3])], ids=lambda X: X.name)
def test_T_anticommutes_with_differentials(X):
    G = loop_group(X)
    for k in range(3):
        for m in cobar_basis(X, k, max_length=2):
            assert chain_map_defect(G, m) == Chain()


@given(st.lists(st.sampled_from(generators(reduced_simplex(4))), min_size=1, max_size=3))
def test_random_monomials_d_squared(m):
    assert d_squared(reduced_simplex(4), tuple(m)) == Chain()
