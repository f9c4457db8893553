import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcmlab.homology import (LocalModule, dim_depth, ext_presentation, finite_length,
                             free_resolution, gamma_m, lc_length, m_adic_values)
from gcmlab.kernel import PolyRing, RingSpec, binomial
from oracles import m_adic_lengths, truncated_quotient_dim

S2 = PolyRing.make("xy")
S4 = PolyRing.make("xyzw")
TP = ["x*z", "x*w", "y*z", "y*w"]


def cyc(R, texts):
    return LocalModule.cyclic(R, [R.parse(t) for t in texts])


def test_koszul_resolutions():
    assert free_resolution(cyc(S2, ["x"]), 2).ranks == [1, 1, 0]
    res = free_resolution(cyc(S4, ["x", "y", "z", "w"]), 4)
    assert res.ranks == [binomial(4, i) for i in range(5)]
    assert all(res.composite_is_zero(k) for k in range(1, 4))


def test_two_planes_resolution():
    res = free_resolution(cyc(S4, TP), 4)
    assert res.ranks == [1, 4, 4, 1, 0]
    assert all(res.composite_is_zero(k) for k in range(1, 4))


def test_resolution_of_inhomogeneous_input_is_complex():
    M = cyc(S4, TP + ["x - z + y^3 - 2*z*w^2"])
    res = free_resolution(M, 4)
    assert all(res.composite_is_zero(k) for k in range(1, 4))
    assert res.ranks[0] == 1


def test_ext_examples():
    M = cyc(S2, ["x"])
    assert ext_presentation(M, 0).is_zero_at_origin()
    E1 = ext_presentation(M, 1)
    # Ext^1(S/(x), S) = S/(x): same m-adic Hilbert function
    assert m_adic_values(E1, 6) == m_adic_values(M, 6)
    E3 = ext_presentation(cyc(S4, TP), 3)
    assert finite_length(E3).length == 1


def test_gamma_examples():
    cube = cyc(S2, ["x^3", "x^2*y", "x*y^2", "y^3"])
    g = gamma_m(cube)
    assert finite_length(g).length == finite_length(cube).length == 6
    assert gamma_m(cyc(S2, ["x"])).is_zero_at_origin()
    g2 = gamma_m(cyc(S2, ["x^2", "x*y"]))
    assert finite_length(g2).length == 1


def test_finite_length_examples():
    assert finite_length(cyc(S2, ["x^2", "x*y", "y^2"])).length == 3
    assert not finite_length(cyc(S2, ["x"])).finite


def test_finite_length_long_tail():
    # m-adic counts stay positive until degree 12
    res = finite_length(cyc(S2, ["x^2", "x*y^2", "y^12"]))
    assert res.finite and res.length == 14


def test_finite_length_ignores_other_points():
    # (x-1) is a unit at the origin
    res = finite_length(cyc(S2, ["x*(x-1)", "y"]))
    assert res.finite and res.length == 1


def test_lc_examples():
    M = LocalModule.cyclic(S2, [])
    assert [lc_length(M, i).length for i in range(2)] == [0, 0]
    TPM = cyc(S4, TP)
    assert [lc_length(TPM, i).length for i in range(2)] == [0, 1]
    line = cyc(S2, ["x^2", "x*y"])
    assert lc_length(line, 0).length == 1 == finite_length(gamma_m(line)).length


def test_two_planes_h1_by_normalisation():
    """l(H^1) = eventual HF gap between R and k[x,y] x k[z,w]."""
    hr = m_adic_lengths(S4, [S4.parse(t) for t in TP], 8)
    planes = [2 * binomial(n + 2, 2) - 1 for n in range(8)]  # one point shared
    assert hr == planes
    normal = [2 * binomial(n + 2, 2) for n in range(8)]
    assert {b - a for a, b in zip(hr[1:], normal[1:])} == {1}
    assert lc_length(cyc(S4, TP), 1).length == 1


def test_dim_depth_examples():
    assert dim_depth(LocalModule.cyclic(S4, [])) == (4, 4)
    assert dim_depth(cyc(S4, TP)) == (2, 1)
    assert dim_depth(cyc(S2, ["x", "y"])) == (0, 0)
    with pytest.raises(ValueError):
        dim_depth(cyc(S2, ["1"]))


def test_of_ring_and_quotient():
    R = RingSpec.make("xyzw", TP)
    M = LocalModule.of_ring(R, [S4.parse("x-z")])
    Q = LocalModule.of_ring(R).quotient_by([R.parse("x-z")])
    assert M.counts(6) == Q.counts(6)


@given(st.lists(st.sampled_from(["x", "y", "x^2", "x*y", "y^2", "x^3", "y^3", "x^2*y",
                                 "x + y^2", "x*y - y^3"]), min_size=1, max_size=3),
       st.integers(2, 5))
@settings(max_examples=25, deadline=None)
def test_counts_against_dense_oracle(gens, D):
    M = cyc(S2, gens)
    counts = M.counts(D)
    assert sum(counts) == truncated_quotient_dim(S2, [S2.parse(g) for g in gens], D)


@given(st.sampled_from([["x^2", "x*y"], ["x"], ["x*y"], ["x^2", "y^3"], ["x*y^2", "x^2*y"]]))
@settings(max_examples=5, deadline=None)
def test_local_duality_consistency(gens):
    """Euler-type check: sum of lc lengths is finite only below the dimension."""
    M = cyc(S2, gens)
    d, depth = dim_depth(M)
    for i in range(depth):
        assert lc_length(M, i).length == 0
    if depth < d:
        r = lc_length(M, depth)
        assert not r.finite or r.length > 0
