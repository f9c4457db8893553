import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcmlab.groebner import (Engine, IdealHandle, SubmodulePresentation, _combine, gb_vectors,
                             ideal_combine, local_counts, normal_form, poly_to_vec,
                             reduce_vector, saturation, schreyer_resolution, standard_monomials,
                             syzygies, quotient, colon_and_saturation, intersect)
from gcmlab.kernel import DEGREVLEX, LOCAL, MonomialOrder, PolyRing, random_in_power
from oracles import truncated_quotient_dim
from strategies import polys, ring

S4 = PolyRing.make("xyzw")
TWO_PLANES = IdealHandle.parse(S4, ["x*z", "x*w", "y*z", "y*w"])


def _spoly_reduces(G, order=DEGREVLEX):
    vecs = [poly_to_vec(g) for g in G]
    ring_ = G[0].ring
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            ci, mi = G[i].leading_term(order)
            cj, mj = G[j].leading_term(order)
            L = tuple(max(a, b) for a, b in zip(mi, mj))
            ui = tuple(a - b for a, b in zip(L, mi))
            uj = tuple(a - b for a, b in zip(L, mj))
            s = G[i] * ring_.monomial(ui, pow(ci, -1, ring_.p)) - \
                G[j] * ring_.monomial(uj, pow(cj, -1, ring_.p))
            if reduce_vector(poly_to_vec(s), vecs, ring_.p, order):
                return False
    return True


def test_reduced_basis_examples():
    R = PolyRing.make("xy")
    m2 = IdealHandle.parse(R, ["x^2", "x*y", "y^2"])
    assert set(m2.groebner()) == set(m2.generators)
    assert set(IdealHandle.parse(R, ["x-y", "x+y"]).groebner()) == set(R.gens())
    G = TWO_PLANES.groebner()
    assert set(G) == set(TWO_PLANES.generators)
    assert _spoly_reduces(G)


def test_normal_form_examples():
    R = PolyRing.make("xy")
    x, y = R.gens()
    assert normal_form(x * x, IdealHandle(R, (x,))).is_zero()
    f = x * y + 3
    assert normal_form(f, IdealHandle(R, ())) == f
    assert TWO_PLANES.normal_form(S4.parse("x*z + y")) == S4.parse("y")


def test_combine_examples():
    R = PolyRing.make("xyzw")
    x, y, z, w = R.gens()
    cap = ideal_combine(IdealHandle(R, (x,)), IdealHandle(R, (y,)), "intersection")
    assert cap.same_ideal(IdealHandle(R, (x * y,)))
    prod = ideal_combine(IdealHandle(R, (x, y)), IdealHandle(R, (z, w)), "product")
    assert prod.same_ideal(TWO_PLANES)
    R2 = PolyRing.make("xy")
    sq = ideal_combine(IdealHandle.maximal(R2), None, "power", 2)
    assert sq.same_ideal(IdealHandle.parse(R2, ["x^2", "x*y", "y^2"]))


def test_colon_and_saturation_examples():
    R = PolyRing.make("xy")
    A = IdealHandle.parse(R, ["x^2", "x*y"])
    m = IdealHandle.maximal(R)
    assert quotient(A, m).same_ideal(IdealHandle.parse(R, ["x"]))
    sat, steps = saturation(A, m)
    assert sat.same_ideal(IdealHandle.parse(R, ["x"])) and steps == 1
    sat2, steps2 = colon_and_saturation(TWO_PLANES, IdealHandle.maximal(S4), "saturation")
    assert sat2.same_ideal(TWO_PLANES) and steps2 == 0


def test_syzygies_examples():
    R = PolyRing.make("xy")
    x, y = R.gens()
    z = syzygies(SubmodulePresentation(R, 1, ((x,), (y,))))
    koszul = SubmodulePresentation(R, 2, ((y, -x),))
    assert z.same_module(koszul)
    one = syzygies(SubmodulePresentation(R, 1, ((R.one(),),)))
    assert all(not v for v in one.vectors()) or one.same_module(SubmodulePresentation(R, 1, ()))


def test_syzygies_of_two_planes_kill_generators():
    gens = [poly_to_vec(g) for g in TWO_PLANES.groebner()]
    sub = SubmodulePresentation.from_vectors(S4, 1, gens)
    z = syzygies(sub)
    for v in z.vectors():
        assert not _combine(v, gens, S4.p, 0, len(gens))
    # minimal relations: 4 at degree 3, none of degree 2
    assert z.rank == 4
    lows = [v for v in z.vectors() if max(sum(m) for _, m in v) == 1]
    assert len(lows) == 4


def test_standard_monomial_examples():
    R = PolyRing.make("xy")
    mons, complete = standard_monomials(IdealHandle.parse(R, ["x^2", "x*y", "y^2"]), 3)
    assert complete and sorted(mons) == [(0, 0), (0, 1), (1, 0)]
    mons, complete = standard_monomials(IdealHandle.parse(R, ["x"]), 3)
    assert not complete and len(mons) == 4
    A = IdealHandle(S4, TWO_PLANES.generators + tuple(S4.maximal_ideal_power(2)))
    mons, complete = standard_monomials(A, 4)
    assert complete and len(mons) == 5


R3 = ring(3)


@given(st.lists(polys(R3, 3, 4), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_gb_round_trip(gens):
    """Every generator reduces to zero, and S-pairs of the basis reduce to zero."""
    A = IdealHandle(R3, tuple(gens))
    G = A.groebner()
    if not G:
        return
    assert all(A.contains(g) for g in A.generators)
    assert _spoly_reduces(G)
    assert IdealHandle(R3, G).same_ideal(A)


@given(st.lists(polys(R3, 2, 3, True), min_size=1, max_size=3), st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_local_counts_match_dense(gens, D):
    vecs = [poly_to_vec(g) for g in gens]
    counts = local_counts(vecs, R3.p, 3, 1, D)
    assert sum(counts) == truncated_quotient_dim(R3, gens, D)


@given(st.lists(polys(R3, 3, 4), min_size=1, max_size=3), polys(R3, 3, 4))
@settings(max_examples=30, deadline=None)
def test_membership_of_combinations(gens, h):
    A = IdealHandle(R3, tuple(gens))
    f = gens[0] * h + (gens[-1] * gens[0] if len(gens) > 1 else R3.zero())
    assert A.contains(f)


def test_intersection_contains_product():
    rng = random.Random(5)
    for _ in range(5):
        a = IdealHandle(R3, (random_in_power(R3, 1, rng, 1, 0.6),))
        b = IdealHandle(R3, (random_in_power(R3, 1, rng, 1, 0.6),))
        cap = intersect(a, b)
        assert cap.contains(a.generators[0] * b.generators[0])
        assert all(a.contains(g) and b.contains(g) for g in cap.generators)


def _apply(col, prev_cols, p):
    return _combine(col, prev_cols, p, 0, len(prev_cols))


def test_schreyer_resolution_is_complex():
    rng = random.Random(11)
    gens = [poly_to_vec(g) for g in TWO_PLANES.generators]
    gens.append(poly_to_vec(S4.parse("x - z") + random_in_power(S4, 3, rng, 1, 0.5)))
    maps = schreyer_resolution(gens, 1, S4.p, 5)
    for k in range(1, len(maps)):
        for col in maps[k]:
            assert not _apply(col, maps[k - 1], S4.p)
    # Schreyer ordering keeps the length within the number of variables
    assert maps[4] == []


def test_engine_local_order_requires_truncation():
    with pytest.raises(ValueError):
        Engine(S4.p, LOCAL)


def test_pot_module_basis_spans():
    R = PolyRing.make("xy")
    vecs = [{(0, (1, 0)): 1, (1, (0, 1)): 1}, {(0, (0, 1)): 1}]
    gb = gb_vectors(vecs, R.p, MonomialOrder(position="pot"))
    for v in vecs:
        assert not reduce_vector(v, gb, R.p, MonomialOrder(position="pot"))
