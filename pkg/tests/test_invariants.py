import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcmlab.groebner import IdealHandle
from gcmlab.homology import LocalModule
from gcmlab.invariants import (InvariantViolation, NotParameterLike, buchsbaum_invariant,
                               check_binomial_convention, hilbert_coefficients,
                               hilbert_samuel, invariant_report, is_filter_regular,
                               is_part_of_sop, is_standard, reduction_number_bound,
                               minimal_reduction, predicted_standard_hf, reduction_number)
from gcmlab.kernel import PolyRing, binomial
from oracles import m_adic_lengths

S2 = PolyRing.make("xy")
S3 = PolyRing.make("xyz")
S4 = PolyRing.make("xyzw")
TP = ["x*z", "x*w", "y*z", "y*w"]


def cyc(R, texts):
    return LocalModule.cyclic(R, [R.parse(t) for t in texts])


def ideal(R, texts):
    return IdealHandle.parse(R, texts)


def test_hilbert_samuel_examples():
    hs = hilbert_samuel(LocalModule.cyclic(S2, []))
    assert hs.values[:6] == tuple(binomial(n + 2, 2) for n in range(6))
    assert hs.e == (1, 0, 0)
    tp = hilbert_samuel(cyc(S4, TP))
    assert tp.values[:8] == tuple(m_adic_lengths(S4, [S4.parse(t) for t in TP], 8))
    assert tp.e == (2, 0, -1)
    pt = hilbert_samuel(cyc(S2, ["x", "y"]))
    assert pt.d == 0 and pt.e == (1,) and set(pt.values) == {1}


def test_hilbert_coefficients_solve():
    vals = [2 * binomial(n + 2, 2) - 1 for n in range(10)]
    assert hilbert_coefficients(vals, 2, range(5, 8)) == (2, 0, -1)


def test_report_examples():
    rep = invariant_report(LocalModule.cyclic(S3, []))
    assert (rep.d, rep.depth, rep.lc_lengths, rep.e, rep.buchsbaum_I, rep.hdeg, rep.is_cm) == \
        (3, 3, (0, 0, 0), 1, 0, 1, True)
    tp = invariant_report(cyc(S4, TP))
    assert (tp.d, tp.depth, tp.lc_lengths, tp.e, tp.buchsbaum_I, tp.hdeg) == (2, 1, (0, 1), 2, 1, 3)
    assert tp.is_gcm and not tp.is_cm
    lp = invariant_report(cyc(S2, ["x^2", "x*y"]))
    assert (lp.d, lp.lc_lengths, lp.e, lp.buchsbaum_I, lp.hdeg) == (1, (1,), 1, 1, 2)


def test_non_gcm_detected():
    rep = invariant_report(cyc(S3, ["x*y", "x*z"]))  # plane union a line
    assert rep.d == 2 and not rep.is_gcm


def test_sop_examples():
    S = LocalModule.cyclic(S2, [])
    x = S2.parse("x")
    assert is_part_of_sop(S, [x])
    assert not is_part_of_sop(S, [x, x * x])
    M = cyc(S4, TP)
    assert is_part_of_sop(M, [S4.parse("x-z")])
    assert not is_part_of_sop(M, [S4.parse("x")])


def test_filter_regular_examples():
    S = LocalModule.cyclic(S2, [])
    assert is_filter_regular(S, [S2.parse("x"), S2.parse("y")])
    assert is_filter_regular(cyc(S4, TP), [S4.parse("x-z")])
    assert not is_filter_regular(cyc(S2, ["x"]), [S2.parse("x")])


def test_standard_examples():
    S = LocalModule.cyclic(S2, [])
    t = is_standard(S, ideal(S2, ["x+y^2", "y"]))
    assert t.standard and t.gap == 0
    tp = cyc(S4, TP)
    t = is_standard(tp, ideal(S4, ["x-z", "y-w"]))
    assert (t.standard, t.gap, t.length, t.multiplicity) == (True, 1, 3, 2)
    with pytest.raises(NotParameterLike):
        is_standard(tp, ideal(S4, ["x", "y"]))


def test_nonstandard_ideal():
    M = cyc(S2, ["x^2", "x*y^2"])  # l(H^0) = 2
    t = is_standard(M, ideal(S2, ["y"]))
    assert not t.standard and t.gap == 1
    assert is_standard(M, ideal(S2, ["y^2"])).standard


def test_prediction_examples():
    rep = invariant_report(LocalModule.cyclic(S3, []))
    assert [predicted_standard_hf(rep, 5, n) for n in range(4)] == \
        [5 * binomial(n + 3, 3) for n in range(4)]
    lp = invariant_report(cyc(S2, ["x^2", "x*y"]))
    assert predicted_standard_hf(lp, 1, 2) == 4
    tp = invariant_report(cyc(S4, TP))
    assert predicted_standard_hf(tp, 2, 0) == 3


def test_convention_check_aborts_on_mismatch():
    lp = cyc(S2, ["x^2", "x*y"])
    rep = invariant_report(lp)
    J = ideal(S2, ["y"])
    measured = list(hilbert_samuel(lp, J, n_max=6).values)
    check_binomial_convention(rep, measured, 1)
    with pytest.raises(InvariantViolation, match="convention"):
        check_binomial_convention(rep, [v + 1 for v in measured], 1)


def test_reduction_examples():
    S = LocalModule.cyclic(S3, [])
    red = minimal_reduction(S, random.Random(0))
    assert red.r == 0
    tp = cyc(S4, TP)
    red = minimal_reduction(tp, random.Random(1))
    assert red.r <= reduction_number_bound(2 - 0, 3) and red.r <= 1 * 3 - 1
    # forms inside (x, y) miss the plane x = y = 0
    assert reduction_number(tp, [S4.parse("x"), S4.parse("y")], 6) is None


def test_small_field_warns():
    R = PolyRing.make("xy", 7)
    with pytest.warns(UserWarning):
        minimal_reduction(LocalModule.cyclic(R, []), random.Random(0))


def test_buchsbaum_invariant():
    assert buchsbaum_invariant(2, (0, 1)) == 1
    assert buchsbaum_invariant(3, (1, 2, 0)) == 1 + 2 * 2


@given(st.integers(0, 10 ** 6))
@settings(max_examples=8, deadline=None)
def test_gap_bounded_by_I(seed):
    """0 <= l(M/JM) - e(J, M) <= I(M) on the two planes."""
    rng = random.Random(seed)
    tp = cyc(S4, TP)
    rep = invariant_report(tp)
    x, y, z, w = S4.gens()
    coeffs = [rng.randrange(1, 50) for _ in range(4)]
    J = IdealHandle(S4, (x - coeffs[0] * z + coeffs[1] * y * y, y - coeffs[2] * w + coeffs[3] * x * z))
    t = is_standard(tp, J, rep)
    assert 0 <= t.gap <= rep.buchsbaum_I
