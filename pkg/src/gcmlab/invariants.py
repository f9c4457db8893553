"""Numerical invariants of a module localised at the origin.

Hilbert-Samuel functions with respect to an ideal, Hilbert coefficients,
multiplicity, the Buchsbaum invariant, homological degree (through the
identity hdeg = e + I valid on generalized Cohen-Macaulay modules),
system-of-parameters and filter-regularity tests, standard parameter
ideals, and minimal reductions of the maximal ideal.
"""
from __future__ import annotations

import random
import warnings
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, List, Optional, Sequence, Tuple

from .groebner import IdealHandle, ideal_power_gens, module_quotient
from .homology import (HS_CAP, LocalModule, StabilizationError, _standard_fit,
                       artinian_counts, finite_length, lc_length, m_adic_values, subquotient)
from .kernel import Poly, binomial, random_linear_forms

GENERICITY_ATTEMPTS = 8


class NotParameterLike(ValueError):
    """The ideal does not act as an m-primary ideal on the module."""


class ReductionError(RuntimeError):
    pass


class InvariantViolation(AssertionError):
    """A bound that holds for every generalized Cohen-Macaulay module failed."""


# ----------------------------------------------------------- Hilbert-Samuel

@dataclass(frozen=True)
class HilbertData:
    """n -> l(M / J^{n+1} M) for n = 0..len(values)-1, with its polynomial.

    ``e[i]`` are the Hilbert coefficients in the expansion
    P(n) = sum_i (-1)^i e_i C(n+d-i, d-i).
    """

    values: Tuple[int, ...]
    d: int
    e: Tuple[int, ...]
    postulation: int

    @property
    def poly_coeffs(self) -> Tuple[int, ...]:
        """Coefficients of P in the basis C(n+d-i, d-i), i = 0..d."""
        return tuple((-1) ** i * x for i, x in enumerate(self.e))

    @property
    def multiplicity(self) -> int:
        return self.e[0]

    def polynomial(self, n: int) -> int:
        return sum(c * binomial(n + self.d - i, self.d - i)
                   for i, c in enumerate(self.poly_coeffs))


def hilbert_coefficients(values: Sequence[int], d: int, points: Sequence[int]
                         ) -> Optional[Tuple[int, ...]]:
    """Solve for e_0..e_d from values at d+1 points; None if not integral."""
    A = [[Fraction((-1) ** i * binomial(n + d - i, d - i)) for i in range(d + 1)]
         for n in points]
    b = [Fraction(values[n]) for n in points]
    size = d + 1
    for col in range(size):
        piv = next(r for r in range(col, size) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(size):
            if r != col and A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                b[r] -= f * b[col]
    sol = [b[i] / A[i][i] for i in range(size)]
    if any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def _fit(values: List[int]) -> Optional[HilbertData]:
    fit = _standard_fit(values)
    if fit is None:
        return None
    d, post = fit
    K = len(values)
    if post > K - 4:
        return None
    e = hilbert_coefficients(values, d, range(K - d - 1, K))
    if e is None:
        return None
    return HilbertData(tuple(values), d, e, post)


def _is_maximal(J: IdealHandle) -> bool:
    return J.same_ideal(IdealHandle.maximal(J.ring))


def hilbert_samuel(M: LocalModule, J: Optional[IdealHandle] = None,
                   n_max: Optional[int] = None, min_values: int = 0,
                   cap: int = HS_CAP) -> HilbertData:
    """Hilbert-Samuel function of M_m with respect to J (default m).

    With ``n_max`` the values for n = 0..n_max are computed and fitted as
    they stand; otherwise the range grows until the fit stabilises.
    """
    if J is None or _is_maximal(J):
        def values_upto(K: int) -> List[int]:
            return m_adic_values(M, K)
    else:
        if not finite_length(M.quotient_by(J.generators)).finite:
            raise NotParameterLike("not a parameter-like ideal at origin")
        gens = list(J.generators)
        # lengths of M/J^{n+1}M survive across calls on the same module
        state = M._cache.setdefault(("hs_powers", tuple(gens)), ([], [2]))
        # top: vanishing degree of gr for the last power; it only grows with n
        memo, top = state

        def values_upto(K: int) -> List[int]:
            while len(memo) < K:
                power = ideal_power_gens(gens, len(memo) + 1, M.ring)
                counts = artinian_counts(M.quotient_by(power), top[0] + 1)
                top[0] = len(counts) - 1
                memo.append(sum(counts))
            return memo[:K]

    if n_max is not None:
        values = values_upto(n_max + 1)
        data = _fit(values)
        if data is None:
            raise StabilizationError(f"Hilbert-Samuel function not fitted on n <= {n_max}")
        return data
    K = max(8, min_values)
    while True:
        values = values_upto(K)
        data = _fit(values)
        if data is not None:
            return data
        if K >= cap:
            raise StabilizationError(f"Hilbert-Samuel function did not stabilize by {cap}")
        K = min(cap, K + 3)


# ------------------------------------------------------------------ report

@dataclass(frozen=True)
class InvariantReport:
    d: int
    depth: int
    lc_lengths: Tuple[Optional[int], ...]
    e: int
    buchsbaum_I: Optional[int]
    hdeg: Optional[int]
    is_gcm: bool
    is_cm: bool
    hilbert: Tuple[int, ...] = ()
    postulation: int = 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lc_lengths"] = list(self.lc_lengths)
        out["hilbert"] = list(self.hilbert)
        return out


def buchsbaum_invariant(d: int, lc: Sequence[int]) -> int:
    return sum(binomial(d - 1, i) * lc[i] for i in range(d))


def invariant_report(M: LocalModule) -> InvariantReport:
    """Dimension, depth, lower local cohomology, e, I(M), hdeg of M_m."""
    cached = M._cache.get("report")
    if cached is not None:
        return cached
    if M.is_zero_at_origin():
        raise ValueError("zero module at origin")
    hs = hilbert_samuel(M)
    d = hs.d
    lcs = [lc_length(M, i) for i in range(d)]
    is_gcm = all(r.finite for r in lcs)
    lengths = tuple(r.length if r.finite else None for r in lcs)
    depth = next((i for i, r in enumerate(lcs) if not r.finite or r.length), d)
    I = buchsbaum_invariant(d, lengths) if is_gcm else None
    hdeg = hs.e[0] + I if is_gcm else None
    rep = InvariantReport(d, depth, lengths, hs.e[0], I, hdeg, is_gcm, depth == d,
                          hs.values, hs.postulation)
    M._cache["report"] = rep
    return rep


def module_dimension(M: LocalModule) -> int:
    """Krull dimension of M_m; -1 for the zero module."""
    if M.is_zero_at_origin():
        return -1
    return hilbert_samuel(M).d


def is_part_of_sop(M: LocalModule, seq: Sequence[Poly], dim: Optional[int] = None) -> bool:
    d = module_dimension(M) if dim is None else dim
    if len(seq) > d:
        return False
    return module_dimension(M.quotient_by(seq)) == d - len(seq)


def filter_regular_failures(M: LocalModule, seq: Sequence[Poly]) -> List[int]:
    """Indices i whose colon quotient ((x_<i)M : x_i)/(x_<i)M is not of finite length."""
    bad = []
    for i, x in enumerate(seq):
        prior = M.quotient_by(seq[:i])
        U = prior.presentation
        colon = module_quotient(U, IdealHandle(M.ring, (x,)))
        Q = subquotient(M.ring, M.rank, colon.vectors(), U)
        if not finite_length(Q).finite:
            bad.append(i)
    return bad


def is_filter_regular(M: LocalModule, seq: Sequence[Poly]) -> bool:
    return not filter_regular_failures(M, seq)


# --------------------------------------------------------------- standard

@dataclass(frozen=True)
class StandardTest:
    standard: bool
    gap: int
    length: int
    multiplicity: int


def is_standard(M: LocalModule, J: IdealHandle,
                report: Optional[InvariantReport] = None) -> StandardTest:
    """Compare l(M/JM) - e(J, M) with I(M)."""
    rep = report or invariant_report(M)
    if len(J.generators) != rep.d or not is_part_of_sop(M, J.generators, rep.d):
        raise NotParameterLike("generators do not form a system of parameters")
    length = finite_length(M.quotient_by(J.generators)).length
    eJ = hilbert_samuel(M, J).e[0]
    gap = length - eJ
    if rep.is_gcm and not 0 <= gap <= rep.buchsbaum_I:
        raise InvariantViolation(f"gap {gap} outside [0, I(M) = {rep.buchsbaum_I}]")
    return StandardTest(rep.is_gcm and gap == rep.buchsbaum_I, gap, length, eJ)


def predicted_standard_hf(report: InvariantReport, eJ: int, n: int) -> int:
    """Hilbert function of a standard parameter ideal predicted from e(J, M)
    and the lengths of the lower local cohomology modules."""
    if not report.is_gcm:
        raise ValueError("prediction needs a generalized Cohen-Macaulay module")
    d = report.d
    lc = report.lc_lengths
    total = binomial(n + d, d) * eJ
    for i in range(1, d + 1):
        for j in range(0, d - i + 1):
            total += binomial(n + d - i, d - i) * binomial(d - i - 1, j - 1) * lc[j]
    return total


def check_binomial_convention(report: InvariantReport, measured: Sequence[int],
                              eJ: int) -> None:
    """Abort if the d = 1 identity HF(n) = (n+1) e + l(H^0) is not reproduced."""
    if report.d != 1:
        return
    for n, v in enumerate(measured):
        want = (n + 1) * eJ + report.lc_lengths[0]
        if predicted_standard_hf(report, eJ, n) != want or v != want:
            raise InvariantViolation(
                f"binomial convention check failed at n={n}: measured {v}, "
                f"expected (n+1)e + l(H^0) = {want}")


# -------------------------------------------------------------- reductions

@dataclass(frozen=True)
class Reduction:
    forms: Tuple[Poly, ...]
    r: int
    attempts: int


def reduction_number(M: LocalModule, forms: Sequence[Poly], k_cap: int) -> Optional[int]:
    """Least k <= k_cap with J m^k M = m^{k+1} M locally, J = (forms)."""
    ring = M.ring
    ref = m_adic_values(M, k_cap + 1)
    for k in range(k_cap + 1):
        mk = ring.maximal_ideal_power(k)
        gens = [f * g for f in forms for g in mk]
        N = M.quotient_by(gens)
        counts = N.counts(k + 2)
        # J m^k M is inside m^{k+1} M, so equal lengths mean equal submodules;
        # a vanishing degree-(k+1) piece certifies the length is finite.
        if counts[k + 1] == 0 and sum(counts[:k + 1]) == ref[k]:
            return k
    return None


def minimal_reduction(M: LocalModule, rng: random.Random,
                      max_attempts: int = GENERICITY_ATTEMPTS, k_cap: int = 12,
                      sampler: Optional[Callable[[random.Random], Sequence[Poly]]] = None,
                      dim: Optional[int] = None) -> Reduction:
    """Sample s = dim M linear forms until they generate a reduction of m."""
    if M.ring.p < 101:
        warnings.warn(f"characteristic {M.ring.p} is small; generic choices may fail")
    s = module_dimension(M) if dim is None else dim
    for attempt in range(1, max_attempts + 1):
        forms = tuple(sampler(rng) if sampler else random_linear_forms(M.ring, s, rng))
        if len(forms) != s:
            continue
        r = reduction_number(M, forms, k_cap)
        if r is not None:
            return Reduction(forms, r, attempt)
    raise ReductionError("no reduction found (field too small or bug)")


def reduction_number_bound(s: int, hdeg: int) -> int:
    return factorial(s) * hdeg - 1

