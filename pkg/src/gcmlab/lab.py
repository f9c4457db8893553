"""Perturbation experiments: explicit bounds N and their empirical checks.

An instance is a ring R = S/I_R with a sequence f_1..f_r that is part of a
system of parameters.  A perturbation replaces each f_i by f_i + eps_i with
eps_i in m^N.  The verifiers compare Hilbert functions, lower local
cohomology lengths and several ideal identities between I = (f) and the
perturbed ideal I_N, trial by trial, from reproducible seeds.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .groebner import (IdealHandle, ideal_power_gens, intersect, local_basis, local_counts, poly_to_vec,
                       quotient, reduce_vector, syzygy_vectors)
from .homology import LocalModule, artinian_length, finite_length, lc_length
from .invariants import (InvariantReport, filter_regular_failures, hilbert_samuel,
                         invariant_report, is_part_of_sop, minimal_reduction, module_dimension,
                         reduction_number)
from .kernel import (LOCAL, Poly, PolyRing, RingSpec, elimination_order, random_form,
                     random_in_power)

SEED_STRIDE = 1_000_003


class NotGCMError(ValueError):
    pass


class InstanceError(ValueError):
    """An instance violates one of its defining invariants."""

    def __init__(self, failures: Sequence[str]):
        super().__init__("; ".join(failures))
        self.failures = list(failures)


# ----------------------------------------------------------------- types

@dataclass
class Instance:
    ring: RingSpec
    sequence: Tuple[Poly, ...]
    label: str = ""
    _cache: Dict[str, object] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.sequence = tuple(self.sequence)

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_cache"] = {}
        return state

    @property
    def r(self) -> int:
        return len(self.sequence)

    @property
    def S(self) -> PolyRing:
        return self.ring.ambient

    def base(self) -> LocalModule:
        """R as an S-module."""
        if "R" not in self._cache:
            self._cache["R"] = LocalModule.of_ring(self.ring, label=self.label or "R")
        return self._cache["R"]

    def cut(self) -> LocalModule:
        """R/I."""
        if "RI" not in self._cache:
            self._cache["RI"] = LocalModule.of_ring(self.ring, self.sequence, label="R/I")
        return self._cache["RI"]

    def report(self) -> InvariantReport:
        return invariant_report(self.base())

    def cut_report(self) -> InvariantReport:
        return invariant_report(self.cut())


def validate_instance(inst: Instance) -> List[str]:
    """Names of the violated instance invariants (empty when valid)."""
    R = inst.base()
    if R.is_zero_at_origin():
        return ["R is zero at the origin"]
    rep = inst.report()
    failures = []
    if not rep.is_gcm:
        failures.append("R is not generalized Cohen-Macaulay")
    if inst.r > rep.d:
        failures.append("sequence is longer than dim R")
    elif not is_part_of_sop(R, inst.sequence, rep.d):
        failures.append("sequence is not part of a sop")
    if inst.r <= rep.d:
        bad = filter_regular_failures(R, inst.sequence)
        if bad:
            failures.append(f"sequence is not filter regular (colon fails at index {bad[0]})")
    return failures


@dataclass(frozen=True)
class BoundSet:
    s: int
    N_hf: int
    N_hf_improved: Optional[int]
    N_hf_cm: Optional[int]
    N_lc: int
    N_sop: int
    N_r1_lc: Optional[int]
    k_reduction: int
    t: int

    def to_dict(self) -> dict:
        return asdict(self)

    def N_i(self, i: int) -> int:
        return self.k_reduction + self.s * (self.t - 1) + i


def compute_bounds(inst: Instance) -> BoundSet:
    rep = inst.report()
    if not rep.is_gcm:
        raise NotGCMError("R is not generalized Cohen-Macaulay")
    cut = inst.cut_report()
    d, r = rep.d, inst.r
    s = d - r
    I_R = rep.buchsbaum_I
    fs = factorial(s)
    via_sum = fs * (cut.e + cut.buchsbaum_I) + (s + 1) * I_R + 1
    via_hdeg = fs * cut.hdeg + (s + 1) * I_R + 1
    if via_sum != via_hdeg:
        raise AssertionError(f"bound mismatch: {via_sum} via e + I, {via_hdeg} via hdeg")
    return BoundSet(
        s=s,
        N_hf=via_hdeg,
        N_hf_improved=None if rep.is_cm else fs * cut.hdeg + (s + 1) * I_R - s,
        N_hf_cm=fs * cut.e + 1 if rep.is_cm else None,
        N_lc=cut.e + I_R + 1,
        N_sop=cut.hdeg + 1,
        N_r1_lc=max(I_R, 1) if r == 1 else None,
        k_reduction=fs * cut.hdeg + 1,
        t=max(I_R, 1),
    )


# -------------------------------------------------------------- sampling

@dataclass(frozen=True)
class LabConfig:
    trials: int = 20
    seed: int = 0
    spread: int = 1
    density: float = 0.5
    workers: int = 1
    structure_cap: int = 2


@dataclass(frozen=True)
class Perturbation:
    index: int
    seed: int
    kind: str  # identity | random | adversarial
    epsilons: Tuple[Poly, ...]

    def apply(self, seq: Sequence[Poly]) -> Tuple[Poly, ...]:
        return tuple(f + e for f, e in zip(seq, self.epsilons))


def trial_seed(master: int, index: int) -> int:
    return master * SEED_STRIDE + index


def perturbation(inst: Instance, N: int, index: int, master: int, spread: int = 1,
                 density: float = 0.5) -> Perturbation:
    """Trial ``index`` of the family at level N.

    Trial 0 is the identity.  Odd trials cancel the part of each f_i lying
    in m^N and add a random element of m^{N+1}, which reaches the edge of
    the family; even trials add random elements of m^N.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    seed = trial_seed(master, index)
    S = inst.S
    if index == 0:
        return Perturbation(0, seed, "identity", tuple(S.zero() for _ in inst.sequence))
    rng = random.Random(seed)
    eps = []
    kind = "adversarial" if index % 2 else "random"
    for f in inst.sequence:
        if kind == "adversarial":
            e = f.truncate_below(N) - f + random_in_power(S, N + 1, rng, spread, density)
        else:
            e = random_in_power(S, N, rng, spread, density)
        eps.append(e)
    return Perturbation(index, seed, kind, tuple(eps))


def sample_family(inst: Instance, N: int, trials: int, master: int, spread: int = 1,
                  density: float = 0.5) -> List[Perturbation]:
    return [perturbation(inst, N, i, master, spread, density) for i in range(trials)]


# --------------------------------------------------------------- reports

@dataclass
class Check:
    name: str
    passed: bool
    details: str = ""


@dataclass
class TrialReport:
    index: int
    seed: int
    N: int
    kind: str
    epsilons: List[str]
    checks: List[Check] = field(default_factory=list)
    hf_table: List[Tuple[int, int, int]] = field(default_factory=list)
    lc_table: List[Tuple[int, Optional[int], Optional[int]]] = field(default_factory=list)
    skipped: bool = False

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, details: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), details))
        return passed

    def to_dict(self) -> dict:
        return {
            "index": self.index, "seed": self.seed, "N": self.N, "kind": self.kind,
            "epsilons": list(self.epsilons),
            "checks": [asdict(c) for c in self.checks],
            "hf_table": [list(row) for row in self.hf_table],
            "lc_table": [list(row) for row in self.lc_table],
            "skipped": self.skipped, "verdict": self.verdict,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrialReport":
        return cls(data["index"], data["seed"], data["N"], data["kind"], list(data["epsilons"]),
                   [Check(**c) for c in data["checks"]],
                   [tuple(r) for r in data["hf_table"]], [tuple(r) for r in data["lc_table"]],
                   data.get("skipped", False))


def _new_report(pert: Perturbation, N: int) -> TrialReport:
    return TrialReport(pert.index, pert.seed, N, pert.kind, [str(e) for e in pert.epsilons])


def _run(fn: Callable, jobs: Sequence[tuple], workers: int) -> list:
    """Apply fn to each job; results stay in job order whatever the pool does."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


# ------------------------------------------------------------ Hilbert functions

def _hf_horizon(inst: Instance, N: int) -> int:
    return N + inst.report().d + 6


def base_hilbert(inst: Instance, min_values: int):
    key = f"hf{min_values}"
    if key not in inst._cache:
        inst._cache[key] = hilbert_samuel(inst.cut(), min_values=min_values)
    return inst._cache[key]


def hf_trial(inst: Instance, N: int, pert: Perturbation) -> TrialReport:
    rep = _new_report(pert, N)
    d_cut = inst.report().d - inst.r
    seq = pert.apply(inst.sequence)
    Q = LocalModule.of_ring(inst.ring, seq, label="R/I_N")
    horizon = _hf_horizon(inst, N)
    base = base_hilbert(inst, horizon)
    if Q.is_zero_at_origin():
        rep.add("sop", False, "perturbed ideal is the unit ideal at the origin")
        return rep
    pert_hf = hilbert_samuel(Q, min_values=horizon)
    rep.add("sop", pert_hf.d == d_cut,
            f"dim R/I_N = {pert_hf.d}, expected {d_cut}")
    last = max(base.postulation, pert_hf.postulation, N) + 2
    if last >= len(base.values):
        base = hilbert_samuel(inst.cut(), min_values=last + 1)
    if last >= len(pert_hf.values):
        pert_hf = hilbert_samuel(Q, min_values=last + 1)
    rep.hf_table = [(n, base.values[n], pert_hf.values[n]) for n in range(last + 1)]
    bad = [n for n, a, b in rep.hf_table if a != b]
    rep.add("hf_pointwise", not bad, f"first mismatch at n={bad[0]}" if bad else
            f"equal for n <= {last}")
    same_poly = (base.d, base.e) == (pert_hf.d, pert_hf.e)
    rep.add("hf_polynomial", same_poly, f"e(R/I) = {list(base.e)}, e(R/I_N) = {list(pert_hf.e)}")
    return rep


def verify_hf(inst: Instance, N: Optional[int] = None, config: LabConfig = LabConfig()
              ) -> List[TrialReport]:
    N = compute_bounds(inst).N_hf if N is None else N
    fam = sample_family(inst, N, config.trials, config.seed, config.spread, config.density)
    return _run(hf_trial, [(inst, N, p) for p in fam], config.workers)


def smoke_below_N(inst: Instance, N: int, pert: Perturbation) -> bool:
    """l(R/(I + m^n)) = l(R/(I_N + m^n)) for n <= N, by one truncated computation."""
    seq = pert.apply(inst.sequence)
    a = inst.cut().counts(N)
    b = LocalModule.of_ring(inst.ring, seq).counts(N)
    return a == b


# ------------------------------------------------------------ local cohomology

def base_lc(inst: Instance) -> List[Optional[int]]:
    if "lc" not in inst._cache:
        s = inst.report().d - inst.r
        inst._cache["lc"] = [_lc_value(inst.cut(), i) for i in range(s)]
    return inst._cache["lc"]


def _lc_value(M: LocalModule, i: int) -> Optional[int]:
    res = lc_length(M, i)
    return res.length if res.finite else None


def lc_trial(inst: Instance, N: int, pert: Perturbation, mode: str = "theorem") -> TrialReport:
    rep = _new_report(pert, N)
    d = inst.report().d
    s = d - inst.r
    seq = pert.apply(inst.sequence)
    Q = LocalModule.of_ring(inst.ring, seq, label="R/I_N")
    sop = is_part_of_sop(inst.base(), seq, d)
    if mode == "prop31" and not sop:
        rep.skipped = True
        rep.add("sop_filter", True, "perturbed element is not a parameter element; filtered")
        return rep
    rep.add("sop", sop, "perturbed sequence is part of a sop" if sop else
            "perturbed sequence is not part of a sop")
    if not sop:
        return rep
    base = base_lc(inst)
    for i in range(s):
        b = _lc_value(Q, i)
        rep.lc_table.append((i, base[i], b))
    bad = [i for i, a, b in rep.lc_table if a != b or a is None]
    rep.add("lc_lengths", not bad, f"mismatch at i={bad}" if bad else
            f"equal for i < {s}" if s else "vacuous: no index i < d - r")
    return rep


def verify_lc(inst: Instance, N: Optional[int] = None, config: LabConfig = LabConfig(),
              mode: str = "theorem") -> List[TrialReport]:
    """Compare l(H^i_m(R/I)) with l(H^i_m(R/I_N)) for i < d - r.

    ``mode="prop31"`` handles r = 1 at level max(I(R), 1) and drops trials
    whose perturbed element is not a parameter element.
    """
    bounds = compute_bounds(inst)
    if mode == "prop31":
        if inst.r != 1:
            raise ValueError("the single-element mode needs r = 1")
        N = bounds.N_r1_lc if N is None else N
    elif mode != "theorem":
        raise ValueError(f"unknown mode {mode!r}")
    N = bounds.N_lc if N is None else N
    fam = sample_family(inst, N, config.trials, config.seed, config.spread, config.density)
    return _run(lc_trial, [(inst, N, p, mode) for p in fam], config.workers)


# ------------------------------------------------------------------ sop

def sop_trial(inst: Instance, N: int, pert: Perturbation) -> TrialReport:
    rep = _new_report(pert, N)
    seq = pert.apply(inst.sequence)
    d = inst.report().d
    ok = is_part_of_sop(inst.base(), seq, d)
    rep.add("sop", ok, "part of a sop" if ok else "not part of a sop")
    return rep


def verify_sop(inst: Instance, N: Optional[int] = None, config: LabConfig = LabConfig()
               ) -> List[TrialReport]:
    N = compute_bounds(inst).N_sop if N is None else N
    fam = sample_family(inst, N, config.trials, config.seed, config.spread, config.density)
    return _run(sop_trial, [(inst, N, p) for p in fam], config.workers)


# ------------------------------------------------------------ ideal identities

def local_exponent(ring: PolyRing, gens: Sequence[Poly], hint: Optional[int] = None) -> Optional[int]:
    """Least j with m^j inside the localisation of (gens); None if not m-primary.

    With ``hint`` the truncated basis modulo m^(hint+1) is tried first: a zero
    graded piece in degree j <= hint already settles it by Nakayama.
    """
    if hint is not None:
        vecs = [poly_to_vec(g) for g in gens]
        counts = local_counts(vecs, ring.p, ring.nvars, 1, hint + 1)
        if 0 in counts:
            return counts.index(0)
    M = LocalModule.cyclic(ring, gens)
    res = finite_length(M)
    if not res.finite:
        return None
    if res.length == 0:
        return 0
    T = res.length + 1
    counts = M.counts(T + 1)
    return counts.index(0)


def locally_inside(ring: PolyRing, small: Sequence[Poly], big: Sequence[Poly],
                   big_exponent: int) -> bool:
    """(small) inside (big) at the origin, given m^big_exponent inside (big) there."""
    if big_exponent == 0:
        return True
    basis = local_basis([poly_to_vec(g) for g in big], ring.p, big_exponent)
    return all(not reduce_vector(poly_to_vec(f), basis, ring.p, LOCAL, big_exponent)
               for f in small)


def mprimary_equal(ring: PolyRing, A: Sequence[Poly], B: Sequence[Poly],
                   hint: Optional[int] = None) -> Tuple[bool, str]:
    """Equality of two ideals at the origin, both expected m-primary there.

    ``hint`` is a degree a with m^a expected in both; it only speeds things up.
    """
    ja, jb = local_exponent(ring, A, hint), local_exponent(ring, B, hint)
    if ja is None or jb is None:
        return False, f"not m-primary at the origin (exponents {ja}, {jb})"
    if ja != jb:
        return False, f"m^j inside with least j = {ja} vs {jb}"
    ok = locally_inside(ring, A, B, jb) and locally_inside(ring, B, A, ja)
    return ok, f"both contain m^{ja}; " + ("same ideal" if ok else "different ideals")


def _unit_at_origin(ideal: IdealHandle) -> bool:
    return any(g.constant_term() for g in ideal.generators)


def locally_contained(ring: PolyRing, small: Sequence[Poly], big: Sequence[Poly]) -> bool:
    """(small)_m inside (big)_m for arbitrary ideals.

    Global containment is tried first; otherwise (big : small) must contain
    an element that is a unit at the origin.
    """
    B = IdealHandle(ring, tuple(big))
    if all(B.contains(f) for f in small):
        return True
    colon = quotient(B, IdealHandle(ring, tuple(small)))
    return _unit_at_origin(colon)


def _products(A: Sequence[Poly], B: Sequence[Poly]) -> List[Poly]:
    return [a * b for a in A for b in B]


def _power(ring: PolyRing, gens: Sequence[Poly], k: int) -> List[Poly]:
    if k > 0 and not gens:
        return []
    return ideal_power_gens(list(gens), k, ring)


def product_is_intersection(ring: PolyRing, ideal: Sequence[Poly], IR: Sequence[Poly],
                            K: Sequence[Poly], m: int) -> Tuple[bool, str]:
    """K^(m+1) ∩ I == I K^m at the origin, for K m-primary containing I.

    I K^m lies in the intersection, and the quotient is the kernel of
    I/IK^m -> R/K^(m+1).  So equality holds iff
    l(I/IK^m) = l(R/K^(m+1)) - l(R/(I + K^(m+1))), all lengths finite.
    """
    r = len(ideal)
    gens = [poly_to_vec(g) for g in list(ideal) + list(IR)]
    rels = []
    for z in syzygy_vectors(gens, ring.p, 1):
        v = {t: c for t, c in z.items() if t[0] < r}
        if v:
            rels.append(v)
    for h in _power(ring, K, m):
        rels += [poly_to_vec(h, j) for j in range(r)]
    left = artinian_length(LocalModule.from_relations(ring, r, rels))
    Km1 = _power(ring, K, m + 1) + list(IR)
    right = (artinian_length(LocalModule.cyclic(ring, Km1))
             - artinian_length(LocalModule.cyclic(ring, Km1 + list(ideal))))
    return left == right, f"l(I/IK'^m) = {left}, l of image in R/K'^(m+1) = {right}"


def structures_trial(inst: Instance, N: int, config: LabConfig = LabConfig()) -> TrialReport:
    """Ideal identities behind the Hilbert-function bound, checked exactly."""
    bounds = compute_bounds(inst)
    S = inst.S
    IR = list(inst.ring.quotient_generators)
    seq = list(inst.sequence)
    k, t, s = bounds.k_reduction, bounds.t, bounds.s
    rep = TrialReport(0, config.seed, N, "structures", [])
    cut = inst.cut()

    red = minimal_reduction(cut, random.Random(config.seed), k_cap=k, dim=s)
    J = list(red.forms)
    rep.add("reduction_bound", red.r <= k - 2,
            f"r_J(m, R/I) = {red.r}, bound s!*hdeg - 1 = {k - 2}")

    pk = perturbation(inst, k, 1, config.seed, config.spread, config.density)
    Ik = list(pk.apply(seq))
    pN = perturbation(inst, N, 1, config.seed, config.spread, config.density)
    IN = list(pN.apply(seq))
    pk2 = perturbation(inst, k + 2, 1, config.seed, config.spread, config.density)
    Ik2 = list(pk2.apply(seq))
    rep.epsilons = [f"C_{k}: {e}" for e in pk.epsilons] + [f"C_{N}: {e}" for e in pN.epsilons]

    mk1 = S.maximal_ideal_power(k - 1)
    cap = config.structure_cap
    for label, ideal in (("I", seq), ("I_k", Ik)):
        for m in range(cap + 1):
            lhs = S.maximal_ideal_power(k + m) + ideal + IR
            rhs = _products(_power(S, J, m + 1), mk1) + ideal + IR
            ok, info = mprimary_equal(S, lhs, rhs, k + m)
            rep.add(f"reduction_identity[{label},m={m}]", ok, info)

    Q2 = LocalModule.of_ring(inst.ring, Ik2)
    r2 = reduction_number(Q2, J, k + 1)
    rep.add("reduction_after_perturbation", r2 is not None,
            f"r_J(m, R/I_(k+2)) = {r2}, bound k + 1 = {k + 1}")

    Jt = [x ** t for x in J]
    for label, ideal in (("I", seq), ("I_N", IN)):
        for i in range(t):
            Ni = bounds.N_i(i)
            for m in range(cap + 1):
                lhs = S.maximal_ideal_power(Ni + m * t) + ideal + IR
                rhs = (_products(_power(S, Jt, m + 1), S.maximal_ideal_power(max(Ni - t, 0)))
                       + ideal + IR)
                ok, info = mprimary_equal(S, lhs, rhs, Ni + m * t)
                rep.add(f"claim1[{label},i={i},m={m}]", ok, info)

    ok, info = mprimary_equal(S, seq + Jt + IR, IN + Jt + IR)
    rep.add("K_prime_independent", ok, info)

    for label, ideal in (("I", seq), ("I_N", IN)):
        K = ideal + Jt
        I_id = IdealHandle(S, tuple(ideal + IR))
        for m in range(cap + 1):
            ok, info = product_is_intersection(S, ideal, IR, K, m)
            if label == "I":
                # second route on the unperturbed ideal, where elimination is cheap
                big = IdealHandle(S, tuple(_power(S, K, m + 1) + IR))
                lhs = intersect(big, I_id).generators
                rhs = _products(ideal, _power(S, K, m)) + IR
                direct = locally_contained(S, lhs, rhs) and locally_contained(S, rhs, lhs)
                if direct != ok:
                    raise AssertionError(f"claim2 routes disagree at m={m}: {info}")
            rep.add(f"claim2[{label},m={m}]", ok, info)
            jpow = IdealHandle(S, tuple(_power(S, Jt, m + 1) + IR))
            dl = intersect(jpow, I_id).generators
            dr = _products(_power(S, Jt, m), ideal) + IR
            ok = locally_contained(S, dl, dr)
            rep.add(f"d_sequence[{label},m={m}]", ok,
                    "J'^(m+1) ∩ I inside J'^m I" if ok else "containment fails")
    return rep


def verify_structures(inst: Instance, N: Optional[int] = None,
                      config: LabConfig = LabConfig()) -> TrialReport:
    N = compute_bounds(inst).N_hf if N is None else N
    return structures_trial(inst, N, config)


# ---------------------------------------------------------------- search

@dataclass
class SearchResult:
    N_emp: int
    bound: int
    certificate: Optional[TrialReport]
    levels: List[Tuple[int, bool, int]]

    def to_dict(self) -> dict:
        return {"N_emp": self.N_emp, "bound": self.bound,
                "certificate": self.certificate.to_dict() if self.certificate else None,
                "levels": [list(x) for x in self.levels]}


def search_min_n(inst: Instance, trials_per_level: int = 12, n_cap: Optional[int] = None,
                 config: LabConfig = LabConfig()) -> SearchResult:
    """Scan N downward from the bound; N_emp is the last level where all trials pass."""
    if trials_per_level < 11:
        raise ValueError("need at least 10 nonzero trials per level")
    bound = compute_bounds(inst).N_hf
    top = bound if n_cap is None else min(bound, n_cap)
    cfg = LabConfig(trials_per_level, config.seed, config.spread, config.density,
                    config.workers, config.structure_cap)
    levels = []
    N_emp, cert = top, None
    for N in range(top, 0, -1):
        reports = verify_hf(inst, N, cfg)
        failed = [r for r in reports if not r.verdict]
        levels.append((N, not failed, len(failed)))
        if failed:
            cert = failed[0]
            break
        N_emp = N
    if levels and not levels[0][1]:
        N_emp = top + 1
    return SearchResult(N_emp, bound, cert, levels)


# ------------------------------------------------------------ generation

class GenerationError(ValueError):
    pass


def _names(prefix: str, n: int) -> List[str]:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


def generate_instance(family: str, params: Sequence[int] = (), seed: int = 0,
                      p: int = 32003, r: int = 1, label: str = "",
                      custom: Optional[dict] = None) -> Instance:
    """Build and validate an instance from a named family.

    two_planes(c): two c-dimensional coordinate spaces meeting at the origin;
    complete_intersection(n, d_1..d_k): generic forms of degrees d_j in n
    variables; monomial_curve(a_0..a_3): the toric curve with parametrisation
    s^{a_i} t^{D - a_i}, D = max a_i; custom: variables/quotient/sequence.
    """
    rng = random.Random(seed)
    if family == "two_planes":
        (c,) = params or (2,)
        names = _names("x", 2 * c)
        S = PolyRing.make(names, p)
        quotient_gens = [S.gens()[i] * S.gens()[c + j] for i in range(c) for j in range(c)]
        label = label or f"two_planes({c})"
    elif family == "complete_intersection":
        if len(params) < 2:
            raise GenerationError("complete_intersection needs n and at least one degree")
        n, degs = params[0], list(params[1:])
        if len(degs) >= n:
            raise GenerationError("need fewer equations than variables")
        S = PolyRing.make(_names("x", n), p)
        quotient_gens = [random_form(S, dg, rng) for dg in degs]
        label = label or f"complete_intersection({n}; {','.join(map(str, degs))})"
    elif family == "monomial_curve":
        if len(params) != 4 or min(params) < 0:
            raise GenerationError("monomial_curve needs four nonnegative exponents")
        quotient_gens, S = _toric_curve(list(params), p)
        label = label or f"monomial_curve({','.join(map(str, params))})"
    elif family == "custom":
        if not custom:
            raise GenerationError("custom family needs variables, quotient and sequence")
        R = RingSpec.make(custom["variables"], custom.get("ambient_quotient", []), p)
        inst = Instance(R, tuple(R.parse(f) for f in custom["sequence"]), label or "custom")
        return _validated(inst)
    else:
        raise GenerationError(f"unknown family {family!r}")
    R = RingSpec(S, tuple(quotient_gens))
    base = LocalModule.of_ring(R)
    d = module_dimension(base)
    if r > d:
        raise GenerationError(f"r = {r} exceeds dim R = {d}")
    for _ in range(8):
        seq = tuple(random_form(S, 1, rng) for _ in range(r))
        if is_part_of_sop(base, seq, d):
            return _validated(Instance(R, seq, label))
    raise GenerationError("no parameter sequence found")


def _validated(inst: Instance) -> Instance:
    failures = validate_instance(inst)
    if failures:
        raise GenerationError("; ".join(failures))
    return inst


def _toric_curve(a: List[int], p: int) -> Tuple[List[Poly], PolyRing]:
    D = max(a)
    big = PolyRing.make(["s", "t", "a", "b", "c", "d"], p)
    s_, t_ = big.gens()[:2]
    gens = [big.gens()[2 + i] - s_ ** a[i] * t_ ** (D - a[i]) for i in range(4)]
    basis = IdealHandle(big, tuple(gens)).groebner(elimination_order(2))
    S = PolyRing.make(["a", "b", "c", "d"], p)
    out = []
    for g in basis:
        if all(m[0] == 0 and m[1] == 0 for m in g.terms_dict):
            out.append(S.from_dict({m[2:]: c for m, c in g.terms_dict.items()}))
    return out, S
