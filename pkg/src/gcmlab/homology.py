"""Free resolutions over S, Ext^j_S(M, S), m-torsion and local cohomology lengths.

Local cohomology is read off through local duality over the regular local
ring S_m:  l(H^i_m(M_m)) = l(Ext^{n-i}_S(M, S)_m).  All modules are
cokernels F/U of submodules U of a free S-module F; lengths "at the origin"
are always lengths of localisations at m.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .groebner import (IdealHandle, SubmodulePresentation, Vec, _combine,
                       local_counts, module_saturation, schreyer_resolution, syzygies)
from .kernel import PolyRing, Poly, RingSpec

HS_CAP = 40
_ZERO_CACHE: Dict[int, tuple] = {}


class StabilizationError(RuntimeError):
    pass


def _zero(n: int) -> tuple:
    z = _ZERO_CACHE.get(n)
    if z is None:
        z = _ZERO_CACHE[n] = (0,) * n
    return z


@dataclass
class LocalModule:
    """The module F/U, F = S^rank, studied after localising at the origin."""

    ring: PolyRing
    presentation: SubmodulePresentation
    label: str = ""
    _cache: Dict[object, object] = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.presentation.rank

    @property
    def relations(self) -> List[Vec]:
        return self.presentation.vectors()

    @classmethod
    def cyclic(cls, ring: PolyRing, gens: Sequence[Poly], label: str = "") -> "LocalModule":
        """S/(gens)."""
        return cls(ring, SubmodulePresentation(ring, 1, tuple((g,) for g in gens)), label)

    @classmethod
    def of_ring(cls, R: RingSpec, extra: Sequence[Poly] = (), label: str = "") -> "LocalModule":
        """R/(extra) = S/(I_R + extra) as an S-module."""
        return cls.cyclic(R.ambient, list(R.quotient_generators) + list(extra), label)

    @classmethod
    def from_relations(cls, ring: PolyRing, rank: int, rels: Sequence[Vec],
                       label: str = "") -> "LocalModule":
        return cls(ring, SubmodulePresentation.from_vectors(ring, rank, rels), label)

    def quotient_by(self, gens: Sequence[Poly], label: str = "") -> "LocalModule":
        """M / (gens) M."""
        rels = list(self.relations)
        for g in gens:
            for l in range(self.rank):
                rels.append({(l, m): c for m, c in g.terms_dict.items()})
        return LocalModule.from_relations(self.ring, self.rank, rels, label or self.label)

    def counts(self, trunc: int) -> List[int]:
        """Graded pieces of gr_m(M) in degrees < trunc."""
        key = f"counts{trunc}"
        hit = self._cache.get(key)
        if hit is None:
            if self.rank == 0:
                hit = [0] * trunc
            else:
                hit = local_counts(self.relations, self.ring.p, self.ring.nvars,
                                   self.rank, trunc)
            self._cache[key] = hit
        return hit

    def is_zero_at_origin(self) -> bool:
        return self.rank == 0 or self.counts(1)[0] == 0


# ------------------------------------------------------------ resolutions

@dataclass
class ResolutionSlice:
    """F_0 <- F_1 <- ... <- F_L; maps[k] is d_{k+1} as columns in F_k."""

    ring: PolyRing
    ranks: List[int]
    maps: List[List[Vec]]

    @property
    def length(self) -> int:
        return len(self.maps)

    def composite_is_zero(self, k: int) -> bool:
        """d_k ∘ d_{k+1} = 0 (1-based k)."""
        if k < 1 or k >= len(self.maps):
            return True
        dk, dk1 = self.maps[k - 1], self.maps[k]
        p = self.ring.p
        return all(not _combine(col, dk, p, 0, len(dk)) for col in dk1)


def _constant_entries(col: Vec, nvars: int) -> List[Tuple[int, int]]:
    """(row, constant) for entries of ``col`` that are nonzero constants."""
    z = _zero(nvars)
    rows: Dict[int, int] = {}
    nonconst = set()
    for (c, m), v in col.items():
        if m == z:
            rows[c] = v
        else:
            nonconst.add(c)
    return [(r, v) for r, v in rows.items() if r not in nonconst]


def _prune_complex(ranks: List[int], maps: List[List[Vec]], nvars: int, p: int) -> None:
    """Split off trivial summands S --c--> S (c a nonzero constant) in place.

    ``maps[k]`` holds the columns of d_{k+1} in F_k.  A unit entry at row i
    of column j lets us drop basis vector i of F_k and j of F_{k+1}: the
    other columns of d_{k+1} are cleared at row i, column i of d_k and row j
    of d_{k+2} are deleted.
    """
    for k in range(len(maps)):
        while True:
            pivot = None
            for j, col in enumerate(maps[k]):
                ents = _constant_entries(col, nvars)
                if ents and (pivot is None or len(col) < len(maps[k][pivot[0]])):
                    pivot = (j, ents[0][0], ents[0][1])
            if pivot is None:
                break
            j, i, c = pivot
            cur = maps[k]
            v = cur.pop(j)
            inv = pow(c, -1, p)
            new_cur = []
            for u in cur:
                ui = {m: x for (r, m), x in u.items() if r == i}
                if ui:
                    u = dict(u)
                    for (r, m), x in v.items():
                        for mu, xu in ui.items():
                            t = (r, tuple(a + b for a, b in zip(m, mu)))
                            w = (u.get(t, 0) - xu * inv * x) % p
                            if w:
                                u[t] = w
                            else:
                                u.pop(t, None)
                new_cur.append({((r - 1 if r > i else r), m): x for (r, m), x in u.items()})
            # columns may become zero; they stay as zero columns of the map
            maps[k] = new_cur
            if k > 0:
                maps[k - 1] = maps[k - 1][:i] + maps[k - 1][i + 1:]
            if k + 1 < len(maps):
                maps[k + 1] = [{((r - 1 if r > j else r), m): x for (r, m), x in u.items()
                                if r != j} for u in maps[k + 1]]
            ranks[k] -= 1
            ranks[k + 1] -= 1


def resolve(M: LocalModule, length: int) -> ResolutionSlice:
    """Resolution of M over S to the given length, without an upper bound check."""
    cached = M._cache.get("resolution")
    if cached is not None and cached.length >= length:
        return cached
    ring = M.ring
    n, p = ring.nvars, ring.p
    maps = schreyer_resolution([v for v in M.relations if v], M.rank, p, length)
    ranks = [M.rank] + [len(m) for m in maps]
    _prune_complex(ranks, maps, n, p)
    res = ResolutionSlice(ring, ranks, maps)
    M._cache["resolution"] = res
    return res


def free_resolution(M: LocalModule, length: int) -> ResolutionSlice:
    """Resolution F_0 <- ... <- F_L of M over the polynomial ring, L <= n.

    Trivial summands with unit entries are split off, so the result is the
    minimal resolution for graded input.
    """
    if length > M.ring.nvars:
        raise ValueError(f"length {length} exceeds the number of variables {M.ring.nvars}")
    res = resolve(M, length + 1)
    return ResolutionSlice(res.ring, res.ranks[:length + 1], res.maps[:length])


def _rows(cols: List[Vec], rank: int) -> List[Vec]:
    """Rows of the matrix with the given columns, as vectors over the columns."""
    rows: List[Vec] = [dict() for _ in range(rank)]
    for j, col in enumerate(cols):
        for (r, m), x in col.items():
            rows[r][(j, m)] = x
    return rows


def _kernel_of_transpose(ring: PolyRing, cols: List[Vec], rank: int) -> List[Vec]:
    """Generators of ker(d^T) in F^*, F of the given rank, d given by columns."""
    rows = _rows(cols, rank)
    live = [i for i, r in enumerate(rows) if r]
    z = _zero(ring.nvars)
    out = [{(i, z): 1} for i, r in enumerate(rows) if not r]
    if live:
        syz = syzygies(SubmodulePresentation.from_vectors(
            ring, len(cols), [rows[i] for i in live])).vectors()
        for s in syz:
            out.append({(live[c], m): x for (c, m), x in s.items()})
    return out


def ext_presentation(M: LocalModule, j: int, label: str = "") -> LocalModule:
    """Ext^j_S(M, S) = ker(d_{j+1}^T) / im(d_j^T), presented as a cokernel."""
    n = M.ring.nvars
    if not 0 <= j <= n:
        raise ValueError(f"Ext index {j} outside [0, {n}]")
    key = f"ext{j}"
    hit = M._cache.get(key)
    if hit is not None:
        return hit
    res = resolve(M, n + 1)
    ring = M.ring
    rj = res.ranks[j] if j < len(res.ranks) else 0
    label = label or f"Ext^{j}({M.label})"
    if rj == 0:
        E = LocalModule.from_relations(ring, 0, [], label)
        M._cache[key] = E
        return E
    d_next = res.maps[j] if j < len(res.maps) else []
    im = _rows(res.maps[j - 1], res.ranks[j - 1]) if j >= 1 else []
    im = [v for v in im if v]
    if not d_next:
        E = LocalModule.from_relations(ring, rj, im, label)
    else:
        kernel = _kernel_of_transpose(ring, d_next, rj)
        a = len(kernel)
        if a == 0:
            E = LocalModule.from_relations(ring, 0, [], label)
        else:
            gens = kernel + im
            rel = syzygies(SubmodulePresentation.from_vectors(ring, rj, gens)).vectors()
            rel = [{(c, m): x for (c, m), x in z.items() if c < a} for z in rel]
            rel = [r for r in rel if r]
            E = LocalModule.from_relations(ring, a, rel, label)
    M._cache[key] = E
    return E


# ---------------------------------------------------------------- lengths

def _standard_fit(values: Sequence[int], windows: int = 3):
    """Smallest degree d with (d+1)-st differences zero on the last ``windows``
    positions; returns (d, postulation) or None."""
    K = len(values)
    for d in range(0, K):
        diffs = list(values)
        for _ in range(d + 1):
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if len(diffs) < windows:
            return None
        if all(x == 0 for x in diffs[-windows:]):
            P = _interpolate(values, d)
            post = K - 1
            while post > 0 and P(post - 1) == values[post - 1]:
                post -= 1
            return d, post
    return None


def _interpolate(values: Sequence[int], d: int):
    """Polynomial of degree d through the last d+1 values (Newton form)."""
    K = len(values)
    n0 = K - d - 1
    pts = list(values[n0:])
    coeffs = []
    diffs = pts
    for _ in range(d + 1):
        coeffs.append(diffs[0])
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]

    def P(n: int) -> int:
        return sum(c * _binom_poly(n - n0, k) for k, c in enumerate(coeffs))
    return P


def _binom_poly(x: int, k: int) -> int:
    """x choose k as a polynomial in x (valid for negative x)."""
    num = 1
    for i in range(k):
        num *= x - i
    den = 1
    for i in range(1, k + 1):
        den *= i
    return num // den


@dataclass
class LengthResult:
    finite: bool
    length: Optional[int] = None
    dimension: Optional[int] = None

    def __int__(self):
        if not self.finite:
            raise ValueError("infinite length")
        return self.length


def finite_length(M: LocalModule, cap: int = HS_CAP, min_window: int = 12) -> LengthResult:
    """Decide whether M_m has finite length and return it.

    gr_m(M) is computed on growing truncations.  A vanishing graded piece
    certifies finiteness (Nakayama).  Once the m-adic Hilbert function
    looks like a polynomial of positive degree, the verdict is settled
    exactly: M_m has finite length iff M / Γ_m(M) vanishes at the origin.
    """
    if M.rank == 0:
        return LengthResult(True, 0, 0)
    T = 6
    while True:
        counts = M.counts(T)
        if 0 in counts:
            return LengthResult(True, sum(counts[:counts.index(0)]), 0)
        if T >= min_window:
            fit = _standard_fit(_cumulative(counts))
            suspicious = fit is not None and fit[0] >= 1 and fit[1] <= T - 4
            if suspicious or T >= cap:
                if not torsion_at_origin(M):
                    return LengthResult(False, None, fit[0] if fit else None)
                return LengthResult(True, artinian_length(M, T), 0)
        T = min(cap, T + max(3, T // 2))


def torsion_at_origin(M: LocalModule) -> bool:
    """Exact test: is M_m annihilated by a power of m?"""
    sat, _ = module_saturation(M.presentation, IdealHandle.maximal(M.ring))
    return LocalModule.from_relations(M.ring, M.rank, sat.vectors()).is_zero_at_origin()


def artinian_counts(M: LocalModule, start: int = 6, limit: int = 400) -> List[int]:
    """gr_m(M) up to its first vanishing piece, for M_m known to have finite length.

    The truncation grows by about a quarter per round: the cost of a round
    is dominated by its top degree, so overshooting is what hurts.
    """
    if M.rank == 0:
        return [0]
    T = max(start, 1)
    while True:
        counts = M.counts(T)
        if 0 in counts:
            return counts[:counts.index(0) + 1]
        if T >= limit:
            raise StabilizationError(f"no vanishing graded piece below degree {limit}")
        T = min(limit, T + max(2, T // 4))


def artinian_length(M: LocalModule, start: int = 6, limit: int = 400) -> int:
    """Length of M_m when it is known to be finite."""
    return sum(artinian_counts(M, start, limit))


def _cumulative(counts: Sequence[int]) -> List[int]:
    out, s = [], 0
    for c in counts:
        s += c
        out.append(s)
    return out


def local_length(M: LocalModule) -> int:
    res = finite_length(M)
    if not res.finite:
        raise ValueError(f"{M.label or 'module'} has infinite length at the origin")
    return res.length


def m_adic_values(M: LocalModule, count: int) -> List[int]:
    """l(M / m^{k+1} M) for k = 0..count-1."""
    return _cumulative(M.counts(count))


def hilbert_dimension(M: LocalModule, cap: int = HS_CAP, start: int = 10) -> Tuple[int, List[int]]:
    """Degree of the Hilbert-Samuel polynomial of k -> l(M/m^{k+1}M)."""
    T = start
    while True:
        counts = M.counts(T)
        if 0 in counts:
            return 0, _cumulative(counts)
        values = _cumulative(counts)
        fit = _standard_fit(values)
        if fit is not None and fit[1] <= T - 4:
            return fit[0], values
        if T >= cap:
            raise StabilizationError(f"Hilbert-Samuel function did not stabilize by {cap}")
        T = min(cap, T + max(3, T // 2))


def subquotient(ring: PolyRing, rank: int, bigger: Sequence[Vec],
                U: SubmodulePresentation, label: str = "") -> LocalModule:
    """The module (W + U) / U for W generated by ``bigger``, as a cokernel."""
    extra = [v for v in bigger if not U.contains(v)]
    if not extra:
        return LocalModule.from_relations(ring, 0, [], label)
    gens = extra + U.vectors()
    rel = syzygies(SubmodulePresentation.from_vectors(ring, rank, gens)).vectors()
    b = len(extra)
    rel = [{(c, m): x for (c, m), x in z.items() if c < b} for z in rel]
    return LocalModule.from_relations(ring, b, [r for r in rel if r], label)


def gamma_m(M: LocalModule, label: str = "") -> LocalModule:
    """Γ_m(M) = (U :_F m^∞) / U as a cokernel presentation."""
    U = M.presentation
    sat, _ = module_saturation(U, IdealHandle.maximal(M.ring))
    return subquotient(M.ring, M.rank, sat.vectors(), U, label or f"Gamma_m({M.label})")


def lc_length(M: LocalModule, i: int) -> LengthResult:
    """l(H^i_m(M_m)) via l(Ext^{n-i}_S(M, S)_m)."""
    n = M.ring.nvars
    if not 0 <= i <= n:
        raise ValueError(f"cohomological index {i} outside [0, {n}]")
    return finite_length(ext_presentation(M, n - i))


def dim_depth(M: LocalModule) -> Tuple[int, int]:
    if M.is_zero_at_origin():
        raise ValueError("zero module at origin")
    d, _ = hilbert_dimension(M)
    depth = d
    for i in range(d):
        r = lc_length(M, i)
        if not r.finite or r.length:
            depth = i
            break
    return d, depth
