"""Buchberger's algorithm for ideals and submodules of free modules.

Everything runs on sparse vectors ``{(component, exponents): residue}``; an
ideal is a submodule of the rank-one free module.  Two regimes share the
same engine:

* global orders (degrevlex, block elimination, position-over-term), used
  for ideal calculus and syzygies;
* the local degree order ``negdegrevlex`` on computations truncated at a
  degree ``T``: terms of degree >= T are discarded, which is exact for any
  submodule containing m^T F.  The leading module then computes lengths of
  F/(U + m^t F) for every t <= T at once (see ``local_counts``).
"""
from __future__ import annotations

import heapq
from operator import add, sub
import threading
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .kernel import (DEGREVLEX, LOCAL, Monomial, MonomialOrder, Poly, PolyRing,
                     StructureError, elimination_order, mono_coprime,
                     monomials_of_degree)

Term = Tuple[int, Monomial]
Vec = Dict[Term, int]

SATURATION_CAP = 64


class SaturationError(RuntimeError):
    pass


# ------------------------------------------------------------------ engine

def _mask(m: Monomial) -> int:
    out = 0
    for i, e in enumerate(m):
        if e:
            out |= 1 << i
    return out


class _Elem:
    __slots__ = ("vec", "comp", "lm", "mask", "tail", "deg")

    def __init__(self, vec: Vec, lt: Term):
        self.vec = vec
        self.comp, self.lm = lt
        self.mask = _mask(self.lm)
        self.deg = sum(self.lm)
        self.tail = [(c, m, v, sum(m)) for (c, m), v in vec.items() if (c, m) != lt]


class Engine:
    """One Buchberger run: term keys, reduction and pair bookkeeping."""

    def __init__(self, p: int, order: MonomialOrder, trunc: Optional[int] = None,
                 product_criterion: bool = False):
        if order.is_local and trunc is None:
            raise ValueError("the local order needs a truncation degree")
        self.p = p
        self.order = order
        self.trunc = trunc
        self.product_criterion = product_criterion
        self._key: Dict[Term, tuple] = {}
        self._neg: Dict[Term, tuple] = {}

    def key(self, t: Term) -> tuple:
        k = self._key.get(t)
        if k is None:
            k = self._key[t] = self.order.term_key(t)
        return k

    def neg(self, t: Term) -> tuple:
        k = self._neg.get(t)
        if k is None:
            k = self._neg[t] = tuple(-x for x in self.key(t))
        return k

    def lead(self, v: Vec) -> Term:
        return max(v, key=self.key)

    def clip(self, v: Vec) -> Vec:
        if self.trunc is None:
            return v
        T = self.trunc
        return {t: c for t, c in v.items() if sum(t[1]) < T}

    def monic(self, v: Vec) -> Tuple[Vec, Term]:
        lt = self.lead(v)
        c = v[lt]
        if c != 1:
            inv = pow(c, -1, self.p)
            p = self.p
            v = {t: x * inv % p for t, x in v.items()}
        return v, lt

    # -- reduction
    def reduce(self, v: Vec, by_comp: Dict[int, List[_Elem]], full: bool = True,
               stop_comp: Optional[int] = None) -> Vec:
        """Reduce ``v``; ``full`` also reduces non-leading terms.

        With ``stop_comp`` the reduction stops as soon as the leading term
        lies in a component >= stop_comp (used for syzygy extraction).
        """
        p = self.p
        T = self.trunc
        f = dict(v)
        neg = self.neg
        heap = [(neg(t), t) for t in f]
        heapq.heapify(heap)
        rem: Vec = {}
        while heap:
            _, t = heapq.heappop(heap)
            c = f.pop(t, 0)
            if not c:
                continue
            comp, m = t
            if stop_comp is not None and comp >= stop_comp and not rem:
                f[t] = c
                return f
            g = None
            cands = by_comp.get(comp)
            if cands:
                mm = _mask(m)
                for e in cands:
                    if e.mask & ~mm:
                        continue
                    lm = e.lm
                    for a, b in zip(lm, m):
                        if a > b:
                            break
                    else:
                        g = e
                        break
            if g is None:
                if not full:
                    f[t] = c
                    return f
                rem[t] = c
                continue
            u = tuple(map(sub, m, g.lm))
            room = None if T is None else T - (sum(m) - g.deg)
            for gc, gm, gv, gd in g.tail:
                if room is not None and gd >= room:
                    continue
                nm = tuple(map(add, u, gm))
                nt = (gc, nm)
                old = f.get(nt)
                if old is None:
                    f[nt] = (-c * gv) % p
                    heapq.heappush(heap, (neg(nt), nt))
                else:
                    new = (old - c * gv) % p
                    if new:
                        f[nt] = new
                    else:
                        del f[nt]
        return rem

    # -- Buchberger
    def basis(self, gens: Iterable[Vec], split: Optional[int] = None
              ) -> Tuple[List[Vec], List[Vec]]:
        """Reduced Gröbner basis of the span of ``gens``.

        With ``split`` = r, the vectors are treated as pairs (F-part in
        components < r, tracking part above) under an order where the
        F-part dominates.  Elements whose F-part reduces to zero are not
        paired but returned as the second list (tracking parts, shifted to
        start at component 0); they generate the syzygies.
        """
        elems: List[_Elem] = []
        active: List[int] = []
        by_comp: Dict[int, List[_Elem]] = {}
        pair_heap: list = []
        live: Dict[Tuple[int, int], Monomial] = {}
        syz: List[Vec] = []
        counter = 0

        def rebuild_index():
            by_comp.clear()
            for i in active:
                e = elems[i]
                by_comp.setdefault(e.comp, []).append(e)
            for lst in by_comp.values():
                lst.sort(key=lambda e: e.deg)

        def add(v: Vec):
            nonlocal counter
            v, lt = self.monic(v)
            h = _Elem(v, lt)
            hi = len(elems)
            elems.append(h)
            pc = self.product_criterion
            cands = [i for i in active if elems[i].comp == h.comp]
            lcms = {}
            for i in cands:
                lcms[i] = tuple(a if a > b else b for a, b in zip(elems[i].lm, h.lm))
            # Gebauer-Moller: new pairs
            C = list(cands)
            D: List[int] = []
            while C:
                i = C.pop()
                L = lcms[i]
                disjoint = pc and mono_coprime(elems[i].lm, h.lm)
                if disjoint:
                    D.append(i)
                    continue
                dominated = False
                for j in C:
                    if _divides(lcms[j], L):
                        dominated = True
                        break
                if not dominated:
                    for j in D:
                        if _divides(lcms[j], L):
                            dominated = True
                            break
                if not dominated:
                    D.append(i)
            E = [i for i in D if not (pc and mono_coprime(elems[i].lm, h.lm))]
            # Gebauer-Moller: old pairs
            for (a, b), L in list(live.items()):
                ea, eb = elems[a], elems[b]
                if ea.comp != h.comp or not _divides(h.lm, L):
                    continue
                if lcms.get(a) == L or lcms.get(b) == L:
                    continue
                if lcms.get(a) is None:
                    la = tuple(x if x > y else y for x, y in zip(ea.lm, h.lm))
                    if la == L:
                        continue
                if lcms.get(b) is None:
                    lb = tuple(x if x > y else y for x, y in zip(eb.lm, h.lm))
                    if lb == L:
                        continue
                del live[(a, b)]
            T = self.trunc
            for i in E:
                L = lcms[i]
                if T is not None and sum(L) >= T and self.order.is_local:
                    continue
                live[(i, hi)] = L
                counter += 1
                heapq.heappush(pair_heap, (sum(L), self.key((h.comp, L)), counter, i, hi))
            active[:] = [i for i in active if not (elems[i].comp == h.comp and
                                                   _divides(h.lm, elems[i].lm))]
            active.append(hi)
            rebuild_index()

        def process(v: Vec):
            v = self.clip(v)
            if not v:
                return
            r = self.reduce(v, by_comp, full=False, stop_comp=split)
            if not r:
                return
            if split is not None and self.lead(r)[0] >= split:
                syz.append(r)
                return
            add(r)

        gens = [self.clip(dict(g)) for g in gens]
        gens = [g for g in gens if g]
        gens.sort(key=lambda g: self.key(self.lead(g)))
        for g in gens:
            process(g)

        while pair_heap:
            _, _, _, i, j = heapq.heappop(pair_heap)
            L = live.pop((i, j), None)
            if L is None:
                continue
            a, b = elems[i], elems[j]
            ua = tuple(x - y for x, y in zip(L, a.lm))
            ub = tuple(x - y for x, y in zip(L, b.lm))
            s = _shift_sub(a.vec, ua, b.vec, ub, self.p, self.trunc)
            process(s)

        # interreduce the active part
        final = [elems[i] for i in active]
        final.sort(key=lambda e: self.key((e.comp, e.lm)))
        out: List[Vec] = []
        for idx, e in enumerate(final):
            others: Dict[int, List[_Elem]] = {}
            for o in final:
                if o is not e:
                    others.setdefault(o.comp, []).append(o)
            lt = (e.comp, e.lm)
            tail = {t: c for t, c in e.vec.items() if t != lt}
            if split is not None:
                # only the F-part matters; keep tracking data unreduced
                out.append(e.vec)
                continue
            red = self.reduce(tail, others, full=True)
            red[lt] = 1
            out.append(red)
        if split is not None:
            syz = [{(c - split, m): v for (c, m), v in z.items()} for z in syz]
        return out, syz


def _divides(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _shift_sub(a: Vec, ua: Monomial, b: Vec, ub: Monomial, p: int,
               trunc: Optional[int]) -> Vec:
    out: Vec = {}
    for (c, m), v in a.items():
        nm = tuple(x + y for x, y in zip(m, ua))
        if trunc is not None and sum(nm) >= trunc:
            continue
        out[(c, nm)] = v
    for (c, m), v in b.items():
        nm = tuple(x + y for x, y in zip(m, ub))
        if trunc is not None and sum(nm) >= trunc:
            continue
        t = (c, nm)
        w = (out.get(t, 0) - v) % p
        if w:
            out[t] = w
        else:
            out.pop(t, None)
    return out


def gb_vectors(vecs: Sequence[Vec], p: int, order: MonomialOrder,
               trunc: Optional[int] = None) -> List[Vec]:
    rank_one = all(t[0] == 0 for v in vecs for t in v)
    eng = Engine(p, order, trunc, product_criterion=rank_one and not order.is_local)
    return eng.basis(vecs)[0]


def reduce_vector(v: Vec, basis: Sequence[Vec], p: int, order: MonomialOrder,
                  trunc: Optional[int] = None) -> Vec:
    eng = Engine(p, order, trunc)
    by_comp: Dict[int, List[_Elem]] = {}
    for b in basis:
        b, lt = eng.monic(b)
        by_comp.setdefault(lt[0], []).append(_Elem(b, lt))
    return eng.reduce(eng.clip(v), by_comp, full=True)


def syzygy_vectors(vecs: Sequence[Vec], p: int, rank: int) -> List[Vec]:
    """Generators of the syzygies of ``vecs`` (vectors in a rank-``rank``
    free module), as vectors in the free module on the generators."""
    aug = []
    for i, v in enumerate(vecs):
        w = dict(v)
        w[(rank + i, (0,) * _nvars_of(vecs))] = 1
        aug.append(w)
    eng = Engine(p, MonomialOrder("degrevlex", position="pot"))
    _, syz = eng.basis(aug, split=rank)
    return _dedupe(syz, p)


def _nvars_of(vecs: Sequence[Vec]) -> int:
    for v in vecs:
        for (_, m) in v:
            return len(m)
    raise ValueError("cannot infer the number of variables from zero vectors")


def _dedupe(vs: Iterable[Vec], p: int) -> List[Vec]:
    seen = set()
    out = []
    for v in vs:
        if not v:
            continue
        # normalise by the coefficient of the smallest term key for dedup
        t0 = min(v)
        inv = pow(v[t0], -1, p)
        norm = frozenset((t, c * inv % p) for t, c in v.items())
        if norm in seen:
            continue
        seen.add(norm)
        out.append(v)
    return out


# ------------------------------------------------------------- Schreyer

class _SchreyerOrder:
    """Order on S^s induced by a list of lead terms and a base term key.

    m e_i > m' e_j iff lt(m g_i) > lt(m' g_j), ties broken by i < j.
    """

    is_local = False

    def __init__(self, base_key, leads: Sequence[Term]):
        self.base_key = base_key
        self.leads = list(leads)

    def term_key(self, t: Term) -> tuple:
        i, m = t
        c, lm = self.leads[i]
        return self.base_key((c, tuple(a + b for a, b in zip(lm, m)))) + (-i,)


def _lex_desc(t: Term) -> tuple:
    return (t[0],) + tuple(-x for x in t[1])


def _divide(v: Vec, elems: Sequence[_Elem], eng: Engine) -> Tuple[Vec, Vec]:
    """Division of v by ``elems`` (monic); returns (quotient coefficients, remainder)."""
    p = eng.p
    f = dict(v)
    neg = eng.neg
    heap = [(neg(t), t) for t in f]
    heapq.heapify(heap)
    by_comp: Dict[int, List[Tuple[int, _Elem]]] = {}
    for k, e in enumerate(elems):
        by_comp.setdefault(e.comp, []).append((k, e))
    q: Vec = {}
    rem: Vec = {}
    while heap:
        _, t = heapq.heappop(heap)
        c = f.pop(t, 0)
        if not c:
            continue
        comp, m = t
        hit = None
        mm = _mask(m)
        for k, e in by_comp.get(comp, ()):
            if not e.mask & ~mm and _divides(e.lm, m):
                hit = (k, e)
                break
        if hit is None:
            rem[t] = c
            continue
        k, e = hit
        u = tuple(map(sub, m, e.lm))
        qt = (k, u)
        w = (q.get(qt, 0) + c) % p
        if w:
            q[qt] = w
        else:
            q.pop(qt, None)
        for gc, gm, gv, _ in e.tail:
            nt = (gc, tuple(map(add, u, gm)))
            old = f.get(nt)
            if old is None:
                f[nt] = (-c * gv) % p
                heapq.heappush(heap, (neg(nt), nt))
            else:
                new = (old - c * gv) % p
                if new:
                    f[nt] = new
                else:
                    del f[nt]
    return q, rem


def schreyer_step(basis: Sequence[Vec], eng: Engine) -> Tuple[List[Vec], Engine]:
    """Syzygies of a Gröbner basis (w.r.t. ``eng``) as a Gröbner basis of the
    syzygy module under the induced order, returned with that order's engine.

    The basis must already be sorted so that the lead terms within a
    component decrease lexicographically; the result is sorted the same way.
    """
    p = eng.p
    elems = []
    for b in basis:
        b, lt = eng.monic(b)
        elems.append(_Elem(b, lt))
    leads = [(e.comp, e.lm) for e in elems]
    new_eng = Engine(p, _SchreyerOrder(eng.key, leads))
    out: List[Tuple[Term, Vec]] = []
    for i, a in enumerate(elems):
        cands: Dict[Monomial, int] = {}
        for j in range(i + 1, len(elems)):
            b = elems[j]
            if b.comp != a.comp:
                continue
            ui = tuple(max(x, y) - x for x, y in zip(a.lm, b.lm))
            cands.setdefault(ui, j)
        minimal = [u for u in cands
                   if not any(w != u and _divides(w, u) for w in cands)]
        for ui in minimal:
            j = cands[ui]
            b = elems[j]
            L = tuple(x + y for x, y in zip(a.lm, ui))
            uj = tuple(x - y for x, y in zip(L, b.lm))
            spair = _shift_sub(a.vec, ui, b.vec, uj, p, None)
            q, rem = _divide(spair, elems, eng)
            if rem:
                raise ArithmeticError("basis passed to the Schreyer step is not a Gröbner basis")
            sig: Vec = {(i, ui): 1}
            key = (j, uj)
            sig[key] = (sig.get(key, 0) - 1) % p
            for t, c in q.items():
                w = (sig.get(t, 0) - c) % p
                if w:
                    sig[t] = w
                else:
                    sig.pop(t, None)
            sig = {t: c for t, c in sig.items() if c}
            out.append(((i, ui), sig))
    out.sort(key=lambda x: _lex_desc(x[0]))
    return [v for _, v in out], new_eng


def schreyer_resolution(vecs: Sequence[Vec], rank: int, p: int, length: int
                        ) -> List[List[Vec]]:
    """Maps d_1..d_length (as column lists) of a free resolution of F/(vecs).

    d_1 is a sorted Gröbner basis of the relations; each further map holds
    the lifted S-pair syzygies of the previous one (Schreyer's theorem).
    """
    order = MonomialOrder("degrevlex", position="top")
    base = Engine(p, order)
    gb = [v for v in gb_vectors(list(vecs), p, order) if v] if vecs else []
    gb.sort(key=lambda v: _lex_desc(base.lead(v)))
    maps = [gb]
    eng = base
    while len(maps) < length:
        last = maps[-1]
        if not last:
            maps.append([])
            continue
        nxt, eng = schreyer_step(last, eng)
        maps.append(nxt)
    return maps


# ------------------------------------------------------- local truncation

def local_basis(vecs: Sequence[Vec], p: int, trunc: int) -> List[Vec]:
    """Standard basis of U + m^trunc F under the local degree order."""
    eng = Engine(p, LOCAL, trunc)
    return eng.basis(vecs)[0]


def local_counts(vecs: Sequence[Vec], p: int, nvars: int, rank: int,
                 trunc: int) -> List[int]:
    """Dimensions of the graded pieces of gr_m(F/U) in degrees < trunc.

    ``sum(counts[:t])`` is the length of F/(U + m^t F) for every t <= trunc;
    the computation is exact because the local order is degree-compatible.
    """
    basis = local_basis(vecs, p, trunc)
    eng = Engine(p, LOCAL, trunc)
    leads: Dict[int, List[Monomial]] = {}
    for b in basis:
        c, m = eng.lead(b)
        leads.setdefault(c, []).append(m)
    return count_standard(leads, nvars, rank, trunc)


def count_standard(leads: Dict[int, List[Monomial]], nvars: int, rank: int,
                   trunc: int) -> List[int]:
    counts = [0] * trunc
    for comp in range(rank):
        lms = leads.get(comp, [])
        if any(sum(m) == 0 for m in lms):
            continue
        for d in range(trunc):
            n = 0
            for m in monomials_of_degree(nvars, d):
                for lm in lms:
                    if _divides(lm, m):
                        break
                else:
                    n += 1
            counts[d] += n
            if n == 0:
                break
    return counts


# ------------------------------------------------------------ conversions

def poly_to_vec(f: Poly, comp: int = 0) -> Vec:
    return {(comp, m): c for m, c in f.terms_dict.items()}


def vec_to_poly(ring: PolyRing, v: Vec) -> Poly:
    return ring.from_dict({m: c for (_, m), c in v.items()})


def tuple_to_vec(entries: Sequence[Poly]) -> Vec:
    out: Vec = {}
    for i, f in enumerate(entries):
        for m, c in f.terms_dict.items():
            out[(i, m)] = c
    return out


def vec_to_tuple(ring: PolyRing, v: Vec, rank: int) -> Tuple[Poly, ...]:
    parts: List[Dict[Monomial, int]] = [dict() for _ in range(rank)]
    for (c, m), x in v.items():
        parts[c][m] = x
    return tuple(Poly(ring, d) for d in parts)


# ------------------------------------------------------------------ ideals

@dataclass
class IdealHandle:
    """An ideal of the ambient ring S with per-order cached bases."""

    ring: PolyRing
    generators: Tuple[Poly, ...]
    _cache: Dict[MonomialOrder, Tuple[Poly, ...]] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.generators = tuple(g for g in self.generators if not g.is_zero())
        for g in self.generators:
            if g.ring != self.ring:
                raise StructureError("ideal generator over a different ring")

    @classmethod
    def of(cls, ring: PolyRing, gens: Iterable[Poly]) -> "IdealHandle":
        return cls(ring, tuple(gens))

    @classmethod
    def parse(cls, ring: PolyRing, texts: Iterable[str]) -> "IdealHandle":
        return cls(ring, tuple(ring.parse(t) for t in texts))

    @classmethod
    def maximal(cls, ring: PolyRing) -> "IdealHandle":
        return cls(ring, tuple(ring.gens()))

    def groebner(self, order: MonomialOrder = DEGREVLEX) -> Tuple[Poly, ...]:
        with self._lock:
            hit = self._cache.get(order)
        if hit is not None:
            return hit
        vecs = [poly_to_vec(g) for g in self.generators]
        basis = gb_vectors(vecs, self.ring.p, order) if vecs else []
        polys = tuple(sorted((vec_to_poly(self.ring, v) for v in basis),
                             key=lambda f: order.mono_key(f.leading_term(order)[1])))
        with self._lock:
            self._cache.setdefault(order, polys)
        return polys

    def normal_form(self, f: Poly, order: MonomialOrder = DEGREVLEX) -> Poly:
        return normal_form(f, self, order)

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self).is_zero()

    def contains_ideal(self, other: "IdealHandle") -> bool:
        return all(self.contains(g) for g in other.generators)

    def same_ideal(self, other: "IdealHandle") -> bool:
        return self.groebner() == other.groebner()

    def is_unit(self) -> bool:
        return any(b.degree() == 0 for b in self.groebner())

    def __add__(self, other: "IdealHandle") -> "IdealHandle":
        return ideal_combine(self, other, "sum")

    def __mul__(self, other: "IdealHandle") -> "IdealHandle":
        return ideal_combine(self, other, "product")


def normal_form(f: Poly, ideal: IdealHandle, order: MonomialOrder = DEGREVLEX) -> Poly:
    basis = [poly_to_vec(g) for g in ideal.groebner(order)]
    if not basis:
        return f
    r = reduce_vector(poly_to_vec(f), basis, f.ring.p, order)
    return vec_to_poly(f.ring, r)


def ideal_combine(A: IdealHandle, B: Optional[IdealHandle], op: str,
                  k: Optional[int] = None) -> IdealHandle:
    """sum, product, intersection of two ideals, or the k-th power of A."""
    if B is not None and A.ring != B.ring:
        raise StructureError("ideals over different rings")
    ring = A.ring
    if op == "sum":
        return IdealHandle(ring, A.generators + B.generators)
    if op == "product":
        return IdealHandle(ring, tuple(a * b for a in A.generators for b in B.generators))
    if op == "power":
        if k is None or k < 0:
            raise ValueError("power needs k >= 0")
        return IdealHandle(ring, tuple(ideal_power_gens(list(A.generators), k, ring)))
    if op == "intersection":
        return intersect(A, B)
    raise ValueError(f"unknown ideal operation {op!r}")


def ideal_power_gens(gens: List[Poly], k: int, ring: PolyRing) -> List[Poly]:
    """Products of k generators, one per multiset, built from shared prefixes."""
    level: Dict[Tuple[int, ...], Poly] = {(): ring.one()}
    for _ in range(k):
        level = {combo + (i,): f * gens[i]
                 for combo, f in level.items()
                 for i in range(combo[-1] if combo else 0, len(gens))}
    out = []
    seen = set()
    for combo in sorted(level):
        f = level[combo]
        if not f.is_zero() and f not in seen:
            seen.add(f)
            out.append(f)
    return out


def ideal_power(A: IdealHandle, k: int) -> IdealHandle:
    return ideal_combine(A, None, "power", k)


def _extend(f: Poly, t_exp: int) -> Vec:
    return {(0, (t_exp,) + m): c for m, c in f.terms_dict.items()}


def intersect(A: IdealHandle, B: IdealHandle) -> IdealHandle:
    """A ∩ B = (tA + (1-t)B) ∩ S by eliminating an auxiliary variable."""
    ring = A.ring
    if not A.generators or not B.generators:
        return IdealHandle(ring, ())
    p = ring.p
    vecs: List[Vec] = []
    for a in A.generators:
        vecs.append(_extend(a, 1))
    for b in B.generators:
        v = _extend(b, 0)
        for (c, m), x in _extend(b, 1).items():
            v[(c, m)] = (v.get((c, m), 0) - x) % p
        vecs.append({t: c for t, c in v.items() if c})
    basis = gb_vectors(vecs, p, elimination_order(1))
    keep = []
    for v in basis:
        if all(m[0] == 0 for (_, m) in v):
            keep.append(ring.from_dict({m[1:]: c for (_, m), c in v.items()}))
    return IdealHandle(ring, tuple(keep))


def quotient_by_element(A: IdealHandle, g: Poly) -> IdealHandle:
    """(A : g) = (A ∩ (g)) / g."""
    ring = A.ring
    if g.is_zero():
        return IdealHandle(ring, (ring.one(),))
    inter = intersect(A, IdealHandle(ring, (g,)))
    return IdealHandle(ring, tuple(exact_divide(h, g) for h in inter.generators))


def exact_divide(h: Poly, g: Poly) -> Poly:
    """h / g for g dividing h exactly (univariate-style division under degrevlex)."""
    ring = h.ring
    p = ring.p
    cg, mg = g.leading_term()
    inv = pow(cg, -1, p)
    q: Dict[Monomial, int] = {}
    r = h
    while not r.is_zero():
        c, m = r.leading_term()
        if any(a < b for a, b in zip(m, mg)):
            raise ArithmeticError("polynomial division is not exact")
        u = tuple(a - b for a, b in zip(m, mg))
        coef = c * inv % p
        q[u] = (q.get(u, 0) + coef) % p
        r = r - g * ring.monomial(u, coef)
    return ring.from_dict(q)


def quotient(A: IdealHandle, B: IdealHandle) -> IdealHandle:
    ring = A.ring
    if not B.generators:
        return IdealHandle(ring, (ring.one(),))
    result = None
    for b in B.generators:
        q = quotient_by_element(A, b)
        result = q if result is None else intersect(result, q)
    return IdealHandle(ring, result.groebner())


def saturation(A: IdealHandle, B: IdealHandle) -> Tuple[IdealHandle, int]:
    """(A : B^∞) and the number of colon steps until it stabilised."""
    cur = IdealHandle(A.ring, A.groebner())
    for step in range(1, SATURATION_CAP + 1):
        nxt = quotient(cur, B)
        if nxt.same_ideal(cur):
            return cur, step - 1
        cur = nxt
    raise SaturationError("saturation did not stabilize")


# ----------------------------------------------------------------- modules

@dataclass
class SubmodulePresentation:
    """Submodule of S^rank generated by the given tuples."""

    ring: PolyRing
    rank: int
    generators: Tuple[Tuple[Poly, ...], ...]
    _cache: Dict[MonomialOrder, Tuple[Vec, ...]] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            g = tuple(g)
            if len(g) != self.rank:
                raise StructureError(f"generator of length {len(g)} in rank {self.rank}")
            if any(not e.is_zero() for e in g):
                gens.append(g)
        self.generators = tuple(gens)

    @classmethod
    def from_vectors(cls, ring: PolyRing, rank: int, vecs: Iterable[Vec]
                     ) -> "SubmodulePresentation":
        return cls(ring, rank, tuple(vec_to_tuple(ring, v, rank) for v in vecs))

    @classmethod
    def from_ideal(cls, ideal: IdealHandle) -> "SubmodulePresentation":
        return cls(ideal.ring, 1, tuple((g,) for g in ideal.generators))

    def vectors(self) -> List[Vec]:
        return [tuple_to_vec(g) for g in self.generators]

    def groebner(self, order: MonomialOrder = MonomialOrder(position="pot")) -> Tuple[Vec, ...]:
        with self._lock:
            hit = self._cache.get(order)
        if hit is not None:
            return hit
        vecs = self.vectors()
        basis = tuple(gb_vectors(vecs, self.ring.p, order)) if vecs else ()
        with self._lock:
            self._cache.setdefault(order, basis)
        return basis

    def reduce(self, v: Vec) -> Vec:
        basis = self.groebner()
        if not basis:
            return dict(v)
        return reduce_vector(v, basis, self.ring.p, MonomialOrder(position="pot"))

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def contains_module(self, other: "SubmodulePresentation") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def same_module(self, other: "SubmodulePresentation") -> bool:
        return self.contains_module(other) and other.contains_module(self)


def groebner_basis(obj, order: Optional[MonomialOrder] = None):
    """Reduced Gröbner basis of an ideal (Poly tuple) or submodule (vectors)."""
    if isinstance(obj, IdealHandle):
        return obj.groebner(order or DEGREVLEX)
    return obj.groebner(order or MonomialOrder(position="pot"))


def syzygies(sub: SubmodulePresentation) -> SubmodulePresentation:
    """First syzygy module of the generators, inside S^(number of gens)."""
    k = len(sub.generators)
    ring = sub.ring
    if k == 0:
        return SubmodulePresentation(ring, 0, ())
    vecs = sub.vectors()
    zero = [i for i, v in enumerate(vecs) if not v]
    if zero:
        raise ValueError("zero generators are filtered at construction")
    aug = []
    for i, v in enumerate(vecs):
        w = dict(v)
        w[(sub.rank + i, (0,) * ring.nvars)] = 1
        aug.append(w)
    eng = Engine(ring.p, MonomialOrder("degrevlex", position="pot"))
    _, syz = eng.basis(aug, split=sub.rank)
    syz = _dedupe(syz, ring.p)
    return SubmodulePresentation.from_vectors(ring, k, syz)


def module_intersection(A: SubmodulePresentation, B: SubmodulePresentation
                        ) -> SubmodulePresentation:
    ring, r = A.ring, A.rank
    a, b = A.vectors(), B.vectors()
    if not a or not b:
        return SubmodulePresentation(ring, r, ())
    syz = syzygies(SubmodulePresentation.from_vectors(ring, r, a + b))
    out = []
    for z in syz.vectors():
        v = _combine(z, a, ring.p, 0, len(a))
        if v:
            out.append(v)
    return SubmodulePresentation.from_vectors(ring, r, out)


def _combine(coeffs: Vec, vecs: Sequence[Vec], p: int, lo: int, hi: int) -> Vec:
    """sum_i coeffs[i] * vecs[i - lo] for components lo <= i < hi."""
    out: Vec = {}
    for (i, m), c in coeffs.items():
        if not lo <= i < hi:
            continue
        for (cc, mm), x in vecs[i - lo].items():
            t = (cc, tuple(a + b for a, b in zip(m, mm)))
            w = (out.get(t, 0) + c * x) % p
            if w:
                out[t] = w
            else:
                del out[t]
    return out


def module_quotient(U: SubmodulePresentation, B: IdealHandle) -> SubmodulePresentation:
    """(U :_F B) = {v in F : b v in U for all generators b of B}."""
    ring, r = U.ring, U.rank
    gens = [g for g in B.generators]
    if not gens:
        return SubmodulePresentation(ring, r, tuple(_unit_tuples(ring, r)))
    if not U.generators:
        if any(not g.is_zero() for g in gens):
            return SubmodulePresentation(ring, r, ())
    k = len(gens)
    # kernel of S^r ⊕ (U-coefficients)^k -> F^k, v -> (b_i v - u_i)_i
    big_rank = r * k
    vecs: List[Vec] = []
    for l in range(r):
        v: Vec = {}
        for i, b in enumerate(gens):
            for m, c in b.terms_dict.items():
                v[(i * r + l, m)] = c
        vecs.append(v)
    for i in range(k):
        for u in U.vectors():
            vecs.append({(i * r + c, m): x for (c, m), x in u.items()})
    syz = syzygies(SubmodulePresentation.from_vectors(ring, big_rank, vecs))
    out = []
    for z in syz.vectors():
        v = {(c, m): x for (c, m), x in z.items() if c < r}
        if v:
            out.append(v)
    return SubmodulePresentation.from_vectors(ring, r, _dedupe(out, ring.p))


def _unit_tuples(ring: PolyRing, r: int):
    for l in range(r):
        yield tuple(ring.one() if i == l else ring.zero() for i in range(r))


def module_saturation(U: SubmodulePresentation, B: IdealHandle
                      ) -> Tuple[SubmodulePresentation, int]:
    cur = U
    for step in range(1, SATURATION_CAP + 1):
        nxt = module_quotient(cur, B)
        if cur.contains_module(nxt):
            return cur, step - 1
        cur = SubmodulePresentation.from_vectors(cur.ring, cur.rank, nxt.groebner())
    raise SaturationError("saturation did not stabilize")


def colon_and_saturation(A, B: IdealHandle, mode: str = "quotient"):
    """Quotient (A : B) or saturation (A : B^∞) of an ideal or submodule.

    Saturation returns ``(result, steps)``.
    """
    if mode not in ("quotient", "saturation"):
        raise ValueError(f"unknown mode {mode!r}")
    if isinstance(A, IdealHandle):
        return quotient(A, B) if mode == "quotient" else saturation(A, B)
    return module_quotient(A, B) if mode == "quotient" else module_saturation(A, B)


def standard_monomials(A: IdealHandle, degree_cap: int) -> Tuple[List[Monomial], bool]:
    """Monomials of degree <= cap outside the degrevlex leading ideal.

    ``complete`` means no standard monomial has degree == cap, in which case
    the list is the whole standard basis of S/A.
    """
    leads = [g.leading_term()[1] for g in A.groebner()]
    out = []
    top = False
    n = A.ring.nvars
    for d in range(degree_cap + 1):
        for m in monomials_of_degree(n, d):
            if not any(_divides(l, m) for l in leads):
                out.append(m)
                if d == degree_cap:
                    top = True
    return out, not top
