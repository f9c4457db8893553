"""Exact arithmetic: prime fields, monomials, monomial orders, polynomials.

Monomials are plain exponent tuples.  A polynomial is an immutable mapping
from exponent tuples to nonzero residues mod p; ordering is only imposed
when terms are listed, so the same ``Poly`` can be viewed under any order.
"""
from __future__ import annotations

import random
import re
from math import comb
from operator import add
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

Monomial = Tuple[int, ...]

DEFAULT_CHARACTERISTIC = 32003


class StructureError(ValueError):
    """Operands live in different rings, or a ring is malformed."""


class PolyParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.text = text
        self.pos = pos


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_CHARACTERISTIC

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise StructureError(f"characteristic {self.p} is not prime")
        if not 3 <= self.p < 2**31:
            raise StructureError(f"characteristic {self.p} outside [3, 2^31)")

    def __call__(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a prime field")
        return pow(a, -1, self.p)

    def symmetric(self, a: int) -> int:
        """Representative in (-p/2, p/2]."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.p)


# ---------------------------------------------------------------- monomials

def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def monomials_of_degree(nvars: int, d: int) -> Iterator[Monomial]:
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def monomials_up_to(nvars: int, d: int) -> Iterator[Monomial]:
    for k in range(d + 1):
        yield from monomials_of_degree(nvars, k)


# ------------------------------------------------------------------ orders

@dataclass(frozen=True)
class MonomialOrder:
    """Monomial order, optionally extended to free-module terms.

    ``kind`` is ``degrevlex``, ``elim`` (block order: degrevlex on the first
    ``block`` variables, ties broken by degrevlex on the rest) or
    ``negdegrevlex`` (the local degree order: lower degree is larger; only
    meaningful on computations truncated at a fixed degree).  ``position``
    selects position-over-term or term-over-position for module terms; lower
    component indices are larger.
    """

    kind: str = "degrevlex"
    block: int = 0
    position: str = "pot"

    def __post_init__(self):
        if self.kind not in ("degrevlex", "elim", "negdegrevlex"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.position not in ("pot", "top"):
            raise ValueError(f"unknown position rule {self.position!r}")

    @property
    def is_local(self) -> bool:
        return self.kind == "negdegrevlex"

    def mono_key(self, m: Monomial) -> Tuple[int, ...]:
        if self.kind == "degrevlex":
            return (sum(m),) + tuple(-x for x in reversed(m))
        if self.kind == "negdegrevlex":
            return (-sum(m),) + tuple(-x for x in reversed(m))
        b = self.block
        head, tail = m[:b], m[b:]
        return ((sum(head),) + tuple(-x for x in reversed(head))
                + (sum(tail),) + tuple(-x for x in reversed(tail)))

    def term_key(self, term: Tuple[int, Monomial]) -> Tuple[int, ...]:
        comp, m = term
        if self.position == "pot":
            return (-comp,) + self.mono_key(m)
        return self.mono_key(m) + (-comp,)


DEGREVLEX = MonomialOrder("degrevlex")
LOCAL = MonomialOrder("negdegrevlex", position="top")


def elimination_order(block: int) -> MonomialOrder:
    return MonomialOrder("elim", block=block)


# ------------------------------------------------------------- polynomials

@dataclass(frozen=True)
class PolyRing:
    """The ambient polynomial ring k[x_1, ..., x_n]."""

    field: PrimeField
    variables: Tuple[str, ...]

    def __post_init__(self):
        if not self.variables:
            raise StructureError("a ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise StructureError(f"duplicate variable names in {self.variables}")
        for v in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise StructureError(f"bad variable name {v!r}")

    @classmethod
    def make(cls, variables: Iterable[str], p: int = DEFAULT_CHARACTERISTIC) -> "PolyRing":
        return cls(PrimeField(p), tuple(variables))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def p(self) -> int:
        return self.field.p

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: int) -> "Poly":
        c %= self.p
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps: Sequence[int], c: int = 1) -> "Poly":
        c %= self.p
        return Poly(self, {tuple(exps): c} if c else {})

    def gens(self) -> List["Poly"]:
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.monomial(e))
        return out

    def var(self, name: str) -> "Poly":
        return self.gens()[self.variables.index(name)]

    def from_dict(self, terms: Dict[Monomial, int]) -> "Poly":
        p = self.p
        return Poly(self, {m: c % p for m, c in terms.items() if c % p})

    def parse(self, text: str) -> "Poly":
        return _Parser(self, text).parse()

    def maximal_ideal_power(self, k: int) -> List["Poly"]:
        return [self.monomial(m) for m in monomials_of_degree(self.nvars, k)]


class Poly:
    """Immutable polynomial over a prime field."""

    __slots__ = ("ring", "_t", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, int]):
        self.ring = ring
        self._t = terms
        self._hash = None

    # -- views
    @property
    def terms_dict(self) -> Dict[Monomial, int]:
        return self._t

    def terms(self, order: MonomialOrder = DEGREVLEX) -> List[Tuple[int, Monomial]]:
        """(coefficient, monomial) pairs, strictly descending under ``order``."""
        mk = order.mono_key
        return [(self._t[m], m) for m in sorted(self._t, key=mk, reverse=True)]

    def leading_term(self, order: MonomialOrder = DEGREVLEX) -> Tuple[int, Monomial]:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._t, key=order.mono_key)
        return self._t[m], m

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def degree(self) -> int:
        return max(map(sum, self._t)) if self._t else -1

    def order_at_origin(self) -> int:
        """Least degree of a term (the m-adic order); -1 for zero."""
        return min(map(sum, self._t)) if self._t else -1

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._t}) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.ring, {m: c for m, c in self._t.items() if sum(m) == d})

    def constant_term(self) -> int:
        return self._t.get((0,) * self.ring.nvars, 0)

    def truncate_below(self, d: int) -> "Poly":
        """Drop all terms of degree >= d."""
        return Poly(self.ring, {m: c for m, c in self._t.items() if sum(m) < d})

    # -- arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise StructureError(
                    f"ring mismatch: {self.ring.variables} vs {other.ring.variables}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        p = self.ring.p
        out = dict(self._t)
        for m, c in other._t.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = self.ring.p
        return Poly(self.ring, {m: (p - c) for m, c in self._t.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        p = self.ring.p
        acc: Dict[Monomial, int] = {}
        get = acc.get
        items = list(other._t.items())
        for m1, c1 in self._t.items():
            for m2, c2 in items:
                m = tuple(map(add, m1, m2))
                acc[m] = get(m, 0) + c1 * c2
        return Poly(self.ring, {m: v % p for m, v in acc.items() if v % p})

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {m: v * c % p for m, v in self._t.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Poly":
        if not self._t:
            return self
        c, _ = self.leading_term(order)
        return self.scale(self.ring.field.inv(c))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._t.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(f: Poly, order: MonomialOrder = DEGREVLEX) -> str:
    """Render in the parse grammar with symmetric coefficients."""
    if f.is_zero():
        return "0"
    names = f.ring.variables
    parts = []
    for c, m in f.terms(order):
        c = f.ring.field.symmetric(c)
        mono = "*".join(
            (n if e == 1 else f"{n}^{e}") for n, e in zip(names, m) if e)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


class _Parser:
    """Recursive descent over: expr := term (('+'|'-') term)*;
    term := factor ('*' factor)*; factor := ('+'|'-') factor | atom ('^' int)?;
    atom := int | variable | '(' expr ')'."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            mt = _TOKEN.match(text, pos)
            if not mt:
                bad = text[pos:].lstrip()[0]
                raise PolyParseError(f"unexpected character {bad!r}", text,
                                     pos + len(text[pos:]) - len(text[pos:].lstrip()))
            start = mt.start(mt.lastindex)
            if mt.group(1):
                self.tokens.append(("int", mt.group(1), start))
            elif mt.group(2):
                self.tokens.append(("var", mt.group(2), start))
            else:
                op = mt.group(3)
                self.tokens.append(("op", "^" if op == "**" else op, start))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        pos = tok[2] if tok else len(self.text)
        raise PolyParseError(msg, self.text, pos)

    def parse(self) -> Poly:
        if not self.tokens:
            self.fail("empty polynomial")
        f = self.expr()
        tok = self.peek()
        if tok is not None:
            self.fail(f"unexpected token {tok[1]!r}", tok)
        return f

    def expr(self) -> Poly:
        f = self.term()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.take()
                g = self.term()
                f = f + g if tok[1] == "+" else f - g
            else:
                return f

    def term(self) -> Poly:
        f = self.factor()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.take()
                f = f * self.factor()
            else:
                return f

    def factor(self) -> Poly:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            f = self.factor()
            return -f if tok[1] == "-" else f
        f = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            e = self.take()
            if e is None or e[0] != "int":
                self.fail("exponent must be a nonnegative integer", e)
            f = f ** int(e[1])
        return f

    def atom(self) -> Poly:
        tok = self.take()
        if tok is None:
            self.fail("unexpected end of input")
        kind, val, _ = tok
        if kind == "int":
            return self.ring.const(int(val))
        if kind == "var":
            if val not in self.ring.variables:
                self.fail(f"unknown variable {val!r}", tok)
            return self.ring.var(val)
        if val == "(":
            f = self.expr()
            close = self.take()
            if close is None or close[1] != ")":
                self.fail("expected ')'", close)
            return f
        self.fail(f"unexpected token {val!r}", tok)


# ---------------------------------------------------------------- ringspec

@dataclass(frozen=True)
class RingSpec:
    """R = S / I_R localised at the origin m = (x_1, ..., x_n)."""

    ambient: PolyRing
    quotient_generators: Tuple[Poly, ...] = field(default=())

    def __post_init__(self):
        for g in self.quotient_generators:
            if g.ring != self.ambient:
                raise StructureError("quotient generator over a different ring")

    @classmethod
    def make(cls, variables: Iterable[str], quotient: Iterable[str] = (),
             p: int = DEFAULT_CHARACTERISTIC) -> "RingSpec":
        S = PolyRing.make(variables, p)
        return cls(S, tuple(S.parse(q) for q in quotient))

    @property
    def field(self) -> PrimeField:
        return self.ambient.field

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.ambient.variables

    @property
    def nvars(self) -> int:
        return self.ambient.nvars

    def parse(self, text: str) -> Poly:
        return self.ambient.parse(text)


# ------------------------------------------------------------------ random

def random_form(ring: PolyRing, degree: int, rng: random.Random,
                density: float = 1.0) -> Poly:
    """Homogeneous form of exactly ``degree`` with nonzero random coefficients.

    Each monomial is kept with probability ``density``; at least one is
    always kept so the result is never zero.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    monos = list(monomials_of_degree(ring.nvars, degree))
    chosen = [m for m in monos if density >= 1 or rng.random() < density]
    if not chosen:
        chosen = [monos[rng.randrange(len(monos))]]
    return Poly(ring, {m: ring.field.random_nonzero(rng) for m in chosen})


def random_in_power(ring: PolyRing, N: int, rng: random.Random, spread: int = 0,
                    density: float = 1.0) -> Poly:
    """Random element of m^N: a sum of random forms of degrees N..N+spread."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if spread < 0:
        raise ValueError("spread must be >= 0")
    out = ring.zero()
    for d in range(N, N + spread + 1):
        out = out + random_form(ring, d, rng, density)
    return out


def random_linear_forms(ring: PolyRing, count: int, rng: random.Random) -> List[Poly]:
    return [random_form(ring, 1, rng) for _ in range(count)]


def binomial(a: int, b: int) -> int:
    """C(a, b) with C(a, b) = 0 for b < 0 or b > a >= 0, and C(-1, -1) = 1."""
    if a == -1 and b == -1:
        return 1
    if b < 0:
        return 0
    if a >= 0:
        if b > a:
            return 0
        return comb(a, b)
    # negative upper index: C(a, b) = (-1)^b C(b - a - 1, b)
    return (-1) ** b * comb(b - a - 1, b)
