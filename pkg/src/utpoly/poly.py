"""Univariate polynomials over a :class:`RingSpec` and multivariate
polynomials in the doubly indexed variables ``x_{i,j}`` (``i <= j``).

UniPoly stores a dense coefficient tuple (low degree first), MultiPoly a
sparse ``{monomial: coefficient}`` map. Both are immutable and always
normalized: no trailing zero coefficient, no stored zero term.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import BadModulus, KindMismatch, ParseError, RingMismatch
from .ring import INTEGERS, RATIONALS, Raw, RingElem, RingSpec

Var = tuple[int, int]
# ((i, j), exponent) pairs sorted by (i, j); the empty tuple is the monomial 1.
Monomial = tuple[tuple[Var, int], ...]


def _strip(ring: RingSpec, coeffs: Iterable) -> tuple:
    out = [ring.normalize(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class UniPoly:
    ring: RingSpec
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.ring, self.coeffs))

    @classmethod
    def zero(cls, ring: RingSpec) -> UniPoly:
        return cls(ring, ())

    @classmethod
    def constant(cls, ring: RingSpec, c) -> UniPoly:
        return cls(ring, (c,))

    @classmethod
    def x(cls, ring: RingSpec) -> UniPoly:
        return cls(ring, (0, 1))

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> RingElem:
        v = self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.zero
        return RingElem(self.ring, self.ring.normalize(v))

    def _same(self, other) -> UniPoly:
        if isinstance(other, MultiPoly):
            raise KindMismatch("cannot combine a univariate and a multivariate polynomial")
        if not isinstance(other, UniPoly):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = self.ring.add
        res = list(a)
        for k, c in enumerate(b):
            res[k] = add(res[k], c)
        return UniPoly(self.ring, res)

    def __neg__(self):
        return UniPoly(self.ring, [self.ring.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __mul__(self, other):
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return self.scale(other.value)
        o = self._same(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return UniPoly(self.ring)
        ring = self.ring
        res = [ring.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                res[i + j] = ring.add(res[i + j], ring.mul(a, b))
        return UniPoly(ring, res)

    def __pow__(self, e: int) -> UniPoly:
        if e < 0:
            raise ValueError("negative exponent")
        result = UniPoly.constant(self.ring, 1)
        for _ in range(e):
            result = result * self
        return result

    def scale(self, c) -> UniPoly:
        c = self.ring.normalize(c)
        return UniPoly(self.ring, [self.ring.mul(c, a) for a in self.coeffs])

    def __call__(self, r: RingElem) -> RingElem:
        return poly_eval(self, r)

    def to_ring(self, ring: RingSpec) -> UniPoly:
        """Coefficient-wise image in ``ring`` (Z -> Q, Z -> Z/m, Q -> Q)."""
        return UniPoly(ring, self.coeffs)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"UniPoly({format_poly(self)!r}, {self.ring})"


def poly_eval(f: UniPoly, r: RingElem) -> RingElem:
    if r.ring != f.ring:
        raise RingMismatch(f"{f.ring} vs {r.ring}")
    ring = f.ring
    acc = ring.zero
    for c in reversed(f.coeffs):
        acc = ring.add(ring.mul(acc, r.value), c)
    return RingElem(ring, ring.normalize(acc))


def clear_denominators(f: UniPoly) -> tuple[int, UniPoly]:
    """Return ``(d, g)`` with ``d`` the lcm of the coefficient denominators
    and ``g = d*f`` over Z."""
    if f.ring.kind != RATIONALS:
        raise RingMismatch(f"clear_denominators needs a polynomial over Q, got {f.ring}")
    d = 1
    for c in f.coeffs:
        d = math.lcm(d, c.denominator)
    return d, UniPoly(RingSpec.integers(), [c * d for c in f.coeffs])


def reduce_mod(g: UniPoly, m: int) -> UniPoly:
    if not isinstance(m, int) or m < 2:
        raise BadModulus(f"modulus must be >= 2, got {m!r}")
    if g.ring.kind != INTEGERS:
        raise RingMismatch(f"reduce_mod needs a polynomial over Z, got {g.ring}")
    return UniPoly(RingSpec.modular(m), g.coeffs)


def poly_arith(f, g, op: str):
    if type(f) is not type(g):
        raise KindMismatch(f"{type(f).__name__} vs {type(g).__name__}")
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


# --- text format -----------------------------------------------------------

def _signed_terms(ring: RingSpec, items: Iterable[tuple[Raw, str]]) -> str:
    """Join ``(coefficient, monomial-text)`` pairs; empty monomial = constant."""
    parts: list[str] = []
    for c, mono in items:
        negative = ring.kind != "Zmod" and c < 0
        a = -c if negative else c
        if not mono:
            body = ring.format_elem(a)
        elif a == 1:
            body = mono
        else:
            body = f"{ring.format_elem(a)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts) if parts else "0"


def format_poly(f: UniPoly) -> str:
    def mono(k: int) -> str:
        return "" if k == 0 else "x" if k == 1 else f"x^{k}"

    items = [(c, mono(k)) for k, c in reversed(list(enumerate(f.coeffs))) if c != 0]
    return _signed_terms(f.ring, items)


_TOKEN = re.compile(r"\s*(?:(\d+)|(x)|([-+*/^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        kind = ("int", "x", "op")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_poly(text: str, ring: RingSpec) -> UniPoly:
    """Parse ``c``, ``c*x^k``, ``x^k``, ``x`` terms joined by ``+``/``-``.

    ``c`` is an integer, ``p/q`` (over Q) or a residue (over Z/m; any integer
    is reduced).
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def expect(kind: str, value: str | None, what: str):
        nonlocal pos
        k, v, at = tokens[pos]
        if k != kind or (value is not None and v != value):
            found = "end of input" if k == "end" else repr(v)
            raise ParseError(f"expected {what}, found {found}", text, at)
        pos += 1
        return v

    def coefficient() -> Raw:
        num_at = peek()[2]
        num = int(expect("int", None, "a coefficient"))
        if peek()[:2] == ("op", "/"):
            nonlocal pos
            pos += 1
            den_at = peek()[2]
            den = int(expect("int", None, "a denominator"))
            if den == 0:
                raise ParseError("zero denominator", text, den_at)
            value = Fraction(num, den)
        else:
            value = num
        try:
            return ring.normalize(value)
        except (ValueError, TypeError):
            raise ParseError(f"coefficient is not an element of {ring}", text, num_at) from None

    def power() -> int:
        nonlocal pos
        if peek()[:2] == ("op", "^"):
            pos += 1
            return int(expect("int", None, "an exponent"))
        return 1

    coeffs: dict[int, Raw] = {}
    sign = 1
    first = True
    while True:
        kind, value, at = peek()
        if kind == "op" and value in "+-":
            pos += 1
            sign = -1 if value == "-" else 1
        elif not first:
            raise ParseError("expected '+' or '-'", text, at)
        else:
            sign = 1
        kind, value, at = peek()
        if kind == "x":
            pos += 1
            c, k = ring.one, power()
        elif kind == "int":
            c = coefficient()
            k = 0
            if peek()[:2] == ("op", "*"):
                pos += 1
                expect("x", None, "'x'")
                k = power()
        else:
            found = "end of input" if kind == "end" else repr(value)
            raise ParseError(f"expected a term, found {found}", text, at)
        if sign < 0:
            c = ring.neg(c)
        coeffs[k] = ring.add(coeffs.get(k, ring.zero), c)
        first = False
        if peek()[0] == "end":
            break
    deg = max(coeffs)
    return UniPoly(ring, [coeffs.get(k, ring.zero) for k in range(deg + 1)])


# --- multivariate ------------------------------------------------------------

def _check_var(v: Var) -> Var:
    i, j = v
    if not (isinstance(i, int) and isinstance(j, int)) or i < 1 or i > j:
        raise ValueError(f"variable x_{{{i},{j}}} needs 1 <= i <= j")
    return (i, j)


def monomial(variables: Iterable[Var]) -> Monomial:
    """The monomial that is the product of ``variables`` (with repetition)."""
    counts: dict[Var, int] = {}
    for v in variables:
        v = _check_var(tuple(v))
        counts[v] = counts.get(v, 0) + 1
    return tuple(sorted(counts.items()))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    counts = dict(a)
    for v, e in b:
        counts[v] = counts.get(v, 0) + e
    return tuple(sorted(counts.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Monomial):
    # Degree first, then the variables spelled out in index order; for path
    # monomials this is the order of the underlying chains.
    return (mono_degree(m), [v for v, e in m for _ in range(e)])


def format_monomial(m: Monomial) -> str:
    return "*".join(f"x_{{{i},{j}}}" + (f"^{e}" if e > 1 else "") for (i, j), e in m)


@dataclass(frozen=True)
class MultiPoly:
    ring: RingSpec
    terms: Mapping[Monomial, Raw] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[Monomial, Raw] = {}
        for mono, c in self.terms.items():
            for v, e in mono:
                _check_var(v)
                if e < 1:
                    raise ValueError("exponents must be positive")
            c = self.ring.normalize(c)
            if c != 0:
                clean[tuple(sorted(mono))] = c
        object.__setattr__(self, "terms", {m: clean[m] for m in sorted(clean, key=_mono_key)})

    @classmethod
    def zero(cls, ring: RingSpec) -> MultiPoly:
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: RingSpec, c) -> MultiPoly:
        return cls(ring, {(): c})

    @classmethod
    def var(cls, ring: RingSpec, i: int, j: int) -> MultiPoly:
        return cls(ring, {(((i, j), 1),): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def variables(self) -> list[Var]:
        """Variables occurring in some term, sorted lexicographically."""
        return sorted({v for mono in self.terms for v, _ in mono})

    @property
    def degree(self) -> int | None:
        return max((mono_degree(m) for m in self.terms), default=None)

    def _same(self, other) -> MultiPoly:
        if isinstance(other, UniPoly):
            raise KindMismatch("cannot combine a multivariate and a univariate polynomial")
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        res = dict(self.terms)
        for m, c in o.terms.items():
            res[m] = self.ring.add(res.get(m, self.ring.zero), c)
        return MultiPoly(self.ring, res)

    def __neg__(self):
        return MultiPoly(self.ring, {m: self.ring.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __mul__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        ring = self.ring
        res: dict[Monomial, Raw] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                res[m] = ring.add(res.get(m, ring.zero), ring.mul(c1, c2))
        return MultiPoly(ring, res)

    def scale(self, c) -> MultiPoly:
        c = self.ring.normalize(c)
        return MultiPoly(self.ring, {m: self.ring.mul(c, a) for m, a in self.terms.items()})

    def to_ring(self, ring: RingSpec) -> MultiPoly:
        return MultiPoly(ring, self.terms)

    def evaluate(self, values: Mapping[Var, Raw], default: Raw | None = None) -> Raw:
        """Raw value after substituting ``values``; missing variables take
        ``default`` (KeyError if it is None)."""
        ring = self.ring
        acc = ring.zero
        for mono, c in self.terms.items():
            t = c
            for v, e in mono:
                x = values.get(v, default)
                if x is None:
                    raise KeyError(f"no value for x_{{{v[0]},{v[1]}}}")
                t = ring.mul(t, x**e if ring.kind != "Zmod" else pow(x, e, ring.modulus))
                if t == 0:
                    break
            acc = ring.add(acc, t)
        return ring.normalize(acc)

    def __str__(self) -> str:
        return _signed_terms(self.ring, ((c, format_monomial(m)) for m, c in self.terms.items()))


def multipoly_from_monomials(ring: RingSpec, monos: Sequence[Monomial], coeff=1) -> MultiPoly:
    res: dict[Monomial, Raw] = {}
    c = ring.normalize(coeff)
    for m in monos:
        res[m] = ring.add(res.get(m, ring.zero), c)
    return MultiPoly(ring, res)
