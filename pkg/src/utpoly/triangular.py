"""Upper triangular matrices T_n(R) and polynomials with coefficients in them.

Indices in the public API are 1-based like the mathematics (``C[i, j]``);
``UTMatrix.rows`` is the raw 0-based row-major storage.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import BadInterval, DimMismatch, NotUpperTriangular, RingMismatch
from .poly import UniPoly
from .ring import INTEGERS, RATIONALS, Raw, RingElem, RingSpec


@dataclass(frozen=True)
class UTMatrix:
    ring: RingSpec
    rows: tuple[tuple, ...]

    def __post_init__(self):
        n = len(self.rows)
        if n < 1:
            raise DimMismatch("dimension must be at least 1")
        norm = []
        for i, row in enumerate(self.rows):
            if len(row) != n:
                raise DimMismatch(f"row {i + 1} has {len(row)} entries, expected {n}")
            r = tuple(self.ring.normalize(v) for v in row)
            if any(r[j] != 0 for j in range(i)):
                raise NotUpperTriangular(f"nonzero entry below the diagonal in row {i + 1}")
            norm.append(r)
        object.__setattr__(self, "rows", tuple(norm))

    @classmethod
    def zero(cls, ring: RingSpec, n: int) -> UTMatrix:
        return cls(ring, tuple((ring.zero,) * n for _ in range(n)))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> UTMatrix:
        return cls.scalar(ring, n, 1)

    @classmethod
    def scalar(cls, ring: RingSpec, n: int, c) -> UTMatrix:
        c = ring.normalize(c)
        return cls(ring, tuple(tuple(c if i == j else ring.zero for j in range(n)) for i in range(n)))

    @classmethod
    def from_entries(cls, ring: RingSpec, n: int, entries: Mapping[tuple[int, int], Raw]) -> UTMatrix:
        """Build from a sparse 1-based ``{(i, j): value}`` map."""
        rows = [[ring.zero] * n for _ in range(n)]
        for (i, j), v in entries.items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise DimMismatch(f"entry ({i},{j}) outside a {n}x{n} matrix")
            if i > j and ring.normalize(v) != 0:
                raise NotUpperTriangular(f"entry ({i},{j}) is below the diagonal")
            rows[i - 1][j - 1] = v
        return cls(ring, tuple(map(tuple, rows)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> RingElem:
        i, j = ij
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"({i},{j}) outside a {self.n}x{self.n} matrix")
        return RingElem(self.ring, self.rows[i - 1][j - 1])

    def entries(self) -> dict[tuple[int, int], Raw]:
        """Nonzero upper entries as a 1-based map."""
        return {(i + 1, j + 1): v for i, row in enumerate(self.rows)
                for j, v in enumerate(row) if v != 0}

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.rows for v in row)

    def _same(self, other) -> UTMatrix:
        if not isinstance(other, UTMatrix):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.n != self.n:
            raise DimMismatch(f"{self.n}x{self.n} vs {other.n}x{other.n}")
        return other

    def __add__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        add = self.ring.add
        return UTMatrix(self.ring, tuple(tuple(add(a, b) for a, b in zip(r, s))
                                         for r, s in zip(self.rows, o.rows)))

    def __neg__(self):
        return UTMatrix(self.ring, tuple(tuple(self.ring.neg(a) for a in r) for r in self.rows))

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
        return UTMatrix(self.ring, _matmul(self.ring, self.rows, o.rows))

    def __matmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int) -> UTMatrix:
        return mat_pow(self, k)

    def scale(self, c) -> UTMatrix:
        c = self.ring.normalize(c)
        mul = self.ring.mul
        return UTMatrix(self.ring, tuple(tuple(mul(c, a) for a in r) for r in self.rows))

    def to_ring(self, ring: RingSpec) -> UTMatrix:
        return UTMatrix(ring, self.rows)

    def restrict(self, h: int, j: int) -> UTMatrix:
        return restrict(self, h, j)

    def shifted(self, offset: int, n: int) -> UTMatrix:
        """Copy into an ``n x n`` matrix with entry (a,b) moved to (a+offset, b+offset)."""
        entries = {(a + offset, b + offset): v for (a, b), v in self.entries().items()}
        return UTMatrix.from_entries(self.ring, n, entries)

    def to_json(self) -> list[list[str]]:
        return [[self.ring.format_elem(v) for v in row] for row in self.rows]

    @classmethod
    def from_json(cls, data, ring: RingSpec) -> UTMatrix:
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ValueError("a matrix must be a list of rows")
        n = len(data)
        for i, row in enumerate(data):
            if len(row) != n:
                raise DimMismatch(f"row {i + 1} has {len(row)} entries, expected {n}")
            for j in range(i):
                if str(row[j]).strip() != "0":
                    raise NotUpperTriangular(f"entry ({i + 1},{j + 1}) must be \"0\"")
        return cls(ring, tuple(tuple(ring.parse_elem(str(v)) for v in row) for row in data))

    def __str__(self) -> str:
        return str(self.to_json()).replace("'", "")


def _matmul(ring: RingSpec, a: Sequence[Sequence[Raw]], b: Sequence[Sequence[Raw]]) -> tuple:
    n = len(a)
    zero = ring.zero
    out = []
    for i in range(n):
        ai = a[i]
        row = [zero] * n
        for j in range(i, n):
            s = zero
            for h in range(i, j + 1):
                x = ai[h]
                if x:
                    y = b[h][j]
                    if y:
                        s += x * y
            row[j] = s
        out.append(row)
    if ring.kind == "Zmod":
        m = ring.modulus
        return tuple(tuple(v % m for v in row) for row in out)
    return tuple(map(tuple, out))


def mat_arith(a: UTMatrix, b: UTMatrix, op: str) -> UTMatrix:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def mat_pow(c: UTMatrix, k: int) -> UTMatrix:
    if k < 0:
        raise ValueError("negative exponent")
    result = UTMatrix.identity(c.ring, c.n)
    for _ in range(k):
        result = result * c
    return result


def powers(c: UTMatrix, d: int) -> list[UTMatrix]:
    """``[C^0, ..., C^d]`` by iterated multiplication."""
    out = [UTMatrix.identity(c.ring, c.n)]
    for _ in range(d):
        out.append(out[-1] * c)
    return out


def restrict(c: UTMatrix, h: int, j: int) -> UTMatrix:
    """C^{[h,j]}: zero every entry whose row or column lies outside [h, j]."""
    if not (1 <= h <= j <= c.n):
        raise BadInterval(f"need 1 <= h <= j <= {c.n}, got [{h},{j}]")
    zero = c.ring.zero
    return UTMatrix(c.ring, tuple(
        tuple(v if (h - 1 <= r < j and h - 1 <= s < j) else zero for s, v in enumerate(row))
        for r, row in enumerate(c.rows)))


@dataclass(frozen=True)
class MatrixPoly:
    """``sum_k F_k x^k`` with every ``F_k`` in T_n(R)."""

    ring: RingSpec
    n: int
    coeffs: tuple[UTMatrix, ...] = ()

    def __post_init__(self):
        coeffs = list(self.coeffs)
        for f in coeffs:
            if not isinstance(f, UTMatrix):
                raise TypeError("coefficients must be UTMatrix")
            if f.ring != self.ring:
                raise RingMismatch(f"coefficient over {f.ring} in a polynomial over {self.ring}")
            if f.n != self.n:
                raise DimMismatch(f"coefficient of size {f.n} in a polynomial of size {self.n}")
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def zero(cls, ring: RingSpec, n: int) -> MatrixPoly:
        return cls(ring, n, ())

    @classmethod
    def from_scalar(cls, f: UniPoly, n: int) -> MatrixPoly:
        """The scalar polynomial ``f`` with coefficients ``f_k * I``."""
        return cls(f.ring, n, tuple(UTMatrix.scalar(f.ring, n, c) for c in f.coeffs))

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def entry(self, i: int, j: int) -> UniPoly:
        """f_ij, the (i,j) entry of the phi-view (1-based)."""
        return UniPoly(self.ring, [F.rows[i - 1][j - 1] for F in self.coeffs])

    def phi(self) -> tuple[tuple[UniPoly, ...], ...]:
        return phi(self)

    def _same(self, other) -> MatrixPoly:
        if not isinstance(other, MatrixPoly):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.n != self.n:
            raise DimMismatch(f"size {self.n} vs {other.n}")
        return other

    def __add__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        res = list(a)
        for k, F in enumerate(b):
            res[k] = res[k] + F
        return MatrixPoly(self.ring, self.n, tuple(res))

    def __neg__(self):
        return MatrixPoly(self.ring, self.n, tuple(-F for F in self.coeffs))

    def __sub__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __mul__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return MatrixPoly.zero(self.ring, self.n)
        res = [UTMatrix.zero(self.ring, self.n)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for a, F in enumerate(self.coeffs):
            for b, G in enumerate(o.coeffs):
                res[a + b] = res[a + b] + F * G
        return MatrixPoly(self.ring, self.n, tuple(res))

    def scale(self, c) -> MatrixPoly:
        return MatrixPoly(self.ring, self.n, tuple(F.scale(c) for F in self.coeffs))

    def to_ring(self, ring: RingSpec) -> MatrixPoly:
        return MatrixPoly(ring, self.n, tuple(F.to_ring(ring) for F in self.coeffs))

    def denominator(self) -> int:
        """lcm of all coefficient denominators (1 unless the ring is Q)."""
        if self.ring.kind != RATIONALS:
            return 1
        d = 1
        for F in self.coeffs:
            for row in F.rows:
                for v in row:
                    d = math.lcm(d, v.denominator)
        return d

    def subst_right(self, c: UTMatrix) -> UTMatrix:
        return subst_right(self, c)

    def subst_left(self, c: UTMatrix) -> UTMatrix:
        return subst_left(self, c)

    def to_json(self) -> dict:
        return {"n": self.n, "ring": str(self.ring), "coeffs": [F.to_json() for F in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> MatrixPoly:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = data["n"]
            ring = RingSpec.parse(data["ring"])
            raw = data["coeffs"]
        except (KeyError, TypeError):
            raise ValueError('matrix polynomial JSON needs "n", "ring" and "coeffs"') from None
        if not isinstance(n, int) or n < 1:
            raise DimMismatch(f"bad dimension {n!r}")
        coeffs = []
        for k, M in enumerate(raw):
            F = UTMatrix.from_json(M, ring)
            if F.n != n:
                raise DimMismatch(f"coefficient {k} is {F.n}x{F.n}, expected {n}x{n}")
            coeffs.append(F)
        return cls(ring, n, tuple(coeffs))


def phi(f: MatrixPoly) -> tuple[tuple[UniPoly, ...], ...]:
    """Coefficient transpose: ``sum_k F_k x^k`` -> the matrix ``(f_ij)``."""
    return tuple(tuple(f.entry(i, j) for j in range(1, f.n + 1)) for i in range(1, f.n + 1))


def phi_inv(entries: Sequence[Sequence[UniPoly]], ring: RingSpec | None = None) -> MatrixPoly:
    n = len(entries)
    if n < 1 or any(len(row) != n for row in entries):
        raise DimMismatch("phi_inv needs a square, non-empty array of polynomials")
    if ring is None:
        ring = entries[0][0].ring
    for i, row in enumerate(entries):
        for j, p in enumerate(row):
            if p.ring != ring:
                raise RingMismatch(f"entry ({i + 1},{j + 1}) is over {p.ring}, expected {ring}")
            if j < i and not p.is_zero():
                raise NotUpperTriangular(f"nonzero polynomial at ({i + 1},{j + 1})")
    d = max((len(p.coeffs) for row in entries for p in row), default=0)
    coeffs = []
    for k in range(d):
        coeffs.append(UTMatrix(ring, tuple(
            tuple(p.coeffs[k] if k < len(p.coeffs) else ring.zero for p in row) for row in entries)))
    return MatrixPoly(ring, n, tuple(coeffs))


def _check_subst(f: MatrixPoly, c: UTMatrix):
    if f.ring != c.ring:
        raise RingMismatch(f"{f.ring} vs {c.ring}")
    if f.n != c.n:
        raise DimMismatch(f"size {f.n} vs {c.n}")


def subst_right(f: MatrixPoly, c: UTMatrix) -> UTMatrix:
    """``sum_k F_k C^k``."""
    _check_subst(f, c)
    result = UTMatrix.zero(c.ring, c.n)
    if f.is_zero():
        return result
    for F, P in zip(f.coeffs, powers(c, f.degree)):
        result = result + F * P
    return result


def subst_left(f: MatrixPoly, c: UTMatrix) -> UTMatrix:
    """``sum_k C^k F_k``."""
    _check_subst(f, c)
    result = UTMatrix.zero(c.ring, c.n)
    if f.is_zero():
        return result
    for F, P in zip(f.coeffs, powers(c, f.degree)):
        result = result + P * F
    return result


def scalar_subst(f: UniPoly, c: UTMatrix) -> UTMatrix:
    """``sum_k f_k C^k`` for scalar coefficients."""
    if f.ring != c.ring:
        raise RingMismatch(f"{f.ring} vs {c.ring}")
    ring = c.ring
    result = UTMatrix.zero(ring, c.n)
    if f.is_zero():
        return result
    for a, P in zip(f.coeffs, powers(c, f.degree)):
        if a != 0:
            result = result + P.scale(a)
    return result


def embed_matrix(c: UTMatrix, ring: RingSpec) -> UTMatrix:
    """Explicit change of scalars, Z -> Q or Z -> Z/m."""
    if c.ring.kind != INTEGERS:
        raise RingMismatch(f"only integer matrices can be embedded, got {c.ring}")
    return c.to_ring(ring)


def is_integral(c: UTMatrix) -> bool:
    return all(not isinstance(v, Fraction) or v.denominator == 1 for row in c.rows for v in row)


def upper_positions(n: int) -> list[tuple[int, int]]:
    """1-based upper positions in the documented order (1,1),(1,2),...,(n,n)."""
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def matrices(ring: RingSpec, n: int) -> Iterable[UTMatrix]:
    """All of T_n(Z/m) in lexicographic entry order (slow; tests only)."""
    from itertools import product

    pos = upper_positions(n)
    for values in product(range(ring.modulus), repeat=len(pos)):
        yield UTMatrix.from_entries(ring, n, dict(zip(pos, values)))
