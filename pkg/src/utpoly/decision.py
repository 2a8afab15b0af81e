"""Membership decisions for polynomial functions on T_n.

Three problem modes share one framework (coefficient ring R, argument ring
S, target ideal I):

* ``iv``     - R = Q, S = I = Z: integer-valued polynomials;
* ``null``   - R = S = Z/m, I = 0: null-polynomials;
* ``finite`` - R = S = Z/m, I = (t): general finite targets.

Every decision has a fast *structural* route (entry-wise reduction to scalar
polynomials checked on small windows through path polynomials) and an
independent *oracle* route (exhaustive substitution of all matrices, after
clearing denominators in the ``iv`` case). A rejection always carries a
witness matrix that has been re-substituted and confirmed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .enumeration import (DEFAULT_BUDGET, batch_matrices, batch_scalar_subst, batch_subst,
                          check_budget, dtype_for, first_failure)
from .errors import DimMismatch, RingMismatch
from .pathpoly import image_in_ideal, scalar_product
from .poly import UniPoly, clear_denominators, reduce_mod
from .ring import INTEGERS, MODULAR, RATIONALS, RingElem, RingSpec, ideal_generator
from .triangular import MatrixPoly, UTMatrix, scalar_subst, subst_left, subst_right, upper_positions

SCHEMA_VERSION = 1

MEMBER = "Member"
NON_MEMBER = "NonMember"
STRUCTURAL = "Structural"
BRUTE_FORCE = "BruteForce"
REDUCTION = "Reduction"

Q = RingSpec.rationals()


def _scalars_meet_integers(n: int) -> bool:
    # A ∩ K = D for A = T_n(Z), K = Q embedded as scalar matrices.
    probes = (Fraction(0), Fraction(1), Fraction(-3), Fraction(1, 2), Fraction(5, 3))
    return all(
        all(v.denominator == 1 for row in UTMatrix.scalar(Q, n, c).rows for v in row)
        == (c.denominator == 1)
        for c in probes)


@dataclass(frozen=True)
class ProblemConfig:
    mode: str
    n: int
    side: str = "right"
    modulus: int | None = None
    ideal: int = 0

    def __post_init__(self):
        if self.mode not in ("iv", "null", "finite"):
            raise ValueError(f"mode must be iv, null or finite, got {self.mode!r}")
        if self.side not in ("right", "left"):
            raise ValueError(f"side must be right or left, got {self.side!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise DimMismatch(f"dimension must be >= 1, got {self.n!r}")
        if self.mode == "iv":
            if self.modulus is not None:
                raise ValueError("iv mode takes no modulus")
            assert _scalars_meet_integers(self.n)
        else:
            RingSpec.modular(self.modulus)  # validates
            if self.mode == "null" and self.ideal % self.modulus != 0:
                raise ValueError("null mode targets the zero ideal; use finite mode")

    @property
    def ring(self) -> RingSpec:
        return Q if self.mode == "iv" else RingSpec.modular(self.modulus)

    @property
    def ideal_generator(self) -> int:
        return ideal_generator(self.ideal, self.modulus)

    def outside(self, value) -> bool:
        """Is the raw ring value outside the target ideal I?"""
        if self.mode == "iv":
            return Fraction(value).denominator != 1
        return value % self.ideal_generator != 0

    def window(self, i: int, j: int) -> int:
        """Size of the algebra T_w governing entry (i, j)."""
        return self.n - j + 1 if self.side == "right" else i

    def with_n(self, n: int) -> ProblemConfig:
        return ProblemConfig(self.mode, n, self.side, self.modulus, self.ideal)


@dataclass(frozen=True)
class Witness:
    matrix: UTMatrix
    entry: tuple[int, int]
    value: RingElem

    def to_json(self) -> dict:
        return {"matrix": self.matrix.to_json(), "entry": list(self.entry), "value": str(self.value)}


@dataclass(frozen=True)
class Verdict:
    decision: str
    method: str
    witness: Witness | None = None

    def __post_init__(self):
        if self.decision == NON_MEMBER and self.witness is None:
            raise ValueError("a NonMember verdict needs a witness")

    @property
    def member(self) -> bool:
        return self.decision == MEMBER

    def to_json(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "decision": self.decision, "method": self.method}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out

    def summary(self) -> str:
        if self.member:
            return f"Member ({self.method})"
        w = self.witness
        return (f"NonMember ({self.method}): entry {w.entry} of f(C) is {w.value} "
                f"for C = {w.matrix}")


class WitnessError(AssertionError):
    """A witness failed re-substitution; this is a bug, not a user error."""


def _require_modular(f: UniPoly) -> int:
    if f.ring.kind != MODULAR:
        raise RingMismatch(f"expected a polynomial over Z/m, got {f.ring}")
    return f.ring.modulus


def _first_bad_entry(value: UTMatrix, outside) -> tuple[int, int]:
    for i, j in upper_positions(value.n):
        if outside(value.rows[i - 1][j - 1]):
            return i, j
    raise WitnessError(f"re-substitution gave {value}, which lies in T_n(I)")


# --- scalar coefficients -------------------------------------------------------

def is_null_scalar_brute(f: UniPoly, n: int, *, ideal: int = 0, budget: int | None = DEFAULT_BUDGET,
                         threads: int = 1) -> Verdict:
    """Substitute every C in T_n(Z/m); Member iff all f(C) lie in T_n((ideal))."""
    m = _require_modular(f)
    g = ideal_generator(ideal, m)
    if f.is_zero():
        return Verdict(MEMBER, BRUTE_FORCE)
    total = m ** (n * (n + 1) // 2)
    check_budget(total, budget)
    dtype = dtype_for(m, n)
    coeffs = list(f.coeffs)

    def chunk(s, e):
        res = batch_scalar_subst(coeffs, batch_matrices(s, e, m, n, dtype), m)
        bad = np.flatnonzero((res % g != 0).reshape(len(res), -1).any(axis=1))
        return s + int(bad[0]) if bad.size else None

    hit = first_failure(total, chunk, threads)
    if hit is None:
        return Verdict(MEMBER, BRUTE_FORCE)
    c = _matrix_at(f.ring, hit, m, n)
    value = scalar_subst(f, c)
    i, j = _first_bad_entry(value, lambda v: v % g != 0)
    return Verdict(NON_MEMBER, BRUTE_FORCE, Witness(c, (i, j), value[i, j]))


def _matrix_at(ring: RingSpec, index: int, m: int, n: int) -> UTMatrix:
    arr = batch_matrices(index, index + 1, m, n)[0]
    return UTMatrix(ring, tuple(tuple(int(v) for v in row) for row in arr))


def windowed_cost(f: UniPoly, n: int) -> int:
    """Evaluation points used by :func:`is_null_scalar_windowed`."""
    m = _require_modular(f)
    return sum(m ** len(scalar_product(f, 1, 1 + k).variables()) for k in range(n))


def is_null_scalar_windowed(f: UniPoly, n: int, *, ideal: int = 0,
                            budget: int | None = DEFAULT_BUDGET, threads: int = 1) -> Verdict:
    """Test ``<f, p_{1,1+k}>`` for k < n instead of every matrix.

    On failure the assignment is placed in the leading (k+1)x(k+1) block of an
    otherwise zero matrix, which makes entry (1, k+1) of f(C) the failing value.
    """
    m = _require_modular(f)
    check_budget(windowed_cost(f, n), budget)
    for k in range(n):
        check = image_in_ideal(scalar_product(f, 1, 1 + k), ideal, budget=None, threads=threads)
        if check.member:
            continue
        c = UTMatrix.from_entries(f.ring, n, check.assignment)
        value = scalar_subst(f, c)[1, k + 1]
        if value != check.value or value.value % ideal_generator(ideal, m) == 0:
            raise WitnessError(f"window witness {c} does not reproduce {check.value}")
        return Verdict(NON_MEMBER, STRUCTURAL, Witness(c, (1, k + 1), value))
    return Verdict(MEMBER, STRUCTURAL)


def _as_rational(f: UniPoly) -> UniPoly:
    if f.ring.kind == INTEGERS:
        return f.to_ring(Q)
    if f.ring.kind != RATIONALS:
        raise RingMismatch(f"integer-valuedness needs a polynomial over Q, got {f.ring}")
    return f


def iv_cost(f: UniPoly, n: int) -> int:
    d, g = clear_denominators(_as_rational(f))
    return 0 if d == 1 else windowed_cost(reduce_mod(g, d), n)


def is_iv_scalar(f: UniPoly, n: int, *, budget: int | None = DEFAULT_BUDGET,
                 threads: int = 1) -> Verdict:
    """Is f(C) integral for every C in T_n(Z)?

    Writes f = g/d and decides whether g mod d is null on T_n(Z/d).
    """
    f = _as_rational(f)
    d, g = clear_denominators(f)
    if d == 1:
        return Verdict(MEMBER, REDUCTION)
    v = is_null_scalar_windowed(reduce_mod(g, d), n, budget=budget, threads=threads)
    if v.member:
        return Verdict(MEMBER, REDUCTION)
    c = v.witness.matrix.to_ring(Q)
    i, j = v.witness.entry
    value = scalar_subst(f, c)[i, j]
    if value.value.denominator == 1:
        raise WitnessError(f"lifted witness {c} gives the integer {value}")
    return Verdict(NON_MEMBER, REDUCTION, Witness(c, (i, j), value))


# --- matrix coefficients -------------------------------------------------------

def _coerce(f: MatrixPoly, cfg: ProblemConfig) -> MatrixPoly:
    if f.n != cfg.n:
        raise DimMismatch(f"polynomial has size {f.n}, problem has n = {cfg.n}")
    if cfg.mode == "iv":
        if f.ring.kind == INTEGERS:
            return f.to_ring(Q)
        if f.ring.kind != RATIONALS:
            raise RingMismatch(f"iv mode needs coefficients over Q, got {f.ring}")
        return f
    if f.ring != cfg.ring:
        raise RingMismatch(f"{cfg.mode} mode with modulus {cfg.modulus} got coefficients over {f.ring}")
    return f


def _scalar_cost(p: UniPoly, w: int, cfg: ProblemConfig) -> int:
    return iv_cost(p, w) if cfg.mode == "iv" else windowed_cost(p, w)


def _scalar_decide(p: UniPoly, w: int, cfg: ProblemConfig, threads: int) -> Verdict:
    if cfg.mode == "iv":
        return is_iv_scalar(p, w, budget=None, threads=threads)
    return is_null_scalar_windowed(p, w, ideal=cfg.ideal, budget=None, threads=threads)


def _substitute(f: MatrixPoly, c: UTMatrix, side: str) -> UTMatrix:
    return subst_right(f, c) if side == "right" else subst_left(f, c)


def is_member_matrix_structural(f: MatrixPoly, cfg: ProblemConfig, *,
                                budget: int | None = DEFAULT_BUDGET, threads: int = 1) -> Verdict:
    """Entry-wise criterion: f_ij must lie in the scalar set for T_{n-j+1}
    (right substitution) or T_i (left substitution)."""
    f = _coerce(f, cfg)
    n = cfg.n
    entries = {(i, j): f.entry(i, j) for i, j in upper_positions(n)}
    check_budget(sum(_scalar_cost(p, cfg.window(i, j), cfg) for (i, j), p in entries.items()),
                 budget)
    failing = {}
    for (i, j), p in entries.items():
        v = _scalar_decide(p, cfg.window(i, j), cfg, threads)
        if not v.member:
            failing[(i, j)] = v
    if not failing:
        return Verdict(MEMBER, STRUCTURAL)

    # The scalar witness fails at entry (1, b) and lives on rows/columns 1..b.
    # Shift it so that the failing entry of f(C) picks up only the bad entry
    # of f plus contributions already known to lie in I.
    if cfg.side == "right":
        i = min(i for i, _ in failing)
        h = max(j for a, j in failing if a == i)
        scalar = failing[(i, h)].witness
        b = scalar.entry[1]
        offset, entry = h - 1, (i, h + b - 1)
    else:
        j = min(j for _, j in failing)
        h = min(a for a, c in failing if c == j)
        scalar = failing[(h, j)].witness
        b = scalar.entry[1]
        offset, entry = h - b, (h - b + 1, j)
    c = scalar.matrix.shifted(offset, n).to_ring(f.ring)
    value = _substitute(f, c, cfg.side)[entry]
    if not cfg.outside(value.value):
        raise WitnessError(f"embedded witness {c} gives {value} at {entry}, inside I")
    return Verdict(NON_MEMBER, STRUCTURAL, Witness(c, entry, value))


def is_member_matrix_reduction(f: MatrixPoly, cfg: ProblemConfig, *,
                               budget: int | None = DEFAULT_BUDGET, threads: int = 1) -> Verdict:
    """Oracle: enumerate all of T_n over the finite ring (Z/d after clearing
    the common denominator d in iv mode, Z/m otherwise)."""
    f = _coerce(f, cfg)
    n = cfg.n
    if cfg.mode == "iv":
        method = REDUCTION
        m = f.denominator()
        if m == 1:
            return Verdict(MEMBER, method)
        g = 0
        coeffs = [np.array([[int(v * m) % m for v in row] for row in F.rows], dtype=object)
                  for F in f.coeffs]
    else:
        method = BRUTE_FORCE
        m = cfg.modulus
        g = cfg.ideal_generator
        coeffs = [np.array(F.rows, dtype=object) for F in f.coeffs]
        if f.is_zero():
            return Verdict(MEMBER, method)
    modulus_ideal = g if g else m
    total = m ** (n * (n + 1) // 2)
    check_budget(total, budget)
    dtype = dtype_for(m, n)
    coeffs = [F.astype(dtype) for F in coeffs]

    def chunk(s, e):
        res = batch_subst(coeffs, batch_matrices(s, e, m, n, dtype), m, cfg.side)
        bad = np.flatnonzero((res % modulus_ideal != 0).reshape(len(res), -1).any(axis=1))
        return s + int(bad[0]) if bad.size else None

    hit = first_failure(total, chunk, threads)
    if hit is None:
        return Verdict(MEMBER, method)
    c = _matrix_at(f.ring, hit, m, n)
    value = _substitute(f, c, cfg.side)
    i, j = _first_bad_entry(value, cfg.outside)
    return Verdict(NON_MEMBER, method, Witness(c, (i, j), value[i, j]))


def decide(f: MatrixPoly, cfg: ProblemConfig, method: str = "structural", **kw) -> Verdict:
    if method == "structural":
        return is_member_matrix_structural(f, cfg, **kw)
    if method in ("reduction", "brute"):
        return is_member_matrix_reduction(f, cfg, **kw)
    raise ValueError(f"unknown method {method!r}")


def characterize(n: int, side: str, mode: str) -> list[list[str]]:
    """Requirement label for each entry of phi(f), e.g. ``Int^{T2}``."""
    if n < 1:
        raise DimMismatch(f"dimension must be >= 1, got {n}")
    if side not in ("right", "left"):
        raise ValueError(f"side must be right or left, got {side!r}")
    name = {"iv": "Int", "null": "N", "finite": "Int"}[mode]
    out = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i > j:
                row.append("zero")
            else:
                w = n - j + 1 if side == "right" else i
                row.append(f"{name}^{{T{w}}}")
        out.append(row)
    return out
