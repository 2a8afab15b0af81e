"""Degree-bounded null-polynomial bases over Z/p, integer-valued generators
built from them, and randomized checks that the right/left null sets are
ideals and the right/left integer-valued sets are rings."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .decision import (SCHEMA_VERSION, ProblemConfig, is_iv_scalar, is_member_matrix_reduction,
                       is_member_matrix_structural)
from .enumeration import DEFAULT_BUDGET, check_budget, digits, map_ordered
from .errors import NotPrime
from .pathpoly import path_poly
from .poly import UniPoly
from .randgen import random_matrixpoly, random_unipoly, trial_rng
from .ring import RingSpec, is_prime
from .triangular import MatrixPoly, phi_inv, upper_positions

Q = RingSpec.rationals()
Z = RingSpec.integers()


def nullspace_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], int]:
    """Kernel basis of ``rows`` over GF(p) and the rank.

    Reduced row echelon form with pivots taken column by column from the
    first row holding a nonzero entry; one basis vector per free column in
    increasing order.
    """
    work = [[v % p for v in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, len(work)) if work[k][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][col], -1, p)
        work[r] = [v * inv % p for v in work[r]]
        for k in range(len(work)):
            if k != r and work[k][col]:
                factor = work[k][col]
                work[k] = [(a - factor * b) % p for a, b in zip(work[k], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[free] = 1
        for row, pc in enumerate(pivots):
            v[pc] = -work[row][free] % p
        basis.append(v)
    return basis, len(pivots)


@dataclass(frozen=True)
class NullBasis:
    modulus: int
    n: int
    max_degree: int
    basis: tuple[UniPoly, ...]
    rank: int = 0
    constraints: int = 0


def constraint_rows(p: int, n: int, max_degree: int, budget: int | None = DEFAULT_BUDGET) -> np.ndarray:
    """Distinct rows ``([C^k]_ij)_{k<=D}`` over all C in T_n(Z/p) and i <= j.

    Entry (i, j) only sees the window [i, j], and windows of equal width give
    the same rows, so it is enough to run over the windows [1, b].
    """
    check_budget(sum(p ** (b * (b + 1) // 2) for b in range(1, n + 1)), budget)
    ring = RingSpec.modular(p)
    blocks = []
    for b in range(1, n + 1):
        variables = [(i, j) for i, j in upper_positions(b)]
        pos = {v: t for t, v in enumerate(variables)}
        total = p ** len(variables)
        d = digits(0, total, p, len(variables))
        cols = []
        for k in range(max_degree + 1):
            poly = path_poly(1, b, k, ring)
            col = np.zeros(total, dtype=np.int64)
            for mono, c in poly.terms.items():
                t = np.full(total, c, dtype=np.int64)
                for v, e in mono:
                    for _ in range(e):
                        t = t * d[:, pos[v]] % p
                col = (col + t) % p
            cols.append(col)
        blocks.append(np.unique(np.stack(cols, axis=1), axis=0))
    return np.unique(np.concatenate(blocks), axis=0)


def null_basis(p: int, n: int, max_degree: int, *, budget: int | None = DEFAULT_BUDGET) -> NullBasis:
    """Basis of the null polynomials on T_n(Z/p) of degree <= max_degree."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    rows = constraint_rows(p, n, max_degree, budget)
    kernel, rank = nullspace_mod_p(rows.tolist(), max_degree + 1, p)
    ring = RingSpec.modular(p)
    return NullBasis(p, n, max_degree, tuple(UniPoly(ring, v) for v in kernel), rank, len(rows))


def iv_generators(n: int, d: int, max_degree: int, *, budget: int | None = DEFAULT_BUDGET) -> list[UniPoly]:
    """``g/d`` for each basis element g of the null polynomials mod d."""
    return [UniPoly(Q, [Fraction(c, d) for c in g.coeffs])
            for g in null_basis(d, n, max_degree, budget=budget).basis]


# --- closure verification ---------------------------------------------------

@dataclass
class _Tally:
    checks: int = 0
    failures: int = 0
    notes: list = field(default_factory=list)

    def record(self, ok: bool, note: str):
        self.checks += 1
        if not ok:
            self.failures += 1
            self.notes.append(note)


def _agree_member(f: MatrixPoly, cfg: ProblemConfig, tally: _Tally, label: str, budget):
    s = is_member_matrix_structural(f, cfg, budget=budget)
    r = is_member_matrix_reduction(f, cfg, budget=budget)
    tally.record(s.member and r.member, f"{label}: structural={s.decision} reduction={r.decision}")


def _fill_shape(rng, ring: RingSpec, n: int, side: str, pools: dict[int, list[UniPoly]],
                coeff, extra=None) -> MatrixPoly:
    """Random element of the shape where entry (i,j) comes from ``pools[w]``."""
    entries = [[UniPoly.zero(ring) for _ in range(n)] for _ in range(n)]
    for i, j in upper_positions(n):
        w = n - j + 1 if side == "right" else i
        p = UniPoly.zero(ring)
        for g in pools[w]:
            p = p + g.scale(coeff(rng))
        if extra is not None:
            p = p + extra(rng)
        entries[i - 1][j - 1] = p
    return phi_inv(entries, ring)


def _report(kind: str, params: dict, trials: int, seed: int, tally: _Tally, started: float,
            timing: bool) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "check": kind, **params, "trials": trials,
           "checks": tally.checks, "failures": tally.failures, "seed": seed}
    if tally.notes:
        out["failure_notes"] = tally.notes[:20]
    if timing:
        out["elapsed_ms"] = round((time.perf_counter() - started) * 1000)
    return out


def _merge(tallies: list[_Tally]) -> _Tally:
    total = _Tally()
    for t in tallies:
        total.checks += t.checks
        total.failures += t.failures
        total.notes.extend(t.notes)
    return total


def verify_ideal_closure(m: int, n: int, max_degree: int, trials: int, seed: int, *,
                         sides: Sequence[str] = ("right", "left"), threads: int = 1,
                         budget: int | None = DEFAULT_BUDGET, timing: bool = False) -> dict:
    """Random right/left null polynomials stay null after multiplying by
    arbitrary elements of (T_n(Z/m))[x] on either side and after adding."""
    started = time.perf_counter()
    ring = RingSpec.modular(m)
    pools = {w: list(null_basis(m, w, max_degree, budget=budget).basis) for w in range(1, n + 1)}

    def coeff(rng):
        return rng.randrange(m)

    def trial(t: int) -> _Tally:
        rng = trial_rng(seed, t)
        tally = _Tally()
        for side in sides:
            cfg = ProblemConfig("null", n, side, m)
            f = _fill_shape(rng, ring, n, side, pools, coeff)
            f2 = _fill_shape(rng, ring, n, side, pools, coeff)
            a = random_matrixpoly(rng, ring, n, 2)
            b = random_matrixpoly(rng, ring, n, 2)
            _agree_member(f, cfg, tally, f"trial {t} {side} f", budget)
            for label, prod in (("a*f", a * f), ("f*b", f * b), ("a*f*b", a * f * b),
                                ("f+f2", f + f2)):
                _agree_member(prod, cfg, tally, f"trial {t} {side} {label}", budget)
        return tally

    tally = _merge(map_ordered(trial, range(trials), threads))
    params = {"modulus": m, "n": n, "max_degree": max_degree, "sides": list(sides)}
    return _report("ideal", params, trials, seed, tally, started, timing)


def verify_ring_closure(n: int, d: int, max_degree: int, trials: int, seed: int, *,
                        sides: Sequence[str] = ("right", "left"), threads: int = 1,
                        budget: int | None = DEFAULT_BUDGET, timing: bool = False) -> dict:
    """Random right/left integer-valued polynomials are closed under + and *.

    Also checks the scalar inclusion Int^{T_i} * Int^{T_j} within
    Int^{T_min(i,j)} on all pairs of generators.
    """
    started = time.perf_counter()
    pools = {w: iv_generators(w, d, max_degree, budget=budget) for w in range(1, n + 1)}

    def coeff(rng):
        return rng.randint(-2, 2)

    def extra(rng):
        return random_unipoly(rng, Q, 2)

    def trial(t: int) -> _Tally:
        rng = trial_rng(seed, t)
        tally = _Tally()
        for side in sides:
            cfg = ProblemConfig("iv", n, side)
            f = _fill_shape(rng, Q, n, side, pools, coeff, extra)
            g = _fill_shape(rng, Q, n, side, pools, coeff, extra)
            _agree_member(f, cfg, tally, f"trial {t} {side} f", budget)
            for label, combo in (("f*g", f * g), ("g*f", g * f), ("f+g", f + g)):
                _agree_member(combo, cfg, tally, f"trial {t} {side} {label}", budget)
        return tally

    tallies = map_ordered(trial, range(trials), threads)

    inclusion = _Tally()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            w = min(i, j)
            for g1 in pools[i]:
                for g2 in pools[j]:
                    prod = g1 * g2
                    s = is_iv_scalar(prod, w, budget=budget)
                    r = is_member_matrix_reduction(MatrixPoly.from_scalar(prod, w),
                                                   ProblemConfig("iv", w), budget=budget)
                    inclusion.record(s.member and r.member,
                                     f"({g1})*({g2}) not in Int^(T{w})")
    tally = _merge([*tallies, inclusion])
    params = {"denominator": d, "n": n, "max_degree": max_degree, "sides": list(sides),
              "inclusion_pairs": inclusion.checks}
    return _report("ring", params, trials, seed, tally, started, timing)
