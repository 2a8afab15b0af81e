"""Path polynomials over the relation (N, <=) and their evaluations.

``path_poly(i, j, k)`` is the sum of the monomials
``x_{i1,i2} x_{i2,i3} ... x_{ik,ik+1}`` over all chains
``i = i1 <= i2 <= ... <= ik+1 = j``; it is the (i, j) entry of the k-th
power of the generic upper triangular matrix ``(x_{ab})``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .enumeration import DEFAULT_BUDGET, check_budget, digits, dtype_for, first_failure, first_true
from .errors import IndexUnderflow, RingMismatch
from .poly import Monomial, MultiPoly, UniPoly, Var, multipoly_from_monomials
from .ring import RingElem, RingSpec, ideal_generator
from .triangular import UTMatrix

Z = RingSpec.integers()


def chains(i: int, j: int, k: int):
    """Nondecreasing sequences of length k+1 from i to j (depth-first)."""
    if k == 0:
        if i == j:
            yield (i,)
        return
    if i > j:
        return

    def extend(prefix: list[int], steps_left: int):
        last = prefix[-1]
        if steps_left == 1:
            yield (*prefix, j)
            return
        for nxt in range(last, j + 1):
            prefix.append(nxt)
            yield from extend(prefix, steps_left - 1)
            prefix.pop()

    yield from extend([i], k)


def _chain_monomial(chain) -> Monomial:
    counts: dict[Var, int] = {}
    for a, b in zip(chain, chain[1:]):
        counts[(a, b)] = counts.get((a, b), 0) + 1
    return tuple(sorted(counts.items()))


@functools.lru_cache(maxsize=4096)
def _canonical_monomials(width: int, k: int) -> tuple[Monomial, ...]:
    # Path polynomials from 1 to 1+width; other start points are renamings.
    return tuple(_chain_monomial(c) for c in chains(1, 1 + width, k))


def _shift_monomial(mono: Monomial, s: int) -> Monomial:
    return tuple(((a + s, b + s), e) for (a, b), e in mono)


def path_poly(i: int, j: int, k: int, ring: RingSpec = Z) -> MultiPoly:
    if i < 1 or j < 1 or k < 0:
        raise ValueError("path_poly needs i, j >= 1 and k >= 0")
    if i > j:
        return MultiPoly.zero(ring)
    monos = [_shift_monomial(m, i - 1) for m in _canonical_monomials(j - i, k)]
    return multipoly_from_monomials(ring, monos)


def scalar_product(f: UniPoly, a: int, b: int) -> MultiPoly:
    """``<f, p_ab> = sum_k f_k p_ab^(k)``."""
    ring = f.ring
    if a > b or f.is_zero():
        return MultiPoly.zero(ring)
    terms: dict[Monomial, object] = {}
    for k, c in enumerate(f.coeffs):
        if c == 0:
            continue
        for m in _canonical_monomials(b - a, k):
            m = _shift_monomial(m, a - 1)
            terms[m] = ring.add(terms.get(m, ring.zero), c)
    return MultiPoly(ring, terms)


def multi_subst_matrix(p: MultiPoly, c: UTMatrix) -> RingElem:
    """Substitute ``c_ij`` for ``x_ij``; variables beyond ``n`` become 0."""
    if p.ring != c.ring:
        raise RingMismatch(f"{p.ring} vs {c.ring}")
    return RingElem(p.ring, p.evaluate(c.entries(), default=p.ring.zero))


def shift_canonical(p: MultiPoly, m: int) -> MultiPoly:
    """Rename every ``x_{h,k}`` to ``x_{h+m,k+m}``."""
    lowest = min((a for a, _ in p.variables()), default=None)
    if lowest is not None and lowest + m < 1:
        raise IndexUnderflow(f"shift by {m} moves x_{{{lowest},*}} below index 1")
    return MultiPoly(p.ring, {_shift_monomial(mono, m): c for mono, c in p.terms.items()})


# --- exhaustive image tests over Z/m -------------------------------------------

@dataclass(frozen=True)
class ImageCheck:
    """Outcome of an image-in-ideal test; ``assignment`` is the first
    failing substitution (variables in lexicographic order)."""

    member: bool
    assignment: dict[Var, int] | None = None
    value: RingElem | None = None
    points: int = 0


def _compile(p: MultiPoly) -> tuple[list[Var], list[tuple[int, list[tuple[int, int]]]]]:
    variables = p.variables()
    pos = {v: t for t, v in enumerate(variables)}
    terms = [(c, [(pos[v], e) for v, e in mono]) for mono, c in p.terms.items()]
    return variables, terms


def _batch_eval(terms, d: np.ndarray, m: int) -> np.ndarray:
    vals = np.zeros(d.shape[0], dtype=d.dtype)
    for c, factors in terms:
        t = np.full(d.shape[0], c, dtype=d.dtype)
        for col, e in factors:
            x = d[:, col]
            for _ in range(e):
                t = (t * x) % m
        vals = (vals + t) % m
    return vals


def _require_finite(p: MultiPoly) -> int:
    if not p.ring.is_finite:
        raise RingMismatch(f"exhaustive images need a finite ring, got {p.ring}")
    return p.ring.modulus


def image_in_ideal(p: MultiPoly, t: int = 0, *, budget: int | None = DEFAULT_BUDGET,
                   threads: int = 1) -> ImageCheck:
    """Does ``p`` take values in the ideal ``(t)`` of Z/m for every
    assignment of Z/m-values to the variables occurring in ``p``?"""
    m = _require_finite(p)
    g = ideal_generator(t, m)
    if p.is_zero():
        return ImageCheck(True)
    variables, terms = _compile(p)
    r = len(variables)
    total = m**r
    check_budget(total, budget)
    dtype = dtype_for(m)

    def chunk(s: int, e: int):
        vals = _batch_eval(terms, digits(s, e, m, r, dtype), m)
        hit = first_true(vals % g != 0)
        return None if hit is None else s + hit

    hit = first_failure(total, chunk, threads)
    if hit is None:
        return ImageCheck(True, points=total)
    values = [int(v) for v in digits(hit, hit + 1, m, r)[0]]
    assignment = dict(zip(variables, values))
    return ImageCheck(False, assignment, RingElem(p.ring, p.evaluate(assignment)), total)


def image_set(p: MultiPoly, *, budget: int | None = DEFAULT_BUDGET) -> frozenset[int]:
    """All values of ``p`` over Z/m as its variables range independently."""
    m = _require_finite(p)
    variables, terms = _compile(p)
    r = len(variables)
    total = m**r
    check_budget(total, budget)
    seen: set[int] = set()
    for s in range(0, total, 1 << 14):
        e = min(s + (1 << 14), total)
        seen.update(int(v) for v in np.unique(_batch_eval(terms, digits(s, e, m, r, dtype_for(m)), m)))
    return frozenset(seen)
