"""Seeded identity and oracle-equivalence runs with JSON-ready reports.

Each runner returns a dict with ``trials``, ``checks``, ``failures`` and
``seed``; reports are identical for any ``threads`` value.
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

from .decision import (SCHEMA_VERSION, ProblemConfig, is_member_matrix_reduction,
                       is_member_matrix_structural, is_null_scalar_brute, is_null_scalar_windowed)
from .enumeration import DEFAULT_BUDGET, map_ordered
from .pathpoly import multi_subst_matrix, path_poly, scalar_product
from .poly import UniPoly
from .randgen import random_matrixpoly, random_unipoly, random_utmatrix, trial_rng
from .ring import RingSpec
from .triangular import (MatrixPoly, UTMatrix, phi_inv, powers, restrict, scalar_subst, subst_left,
                         subst_right, upper_positions)

Q = RingSpec.rationals()
Z = RingSpec.integers()


def _report(check: str, params: dict, trials: int, checks: int, failures: int, seed, started: float,
            timing: bool, notes=()) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "check": check, **params, "trials": trials,
           "checks": checks, "failures": failures, "seed": seed}
    if notes:
        out["failure_notes"] = list(notes)[:20]
    if timing:
        out["elapsed_ms"] = round((time.perf_counter() - started) * 1000)
    return out


def verify_power_identity(trials: int = 500, n: int = 4, m: int = 5, max_power: int = 6,
                          seed: int = 0, *, threads: int = 1, timing: bool = False) -> dict:
    """``[C^k]_ij`` equals the path polynomial ``p_ij^(k)`` evaluated at C."""
    started = time.perf_counter()
    ring = RingSpec.modular(m)
    polys = {(i, j, k): path_poly(i, j, k, ring)
             for i, j in upper_positions(n) for k in range(max_power + 1)}

    def trial(t):
        c = random_utmatrix(trial_rng(seed, t), ring, n)
        bad = []
        for k, P in enumerate(powers(c, max_power)):
            for i, j in upper_positions(n):
                if P[i, j] != multi_subst_matrix(polys[(i, j, k)], c):
                    bad.append(f"trial {t}: C={c} k={k} entry ({i},{j})")
        return bad

    results = map_ordered(trial, range(trials), threads)
    notes = [b for r in results for b in r]
    checks = trials * (max_power + 1) * len(upper_positions(n))
    return _report("power", {"modulus": m, "n": n, "max_power": max_power}, trials, checks,
                   len(notes), seed, started, timing, notes)


def summation_identity_failures(f: MatrixPoly, c: UTMatrix) -> list[str]:
    """Entries where the row/column summation formulas for right and left
    substitution disagree with direct substitution."""
    n = f.n
    phi = [[f.entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    right = subst_right(f, c)
    left = subst_left(f, c)
    zero = right.ring.zero
    add = right.ring.add
    bad = []
    for i, j in upper_positions(n):
        hs = range(i, j + 1)
        r_forms = [
            [scalar_subst(phi[i - 1][h - 1], c)[h, j] for h in hs],
            [scalar_subst(phi[i - 1][h - 1], restrict(c, h, j))[h, j] for h in hs],
            [multi_subst_matrix(scalar_product(phi[i - 1][h - 1], h, j), c) for h in hs],
            [multi_subst_matrix(scalar_product(phi[i - 1][h - 1], h, j), restrict(c, h, j))
             for h in hs],
        ]
        l_forms = [
            [scalar_subst(phi[h - 1][j - 1], c)[i, h] for h in hs],
            [scalar_subst(phi[h - 1][j - 1], restrict(c, i, h))[i, h] for h in hs],
            [multi_subst_matrix(scalar_product(phi[h - 1][j - 1], i, h), c) for h in hs],
            [multi_subst_matrix(scalar_product(phi[h - 1][j - 1], i, h), restrict(c, i, h))
             for h in hs],
        ]
        for side, target, forms in (("R", right.rows[i - 1][j - 1], r_forms),
                                    ("L", left.rows[i - 1][j - 1], l_forms)):
            for k, terms in enumerate(forms):
                total = zero
                for v in terms:
                    total = add(total, v.value)
                if total != target:
                    bad.append(f"({side}) form {k} at ({i},{j})")
    return bad


def verify_summation_identities(trials: int = 200, n: int = 3, m: int = 3, max_degree: int = 3,
                                seed: int = 0, *, threads: int = 1, timing: bool = False) -> dict:
    started = time.perf_counter()
    ring = RingSpec.modular(m)

    def trial(t):
        rng = trial_rng(seed, t)
        f = random_matrixpoly(rng, ring, n, max_degree)
        c = random_utmatrix(rng, ring, n)
        return [f"trial {t}: {b}" for b in summation_identity_failures(f, c)]

    results = map_ordered(trial, range(trials), threads)
    notes = [b for r in results for b in r]
    checks = trials * len(upper_positions(n)) * 8
    return _report("summation", {"modulus": m, "n": n, "max_degree": max_degree}, trials, checks,
                   len(notes), seed, started, timing, notes)


def all_polys(m: int, max_degree: int):
    ring = RingSpec.modular(m)
    for coeffs in itertools.product(range(m), repeat=max_degree + 1):
        yield UniPoly(ring, coeffs)


WINDOWED_CASES = ((2, 4, (1, 2, 3)), (3, 3, (1, 2)))


def verify_windowed_equivalence(cases=WINDOWED_CASES, *, threads: int = 1,
                                budget: int | None = DEFAULT_BUDGET, timing: bool = False) -> dict:
    """Windowed and brute-force null decisions on every polynomial of
    bounded degree over Z/m, for each ``(m, max_degree, dims)`` case."""
    started = time.perf_counter()
    jobs = [(f, n) for m, deg, dims in cases for n in dims for f in all_polys(m, deg)]

    def check(job):
        f, n = job
        a = is_null_scalar_brute(f, n, budget=budget)
        b = is_null_scalar_windowed(f, n, budget=budget)
        return None if a.decision == b.decision else f"{f} over {f.ring}, n={n}"

    notes = [r for r in map_ordered(check, jobs, threads) if r]
    params = {"cases": [[m, deg, list(dims)] for m, deg, dims in cases]}
    return _report("windowed", params, len(jobs), len(jobs), len(notes), None, started, timing, notes)


FAMILY_ENTRIES = ("0", "1", "x", "x^2 + x", "x^2 + x + 1")

# Numerators that are null modulo small d on some T_w, so random instances
# mix members and non-members.
_SPECIAL_NUMERATORS = ((0, -1, 1), (0, -1, 0, 1), (0, 2, -3, 1), (0, -6, 11, -6, 1),
                       (0, 0, 1, -2, 1), (0, 0, -1, 0, 1))


def exhaustive_family(m: int = 2, n: int = 2, entries=FAMILY_ENTRIES):
    """Every matrix polynomial whose upper phi-entries come from ``entries``."""
    from .poly import parse_poly

    ring = RingSpec.modular(m)
    pool = [parse_poly(e, ring) for e in entries]
    positions = upper_positions(n)
    for choice in itertools.product(pool, repeat=len(positions)):
        grid = [[UniPoly.zero(ring) for _ in range(n)] for _ in range(n)]
        for (i, j), p in zip(positions, choice):
            grid[i - 1][j - 1] = p
        yield phi_inv(grid, ring)


def random_iv_instance(rng, max_n: int = 3, dens=(1, 2, 3, 4), max_degree: int = 4) -> MatrixPoly:
    n = rng.randint(1, max_n)
    d = rng.choice(dens)
    grid = [[UniPoly.zero(Q) for _ in range(n)] for _ in range(n)]
    for i, j in upper_positions(n):
        kind = rng.randrange(3)
        p = random_unipoly(rng, Q, max_degree)
        if kind == 1:
            p = p.scale(Fraction(1, d))
        elif kind == 2:
            num = UniPoly(Q, rng.choice(_SPECIAL_NUMERATORS))
            p = random_unipoly(rng, Q, 1) + num.scale(Fraction(rng.randint(1, d), d))
        grid[i - 1][j - 1] = p
    return phi_inv(grid, Q)


def verify_oracle_equivalence(random_trials: int = 500, seed: int = 0, *, threads: int = 1,
                              budget: int | None = DEFAULT_BUDGET, timing: bool = False,
                              max_n: int = 3, dens=(1, 2, 3, 4), max_degree: int = 4) -> dict:
    """Structural and reduction verdicts agree on (a) the exhaustive null
    family over Z/2, n = 2, and (b) seeded random integer-valued instances."""
    started = time.perf_counter()

    def compare(f: MatrixPoly, cfg: ProblemConfig, label: str):
        s = is_member_matrix_structural(f, cfg, budget=budget)
        r = is_member_matrix_reduction(f, cfg, budget=budget)
        return s.member, (None if s.decision == r.decision
                          else f"{label} {cfg.side}: structural={s.decision} reduction={r.decision}")

    family = list(exhaustive_family())

    def family_job(k):
        return [compare(family[k], ProblemConfig("null", 2, side, 2), f"family[{k}]")
                for side in ("right", "left")]

    def random_job(t):
        f = random_iv_instance(trial_rng(seed, t), max_n, dens, max_degree)
        return [compare(f, ProblemConfig("iv", f.n, side), f"random[{t}]")
                for side in ("right", "left")]

    fam = [x for r in map_ordered(family_job, range(len(family)), threads) for x in r]
    rnd = [x for r in map_ordered(random_job, range(random_trials), threads) for x in r]
    notes = [note for _, note in fam + rnd if note]
    params = {"family_size": len(family), "family_members": sum(m for m, _ in fam),
              "random_members": sum(m for m, _ in rnd), "max_n": max_n,
              "denominators": list(dens), "max_degree": max_degree}
    return _report("oracle", params, random_trials, len(fam) + len(rnd), len(notes), seed,
                   started, timing, notes)
