"""Cycle statistics and the d-th power calculus on permutations.

A permutation sigma of degree N is a d-th power exactly when, for every
cycle length t present in sigma, the number of t-cycles is divisible by
m_t = prod over primes p | t of p^(v_p(d)).  The constructive converse
interleaves groups of m_t t-cycles into single (t * m_t)-cycles.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, HypothesisError
from .measures import _all_perms, _invert, evaluate_word
from .words import Word, is_dth_power_in_free

Perm = tuple[int, ...]

MOMENTS_DEGREE_CAP = 12
OBSTRUCTION_EXHAUSTIVE_CAP = 2_000_000


@dataclass(frozen=True)
class CycleType:
    degree: int
    counts: tuple[tuple[int, int], ...]  # (cycle length t, multiplicity c_t)

    def count(self, t: int) -> int:
        return dict(self.counts).get(t, 0)

    def __str__(self) -> str:
        return " ".join(f"{t}^{c}" for t, c in self.counts)


def identity(N: int) -> Perm:
    return tuple(range(N))


def compose(p: Perm, q: Perm) -> Perm:
    """First p, then q (right action)."""
    return tuple(q[p[i]] for i in range(len(p)))


def power_of_permutation(p: Perm, d: int) -> Perm:
    if d < 0:
        return power_of_permutation(_invert(p), -d)
    out = identity(len(p))
    base = p
    while d:
        if d & 1:
            out = compose(out, base)
        base = compose(base, base)
        d >>= 1
    return out


def cycles(p: Perm) -> list[list[int]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(cyc)
    return out


def cycle_type(p: Perm) -> CycleType:
    counts: dict[int, int] = {}
    for cyc in cycles(p):
        counts[len(cyc)] = counts.get(len(cyc), 0) + 1
    return CycleType(len(p), tuple(sorted(counts.items())))


def nu_p(n: int, p: int) -> int:
    """p-adic valuation of n (p must be prime)."""
    if p < 2 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
        raise ValueError(f"{p} is not prime")
    if n <= 0:
        raise ValueError("n must be positive")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _prime_divisors(t: int) -> list[int]:
    out = []
    d = 2
    while d * d <= t:
        if t % d == 0:
            out.append(d)
            while t % d == 0:
                t //= d
        d += 1
    if t > 1:
        out.append(t)
    return out


def power_cycle_divisor(t: int, d: int) -> int:
    """m_t = prod over primes p | t of p^(v_p(d))."""
    m = 1
    for p in _prime_divisors(t):
        m *= p ** nu_p(d, p)
    return m


def is_dth_power(p: Perm, d: int) -> bool:
    """True iff some permutation of the same degree d-powers to p."""
    if d <= 0:
        raise ValueError("d must be positive")
    for t, c in cycle_type(p).counts:
        if c % power_cycle_divisor(t, d) != 0:
            return False
    return True


def dth_root(p: Perm, d: int) -> Perm | None:
    """A permutation whose d-th power is p, or None.

    Deterministic: for each cycle length t, the t-cycles are grouped in
    ascending order of their smallest moved point and each group of
    m_t cycles is interleaved into one (t * m_t)-cycle.
    """
    if not is_dth_power(p, d):
        return None
    root = list(range(len(p)))
    by_length: dict[int, list[list[int]]] = {}
    for cyc in sorted(cycles(p), key=min):
        by_length.setdefault(len(cyc), []).append(cyc)
    for t, cycs in by_length.items():
        m = power_cycle_divisor(t, d)
        for i in range(0, len(cycs), m):
            group = cycs[i : i + m]
            L = t * m
            big = [0] * L
            # position j + k*d (mod L) of the big cycle carries the k-th
            # point of group[j]; the d-th power then restores each cycle.
            for j in range(m):
                for k in range(t):
                    big[(j + k * d) % L] = group[j][k]
            for a, b in zip(big, big[1:] + big[:1]):
                root[a] = b
    root_t = tuple(root)
    assert power_of_permutation(root_t, d) == p
    return root_t


# ----------------------------------------------------------------------
# Moments of cycle counts
# ----------------------------------------------------------------------


def moments_exact(
    b: int, t: int, N: int, degree_cap: int = MOMENTS_DEGREE_CAP
) -> tuple[Fraction, Fraction]:
    """Exact (E[c_t(sigma^b)], E[c_t^2(sigma^b)]) for uniform sigma in S_N.

    Requires b | t.  Aggregates the full enumeration of S_N by conjugacy
    class (c_t of a power is a class function); the naive per-permutation
    path is `moments_exact_naive`.
    """
    if t % b != 0:
        raise HypothesisError("b divides t", f"b={b}, t={t}")
    if N > degree_cap:
        raise BudgetExceededError(f"degree {N} exceeds cap {degree_cap}")
    from .measures import _class_rep, _class_size, _partitions

    total1 = 0
    total2 = 0
    for lam in _partitions(N):
        size = _class_size(lam, N)
        rep = _class_rep(lam)
        c = cycle_type(power_of_permutation(rep, b)).count(t)
        total1 += size * c
        total2 += size * c * c
    fact = math.factorial(N)
    return Fraction(total1, fact), Fraction(total2, fact)


def moments_exact_naive(b: int, t: int, N: int) -> tuple[Fraction, Fraction]:
    """All-permutations oracle for moments_exact (small N only)."""
    if t % b != 0:
        raise HypothesisError("b divides t", f"b={b}, t={t}")
    total1 = 0
    total2 = 0
    for p in _all_perms(N):
        c = cycle_type(power_of_permutation(p, b)).count(t)
        total1 += c
        total2 += c * c
    fact = math.factorial(N)
    return Fraction(total1, fact), Fraction(total2, fact)


# ----------------------------------------------------------------------
# Word-level power obstruction
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ObstructionVerdict:
    word: str
    d: int
    witness_degree: int | None
    witness_tuple: tuple[Perm, ...] | None
    searched: tuple[int, ...]
    is_power_in_free_group: bool

    @property
    def conclusive(self) -> bool:
        return self.witness_degree is not None


def word_power_obstruction(
    w: Word,
    d: int,
    N_range: list[int],
    sample_budget: int = 10_000,
    seed: "int | str" = 0,
) -> ObstructionVerdict:
    """Search Hom(F_r, S_N) for an image of w that is not a d-th power.

    A witness proves w is not a d-th power (its image would have to be
    one); no witness is inconclusive from the S_N side.  The verdict also
    records the exact free-group answer from root extraction.
    """
    r = max(w.ambient_rank, 1)
    free_side = is_dth_power_in_free(w, d)
    for N in N_range:
        total = math.factorial(N) ** r
        if total <= OBSTRUCTION_EXHAUSTIVE_CAP:
            # whether the image is a d-th power is a class function of the
            # image, so the first coordinate ranges over class reps only
            from .measures import _class_rep, _partitions

            pool = _all_perms(N)
            reps = [_class_rep(lam) for lam in _partitions(N)]
            candidates = (
                (rep,) + rest
                for rep in reps
                for rest in itertools.product(pool, repeat=r - 1)
            )
        else:
            rng = random.Random(f"{seed}/{N}")
            base = list(range(N))

            def sample():
                for _ in range(sample_budget):
                    perms = []
                    for _ in range(r):
                        p = base[:]
                        rng.shuffle(p)
                        perms.append(tuple(p))
                    yield tuple(perms)

            candidates = sample()
        for perms in candidates:
            img = evaluate_word(w.with_rank(r), list(perms))
            if not is_dth_power(img, d):
                return ObstructionVerdict(
                    str(w), d, N, perms, tuple(N_range), free_side
                )
    return ObstructionVerdict(str(w), d, None, None, tuple(N_range), free_side)


# ----------------------------------------------------------------------
# Cycle-notation parsing and printing
# ----------------------------------------------------------------------


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse "(1 2 3)(4 5)" (1-based points; fixed points may be omitted)."""
    p = list(range(degree))
    text = text.strip()
    pos = 0
    seen: set[int] = set()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] != "(":
            raise ValueError(f"expected '(' at position {pos}")
        end = text.find(")", pos)
        if end < 0:
            raise ValueError("unbalanced parenthesis")
        pts = [int(tok) for tok in text[pos + 1 : end].replace(",", " ").split()]
        if any(not (1 <= q <= degree) for q in pts):
            raise ValueError("point out of range")
        if seen & set(pts) or len(set(pts)) != len(pts):
            raise ValueError("repeated point")
        seen |= set(pts)
        for a, bpt in zip(pts, pts[1:] + pts[:1]):
            p[a - 1] = bpt - 1
        pos = end + 1
    return tuple(p)


def format_cycles(p: Perm) -> str:
    parts = [
        "(" + " ".join(str(q + 1) for q in cyc) + ")"
        for cyc in cycles(p)
        if len(cyc) > 1
    ]
    return "".join(parts) if parts else "()"
