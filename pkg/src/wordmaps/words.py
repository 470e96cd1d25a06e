"""Freely reduced words in finitely generated free groups.

Generators are the letters a..z (at most 26), with uppercase denoting the
inverse of the corresponding lowercase letter.  A word literal supports
juxtaposition, parentheses, `^n` exponents (possibly negative) and the
commutator bracket `[u,v] = u v u^-1 v^-1`.  Whitespace is ignored.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import WordSyntaxError

MAX_RANK = 26
# Guard against `x^1000000000`-style blowups during parsing.
MAX_PARSED_LENGTH = 1_000_000

Letter = tuple[int, int]  # (generator index, 1-based; sign +1/-1)


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for g, s in letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """An immutable freely reduced word in F_r."""

    ambient_rank: int
    letters: tuple[Letter, ...] = field(default=())

    def __post_init__(self):
        if not (1 <= self.ambient_rank <= MAX_RANK):
            raise ValueError(f"ambient rank must be in 1..{MAX_RANK}")
        for g, s in self.letters:
            if not (1 <= g <= self.ambient_rank):
                raise ValueError(f"generator index {g} exceeds rank {self.ambient_rank}")
            if s not in (1, -1):
                raise ValueError("letter sign must be +1 or -1")
        for (g1, s1), (g2, s2) in zip(self.letters, self.letters[1:]):
            if g1 == g2 and s1 == -s2:
                raise ValueError("word is not freely reduced")

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(rank: int = 1) -> "Word":
        return Word(rank, ())

    @staticmethod
    def generator(index: int, rank: int | None = None) -> "Word":
        return Word(rank if rank is not None else index, ((index, 1),))

    # -- basic queries ------------------------------------------------

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def with_rank(self, rank: int) -> "Word":
        """The same word viewed inside a (possibly larger) free group."""
        return Word(rank, self.letters)

    # -- group operations ---------------------------------------------

    def __mul__(self, other: "Word") -> "Word":
        rank = max(self.ambient_rank, other.ambient_rank)
        return Word(rank, _reduce(self.letters + other.letters))

    def inverse(self) -> "Word":
        return Word(self.ambient_rank, tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, d: int) -> "Word":
        if d < 0:
            return self.inverse() ** (-d)
        out = Word.identity(self.ambient_rank)
        for _ in range(d):
            out = out * self
        return out

    def conjugate_by(self, c: "Word") -> "Word":
        """c * self * c^-1."""
        return c * self * c.inverse()

    # -- printing -----------------------------------------------------

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        chars = []
        for g, s in self.letters:
            ch = chr(ord("a") + g - 1)
            chars.append(ch if s == 1 else ch.upper())
        return "".join(chars)


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str | None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self) -> str:
        ch = self.peek()
        if ch is None:
            raise WordSyntaxError("unexpected end of input", self.pos)
        self.pos += 1
        return ch

    def expect(self, ch: str):
        got = self.peek()
        if got != ch:
            raise WordSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def parse_word(self) -> list[Letter]:
        out: list[Letter] = []
        while True:
            ch = self.peek()
            if ch is None or ch in ("]", ")", ","):
                return out
            out.extend(self.parse_term())

    def parse_term(self) -> list[Letter]:
        atom = self.parse_atom()
        if self.peek() == "^":
            self.take()
            n = self.parse_int()
            if abs(n) * len(atom) > MAX_PARSED_LENGTH:
                raise WordSyntaxError("exponent overflow", self.pos)
            if n < 0:
                atom = [(g, -s) for g, s in reversed(atom)]
                n = -n
            atom = list(itertools.chain.from_iterable([atom] * n))
        return atom

    def parse_atom(self) -> list[Letter]:
        pos = self.pos
        ch = self.take()
        if ch == "(":
            inner = self.parse_word()
            self.expect(")")
            return inner
        if ch == "[":
            u = self.parse_word()
            self.expect(",")
            v = self.parse_word()
            self.expect("]")
            ui = [(g, -s) for g, s in reversed(u)]
            vi = [(g, -s) for g, s in reversed(v)]
            return u + v + ui + vi
        if ch == "1":
            return []
        if ch.isalpha():
            if ch.islower():
                return [(ord(ch) - ord("a") + 1, 1)]
            return [(ord(ch.lower()) - ord("a") + 1, -1)]
        raise WordSyntaxError(f"unexpected character {ch!r}", pos)

    def parse_int(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        ch = self.peek()
        if ch is None or not ch.isdigit():
            raise WordSyntaxError("expected an integer exponent", self.pos)
        n = 0
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            n = 10 * n + int(self.text[self.pos])
            self.pos += 1
        return sign * n


def parse(text: str, ambient_rank: int | None = None) -> Word:
    """Parse a word literal into a freely reduced Word.

    With an explicit `ambient_rank`, letters map alphabetically (a=1 ..
    z=26) and must fit within the declared rank.  Without one, the
    distinct letters that occur are renumbered compactly (preserving
    alphabetical order), so e.g. "[x,y]" is a word in F_2.
    """
    p = _Parser(text)
    letters = p.parse_word()
    if p.peek() is not None:
        raise WordSyntaxError(f"unexpected character {p.peek()!r}", p.pos)
    if ambient_rank is None:
        remap = {g: i + 1 for i, g in enumerate(sorted({g for g, _ in letters}))}
        letters = [(remap[g], s) for g, s in letters]
        ambient_rank = max(len(remap), 1)
    else:
        used = max((g for g, _ in letters), default=0)
        if used > ambient_rank:
            raise WordSyntaxError(
                f"generator index {used} exceeds declared rank {ambient_rank}", 0
            )
    return Word(ambient_rank, _reduce(letters))


# ----------------------------------------------------------------------
# Structural operations
# ----------------------------------------------------------------------


def substitute(w: Word, images: Sequence[Word]) -> Word:
    """The image of w under the homomorphism x_i -> images[i-1].

    w must live in F_k with k == len(images); the images must all share an
    ambient rank (the maximum is taken).
    """
    if w.ambient_rank != len(images):
        raise ValueError(
            f"arity mismatch: word has rank {w.ambient_rank}, got {len(images)} images"
        )
    rank = max((im.ambient_rank for im in images), default=1)
    out: list[Letter] = []
    for g, s in w.letters:
        im = images[g - 1].letters
        out.extend(im if s == 1 else [(h, -t) for h, t in reversed(im)])
    return Word(rank, _reduce(out))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Write w = c * core * c^-1 with core cyclically reduced."""
    letters = list(w.letters)
    conj: list[Letter] = []
    while len(letters) >= 2 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
        conj.append(letters[0])
        letters = letters[1:-1]
    return Word(w.ambient_rank, tuple(letters)), Word(w.ambient_rank, tuple(conj))


def _smallest_period(seq: Sequence[Letter]) -> int:
    # failure-function (KMP) smallest period; falls back to the full length
    # when the candidate does not divide it.
    n = len(seq)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k > 0 and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    p = n - fail[n - 1]
    return p if n % p == 0 else n


def maximal_root(w: Word) -> tuple[Word, int]:
    """Write w = u^b with u not a proper power (b maximal)."""
    if w.is_identity:
        raise ValueError("the identity word has no maximal root")
    core, conj = cyclic_reduce(w)
    p = _smallest_period(core.letters)
    b = len(core) // p
    u = Word(w.ambient_rank, core.letters[:p]).conjugate_by(conj)
    return u, b


def is_dth_power_in_free(w: Word, d: int) -> bool:
    """True iff w = v^d for some v in the ambient free group."""
    if d <= 0:
        raise ValueError("d must be positive")
    if w.is_identity:
        return True
    _, b = maximal_root(w)
    return b % d == 0


# ----------------------------------------------------------------------
# Whitehead moves
# ----------------------------------------------------------------------

# Codes for how a type-II move treats a generator x (with multiplier a):
#   0: x -> x    1: x -> x a    2: x -> a^-1 x    3: x -> a^-1 x a
_MULT_CODES = (0, 1, 2, 3)


@dataclass(frozen=True)
class WhiteheadMove:
    """A Whitehead automorphism of F_rank.

    kind "perm": a signed permutation of the basis (type I);
    kind "mult": a multiplier letter a and a per-generator code (type II).
    """

    rank: int
    kind: str
    perm: tuple[int, ...] | None = None  # 0-based images of generator indices
    signs: tuple[int, ...] | None = None
    multiplier: Letter | None = None
    codes: tuple[int, ...] | None = None

    def images(self) -> tuple[Word, ...]:
        r = self.rank
        if self.kind == "perm":
            assert self.perm is not None and self.signs is not None
            return tuple(
                Word(r, ((self.perm[i] + 1, self.signs[i]),)) for i in range(r)
            )
        assert self.multiplier is not None and self.codes is not None
        a = Word(r, (self.multiplier,))
        ai = a.inverse()
        out = []
        for i in range(r):
            x = Word(r, ((i + 1, 1),))
            if i + 1 == self.multiplier[0]:
                out.append(x)
                continue
            c = self.codes[i]
            if c == 1:
                x = x * a
            elif c == 2:
                x = ai * x
            elif c == 3:
                x = ai * x * a
            out.append(x)
        return tuple(out)

    def apply(self, w: Word) -> Word:
        if w.ambient_rank > self.rank:
            raise ValueError(
                f"move is defined on rank {self.rank}, word has rank {w.ambient_rank}"
            )
        return substitute(w.with_rank(self.rank), self.images())


def apply_whitehead(move: WhiteheadMove, w: Word) -> Word:
    return move.apply(w)


def enumerate_whitehead_moves(rank: int) -> list[WhiteheadMove]:
    """All type-I signed permutations and all type-II multiplier moves."""
    moves: list[WhiteheadMove] = []
    for perm in itertools.permutations(range(rank)):
        for signs in itertools.product((1, -1), repeat=rank):
            moves.append(WhiteheadMove(rank, "perm", perm=perm, signs=tuple(signs)))
    for g in range(1, rank + 1):
        for s in (1, -1):
            positions = [i for i in range(rank) if i + 1 != g]
            for assignment in itertools.product(_MULT_CODES, repeat=len(positions)):
                codes = [0] * rank
                for i, c in zip(positions, assignment):
                    codes[i] = c
                moves.append(
                    WhiteheadMove(rank, "mult", multiplier=(g, s), codes=tuple(codes))
                )
    return moves
