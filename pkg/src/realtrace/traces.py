"""Dependence alphabets and finite Mazurkiewicz traces.

A finite trace is stored as a labeled DAG over the positions of one of its
linearizations.  For every vertex we keep the bitmask of its strict
predecessors in the dependence order, which makes prefix (order ideal)
computations cheap.  Equality is decided on the lexicographic normal form.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

MAX_VERTICES = 64

Word = tuple  # tuple of letter symbols


class AlphabetError(ValueError):
    pass


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class DependenceAlphabet:
    """Finite alphabet with a reflexive, symmetric dependence relation.

    ``letters`` keeps declaration order, which is also the order used by the
    lexicographic normal form.
    """

    letters: tuple
    depend: frozenset
    allow_isolated: bool = False
    _index: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        self._index.update({a: i for i, a in enumerate(self.letters)})

    def __contains__(self, letter) -> bool:
        return letter in self._index

    def index(self, letter) -> int:
        return self._index[letter]

    def dependent(self, a, b) -> bool:
        return (a, b) in self.depend

    def independent(self, a, b) -> bool:
        return (a, b) not in self.depend

    @cached_property
    def independence(self) -> frozenset:
        return frozenset(
            (a, b) for a in self.letters for b in self.letters if (a, b) not in self.depend
        )

    def isolated_letters(self) -> list:
        return [
            a
            for a in self.letters
            if all(not self.dependent(a, b) for b in self.letters if b != a)
        ]

    def check_word(self, word: Iterable) -> Word:
        word = tuple(word)
        for a in word:
            if a not in self._index:
                raise AlphabetError(f"unknown letter {a!r}")
        return word

    def parse_word(self, text: str) -> Word:
        """Split ``text`` into letters.

        Whitespace-separated tokens are taken as letters; otherwise the string
        is tokenized by longest match against the alphabet (so ``0'`` is one
        letter when it is declared).
        """
        return tokenize(text, self.letters)

    def format_word(self, word: Sequence) -> str:
        return format_word(word, self.letters)


def validate_alphabet(letters, depend_pairs=(), allow_isolated=False) -> DependenceAlphabet:
    letters = tuple(letters)
    if not letters:
        raise AlphabetError("alphabet must contain at least one letter")
    seen = set()
    for a in letters:
        if a in seen:
            raise AlphabetError(f"duplicate letter {a!r}")
        seen.add(a)
    depend = {(a, a) for a in letters}
    for a, b in depend_pairs:
        for x in (a, b):
            if x not in seen:
                raise AlphabetError(f"dependence pair names unknown letter {x!r}")
        depend.add((a, b))
        depend.add((b, a))
    da = DependenceAlphabet(letters, frozenset(depend), allow_isolated)
    if not allow_isolated:
        isolated = da.isolated_letters()
        if isolated:
            raise AlphabetError(f"isolated letter(s): {', '.join(map(str, isolated))}")
    return da


def tokenize(text: str, letters: Sequence) -> Word:
    text = text.strip()
    if not text or text in ("ε", "eps", "-"):
        return ()
    if any(ch.isspace() for ch in text):
        return tuple(text.split())
    by_length = sorted(letters, key=len, reverse=True)
    out = []
    i = 0
    while i < len(text):
        for a in by_length:
            if text.startswith(a, i):
                out.append(a)
                i += len(a)
                break
        else:
            raise AlphabetError(f"cannot read a letter at {text[i:]!r}")
    return tuple(out)


def format_word(word: Sequence, letters: Sequence = ()) -> str:
    if not word:
        return "ε"
    if all(len(a) == 1 for a in letters) and all(len(a) == 1 for a in word):
        return "".join(word)
    # multi-character letters such as 0' concatenate unambiguously as long as
    # no letter is a prefix of another; fall back to spaces otherwise
    if not any(a != b and b.startswith(a) for a in letters for b in letters):
        return "".join(word)
    return " ".join(word)


class FiniteTrace:
    """A finite dependence graph ``[V, E, λ]``.

    Vertices are numbered along a linearization; ``down[v]`` is the bitmask of
    the strict predecessors of ``v``.  Instances are immutable.
    """

    __slots__ = ("alphabet", "labels", "down", "__dict__")

    def __init__(self, alphabet: DependenceAlphabet, labels: Word, down: tuple):
        if len(labels) > MAX_VERTICES:
            raise TraceError(f"trace has {len(labels)} vertices, limit is {MAX_VERTICES}")
        self.alphabet = alphabet
        self.labels = labels
        self.down = down

    @classmethod
    def empty(cls, alphabet: DependenceAlphabet) -> "FiniteTrace":
        return cls(alphabet, (), ())

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def vertices(self) -> range:
        return range(len(self.labels))

    @cached_property
    def edges(self) -> frozenset:
        """Hasse-reduced covering pairs ``(v, w)`` of the dependence order."""
        out = set()
        for w, mask in enumerate(self.down):
            covered = 0
            for v in _bits(mask):
                covered |= self.down[v]
            for v in _bits(mask & ~covered):
                out.add((v, w))
        return frozenset(out)

    @cached_property
    def canonical_word(self) -> Word:
        return lex_normal_form(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteTrace):
            return NotImplemented
        return self.alphabet == other.alphabet and self.canonical_word == other.canonical_word

    def __hash__(self) -> int:
        return hash(self.canonical_word)

    def __repr__(self) -> str:
        return f"FiniteTrace({self.alphabet.format_word(self.canonical_word)!r})"

    def __str__(self) -> str:
        return self.alphabet.format_word(self.canonical_word)

    def __mul__(self, other: "FiniteTrace") -> "FiniteTrace":
        return concat(self, other)

    def precedes(self, v: int, w: int) -> bool:
        return bool(self.down[w] >> v & 1)

    def minimal_vertices(self, removed: int = 0) -> list:
        """Vertices not in ``removed`` all of whose predecessors are in it."""
        return [
            v
            for v in range(len(self.labels))
            if not removed >> v & 1 and self.down[v] & ~removed == 0
        ]

    def is_ideal(self, mask: int) -> bool:
        return all(self.down[v] & ~mask == 0 for v in _bits(mask))

    def restrict(self, mask: int) -> "FiniteTrace":
        """Induced subgraph on the vertices in ``mask``, renumbered."""
        keep = list(_bits(mask))
        pos = {v: i for i, v in enumerate(keep)}
        labels = tuple(self.labels[v] for v in keep)
        down = tuple(
            sum(1 << pos[u] for u in _bits(self.down[v] & mask)) for v in keep
        )
        return FiniteTrace(self.alphabet, labels, down)

    def check_condition(self) -> bool:
        """Dependent labels are comparable, every covering edge joins
        dependent labels, and the order is irreflexive."""
        for v, w in combinations(range(len(self.labels)), 2):
            if self.alphabet.dependent(self.labels[v], self.labels[w]):
                if not (self.precedes(v, w) or self.precedes(w, v)):
                    return False
        for v, w in self.edges:
            if not self.alphabet.dependent(self.labels[v], self.labels[w]):
                return False
        return all(not self.precedes(v, v) for v in self.vertices)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def phi_word(da: DependenceAlphabet, word: Iterable) -> FiniteTrace:
    """The trace of a finite word: one vertex per position, ``i < j`` joined
    when their letters are dependent."""
    word = da.check_word(word)
    if len(word) > MAX_VERTICES:
        raise TraceError(f"word has {len(word)} letters, limit is {MAX_VERTICES}")
    last = {}
    down = []
    for j, a in enumerate(word):
        mask = 0
        for b, i in last.items():
            if da.dependent(a, b):
                mask |= down[i] | (1 << i)
        down.append(mask)
        last[a] = j
    return FiniteTrace(da, word, tuple(down))


def concat(t1: FiniteTrace, t2: FiniteTrace) -> FiniteTrace:
    """Disjoint union plus an edge from each vertex of ``t1`` to each
    dependent-lettered vertex of ``t2``."""
    if t1.alphabet != t2.alphabet:
        raise AlphabetError("cannot concatenate traces over different alphabets")
    da = t1.alphabet
    n = len(t1)
    down = list(t1.down)
    for w, b in enumerate(t2.labels):
        mask = t2.down[w] << n
        for v, a in enumerate(t1.labels):
            if da.dependent(a, b):
                mask |= (1 << v) | t1.down[v]
        down.append(mask)
    return FiniteTrace(da, t1.labels + t2.labels, tuple(down))


def lex_normal_form(t: FiniteTrace) -> Word:
    """Lexicographically least linearization of ``t``.

    Greedy: repeatedly emit the minimal vertex with the smallest letter.  Two
    minimal vertices never share a letter (equal letters are dependent), so
    the choice is unique.
    """
    da = t.alphabet
    n = len(t.labels)
    indegree = [0] * n
    succ = [[] for _ in range(n)]
    for v, w in t.edges:
        indegree[w] += 1
        succ[v].append(w)
    heap = [(da.index(t.labels[v]), v) for v in range(n) if indegree[v] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, v = heapq.heappop(heap)
        out.append(t.labels[v])
        for w in succ[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                heapq.heappush(heap, (da.index(t.labels[w]), w))
    return tuple(out)


def foata_normal_form(t: FiniteTrace) -> list:
    """Maximal-step factorization; each step is a tuple of pairwise
    independent letters sorted by letter order."""
    da = t.alphabet
    removed = 0
    steps = []
    while removed != (1 << len(t)) - 1:
        step = t.minimal_vertices(removed)
        for v in step:
            removed |= 1 << v
        steps.append(tuple(sorted((t.labels[v] for v in step), key=da.index)))
    return steps


def alph(t: FiniteTrace) -> frozenset:
    return frozenset(t.labels)


def length(t: FiniteTrace) -> int:
    return len(t.labels)


def equivalent(da: DependenceAlphabet, u: Iterable, v: Iterable) -> bool:
    return phi_word(da, u) == phi_word(da, v)


def is_prefix(s: FiniteTrace, t: FiniteTrace):
    """Return the unique ``z`` with ``s·z = t``, or ``None`` if ``s ⋢ t``.

    Reads a linearization of ``s`` and removes, letter by letter, the first
    unremoved occurrence of that letter in ``t``; it must be minimal in what
    remains.
    """
    if s.alphabet != t.alphabet:
        raise AlphabetError("traces over different alphabets")
    removed = 0
    for a in s.canonical_word:
        for v, b in enumerate(t.labels):
            if b == a and not removed >> v & 1:
                break
        else:
            return None
        if t.down[v] & ~removed:
            return None
        removed |= 1 << v
    rest = ((1 << len(t)) - 1) & ~removed
    return t.restrict(rest)
