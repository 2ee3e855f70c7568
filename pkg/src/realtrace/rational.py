"""Rational languages of infinite traces as finite unions ``φ(U)·φ(V)^ω``,
the enumeration of a trace language, and the concatenation map ``H`` over
index sequences."""
from __future__ import annotations

import threading
from dataclasses import dataclass

from .automata import BuchiAutomaton, FiniteAutomaton, decompose_monoalphabetic, letter_sets_upto
from .metric import enumerate_prefixes
from .traces import AlphabetError, DependenceAlphabet, FiniteTrace, concat, phi_word


@dataclass(frozen=True)
class RationalTraceLanguage:
    alphabet: DependenceAlphabet
    components: tuple

    def __len__(self) -> int:
        return len(self.components)

    def describe(self) -> list:
        """One line per component: the letter sets and shortest witnesses."""
        fmt = self.alphabet.format_word
        lines = []
        for i, c in enumerate(self.components):
            u = next(c.U.words(64), None)
            v = next((w for w in c.V.words(64) if w), None)
            lines.append(
                f"component {i}: state={c.state} "
                f"alph_U={{{','.join(sorted(c.alph_U, key=self.alphabet.index))}}} "
                f"alph_V={{{','.join(sorted(c.alph_V, key=self.alphabet.index))}}} "
                f"U∋{fmt(u)} V∋{fmt(v)}"
            )
        return lines


def from_buchi(da: DependenceAlphabet, A: BuchiAutomaton) -> RationalTraceLanguage:
    for a in A.alphabet:
        if a not in da:
            raise AlphabetError(f"automaton letter {a!r} not in the dependence alphabet")
    return RationalTraceLanguage(da, tuple(decompose_monoalphabetic(A)))


class TraceEnumeration:
    """Bijective enumeration of the distinct traces of ``φ(L(source))``.

    Order is length first, then lexicographic normal form.  The table grows
    lazily, one word length at a time; growth is serialized by a lock so the
    enumeration can be shared between threads.
    """

    def __init__(self, da: DependenceAlphabet, source: FiniteAutomaton):
        for a in source.alphabet:
            if a not in da:
                raise AlphabetError(f"automaton letter {a!r} not in the dependence alphabet")
        self.da = da
        self.source = source.trim()
        self.finite = self.source.is_finite_language()
        self._max_len = len(self.source.states)  # longest word if finite
        self._table: list = []
        self._next_length = 0
        self._lock = threading.Lock()

    def _extend(self) -> bool:
        n = self._next_length
        if self.finite and n > self._max_len:
            return False
        traces = {}
        for w in self.source.words_of_length(n):
            t = phi_word(self.da, w)
            traces.setdefault(t.canonical_word, t)
        order = sorted(traces, key=lambda w: [self.da.index(a) for a in w])
        self._table.extend(traces[w] for w in order)
        self._next_length = n + 1
        return True

    def _ensure(self, i: int) -> None:
        with self._lock:
            while len(self._table) <= i:
                if not self._extend():
                    raise IndexError(f"index {i} out of range: language has {len(self._table)} traces")

    def __getitem__(self, i: int) -> FiniteTrace:
        if i < 0:
            raise IndexError("index must be non-negative")
        if i >= len(self._table):
            self._ensure(i)
        return self._table[i]

    def __len__(self) -> int:
        if not self.finite:
            raise TypeError("infinite enumeration has no length")
        with self._lock:
            while self._extend():
                pass
        return len(self._table)

    def is_monoalphabetic(self, sample: int | None = None) -> bool:
        """Every accepted word has the same letter set.

        Exact: every reachable (state, letter set) pair of the product is hit
        by some word no longer than the product's size.
        """
        bound = sample if sample is not None else len(self.source.states) * 2 ** len(self.source.alphabet)
        return len(letter_sets_upto(self.source, bound)) <= 1


def enumerate_S(e: TraceEnumeration, i: int) -> FiniteTrace:
    return e[i]


def h_map_prefix(e: TraceEnumeration, indices) -> FiniteTrace:
    """``ψ(n₁)·ψ(n₂)·…·ψ(n_m)``."""
    out = FiniteTrace.empty(e.da)
    for i in indices:
        out = concat(out, e[i])
    return out


def h_continuity_check(e: TraceEnumeration, N, M, k: int, require_monoalphabetic: bool = True) -> bool:
    """Do ``H(N)`` and ``H(M)`` have the same prefixes of size ``<= k``?

    ``N`` and ``M`` must agree on their first ``k`` entries and have at least
    ``k + 1`` entries each.  With ``require_monoalphabetic=False`` the check
    runs on any ``S``; used to exhibit why the hypothesis is needed.
    """
    N, M = list(N), list(M)
    if k < 0 or len(N) < k + 1 or len(M) < k + 1:
        raise ValueError("index sequences need at least k+1 entries")
    if N[:k] != M[:k]:
        raise ValueError("index sequences must agree on their first k entries")
    if require_monoalphabetic and not e.is_monoalphabetic():
        raise ValueError("S is not monoalphabetic")
    left = enumerate_prefixes(h_map_prefix(e, N), k)
    right = enumerate_prefixes(h_map_prefix(e, M), k)
    return left == right
