"""Prefix enumeration and the prefix metric on traces and words.

Prefixes of a finite trace are the order ideals of its dependence order.
They are enumerated as vertex bitmasks by adding one minimal vertex at a time.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .traces import MAX_VERTICES, AlphabetError, FiniteTrace, TraceError


@dataclass(frozen=True)
class PrefixAgreement:
    """Value of ``l_pref`` computed up to ``cap``.

    ``value is None`` means agreement holds through ``cap`` (reported as
    ``>=cap``).
    """

    value: int | None
    cap: int

    @property
    def saturated(self) -> bool:
        return self.value is None

    def as_int(self) -> int:
        return self.cap if self.value is None else self.value

    def __str__(self) -> str:
        return f">={self.cap}" if self.value is None else str(self.value)


AT_LEAST_CAP = None


def ideal_masks(t: FiniteTrace, n: int | None = None) -> list:
    """All downward-closed vertex sets of ``t`` with at most ``n`` elements."""
    if len(t) > MAX_VERTICES:
        raise TraceError(f"trace exceeds {MAX_VERTICES} vertices")
    if n is None:
        n = len(t)
    if n < 0:
        raise ValueError("size bound must be non-negative")
    down = t.down
    size = len(t)
    seen = {0}
    frontier = [0]
    for _ in range(min(n, size)):
        nxt = []
        for mask in frontier:
            for v in range(size):
                if not mask >> v & 1 and down[v] & ~mask == 0:
                    m = mask | (1 << v)
                    if m not in seen:
                        seen.add(m)
                        nxt.append(m)
        frontier = nxt
    return list(seen)


def enumerate_prefixes(t: FiniteTrace, n: int) -> set:
    """All traces ``r ⊑ t`` with ``|r| <= n``."""
    return {t.restrict(m) for m in ideal_masks(t, n)}


def _prefix_words_by_size(t: FiniteTrace, n: int) -> dict:
    by_size: dict = {}
    for m in ideal_masks(t, n):
        by_size.setdefault(bin(m).count("1"), set()).add(t.restrict(m).canonical_word)
    return by_size


def l_pref(s: FiniteTrace, t: FiniteTrace, cap: int) -> PrefixAgreement:
    if s.alphabet != t.alphabet:
        raise AlphabetError("traces over different alphabets")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    ps = _prefix_words_by_size(s, cap)
    pt = _prefix_words_by_size(t, cap)
    for size in range(1, cap + 1):
        if ps.get(size, set()) != pt.get(size, set()):
            return PrefixAgreement(size - 1, cap)
    return PrefixAgreement(AT_LEAST_CAP, cap)


def dyadic(agreement: PrefixAgreement):
    """``2^-l`` as an exact fraction, or the interval ``(0, 2^-cap)`` when the
    agreement is saturated."""
    if agreement.saturated:
        return (Fraction(0), Fraction(1, 2**agreement.cap))
    return Fraction(1, 2**agreement.value)


def d_pref(s: FiniteTrace, t: FiniteTrace, cap: int):
    return dyadic(l_pref(s, t, cap))


def format_distance(d) -> str:
    if isinstance(d, tuple):
        return f"<={d[1]}"
    return str(d)


def word_l_pref(u, v, cap: int) -> PrefixAgreement:
    """Length of the longest common prefix of two finite or UP words."""
    from .automata import UPWord

    def letter(x, i):
        if isinstance(x, UPWord):
            return x[i]
        return x[i] if i < len(x) else None

    if isinstance(u, UPWord) and isinstance(v, UPWord) and u == v:
        return PrefixAgreement(AT_LEAST_CAP, cap)
    for i in range(cap):
        a, b = letter(u, i), letter(v, i)
        if a != b:
            return PrefixAgreement(i, cap)
        if a is None:
            # both finite words ended together
            return PrefixAgreement(AT_LEAST_CAP, cap)
    return PrefixAgreement(AT_LEAST_CAP, cap)


def count_ideals(t: FiniteTrace) -> int:
    """Independent ideal counter: recursion on a minimal element ``m``.

    Ideals either avoid ``m`` (then they avoid everything above it) or contain
    it (then they are ``{m}`` plus an ideal of the rest).
    """
    full = (1 << len(t)) - 1
    memo: dict = {}

    def above(v, alive):
        return sum(1 << w for w in range(len(t)) if alive >> w & 1 and t.down[w] >> v & 1)

    def count(alive):
        if alive == 0:
            return 1
        if alive in memo:
            return memo[alive]
        m = next(v for v in range(len(t)) if alive >> v & 1 and t.down[v] & alive == 0)
        without = alive & ~(1 << m) & ~above(m, alive)
        total = count(without) + count(alive & ~(1 << m))
        memo[alive] = total
        return total

    return count(full)
