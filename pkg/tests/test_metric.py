from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realtrace.automata import UPWord
from realtrace.battery import da3, swap_closure
from realtrace.metric import (
    count_ideals,
    d_pref,
    enumerate_prefixes,
    format_distance,
    l_pref,
    word_l_pref,
)
from realtrace.traces import FiniteTrace, phi_word

words3 = st.lists(st.sampled_from("abc"), max_size=8).map(tuple)


def brute_prefix_words(da, word, n):
    """Normal forms of trace prefixes of size <= n, read off linearizations."""
    out = set()
    for w in swap_closure(da, word):
        for i in range(min(n, len(w)) + 1):
            out.add(min(swap_closure(da, w[:i])))
    return out


def brute_l_pref(da, u, v, cap):
    for n in range(1, cap + 1):
        if brute_prefix_words(da, u, n) != brute_prefix_words(da, v, n):
            return n - 1
    return None


class TestEnumeratePrefixes:
    def test_chain(self, da):
        got = enumerate_prefixes(phi_word(da, "abc"), 2)
        assert got == {phi_word(da, ""), phi_word(da, "a"), phi_word(da, "ab")}

    def test_two_minimal(self, da):
        got = enumerate_prefixes(phi_word(da, "acb"), 1)
        assert got == {phi_word(da, ""), phi_word(da, "a"), phi_word(da, "c")}

    def test_empty(self, da):
        assert enumerate_prefixes(FiniteTrace.empty(da), 5) == {FiniteTrace.empty(da)}

    @settings(max_examples=150)
    @given(words3)
    def test_count_matches_independent_counter(self, w):
        t = phi_word(da3(), w)
        assert len(enumerate_prefixes(t, len(t))) == count_ideals(t)

    @settings(max_examples=100)
    @given(words3, st.integers(0, 8))
    def test_matches_linearizations(self, w, n):
        da = da3()
        got = {p.canonical_word for p in enumerate_prefixes(phi_word(da, w), n)}
        assert got == brute_prefix_words(da, w, n)


class TestLPref:
    def test_examples(self, da):
        assert l_pref(phi_word(da, "aba"), phi_word(da, "abb"), 8).value == 2
        assert l_pref(phi_word(da, "a"), phi_word(da, "c"), 8).value == 0
        t = phi_word(da, "abcab")
        assert l_pref(t, t, 8).saturated

    def test_d_pref_examples(self, da):
        assert d_pref(phi_word(da, "aba"), phi_word(da, "abb"), 8) == Fraction(1, 4)
        assert d_pref(phi_word(da, "a"), phi_word(da, "c"), 8) == Fraction(1)
        t = phi_word(da, "ab")
        assert d_pref(t, t, 8) == (Fraction(0), Fraction(1, 256))
        assert format_distance(d_pref(t, t, 8)) == "<=1/256"

    def test_bad_cap(self, da):
        with pytest.raises(ValueError):
            l_pref(phi_word(da, "a"), phi_word(da, "a"), 0)

    @settings(max_examples=80)
    @given(words3, words3)
    def test_matches_brute_force(self, u, v):
        da = da3()
        got = l_pref(phi_word(da, u), phi_word(da, v), 6)
        assert got.value == brute_l_pref(da, u, v, 6)

    @settings(max_examples=150)
    @given(words3, words3, words3)
    def test_ultrametric_and_symmetry(self, u, v, w):
        da = da3()
        s, t, r = (phi_word(da, x) for x in (u, v, w))
        assert l_pref(s, t, 8) == l_pref(t, s, 8)
        assert min(l_pref(s, t, 8).as_int(), l_pref(t, r, 8).as_int()) <= l_pref(s, r, 8).as_int()

    @given(words3, words3)
    def test_identity(self, u, v):
        da = da3()
        s, t = phi_word(da, u), phi_word(da, v)
        cap = max(len(s), len(t), 1)
        assert l_pref(s, t, cap).saturated == (s == t)


class TestWordLPref:
    def test_examples(self):
        assert word_l_pref(UPWord("0", "1"), UPWord("0", "0"), 8).value == 1
        assert word_l_pref(UPWord("", "01"), UPWord("0", "10"), 100).saturated
        assert word_l_pref(("0", "1"), ("0", "1"), 5).saturated
        assert word_l_pref(("0", "1"), ("0",), 5).value == 1

    def test_up_vs_finite(self):
        assert word_l_pref(UPWord("", "01"), tuple("010"), 8).value == 3

    @pytest.mark.parametrize("u, v", list(product(["", "0", "01"], ["1", "10", "011"])))
    def test_up_agrees_with_prefix_scan(self, u, v):
        x, y = UPWord(u, v), UPWord(v, u or "0")
        n = next((i for i in range(40) if x[i] != y[i]), None)
        got = word_l_pref(x, y, 40)
        assert got.value == n
