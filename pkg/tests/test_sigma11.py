import random
from itertools import product

import pytest

from realtrace.automata import BuchiAutomaton, UPWord, buchi_accepts, buchi_nonempty
from realtrace.battery import bounded_branch_search, random_buchi, random_regular_tree, random_tree
from realtrace.metric import l_pref
from realtrace.sigma11 import (
    FiniteTree,
    RegularTree,
    TreeError,
    block_order,
    build_L_automaton,
    build_setup,
    check_lemma_finite,
    g_code,
    h_trunc,
    interleave,
    modulus_check,
    modulus_cap,
    path_exists,
    project_sigma,
    sigma_cut,
    witness_sigma,
)
from realtrace.traces import phi_word

P0, P1 = "0'", "1'"


@pytest.fixture
def tree():
    """t(ε)=0, t(l)=1, t(r)=0, level 2 all 1."""
    return FiniteTree.from_levels([["0"], ["1", "0"], ["1"] * 4])


@pytest.fixture
def L(setup, R):
    return build_L_automaton(setup, R)


def parity_tree():
    return RegularTree(("e", "o"), "e", {("e", "l"): "o", ("e", "r"): "o", ("o", "l"): "e", ("o", "r"): "e"}, {"e": "0", "o": "1"})


def starts_with_one():
    """``1·Σ^ω``: a leading 0 is dead."""
    return BuchiAutomaton.build("01", ["s", "t"], ["s"], ["t"], [("s", "1", "t"), ("t", "0", "t"), ("t", "1", "t")])


class TestSetup:
    def test_independence(self, setup):
        da = setup.da
        assert da.independent("0", "A")
        assert da.independent("1", P0) and da.independent(P1, "B")
        assert da.dependent("A", "B")
        assert da.dependent("0", "1") and da.dependent("0", "B")
        assert da.dependent(P0, P1) and da.dependent(P0, "A")

    def test_errors(self):
        with pytest.raises(TreeError):
            build_setup(["0"])
        with pytest.raises(TreeError):
            build_setup(["0", "A"])

    def test_separators(self, setup):
        assert [setup.separator(n) for n in range(4)] == ["A", "B", "A", "B"]


class TestCode:
    def test_example(self, setup, tree):
        assert g_code(setup, tree) == (P0, "A", "1", "0", "B", P1, P1, P1, P1, "A")

    def test_depth0(self, setup):
        assert g_code(setup, FiniteTree.constant(0, "1")) == (P1, "A")
        assert h_trunc(setup, FiniteTree.constant(0, "1")) == phi_word(setup.da, (P1, "A"))

    def test_commuted_reordering(self, setup, tree):
        moved = ("1", P0, "A", "0", "B", P1, P1, P1, P1, "A")
        assert h_trunc(setup, tree) == phi_word(setup.da, moved)

    def test_block_order(self):
        assert block_order(1) == ["l", "r"]
        assert block_order(2) == ["rr", "rl", "lr", "ll"]

    def test_level_invariants(self, setup):
        rng = random.Random(1)
        for depth in range(5):
            t = random_tree(rng, depth)
            word = g_code(setup, t)
            seps = [i for i, a in enumerate(word) if a in ("A", "B")]
            assert len(seps) == depth + 1
            starts = [0] + [i + 1 for i in seps[:-1]]
            for n, (s, e) in enumerate(zip(starts, seps)):
                block = word[s:e]
                assert len(block) == 2**n
                assert word[e] == ("A" if n % 2 == 0 else "B")
                assert all((a in setup.primed) == (n % 2 == 0) for a in block)
                expected = [t(x) for x in block_order(n)]
                assert [setup.unprime(a) if a in setup.primed else a for a in block] == expected

    def test_levels_differ_only_beyond_prefix(self, setup):
        t = FiniteTree.constant(3, "0")
        s = FiniteTree.from_levels([t.level(0), t.level(1), t.level(2), ["1"] * 8])
        assert not l_pref(h_trunc(setup, t), h_trunc(setup, s), 100).saturated


class TestModulus:
    def test_caps(self):
        assert modulus_cap(2) == 2 and modulus_cap(3) == 5

    @pytest.mark.parametrize("k", [2, 3])
    def test_random_pairs(self, setup, k):
        rng = random.Random(k)
        for _ in range(30):
            t = random_tree(rng, k + 1)
            s = random_tree(rng, k + 1)
            s = FiniteTree.from_levels([t.level(n) for n in range(k)] + [s.level(n) for n in range(k, k + 2)])
            assert modulus_check(setup, t, s, k)

    def test_equal_trees(self, setup):
        t = FiniteTree.constant(4, "1")
        assert modulus_check(setup, t, t, 3)

    def test_bound_is_not_vacuous(self, setup):
        # some pair agreeing below level k disagrees just past the cap
        rng = random.Random(0)
        k = 2
        hits = 0
        for _ in range(50):
            t, s = random_tree(rng, k + 1), random_tree(rng, k + 1)
            s = FiniteTree.from_levels([t.level(n) for n in range(k)] + [s.level(n) for n in range(k, k + 2)])
            hits += not l_pref(h_trunc(setup, t), h_trunc(setup, s), modulus_cap(k) + 3).saturated
        assert hits

    def test_preconditions(self, setup):
        t = FiniteTree.constant(3, "0")
        with pytest.raises(TreeError):
            modulus_check(setup, t, t, 1)
        with pytest.raises(TreeError):
            modulus_check(setup, FiniteTree.constant(2, "0"), t, 2)
        with pytest.raises(TreeError):
            modulus_check(setup, t, FiniteTree.constant(3, "1"), 2)


class TestLAutomaton:
    def test_examples(self, setup, L):
        assert buchi_accepts(L, UPWord((), (P1, "A", "1", "B")))
        assert not buchi_accepts(L, UPWord((), (P0, "A", "0", "B")))
        assert not L.is_live(("A",))

    def test_rejects_unfinished_blocks(self, setup, L):
        # an endless W-block never reaches the next x letter
        assert not buchi_accepts(L, UPWord((P1,), (P1, "1", "1")))

    def test_nonempty_blocks(self, setup, L):
        # x(1)=1', W1 = 0' 1 0, then x(2)=1, W2 = 0 1' 0', then x(3)=1'
        x = UPWord((), (P1, P0, "1", "0", "A", "1", "0", P1, P0, "B"))
        assert buchi_accepts(L, x)
        assert project_sigma(setup, x) == UPWord((), ("1",))

    def test_projection_of_witnesses(self, setup):
        rng = random.Random(12)
        for _ in range(30):
            R = random_buchi(rng, max_states=3, max_letters=2)
            R = BuchiAutomaton.build("01", R.states, R.initial, R.accepting, R.transitions)
            w = buchi_nonempty(build_L_automaton(setup, R))
            assert (w is None) == (buchi_nonempty(R) is None)
            if w is not None:
                assert buchi_accepts(R, project_sigma(setup, w))

    def test_bad_alphabet(self, setup):
        R = BuchiAutomaton.build("0x", ["p"], ["p"], ["p"], [("p", "x", "p")])
        with pytest.raises(TreeError):
            build_L_automaton(setup, R)


class TestPaths:
    def test_constant_one(self, R):
        branch = path_exists(RegularTree.constant("1"), R)
        assert branch is not None
        assert buchi_accepts(R, RegularTree.constant("1").labels_along(branch))

    def test_constant_zero(self, R):
        assert path_exists(RegularTree.constant("0"), R) is None

    def test_parity(self, R):
        t = parity_tree()
        branch = path_exists(t, R)
        assert branch is not None
        assert t.labels_along(branch) == UPWord((), ("0", "1"))

    def test_against_bounded_search(self):
        rng = random.Random(21)
        for _ in range(60):
            t = random_regular_tree(rng)
            R = random_buchi(rng, max_states=2, max_letters=2)
            R = BuchiAutomaton.build("01", R.states, R.initial, R.accepting, R.transitions)
            found = path_exists(t, R)
            bounded = bounded_branch_search(t, R)
            # product has at most 6 nodes, so a short lasso exists whenever any does
            assert (found is None) == (bounded is None)


class TestWitness:
    def test_example(self, setup, tree):
        assert witness_sigma(setup, tree, "rr", 2) == (P0, "A", "1", "0", "B", P1, P1, P1, P1)
        cut = sigma_cut(setup, tree, "rr", 2)
        assert cut.v[1] == ("1",) and cut.u[1] == () and cut.u[2] == (P1, P1, P1)

    def test_depth0(self, setup, tree):
        assert witness_sigma(setup, tree, "", 0) == (P0,)
        assert witness_sigma(setup, tree, "lr", 0) == (P0,)

    def test_block_discipline(self, setup):
        rng = random.Random(8)
        t = random_tree(rng, 4)
        for branch in ("".join(p) for p in product("lr", repeat=4)):
            cut = sigma_cut(setup, t, branch, 4)
            assert len(cut.v[1]) in (0, 1)
            for i in range(1, 5):
                assert len(cut.v[i]) in (2 * len(cut.u[i - 1]), 2 * len(cut.u[i - 1]) + 1)
                # parity of |v| picks the direction
                right = branch[i - 1] == "r"
                assert (len(cut.v[i]) % 2 == 1) == (right if i % 2 == 1 else not right)

    def test_interleave(self):
        assert interleave(["u"], ["a", "b", "c"]) == ["u", "a", "b", "c"]
        assert interleave(["u", "w"], ["a", "b", "c", "d"]) == ["u", "a", "b", "w", "c", "d"]
        with pytest.raises(TreeError):
            interleave(["u"], ["a"])

    def test_short_branch(self, setup, tree):
        with pytest.raises(TreeError):
            witness_sigma(setup, tree, "r", 2)
        with pytest.raises(TreeError):
            witness_sigma(setup, tree, "rx", 2)


class TestCheckLemma:
    def test_example(self, setup, tree, R, L):
        assert check_lemma_finite(setup, tree, "rr", R, 2, L)

    def test_dead_start(self, setup):
        assert not check_lemma_finite(setup, FiniteTree.constant(2, "0"), "ll", starts_with_one(), 2)

    def test_constant_zero_is_live_but_has_no_path(self, setup, R, L):
        # a finite prefix of zeros can still be extended into (0*1)^ω
        assert check_lemma_finite(setup, FiniteTree.constant(2, "0"), "ll", R, 2, L)
        assert path_exists(RegularTree.constant("0"), R) is None

    def test_k0(self, setup, tree, R, L):
        assert check_lemma_finite(setup, tree, "", R, 0, L)

    def test_exhaustive_depth2(self, setup, R, L):
        for labels in product("01", repeat=7):
            t = FiniteTree.from_levels([labels[:1], labels[1:3], labels[3:]])
            for branch in ("ll", "lr", "rl", "rr"):
                sigma = witness_sigma(setup, t, branch, 2) + ("A",)
                assert phi_word(setup.da, sigma) == h_trunc(setup, t)
                assert check_lemma_finite(setup, t, branch, R, 2, L)
                assert not check_lemma_finite(setup, t, branch, starts_with_one(), 2) or labels[0] == "1"
