"""Seeded acceptance battery.

Each ``criterion_*`` function runs one suite and returns a
:class:`CheckResult`.  Everything is a deterministic function of the seed,
so reports are byte-identical across runs.
"""
from __future__ import annotations

import hashlib
import random
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .automata import (
    BuchiAutomaton,
    FiniteAutomaton,
    UPWord,
    buchi_accepts,
    buchi_nonempty,
    build_omega_from_pair,
    decompose_monoalphabetic,
    delta_membership,
    letter_sets_upto,
    union,
)
from .metric import d_pref, l_pref
from .rational import TraceEnumeration, h_continuity_check
from .sigma11 import (
    FiniteTree,
    RegularTree,
    build_L_automaton,
    build_setup,
    branch_labels,
    check_lemma_finite,
    h_trunc,
    modulus_check,
    level_nodes,
    modulus_cap,
    path_exists,
    project_sigma,
    witness_sigma,
)
from .traces import concat, foata_normal_form, lex_normal_form, phi_word, validate_alphabet

FAILURE_SAMPLES = 3


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def fail(self, example) -> None:
        self.failure_count += 1
        if len(self.failures) < FAILURE_SAMPLES:
            self.failures.append(example)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.checked} checks, {self.failure_count} failures"
        if self.note:
            text += f" ({self.note})"
        if self.failures:
            text += f"; first: {self.failures[0]}"
        return text


# -- shared fixtures ----------------------------------------------------------------


def da3():
    """``a - b - c`` with ``a`` and ``c`` independent."""
    return validate_alphabet("abc", [("a", "b"), ("b", "c")])


def zero_star_one():
    """Büchi automaton for ``(0*1)^ω``."""
    return BuchiAutomaton.build(
        "01",
        ["s0", "s1"],
        ["s0"],
        ["s1"],
        [("s0", "0", "s0"), ("s0", "1", "s1"), ("s1", "0", "s0"), ("s1", "1", "s1")],
    )


def zero_star_one_plus():
    """Deterministic automaton for ``(0*1)^+``."""
    A = zero_star_one()
    return FiniteAutomaton.build(A.alphabet, A.states, A.initial, A.accepting, A.transitions)


def all_words(letters, max_len):
    for n in range(max_len + 1):
        yield from product(letters, repeat=n)


def swap_closure(da, word) -> frozenset:
    """All words reachable from ``word`` by swapping adjacent independent
    letters."""
    word = tuple(word)
    seen = {word}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            if w[i] != w[i + 1] and da.independent(w[i], w[i + 1]):
                x = w[:i] + (w[i + 1], w[i]) + w[i + 2 :]
                if x not in seen:
                    seen.add(x)
                    queue.append(x)
    return frozenset(seen)


def projection_signature(da, word):
    word = tuple(word)
    sig = [tuple(sorted(word))]
    for i, a in enumerate(da.letters):
        for b in da.letters[i:]:
            if da.dependent(a, b):
                sig.append(tuple(x for x in word if x in (a, b)))
    return tuple(sig)


def random_buchi(rng: random.Random, max_states=4, max_letters=3, density=0.35) -> BuchiAutomaton:
    n = rng.randint(1, max_states)
    letters = "012"[: rng.randint(1, max_letters)]
    states = [f"s{i}" for i in range(n)]
    trans = [(p, a, q) for p in states for a in letters for q in states if rng.random() < density]
    initial = ["s0"] + [q for q in states[1:] if rng.random() < 0.2]
    accepting = [q for q in states if rng.random() < 0.5]
    return BuchiAutomaton.build(letters, states, initial, accepting, trans)


def random_up(rng: random.Random, letters, max_stem=5, max_loop=5) -> UPWord:
    stem = [rng.choice(letters) for _ in range(rng.randint(0, max_stem))]
    loop = [rng.choice(letters) for _ in range(rng.randint(1, max_loop))]
    return UPWord(stem, loop)


def random_tree(rng: random.Random, depth: int, sigma="01") -> FiniteTree:
    return FiniteTree.from_levels(
        [[rng.choice(sigma) for _ in level_nodes(n)] for n in range(depth + 1)]
    )


def random_regular_tree(rng: random.Random, max_states=3, sigma="01") -> RegularTree:
    n = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(n))
    delta = {(q, d): rng.choice(states) for q in states for d in "lr"}
    output = {q: rng.choice(sigma) for q in states}
    return RegularTree(states, "q0", delta, output)


def bounded_branch_search(t: RegularTree, R: BuchiAutomaton, max_stem=4, max_loop=4):
    """First UP branch ``u(v)`` with ``|u|, |v|`` bounded whose labels R accepts."""
    for ns in range(max_stem + 1):
        for stem in product("lr", repeat=ns):
            for nl in range(1, max_loop + 1):
                for loop in product("lr", repeat=nl):
                    branch = UPWord(stem, loop)
                    if buchi_accepts(R, t.labels_along(branch)):
                        return branch
    return None


# -- criteria ---------------------------------------------------------------------


def criterion_equivalence(seed: int, max_len: int = 6) -> CheckResult:
    res = CheckResult("[1] trace equivalence vs swap closure and projections")
    da = da3()
    words = list(all_words(da.letters, max_len))
    nf = {w: phi_word(da, w) for w in words}
    cls: dict = {}
    for w in words:
        if w not in cls:
            closure = swap_closure(da, w)
            for x in closure:
                cls[x] = closure
    sig = {w: projection_signature(da, w) for w in words}
    for u in words:
        tu, cu, su = nf[u], cls[u], sig[u]
        for v in words:
            eq = tu == nf[v]
            res.checked += 1
            if eq != (v in cu) or eq != (su == sig[v]):
                res.fail(("".join(u), "".join(v)))
    return res


def criterion_morphism(seed: int, max_len: int = 4) -> CheckResult:
    res = CheckResult("[2] morphism law and normal forms")
    da = da3()
    short = list(all_words(da.letters, max_len))
    phi = {w: phi_word(da, w) for w in short}
    for u in short:
        for v in short:
            res.checked += 1
            if phi_word(da, u + v) != concat(phi[u], phi[v]):
                res.fail(("morphism", "".join(u), "".join(v)))
    seen_class: dict = {}
    for w in all_words(da.letters, max_len + 2):
        t = phi_word(da, w)
        form = lex_normal_form(t)
        res.checked += 1
        if lex_normal_form(phi_word(da, form)) != form or form not in swap_closure(da, w):
            res.fail(("idempotent", "".join(w)))
        flat = tuple(a for step in foata_normal_form(t) for a in step)
        if phi_word(da, flat) != t:
            res.fail(("foata", "".join(w)))
        # canonicity: one normal form per swap class
        key = min(swap_closure(da, w))
        if seen_class.setdefault(key, form) != form:
            res.fail(("canonical", "".join(w)))
    return res


def criterion_metric(seed: int, trials: int = 200, max_len: int = 10, cap: int = 8) -> CheckResult:
    res = CheckResult("[3] prefix metric laws")
    rng = random.Random(seed * 1000 + 3)
    da = da3()

    def rand_trace():
        return phi_word(da, [rng.choice(da.letters) for _ in range(rng.randint(0, max_len))])

    for _ in range(trials):
        s, t, u = rand_trace(), rand_trace(), rand_trace()
        st, ts = l_pref(s, t, cap), l_pref(t, s, cap)
        tu, su = l_pref(t, u, cap), l_pref(s, u, cap)
        res.checked += 1
        if st != ts:
            res.fail(("symmetry", str(s), str(t)))
        if min(st.as_int(), tu.as_int()) > su.as_int():
            res.fail(("ultrametric", str(s), str(t), str(u)))
        big = max(len(s), len(t), 1)
        if l_pref(s, t, big).saturated != (s == t):
            res.fail(("identity", str(s), str(t)))
        d = d_pref(s, t, cap)
        expected = (Fraction(0), Fraction(1, 2**cap)) if st.saturated else Fraction(1, 2**st.value)
        if d != expected:
            res.fail(("dyadic", str(s), str(t)))
    return res


def criterion_decomposition(
    seed: int, automata: int = 100, words: int = 50, mono_len: int = 8
) -> CheckResult:
    res = CheckResult("[4] monoalphabetic decomposition")
    rng = random.Random(seed * 1000 + 4)
    components_total = 0
    for _ in range(automata):
        A = random_buchi(rng)
        comps = decompose_monoalphabetic(A)
        components_total += len(comps)
        for c in comps:
            res.checked += 1
            if c.V.accepts_empty():
                res.fail(("epsilon in V", c.state))
            if letter_sets_upto(c.V, mono_len) - {c.alph_V}:
                res.fail(("V not monoalphabetic", c.state, sorted(c.alph_V)))
            if letter_sets_upto(c.U, mono_len) - {c.alph_U}:
                res.fail(("U not monoalphabetic", c.state, sorted(c.alph_U)))
        rebuilt = union([build_omega_from_pair(c.U, c.V) for c in comps]) if comps else None
        for _ in range(words):
            x = random_up(rng, A.alphabet)
            res.checked += 1
            got = rebuilt is not None and buchi_accepts(rebuilt, x)
            if got != buchi_accepts(A, x):
                res.fail(("membership", str(x)))
    res.note = f"{components_total} components"
    return res


def criterion_delta(seed: int) -> CheckResult:
    res = CheckResult("[5] delta-limit of (0*1)+")
    W = zero_star_one_plus()
    for stem, loop, expected in (("", "01", True), ("", "0", False), ("1", "0", False)):
        res.checked += 1
        if delta_membership(W, UPWord(stem, loop)) != expected:
            res.fail((f"{stem}({loop})", expected))
    return res


def _random_mono_language(rng: random.Random, da, max_traces=4, max_len=4):
    letters = list(da.letters)
    k = rng.randint(1, min(3, max_len))
    support = sorted(rng.sample(letters, k), key=da.index)
    words = set()
    for _ in range(rng.randint(1, max_traces)):
        n = rng.randint(len(support), max_len)
        w = list(support) + [rng.choice(support) for _ in range(n - len(support))]
        rng.shuffle(w)
        words.add(tuple(w))
    return FiniteAutomaton.from_words(da.letters, sorted(words))


def criterion_h_continuity(seed: int, trials: int = 100, max_k: int = 4) -> CheckResult:
    res = CheckResult("[6] continuity of H on monoalphabetic S")
    rng = random.Random(seed * 1000 + 6)
    da = da3()
    for _ in range(trials):
        e = TraceEnumeration(da, _random_mono_language(rng, da))
        p = len(e)
        k = rng.randint(0, max_k)
        N = [rng.randrange(p) for _ in range(k + rng.randint(1, 3))]
        M = N[:k] + [rng.randrange(p) for _ in range(k + rng.randint(1, 3) - k)]
        res.checked += 1
        if not h_continuity_check(e, N, M, k):
            res.fail(([str(e[i]) for i in range(p)], N, M, k))
    # S = {a, c} is not monoalphabetic: agreeing on one index is not enough
    e = TraceEnumeration(da, FiniteAutomaton.from_words(da.letters, [("a",), ("c",)]))
    res.checked += 1
    if h_continuity_check(e, [0, 0], [0, 1], 1, require_monoalphabetic=False):
        res.fail(("counterexample {a,c} did not diverge",))
    res.note = "non-monoalphabetic {a,c} diverges at k=1"
    return res


def criterion_modulus(seed: int, trials: int = 200, ks=(2, 3)) -> CheckResult:
    res = CheckResult("[7] continuity modulus of the tree code")
    rng = random.Random(seed * 1000 + 7)
    setup = build_setup("01")
    for k in ks:
        for _ in range(trials):
            t = random_tree(rng, k + 1)
            s = random_tree(rng, k + 1)
            s = FiniteTree.from_levels([t.level(n) for n in range(k)] + [s.level(n) for n in range(k, k + 2)])
            res.checked += 1
            if not modulus_check(setup, t, s, k):
                res.fail((k, t.labels, s.labels))
    res.note = "caps " + ", ".join(str(modulus_cap(k)) for k in ks)
    return res


def criterion_branch_coding(seed: int, regular_cases: int = 20, depth: int = 4) -> CheckResult:
    res = CheckResult("[8] branch coding at finite depth")
    rng = random.Random(seed * 1000 + 8)
    setup = build_setup("01")
    R = zero_star_one()
    L = build_L_automaton(setup, R)
    for labels in product("01", repeat=7):
        t = FiniteTree.from_levels([labels[:1], labels[1:3], labels[3:]])
        for branch in level_nodes(2):
            for k in range(3):
                res.checked += 1
                sigma = witness_sigma(setup, t, branch, k) + (setup.separator(k),)
                if phi_word(setup.da, sigma) != h_trunc(setup, t.truncate(k)):
                    res.fail(("sigma != g", "".join(labels), branch, k))
                live = R.is_live(branch_labels(t, branch, k))
                if check_lemma_finite(setup, t, branch, R, k, L) != live:
                    res.fail(("lemma vs liveness", "".join(labels), branch, k))
    negatives = 0
    for case in range(regular_cases):
        tree = RegularTree.constant("0") if case == 0 else random_regular_tree(rng)
        found = path_exists(tree, R)
        res.checked += 1
        if found is None:
            negatives += 1
            if bounded_branch_search(tree, R) is not None:
                res.fail(("missed branch", case))
            continue
        if case == 0:
            res.fail(("constant-0 tree has a branch", str(found)))
            continue
        branch = "".join(found.prefix(depth))
        if not buchi_accepts(R, tree.labels_along(found)):
            res.fail(("replay", case, str(found)))
        if not check_lemma_finite(setup, tree.truncate(depth), branch, R, depth, L):
            res.fail(("lemma", case, branch))
    res.note = f"{negatives} regular trees without a branch"
    return res


def criterion_L_automaton(seed: int, witnesses: int = 50) -> CheckResult:
    res = CheckResult("[9] automaton for the coded language")
    rng = random.Random(seed * 1000 + 9)
    setup = build_setup("01")
    L = build_L_automaton(setup, zero_star_one())
    for loop, expected in ((("1'", "A", "1", "B"), True), (("0'", "A", "0", "B"), False)):
        res.checked += 1
        if buchi_accepts(L, UPWord((), loop)) != expected:
            res.fail((loop, expected))
    res.checked += 1
    if L.is_live(("A",)):
        res.fail(("accepts a word starting with A",))
    got = 0
    attempts = 0
    while got < witnesses:
        attempts += 1
        R = random_buchi(rng, max_states=3, max_letters=2)
        R = BuchiAutomaton.build("01", R.states, R.initial, R.accepting, R.transitions)
        w = buchi_nonempty(build_L_automaton(setup, R))
        res.checked += 1
        if (w is None) != (buchi_nonempty(R) is None):
            res.fail(("emptiness mismatch", attempts))
        if w is None:
            continue
        got += 1
        if not buchi_accepts(R, project_sigma(setup, w)):
            res.fail(("projection not in R", str(w)))
    res.note = f"{got} witnesses from {attempts} random R"
    return res


CRITERIA = (
    criterion_equivalence,
    criterion_morphism,
    criterion_metric,
    criterion_decomposition,
    criterion_delta,
    criterion_h_continuity,
    criterion_modulus,
    criterion_branch_coding,
    criterion_L_automaton,
)


@dataclass
class RunReport:
    command: str
    digest: str
    results: list
    wall_time: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def render(self, timing: bool = False) -> str:
        lines = [f"{self.command} inputs={self.digest}"]
        lines += [r.line() for r in self.results]
        ok = sum(r.passed for r in self.results)
        lines.append(f"{ok}/{len(self.results)} criteria passed")
        if timing:
            lines.append(f"wall time {self.wall_time:.1f}s")
        return "\n".join(lines) + "\n"


def run_battery(seed: int = 7, max_len: int = 6) -> RunReport:
    digest = hashlib.sha256(f"battery seed={seed} max_len={max_len}".encode()).hexdigest()[:16]
    start = time.perf_counter()
    results = []
    for crit in CRITERIA:
        if crit is criterion_equivalence:
            results.append(crit(seed, max_len=max_len))
        else:
            results.append(crit(seed))
    return RunReport("battery", digest, results, time.perf_counter() - start)
