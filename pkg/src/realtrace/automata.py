"""Ultimately periodic words, finite automata and Büchi automata.

Automata are nondeterministic, without ε-moves.  States may be any hashable
values; the text format writes them with ``str``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import chain
from typing import Hashable, Iterable, Sequence

from .traces import format_word, tokenize


class AutomatonError(ValueError):
    pass


# -- ultimately periodic words ------------------------------------------------


def _primitive_root(loop: tuple) -> tuple:
    n = len(loop)
    for p in range(1, n + 1):
        if n % p == 0 and loop[:p] * (n // p) == loop:
            return loop[:p]
    return loop


class UPWord:
    """The ω-word ``stem · loop^ω``, kept in canonical form.

    Canonical form: the loop is primitive, and the stem cannot be shortened
    by rotating the loop backward.
    """

    __slots__ = ("stem", "loop")

    def __init__(self, stem: Iterable = (), loop: Iterable = ()):
        stem, loop = tuple(stem), tuple(loop)
        if not loop:
            raise ValueError("loop of an ultimately periodic word must be nonempty")
        loop = _primitive_root(loop)
        while stem and stem[-1] == loop[-1]:
            stem = stem[:-1]
            loop = loop[-1:] + loop[:-1]
        self.stem = stem
        self.loop = loop

    def __getitem__(self, i: int):
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def prefix(self, n: int) -> tuple:
        return tuple(self[i] for i in range(n))

    def letters(self) -> frozenset:
        return frozenset(self.stem) | frozenset(self.loop)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UPWord):
            return NotImplemented
        return self.stem == other.stem and self.loop == other.loop

    def __hash__(self) -> int:
        return hash((self.stem, self.loop))

    def __repr__(self) -> str:
        return f"UPWord({self.stem!r}, {self.loop!r})"

    def format(self, letters: Sequence = ()) -> str:
        stem = format_word(self.stem, letters) if self.stem else ""
        return f"{stem}({format_word(self.loop, letters)})"

    def __str__(self) -> str:
        return self.format(tuple(set(self.stem) | set(self.loop)))


def parse_up(text: str, letters: Sequence) -> UPWord:
    """Read the literal ``u(v)``, meaning ``u · v^ω``."""
    text = text.strip()
    if not text.endswith(")") or "(" not in text:
        raise ValueError(f"expected an ultimately periodic literal u(v), got {text!r}")
    k = text.index("(")
    stem = tokenize(text[:k], letters) if text[:k].strip() else ()
    loop = tokenize(text[k + 1 : -1], letters)
    return UPWord(stem, loop)


# -- automata -------------------------------------------------------------------


@dataclass(frozen=True)
class _Automaton:
    alphabet: tuple
    states: tuple
    initial: frozenset
    accepting: frozenset
    transitions: frozenset
    mode = "finite"

    def __post_init__(self):
        states = set(self.states)
        letters = set(self.alphabet)
        if len(states) != len(self.states):
            raise AutomatonError("duplicate state")
        for q in chain(self.initial, self.accepting):
            if q not in states:
                raise AutomatonError(f"undeclared state {q!r}")
        for p, a, q in self.transitions:
            if p not in states or q not in states:
                raise AutomatonError(f"transition ({p!r}, {a!r}, {q!r}) uses an undeclared state")
            if a not in letters:
                raise AutomatonError(f"transition ({p!r}, {a!r}, {q!r}) uses an unknown letter")

    @classmethod
    def build(cls, alphabet, states, initial, accepting, transitions):
        return cls(
            tuple(alphabet),
            tuple(states),
            frozenset(initial),
            frozenset(accepting),
            frozenset(transitions),
        )

    @cached_property
    def delta(self) -> dict:
        d: dict = {}
        for p, a, q in self.transitions:
            d.setdefault((p, a), set()).add(q)
        return d

    @cached_property
    def successors(self) -> dict:
        d: dict = {q: [] for q in self.states}
        for p, a, q in sorted(self.transitions, key=_sort_key):
            d[p].append((a, q))
        return d

    def step(self, current: Iterable, letter) -> frozenset:
        out = set()
        for p in current:
            out |= self.delta.get((p, letter), set())
        return frozenset(out)

    def run(self, word: Iterable, start: Iterable | None = None) -> frozenset:
        current = frozenset(self.initial if start is None else start)
        for a in word:
            current = self.step(current, a)
            if not current:
                break
        return current

    def is_deterministic(self) -> bool:
        return len(self.initial) <= 1 and all(len(v) == 1 for v in self.delta.values())

    def reachable(self, start: Iterable | None = None) -> set:
        seen = set(self.initial if start is None else start)
        queue = deque(seen)
        while queue:
            p = queue.popleft()
            for _, q in self.successors[p]:
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
        return seen

    def coreachable(self, targets: Iterable) -> set:
        pred: dict = {}
        for p, _, q in self.transitions:
            pred.setdefault(q, set()).add(p)
        seen = set(targets)
        queue = deque(seen)
        while queue:
            q = queue.popleft()
            for p in pred.get(q, ()):
                if p not in seen:
                    seen.add(p)
                    queue.append(p)
        return seen

    def restrict_to(self, keep: set):
        return type(self).build(
            self.alphabet,
            [q for q in self.states if q in keep],
            self.initial & keep,
            self.accepting & keep,
            [(p, a, q) for p, a, q in self.transitions if p in keep and q in keep],
        )

    def check_word(self, word: Iterable) -> tuple:
        word = tuple(word)
        letters = set(self.alphabet)
        for a in word:
            if a not in letters:
                raise AutomatonError(f"letter {a!r} not in automaton alphabet")
        return word


def _sort_key(item):
    return tuple(str(x) for x in item)


class FiniteAutomaton(_Automaton):
    """NFA over finite words."""

    mode = "finite"

    def accepts(self, word: Iterable) -> bool:
        return bool(self.run(self.check_word(word)) & self.accepting)

    def accepts_empty(self) -> bool:
        return bool(self.initial & self.accepting)

    def trim(self) -> "FiniteAutomaton":
        keep = self.reachable() & self.coreachable(self.accepting)
        return self.restrict_to(keep)

    def is_empty(self) -> bool:
        return not (self.reachable() & self.accepting)

    def is_finite_language(self) -> bool:
        """True iff the trimmed automaton has no cycle."""
        trimmed = self.trim()
        color: dict = {}

        def has_cycle(p) -> bool:
            stack = [(p, iter(trimmed.successors[p]))]
            color[p] = 1
            while stack:
                node, it = stack[-1]
                for _, q in it:
                    c = color.get(q, 0)
                    if c == 1:
                        return True
                    if c == 0:
                        color[q] = 1
                        stack.append((q, iter(trimmed.successors[q])))
                        break
                else:
                    color[node] = 2
                    stack.pop()
            return False

        return not any(color.get(p, 0) == 0 and has_cycle(p) for p in trimmed.states)

    def words_of_length(self, n: int):
        """Accepted words of length ``n`` in lexicographic order of the
        alphabet declaration."""
        order = {a: i for i, a in enumerate(self.alphabet)}
        letters = sorted(self.alphabet, key=order.__getitem__)
        live = self.coreachable(self.accepting)

        def rec(current, k, prefix):
            if k == 0:
                if current & self.accepting:
                    yield tuple(prefix)
                return
            for a in letters:
                nxt = self.step(current, a) & live
                if nxt:
                    prefix.append(a)
                    yield from rec(nxt, k - 1, prefix)
                    prefix.pop()

        start = frozenset(self.initial) & live
        if start:
            yield from rec(start, n, [])

    def words(self, max_len: int):
        for n in range(max_len + 1):
            yield from self.words_of_length(n)

    def determinize(self) -> "FiniteAutomaton":
        start = frozenset(self.initial)
        index = {start: 0}
        queue = deque([start])
        trans = []
        while queue:
            s = queue.popleft()
            for a in self.alphabet:
                t = self.step(s, a)
                if not t:
                    continue
                if t not in index:
                    index[t] = len(index)
                    queue.append(t)
                trans.append((f"d{index[s]}", a, f"d{index[t]}"))
        states = [f"d{i}" for i in range(len(index))]
        accepting = [f"d{i}" for s, i in index.items() if s & self.accepting]
        return FiniteAutomaton.build(self.alphabet, states, ["d0"], accepting, trans)

    @classmethod
    def from_words(cls, alphabet, words) -> "FiniteAutomaton":
        """Trie automaton accepting exactly ``words``."""
        states = [()]
        trans = []
        accepting = set()
        for w in words:
            w = tuple(w)
            for i in range(len(w)):
                if w[: i + 1] not in states:
                    states.append(w[: i + 1])
                    trans.append((w[:i], w[i], w[: i + 1]))
            accepting.add(w)
        return cls.build(alphabet, states, [()], accepting, trans)


class BuchiAutomaton(_Automaton):
    """Nondeterministic Büchi automaton."""

    mode = "buchi"

    def accepts(self, x: UPWord) -> bool:
        return buchi_accepts(self, x)

    @cached_property
    def live_states(self) -> frozenset:
        """States from which some infinite accepting run starts."""
        cyclic = {
            q
            for q in self.accepting
            if q in self.reachable({q2 for _, q2 in self.successors[q]})
        }
        return frozenset(self.coreachable(cyclic))

    def is_live(self, prefix: Iterable) -> bool:
        """Some accepted ω-word extends the finite ``prefix``."""
        return bool(self.run(self.check_word(prefix)) & self.live_states)

    def trim(self) -> "BuchiAutomaton":
        return self.restrict_to(self.reachable() & self.live_states)


# -- lasso search --------------------------------------------------------------


def _bfs_path(sources, succ, target_pred):
    """Shortest letter path from any of ``sources`` (after at least one step)
    to a node satisfying ``target_pred``."""
    parent: dict = {}
    queue = deque()
    for s in sources:
        for a, n in succ(s):
            if n not in parent:
                parent[n] = (None, a, s)
                queue.append(n)
    while queue:
        node = queue.popleft()
        if target_pred(node):
            path = []
            cur = node
            while cur is not None:
                prev, a, src = parent[cur]
                path.append(a)
                cur = prev
            return node, path[::-1]
        for a, n in succ(node):
            if n not in parent:
                parent[n] = (node, a, None)
                queue.append(n)
    return None


def find_lasso(initial: Iterable, succ, accepting) -> tuple | None:
    """Search a finite graph for a reachable accepting node on a cycle.

    ``succ(node)`` yields ``(letter, next)`` pairs.  Returns ``(stem, loop)``
    letter sequences or ``None``.
    """
    initial = list(initial)
    order = []
    parent: dict = {n: None for n in initial}
    queue = deque(initial)
    while queue:
        node = queue.popleft()
        order.append(node)
        for a, n in succ(node):
            if n not in parent:
                parent[n] = (node, a)
                queue.append(n)
    for q in order:
        if not accepting(q):
            continue
        found = _bfs_path([q], succ, lambda n, q=q: n == q)
        if found is None:
            continue
        stem = []
        cur = q
        while parent[cur] is not None:
            prev, a = parent[cur]
            stem.append(a)
            cur = prev
        return tuple(stem[::-1]), tuple(found[1])
    return None


def buchi_accepts(A: BuchiAutomaton, x: UPWord) -> bool:
    """Lasso check on the product of ``A`` with the positions of ``x``."""
    A.check_word(x.stem + x.loop)
    n_stem, n = len(x.stem), len(x.stem) + len(x.loop)

    def succ(node):
        p, i = node
        a = x[i]
        j = i + 1 if i + 1 < n else n_stem
        for q in A.delta.get((p, a), ()):
            yield a, (q, j)

    return find_lasso([(q, 0) for q in A.initial], succ, lambda nd: nd[0] in A.accepting) is not None


def buchi_nonempty(A: BuchiAutomaton) -> UPWord | None:
    lasso = find_lasso(sorted(A.initial, key=str), lambda p: A.successors[p], A.accepting.__contains__)
    if lasso is None:
        return None
    return UPWord(*lasso)


def delta_membership(W: FiniteAutomaton, x: UPWord) -> bool:
    """Does ``x`` have infinitely many prefixes accepted by ``W``?

    Runs the subset construction along ``x``; the subsets at loop boundaries
    are eventually periodic, and the answer is read off one period.
    """
    W.check_word(x.stem + x.loop)
    current = W.run(x.stem)
    seen: dict = {}
    history = []
    while current and current not in seen:
        seen[current] = len(history)
        history.append(current)
        current = W.run(x.loop, current)
    if not current:
        return False
    for start in history[seen[current] :]:
        s = start
        for a in x.loop:
            s = W.step(s, a)
            if s & W.accepting:
                return True
    return False


# -- monoalphabetic decomposition ----------------------------------------------


@dataclass(frozen=True)
class DecompositionComponent:
    """One piece ``U · V^ω`` with exact letter sets for ``U`` and ``V``."""

    U: FiniteAutomaton
    V: FiniteAutomaton
    alph_U: frozenset
    alph_V: frozenset
    state: Hashable = field(default=None, compare=False)


def _letter_set_product(A: _Automaton, start) -> dict:
    """Reachable ``(state, letters-read)`` pairs and their transitions."""
    init = [(q, frozenset()) for q in start]
    trans = []
    seen = set(init)
    queue = deque(init)
    while queue:
        p, s = queue.popleft()
        for a, q in A.successors[p]:
            n = (q, s | {a})
            trans.append(((p, s), a, n))
            if n not in seen:
                seen.add(n)
                queue.append(n)
    return {"initial": init, "states": seen, "transitions": trans}


def _subset_automaton(A, prod, target) -> FiniteAutomaton:
    states = sorted(prod["states"], key=lambda n: (str(n[0]), sorted(map(str, n[1]))))
    fa = FiniteAutomaton.build(
        A.alphabet,
        states,
        prod["initial"],
        [target],
        [t for t in prod["transitions"] if t[2][1] <= target[1]],
    )
    return fa.trim()


def decompose_monoalphabetic(A: BuchiAutomaton) -> list:
    """Split ``L(A)`` into components ``L(U)·L(V)^ω``.

    For each accepting state ``q`` and letter sets ``X``, ``Y``: ``U`` reads
    words from an initial state to ``q`` with letter set exactly ``X``, and
    ``V`` reads nonempty ``q → q`` loops with letter set exactly ``Y``.  Empty
    components are dropped.
    """
    A = A.trim()
    components = []
    from_init = _letter_set_product(A, sorted(A.initial, key=str))
    for q in sorted(A.accepting, key=str):
        loops = _letter_set_product(A, [q])
        u_sets = sorted(
            {s for p, s in from_init["states"] if p == q}, key=lambda s: (len(s), sorted(map(str, s)))
        )
        v_sets = sorted(
            {s for p, s in loops["states"] if p == q and s}, key=lambda s: (len(s), sorted(map(str, s)))
        )
        for x in u_sets:
            U = _subset_automaton(A, from_init, (q, x))
            if U.is_empty():
                continue
            for y in v_sets:
                V = _subset_automaton(A, loops, (q, y))
                if V.is_empty():
                    continue
                components.append(DecompositionComponent(U, V, x, y, q))
    return components


def build_omega_from_pair(U: FiniteAutomaton, V: FiniteAutomaton) -> BuchiAutomaton:
    """Büchi automaton for ``L(U) · L(V)^ω``.

    A fresh hub state starts every ``V`` block; transitions that would enter
    a final ``V`` state are duplicated into the hub.  The hub is the only
    accepting state.
    """
    if V.accepts_empty():
        raise AutomatonError("V must not accept the empty word")
    alphabet = tuple(dict.fromkeys(chain(U.alphabet, V.alphabet)))
    hub = ("hub",)
    states = [("u", p) for p in U.states] + [("v", p) for p in V.states] + [hub]
    trans = set()
    for p, a, q in U.transitions:
        trans.add((("u", p), a, ("u", q)))
        if q in U.accepting:
            trans.add((("u", p), a, hub))
    for p, a, q in V.transitions:
        trans.add((("v", p), a, ("v", q)))
        if q in V.accepting:
            trans.add((("v", p), a, hub))
        if p in V.initial:
            trans.add((hub, a, ("v", q)))
            if q in V.accepting:
                trans.add((hub, a, hub))
    initial = [("u", p) for p in U.initial]
    if U.accepts_empty():
        initial.append(hub)
    return BuchiAutomaton.build(alphabet, states, initial, [hub], trans)


def union(automata: Sequence[BuchiAutomaton]) -> BuchiAutomaton:
    """Disjoint union of Büchi automata."""
    alphabet = tuple(dict.fromkeys(chain.from_iterable(A.alphabet for A in automata)))
    states, initial, accepting, trans = [], [], [], []
    for i, A in enumerate(automata):
        states += [(i, q) for q in A.states]
        initial += [(i, q) for q in A.initial]
        accepting += [(i, q) for q in A.accepting]
        trans += [((i, p), a, (i, q)) for p, a, q in A.transitions]
    return BuchiAutomaton.build(alphabet, states, initial, accepting, trans)


def letter_sets_upto(fa: FiniteAutomaton, max_len: int) -> set:
    """Letter sets of all accepted words of length ``<= max_len`` (covers
    every word by walking the letter-set product level by level)."""
    layer = {(q, frozenset()) for q in fa.initial}
    found = {s for q, s in layer if q in fa.accepting}
    seen = set(layer)
    for _ in range(max_len):
        nxt = set()
        for p, s in layer:
            for a, q in fa.successors[p]:
                n = (q, s | {a})
                if n not in seen:
                    seen.add(n)
                    nxt.add(n)
                    if q in fa.accepting:
                        found.add(n[1])
        layer = nxt
    return found


def relabel(A: _Automaton) -> _Automaton:
    """Rename states to ``s0, s1, …`` (for printing)."""
    names = {q: f"s{i}" for i, q in enumerate(A.states)}
    return type(A).build(
        A.alphabet,
        [names[q] for q in A.states],
        [names[q] for q in A.initial],
        [names[q] for q in A.accepting],
        [(names[p], a, names[q]) for p, a, q in A.transitions],
    )
