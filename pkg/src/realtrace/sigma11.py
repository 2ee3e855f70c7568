"""Coding labeled binary trees as infinite traces.

A tree ``t: {l,r}* → Σ`` is written level by level.  Even levels are listed
right-to-left with primed letters, odd levels left-to-right with plain
letters, and levels are separated alternately by ``A`` and ``B``.  Over the
dependence alphabet built by :func:`build_setup`, plain letters commute with
``A`` and with primed letters, primed letters commute with ``B``.  A branch
of the tree then corresponds to a way of cutting each level block into the
part before and after the branch node.

Everything infinite is handled through finite truncations (``FiniteTree``)
or finite-state presentations (``RegularTree``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .automata import BuchiAutomaton, UPWord, buchi_accepts, find_lasso
from .metric import l_pref
from .traces import DependenceAlphabet, FiniteTrace, phi_word, validate_alphabet

MAX_DEPTH = 6
DIRECTIONS = ("l", "r")


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class TreeAlphabetSetup:
    sigma: tuple
    primed: tuple
    A: str
    B: str
    da: DependenceAlphabet

    def prime(self, a):
        return self.primed[self.sigma.index(a)]

    def unprime(self, a):
        return self.sigma[self.primed.index(a)]

    def separator(self, level: int) -> str:
        """Letter written after the block of ``level``."""
        return self.A if level % 2 == 0 else self.B


def build_setup(sigma: Sequence, A: str = "A", B: str = "B") -> TreeAlphabetSetup:
    sigma = tuple(sigma)
    if len(sigma) < 2:
        raise TreeError("the label alphabet needs at least two letters")
    primed = tuple(f"{a}'" for a in sigma)
    letters = sigma + primed + (A, B)
    if len(set(letters)) != len(letters):
        raise TreeError("label letters, their primed copies and the separators must be distinct")
    independent = set()
    for a in sigma:
        for b in primed + (A,):
            independent.add((a, b))
            independent.add((b, a))
    for b in primed:
        independent.add((b, B))
        independent.add((B, b))
    depend = [(a, b) for a in letters for b in letters if (a, b) not in independent]
    return TreeAlphabetSetup(sigma, primed, A, B, validate_alphabet(letters, depend))


def level_nodes(n: int) -> list:
    """Nodes of level ``n`` in lexicographic order (``l`` before ``r``)."""
    return ["".join(p) for p in product(DIRECTIONS, repeat=n)]


def block_order(n: int) -> list:
    """Nodes of level ``n`` in the order the code lists them."""
    nodes = level_nodes(n)
    return nodes[::-1] if n % 2 == 0 else nodes


@dataclass(frozen=True)
class FiniteTree:
    depth: int
    labels: dict = field(hash=False)

    def __post_init__(self):
        for n in range(self.depth + 1):
            for x in level_nodes(n):
                if x not in self.labels:
                    raise TreeError(f"missing label for node {x or 'ε'}")

    def __call__(self, node: str):
        return self.labels[node]

    def level(self, n: int) -> list:
        return [self.labels[x] for x in level_nodes(n)]

    def truncate(self, depth: int) -> "FiniteTree":
        if depth > self.depth:
            raise TreeError(f"cannot truncate a depth-{self.depth} tree to depth {depth}")
        return FiniteTree(depth, {x: a for x, a in self.labels.items() if len(x) <= depth})

    @classmethod
    def from_levels(cls, levels: Sequence[Sequence]) -> "FiniteTree":
        labels = {}
        for n, row in enumerate(levels):
            nodes = level_nodes(n)
            if len(row) != len(nodes):
                raise TreeError(f"level {n} needs {len(nodes)} labels, got {len(row)}")
            labels.update(zip(nodes, row))
        return cls(len(levels) - 1, labels)

    @classmethod
    def constant(cls, depth: int, label) -> "FiniteTree":
        return cls(depth, {x: label for n in range(depth + 1) for x in level_nodes(n)})


@dataclass(frozen=True)
class RegularTree:
    """Deterministic finite-state labeling of ``{l,r}*``."""

    states: tuple
    initial: object
    delta: dict = field(hash=False)
    output: dict = field(hash=False)

    def __post_init__(self):
        for q in self.states:
            if q not in self.output:
                raise TreeError(f"state {q!r} has no output label")
            for d in DIRECTIONS:
                if (q, d) not in self.delta:
                    raise TreeError(f"state {q!r} has no {d}-transition")
        if self.initial not in self.states:
            raise TreeError(f"initial state {self.initial!r} is not declared")

    def state_at(self, node: str):
        q = self.initial
        for d in node:
            q = self.delta[q, d]
        return q

    def __call__(self, node: str):
        return self.output[self.state_at(node)]

    def truncate(self, depth: int) -> FiniteTree:
        return FiniteTree(depth, {x: self(x) for n in range(depth + 1) for x in level_nodes(n)})

    def labels_along(self, branch: UPWord) -> UPWord:
        """Label sequence ``t(ε) t(d₁) t(d₁d₂) …`` along an ultimately
        periodic branch."""
        q = self.initial
        labels = []
        for d in branch.stem:
            labels.append(self.output[q])
            q = self.delta[q, d]
        seen = {}
        while q not in seen:
            seen[q] = len(labels)
            for d in branch.loop:
                labels.append(self.output[q])
                q = self.delta[q, d]
        start = seen[q]
        return UPWord(labels[:start], labels[start:])

    @classmethod
    def constant(cls, label) -> "RegularTree":
        return cls(("q",), "q", {("q", "l"): "q", ("q", "r"): "q"}, {"q": label})


def g_code(setup: TreeAlphabetSetup, t: FiniteTree) -> tuple:
    """Level-alternating code of ``t`` through its last level, ending with
    that level's separator."""
    word = []
    for n in range(t.depth + 1):
        block = [t(x) for x in block_order(n)]
        if n % 2 == 0:
            block = [setup.prime(a) for a in block]
        word.extend(block)
        word.append(setup.separator(n))
    return tuple(word)


def h_trunc(setup: TreeAlphabetSetup, t: FiniteTree) -> FiniteTrace:
    return phi_word(setup.da, g_code(setup, t))


def modulus_cap(k: int) -> int:
    """``(k-1) + 1 + 2 + … + 2^(k-2)``."""
    return (k - 1) + 2 ** (k - 1) - 1


def modulus_check(setup: TreeAlphabetSetup, t: FiniteTree, s: FiniteTree, k: int) -> bool:
    """Trees equal on levels ``< k`` have codes whose prefix sets agree up to
    size ``modulus_cap(k)``."""
    if k < 2:
        raise TreeError("the modulus is stated for k >= 2")
    if k > MAX_DEPTH:
        raise TreeError(f"k is limited to {MAX_DEPTH}")
    if t.depth < k + 1 or s.depth < k + 1:
        raise TreeError("both trees need depth at least k+1")
    for n in range(k):
        if t.level(n) != s.level(n):
            raise TreeError(f"trees differ on level {n} < k")
    return l_pref(h_trunc(setup, t), h_trunc(setup, s), modulus_cap(k)).saturated


# -- the automaton for the shape x(1) W₁ A x(2) W₂ B … -------------------------


def build_L_automaton(setup: TreeAlphabetSetup, R: BuchiAutomaton) -> BuchiAutomaton:
    """Büchi automaton for words ``x(1)·W₁·A·x(2)·W₂·B·x(3)·W₃·A…`` with
    ``x(odd) ∈ Σ'``, ``x(even) ∈ Σ``, ``W_odd ∈ (Σ'ΣΣ)*(Σ|ε)``,
    ``W_even ∈ (ΣΣ'Σ')*(Σ'|ε)``, whose projected label word is in ``L(R)``.

    The shape is tracked by a small control; ``R`` advances only on the
    ``x`` letters.  Accepting states are those entered right after an ``x``
    letter with ``R`` accepting.
    """
    for a in R.alphabet:
        if a not in setup.sigma:
            raise TreeError(f"R uses letter {a!r} outside the label alphabet")
    sig, pri, A, B = setup.sigma, setup.primed, setup.A, setup.B

    # shape moves that leave R untouched: state -> [(letters, next)]
    def shape_moves(phase):
        own, other, sep, nxt = (pri, sig, A, "X2") if phase == "1" else (sig, pri, B, "X1")
        w, wf = f"W{phase}", f"W{phase}f"
        a, b, e = f"W{phase}a", f"W{phase}b", f"W{phase}e"
        return {
            wf: [(own, a), (other, e), ((sep,), nxt)],
            w: [(own, a), (other, e), ((sep,), nxt)],
            a: [(other, b)],
            b: [(other, w)],
            e: [((sep,), nxt)],
        }

    moves = {**shape_moves("1"), **shape_moves("2")}

    def succ(node):
        shape, r = node
        if shape == "X1":
            for x in pri:
                for r2 in R.delta.get((r, setup.unprime(x)), ()):
                    yield x, ("W1f", r2)
        elif shape == "X2":
            for x in sig:
                for r2 in R.delta.get((r, x), ()):
                    yield x, ("W2f", r2)
        else:
            for letters, nxt in moves[shape]:
                for x in letters:
                    yield x, (nxt, r)

    initial = [("X1", r) for r in sorted(R.initial, key=str)]
    seen = set(initial)
    stack = list(initial)
    trans = []
    while stack:
        node = stack.pop()
        for x, n in succ(node):
            trans.append((node, x, n))
            if n not in seen:
                seen.add(n)
                stack.append(n)

    def name(node):
        return f"{node[0]}|{node[1]}"

    accepting = [n for n in seen if n[0] in ("W1f", "W2f") and n[1] in R.accepting]
    return BuchiAutomaton.build(
        setup.da.letters,
        sorted(map(name, seen)),
        map(name, initial),
        map(name, accepting),
        [(name(p), x, name(q)) for p, x, q in trans],
    )


def project_sigma(setup: TreeAlphabetSetup, x: UPWord) -> UPWord:
    """Label word ``x(1)… `` read off a word of the ``σ''`` shape (primes
    removed)."""
    n_stem, n_loop = len(x.stem), len(x.loop)
    word = x.prefix(n_stem + 2 * n_loop)
    picks = []
    for p, a in enumerate(word):
        if p == 0 or word[p - 1] in (setup.A, setup.B):
            picks.append((p, a))
    stem = [a for p, a in picks if p < n_stem + n_loop]
    loop = [a for p, a in picks if p >= n_stem + n_loop]
    if not loop:
        raise TreeError("word has no separator in its loop")

    def plain(a):
        return setup.unprime(a) if a in setup.primed else a

    return UPWord([plain(a) for a in stem], [plain(a) for a in loop])


# -- branches ---------------------------------------------------------------------


def path_exists(t: RegularTree, R: BuchiAutomaton) -> UPWord | None:
    """An ultimately periodic branch of ``t`` whose labels ``R`` accepts.

    Büchi emptiness on (tree state, R state) reading directions.  The
    returned branch is replayed through ``R`` before being returned.
    """
    initial = []
    for r0 in sorted(R.initial, key=str):
        for r1 in sorted(R.delta.get((r0, t.output[t.initial]), ()), key=str):
            initial.append((t.initial, r1))

    def succ(node):
        q, r = node
        for d in DIRECTIONS:
            q2 = t.delta[q, d]
            for r2 in sorted(R.delta.get((r, t.output[q2]), ()), key=str):
                yield d, (q2, r2)

    lasso = find_lasso(initial, succ, lambda node: node[1] in R.accepting)
    if lasso is None:
        return None
    branch = UPWord(*lasso)
    if not buchi_accepts(R, t.labels_along(branch)):
        raise AssertionError("branch witness failed replay")  # internal invariant
    return branch


def branch_labels(t, branch: Sequence, k: int) -> tuple:
    """Labels of the branch nodes on levels ``0..k``."""
    branch = "".join(branch)
    return tuple(t(branch[:i]) for i in range(k + 1))


@dataclass(frozen=True)
class SigmaCut:
    """A level-by-level cut ``x(i), uᵢ, vᵢ`` of a tree code along a branch.

    ``x[i]`` is the letter of the branch node on level ``i`` (primed on even
    levels); ``u[i]`` lists the letters after it on its level and ``v[i]``
    the letters before it (``v[0]`` is always empty).
    """

    x: tuple
    u: tuple
    v: tuple
    separators: tuple

    def sigma_word(self) -> tuple:
        """``x(1) u₁ A v₁ x(2) u₂ B v₂ …`` through the last level (no trailing
        separator)."""
        out = []
        for i, xi in enumerate(self.x):
            if i:
                out.append(self.separators[i - 1])
            out.extend(self.v[i])
            out.append(xi)
            out.extend(self.u[i])
        return tuple(out)

    def double_prime_prefix(self) -> tuple:
        """``x(1) W₁ A x(2) W₂ B … x(k+1)``, each ``W`` interleaving the ``u``
        letters of one level with the ``v`` letters of the next."""
        out = []
        for i, xi in enumerate(self.x):
            out.append(xi)
            if i + 1 < len(self.x):
                out.extend(interleave(self.u[i], self.v[i + 1]))
                out.append(self.separators[i])
        return tuple(out)


def interleave(u: Sequence, v: Sequence) -> list:
    """``u₀ v₀ v₁ u₁ v₂ v₃ …`` followed by the odd ``v`` letter, if any."""
    if len(v) not in (2 * len(u), 2 * len(u) + 1):
        raise TreeError(f"|v|={len(v)} is neither 2|u| nor 2|u|+1 for |u|={len(u)}")
    out = []
    for j, a in enumerate(u):
        out.append(a)
        out.extend(v[2 * j : 2 * j + 2])
    if len(v) % 2:
        out.append(v[-1])
    return out


def sigma_cut(setup: TreeAlphabetSetup, t: FiniteTree, branch: Sequence, k: int) -> SigmaCut:
    branch = "".join(branch)
    if set(branch) - set(DIRECTIONS):
        raise TreeError("branch must consist of l/r directions")
    if len(branch) < k or t.depth < k:
        raise TreeError("branch and tree must reach level k")
    if k > MAX_DEPTH:
        raise TreeError(f"k is limited to {MAX_DEPTH}")
    xs, us, vs = [], [], []
    for i in range(k + 1):
        order = block_order(i)
        letters = [t(x) for x in order]
        if i % 2 == 0:
            letters = [setup.prime(a) for a in letters]
        p = order.index(branch[:i])
        vs.append(tuple(letters[:p]))
        xs.append(letters[p])
        us.append(tuple(letters[p + 1 :]))
    for i in range(1, k + 1):
        if len(vs[i]) not in (2 * len(us[i - 1]), 2 * len(us[i - 1]) + 1):
            raise AssertionError("cut violates the block-length discipline")  # internal invariant
    return SigmaCut(tuple(xs), tuple(us), tuple(vs), tuple(setup.separator(i) for i in range(k + 1)))


def witness_sigma(setup: TreeAlphabetSetup, t: FiniteTree, branch: Sequence, k: int) -> tuple:
    return sigma_cut(setup, t, branch, k).sigma_word()


def check_lemma_finite(
    setup: TreeAlphabetSetup, t: FiniteTree, branch: Sequence, R: BuchiAutomaton, k: int, L: BuchiAutomaton | None = None
) -> bool:
    """Finite-depth check that a branch of ``t`` is encoded in ``h(t)``.

    (a) The cut word, closed by its separator, has the same trace as the code
    of ``t`` truncated at level ``k``; so does the ``σ''``-shaped rearrangement
    completed by the rest of level ``k``.  (b) The branch labels are a live
    prefix for ``R`` and the ``σ''`` prefix is live for the ``L''`` automaton.
    """
    cut = sigma_cut(setup, t, branch, k)
    code = h_trunc(setup, t.truncate(k))
    closing = (setup.separator(k),)
    if phi_word(setup.da, cut.sigma_word() + closing) != code:
        return False
    dp = cut.double_prime_prefix()
    if phi_word(setup.da, dp + cut.u[k] + closing) != code:
        return False
    if L is None:
        L = build_L_automaton(setup, R)
    return R.is_live(branch_labels(t, branch, k)) and L.is_live(dp)
