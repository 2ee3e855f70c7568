"""Line-oriented text formats for alphabets, automata and trees.

Every parser raises :class:`FormatError` carrying the offending line number,
and every ``format_*`` output parses back to an equal value.
"""
from __future__ import annotations

from .automata import BuchiAutomaton, FiniteAutomaton
from .sigma11 import DIRECTIONS, FiniteTree, RegularTree, TreeError
from .traces import AlphabetError, DependenceAlphabet, validate_alphabet


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FormatError(f"expected 'key: value', got {line!r}", lineno)
        key, value = line.split(":", 1)
        yield lineno, key.strip(), value.split()


def parse_alphabet(text: str) -> DependenceAlphabet:
    letters = None
    pairs = []
    allow_isolated = False
    for lineno, key, values in _records(text):
        if key == "letters":
            if letters is not None:
                raise FormatError("letters declared twice", lineno)
            letters = values
        elif key == "depend":
            if len(values) != 2:
                raise FormatError("a depend line names exactly two letters", lineno)
            pairs.append((lineno, tuple(values)))
        elif key == "allow_isolated":
            if values not in (["true"], ["false"]):
                raise FormatError("allow_isolated must be true or false", lineno)
            allow_isolated = values == ["true"]
        else:
            raise FormatError(f"unknown key {key!r}", lineno)
    if letters is None:
        raise FormatError("missing 'letters:' line")
    for lineno, (a, b) in pairs:
        for x in (a, b):
            if x not in letters:
                raise FormatError(f"unknown letter {x!r}", lineno)
    try:
        return validate_alphabet(letters, [p for _, p in pairs], allow_isolated)
    except AlphabetError as exc:
        raise FormatError(str(exc)) from None


def format_alphabet(da: DependenceAlphabet) -> str:
    lines = ["letters: " + " ".join(da.letters)]
    for i, a in enumerate(da.letters):
        for b in da.letters[i + 1 :]:
            if da.dependent(a, b):
                lines.append(f"depend: {a} {b}")
    if da.allow_isolated:
        lines.append("allow_isolated: true")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str, mode: str | None = None):
    """Parse an automaton; the ``mode:`` line (``finite`` or ``buchi``)
    picks the class, defaulting to ``mode`` or else Büchi."""
    fields = {"alphabet": None, "states": None, "initial": None, "accepting": None}
    trans = []
    file_mode = None
    for lineno, key, values in _records(text):
        if key == "mode":
            if values not in (["finite"], ["buchi"]):
                raise FormatError("mode must be 'finite' or 'buchi'", lineno)
            file_mode = values[0]
        elif key in fields:
            if fields[key] is not None:
                raise FormatError(f"{key} declared twice", lineno)
            fields[key] = (lineno, values)
        elif key == "trans":
            if len(values) != 3:
                raise FormatError("a trans line reads 'trans: source letter target'", lineno)
            trans.append((lineno, tuple(values)))
        else:
            raise FormatError(f"unknown key {key!r}", lineno)
    for key in ("alphabet", "states"):
        if fields[key] is None:
            raise FormatError(f"missing '{key}:' line")
    letters = fields["alphabet"][1]
    states = fields["states"][1]
    for key in ("initial", "accepting"):
        if fields[key] is None:
            fields[key] = (None, [])
        lineno, values = fields[key]
        for q in values:
            if q not in states:
                raise FormatError(f"undeclared state {q!r}", lineno)
    for lineno, (p, a, q) in trans:
        for s in (p, q):
            if s not in states:
                raise FormatError(f"undeclared state {s!r}", lineno)
        if a not in letters:
            raise FormatError(f"unknown letter {a!r}", lineno)
    chosen = file_mode or mode or "buchi"
    if mode is not None and file_mode is not None and file_mode != mode:
        raise FormatError(f"expected a {mode} automaton, file declares {file_mode}")
    cls = FiniteAutomaton if chosen == "finite" else BuchiAutomaton
    return cls.build(letters, states, fields["initial"][1], fields["accepting"][1], [t for _, t in trans])


def format_automaton(A) -> str:
    order = {q: i for i, q in enumerate(A.states)}
    letter_order = {a: i for i, a in enumerate(A.alphabet)}
    lines = [
        f"mode: {A.mode}",
        "alphabet: " + " ".join(map(str, A.alphabet)),
        "states: " + " ".join(map(str, A.states)),
        "initial: " + " ".join(str(q) for q in sorted(A.initial, key=order.__getitem__)),
        "accepting: " + " ".join(str(q) for q in sorted(A.accepting, key=order.__getitem__)),
    ]
    for p, a, q in sorted(A.transitions, key=lambda t: (order[t[0]], letter_order[t[1]], order[t[2]])):
        lines.append(f"trans: {p} {a} {q}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_finite_tree(text: str) -> FiniteTree:
    depth = None
    levels: dict = {}
    for lineno, key, values in _records(text):
        if key == "depth":
            if len(values) != 1 or not values[0].isdigit():
                raise FormatError("depth must be a non-negative integer", lineno)
            depth = int(values[0])
        elif key.startswith("level") and key[5:].isdigit():
            n = int(key[5:])
            if n in levels:
                raise FormatError(f"level {n} given twice", lineno)
            if len(values) != 2**n:
                raise FormatError(f"level {n} needs {2**n} labels, got {len(values)}", lineno)
            levels[n] = values
        else:
            raise FormatError(f"unknown key {key!r}", lineno)
    if depth is None:
        raise FormatError("missing 'depth:' line")
    missing = [n for n in range(depth + 1) if n not in levels]
    if missing:
        raise FormatError(f"missing level(s) {missing}")
    extra = [n for n in levels if n > depth]
    if extra:
        raise FormatError(f"level(s) {extra} exceed depth {depth}")
    return FiniteTree.from_levels([levels[n] for n in range(depth + 1)])


def format_finite_tree(t: FiniteTree) -> str:
    lines = [f"depth: {t.depth}"]
    for n in range(t.depth + 1):
        lines.append(f"level{n}: " + " ".join(map(str, t.level(n))))
    return "\n".join(lines) + "\n"


def parse_regular_tree(text: str) -> RegularTree:
    states = initial = None
    delta = {}
    output = {}
    for lineno, key, values in _records(text):
        if key == "alphabet":
            if sorted(values) != sorted(DIRECTIONS):
                raise FormatError("a regular tree reads the directions l r", lineno)
        elif key == "states":
            states = values
        elif key == "initial":
            if len(values) != 1:
                raise FormatError("a regular tree has exactly one initial state", lineno)
            initial = values[0]
        elif key == "trans":
            if len(values) != 3 or values[1] not in DIRECTIONS:
                raise FormatError("a trans line reads 'trans: source l|r target'", lineno)
            p, d, q = values
            if (p, d) in delta:
                raise FormatError(f"second {d}-transition from {p!r}", lineno)
            delta[p, d] = q
        elif key == "output":
            if len(values) != 2:
                raise FormatError("an output line reads 'output: state label'", lineno)
            output[values[0]] = values[1]
        else:
            raise FormatError(f"unknown key {key!r}", lineno)
    if states is None or initial is None:
        raise FormatError("regular tree needs 'states:' and 'initial:' lines")
    for (p, _), q in delta.items():
        for s in (p, q):
            if s not in states:
                raise FormatError(f"undeclared state {s!r}")
    try:
        return RegularTree(tuple(states), initial, delta, output)
    except TreeError as exc:
        raise FormatError(str(exc)) from None


def format_regular_tree(t: RegularTree) -> str:
    lines = [
        "alphabet: l r",
        "states: " + " ".join(map(str, t.states)),
        f"initial: {t.initial}",
    ]
    for q in t.states:
        for d in DIRECTIONS:
            lines.append(f"trans: {q} {d} {t.delta[q, d]}")
    for q in t.states:
        lines.append(f"output: {q} {t.output[q]}")
    return "\n".join(lines) + "\n"

