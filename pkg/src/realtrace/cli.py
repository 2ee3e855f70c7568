"""Command-line front end.

Exit status: 0 on success, 1 when a check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import automata, battery, metric, rational, sigma11, traces
from .formats import (
    FormatError,
    format_automaton,
    parse_alphabet,
    parse_automaton,
    parse_finite_tree,
    parse_regular_tree,
)


class InputError(Exception):
    pass


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _alphabet(path):
    return parse_alphabet(_read(path))


def _automaton(path, mode=None):
    return parse_automaton(_read(path), mode)


def _setup(args):
    return sigma11.build_setup(args.sigma.split(","))


def _indices(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated indices, got {text!r}") from None


# -- trace -------------------------------------------------------------------------


def cmd_trace(args) -> int:
    da = _alphabet(args.alphabet)
    words = [traces.phi_word(da, da.parse_word(w)) for w in args.words]
    need = {"nf": 1, "foata": 1, "equiv": 2, "concat": 2, "prefix": 2}[args.op]
    if len(words) != need:
        raise InputError(f"trace {args.op} takes {need} word(s)")
    if args.op == "nf":
        print(words[0])
    elif args.op == "foata":
        steps = traces.foata_normal_form(words[0])
        print("".join("(" + da.format_word(s) + ")" for s in steps) or "ε")
    elif args.op == "equiv":
        print("true" if words[0] == words[1] else "false")
    elif args.op == "concat":
        print(traces.concat(*words))
    elif args.op == "prefix":
        z = traces.is_prefix(*words)
        print("none" if z is None else f"suffix {z}")
    return 0


def cmd_metric(args) -> int:
    da = _alphabet(args.alphabet)
    s, t = (traces.phi_word(da, da.parse_word(w)) for w in (args.s, args.t))
    agreement = metric.l_pref(s, t, args.cap)
    print(f"l_pref={agreement} d_pref={metric.format_distance(metric.dyadic(agreement))}")
    return 0


# -- omega -------------------------------------------------------------------------


def cmd_omega(args) -> int:
    if args.op == "delta":
        W = _automaton(args.automaton, "finite")
        x = automata.parse_up(_need(args.word, "delta"), W.alphabet)
        print("true" if automata.delta_membership(W, x) else "false")
        return 0
    A = _automaton(args.automaton, "buchi")
    if args.op == "accepts":
        x = automata.parse_up(_need(args.word, "accepts"), A.alphabet)
        print("true" if automata.buchi_accepts(A, x) else "false")
    elif args.op == "empty":
        w = automata.buchi_nonempty(A)
        print("empty" if w is None else f"nonempty witness {w.format(A.alphabet)}")
    elif args.op == "decompose":
        comps = automata.decompose_monoalphabetic(A)
        print(f"{len(comps)} components")
        for i, c in enumerate(comps):
            u = next(c.U.words(64), ())
            v = next(c.V.words(64), ())
            print(
                f"component {i}: state={c.state} alph_U={{{','.join(sorted(c.alph_U))}}} "
                f"alph_V={{{','.join(sorted(c.alph_V))}}} "
                f"U∋{traces.format_word(u, A.alphabet)} V∋{traces.format_word(v, A.alphabet)}"
            )
    return 0


def _need(value, op):
    if value is None:
        raise InputError(f"omega {op} needs a word u(v)")
    return value


# -- rational ----------------------------------------------------------------------


def cmd_rational(args) -> int:
    if args.op == "from-buchi":
        da = _alphabet(args.alphabet)
        A = _automaton(args.automaton, "buchi")
        lang = rational.from_buchi(da, A)
        print(f"{len(lang)} components")
        for line in lang.describe():
            print(line)
        return 0
    S = _automaton(args.automaton, "finite")
    if args.alphabet:
        da = _alphabet(args.alphabet)
    else:
        # without a dependence alphabet every pair of letters is dependent
        da = traces.validate_alphabet(
            S.alphabet, [(a, b) for a in S.alphabet for b in S.alphabet], allow_isolated=True
        )
    e = rational.TraceEnumeration(da, S)
    if args.op == "psi":
        if args.index is None:
            raise InputError("rational psi needs an index")
        try:
            print(e[args.index])
        except IndexError as exc:
            raise InputError(str(exc)) from None
        return 0
    N, M = _indices(args.n), _indices(args.m)
    try:
        ok = rational.h_continuity_check(e, N, M, args.k)
    except IndexError as exc:
        raise InputError(str(exc)) from None
    print("true" if ok else "false")
    return 0 if ok else 1


# -- sigma11 -----------------------------------------------------------------------


def cmd_sigma11(args) -> int:
    setup = _setup(args)
    fmt = setup.da.format_word
    if args.op == "code-tree":
        t = parse_finite_tree(_read(args.files[0]))
        print(fmt(sigma11.g_code(setup, t)))
        return 0
    if args.op == "build-l":
        R = _automaton(args.files[0], "buchi")
        print(format_automaton(sigma11.build_L_automaton(setup, R)), end="")
        return 0
    if args.op == "path":
        t = parse_regular_tree(_read(args.files[0]))
        R = _automaton(args.files[1], "buchi")
        branch = sigma11.path_exists(t, R)
        if branch is None:
            print("none")
        else:
            labels = t.labels_along(branch)
            print(f"branch {branch.format('lr')} labels {labels.format(setup.sigma)}")
        return 0
    if args.op == "check-lemma":
        t = parse_finite_tree(_read(args.files[0]))
        branch = args.files[1]
        R = _automaton(args.files[2], "buchi")
        k = t.depth if args.depth is None else args.depth
        print("sigma " + fmt(sigma11.witness_sigma(setup, t, branch, k)))
        ok = sigma11.check_lemma_finite(setup, t, branch, R, k)
        print("true" if ok else "false")
        return 0 if ok else 1
    if args.op == "modulus":
        t = parse_finite_tree(_read(args.files[0]))
        s = parse_finite_tree(_read(args.files[1]))
        ok = sigma11.modulus_check(setup, t, s, args.k)
        print(f"cap={sigma11.modulus_cap(args.k)} {'true' if ok else 'false'}")
        return 0 if ok else 1
    raise InputError(f"unknown sigma11 operation {args.op}")


def cmd_battery(args) -> int:
    report = battery.run_battery(seed=args.seed, max_len=args.max_len)
    print(report.render(timing=args.timing), end="")
    return 0 if report.passed else 1


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realtrace", description="Mazurkiewicz traces and ω-regular languages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="finite trace operations")
    p.add_argument("op", choices=["nf", "equiv", "concat", "prefix", "foata"])
    p.add_argument("alphabet")
    p.add_argument("words", nargs="+")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("metric", help="prefix metric between two traces")
    p.add_argument("alphabet")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("--cap", type=int, default=8)
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("omega", help="Büchi automata and UP words")
    p.add_argument("op", choices=["accepts", "empty", "delta", "decompose"])
    p.add_argument("automaton")
    p.add_argument("word", nargs="?")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("rational", help="rational trace languages")
    p.add_argument("op", choices=["from-buchi", "psi", "hcheck"])
    p.add_argument("args", nargs="+")
    p.add_argument("--alphabet", dest="alphabet_opt")
    p.add_argument("--n", default="")
    p.add_argument("--m", default="")
    p.add_argument("--k", type=int, default=0)
    p.set_defaults(func=cmd_rational)

    p = sub.add_parser("sigma11", help="tree coding construction")
    p.add_argument("op", choices=["code-tree", "build-l", "path", "check-lemma", "modulus"])
    p.add_argument("files", nargs="+")
    p.add_argument("--sigma", default="0,1", help="comma-separated label letters")
    p.add_argument("--depth", type=int)
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(func=cmd_sigma11)

    p = sub.add_parser("battery", help="run every acceptance suite")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--timing", action="store_true", help="append wall time (breaks byte-identity)")
    p.set_defaults(func=cmd_battery)
    return parser


_ARITY = {
    "sigma11": {"code-tree": 1, "build-l": 1, "path": 2, "check-lemma": 3, "modulus": 2},
}


def _normalize_rational(args):
    """``from-buchi ALPHABET AUTOMATON``, ``psi AUTOMATON I``,
    ``hcheck AUTOMATON`` (alphabet via ``--alphabet``)."""
    pos = args.args
    args.index = None
    if args.op == "from-buchi":
        if len(pos) != 2:
            raise InputError("rational from-buchi takes ALPHABET AUTOMATON")
        args.alphabet, args.automaton = pos
        return
    args.alphabet = args.alphabet_opt
    args.automaton = pos[0]
    if args.op == "psi":
        if len(pos) == 3 and args.alphabet is None:
            args.alphabet, args.automaton = pos[0], pos[1]
            pos = pos[1:]
        if len(pos) != 2:
            raise InputError("rational psi takes AUTOMATON INDEX")
        try:
            args.index = int(pos[1])
        except ValueError:
            raise InputError(f"index must be an integer, got {pos[1]!r}") from None
    elif len(pos) != 1:
        raise InputError("rational hcheck takes AUTOMATON")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "rational":
            _normalize_rational(args)
        if args.command == "sigma11":
            need = _ARITY["sigma11"][args.op]
            if len(args.files) != need:
                raise InputError(f"sigma11 {args.op} takes {need} positional argument(s)")
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
