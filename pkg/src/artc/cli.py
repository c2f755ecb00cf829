"""Command-line entry point: ``artc <command> INPUT [options]``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Sequence

from . import __version__
from .errors import ArtcError, HypothesisError, VerificationError
from .euler import DEFAULT_MAX_VERTICES, chi_direct, chi_of_join_factors, chi_recursive
from .fock import (
    DEFAULT_LENGTH,
    CheckResult,
    Representation,
    build_basis,
    check_relations,
    eq6_check,
    vacuum_rank,
    word_oracle,
)
from .graph import FORMATS, Graph, complement_connected, join_decompose, parse_graph, select_removal
from .kgroups import kgroups_closed_form, kgroups_for_graph, kgroups_toeplitz, pv_truncated, same_kgroups
from .words import (
    Delta,
    StarWord,
    delta_check,
    format_reduced,
    omega_enumerate,
    parse_star_word,
    reduce,
    reduced_to_json,
    star_word_to_json,
)

EPILOG = """\
exit codes: 0 success, 1 parse error, 2 hypothesis violation, 3 resource limit,
4 oracle instability, 5 verification failure.

Each join factor G_n is reported as O_{1+|chi(G_n)|}. O_1 stands for the unital
Kirchberg algebra with K0 = Z (generated by the unit) and K1 = Z. For infinite
graphs one sets chi = infinity and obtains O_infinity; finite inputs never
reach that case.
"""


def cuntz_symbol(chi: int) -> str:
    return f"O_{1 + abs(chi)}"


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_graph(args) -> Graph:
    return parse_graph(_read_input(args.input), args.format)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _group_text(k) -> str:
    return f"K0 = {k.k0}, K1 = {k.k1}"


# -- commands ----------------------------------------------------------------


def cmd_classify(args) -> int:
    g = _load_graph(args)
    summary = {"vertices": g.n, "edges": g.edge_count(), "labels": list(g.labels)}
    try:
        d = join_decompose(g)
    except HypothesisError as exc:
        payload = {"input": summary, "hypothesis": {"satisfied": False, "dominated": exc.labels}}
        _emit(args, payload, f"hypothesis violated: dominated vertices {', '.join(exc.labels)}")
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    chis = chi_of_join_factors(d, args.max_clique_vertices)
    factors = []
    lines = [f"graph: {g.n} vertices, {g.edge_count()} edges", "hypothesis: satisfied", ""]
    for f, e in zip(d.factors, chis):
        k = kgroups_for_graph(f, args.oracle)
        if k.chi != e.chi:
            raise VerificationError(f"factor {list(f.labels)}: chi {e.chi} but K-theory step gives {k.chi}")
        t = kgroups_toeplitz(e.chi)
        sym = cuntz_symbol(e.chi)
        entry = {
            "vertices": list(f.labels),
            "chi": e.chi,
            "symbol": sym,
            "K0": k.k0.to_json(),
            "K1": k.k1.to_json(),
            "toeplitz": {"K0": t.k0.to_json(), "K1": t.k1.to_json(), "extension_multiplier": t.extension_multiplier},
        }
        if k.oracle is not None:
            entry["oracle_agrees"] = True
        if sym == "O_1":
            entry["note"] = "O_1: unital Kirchberg algebra, K0 = Z generated by the unit, K1 = Z"
        factors.append(entry)
        lines.append(f"factor {{{', '.join(f.labels)}}}: chi = {e.chi}, {sym}")
        lines.append(f"  quotient: {_group_text(k)}" + ("  (unit generates K0)" if sym == "O_1" else ""))
        lines.append(f"  toeplitz: {_group_text(t)}")
    symbol = " ⊗ ".join(f["symbol"] for f in factors)
    lines += ["", f"C*_Q = {symbol}"]
    payload = {"input": summary, "hypothesis": {"satisfied": True, "dominated": []},
               "factors": factors, "symbol": symbol}
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_chi(args) -> int:
    g = _load_graph(args)
    payload: dict = {"vertices": g.n}
    lines = []
    if args.method in ("direct", "both"):
        r = chi_direct(g, args.max_clique_vertices)
        payload["direct"] = r.chi
        payload["clique_counts"] = list(r.profile.counts)
        lines.append(f"direct: {r.chi}")
    if args.method in ("recursive", "both"):
        r = chi_recursive(g, args.max_clique_vertices)
        payload["recursive"] = r.chi
        payload["steps"] = [{"removed": s, "chi_prime": a, "chi_k": b} for s, a, b in r.steps]
        lines.append(f"recursive: {r.chi}")
    if args.method == "both":
        agree = payload["direct"] == payload["recursive"]
        payload["agree"] = agree
        lines.append("agree" if agree else "DISAGREE")
        if not agree:
            _emit(args, payload, "\n".join(lines))
            raise VerificationError(f"direct chi {payload['direct']} != recursive chi {payload['recursive']}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_kgroups(args) -> int:
    if (args.chi is None) == (args.input is None):
        raise ArtcError("give exactly one of INPUT or --chi")
    if args.chi is not None:
        closed = kgroups_closed_form(args.chi)
        t = kgroups_toeplitz(args.chi)
        payload = {"chi": args.chi, "closed_form": closed.to_json(),
                   "toeplitz": t.to_json()}
        lines = [f"chi = {args.chi}", f"quotient: {_group_text(closed)}", f"toeplitz: {_group_text(t)}"]
        if args.oracle is not None:
            # the pair realised by the edgeless graph: chi(G') = chi + 1, chi(G_k) = 1
            oracle = pv_truncated(args.chi + 1, 1, args.oracle)
            agree = same_kgroups(closed, oracle)
            payload["oracle"] = oracle.to_json()
            payload["agree"] = agree
            lines.append(f"oracle (window {args.oracle}): {_group_text(oracle)}: {'agree' if agree else 'DISAGREE'}")
            if not agree:
                _emit(args, payload, "\n".join(lines))
                raise VerificationError("closed form and truncated sequence disagree")
        _emit(args, payload, "\n".join(lines))
        return 0
    g = _load_graph(args)
    d = join_decompose(g)
    factors = []
    lines = []
    for f in d.factors:
        k = kgroups_for_graph(f, args.oracle or 6)
        entry = {"vertices": list(f.labels), **k.to_json()}
        factors.append(entry)
        lines.append(f"factor {{{', '.join(f.labels)}}}: chi = {k.chi}, {_group_text(k)}"
                     + ("" if k.oracle is None else " (oracle agrees)"))
    _emit(args, {"factors": factors}, "\n".join(lines))
    return 0


def cmd_decompose(args) -> int:
    g = _load_graph(args)
    d = join_decompose(g)
    factors = [
        {"vertices": list(f.labels), "edges": [[f.labels[i], f.labels[j]] for i, j in f.edges()]}
        for f in d.factors
    ]
    lines = [f"{len(factors)} factor(s)"] + [
        "  {" + ", ".join(f["vertices"]) + "}" for f in factors
    ]
    _emit(args, {"factors": factors}, "\n".join(lines))
    return 0


def cmd_reduce(args) -> int:
    g = _load_graph(args)
    text = _read_input(args.word[1:]) if args.word.startswith("@") else args.word
    w = parse_star_word(text, g)
    r = reduce(w, g)
    payload = {"input": star_word_to_json(w, g), "reduced": reduced_to_json(r), "text": format_reduced(r)}
    _emit(args, payload, format_reduced(r))
    return 0


def cmd_omega(args) -> int:
    g = _load_graph(args)
    v = g.index(args.vertex)
    words = omega_enumerate(g, v, args.max_len)
    strings = [" ".join(w.labels()) for w in words]
    payload = {"vertex": args.vertex, "max_len": args.max_len, "count": len(words), "words": strings}
    _emit(args, payload, "\n".join(s if s else "I" for s in strings))
    return 0


def _random_star_word(rng: random.Random, n: int, length: int) -> StarWord:
    return StarWord(tuple((rng.randrange(n), rng.random() < 0.5) for _ in range(length)))


def run_verify(g: Graph, L: int, samples: int = 100, seed: int = 0, delta_len: int = 3) -> list[CheckResult]:
    """Full identity suite on ``g`` at truncation length ``L``."""
    rep = Representation(build_basis(g, L))
    checks = list(check_relations(g, L, rep=rep).checks)
    checks.append(CheckResult("vacuum rank = 1", "full", abs(vacuum_rank(g, L, rep=rep) - 1)))
    if g.n >= 3 and complement_connected(g):
        checks.append(eq6_check(g, select_removal(g), L, rep=rep))
    if g.n >= 2 and complement_connected(g):
        for v in range(g.n):
            omega = omega_enumerate(g, v, delta_len)
            bad = 0
            for p in omega:
                for q in omega:
                    want = Delta.IDENTITY if p.letters == q.letters else Delta.ZERO
                    bad += delta_check(p, q, g, v) is not want
            checks.append(CheckResult(f"delta V_{g.labels[v]}: {len(omega)}^2 pairs", f"omega len<={delta_len}", bad))
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        w = _random_star_word(rng, g.n, rng.randint(0, max(0, L - 2)))
        bad += not word_oracle(w, reduce(w, g), g, L)
    checks.append(CheckResult(f"word oracle: {samples} random words", f"len<=L-|w|, L={L}", bad))
    return checks


def cmd_verify(args) -> int:
    g = _load_graph(args)
    checks = run_verify(g, args.fock_length, args.samples, args.seed)
    passed = all(c.passed for c in checks)
    payload = {"fock_length": args.fock_length, "checks": [c.to_json() for c in checks], "passed": passed}
    lines = [f"{'ok  ' if c.passed else 'FAIL'} {c.name} [{c.subspace}] residual {c.residual}" for c in checks]
    lines.append("all checks passed" if passed else "verification FAILED")
    _emit(args, payload, "\n".join(lines))
    return 0 if passed else VerificationError.exit_code


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="edge-json", help="input graph format")
    common.add_argument("--json", action="store_true", help="emit deterministic JSON")
    common.add_argument("--max-clique-vertices", type=int, default=DEFAULT_MAX_VERTICES,
                        help="refuse clique enumeration above this many vertices")

    p = argparse.ArgumentParser(
        prog="artc",
        description="Classify boundary quotients of right-angled Artin monoid C*-algebras.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"artc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text,
                            epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    sp = add("classify", cmd_classify, "full pipeline: factors, chi, Cuntz symbols, K-groups")
    sp.add_argument("input", help="graph file, or - for stdin")
    sp.add_argument("--oracle", type=int, default=6, metavar="N",
                    help="window for the truncated Pimsner-Voiculescu cross-check (default 6)")

    sp = add("chi", cmd_chi, "graph Euler characteristic")
    sp.add_argument("input")
    sp.add_argument("--method", choices=("direct", "recursive", "both"), default="both")

    sp = add("kgroups", cmd_kgroups, "K-groups of each factor, or of an explicit chi")
    sp.add_argument("input", nargs="?")
    sp.add_argument("--chi", type=int)
    sp.add_argument("--oracle", type=int, metavar="N", help="also run the truncated sequence at window N")

    sp = add("decompose", cmd_decompose, "split into join factors")
    sp.add_argument("input")

    sp = add("reduce", cmd_reduce, "reduce a word in V_s, V_s* to the form w1 w2* or ZERO")
    sp.add_argument("input")
    sp.add_argument("--word", required=True,
                    help='JSON list like [{"v":"1","star":true}], or @FILE')

    sp = add("omega", cmd_omega, "words that cannot be commuted past V_v")
    sp.add_argument("input")
    sp.add_argument("--vertex", required=True, help="vertex label v")
    sp.add_argument("--max-len", type=int, default=3)

    sp = add("verify", cmd_verify, "run the operator identity suite in the truncated Fock space")
    sp.add_argument("input")
    sp.add_argument("--fock-length", type=int, default=DEFAULT_LENGTH, metavar="L")
    sp.add_argument("--samples", type=int, default=100, help="random words for the reduction oracle")
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ArtcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyError as exc:
        print(f"error: unknown vertex {exc.args[0]!r}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
