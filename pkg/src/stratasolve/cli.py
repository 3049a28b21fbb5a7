"""Command-line front end.

Exit status: 0 on success or when models exist, 10 when the program has no
stable model, 1 on usage or input errors.

JSON output (``--format json``) is one document per run with a ``command``
key; ``solve`` adds ``models`` (lists of true atoms, sorted), ``classify``
adds ``t_pi``, ``saturated``, ``stratified`` and ``nodes``.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import kernels
from .aas import Nogood, aas_solve, query_atom, solve_one
from .bench import format_table, run_bench, summary
from .firstorder import ProgramError, SafetyError, faas_solve, ground, is_first_order, parse_program
from .graphs import build_super_graph, omega_index
from .kb import KnowledgeBase, ParseError, parse_kb, parse_statements
from .semantics import BruteForceCapError, brute_force_stable_models, instability_reason

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_MODEL = 10


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_kb(args) -> KnowledgeBase:
    text = _read(args.input)
    if is_first_order(text):
        return ground(parse_program(text), guided=getattr(args, "guided", False))
    return parse_kb(text)


def _nogoods(args, kb: KnowledgeBase) -> list[frozenset[int]] | None:
    if not args.nogoods_from_file:
        return None
    out = list(kb.nogoods)
    for st in parse_statements(_read(args.nogoods_from_file)):
        if st.kind != "nogood":
            raise InputError(f"line {st.line}: only #nogood statements are allowed in a nogood file")
        names = [a.text() for a in st.pos]
        unknown = [n for n in names if n not in kb]
        if unknown:
            raise InputError(f"line {st.line}: unknown atom {unknown[0]} in nogood")
        out.append(kb.ids(names))
    return out


def _emit(args, text: str, doc: dict) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def _model_lists(ms) -> list[list[str]]:
    return sorted(sorted(s) for s in ms.name_sets())


# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    text = _read(args.input)
    if is_first_order(text) and args.engine == "auto" and not args.nogoods_from_file and not args.one:
        program = parse_program(text)
        models = _model_lists(faas_solve(program, guided=args.guided))
    else:
        kb = ground(parse_program(text), guided=args.guided) if is_first_order(text) else parse_kb(text)
        nogoods = _nogoods(args, kb)
        if args.one:
            pi = solve_one(kb, nogoods, engine=args.engine, strict_convert=args.strict_convert)
            models = [] if pi is None else [sorted(kb.names_of(pi.true))]
        elif args.engine == "brute":
            ms = brute_force_stable_models(kb, cap=args.max_brute_atoms)
            ngs = [Nogood(ng) for ng in (kb.nogoods if nogoods is None else nogoods)]
            models = _model_lists(ms.filter(lambda g: all(ng.complies(g) for ng in ngs)))
        else:
            ms = aas_solve(kb, nogoods, engine=args.engine, strict_convert=args.strict_convert,
                           parallel=args.parallel)
            models = _model_lists(ms)
    lines = [(" ".join(m) or "{}") + "\n" for m in models]
    if not models:
        lines = ["no stable model\n"]
    _emit(args, "".join(lines), {"command": "solve", "count": len(models), "models": models})
    return EXIT_OK if models else EXIT_NO_MODEL


def cmd_classify(args) -> int:
    kb = _load_kb(args)
    sg = build_super_graph(kb, cap=args.omega_cap)
    idx = omega_index(kb, cap=args.omega_cap, sg=sg)
    t = f">={idx.t_pi}" if idx.saturated else str(idx.t_pi)
    header = f"Ω_{t}" + (" (stratified)" if idx.stratified else "") + "\n"
    rows = ["node  v  k  c  t  atoms\n"]
    for i, nd in enumerate(idx.per_node):
        rows.append(f"{i:<4}  {nd.v}  {nd.k}  {nd.c}  {nd.t}  {' '.join(nd.atoms)}\n")
    doc = {
        "command": "classify",
        "t_pi": idx.t_pi,
        "saturated": idx.saturated,
        "stratified": idx.stratified,
        "nodes": [
            {"atoms": list(nd.atoms), "v": nd.v, "k": nd.k, "c": nd.c, "t": nd.t}
            for nd in idx.per_node
        ],
    }
    _emit(args, header + "".join(rows), doc)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(sg.to_dot())
    return EXIT_OK


def cmd_check(args) -> int:
    kb = _load_kb(args)
    cand = parse_statements(_read(args.model))
    names = []
    for st in cand:
        if st.kind != "rule" or st.pos or st.neg:
            raise InputError(f"line {st.line}: a candidate model lists atoms as facts")
        names.append(st.head.text())
    unknown = [n for n in names if n not in kb]
    if unknown:
        raise InputError(f"unknown atom {unknown[0]} in candidate model")
    reason = instability_reason(kb, kb.ids(names))
    verdict = "stable" if reason is None else "not stable"
    text = verdict + ("" if reason is None else f": {reason}") + "\n"
    _emit(args, text, {"command": "check", "stable": reason is None, "reason": reason})
    return EXIT_OK


def cmd_query(args) -> int:
    kb = _load_kb(args)
    if args.atom not in kb:
        raise InputError(f"unknown atom {args.atom}")
    res = query_atom(kb, args.atom, args.mode, _nogoods(args, kb), engine=args.engine)
    answer = "yes" if res.answer else "no"
    note = f" (early stop after {len(res.visited)} of {res.nodes} nodes)" if res.early_stop else ""
    _emit(args, answer + note + "\n", {
        "command": "query", "atom": args.atom, "mode": args.mode, "answer": res.answer,
        "early_stop": res.early_stop, "visited": len(res.visited), "nodes": res.nodes,
    })
    return EXIT_OK


def cmd_ground(args) -> int:
    program = parse_program(_read(args.input))
    kb = ground(program, guided=args.guided)
    _emit(args, kb.render(), {"command": "ground", "atoms": list(kb.names),
                               "rules": [[h, sorted(p), sorted(n)] for h, p, n in kb.named_rules()]})
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = run_bench(args.seed, args.n, args.count, args.stratified, args.max_brute_atoms)
    if args.plot_data:
        with open(args.plot_data, "w", encoding="utf-8") as fh:
            fh.write("t_pi,brute,as1,as2,aas\n")
            for r in rows:
                fh.write(f"{r.t_pi},{'' if r.brute is None else r.brute},{r.as1},{r.as2},{r.aas}\n")
    doc = {"command": "bench", "backend": kernels.BACKEND, "rows": [r.as_dict() for r in rows],
           "summary": summary(rows)}
    _emit(args, format_table(rows), doc)
    return EXIT_OK


# ---------------------------------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1, like input errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--engine", choices=("auto", "as1", "as2", "brute"), default="auto",
                        help="per-component enumerator (default: cheaper of as1/as2)")
    common.add_argument("--strict-convert", action="store_true",
                        help="keep rules whose positive body holds a false child atom")
    common.add_argument("--nogoods-from-file", metavar="FILE",
                        help="extra '#nogood a b.' statements")
    common.add_argument("--max-brute-atoms", type=int, default=20, metavar="N")
    common.add_argument("--omega-cap", type=int, default=1 << 62, metavar="N",
                        help="saturation cap for the Omega index")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--parallel", action="store_true", help="solve independent components concurrently")
    common.add_argument("--guided", action="store_true",
                        help="ground only instances whose positive body may hold")

    p = _ArgumentParser(prog="stratasolve", description="Stable model solver with Omega classification.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="print every stable model")
    s.add_argument("input", nargs="?", default="-", help="program file, or - for stdin")
    s.add_argument("--one", action="store_true", help="stop after the first model")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("classify", parents=[common], help="report the Omega index",
                       description="Print t_Pi and a per-component table.  --dot writes the "
                                   "dependency graph in Graphviz DOT: one node per atom, one "
                                   "edge per body-to-head dependency, negative edges dashed "
                                   "with label \"not\", multi-atom components as clusters.")
    c.add_argument("input", nargs="?", default="-")
    c.add_argument("--dot", metavar="FILE", help="write the graph in DOT format")
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("check", parents=[common], help="test whether a set of atoms is stable")
    k.add_argument("input")
    k.add_argument("model", help="file listing the true atoms as facts")
    k.set_defaults(func=cmd_check)

    q = sub.add_parser("query", parents=[common], help="cautious or brave query")
    q.add_argument("input")
    q.add_argument("atom")
    q.add_argument("--mode", choices=("cautious", "brave"), default="cautious")
    q.set_defaults(func=cmd_query)

    g = sub.add_parser("ground", parents=[common], help="print the ground program")
    g.add_argument("input", nargs="?", default="-")
    g.set_defaults(func=cmd_ground)

    b = sub.add_parser("bench", parents=[common], help="time the solvers on random programs")
    b.add_argument("--n", type=int, default=10)
    b.add_argument("--count", type=int, default=50)
    b.add_argument("--stratified", action="store_true")
    b.add_argument("--plot-data", metavar="FILE", help="CSV of runtimes against t_Pi")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_brute_atoms <= 0 or args.omega_cap <= 1:
        parser.error("caps must be positive")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return args.func(args)
    except ParseError as exc:
        print(f"stratasolve: parse error: {exc}", file=sys.stderr)
    except SafetyError as exc:
        for v in exc.violations:
            print(f"stratasolve: {v}", file=sys.stderr)
    except (InputError, ProgramError, BruteForceCapError) as exc:
        print(f"stratasolve: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
