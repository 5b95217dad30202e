"""Command-line front door.

Exit codes: 0 success or positive verdict, 1 well-formed negative verdict
(invalid plan, unsatisfiable, failed experiment row), 2 usage or input
error, 3 cap or budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import grammar as grammar_mod
from . import model, oracles, representations, sat3
from .constructions import (
    CounterSpec,
    all_instances_instance,
    counter_instance,
    indexed_plans_instance,
    sat_verifier_instance,
    to_unary,
)
from .errors import CapExceededError, FormatError, PlanrepError
from .experiments import EXPERIMENTS, run_experiment

STREAM_GUARD = 1 << 20

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reserves 2 for usage errors
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (FormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except PlanrepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planrep",
        description="Generate, validate, compress, and probe plans and "
        "their compact representations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance from a built-in family")
    gen.add_argument(
        "family",
        choices=["counter", "gray", "indexed", "satverify", "allinst", "unary"],
    )
    gen.add_argument("-n", type=int, help="size parameter")
    gen.add_argument("-i", type=int, default=0, help="clause-subset index")
    gen.add_argument("--target", type=int, help="counter target (default: all ones)")
    gen.add_argument("-f", "--file", help="input instance (family 'unary')")
    gen.set_defaults(handler=_cmd_gen)

    val = sub.add_parser("validate", help="execute a plan file against an instance")
    val.add_argument("-i", "--instance", required=True)
    val.add_argument("-p", "--plan", required=True)
    val.set_defaults(handler=_cmd_validate)

    solve = sub.add_parser("solve", help="breadth-first optimal search")
    solve.add_argument("-i", "--instance", required=True)
    solve.add_argument("--count-optimal", action="store_true")
    solve.set_defaults(handler=_cmd_solve)

    access = sub.add_parser("access", help="random access into a representation")
    access.add_argument("--rep", required=True)
    access.add_argument("--index", type=int, required=True)
    access.set_defaults(handler=_cmd_access)

    stream = sub.add_parser("stream", help="stream a representation's actions")
    stream.add_argument("--rep", required=True)
    stream.add_argument("--limit", type=int)
    stream.add_argument("--force", action="store_true")
    stream.set_defaults(handler=_cmd_stream)

    compress = sub.add_parser("compress", help="induce a grammar from a plan file")
    compress.add_argument("-p", "--plan", required=True)
    compress.set_defaults(handler=_cmd_compress)

    verify = sub.add_parser("verify-rep", help="check a representation against an instance")
    verify.add_argument("-i", "--instance", required=True)
    verify.add_argument("--rep", required=True)
    verify.add_argument("--budget", type=int)
    verify.set_defaults(handler=_cmd_verify_rep)

    analyze = sub.add_parser("analyze", help="atom-dependency graph analysis")
    analyze.add_argument("-i", "--instance", required=True)
    analyze.add_argument("--causal-graph", action="store_true", required=True)
    analyze.add_argument("--refined", action="store_true")
    analyze.set_defaults(handler=_cmd_analyze)

    sat = sub.add_parser("sat3", help="clause enumeration and brute-force checks")
    sat_sub = sat.add_subparsers(dest="sat_command", required=True)
    sat_list = sat_sub.add_parser("list", help="print the clause table")
    sat_list.add_argument("-n", type=int, required=True)
    sat_list.set_defaults(handler=_cmd_sat3_list)
    sat_check = sat_sub.add_parser("check", help="verdict and witness for one subset")
    sat_check.add_argument("-n", type=int, required=True)
    sat_check.add_argument("-i", type=int, required=True)
    sat_check.set_defaults(handler=_cmd_sat3_check)

    experiment = sub.add_parser("experiment", help="run a verification experiment")
    experiment.add_argument("name", choices=list(EXPERIMENTS))
    experiment.add_argument("-n", type=int, required=True)
    experiment.set_defaults(handler=_cmd_experiment)

    return parser


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _load_instance(path: str) -> model.StripsInstance:
    return model.parse_instance(_read(path))


def _load_rep(ref: str):
    """A builtin URI, or the path of a grammar file."""
    if ref.startswith("builtin:"):
        return representations.resolve_builtin(ref)
    return grammar_mod.parse_grammar(_read(ref))


def _cmd_gen(args) -> int:
    family = args.family
    if family == "unary":
        if not args.file:
            raise ValueError("gen unary needs -f/--file with the input instance")
        instance = to_unary(_load_instance(args.file))
    else:
        if args.n is None:
            raise ValueError(f"gen {family} needs -n")
        if family in ("counter", "gray"):
            target = args.target if args.target is not None else (1 << args.n) - 1
            encoding = "binary" if family == "counter" else "gray"
            instance = counter_instance(CounterSpec(args.n, target, encoding))
        elif family == "indexed":
            instance = indexed_plans_instance(args.n)
        elif family == "satverify":
            instance = sat_verifier_instance(args.n, args.i)
        else:
            instance = all_instances_instance(args.n)
    sys.stdout.write(model.serialize_instance(instance))
    return EXIT_OK


def _cmd_validate(args) -> int:
    instance = _load_instance(args.instance)
    plan = model.parse_plan(_read(args.plan))
    trace = model.validate_plan(instance, plan)
    if trace.valid:
        print("valid")
        return EXIT_OK
    print(f"invalid step={trace.failure_step}")
    return EXIT_NEGATIVE


def _cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    result = oracles.bfs_solve(instance)
    if result.plan is None:
        print("# no plan")
        return EXIT_NEGATIVE
    print(f"# length: {result.optimal_length}")
    for name in result.plan:
        print(name)
    if args.count_optimal:
        print(f"# optimal plans: {oracles.count_optimal_plans(instance)}")
    return EXIT_OK


def _rep_as_random_access(rep):
    if isinstance(rep, grammar_mod.MacroGrammar):
        return representations.grammar_crar(rep)
    return rep


def _cmd_access(args) -> int:
    rep = _rep_as_random_access(_load_rep(args.rep))
    if not isinstance(rep, representations.RandomAccessRep):
        raise ValueError("representation has no random access; use 'stream'")
    print(rep.access(args.index))
    return EXIT_OK


def _cmd_stream(args) -> int:
    rep = _load_rep(args.rep)
    guard_message = (
        f"error: stream exceeds {STREAM_GUARD} actions; pass --limit or --force"
    )
    if isinstance(rep, grammar_mod.MacroGrammar):
        length = grammar_mod.macro_lengths(rep)[rep.root]
        if args.limit is None and not args.force and length > STREAM_GUARD:
            print(guard_message, file=sys.stderr)
            return EXIT_USAGE
        rep = representations.macro_stream(rep, limit=args.limit)
    if isinstance(rep, representations.RandomAccessRep):
        if args.limit is None and not args.force and rep.length > STREAM_GUARD:
            print(guard_message, file=sys.stderr)
            return EXIT_USAGE
        rep = representations.crar_to_csar(rep)
    emitted = 0
    for name in rep:
        if args.limit is not None and emitted >= args.limit:
            break
        if args.limit is None and not args.force and emitted >= STREAM_GUARD:
            print(guard_message, file=sys.stderr)
            return EXIT_USAGE
        print(name)
        emitted += 1
    return EXIT_OK


def _cmd_compress(args) -> int:
    plan = model.parse_plan(_read(args.plan))
    induced = grammar_mod.induce_grammar(plan)
    sys.stdout.write(grammar_mod.serialize_grammar(induced))
    return EXIT_OK


def _cmd_verify_rep(args) -> int:
    instance = _load_instance(args.instance)
    rep = _load_rep(args.rep)
    if isinstance(rep, grammar_mod.MacroGrammar):
        rep = representations.macro_stream(rep)
    verdict = representations.verify_representation(instance, rep, budget=args.budget)
    if verdict.status == "valid":
        print(f"valid length={verdict.steps}")
        return EXIT_OK
    if verdict.status == "invalid":
        print(f"invalid step={verdict.failure_step}")
        return EXIT_NEGATIVE
    print(f"budget exceeded after {verdict.steps} steps")
    return EXIT_CAP


def _cmd_analyze(args) -> int:
    instance = _load_instance(args.instance)
    graph = (
        oracles.refined_causal_graph(instance)
        if args.refined
        else oracles.causal_graph(instance)
    )
    components, acyclic = oracles.scc_and_acyclicity(graph)
    kind = "refined causal graph" if args.refined else "causal graph"
    print(f"# {kind}: atoms={len(graph.nodes)} edges={len(graph.edges)}")
    for u, v in graph.sorted_edges():
        print(f"{graph.nodes[u]} -> {graph.nodes[v]}")
    sizes = sorted((len(c) for c in components), reverse=True)
    print(f"# components: {len(components)} sizes={sizes} acyclic={str(acyclic).lower()}")
    return EXIT_OK


def _cmd_sat3_list(args) -> int:
    for j, clause in enumerate(sat3.enumerate_clauses(args.n), start=1):
        tokens = [
            ("!" if negated else "") + f"x{var}" for var, negated in clause.literals
        ]
        print(f"{j} " + " ".join(tokens))
    return EXIT_OK


def _cmd_sat3_check(args) -> int:
    inst = sat3.instance_from_index(args.n, args.i)
    sat, witness = sat3.is_satisfiable(inst)
    if sat:
        print(f"satisfiable witness={witness:0{args.n}b}")
        return EXIT_OK
    print("unsatisfiable")
    return EXIT_NEGATIVE


def _cmd_experiment(args) -> int:
    report = run_experiment(args.name, args.n)
    sys.stdout.write(report.to_csv())
    return EXIT_OK if report.all_passed else EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
