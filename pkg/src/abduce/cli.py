"""Command line front end.

`abduce run problem.smt2` streams implicates as they survive the
store's redundancy checks. Clause lines are plain; everything else is
a `;` comment, so filtering comments out of stdout leaves exactly the
stored clause set (`; retracted:` lines flag earlier output a later,
stronger implicate displaced). `abduce bench manifest.json` runs a
batch and writes a timing report with figures.
"""

from __future__ import annotations

import argparse
import sys

from . import report
from .abducibles import generate, literal_order_key, load_file
from .core import AbduceError, LiteralTable, format_clause, format_hypotheses
from .engine import Always, SearchConfig, SizeLimit, run_search
from .oracle import open_session, resolve_backend
from .problem import load_problem
from .store import ImplicateStore


def run_command(args) -> int:
    try:
        problem = load_problem(args.problem, logic_override=args.logic)
    except OSError as e:
        print("cannot read problem: %s" % e, file=sys.stderr)
        return 2
    except AbduceError as e:
        print("parse failure: %s" % e, file=sys.stderr)
        return 2

    table = LiteralTable()
    try:
        config = resolve_backend(args.backend)
        config.query_timeout = args.query_timeout
        if args.no_models:
            config.produce_models = False
        with open_session(problem, table, config, bare=True) as seed_session:
            if args.abducibles:
                abducibles = load_file(
                    args.abducibles, table, problem=problem, session=seed_session
                )
            else:
                abducibles = generate(
                    problem,
                    table,
                    args.abduce_depth,
                    include_inequalities=args.abduce_ineq,
                    session=seed_session,
                )
    except OSError as e:
        print("cannot read abducibles: %s" % e, file=sys.stderr)
        return 2
    except AbduceError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2

    if not abducibles.literals:
        print("; no abducible literals", flush=True)
        print("; implicates: 0", flush=True)
        return 0

    search = SearchConfig(
        algorithm=args.algorithm,
        predicate=SizeLimit(args.size_limit) if args.size_limit else Always(),
        model_pruning=not args.no_model_pruning,
        fix_entailment=args.fix_mode == "entailment",
        unit_mode=args.u_mode,
        time_budget_s=args.timeout,
        max_implicates=args.max_implicates,
    )

    try:
        with open_session(
            problem, table, config, model_atoms=abducibles.atoms()
        ) as main_session, open_session(
            problem, table, config, bare=True
        ) as engine_bare, open_session(
            problem, table, config, bare=True
        ) as store_bare:
            store = ImplicateStore(
                table, store_bare, sort_key=literal_order_key(abducibles)
            )

            def emit(clause):
                accepted, removed = store.add_minimal(clause)
                if accepted:
                    print(format_clause(clause, table), flush=True)
                    print("; hypothesis: %s" % format_hypotheses(clause, table),
                          flush=True)
                for gone in removed:
                    print("; retracted: %s" % format_clause(gone, table), flush=True)
                return accepted

            stats = run_search(main_session, engine_bare, abducibles, search, emit)
            calls = (
                main_session.stats.checks
                + engine_bare.stats.checks
                + store_bare.stats.checks
            )
    except AbduceError as e:
        print("backend failure: %s" % e, file=sys.stderr)
        return 2

    reasons = stats.flags.incomplete_reasons()
    print("; implicates: %d" % stats.accepted, flush=True)
    print("; retracted: %d" % store.stats.removed, flush=True)
    print("; oracle-calls: %d" % calls, flush=True)
    if stats.first_emit_s is not None:
        print("; first-implicate-s: %.3f" % stats.first_emit_s, flush=True)
    print("; total-s: %.3f" % stats.total_s, flush=True)
    print("; incomplete: %s" % (",".join(reasons) if reasons else "no"), flush=True)
    if args.dump_store:
        with open(args.dump_store, "w") as f:
            for line in store.dump_lines():
                f.write(line + "\n")
    return 1 if stats.flags.budget else 0


def bench_command(args) -> int:
    try:
        manifest = report.load_manifest(args.manifest)
    except OSError as e:
        print("cannot read manifest: %s" % e, file=sys.stderr)
        return 2
    except ValueError as e:
        print("bad manifest: %s" % e, file=sys.stderr)
        return 2
    rows = report.run_benchmarks(manifest, jobs=args.jobs)
    report.write_outputs(rows, args.out)
    for row in rows:
        print(
            "%s size=%s %s bucket=%s"
            % (row["name"], row["size_limit"], row["status"], row["bucket"]),
            flush=True,
        )
    print("report written to %s" % args.out, flush=True)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="abduce",
        description="Generate implicates over abducible literals via a "
        "satisfiability oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="search one problem, stream implicates")
    run.add_argument("problem", help="SMT-LIB 2 problem file")
    run.add_argument("--backend", default=None,
                     help="oracle: 'internal', 'tinysmt', or a solver command "
                     "reading SMT-LIB on stdin (default: $ABDUCE_BACKEND or tinysmt)")
    run.add_argument("--logic", default=None, help="override the set-logic tag")
    run.add_argument("--abducibles", default=None,
                     help="file of abducible literals, one per line")
    run.add_argument("--abduce-depth", type=int, default=1,
                     help="term height for generated equality abducibles (default 1)")
    run.add_argument("--abduce-ineq", action="store_true",
                     help="also generate integer inequality abducibles")
    run.add_argument("--size-limit", type=int, default=None,
                     help="maximum implicate size")
    run.add_argument("--algorithm", choices=["bp", "imp"], default="imp",
                     help="bp: plain recursive enumeration; imp: ordered search "
                     "with model pruning (default)")
    run.add_argument("--no-model-pruning", action="store_true",
                     help="disable pruning branches via countermodels")
    run.add_argument("--no-models", action="store_true",
                     help="never request models from the backend")
    run.add_argument("--timeout", type=float, default=None,
                     help="overall time budget in seconds")
    run.add_argument("--query-timeout", type=float, default=5.0,
                     help="per-query backend timeout in seconds (default 5)")
    run.add_argument("--max-implicates", type=int, default=None,
                     help="stop after this many accepted implicates")
    run.add_argument("--fix-mode", choices=["syntactic", "entailment"],
                     default="syntactic",
                     help="candidate filtering: syntactic only, or also drop "
                     "literals the oracle proves forced (default syntactic)")
    run.add_argument("--u-mode", choices=["hypotheses", "units"],
                     default="hypotheses",
                     help="unit clause source for early emission (default hypotheses)")
    run.add_argument("--dump-store", default=None, metavar="PATH",
                     help="write the final store contents to PATH")
    run.set_defaults(func=run_command)

    bench = sub.add_parser("bench", help="run a manifest of problems, write a report")
    bench.add_argument("manifest", help="JSON manifest of problems and settings")
    bench.add_argument("--out", default="bench-out", help="output directory")
    bench.add_argument("--jobs", type=int, default=1,
                       help="worker processes (default 1)")
    bench.set_defaults(func=bench_command)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
