"""Command-line interface.

Issue and candidate indices are printed 1-based (candidate 1 is the target).
Exit statuses: 0 success, 2 usage error, 3 parse error, 4 capacity error,
5 realization error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from issue_control import __version__
from issue_control.election import Domain, SolveOutcome, TieRule, evaluate
from issue_control.errors import CapacityError, InstanceParseError, RealizationError, UsageError
from issue_control.exact import DEFAULT_MAX_ISSUES, solve_isc_exhaustive, solve_maxsupport_exhaustive
from issue_control.experiment import (
    DEFAULT_SWEEPS,
    SOLVERS,
    ExperimentSpec,
    emit_plots,
    rows_to_csv,
    run_experiment,
    summarize,
    summary_to_text,
)
from issue_control.fileio import (
    load_election,
    load_graph,
    load_hitting_set,
    load_ilp,
    load_x3c,
    loads_json,
    save_election,
    save_margin,
)
from issue_control.generators import GenConfig, GenKind, generate
from issue_control.heuristics import greedy_max_support
from issue_control.ilp import export_ilp
from issue_control.poly import ALGORITHMS, best_single_issue
from issue_control import reductions as red

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAPACITY, EXIT_REALIZATION = 0, 2, 3, 4, 5


def _one_based(issues) -> str:
    return "{" + ",".join(str(k + 1) for k in issues) + "}"


def render_outcome(outcome: SolveOutcome, fmt: str = "text") -> str:
    if fmt == "csv":
        return (
            "issue_set,votes,support,target_wins\n"
            f"{' '.join(str(k + 1) for k in outcome.issue_set)},"
            f"{' '.join(map(str, outcome.votes))},{outcome.target_support},"
            f"{int(outcome.target_wins)}\n"
        )
    return (
        f"issue_set: {_one_based(outcome.issue_set)}\n"
        f"votes: {' '.join(map(str, outcome.votes))}\n"
        f"support: {outcome.target_support}\n"
        f"target_wins: {'yes' if outcome.target_wins else 'no'}\n"
    )


def _load(args):
    election, file_p = load_election(args.instance)
    p = args.p if args.p is not None else file_p
    if election.domain is Domain.BINARY and args.p is None:
        p = 1
    return election, p


def solve_file(path, solver: str = "exhaustive", p: int | None = None, tie="worst",
               max_issues: int = DEFAULT_MAX_ISSUES) -> SolveOutcome:
    """Solve one instance file.

    ``exhaustive`` returns the first winning issue set in canonical order, or
    the Max Support optimum when none exists.
    """
    election, file_p = load_election(path)
    p = file_p if p is None else p
    tie = TieRule.parse(tie)
    if solver == "exhaustive":
        found = solve_isc_exhaustive(election, p, tie, max_issues)
        if found is not None:
            return evaluate(election, found, p, tie)
        return solve_maxsupport_exhaustive(election, p, tie, max_issues)
    if solver == "greedy":
        return greedy_max_support(election, p, tie)
    if solver in ("bsi", "best_single_issue"):
        return best_single_issue(election, tie)
    raise UsageError(f"unknown solver {solver!r}")


def cmd_solve(args) -> int:
    outcome = solve_file(args.instance, args.solver, args.p, args.tie, args.max_issues)
    sys.stdout.write(render_outcome(outcome, args.format))
    return EXIT_OK


def cmd_maxsupport(args) -> int:
    election, p = _load(args)
    outcome = solve_maxsupport_exhaustive(election, p, TieRule.parse(args.tie), args.max_issues)
    sys.stdout.write(render_outcome(outcome, args.format))
    if args.export_lp:
        Path(args.export_lp).write_text(export_ilp(election, p))
    return EXIT_OK


def cmd_greedy(args) -> int:
    election, p = _load(args)
    sys.stdout.write(render_outcome(greedy_max_support(election, p, TieRule.parse(args.tie)), args.format))
    return EXIT_OK


def cmd_poly(args) -> int:
    election, _ = load_election(args.instance)
    if args.algorithm == "bsi":
        outcome = best_single_issue(election, TieRule.parse(args.tie))
        sys.stdout.write(render_outcome(outcome, args.format))
        return EXIT_OK
    fn, _, tie = ALGORITHMS[args.algorithm]
    answer = fn(election)
    print(f"tie_rule: {tie.value}")
    print(f"controllable: {'yes' if answer.decision else 'no'}")
    if answer.witness is not None:
        print(f"witness: {_one_based(answer.witness)}")
    return EXIT_OK


def cmd_export_lp(args) -> int:
    election, p = _load(args)
    text = export_ilp(election, p)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_generate(args) -> int:
    cfg = GenConfig(args.m, args.n, args.l, args.seed, GenKind(args.kind))
    election = generate(cfg)
    p = args.p if args.kind == "gaussian" else 1
    save_election(args.out, election, p)
    return EXIT_OK


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def cmd_reduce(args) -> int:
    source = args.source
    if args.source_kind in ("x3c", "hittingset"):
        if args.lift != "none" or args.realize:
            raise UsageError("--lift and --realize apply to margin constructions only")
        if args.source_kind == "x3c":
            bundle = red.x3c_to_3voter_bisc(load_x3c(source))
        else:
            bundle = red.hitting_set_to_bisc(load_hitting_set(source))
        steps = [bundle.construction]
    else:
        if args.source_kind == "ilp":
            ilp = load_ilp(source)
            bundle = red.ilp_to_svis(ilp) if args.problem == "svis" else red.ilp_to_tcis(ilp)
        else:
            if args.lift != "none":
                raise UsageError("the independent-set construction is an optimization instance; --lift does not apply")
            bundle = red.mis_to_tcms(load_graph(source))
        steps = [bundle.construction]
        single_voter = bundle.construction == "ilp->svis"
        if args.lift == "worstcase":
            lift = red.lift_svis_to_worstcase if single_voter else red.lift_tcis_to_worstcase
            lifted = lift(bundle.margin)
            bundle = red.ReductionBundle(lifted.construction, bundle.source, lifted.margin,
                                         notes={**bundle.notes, **lifted.notes})
            steps.append(lifted.construction)
        if args.realize:
            realize = red.realize_single_voter if single_voter else red.realize_two_candidate
            election = realize(bundle.margin, args.p)
            bundle = red.ReductionBundle(bundle.construction, bundle.source, bundle.margin,
                                         election, bundle.notes)
            steps.append("realize-single-voter" if single_voter else "realize-two-candidate")
    if bundle.election is not None:
        save_election(args.out, bundle.election, args.p if args.realize else 1)
        written = "election"
    else:
        save_margin(args.out, bundle.margin)
        written = "margin"
    sidecar = {
        "tool_version": __version__,
        "source_kind": args.source_kind,
        "source_file": str(source),
        "source_sha256": _sha256(source),
        "steps": steps,
        "lift": args.lift,
        "output_kind": written,
        "p": args.p if args.realize else None,
        "notes": bundle.notes,
    }
    Path(str(args.out) + ".provenance.json").write_text(json.dumps(sidecar, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


_CONFIG_FLAGS = {
    "kind": "kind", "sweep": "sweep_param", "values": "sweep_values", "m": "num_candidates",
    "n": "num_voters", "l": "num_issues", "instances": "instances_per_point", "p": "p",
    "tie": "tie", "seed": "base_seed", "solvers": "solvers", "max_issues": "max_issues",
    "timing": "timing", "workers": "workers",
}


def _experiment_spec(args) -> ExperimentSpec:
    config = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise InstanceParseError(f"cannot read {args.config}: {exc}") from None
        config = loads_json(text, args.config)
        config = {k: (float(v) if type(v).__name__ == "Fraction" else v) for k, v in config.items()}
    for flag, name in _CONFIG_FLAGS.items():
        value = getattr(args, flag)
        if value is not None and value is not False:
            config[name] = value
    if "solvers" in config and isinstance(config["solvers"], str):
        config["solvers"] = [s.strip() for s in config["solvers"].split(",") if s.strip()]
    if "sweep_values" not in config:
        config["sweep_values"] = DEFAULT_SWEEPS[config.get("sweep_param", "m")]
    return ExperimentSpec.from_dict(config)


def cmd_experiment(args) -> int:
    spec = _experiment_spec(args)
    rows = run_experiment(spec)
    text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    summary = summary_to_text(summarize(rows))
    if args.summary:
        Path(args.summary).write_text(summary)
    if args.out:
        sys.stdout.write(summary)
    return EXIT_OK


def cmd_plot(args) -> int:
    series = emit_plots(args.csv, args.out_dir)
    for param in series:
        print(Path(args.out_dir) / f"ratio_vs_{param}.svg")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(sub, p_default=None):
    sub.add_argument("instance", help="election instance file (JSON)")
    sub.add_argument("--p", type=int, default=p_default, help="norm order (default: from file)")
    sub.add_argument("--tie", choices=("best", "worst"), default="worst")
    sub.add_argument("--format", choices=("text", "csv"), default="text")
    sub.add_argument("--max-issues", type=int, default=DEFAULT_MAX_ISSUES)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="issue-control", description="Election control by issue selection.")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = subs.add_parser("solve", help="decide whether the target can win")
    _common(s)
    s.add_argument("--solver", choices=("exhaustive", "greedy", "bsi"), default="exhaustive")
    s.set_defaults(func=cmd_solve)

    s = subs.add_parser("maxsupport", help="exhaustive Max Support")
    _common(s)
    s.add_argument("--export-lp", metavar="PATH", help="also write the ILP model in LP format")
    s.set_defaults(func=cmd_maxsupport)

    s = subs.add_parser("greedy", help="greedy Max Support heuristic")
    _common(s)
    s.set_defaults(func=cmd_greedy)

    s = subs.add_parser("poly", help="polynomial-time special cases (binary elections)")
    s.add_argument("instance")
    s.add_argument("--algorithm", required=True, choices=sorted(ALGORITHMS) + ["bsi"])
    s.add_argument("--tie", choices=("best", "worst"), default="worst", help="tie rule for bsi")
    s.add_argument("--format", choices=("text", "csv"), default="text")
    s.set_defaults(func=cmd_poly)

    s = subs.add_parser("export-lp", help="write the Max Support ILP in LP format")
    s.add_argument("instance")
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--out", help="output path (default: stdout)")
    s.set_defaults(func=cmd_export_lp)

    s = subs.add_parser("generate", help="generate a synthetic election")
    s.add_argument("--kind", choices=("gaussian", "tree"), default="gaussian")
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--l", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--p", type=int, default=2, help="norm order recorded for gaussian instances")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_generate)

    s = subs.add_parser("reduce", help="build an instance from a hard source problem")
    s.add_argument("source", help="source instance (JSON, or DIMACS for graphs)")
    s.add_argument("--from", dest="source_kind", required=True, choices=("ilp", "mis", "x3c", "hittingset"))
    s.add_argument("--problem", choices=("svis", "tcis"), default="svis", help="target problem for ILP sources")
    s.add_argument("--lift", choices=("none", "worstcase"), default="none")
    s.add_argument("--realize", action="store_true", help="emit a concrete election instead of a margin matrix")
    s.add_argument("--p", type=int, default=2, help="norm order for --realize")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_reduce)

    s = subs.add_parser("experiment", help="approximation-ratio sweep")
    s.add_argument("--config", help="JSON file with ExperimentSpec fields; flags override it")
    s.add_argument("--kind", choices=("gaussian", "tree"))
    s.add_argument("--sweep", choices=("m", "n", "l"))
    s.add_argument("--values", type=int, nargs="+")
    s.add_argument("--m", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--l", type=int)
    s.add_argument("--instances", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--tie", choices=("best", "worst"))
    s.add_argument("--seed", type=int)
    s.add_argument("--solvers", help=f"comma-separated subset of {','.join(SOLVERS)}")
    s.add_argument("--max-issues", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--timing", action="store_true", help="fill the millis column (breaks byte-identity)")
    s.add_argument("--out", help="CSV path (default: stdout)")
    s.add_argument("--summary", help="also write the summary table here")
    s.set_defaults(func=cmd_experiment)

    s = subs.add_parser("plot", help="SVG plots from an experiment CSV")
    s.add_argument("csv")
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InstanceParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except RealizationError as exc:
        print(f"realization error: {exc}", file=sys.stderr)
        return EXIT_REALIZATION
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
