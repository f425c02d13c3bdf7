"""
Command Line
============
pathquery front end:

    python -m cli simulate fixtures/glycolysis.pw --steps 5 --max-tokens 20
    python -m cli query fixtures/isomerase.pw fixtures/isomerase_dhap_removal.qry --steps 5 --max-tokens 20
    python -m cli export-asp fixtures/glycolysis.pw --level maxfire --steps 5
    python -m cli validate fixtures/glycolysis.pw

Exit codes: 0 success, 1 diagnostics, 2 usage/parse/compile error,
3 trajectory limit exceeded, 4 any other library error.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

from export.asp import EncodingLevel, ResetStyle, emit_program
from export.observations import emit_observation_constraints
from model.diagnostics import Diagnostic
from model.errors import (
    CompileError,
    PathQueryError,
    PathwaySyntaxError,
    QuerySyntaxError,
    TrajectoryLimitExceeded,
)
from model.multiset import Marking
from model.net import FiringStyle
from model.validation import validate_net
from pathway.ast import PathwaySpec
from pathway.compiler import compile_pathway
from pathway.consistency import check_consistency, errors_only
from pathway.parser import parse_pathway
from query.engine import QueryResult, ResultKind, evaluate, simulate_spec
from query.formulas import format_number
from query.interventions import build_domains
from query.parser import parse_query
from query.render import echo_query, quote, render_conditions
from simulation.trajectories import Trajectory
from util.settings import get_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3
EXIT_ERROR = 4


@dataclass(frozen=True)
class RunConfig:
    """Options shared by every subcommand"""
    pathway_file: Path
    query_file: Optional[Path] = None
    steps: int = 5
    max_tokens: int = 60
    firing_style: Optional[FiringStyle] = None
    reset_style: ResetStyle = ResetStyle.CONTENTION
    non_reentrant: bool = False
    output_format: str = "text"
    asp_level: Optional[EncodingLevel] = None

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"Must use --steps >= 0, got {self.steps}")
        if self.max_tokens < 1:
            raise ValueError(f"Must use --max-tokens >= 1, got {self.max_tokens}")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"Must use --format text or json, got '{self.output_format}'")


def render_trajectory(traj: Trajectory, colored: bool = False) -> str:
    """
    Answer-set style listing: per step a line of holds atoms sorted by
    place (and color), then a line of fires atoms when anything fired.
    """
    lines = []
    for i, marking in enumerate(traj.states):
        holds = _holds_atoms(marking, i, colored)
        if holds:
            lines.append(" ".join(holds))
        fired = sorted(traj.fired_at(i))
        if fired:
            lines.append(" ".join(f"fires({t},{i})" for t in fired))
    return "\n".join(lines)


def _holds_atoms(marking: Marking, ts: int, colored: bool) -> List[str]:
    if not colored:
        return [f"holds({p},{marking[p].total()},{ts})" for p in sorted(marking)]
    return [f"holds({p},{marking[p][c]},{c},{ts})" for p in sorted(marking) for c in sorted(marking.colors)]


def trajectories_json(trajs: Sequence[Trajectory]) -> List[Dict[str, Any]]:
    return [{"states": t.to_dict()["states"], "firings": t.to_dict()["firings"]} for t in trajs]


def render_answer(result: QueryResult) -> str:
    """The solved value of a query as text"""
    value = result.value
    if result.kind is ResultKind.BOOLEAN:
        return "true" if value else "false"
    if result.kind is ResultKind.NUMBER:
        return format_number(value)
    if result.kind is ResultKind.DIRECTION:
        return quote(value.value)
    if result.kind is ResultKind.CONDITIONS:
        return render_conditions(value) or "none"
    return ", ".join(format_number(v) for v in value) or "none"


def _header(config: RunConfig, style: FiringStyle) -> str:
    override = " (override)" if config.firing_style is not None else ""
    return f"% k={config.steps} max_tokens={config.max_tokens} firing_style={style.value}{override}"


def load_pathway(path: Path) -> PathwaySpec:
    return parse_pathway(Path(path).read_text(encoding="utf-8"))


def pathway_diagnostics(spec: PathwaySpec, bound: int) -> List[Diagnostic]:
    """Consistency diagnostics, plus net validation when the spec compiles cleanly."""
    found = check_consistency(spec, bound)
    if errors_only(found):
        return found
    return found + validate_net(compile_pathway(spec), bound)


def _print_diagnostics(diagnostics: Sequence[Diagnostic], out: TextIO) -> None:
    for d in diagnostics:
        print(str(d), file=out)


def cmd_simulate(config: RunConfig, out: TextIO) -> int:
    spec = load_pathway(config.pathway_file)
    errors = errors_only(check_consistency(spec, config.max_tokens))
    if errors:
        _print_diagnostics(errors, sys.stderr)
        return EXIT_DIAGNOSTICS
    trajs = simulate_spec(spec, config.steps, config.max_tokens, config.firing_style,
                          non_reentrant=config.non_reentrant)
    style = config.firing_style or spec.firing_style
    colored = compile_pathway(spec).is_colored
    if config.output_format == "json":
        payload = {"trajectories": trajectories_json(trajs), "firing_style": style.value}
        print(json.dumps(payload, indent=2), file=out)
        return EXIT_OK
    print(_header(config, style), file=out)
    print(f"% trajectories: {len(trajs)}", file=out)
    for n, traj in enumerate(trajs, start=1):
        print(f"Answer: {n}", file=out)
        listing = render_trajectory(traj, colored)
        if listing:
            print(listing, file=out)
    return EXIT_OK


def cmd_query(config: RunConfig, out: TextIO) -> int:
    if config.query_file is None:
        raise ValueError("Must give a query file")
    spec = load_pathway(config.pathway_file)
    stmt = parse_query(Path(config.query_file).read_text(encoding="utf-8"))
    result = evaluate(spec, stmt, k=config.steps, cap=config.max_tokens, style=config.firing_style,
                      non_reentrant=config.non_reentrant)
    if config.output_format == "json":
        print(json.dumps({"result": result.to_dict()}, indent=2), file=out)
        return EXIT_OK
    print(echo_query(stmt, result, config.steps), end="", file=out)
    print(f"answer: {render_answer(result)}", file=out)
    nominal = "" if result.nominal_count is None else f"nominal {result.nominal_count}, "
    print(f"trajectories: {nominal}modified {result.modified_count}", file=out)
    return EXIT_OK


def cmd_export(config: RunConfig, out: TextIO) -> int:
    spec = load_pathway(config.pathway_file)
    observations = ()
    if config.query_file is not None:
        stmt = parse_query(Path(config.query_file).read_text(encoding="utf-8"))
        _, spec = build_domains(spec, stmt)
        observations = stmt.observations
    errors = errors_only(check_consistency(spec, config.max_tokens))
    if errors:
        _print_diagnostics(errors, sys.stderr)
        return EXIT_DIAGNOSTICS
    net = compile_pathway(spec)
    if config.firing_style is not None:
        net = net.with_style(config.firing_style)
    if config.non_reentrant:
        net = net.non_reentrant()
    program = emit_program(net, config.asp_level, config.steps, config.max_tokens, config.reset_style)
    constraints = emit_observation_constraints(observations, config.steps, net.is_colored)
    if constraints:
        program += "\n\n" + constraints
    if config.output_format == "json":
        print(json.dumps({"program": program}, indent=2), file=out)
    else:
        print(program, end="", file=out)
    return EXIT_OK


def cmd_validate(config: RunConfig, out: TextIO) -> int:
    spec = load_pathway(config.pathway_file)
    found = pathway_diagnostics(spec, config.max_tokens)
    if config.output_format == "json":
        print(json.dumps({"diagnostics": [d.to_dict() for d in found]}, indent=2), file=out)
    else:
        _print_diagnostics(found, out)
        if not found:
            print("ok", file=out)
    return EXIT_DIAGNOSTICS if errors_only(found) else EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "query": cmd_query,
    "export-asp": cmd_export,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--steps", "-k", type=int, default=settings.default_steps, help="simulation horizon k")
    common.add_argument("--max-tokens", "-n", type=int, default=settings.default_max_tokens,
                        help="largest token count of any place")
    common.add_argument("--firing-style", choices=[s.value for s in FiringStyle],
                        help="override the pathway's firing style")
    common.add_argument("--reset-style", choices=[s.value for s in ResetStyle], default="contention")
    common.add_argument("--non-reentrant", action="store_true", help="durative actions block while in progress")
    common.add_argument("--format", dest="output_format", choices=["text", "json"], default="text")
    common.add_argument("--output", "-o", type=Path, help="write to a file instead of stdout")
    common.add_argument("--log-level", default=settings.log_level)

    parser = argparse.ArgumentParser(prog="pathquery", description="Pathway simulation and query answering")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", parents=[common], help="print all trajectories")
    simulate.add_argument("pathway", type=Path)

    query = sub.add_parser("query", parents=[common], help="evaluate a query")
    query.add_argument("pathway", type=Path)
    query.add_argument("query", type=Path)

    export = sub.add_parser("export-asp", parents=[common], help="write the ASP program")
    export.add_argument("pathway", type=Path)
    export.add_argument("--level", help="encoding level name or 0-7 (default: detected)")
    export.add_argument("--query", dest="query", type=Path,
                        help="apply this query's setup and interventions and append its observations")

    validate = sub.add_parser("validate", parents=[common], help="print diagnostics")
    validate.add_argument("pathway", type=Path)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        pathway_file=args.pathway,
        query_file=getattr(args, "query", None),
        steps=args.steps,
        max_tokens=args.max_tokens,
        firing_style=FiringStyle.parse(args.firing_style) if args.firing_style else None,
        reset_style=ResetStyle.parse(args.reset_style),
        non_reentrant=args.non_reentrant,
        output_format=args.output_format,
        asp_level=EncodingLevel.parse(args.level) if getattr(args, "level", None) else None,
    )


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]
        out: Stream for results; defaults to stdout, or --output

    Returns:
        Exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    logging.basicConfig(level=str(args.log_level).upper(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    handle = None
    try:
        config = _config(args)
        if args.output is not None:
            handle = open(args.output, "w", encoding="utf-8")
        return COMMANDS[args.command](config, handle or out or sys.stdout)
    except (PathwaySyntaxError, QuerySyntaxError, CompileError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TrajectoryLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except PathQueryError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    finally:
        if handle is not None:
            handle.close()


def main() -> None:
    sys.exit(run())
