import argparse
import json
import os
import sys
from enum import IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO

from fuzzar.combine import CombinedAssessment, combine
from fuzzar.constants import DEBUG_VARIABLE, DECIMALS
from fuzzar.fixtures import write_fixtures
from fuzzar.ingest import (
    CohortDataset,
    assess_dataset,
    dump_dataset,
    load_dataset,
    load_expected_table,
)
from fuzzar.lattice import (
    GroupAssessment,
    assess_memberships,
    modal_profiles,
    profile_name,
)
from fuzzar.object_types import DataError, DomainError
from fuzzar.reporter import (
    CellStatus,
    FixtureDiff,
    ReportConfig,
    ReportFormat,
    Rounding,
    diff_against_fixture,
    exact_value,
    group_labels,
    lattice_document,
    render_diff,
    render_lattice,
    render_step_sets,
    round_half_even,
)
from fuzzar.scale import LabelScale
from fuzzar.simulate import Skill, simulate_dataset

debug: Callable = lambda message: (
    print("\033[37m" + "fuzzar: \033[3m" + message + "\033[0m", file=sys.stderr)
    if os.getenv(DEBUG_VARIABLE)
    else None
)


class ExitCode(IntEnum):
    OK: int = 0
    DATA: int = 1
    USAGE: int = 2  # argparse's own exit status


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer")
    if number < 1:
        raise argparse.ArgumentTypeError(f"'{value}' is not a positive integer")
    return number


def scale_names(value: str) -> List[str]:
    names = [name.strip() for name in value.split(",")]
    if len(names) < 2 or not all(names) or len(set(names)) != len(names):
        raise argparse.ArgumentTypeError(
            "scale has to list at least 2 unique comma separated labels"
        )
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzar",
        description=(
            "Fuzzy assessment of analogical problem solving. fuzzar turns "
            "cohort performance counts into fuzzy step sets, computes the "
            "membership degree and possibility of every solver profile, "
            "and measures the cohort with the normalized Shannon-Wiener "
            "index."
        ),
        allow_abbrev=False,
        epilog=(
            f"Set {DEBUG_VARIABLE}=1 to print debugging information. "
            "Exit codes: 0 success, 1 data error, 2 usage error."
        ),
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    report = argparse.ArgumentParser(add_help=False)
    report.add_argument(
        "--format",
        help="Output format (default: markdown).",
        choices=[f.value for f in ReportFormat],
        default=ReportFormat.MARKDOWN.value,
    )
    report.add_argument(
        "--decimals",
        help=f"Decimal places of displayed values (default: {DECIMALS}).",
        type=positive_int,
        default=DECIMALS,
    )
    report.add_argument(
        "--include-zero-rows",
        help="Show profiles whose values are all zero.",
        action="store_true",
    )
    report.add_argument(
        "--rounding",
        help="Display rounding (default: half_even).",
        choices=[r.value for r in Rounding],
        default=Rounding.HALF_EVEN.value,
    )
    report.add_argument(
        "--scale",
        help="Expected label scale, e.g. 'a,b,c,d,e'.",
        type=scale_names,
    )

    analyze = subparsers.add_parser(
        "analyze", parents=[report], help="Analyze one cohort."
    )
    analyze.add_argument("input", help="Dataset file (.json or .csv).")
    analyze.add_argument(
        "--paper-compat",
        help="Replay the membership column of an expected table.",
        metavar="PATH",
    )
    analyze.add_argument(
        "--diff",
        help="Compare the results with an expected table.",
        metavar="PATH",
    )
    analyze.add_argument(
        "--strict",
        help="Return non-zero code if the diff finds conflicts.",
        action="store_true",
    )
    analyze.set_defaults(handler=cmd_analyze)

    combine_parser = subparsers.add_parser(
        "combine", parents=[report], help="Combine two or more cohorts."
    )
    combine_parser.add_argument("inputs", help="Dataset files.", nargs="+")
    combine_parser.add_argument(
        "--diff",
        help="Compare the combined results with an expected table.",
        metavar="PATH",
    )
    combine_parser.add_argument(
        "--strict",
        help="Return non-zero code if the diff finds conflicts.",
        action="store_true",
    )
    combine_parser.set_defaults(handler=cmd_combine)

    simulate = subparsers.add_parser(
        "simulate", help="Print a synthetic per-solver dataset."
    )
    simulate.add_argument("--size", help="Cohort size.", type=positive_int, default=20)
    simulate.add_argument("--steps", help="Step count.", type=positive_int, default=3)
    simulate.add_argument("--seed", help="Random seed.", type=int, default=0)
    simulate.add_argument(
        "--skill",
        help="Skill of the simulated solvers (default: uniform).",
        choices=[s.value for s in Skill],
        default=Skill.UNIFORM.value,
    )
    simulate.add_argument(
        "--problems",
        help="Problems per step (default: number of labels - 1).",
        type=positive_int,
    )
    simulate.add_argument("--group", help="Group name.")
    simulate.add_argument("--scale", help="Label scale.", type=scale_names)
    simulate.set_defaults(handler=cmd_simulate)

    fixtures = subparsers.add_parser(
        "fixtures", help="Write the classroom experiment's data files."
    )
    fixtures.add_argument(
        "--directory", help="Target directory (default: current).", default="."
    )
    fixtures.set_defaults(handler=cmd_fixtures)

    return parser


def main(argv: Optional[Sequence[str]] = None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "combine" and len(args.inputs) < 2:
        parser.error("combine needs at least two input files")

    try:
        code = args.handler(args)
    except DataError as exc:
        for error in exc.errors:
            print(f"Error: {error}", file=sys.stderr)
        sys.exit(ExitCode.DATA)
    except (DomainError, OSError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        sys.exit(ExitCode.DATA)
    sys.exit(code)


def get_path(path_str: str) -> Path:
    """Get a valid input path.

    For a path to be valid, it has to exist. If it does not, an error
    is printed and the program aborts.
    """
    path = Path(path_str)
    if not path.is_file():
        print(f"Error: Specified path '{path!s}' does not exist.", file=sys.stderr)
        sys.exit(ExitCode.DATA)
    return path


def get_config(args: argparse.Namespace) -> ReportConfig:
    return ReportConfig(
        format=ReportFormat(args.format),
        decimals=args.decimals,
        include_zero_rows=args.include_zero_rows,
        rounding=Rounding(args.rounding),
    )


def load_group(path: Path, scale: Optional[List[str]]) -> GroupAssessment:
    dataset: CohortDataset = load_dataset(path, scale_names=scale)
    debug(f"Loaded {len(dataset.rows)} {dataset.source_kind.value} rows from {path}")
    return assess_dataset(dataset, LabelScale.from_names(scale or dataset.scale_names))


def _diff_document(diff: FixtureDiff) -> Dict[str, Any]:
    return {
        "group": diff.group_name,
        "matches": len(diff.matches),
        "rounding": len(diff.rounding),
        "conflicts": len(diff.conflicts),
        "cells": [
            {
                "profile": profile_name(cell.profile),
                "column": cell.column,
                "computed": str(cell.computed),
                "expected": str(cell.expected),
                "status": cell.status.value,
            }
            for cell in diff.cells
            if cell.status is not CellStatus.MATCH
        ],
    }


def _fraction_text(value: Fraction, decimals: int) -> str:
    return f"{round_half_even(value, decimals)} ({value})"


def _modal_text(assessment: GroupAssessment) -> str:
    profiles = modal_profiles(assessment)
    return ", ".join(profile_name(profile) for profile in profiles) or "none"


def _summary_stream(config: ReportConfig) -> TextIO:
    """Stream for everything but the table; CSV keeps standard output clean."""
    return sys.stderr if config.format is ReportFormat.CSV else sys.stdout


def _finish(diff: Optional[FixtureDiff], strict: bool) -> int:
    if diff is not None and strict and diff.conflicts:
        print(
            f"Error: {len(diff.conflicts)} cells conflict with the expected table.",
            file=sys.stderr,
        )
        return ExitCode.DATA
    return ExitCode.OK


def cmd_analyze(args: argparse.Namespace) -> int:
    config = get_config(args)
    assessment = load_group(get_path(args.input), args.scale)

    if args.paper_compat:
        table = load_expected_table(get_path(args.paper_compat))
        memberships = table.column("membership", assessment.scale)
        debug(f"Replaying {len(memberships)} printed memberships")
        assessment = assess_memberships(
            assessment.group_name, assessment.steps, memberships
        )

    diff: Optional[FixtureDiff] = None
    if args.diff:
        table = load_expected_table(get_path(args.diff))
        diff = diff_against_fixture(assessment, table)

    if config.format is ReportFormat.JSON:
        document: Dict[str, Any] = {
            "group": assessment.group_name,
            "compat": assessment.compat,
            "steps": {
                step.step_name: {
                    name: exact_value(value, config.decimals)
                    for name, value in step.as_dict().items()
                }
                for step in assessment.steps
            },
            "lattice": lattice_document([assessment], None, config),
            "lattice_size": assessment.lattice_size,
            "max_membership": exact_value(assessment.max_membership, config.decimals),
            "degenerate": assessment.degenerate,
            "modal_profiles": [profile_name(p) for p in modal_profiles(assessment)],
            "entropy": assessment.entropy,
        }
        if diff is not None:
            document["diff"] = _diff_document(diff)
        print(json.dumps(document, indent=2, ensure_ascii=False))
        return _finish(diff, args.strict)

    summary = _summary_stream(config)
    print(f"Group: {assessment.group_name}", file=summary)
    print(render_step_sets(assessment.steps, config), file=summary)
    if assessment.compat:
        print(f"Memberships replayed from {args.paper_compat}", file=summary)
    print("", file=summary)
    print(render_lattice([assessment], None, config))
    print("", file=summary)
    print(
        "Max membership: "
        + _fraction_text(assessment.max_membership, config.decimals),
        file=summary,
    )
    if assessment.degenerate:
        print("Warning: every membership degree is zero.", file=sys.stderr)
    print(f"Modal profiles: {_modal_text(assessment)}", file=summary)
    print(f"H = {assessment.entropy:.4f}", file=summary)
    if diff is not None:
        print("", file=summary)
        print(render_diff(diff, color=summary.isatty()), file=summary)
    return _finish(diff, args.strict)


def cmd_combine(args: argparse.Namespace) -> int:
    config = get_config(args)
    groups = [load_group(get_path(path), args.scale) for path in args.inputs]
    combined: CombinedAssessment = combine(groups)
    labels = group_labels(groups)
    ranking = sorted(zip(labels, groups), key=lambda item: item[1].entropy)

    diff: Optional[FixtureDiff] = None
    if args.diff:
        table = load_expected_table(get_path(args.diff))
        diff = diff_against_fixture(combined, table)

    if config.format is ReportFormat.JSON:
        document: Dict[str, Any] = {
            "groups": {
                label: {
                    "max_membership": exact_value(
                        group.max_membership, config.decimals
                    ),
                    "entropy": group.entropy,
                }
                for label, group in zip(labels, groups)
            },
            "lattice": lattice_document(groups, combined, config),
            "max_pseudo_frequency": exact_value(
                combined.max_pseudo_frequency, config.decimals
            ),
            "degenerate": combined.degenerate,
            "ranking": [label for label, _ in ranking],
        }
        if diff is not None:
            document["diff"] = _diff_document(diff)
        print(json.dumps(document, indent=2, ensure_ascii=False))
        return _finish(diff, args.strict)

    summary = _summary_stream(config)
    for label, group in zip(labels, groups):
        print(f"Group: {label}", file=summary)
        print(render_step_sets(group.steps, config), file=summary)
        print(f"H = {group.entropy:.4f}", file=summary)
        print("", file=summary)
    print(render_lattice(groups, combined, config))
    print("", file=summary)
    print(
        "Max pseudo-frequency: "
        + _fraction_text(combined.max_pseudo_frequency, config.decimals),
        file=summary,
    )
    if combined.degenerate:
        print("Warning: every pseudo-frequency is zero.", file=sys.stderr)
    print(
        "Ranking by H (lowest first): "
        + ", ".join(f"{label} ({group.entropy:.4f})" for label, group in ranking),
        file=summary,
    )
    if diff is not None:
        print("", file=summary)
        print(render_diff(diff, color=summary.isatty()), file=summary)
    return _finish(diff, args.strict)


def cmd_simulate(args: argparse.Namespace) -> int:
    dataset = simulate_dataset(
        args.size,
        args.steps,
        args.seed,
        Skill(args.skill),
        scale=LabelScale.from_names(args.scale) if args.scale else None,
        problems=args.problems,
        group=args.group,
    )
    debug(f"Simulated {len(dataset.rows)} records")
    sys.stdout.write(dump_dataset(dataset, "json").decode("utf-8"))
    return ExitCode.OK


def cmd_fixtures(args: argparse.Namespace) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        print(f"Error: Directory '{directory!s}' does not exist.", file=sys.stderr)
        return ExitCode.DATA
    for path in write_fixtures(directory):
        rel_path: str = os.path.relpath(path, start=Path.cwd())
        print(f"Info: Saving '{rel_path}'.")
    return ExitCode.OK
