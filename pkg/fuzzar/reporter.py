from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from fuzzar.combine import CombinedAssessment
from fuzzar.constants import DECIMALS, TOLERANCE
from fuzzar.ingest import ExpectedTable
from fuzzar.lattice import GroupAssessment, Profile, profile_name
from fuzzar.membership import FuzzyStepSet
from fuzzar.object_types import DomainError


class ReportFormat(str, Enum):
    MARKDOWN = "markdown"
    CSV = "csv"
    JSON = "json"


class Rounding(str, Enum):
    HALF_EVEN = "half_even"
    EXACT = "exact"


@dataclass(frozen=True)
class ReportConfig:
    format: ReportFormat = ReportFormat.MARKDOWN
    decimals: int = DECIMALS
    include_zero_rows: bool = False
    rounding: Rounding = Rounding.HALF_EVEN

    def __post_init__(self):
        object.__setattr__(self, "format", ReportFormat(self.format))
        object.__setattr__(self, "rounding", Rounding(self.rounding))
        if self.decimals < 1:
            raise DomainError(f"Decimals have to be at least 1, got {self.decimals}.")


def round_half_even(value: Fraction, decimals: int) -> Decimal:
    """Round an exact value to ``decimals`` places, ties to even."""
    # Fraction rounding is exact and already ties to even.
    rounded = round(Fraction(value), decimals)
    quantum = Decimal(1).scaleb(-decimals)
    return (Decimal(rounded.numerator) / Decimal(rounded.denominator)).quantize(
        quantum, rounding=ROUND_HALF_EVEN
    )


def format_value(value: Fraction, config: ReportConfig) -> str:
    if config.rounding is Rounding.EXACT:
        return str(Fraction(value))
    return str(round_half_even(value, config.decimals))


def _short(value: Fraction, decimals: int) -> str:
    return f"{round_half_even(value, decimals).normalize():f}"


def render_step_sets(steps: Sequence[FuzzyStepSet], config: ReportConfig) -> str:
    """Write each step as a set of (label, membership) pairs."""
    lines = []
    for position, step in enumerate(steps, start=1):
        if config.rounding is Rounding.EXACT:
            values = [str(value) for value in step.memberships]
        else:
            values = [_short(value, config.decimals) for value in step.memberships]
        pairs = ", ".join(
            f"({label.name}, {value})" for label, value in zip(step.scale, values)
        )
        lines.append(f"A_{position} {step.step_name} = {{{pairs}}}")
    return "\n".join(lines)


def group_labels(assessments: Sequence[GroupAssessment]) -> List[str]:
    """Names identifying each group in a report.

    Repeated group names get their 1-based position as a prefix, e.g.
    ``1: group 1``.
    """
    names = [assessment.group_name for assessment in assessments]
    if len(set(names)) == len(names):
        return names
    return [f"{position}: {name}" for position, name in enumerate(names, start=1)]


def _columns(
    assessments: Sequence[GroupAssessment], combined: Optional[CombinedAssessment]
) -> List[Tuple[str, Dict[Profile, Fraction]]]:
    columns = []
    for label, assessment in zip(group_labels(assessments), assessments):
        columns.append((f"m({label})", assessment.memberships))
        columns.append((f"r({label})", assessment.possibilities))
    if combined is not None:
        columns.append(("f(s)", combined.pseudo_frequencies))
        columns.append(("r(s)", combined.combined_possibilities))
    return columns


def _lattice_rows(
    assessments: Sequence[GroupAssessment],
    combined: Optional[CombinedAssessment],
    config: ReportConfig,
) -> Tuple[List[str], List[Tuple[str, Dict[Profile, Fraction]]], List[Profile]]:
    if not assessments:
        raise DomainError("At least one group is required.")
    first = assessments[0]
    for other in assessments[1:]:
        if other.scale != first.scale or len(other.steps) != len(first.steps):
            raise DomainError(
                f"Group '{other.group_name}' does not match the lattice of "
                f"group '{first.group_name}'."
            )
    if combined is not None and (
        combined.scale != first.scale or len(combined.step_names) != len(first.steps)
    ):
        raise DomainError("Combined assessment does not match the group lattices.")

    columns = _columns(assessments, combined)
    profiles = sorted(
        first.memberships, key=lambda profile: [label.index for label in profile]
    )
    if not config.include_zero_rows:
        # exact values decide, a value rounding to 0.000 is still shown
        profiles = [
            profile
            for profile in profiles
            if any(values[profile] != 0 for _, values in columns)
        ]
    return list(first.step_names), columns, profiles


def exact_value(value: Fraction, decimals: int) -> Dict[str, Union[int, str]]:
    return {
        "numerator": value.numerator,
        "denominator": value.denominator,
        "rounded": str(round_half_even(value, decimals)),
    }


def lattice_document(
    assessments: Sequence[GroupAssessment],
    combined: Optional[CombinedAssessment] = None,
    config: ReportConfig = ReportConfig(),
) -> dict:
    """JSON-ready form of ``render_lattice`` with exact values."""
    step_names, columns, profiles = _lattice_rows(assessments, combined, config)
    rows = [
        {
            "profile": [label.name for label in profile],
            "values": {
                name: exact_value(column[profile], config.decimals)
                for name, column in columns
            },
        }
        for profile in profiles
    ]
    return {
        "steps": step_names,
        "columns": step_names + [name for name, _ in columns],
        "rows": rows,
    }


def render_lattice(
    assessments: Sequence[GroupAssessment],
    combined: Optional[CombinedAssessment] = None,
    config: ReportConfig = ReportConfig(),
) -> str:
    """Render profiles with their per-group and combined values as a table.

    Rows where every exact value is zero are left out unless
    ``config.include_zero_rows`` is set.
    """
    if config.format is ReportFormat.JSON:
        document = lattice_document(assessments, combined, config)
        return json.dumps(document, indent=2, ensure_ascii=False)

    step_names, columns, profiles = _lattice_rows(assessments, combined, config)
    headers = step_names + [name for name, _ in columns]
    body = [
        [label.name for label in profile]
        + [format_value(column[profile], config) for _, column in columns]
        for profile in profiles
    ]

    if config.format is ReportFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(body)
        return buffer.getvalue().rstrip("\n")

    lines = [
        "| " + " | ".join(headers) + " |",
        "|" + "|".join(" --- " for _ in headers) + "|",
    ]
    lines += ["| " + " | ".join(row) + " |" for row in body]
    return "\n".join(lines)


class CellStatus(str, Enum):
    MATCH = "match"
    ROUNDING = "rounding"
    CONFLICT = "conflict"


@dataclass(frozen=True)
class DiffCell:
    profile: Profile
    column: str
    computed: Fraction
    expected: Fraction
    status: CellStatus


@dataclass(frozen=True)
class FixtureDiff:
    group_name: str
    cells: Tuple[DiffCell, ...]

    def _with(self, status: CellStatus) -> List[DiffCell]:
        return [cell for cell in self.cells if cell.status is status]

    @property
    def matches(self) -> List[DiffCell]:
        return self._with(CellStatus.MATCH)

    @property
    def rounding(self) -> List[DiffCell]:
        return self._with(CellStatus.ROUNDING)

    @property
    def conflicts(self) -> List[DiffCell]:
        return self._with(CellStatus.CONFLICT)

    def conflict_profiles(self) -> List[Profile]:
        return list(dict.fromkeys(cell.profile for cell in self.conflicts))


def _as_fraction(value: Union[Fraction, Decimal, float, str, int]) -> Fraction:
    if isinstance(value, (Fraction, Decimal, int)):
        return Fraction(value)
    return Fraction(Decimal(str(value)))


def diff_against_fixture(
    assessment: Union[GroupAssessment, CombinedAssessment],
    fixture: ExpectedTable,
    tolerance: Union[Fraction, float, str] = TOLERANCE,
) -> FixtureDiff:
    """Compare computed values with a published table, cell by cell.

    A cell matches when the computed value, rounded like the table, equals
    the printed one. Other differences up to ``tolerance`` are put down to
    rounding, anything larger is a conflict.
    """
    tolerance = _as_fraction(tolerance)
    if isinstance(assessment, CombinedAssessment):
        name = " + ".join(assessment.group_names)
        columns = {
            "pseudo_frequency": assessment.pseudo_frequencies,
            "possibility": assessment.combined_possibilities,
        }
    else:
        name = assessment.group_name
        columns = {
            "membership": assessment.memberships,
            "possibility": assessment.possibilities,
        }

    cells = []
    for row in fixture.rows:
        profile = tuple(assessment.scale.by_name(label) for label in row.profile)
        for column, expected in row.values.items():
            if column not in columns:
                continue
            computed = columns[column][profile]
            if computed == expected or (
                Fraction(round_half_even(computed, fixture.decimals)) == expected
            ):
                status = CellStatus.MATCH
            elif abs(computed - expected) <= tolerance:
                status = CellStatus.ROUNDING
            else:
                status = CellStatus.CONFLICT
            cells.append(DiffCell(profile, column, computed, expected, status))
    return FixtureDiff(name, tuple(cells))


def _color(line: str, status: CellStatus) -> str:
    # Windows does not support bash escape codes
    if os.name == "nt":
        return line
    if status is CellStatus.CONFLICT:
        return f"\033[31m{line}\033[0m"
    return f"\033[33m{line}\033[0m"


def render_diff(diff: FixtureDiff, *, color: bool = True) -> str:
    """List every cell that does not match the published table."""
    lines = [
        f"Diff of '{diff.group_name}': {len(diff.matches)} matching, "
        f"{len(diff.rounding)} rounding, {len(diff.conflicts)} conflicting cells."
    ]
    for cell in diff.cells:
        if cell.status is CellStatus.MATCH:
            continue
        line = (
            f"{cell.status.value}: {profile_name(cell.profile)} {cell.column} "
            f"computed {_short(cell.computed, 6)}, printed {_short(cell.expected, 6)}"
        )
        lines.append(_color(line, cell.status) if color else line)
    return "\n".join(lines)
