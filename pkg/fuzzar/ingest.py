from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from fuzzar.constants import DECIMALS, LABEL_NAMES
from fuzzar.lattice import GroupAssessment, Profile, assess_group
from fuzzar.membership import StepCounts, build_fuzzy_step
from fuzzar.object_types import (
    DomainError,
    Error,
    ParseError,
    ValidationError,
)
from fuzzar.scale import LabelScale, label_from_solved


class SourceKind(str, Enum):
    PER_SOLVER = "per_solver"
    COUNTS = "counts"


class DataFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class CountRow:
    step: str
    counts: Dict[str, int]


@dataclass(frozen=True)
class SolverRecord:
    solver: str
    step: str
    solved: int
    total: int


@dataclass(frozen=True)
class CohortDataset:
    """Validated content of one cohort data file."""

    group_name: str
    scale_names: Tuple[str, ...]
    step_names: Tuple[str, ...]
    source_kind: SourceKind
    rows: Tuple[Union[CountRow, SolverRecord], ...]
    cohort_size: Optional[int] = None
    total_problems: Optional[int] = None
    note: Optional[str] = None


@dataclass(frozen=True)
class ExpectedRow:
    profile: Tuple[str, ...]
    values: Dict[str, Fraction]


@dataclass(frozen=True)
class ExpectedTable:
    """Published table of per-profile values, as printed."""

    group: str
    scale_names: Tuple[str, ...]
    step_names: Tuple[str, ...]
    decimals: int
    rows: Tuple[ExpectedRow, ...]
    note: Optional[str] = None

    def column(self, name: str, scale: LabelScale) -> Dict[Profile, Fraction]:
        return {
            tuple(scale.by_name(label) for label in row.profile): row.values[name]
            for row in self.rows
            if name in row.values
        }


COUNTS_KEYS = {"group", "scale", "cohort_size", "steps", "note"}
PER_SOLVER_KEYS = {"group", "scale", "total_problems", "records", "note"}
TABLE_KEYS = {"group", "scale", "steps", "decimals", "rows", "note"}
TABLE_COLUMNS = ("membership", "possibility", "pseudo_frequency")
PER_SOLVER_HEADER = ["solver", "step", "solved", "total"]


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


class _Reader:
    """Collects every problem of one input before giving up."""

    def __init__(self, source: str):
        self.source = source
        self.errors: List[Error] = []

    def error(self, location: str, text: str) -> None:
        self.errors.append(Error(self.source, location, text))

    def raise_errors(self) -> None:
        if self.errors:
            raise ValidationError(self.errors)

    def decode(self, content: Union[bytes, str]) -> str:
        if isinstance(content, str):
            return content.lstrip("\ufeff")
        try:
            # spreadsheet exports start with a byte order mark
            return content.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(
                [Error(self.source, f"byte {exc.start}", "File is not valid UTF-8.")]
            )

    def load_json(self, content: Union[bytes, str]) -> Dict[str, Any]:
        text = self.decode(content)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(
                [Error.at_position(self.source, exc.lineno, exc.colno, exc.msg)]
            )
        if not isinstance(data, dict):
            raise ValidationError(
                [Error(self.source, "root", "Root element has to be an object.")]
            )
        return data

    def check_keys(
        self, data: Dict[str, Any], location: str, allowed: set, required: set
    ) -> None:
        for key in sorted(set(data) - allowed):
            self.error(location, f"Unknown field '{key}'.")
        for key in sorted(required - set(data)):
            self.error(location, f"Missing field '{key}'.")

    def text(self, data: Dict[str, Any], key: str, location: str) -> str:
        value = data.get(key)
        if not isinstance(value, str) or not value:
            self.error(location, f"Field '{key}' has to be a non-empty string.")
            return ""
        return value

    def positive(self, data: Dict[str, Any], key: str, location: str) -> int:
        value = data.get(key)
        if not _is_int(value) or value < 1:
            self.error(location, f"Field '{key}' has to be a positive integer.")
            return 0
        return value

    def scale(self, value: Any, location: str) -> Tuple[str, ...]:
        if (
            not isinstance(value, list)
            or len(value) < 2
            or not all(isinstance(name, str) and name for name in value)
        ):
            self.error(location, "Scale has to be a list of at least 2 label names.")
            return ()
        if len(set(value)) != len(value):
            self.error(location, "Scale label names have to be unique.")
            return ()
        return tuple(value)

    def note(self, data: Dict[str, Any], location: str) -> Optional[str]:
        note = data.get("note")
        if note is not None and not isinstance(note, str):
            self.error(location, "Field 'note' has to be a string.")
            return None
        return note


def _parse_counts_json(reader: _Reader, data: Dict[str, Any]) -> CohortDataset:
    reader.check_keys(
        data, "root", COUNTS_KEYS, {"group", "scale", "cohort_size", "steps"}
    )
    group = reader.text(data, "group", "root")
    scale = reader.scale(data.get("scale"), "scale")
    cohort_size = reader.positive(data, "cohort_size", "root")
    note = reader.note(data, "root")

    steps = data.get("steps")
    if not isinstance(steps, list):
        reader.error("steps", "Field 'steps' has to be a list.")
        steps = []
    elif not steps:
        reader.error("steps", "No records.")

    rows: List[CountRow] = []
    for position, step in enumerate(steps):
        location = f"steps[{position}]"
        if not isinstance(step, dict):
            reader.error(location, "Step has to be an object.")
            continue
        reader.check_keys(step, location, {"name", "counts"}, {"name", "counts"})
        name = reader.text(step, "name", location)
        if name and name in (row.step for row in rows):
            reader.error(location, f"Duplicate step '{name}'.")
        counts = step.get("counts")
        if not isinstance(counts, dict):
            reader.error(location, "Field 'counts' has to be an object.")
            continue
        for label, count in counts.items():
            if scale and label not in scale:
                reader.error(location, f"Unknown label '{label}'.")
            if not _is_int(count) or count < 0:
                reader.error(
                    location, f"Count of '{label}' has to be a non-negative integer."
                )
        for label in scale:
            if label not in counts:
                reader.error(location, f"Missing count of label '{label}'.")
        rows.append(CountRow(name, {label: counts.get(label) for label in scale}))

    reader.raise_errors()
    return CohortDataset(
        group_name=group,
        scale_names=scale,
        step_names=tuple(row.step for row in rows),
        source_kind=SourceKind.COUNTS,
        rows=tuple(rows),
        cohort_size=cohort_size,
        note=note,
    )


def _check_records(reader: _Reader, records: Sequence[Tuple[str, SolverRecord]]):
    seen = set()
    totals: Dict[str, int] = {}
    for location, record in records:
        if not 0 <= record.solved <= record.total:
            reader.error(
                location,
                f"Solved count {record.solved} is outside of 0..{record.total}.",
            )
        if (record.solver, record.step) in seen:
            reader.error(
                location,
                f"Duplicate record for solver '{record.solver}' "
                f"and step '{record.step}'.",
            )
        seen.add((record.solver, record.step))
        if totals.setdefault(record.step, record.total) != record.total:
            reader.error(
                location,
                f"Step '{record.step}' has inconsistent problem totals "
                f"({totals[record.step]} and {record.total}).",
            )


def _step_order(records: Sequence[SolverRecord]) -> Tuple[str, ...]:
    return tuple(dict.fromkeys(record.step for record in records))


def _parse_per_solver_json(reader: _Reader, data: Dict[str, Any]) -> CohortDataset:
    reader.check_keys(
        data, "root", PER_SOLVER_KEYS, {"group", "scale", "total_problems", "records"}
    )
    group = reader.text(data, "group", "root")
    scale = reader.scale(data.get("scale"), "scale")
    total = reader.positive(data, "total_problems", "root")
    note = reader.note(data, "root")

    records = data.get("records")
    if not isinstance(records, list):
        reader.error("records", "Field 'records' has to be a list.")
        records = []
    elif not records:
        reader.error("records", "No records.")

    parsed: List[Tuple[str, SolverRecord]] = []
    for position, record in enumerate(records):
        location = f"records[{position}]"
        if not isinstance(record, dict):
            reader.error(location, "Record has to be an object.")
            continue
        before = len(reader.errors)
        keys = {"solver", "step", "solved"}
        reader.check_keys(record, location, keys, keys)
        solver = reader.text(record, "solver", location)
        step = reader.text(record, "step", location)
        solved = record.get("solved")
        if not _is_int(solved):
            reader.error(location, "Field 'solved' has to be an integer.")
        if len(reader.errors) == before:
            parsed.append((location, SolverRecord(solver, step, solved, total)))

    if total:
        _check_records(reader, parsed)
    reader.raise_errors()
    rows = tuple(record for _, record in parsed)
    return CohortDataset(
        group_name=group,
        scale_names=scale,
        step_names=_step_order(rows),
        source_kind=SourceKind.PER_SOLVER,
        rows=rows,
        total_problems=total,
        note=note,
    )


def _csv_rows(reader: _Reader, text: str) -> List[Tuple[int, List[str]]]:
    try:
        parsed = csv.reader(io.StringIO(text))
        result: List[Tuple[int, List[str]]] = []
        for row in parsed:
            if row:
                result.append((parsed.line_num, [cell.strip() for cell in row]))
        return result
    except csv.Error as exc:
        raise ParseError([Error(reader.source, f"line {parsed.line_num}", str(exc))])


def _csv_int(reader: _Reader, value: str, line: int, column: int) -> Optional[int]:
    try:
        return int(value)
    except ValueError:
        reader.errors.append(
            Error.at_position(
                reader.source, line, column, f"Value '{value}' is not an integer."
            )
        )
        return None


def _parse_counts_csv(
    reader: _Reader, rows: List[Tuple[int, List[str]]], group: str
) -> CohortDataset:
    header_line, header = rows[0]
    scale = reader.scale(header[1:], f"line {header_line}")
    reader.raise_errors()
    if not rows[1:]:
        reader.error(f"line {header_line}", "No records.")

    parsed: List[CountRow] = []
    for line, row in rows[1:]:
        location = f"line {line}"
        if len(row) != len(header):
            raise ParseError(
                [
                    Error(
                        reader.source,
                        location,
                        f"Expected {len(header)} cells, got {len(row)}.",
                    )
                ]
            )
        step = row[0]
        if not step:
            reader.error(location, "Step name must not be empty.")
        if step and step in (r.step for r in parsed):
            reader.error(location, f"Duplicate step '{step}'.")
        counts: Dict[str, int] = {}
        for column, (label, cell) in enumerate(zip(scale, row[1:]), start=2):
            count = _csv_int(reader, cell, line, column)
            if count is not None and count < 0:
                reader.error(location, f"Count of '{label}' must not be negative.")
            counts[label] = count
        parsed.append(CountRow(step, counts))

    reader.raise_errors()
    return CohortDataset(
        group_name=group,
        scale_names=scale,
        step_names=tuple(row.step for row in parsed),
        source_kind=SourceKind.COUNTS,
        rows=tuple(parsed),
    )


def _parse_per_solver_csv(
    reader: _Reader,
    rows: List[Tuple[int, List[str]]],
    group: str,
    scale_names: Sequence[str],
) -> CohortDataset:
    header_line, header = rows[0]
    if header != PER_SOLVER_HEADER:
        raise ParseError(
            [
                Error(
                    reader.source,
                    f"line {header_line}",
                    "Header has to be '" + ",".join(PER_SOLVER_HEADER) + "'.",
                )
            ]
        )
    if not rows[1:]:
        reader.error(f"line {header_line}", "No records.")

    parsed: List[Tuple[str, SolverRecord]] = []
    for line, row in rows[1:]:
        location = f"line {line}"
        if len(row) != len(header):
            raise ParseError(
                [
                    Error(
                        reader.source,
                        location,
                        f"Expected {len(header)} cells, got {len(row)}.",
                    )
                ]
            )
        solver, step = row[0], row[1]
        before = len(reader.errors)
        if not solver or not step:
            reader.error(location, "Solver and step must not be empty.")
        solved = _csv_int(reader, row[2], line, 3)
        total = _csv_int(reader, row[3], line, 4)
        if total is not None and total < 1:
            reader.error(location, "Problem total has to be positive.")
        if len(reader.errors) == before:
            parsed.append((location, SolverRecord(solver, step, solved, total)))

    _check_records(reader, parsed)
    reader.raise_errors()
    records = tuple(record for _, record in parsed)
    return CohortDataset(
        group_name=group,
        scale_names=tuple(scale_names),
        step_names=_step_order(records),
        source_kind=SourceKind.PER_SOLVER,
        rows=records,
    )


def parse_dataset(
    content: Union[bytes, str],
    format: Union[DataFormat, str],
    *,
    source: str = "<input>",
    group: Optional[str] = None,
    scale_names: Optional[Sequence[str]] = None,
) -> CohortDataset:
    """Parse and validate one cohort data file.

    CSV files carry neither a group name nor, for per-solver records, a
    scale; ``group`` and ``scale_names`` supply them.
    """
    format = DataFormat(format)
    reader = _Reader(source)

    if format is DataFormat.JSON:
        data = reader.load_json(content)
        if "records" in data:
            return _parse_per_solver_json(reader, data)
        return _parse_counts_json(reader, data)

    rows = _csv_rows(reader, reader.decode(content))
    if not rows:
        raise ValidationError([Error(source, "line 1", "No records.")])
    if group is None:
        group = Path(source).stem
    if rows[0][1][0] == "step":
        return _parse_counts_csv(reader, rows, group)
    return _parse_per_solver_csv(reader, rows, group, scale_names or LABEL_NAMES)


def _common_total(dataset: CohortDataset) -> int:
    if dataset.total_problems is not None:
        return dataset.total_problems
    totals = {record.total for record in dataset.rows}
    if len(totals) != 1:
        raise DomainError(
            "Per-solver records with different problem totals "
            "can only be written as CSV."
        )
    return totals.pop()


def dump_dataset(dataset: CohortDataset, format: Union[DataFormat, str]) -> bytes:
    """Serialize a dataset so that ``parse_dataset`` gives it back."""
    format = DataFormat(format)
    if format is DataFormat.JSON:
        data: Dict[str, Any] = {"group": dataset.group_name}
        if dataset.note is not None:
            data["note"] = dataset.note
        data["scale"] = list(dataset.scale_names)
        if dataset.source_kind is SourceKind.COUNTS:
            data["cohort_size"] = dataset.cohort_size or sum(
                dataset.rows[0].counts.values()
            )
            data["steps"] = [
                {"name": row.step, "counts": dict(row.counts)} for row in dataset.rows
            ]
        else:
            data["total_problems"] = _common_total(dataset)
            data["records"] = [
                {"solver": r.solver, "step": r.step, "solved": r.solved}
                for r in dataset.rows
            ]
        return (json.dumps(data, indent=2, ensure_ascii=False) + "\n").encode("utf-8")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if dataset.source_kind is SourceKind.COUNTS:
        writer.writerow(["step", *dataset.scale_names])
        for row in dataset.rows:
            writer.writerow([row.step, *(row.counts[n] for n in dataset.scale_names)])
    else:
        writer.writerow(PER_SOLVER_HEADER)
        for r in dataset.rows:
            writer.writerow([r.solver, r.step, r.solved, r.total])
    return buffer.getvalue().encode("utf-8")


def load_dataset(
    path: Path, *, scale_names: Optional[Sequence[str]] = None
) -> CohortDataset:
    """Read a dataset file; the format follows the file suffix."""
    suffix = path.suffix.lower().lstrip(".")
    try:
        format = DataFormat(suffix)
    except ValueError:
        raise ValidationError(
            [Error(str(path), "name", "File has to end with '.json' or '.csv'.")]
        )
    content = path.read_bytes()
    return parse_dataset(
        content, format, source=str(path), group=path.stem, scale_names=scale_names
    )


def to_step_counts(dataset: CohortDataset, scale: LabelScale) -> List[StepCounts]:
    """Turn a dataset into per-step label counts over ``scale``."""
    reader = _Reader(dataset.group_name)
    if tuple(dataset.scale_names) != scale.names:
        reader.error(
            "scale",
            "Dataset scale "
            + ",".join(dataset.scale_names)
            + " does not match "
            + ",".join(scale.names)
            + ".",
        )
        reader.raise_errors()

    if dataset.source_kind is SourceKind.COUNTS:
        result = [
            StepCounts.from_mapping(row.step, scale, row.counts, dataset.cohort_size)
            for row in dataset.rows
        ]
        sums = [sum(counts.counts) for counts in result]
        expected = dataset.cohort_size if dataset.cohort_size is not None else sums[0]
        for counts, total in zip(result, sums):
            if total != expected:
                reader.error(
                    counts.step_name,
                    f"Counts sum to {total}, expected cohort size {expected}.",
                )
        reader.raise_errors()
        return result

    solvers = tuple(dict.fromkeys(record.solver for record in dataset.rows))
    by_key = {(record.solver, record.step): record for record in dataset.rows}
    result = []
    for step in dataset.step_names:
        counts = [0] * len(scale)
        for solver in solvers:
            record = by_key.get((solver, step))
            if record is None:
                reader.error(step, f"Solver '{solver}' has no record for this step.")
                continue
            counts[label_from_solved(record.solved, record.total, scale).index] += 1
        result.append(StepCounts(step, scale, tuple(counts), len(solvers)))
    reader.raise_errors()
    return result


def _exact(value: Any) -> Optional[Fraction]:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        return None
    try:
        return Fraction(Decimal(str(value).strip()))
    except (InvalidOperation, ValueError, OverflowError):
        return None


def parse_expected_table(
    content: Union[bytes, str], *, source: str = "<table>"
) -> ExpectedTable:
    """Parse a table of published per-profile values.

    Values are decimal strings (or JSON numbers) and are kept exactly.
    """
    reader = _Reader(source)
    data = reader.load_json(content)
    reader.check_keys(data, "root", TABLE_KEYS, {"group", "scale", "steps", "rows"})
    group = reader.text(data, "group", "root")
    scale = reader.scale(data.get("scale"), "scale")
    note = reader.note(data, "root")
    decimals = data.get("decimals", DECIMALS)
    if not _is_int(decimals) or decimals < 1:
        reader.error("root", "Field 'decimals' has to be a positive integer.")

    steps = data.get("steps")
    if not isinstance(steps, list) or not all(
        isinstance(step, str) and step for step in steps
    ):
        reader.error("steps", "Field 'steps' has to be a list of step names.")
        steps = []

    rows = data.get("rows")
    if not isinstance(rows, list):
        reader.error("rows", "Field 'rows' has to be a list.")
        rows = []
    elif not rows:
        reader.error("rows", "No records.")

    parsed: List[ExpectedRow] = []
    seen = set()
    for position, row in enumerate(rows):
        location = f"rows[{position}]"
        if not isinstance(row, dict):
            reader.error(location, "Row has to be an object.")
            continue
        reader.check_keys(row, location, {"profile", *TABLE_COLUMNS}, {"profile"})
        profile = row.get("profile")
        if not isinstance(profile, list) or len(profile) != len(steps):
            reader.error(location, f"Profile has to list {len(steps)} labels.")
            continue
        for label in profile:
            if label not in scale:
                reader.error(location, f"Unknown label '{label}'.")
        if tuple(profile) in seen:
            reader.error(location, "Duplicate profile " + "".join(profile) + ".")
        seen.add(tuple(profile))
        values: Dict[str, Fraction] = {}
        for column in TABLE_COLUMNS:
            if column not in row:
                continue
            value = _exact(row[column])
            if value is None:
                reader.error(location, f"Value of '{column}' is not a decimal number.")
                continue
            values[column] = value
        parsed.append(ExpectedRow(tuple(profile), values))

    reader.raise_errors()
    return ExpectedTable(
        group=group,
        scale_names=scale,
        step_names=tuple(steps),
        decimals=decimals,
        rows=tuple(parsed),
        note=note,
    )


def load_expected_table(path: Path) -> ExpectedTable:
    return parse_expected_table(path.read_bytes(), source=str(path))


def assess_dataset(
    dataset: CohortDataset, scale: Optional[LabelScale] = None
) -> GroupAssessment:
    """Run a dataset through counting, fuzzification and the lattice."""
    scale = scale or LabelScale.from_names(dataset.scale_names)
    steps = [build_fuzzy_step(counts) for counts in to_step_counts(dataset, scale)]
    return assess_group(dataset.group_name, steps)
