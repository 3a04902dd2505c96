import json
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Generator

import pytest

from fuzzar.fixtures import fixture_bytes
from fuzzar.ingest import (
    CohortDataset,
    SourceKind,
    dump_dataset,
    load_dataset,
    parse_dataset,
    to_step_counts,
)
from fuzzar.object_types import ParseError, ValidationError
from fuzzar.scale import default_scale
from fuzzar.simulate import simulate_dataset

# Prepare

SCALE = default_scale()

COUNTS: Dict[str, Any] = {
    "group": "group 1",
    "scale": ["a", "b", "c", "d", "e"],
    "cohort_size": 20,
    "steps": [
        {"name": "search-retrieval", "counts": {"a": 0, "b": 0, "c": 9, "d": 6, "e": 5}}
    ],
}


def per_solver(records, total: int = 4) -> Dict[str, Any]:
    return {
        "group": "group 1",
        "scale": ["a", "b", "c", "d", "e"],
        "total_problems": total,
        "records": records,
    }


def as_json(data: Dict[str, Any]) -> bytes:
    return json.dumps(data).encode("utf-8")


def texts(exc: pytest.ExceptionInfo) -> str:
    return "\n".join(str(error) for error in exc.value.errors)


@pytest.fixture
def csv_file() -> Generator[Path, None, None]:
    tf = tempfile.NamedTemporaryFile(mode="r", suffix=".csv")
    yield Path(tf.name)
    tf.close()


def fill_file(path: Path, content: str) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(content)


# Test


def test__parse_dataset__counts():
    dataset = parse_dataset(as_json(COUNTS), "json")

    assert dataset.source_kind is SourceKind.COUNTS
    assert dataset.group_name == "group 1"
    assert dataset.step_names == ("search-retrieval",)
    assert dataset.cohort_size == 20
    counts = to_step_counts(dataset, SCALE)
    assert counts[0].as_dict() == {"a": 0, "b": 0, "c": 9, "d": 6, "e": 5}


def test__parse_dataset__fixture():
    dataset = parse_dataset(fixture_bytes()["group2.json"], "json")

    assert dataset.note.startswith("Raw counts were not published.")
    assert dataset.step_names == ("search-retrieval", "mapping", "adaptation")
    assert [c.counts for c in to_step_counts(dataset, SCALE)] == [
        (0, 5, 10, 5, 0),
        (5, 5, 10, 0, 0),
        (7, 7, 6, 0, 0),
    ]


def test__parse_dataset__no_records():
    with pytest.raises(ValidationError) as exc:
        parse_dataset(as_json({**COUNTS, "steps": []}), "json")
    assert "No records." in texts(exc)


def test__parse_dataset__single_record():
    data = per_solver([{"solver": "s1", "step": "mapping", "solved": 4}])
    dataset = parse_dataset(as_json(data), "json")
    counts = to_step_counts(dataset, SCALE)

    assert dataset.source_kind is SourceKind.PER_SOLVER
    assert counts[0].as_dict() == {"a": 0, "b": 0, "c": 0, "d": 0, "e": 1}
    assert counts[0].cohort_size == 1


def test__parse_dataset__malformed_json():
    with pytest.raises(ParseError) as exc:
        parse_dataset(b'{"group": "g",\n  "scale": [}', "json", source="g.json")
    error = exc.value.errors[0]
    assert error.source == "g.json"
    assert error.location.startswith("2:")


def test__parse_dataset__not_utf8():
    with pytest.raises(ParseError):
        parse_dataset(b"\xff\xfe{}", "json")


def test__parse_dataset__unknown_field():
    with pytest.raises(ValidationError) as exc:
        parse_dataset(as_json({**COUNTS, "comment": "x"}), "json")
    assert "<input>:root Unknown field 'comment'." in texts(exc)


def test__parse_dataset__negative_count():
    steps = [{"name": "mapping", "counts": {"a": -1, "b": 0, "c": 0, "d": 0, "e": 0}}]
    with pytest.raises(ValidationError) as exc:
        parse_dataset(as_json({**COUNTS, "steps": steps}), "json")
    assert "steps[0] Count of 'a' has to be a non-negative integer." in texts(exc)


def test__parse_dataset__unknown_label():
    steps = [{"name": "mapping", "counts": {"a": 0, "b": 0, "c": 0, "d": 0, "f": 20}}]
    with pytest.raises(ValidationError) as exc:
        parse_dataset(as_json({**COUNTS, "steps": steps}), "json")
    assert "Unknown label 'f'." in texts(exc)
    assert "Missing count of label 'e'." in texts(exc)


def test__parse_dataset__duplicate_solver_step():
    records = [
        {"solver": "s1", "step": "mapping", "solved": 1},
        {"solver": "s1", "step": "mapping", "solved": 2},
    ]
    with pytest.raises(ValidationError) as exc:
        parse_dataset(as_json(per_solver(records)), "json")
    assert "records[1] Duplicate record for solver 's1'" in texts(exc)


def test__parse_dataset__solved_above_total():
    records = [{"solver": "s1", "step": "mapping", "solved": 5}]
    with pytest.raises(ValidationError) as exc:
        parse_dataset(as_json(per_solver(records)), "json")
    assert "Solved count 5 is outside of 0..4." in texts(exc)


def test__to_step_counts__aggregation():
    solved = [2] * 9 + [3] * 6 + [4] * 5
    records = [
        {"solver": f"s{i:02d}", "step": "search-retrieval", "solved": s}
        for i, s in enumerate(solved)
    ]
    dataset = parse_dataset(as_json(per_solver(records)), "json")
    counts = to_step_counts(dataset, SCALE)

    assert counts[0].as_dict() == {"a": 0, "b": 0, "c": 9, "d": 6, "e": 5}
    assert counts[0].cohort_size == len(records)


def test__to_step_counts__all_failed():
    records = [{"solver": f"s{i}", "step": "mapping", "solved": 0} for i in range(7)]
    dataset = parse_dataset(as_json(per_solver(records)), "json")

    assert to_step_counts(dataset, SCALE)[0].counts == (7, 0, 0, 0, 0)


def test__to_step_counts__sums_differ():
    steps = [
        {"name": "mapping", "counts": {"a": 0, "b": 0, "c": 10, "d": 10, "e": 0}},
        {"name": "adaptation", "counts": {"a": 9, "b": 10, "c": 0, "d": 0, "e": 0}},
    ]
    dataset = parse_dataset(as_json({**COUNTS, "steps": steps}), "json")
    with pytest.raises(ValidationError) as exc:
        to_step_counts(dataset, SCALE)
    assert "Counts sum to 19, expected cohort size 20." in texts(exc)


def test__to_step_counts__missing_step_record():
    records = [
        {"solver": "s1", "step": "mapping", "solved": 1},
        {"solver": "s2", "step": "mapping", "solved": 2},
        {"solver": "s1", "step": "adaptation", "solved": 1},
    ]
    dataset = parse_dataset(as_json(per_solver(records)), "json")
    with pytest.raises(ValidationError) as exc:
        to_step_counts(dataset, SCALE)
    assert "Solver 's2' has no record for this step." in texts(exc)


def test__to_step_counts__scale_mismatch():
    steps = [{"name": "mapping", "counts": {"a": 0, "b": 0, "c": 10, "d": 5, "x": 5}}]
    data = {**COUNTS, "scale": ["a", "b", "c", "d", "x"], "steps": steps}
    dataset = parse_dataset(as_json(data), "json")
    with pytest.raises(ValidationError):
        to_step_counts(dataset, SCALE)


def test__parse_dataset__csv_counts():
    content = "step,a,b,c,d,e\nsearch-retrieval,0,0,9,6,5\nmapping,0,3,11,6,0\n"
    dataset = parse_dataset(content.encode(), "csv", group="group 1")

    assert dataset.source_kind is SourceKind.COUNTS
    assert dataset.scale_names == ("a", "b", "c", "d", "e")
    assert [c.cohort_size for c in to_step_counts(dataset, SCALE)] == [20, 20]


def test__parse_dataset__csv_byte_order_mark():
    content = "\ufeffstep,a,b,c,d,e\nmapping,0,3,11,6,0\n".encode("utf-8")
    dataset = parse_dataset(content, "csv", group="group 1")

    assert dataset.source_kind is SourceKind.COUNTS
    assert dataset.scale_names == ("a", "b", "c", "d", "e")
    assert dataset.rows[0].counts["c"] == 11


def test__parse_dataset__csv_per_solver():
    content = "solver,step,solved,total\ns1,mapping,2,4\ns2,mapping,3,4\n"
    dataset = parse_dataset(content.encode(), "csv", source="cohort.csv")

    assert dataset.group_name == "cohort"
    assert dataset.rows[1].solved == 3
    assert to_step_counts(dataset, SCALE)[0].counts == (0, 0, 1, 1, 0)


def test__parse_dataset__csv_bad_integer():
    content = "step,a,b,c,d,e\nmapping,0,x,11,6,0\n"
    with pytest.raises(ValidationError) as exc:
        parse_dataset(content.encode(), "csv", source="g.csv")
    assert "g.csv:2:3 Value 'x' is not an integer." in texts(exc)


def test__parse_dataset__csv_cell_count():
    content = "solver,step,solved,total\ns1,mapping,2\n"
    with pytest.raises(ParseError):
        parse_dataset(content.encode(), "csv")


def test__parse_dataset__csv_inconsistent_total():
    content = "solver,step,solved,total\ns1,mapping,2,4\ns2,mapping,2,5\n"
    with pytest.raises(ValidationError) as exc:
        parse_dataset(content.encode(), "csv")
    assert "inconsistent problem totals" in texts(exc)


@pytest.mark.parametrize("format", ["json", "csv"])
def test__dump_dataset__round_trip_counts(format):
    dataset = parse_dataset(fixture_bytes()["group1.json"], "json")
    if format == "csv":
        # CSV has no cohort size and no note
        dataset = parse_dataset(dump_dataset(dataset, "csv"), "csv", group="group 1")

    again = parse_dataset(dump_dataset(dataset, format), format, group="group 1")
    assert again == dataset


@pytest.mark.parametrize("format", ["json", "csv"])
def test__dump_dataset__round_trip_per_solver(format):
    dataset: CohortDataset = simulate_dataset(12, 3, 5, group="sim")
    if format == "csv":
        dataset = parse_dataset(dump_dataset(dataset, "csv"), "csv", group="sim")

    again = parse_dataset(dump_dataset(dataset, format), format, group="sim")
    assert again == dataset


def test__load_dataset(csv_file: Path):
    fill_file(csv_file, "step,a,b,c,d,e\nmapping,0,3,11,6,0\n")
    dataset = load_dataset(csv_file)

    assert dataset.group_name == csv_file.stem
    assert dataset.rows[0].counts["c"] == 11


def test__load_dataset__bad_suffix(tmp_path: Path):
    path = tmp_path / "group.txt"
    path.write_text("{}", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_dataset(path)


def test__parse_expected_table(table_g1):
    assert len(table_g1.rows) == 24
    assert table_g1.decimals == 3
    assert table_g1.rows[3].profile == ("c", "c", "c")
    assert table_g1.rows[3].values == {
        "membership": Fraction("0.062"),
        "possibility": 1,
    }
    assert table_g1.column("membership", SCALE)[
        tuple(SCALE.by_name(n) for n in "dda")
    ] == Fraction(16, 1000)
