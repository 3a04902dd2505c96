"""Data of the two-group classroom experiment.

Both groups had 20 students and 4 problems. Only group 1's search-retrieval
counts were published; every other step is given as a fuzzy set, so its
counts below are one choice that reproduces the published set exactly.
"""

import json
from pathlib import Path
from typing import Any, Dict, List

from fuzzar.constants import LABEL_NAMES, STEP_NAMES

COHORT_SIZE = 20

GROUP_1 = {
    "search-retrieval": {"a": 0, "b": 0, "c": 9, "d": 6, "e": 5},
    "mapping": {"a": 0, "b": 3, "c": 11, "d": 6, "e": 0},
    "adaptation": {"a": 6, "b": 7, "c": 7, "d": 0, "e": 0},
}

GROUP_2 = {
    "search-retrieval": {"a": 0, "b": 5, "c": 10, "d": 5, "e": 0},
    "mapping": {"a": 5, "b": 5, "c": 10, "d": 0, "e": 0},
    "adaptation": {"a": 7, "b": 7, "c": 6, "d": 0, "e": 0},
}

GROUP_1_NOTE = (
    "Search-retrieval counts as published (9, 6 and 5 students with "
    "intermediate, high and complete success). Mapping and adaptation were "
    "published only as fuzzy sets {(c, 0.5), (d, 0.25)} and "
    "{(a, 0.25), (b, 0.25), (c, 0.25)}; the counts are chosen inside the "
    "matching bands (4, 8] for 0.25 and (8, 12] for 0.5, other labels <= 4."
)

GROUP_2_NOTE = (
    "Raw counts were not published. They are derived from the published "
    "fuzzy sets A_1 = {(b, 0.25), (c, 0.5), (d, 0.25)}, "
    "A_2 = {(a, 0.25), (b, 0.25), (c, 0.5)} and "
    "A_3 = {(a, 0.25), (b, 0.25), (c, 0.25)}: a membership of 0.25 needs "
    "a count in (4, 8], 0.5 a count in (8, 12], 0 a count <= 4."
)

# Published table of profiles with non zero pseudo-frequencies, verbatim:
# profile, m_s(1), r_s(1), m_s(2), r_s(2), f(s), r(s)
TABLE_1 = (
    ("bbb", "0", "0", "0.016", "0.258", "0.016", "0.129"),
    ("bba", "0", "0", "0.016", "0.258", "0.016", "0.129"),
    ("baa", "0", "0", "0.016", "0.258", "0.016", "0.129"),
    ("ccc", "0.062", "1", "0.062", "1", "0.124", "1"),
    ("cca", "0.062", "1", "0.062", "1", "0.124", "1"),
    ("ccb", "0", "0", "0.031", "0.5", "0.031", "0.25"),
    ("caa", "0", "0", "0.031", "0.5", "0.031", "0.25"),
    ("cba", "0", "0", "0.031", "0.5", "0.031", "0.25"),
    ("cbb", "0", "0", "0.031", "0.5", "0.031", "0.25"),
    ("dda", "0.016", "0.258", "0", "0", "0.016", "0.129"),
    ("ddb", "0.016", "0.258", "0", "0", "0.016", "0.129"),
    ("ddc", "0.016", "0.258", "0", "0", "0.016", "0.129"),
    ("daa", "0", "0", "0.016", "0.258", "0.016", "0.129"),
    ("dba", "0", "0", "0.016", "0.258", "0.016", "0.129"),
    ("dbb", "0", "0", "0.016", "0.258", "0.016", "0.129"),
    ("dca", "0.031", "0.5", "0.031", "0.5", "0.062", "0.5"),
    ("dcb", "0.031", "0.5", "0.031", "0.5", "0.062", "0.5"),
    ("dcc", "0.031", "0.5", "0.031", "0.5", "0.062", "0.5"),
    ("eca", "0.031", "0.5", "0", "0", "0.031", "0.25"),
    ("ecb", "0.031", "0.5", "0", "0", "0.031", "0.25"),
    ("ecc", "0.031", "0.5", "0", "0", "0.031", "0.25"),
    ("eda", "0.016", "0.258", "0", "0", "0.016", "0.129"),
    ("edb", "0.016", "0.258", "0", "0", "0.016", "0.129"),
    ("edc", "0.016", "0.258", "0", "0", "0.016", "0.129"),
)

TABLE_NOTE = (
    "Printed with three decimals; decimal commas normalized to points. "
    "Row ccb disagrees with the published fuzzy sets of both groups, "
    "which give 0.5 * 0.5 * 0.25 = 0.0625."
)

# Published entropies: replaying the printed memberships lands within 0.003.
PUBLISHED_ENTROPY = {"group 1": 0.289, "group 2": 0.312}


def _dataset(group: str, steps: Dict[str, Dict[str, int]], note: str) -> dict:
    return {
        "group": group,
        "note": note,
        "scale": list(LABEL_NAMES),
        "cohort_size": COHORT_SIZE,
        "steps": [{"name": name, "counts": steps[name]} for name in STEP_NAMES],
    }


def _table(group: str, columns: Dict[str, int]) -> dict:
    rows: List[Dict[str, Any]] = []
    for row in TABLE_1:
        entry: Dict[str, Any] = {"profile": list(row[0])}
        for column, position in columns.items():
            entry[column] = row[position]
        rows.append(entry)
    return {
        "group": group,
        "note": TABLE_NOTE,
        "scale": list(LABEL_NAMES),
        "steps": list(STEP_NAMES),
        "decimals": 3,
        "rows": rows,
    }


def fixture_documents() -> Dict[str, dict]:
    """Return every fixture file name with its JSON content."""
    return {
        "group1.json": _dataset("group 1", GROUP_1, GROUP_1_NOTE),
        "group2.json": _dataset("group 2", GROUP_2, GROUP_2_NOTE),
        "table1_g1.json": _table("group 1", {"membership": 1, "possibility": 2}),
        "table1_g2.json": _table("group 2", {"membership": 3, "possibility": 4}),
        "table1_combined.json": _table(
            "group 1 + group 2", {"pseudo_frequency": 5, "possibility": 6}
        ),
    }


def fixture_bytes() -> Dict[str, bytes]:
    return {
        name: (json.dumps(document, indent=2, ensure_ascii=False) + "\n").encode(
            "utf-8"
        )
        for name, document in fixture_documents().items()
    }


def write_fixtures(directory: Path) -> List[Path]:
    """Write the fixture files into ``directory`` and return their paths."""
    written: List[Path] = []
    for name, content in fixture_bytes().items():
        path = directory / name
        path.write_bytes(content)
        written.append(path)
    return written
