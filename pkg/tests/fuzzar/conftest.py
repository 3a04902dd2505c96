import pytest

from fuzzar.fixtures import fixture_bytes
from fuzzar.ingest import (
    ExpectedTable,
    assess_dataset,
    parse_dataset,
    parse_expected_table,
)
from fuzzar.lattice import GroupAssessment


def load_fixture_group(name: str) -> GroupAssessment:
    return assess_dataset(parse_dataset(fixture_bytes()[name], "json"))


def load_fixture_table(name: str) -> ExpectedTable:
    return parse_expected_table(fixture_bytes()[name], source=name)


@pytest.fixture
def group1() -> GroupAssessment:
    return load_fixture_group("group1.json")


@pytest.fixture
def group2() -> GroupAssessment:
    return load_fixture_group("group2.json")


@pytest.fixture
def table_g1() -> ExpectedTable:
    return load_fixture_table("table1_g1.json")


@pytest.fixture
def table_g2() -> ExpectedTable:
    return load_fixture_table("table1_g2.json")


@pytest.fixture
def table_combined() -> ExpectedTable:
    return load_fixture_table("table1_combined.json")
