import csv
import io
import json
from pathlib import Path
from typing import List

import pytest

from fuzzar.fixtures import fixture_bytes
from fuzzar.ingest import parse_dataset
from fuzzar.main import ExitCode, main

# Prepare


def run(argv: List[str]) -> int:
    with pytest.raises(SystemExit) as exc:
        main(argv)
    return exc.value.code


@pytest.fixture
def workdir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    monkeypatch.chdir(tmp_path)
    for name, content in fixture_bytes().items():
        (tmp_path / name).write_bytes(content)
    return tmp_path


# Test


def test_main__fixtures(tmp_path: Path, monkeypatch: pytest.MonkeyPatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert run(["fixtures"]) == ExitCode.OK
    first = {path.name: path.read_bytes() for path in tmp_path.iterdir()}
    assert set(first) == set(fixture_bytes())
    assert "Info: Saving 'group1.json'." in capsys.readouterr().out

    assert run(["fixtures"]) == ExitCode.OK
    again = {path.name: path.read_bytes() for path in tmp_path.iterdir()}
    assert again == first


def test_main__fixtures__missing_directory(tmp_path: Path, capsys):
    missing = tmp_path / "missing"
    assert run(["fixtures", "--directory", str(missing)]) == ExitCode.DATA
    assert "does not exist" in capsys.readouterr().err


def test_main__analyze(workdir: Path, capsys):
    assert run(["analyze", "group1.json"]) == ExitCode.OK
    out = capsys.readouterr().out

    assert "Group: group 1" in out
    assert (
        "A_1 search-retrieval = {(a, 0), (b, 0), (c, 0.5), (d, 0.25), (e, 0.25)}"
        in out
    )
    assert "| c | c | a | 0.062 | 1.000 |" in out
    assert "Max membership: 0.062 (1/16)" in out
    assert "Modal profiles: cca, ccb, ccc" in out
    assert "H = 0.3230" in out


def test_main__analyze__group_2(workdir: Path, capsys):
    assert run(["analyze", "group2.json"]) == ExitCode.OK
    out = capsys.readouterr().out
    assert (
        "A_1 search-retrieval = {(a, 0), (b, 0.25), (c, 0.5), (d, 0.25), (e, 0)}"
        in out
    )


def test_main__analyze__replayed_table(workdir: Path, capsys):
    code = run(["analyze", "group1.json", "--paper-compat", "table1_g1.json"])
    assert code == ExitCode.OK
    out = capsys.readouterr().out

    assert "Memberships replayed from table1_g1.json" in out
    entropy = [line for line in out.splitlines() if line.startswith("H = ")][0]
    assert float(entropy[4:]) == pytest.approx(0.289, abs=3e-3)


def test_main__analyze__json(workdir: Path, capsys):
    assert run(["analyze", "group1.json", "--format", "json"]) == ExitCode.OK
    document = json.loads(capsys.readouterr().out)

    assert document["group"] == "group 1"
    assert document["lattice_size"] == 125
    assert document["max_membership"]["denominator"] == 16
    assert document["modal_profiles"] == ["cca", "ccb", "ccc"]
    assert document["entropy"] == pytest.approx(0.32301, abs=5e-4)
    assert "diff" not in document


def test_main__analyze__diff(workdir: Path, capsys):
    assert run(["analyze", "group1.json", "--diff", "table1_g1.json"]) == ExitCode.OK
    out = capsys.readouterr().out
    assert "Diff of 'group 1': " in out
    assert "ccb membership computed 0.0625, printed 0" in out


def test_main__analyze__diff_strict(workdir: Path, capsys):
    code = run(["analyze", "group1.json", "--diff", "table1_g1.json", "--strict"])
    assert code == ExitCode.DATA
    assert "cells conflict with the expected table" in capsys.readouterr().err


def test_main__analyze__missing_file(workdir: Path, capsys):
    assert run(["analyze", "nothing.json"]) == ExitCode.DATA
    assert "Error: Specified path 'nothing.json' does not exist." in (
        capsys.readouterr().err
    )


def test_main__analyze__invalid_data(workdir: Path, capsys):
    (workdir / "broken.json").write_text('{"group": "g"}', encoding="utf-8")
    assert run(["analyze", "broken.json"]) == ExitCode.DATA
    assert "Error: broken.json:root Missing field" in capsys.readouterr().err


def test_main__analyze__scale_mismatch(workdir: Path, capsys):
    code = run(["analyze", "group1.json", "--scale", "a,b,c,d"])
    assert code == ExitCode.DATA
    assert "Error:" in capsys.readouterr().err


def test_main__combine(workdir: Path, capsys):
    assert run(["combine", "group1.json", "group2.json"]) == ExitCode.OK
    out = capsys.readouterr().out

    assert "| c | c | a | 0.062 | 1.000 | 0.062 | 1.000 | 0.125 | 1.000 |" in out
    assert "Max pseudo-frequency: 0.125 (1/8)" in out
    assert "Ranking by H (lowest first): group 1" in out


def test_main__combine__self(workdir: Path, capsys):
    code = run(["combine", "group1.json", "group1.json", "--format", "csv"])
    assert code == ExitCode.OK
    captured = capsys.readouterr()
    table = list(csv.reader(io.StringIO(captured.out)))

    assert table[0][3:] == [
        "m(1: group 1)",
        "r(1: group 1)",
        "m(2: group 1)",
        "r(2: group 1)",
        "f(s)",
        "r(s)",
    ]
    assert all(len(row) == 9 for row in table)
    for row in table[1:]:
        assert row[-1] == row[4]
    assert "Max pseudo-frequency: 0.125 (1/8)" in captured.err


def test_main__combine__same_group_name_json(workdir: Path, capsys):
    document = json.loads((workdir / "group2.json").read_text(encoding="utf-8"))
    document["group"] = "group 1"
    (workdir / "again.json").write_text(json.dumps(document), encoding="utf-8")

    code = run(["combine", "group1.json", "again.json", "--format", "json"])
    assert code == ExitCode.OK
    report = json.loads(capsys.readouterr().out)

    assert list(report["groups"]) == ["1: group 1", "2: group 1"]
    assert sorted(report["ranking"]) == ["1: group 1", "2: group 1"]
    row = [r for r in report["lattice"]["rows"] if r["profile"] == ["e", "c", "a"]][0]
    assert row["values"]["m(1: group 1)"]["denominator"] == 32
    assert row["values"]["m(2: group 1)"]["numerator"] == 0


def test_main__analyze__csv_output_is_only_the_table(workdir: Path, capsys):
    assert run(["analyze", "group1.json", "--format", "csv"]) == ExitCode.OK
    captured = capsys.readouterr()
    table = list(csv.reader(io.StringIO(captured.out)))

    assert table[0] == [
        "search-retrieval",
        "mapping",
        "adaptation",
        "m(group 1)",
        "r(group 1)",
    ]
    assert len(table) == 1 + 15
    assert "H = 0.3230" in captured.err


def test_main__analyze__csv_with_bom(workdir: Path, capsys):
    (workdir / "group.csv").write_bytes(
        b"\xef\xbb\xbfstep,a,b,c,d,e\n"
        b"search-retrieval,0,0,9,6,5\nmapping,0,3,11,6,0\nadaptation,6,7,7,0,0\n"
    )
    assert run(["analyze", "group.csv"]) == ExitCode.OK
    assert "H = 0.3230" in capsys.readouterr().out


def test_main__combine__single_input(workdir: Path):
    assert run(["combine", "group1.json"]) == ExitCode.USAGE


def test_main__combine__scale_mismatch(workdir: Path, capsys):
    (workdir / "short.csv").write_text(
        "step,a,b,c\nsearch-retrieval,1,2,3\nmapping,3,2,1\nadaptation,6,0,0\n",
        encoding="utf-8",
    )
    assert run(["combine", "group1.json", "short.csv"]) == ExitCode.DATA
    assert "Error:" in capsys.readouterr().err


def test_main__simulate(capsys):
    argv = ["simulate", "--size", "12", "--seed", "7", "--skill", "weak"]
    assert run(argv) == ExitCode.OK
    first = capsys.readouterr().out
    assert run(argv) == ExitCode.OK
    assert capsys.readouterr().out == first

    dataset = parse_dataset(first.encode("utf-8"), "json")
    assert dataset.group_name == "simulated-weak-7"
    assert len(dataset.rows) == 12 * 3


def test_main__simulate__single_solver(capsys):
    argv = ["simulate", "--size", "1", "--steps", "1", "--seed", "7"]
    assert run(argv + ["--skill", "strong"]) == ExitCode.OK
    dataset = parse_dataset(capsys.readouterr().out.encode("utf-8"), "json")

    assert len(dataset.rows) == 1
    assert 0 <= dataset.rows[0].solved <= 4


def test_main__simulate__invalid_size(capsys):
    assert run(["simulate", "--size", "0"]) == ExitCode.USAGE
    assert "not a positive integer" in capsys.readouterr().err


def test_main__no_subcommand():
    assert run([]) == ExitCode.USAGE
