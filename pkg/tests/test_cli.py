from __future__ import annotations

import json

import pytest

from lamina.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_knead_and_address(capsys):
    assert run(capsys, "knead", "13/31")[:2] == (0, "(0100*)^inf\n")
    assert run(capsys, "address", "13/31")[:2] == (0, "1-2-4-5\n")
    assert run(capsys, "address", "--kneading", "0100*")[:2] == (0, "1-2-4-5\n")


def test_admissible_exit_codes(capsys):
    assert run(capsys, "admissible", "1-2-4-5")[:2] == (0, "ADMISSIBLE 13/31\n")
    assert run(capsys, "admissible", "1-2-4-5-6")[:2] == (1, "INADMISSIBLE\n")
    code, _, err = run(capsys, "admissible", "1-3-2")
    assert code == 2 and "error" in err


@pytest.mark.parametrize("argv", [
    ["knead", "1/2x"],
    ["vistree", "1/3", "--sublimb", "2/4"],
    ["vistree", "1/5"],
    ["vistree", "13/31,17/31", "--sublimb", "1/2"],
    ["address"],
    ["bstar", "--max-period", "40"],
    ["check", "correspondence", "13/31"],
    ["render", "parameter-lamination", "--max-period", "30", "--out", "x.svg"],
    ["no-such-command"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_bstar(capsys, tmp_path):
    code, out, _ = run(capsys, "bstar", "--max-period", "5", "--cache", str(tmp_path))
    assert code == 0
    assert out.splitlines() == ["period 2: 1 leaves", "period 3: 3 leaves", "period 4: 6 leaves",
                                "period 5: 15 leaves", "total: 25"]
    code, out, _ = run(capsys, "bstar", "--max-period", "4", "--json")
    data = json.loads(out)
    assert data["schema"] == "lamina/1" and data["counts"] == {"2": 1, "3": 3, "4": 6}
    assert data["leaves"][0] == [2, "1/3", "2/3"]


def test_vistree(capsys):
    code, out, _ = run(capsys, "vistree", "1/3", "--sublimb", "1/3")
    assert (code, out) == (0, "6  22/63 25/63\n  5  11/31 12/31\n")
    code, out, _ = run(capsys, "vistree", "13/31,18/31", "--sublimb", "1/3", "--json")
    data = json.loads(out)
    assert data["schema"] == "lamina/1" and data["root"]["period"] == 15
    assert data["leaf"] == ["13/31", "18/31"]


def test_checks(capsys):
    code, out, _ = run(capsys, "check", "theorem-I", "13/31", "--max-q", "4")
    assert code == 0 and json.loads(out)["holds"] is True
    code, out, _ = run(capsys, "check", "correspondence", "13/31", "--sublimb", "1/3")
    data = json.loads(out)
    assert code == 0 and data["details"]["uncovered"] == ["11 867/2047 868/2047"]
    code, out, _ = run(capsys, "check", "translation", "--max-period", "5", "--max-q", "3")
    data = json.loads(out)
    assert code == 1
    assert data["failures"] == [{"leaf": "13/31 18/31", "sublimbs": ["1/3", "2/3"]}]
    assert data["narrow_failures"] == []


def test_render_is_stable(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for out in (a, b):
        code, printed, _ = run(capsys, "render", "lamination-of-leaf", "1/3", "--depth", "4", "--out", str(out))
        assert code == 0 and printed.strip() == str(out)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith('<?xml version="1.0" encoding="UTF-8"?>')
    code, _, _ = run(capsys, "render", "visibility-tree", "13/31", "--sublimb", "1/3",
                     "--highlight", "1/3 2/3", "--out", str(a))
    assert code == 0 and a.read_text().count('class="highlight"') == 2
