import json

import pytest

from qtetra.cli import dump_params, load_params, main
from qtetra.exactnum import ParameterPoint
from qtetra.kernels import kernel_point


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["rlll", "--type", "QQQ"],
        ["element", "--type", "OOZ", "--d", "1.5", "--out", "0,0,1", "--in", "0,0,0"],
        ["rrrr", "--type", "ZZZZZZ"],
        ["rlll", "--type", "OOO", "--window", "3..1"],
        ["rlll", "--type", "OOO", "--window-plus", "-1..2"],
        ["element", "--type", "OOO", "--d", "1", "--out", "0,0,0", "--in", "0,0,0"],
        ["rlll", "--type", "OOO", "--signs", "-,+,+"],
        ["intertwiner", "--mode", "OOO", "--violate", "2"],
    ],
)
def test_config_errors_exit_2(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 2


def test_usage_error_exits_2(capsys):
    assert main(["nonsense"]) == 2
    assert main(["element", "--type", "OOO"]) == 2


def test_rlll_zoz(capsys):
    code, out = run(capsys, "rlll", "--type", "ZOZ", "--seed", "17", "--window", "-3..3", "--trials", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and doc["notes"]["seeds"] == [17, 18, 19]


def test_rrrr_zooooo(capsys):
    code, out = run(capsys, "rrrr", "--type", "ZOOOOO", "--pairs", "500", "--seed", "7")
    assert code == 0
    assert json.loads(out)["counts"]["pairs"] == 500


def test_element_ooo_zero(capsys):
    code, out = run(capsys, "element", "--type", "OOO", "--out", "0,0,0", "--in", "0,0,0")
    assert code == 0
    assert json.loads(out)["notes"]["value"] == "1"


def test_element_outside_support(capsys):
    code, out = run(capsys, "element", "--type", "OOZ", "--d", "0", "--out", "1,1,0", "--in", "1,1,3")
    assert code == 0
    notes = json.loads(out)["notes"]
    assert notes["value"] == "0" and notes["d"] == 0 and "violated" in notes


def test_output_is_deterministic(capsys):
    argv = ["rlll", "--type", "OZZ", "--seed", "4", "--window", "-1..1"]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second
    assert json.loads(first)["elapsed_ms"] is None


def test_output_file_and_quiet(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out = run(capsys, "rlll", "--type", "XXZ", "--window", "-1..1", "--output", str(path))
    assert code == 0
    assert json.loads(path.read_text())["passed"]
    assert "\n" not in out.strip()


def test_params_round_trip(tmp_path, capsys):
    point = kernel_point("OOZ", 3, d=2)
    path = tmp_path / "p.json"
    path.write_text(dump_params("OOZ", point))
    tag, loaded = load_params(path)
    assert tag == "OOZ" and loaded == point and isinstance(loaded, ParameterPoint)
    code, out = run(capsys, "element", "--type", "OOZ", "--params", str(path), "--out", "0,0,2", "--in", "0,0,0")
    assert code == 0
    assert json.loads(out)["notes"]["value"] == "1"
    code, _ = run(capsys, "element", "--type", "ZOO", "--params", str(path), "--out", "0,0,0", "--in", "0,0,0")
    assert code == 2


def test_recursions(capsys):
    code, out = run(capsys, "recursions", "--type", "ZZZ", "--at", "1,0,-1,0,1,0")
    assert code == 0
    assert len(json.loads(out)["notes"]["relations"]) == 18


def test_intertwiner_violation_fails(capsys):
    code, _ = run(capsys, "intertwiner", "--mode", "ZZZ", "--window", "-1..1", "--violate", "7")
    assert code == 1


def test_algebra_check(capsys):
    code, _ = run(capsys, "algebra-check", "--window", "-2..2", "--quiet")
    assert code == 0
