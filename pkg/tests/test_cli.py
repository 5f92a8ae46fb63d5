import json

import pytest
from click.testing import CliRunner

from syzygy.cli import main

from helpers import build_cycle, build_octahedron


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args):
    result = runner.invoke(main, list(args), catch_exceptions=False)
    return result


def test_lines_cubic(runner):
    res = invoke(runner, "lines", "--degree", "3")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["result"]["count"] == 27
    assert data["schema_version"] == 1
    assert data["provenance"]


def test_lines_by_blowups_and_conflicts(runner):
    res = invoke(runner, "lines", "--blowups", "3")
    assert json.loads(res.output)["result"]["count"] == 6
    res = invoke(runner, "lines", "--degree", "3", "--blowups", "3")
    assert res.exit_code == 1
    assert "error" in json.loads(res.output)
    res = invoke(runner, "lines")
    assert res.exit_code == 1


def test_json_output_is_deterministic(runner):
    out1 = invoke(runner, "cubic").output
    out2 = invoke(runner, "cubic").output
    assert out1 == out2
    out3 = invoke(runner, "cremona", "--e-max", "3").output
    out4 = invoke(runner, "cremona", "--e-max", "3").output
    assert out3 == out4


def test_graph_hexagon(runner):
    res = invoke(runner, "graph", "--blowups", "3")
    data = json.loads(res.output)["result"]
    assert data["single_cycle"] is True
    assert len(data["vertices"]) == 6


def test_syzygy_command(runner):
    res = invoke(runner, "syzygy", "bl3", "--check")
    data = json.loads(res.output)["result"]
    assert data["vertices"] == 9
    assert data["euler_characteristic"] == 2
    assert data["valid"] is True


def test_cubic_warnings_recorded(runner):
    data = json.loads(invoke(runner, "cubic").output)
    assert data["result"]["recorded_vertex_count"] == 243
    assert data["warnings"]  # the 216/243 discrepancy is flagged, not silent


def test_ruled_command(runner):
    res = invoke(runner, "ruled", "--points", "3", "--e-max", "3")
    data = json.loads(res.output)["result"]
    assert data["E_{1,0}"] == "Z/2 (+) Z/2"
    assert data["E_{0,1}"] == "0"
    assert data["E_{1,1}"] == "C* (+) C*"
    assert data["boundary_squares_to_zero"] is True


def test_cremona_command(runner):
    res = invoke(runner, "cremona", "--points", "4", "--e-max", "4")
    data = json.loads(res.output)
    result = data["result"]
    assert result["E_{1,0}"] == "0"
    assert result["E_{2,0}"] == "0"
    assert result["E_{3,0}"] == "0"
    assert result["E_{0,1}"] == "0"
    assert result["E_{1,1}"] == "0"
    assert len(result["H2_candidates"]) == 2
    assert data["warnings"]  # --points is recorded but unused


def test_schur_commands(runner):
    for target, expected in (
        ("pgl2", "K2(C) (+) Z/2"),
        ("pgl3", "K2(C) (+) Z/3"),
        ("quadric", "K2(C) (+) Z/2"),
    ):
        data = json.loads(invoke(runner, "schur", "--target", target).output)
        assert data["result"]["H2"] == expected
    data = json.loads(invoke(runner, "schur", "--target", "k2prime").output)
    assert sorted(data["result"]["candidates"]) == [
        "K2(C) (+) Z/2 (+) Z/2",
        "K2(C) (+) Z/4",
    ]


def test_homology_file_cw(runner, tmp_path):
    path = tmp_path / "octa.json"
    path.write_text(json.dumps(build_octahedron().to_json_dict()), encoding="utf-8")
    data = json.loads(invoke(runner, "homology", str(path)).output)
    assert data["result"]["homology"] == ["Z", "0", "Z"]


def test_homology_file_chain(runner, tmp_path):
    path = tmp_path / "circle.json"
    path.write_text(
        json.dumps(build_cycle(6).chain_complex().to_json_dict()), encoding="utf-8"
    )
    data = json.loads(invoke(runner, "homology", str(path)).output)
    assert data["result"]["homology"] == ["Z", "Z"]


def test_homology_file_corrupt(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"ranks": [2, 1], "boundaries": [[[1, 0]], [[9]]]}', encoding="utf-8")
    res = invoke(runner, "homology", str(path))
    assert res.exit_code == 1
    assert "error" in json.loads(res.output)
    path2 = tmp_path / "bad2.json"
    path2.write_text('{"something": 1}', encoding="utf-8")
    res2 = invoke(runner, "homology", str(path2))
    assert res2.exit_code == 1


def test_five_term_command(runner):
    data = json.loads(invoke(runner, "five-term", "--points", "4").output)
    verdicts = {v["position"]: v["verdict"] for v in data["result"]["verdicts"]}
    assert "fail" not in verdicts.values()
    assert verdicts["E_{0,1}"] == "exact"


def test_table_format(runner):
    res = invoke(runner, "--format", "table", "lines", "--degree", "3")
    assert res.exit_code == 0
    assert "count = 27" in res.output
