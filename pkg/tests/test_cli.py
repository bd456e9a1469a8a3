import json

import numpy as np
import pytest

from walkergeom import cli
from walkergeom.metric import GeneralMetric, ProductMetric, WalkerMetric

BOX = [[-1, 1], [-1, 1], [-1, 1], [-1, 1]]


def write(tmp_path, doc, name="metric.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def run(tmp_path, doc, *extra, command="check"):
    spec = write(tmp_path, doc)
    out = tmp_path / "report.json"
    code = cli.main([command, "--spec", spec, "--out", str(out), *extra])
    return code, (json.loads(out.read_text()) if out.exists() else None)


# loading -----------------------------------------------------------------------------


def test_load_each_kind(tmp_path):
    docs = {
        "walker": ({"kind": "walker", "a": "u*x", "b": "0", "c": "y^2", "points": [[0, 0, 0, 0]]}, WalkerMetric),
        "theta": ({"kind": "theta", "theta": "u^5", "points": [[0.1, 0, 0, 0]]}, WalkerMetric),
        "omega": ({"kind": "omega", "omega": "u*x + v*y", "sample": {"count": 2, "box": BOX}}, ProductMetric),
        "general": ({"kind": "general", "g": [["0", "0", "1", "0"], ["0", "0", "0", "1"], ["1", "0", "0", "0"], ["0", "1", "0", "0"]],
                     "points": [[0, 0, 0, 0]]}, GeneralMetric),
    }
    for kind, (doc, cls) in docs.items():
        spec = cli.load_spec(write(tmp_path, doc, f"{kind}.json"))
        assert spec.kind == kind and isinstance(spec.metric, cls)
    assert cli.parse_spec(docs["omega"][0]).sample == {"count": 2, "box": [(-1.0, 1.0)] * 4, "seed": 0}


def test_numeric_entries_are_accepted():
    spec = cli.parse_spec({"kind": "walker", "a": 2, "b": 0.5, "c": "0", "points": [[0, 0, 0, 0]]})
    assert spec.metric.abc((0, 0, 0, 0)) == (2.0, 0.5, 0.0)


@pytest.mark.parametrize(
    "doc,field",
    [
        ({"kind": "walker", "a": "0", "c": "0", "points": [[0, 0, 0, 0]]}, "b:"),
        ({"kind": "kerr", "points": [[0, 0, 0, 0]]}, "kind:"),
        ({"a": "0"}, "kind:"),
        ({"kind": "theta", "theta": "u^5", "points": [[0, 0, 0]]}, "points[0]:"),
        ({"kind": "theta", "theta": "u^5", "points": [[0, 0, "x", 0]]}, "points[0][2]:"),
        ({"kind": "theta", "theta": "u^5"}, "points:"),
        ({"kind": "theta", "theta": "u^5", "sample": {"box": BOX}}, "sample.count:"),
        ({"kind": "theta", "theta": "u^5", "sample": {"count": 1, "box": [[1, 0]] * 4}}, "sample.box[0]:"),
        ({"kind": "theta", "theta": "u^5", "points": [[0, 0, 0, 0]], "degree": 9}, "degree:"),
        ({"kind": "theta", "theta": "u^5", "points": [[0, 0, 0, 0]], "tolerances": {"rel": -1}}, "tolerances"),
        ({"kind": "general", "g": [["0"] * 4] * 3, "points": [[0, 0, 0, 0]]}, "g:"),
        ({"kind": "general", "g": [["0"] * 4, ["0"] * 4, ["0", "0", "w", "0"], ["0"] * 4], "points": [[0, 0, 0, 0]]}, "g[2][2]:"),
        ([1, 2], "<root>:"),
    ],
)
def test_schema_errors_name_the_field(doc, field):
    with pytest.raises(cli.SpecError) as ei:
        cli.parse_spec(doc)
    assert str(ei.value).startswith(field)


def test_parse_error_reports_offset():
    with pytest.raises(cli.SpecError) as ei:
        cli.parse_spec({"kind": "walker", "a": "u +", "b": "0", "c": "0", "points": [[0, 0, 0, 0]]})
    assert str(ei.value).startswith("a:") and "3" in str(ei.value)


def test_invalid_json(tmp_path):
    with pytest.raises(cli.SpecError, match="not valid JSON"):
        cli.load_spec(write(tmp_path, "{kind: walker"))


def test_sampled_points_depend_only_on_seed_and_index():
    a = cli.sample_point(BOX, 7, 3)
    assert a == cli.sample_point(BOX, 7, 3)
    assert a != cli.sample_point(BOX, 8, 3)
    assert all(-1 <= t <= 1 for t in a)
    spec = cli.parse_spec({"kind": "theta", "theta": "u^5", "points": [[0, 0, 0, 0]], "sample": {"count": 3, "box": BOX, "seed": 7}})
    pts = spec.sample_points()
    assert len(pts) == 4 and pts[0] == (0, 0, 0, 0) and pts[3] == cli.sample_point(BOX, 7, 2)


# running -----------------------------------------------------------------------------


def test_flat_metric_passes_everything(tmp_path):
    code, rep = run(tmp_path, {"kind": "walker", "a": "0", "b": "0", "c": "0", "points": [[0.1, 0.2, 0.3, 0.4]]})
    assert code == cli.EXIT_OK
    assert rep["summary"] == {"pass": 1, "fail": 0, "marginal": 0, "errors": 0}
    assert rep["meta"]["suites"] == list(cli.SUITES)
    rec = rep["records"][0]
    assert rec["status"] == "pass" and "right-flat" in rec["flags"]


def test_u5_is_flagged_right_flat(tmp_path):
    code, rep = run(tmp_path, {"kind": "theta", "theta": "u^5", "sample": {"count": 3, "box": BOX, "seed": 1}})
    assert code == cli.EXIT_OK
    for rec in rep["records"]:
        assert "right-flat" in rec["flags"]


def test_random_walker_passes(tmp_path):
    doc = {"kind": "walker", "a": "u^2*x - v*y^3", "b": "sin(u*y) + v^2", "c": "x*y*u - v^3",
           "sample": {"count": 4, "box": BOX, "seed": 3}}
    code, rep = run(tmp_path, doc)
    assert code == cli.EXIT_OK, [r for r in rep["records"] if r["status"] != "pass"]


def test_impossible_tolerance_fails(tmp_path):
    doc = {"kind": "walker", "a": "u^2*x - v*y^3", "b": "sin(u*y) + v^2", "c": "x*y*u - v^3", "points": [[0.3, -0.2, 0.5, 0.1]]}
    code, rep = run(tmp_path, doc, "--suite", "curvature", "--tol-rel", "1e-300")
    assert code == cli.EXIT_FAIL
    assert rep["summary"]["fail"] == 1


def test_usage_errors_exit_two(tmp_path, capsys):
    code, rep = run(tmp_path, {"kind": "walker", "a": "0", "c": "0", "points": [[0, 0, 0, 0]]})
    assert code == cli.EXIT_USAGE and rep is None
    assert "b: required field missing" in capsys.readouterr().err
    assert cli.main(["check", "--spec", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o.json")]) == cli.EXIT_USAGE
    doc = {"kind": "omega", "omega": "u*x + v*y", "points": [[0, 0, 0, 0]]}
    assert run(tmp_path, doc, "--suite", "spinor")[0] == cli.EXIT_USAGE
    assert run(tmp_path, doc, "--suite", "heavenly", "--degree", "3")[0] == cli.EXIT_USAGE
    assert run(tmp_path, doc, "--degree", "7")[0] == cli.EXIT_USAGE


def test_point_errors_are_counted_separately(tmp_path):
    doc = {"kind": "walker", "a": "log(u)", "b": "0", "c": "0", "points": [[-1, 0, 0, 0], [1, 0, 0, 0]]}
    code, rep = run(tmp_path, doc, "--suite", "curvature")
    assert rep["summary"]["errors"] == 1 and rep["summary"]["pass"] == 1
    assert rep["records"][0]["status"] == "error" and "log" in rep["records"][0]["error"]
    assert code == cli.EXIT_OK


def test_singular_product_metric_is_a_point_error(tmp_path):
    code, rep = run(tmp_path, {"kind": "omega", "omega": "u*x", "points": [[0, 0, 0, 0]]})
    assert rep["summary"]["errors"] == 1


def test_reports_are_byte_identical(tmp_path):
    doc = {"kind": "theta", "theta": "u^3*x^2 + v^2*y*x", "sample": {"count": 3, "box": BOX, "seed": 11}}
    spec = write(tmp_path, doc)
    texts = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        cli.main(["check", "--spec", spec, "--out", str(out), "--seed", "5"])
        texts.append(out.read_bytes())
    assert texts[0] == texts[1]
    assert json.loads(texts[0])["meta"]["seed"] == 5


def test_classify_command(tmp_path):
    code, rep = run(tmp_path, {"kind": "walker", "a": "u*y", "b": "0", "c": "0", "points": [[0.3, 0.2, 0.1, -0.4]]}, command="classify")
    assert code == cli.EXIT_OK
    assert rep["meta"]["suites"] == ["classify"]


def test_general_metric_curvature(tmp_path):
    doc = {"kind": "general", "g": [["0", "0", "1", "0"], ["0", "0", "0", "1"], ["1", "0", "u^2", "0"], ["0", "1", "0", "0"]],
           "points": [[0.2, 0.1, 0.3, 0.4]]}
    code, rep = run(tmp_path, doc)
    assert code == cli.EXIT_OK
    assert rep["meta"]["suites"] == ["curvature"]


# serialization -----------------------------------------------------------------------


def test_serialization_round_trip():
    report = {"a": 0.0, "b": [1.0, 2.5e-300, float("nan")], "c": {"d": np.float64(0.1), "e": np.arange(3)}, "f": [], "g": {}}
    text = cli.dumps_report(report)
    back = json.loads(text)
    assert back["a"] == 0.0 and isinstance(back["a"], float)
    assert back["b"] == [1.0, 2.5e-300, None]
    assert back["c"] == {"d": 0.1, "e": [0, 1, 2]}
    assert back["f"] == [] and back["g"] == {}
    assert cli.dumps_report(back) == cli.dumps_report(json.loads(cli.dumps_report(back)))


def test_floats_keep_full_precision():
    x = 0.1 + 0.2
    assert json.loads(cli.dumps_report({"x": x}))["x"] == x


# geodesics ---------------------------------------------------------------------------


def test_geodesic_rows(tmp_path):
    doc = {"kind": "walker", "a": "u^2", "b": "0", "c": "0", "points": [[0, 0, 0, 0]]}
    code, rep = run(tmp_path, doc, "--init", "0,0,0,0,1,0,0.5,0", "--h", "0.01", "--n", "20", command="geodesic")
    assert code == cli.EXIT_OK
    assert rep["columns"] == list(cli.TRAJECTORY_COLUMNS)
    rows = np.array(rep["rows"])
    assert rows.shape == (21, 10)
    assert np.allclose(rows[:, 0], 0.01 * np.arange(21))
    assert rep["summary"]["norm_drift"] < 1e-10


def test_geodesic_needs_walker_metric(tmp_path):
    doc = {"kind": "omega", "omega": "u*x + v*y", "points": [[0, 0, 0, 0]]}
    assert run(tmp_path, doc, "--init", "0,0,0,0,1,0,0,0", "--h", "0.1", "--n", "2", command="geodesic")[0] == cli.EXIT_USAGE
    doc = {"kind": "walker", "a": "0", "b": "0", "c": "0", "points": [[0, 0, 0, 0]]}
    assert run(tmp_path, doc, "--init", "0,0,0", "--h", "0.1", "--n", "2", command="geodesic")[0] == cli.EXIT_USAGE


def test_module_entry_point(tmp_path):
    import subprocess
    import sys

    spec = write(tmp_path, {"kind": "walker", "a": "0", "b": "0", "c": "0", "points": [[0, 0, 0, 0]]})
    res = subprocess.run([sys.executable, "-m", "walkergeom", "check", "--spec", spec, "--out", str(tmp_path / "o.json")])
    assert res.returncode == 0
