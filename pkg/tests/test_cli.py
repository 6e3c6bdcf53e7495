from __future__ import annotations

import json

import pytest

from knotcomplex.cli import main
from knotcomplex.complex import complex_from_json
from knotcomplex.construction import build_pipeline

SMALL = ["--knot-samples", "3", "--contraction-samples", "1", "--forest-trials", "10", "--scope", "sampled:10"]


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    out = tmp_path_factory.mktemp("build")
    assert main(["build", "--out", str(out), "--format", "json,off,obj,dot"]) == 0
    return out


def test_argument_errors_exit_2(tmp_path):
    for argv in (
        ["generate", "--n", "19", "--out", str(tmp_path)],
        ["generate", "--format", "stl", "--out", str(tmp_path)],
        ["verify", "--scope", "half", "--out", str(tmp_path)],
        ["knot", "--out", str(tmp_path)],
        ["knot", "--edge", "1", "--p", "4", "--out", str(tmp_path)],
        ["verify", "--seed", str(2 ** 64), "--out", str(tmp_path)],
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2, argv


def test_generate_writes_every_format(tmp_path):
    assert main(["generate", "--out", str(tmp_path), "--format", "json,off,obj,dot"]) == 0
    off = (tmp_path / "complex.off").read_text().splitlines()
    assert off[0] == "OFF"
    # 41 x 20 x 20 box: vertices, faces, edges
    assert off[1].split() == ["18522", "51240", "53361"]
    data = json.loads((tmp_path / "complex.json").read_text())
    assert data["header"]["n"] == 20 and data["header"]["seed"] == 0
    assert data["dims"] == [41, 20, 20]
    assert (tmp_path / "complex.obj").read_text().startswith("v 0 0 0")
    assert (tmp_path / "complex.dot").read_text().startswith("graph C {")


def test_build_outputs(built):
    tree = json.loads((built / "tree.json").read_text())
    assert tree["tree"]["edge_count"] == 18521
    cpp = json.loads((built / "cdoubleprime.json").read_text())
    assert len(cpp["complex"]["vertices"]) == 1
    assert len(cpp["complex"]["edges"]) == 53359
    spine = json.loads((built / "spine.json").read_text())
    assert spine["spine"]["markers"]["A"]["coords"] == [22, 1, 1]
    for name in ("cprime.off", "tree.obj", "tree.dot"):
        assert (built / name).stat().st_size > 0


def test_build_is_byte_identical(built, tmp_path):
    assert main(["build", "--out", str(tmp_path)]) == 0
    for name in ("spine.json", "tree.json", "cprime.json", "cdoubleprime.json"):
        assert (tmp_path / name).read_bytes() == (built / name).read_bytes(), name


def test_built_complexes_reload_equal(built):
    pipe = build_pipeline(20, 0)
    cp = complex_from_json(json.loads((built / "cprime.json").read_text())["complex"])
    cpp = complex_from_json(json.loads((built / "cdoubleprime.json").read_text())["complex"])
    assert cp.same_as(pipe.cprime)
    assert cpp.same_as(pipe.cdoubleprime)


def test_knot_command(built, tmp_path, capsys):
    tree = json.loads((built / "tree.json").read_text())
    complex_edge = min(t[3] for t in tree["tree"]["edges"] if t[2] == "edge")
    assert main(["knot", "--edge", str(complex_edge), "--out", str(tmp_path)]) == 2
    assert main(["knot", "--edge", "-5", "--out", str(tmp_path)]) == 2
    cpp = json.loads((built / "cdoubleprime.json").read_text())
    e = cpp["complex"]["edges"][0][0]
    capsys.readouterr()
    assert main(["knot", "--edge", str(e), "--p", "3,5", "--out", str(tmp_path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "prime\tcolorings"
    data = json.loads((tmp_path / f"knot_{e}.json").read_text())
    assert set(data["colorings"]) == {"3", "5"}
    assert data["colorings"]["3"] >= 9
    assert data["certificate"]["verdict"] == "Nontrivial"
    assert data["segment"] in ("P2", "P4")
    assert (tmp_path / "figures" / f"knot_{e}.png").exists()


def test_verify_small_run_passes(tmp_path, capsys):
    assert main(["verify", "--out", str(tmp_path), *SMALL]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["passed"] and report["header"]["seed"] == 0
    tsv = (tmp_path / "report.tsv").read_text()
    assert capsys.readouterr().out == tsv
    assert (tmp_path / "figures" / "check_times.png").exists()
    assert (tmp_path / "figures" / "spine.png").exists()


def test_verify_with_injections_exits_1(tmp_path):
    assert main(["verify", "--out", str(tmp_path), "--inject-negative", "--no-figures", *SMALL]) == 1
    report = json.loads((tmp_path / "report.json").read_text())
    failed = {c["name"] for c in report["checks"] if not c["passed"]}
    assert failed == {"inject_tree_deleted_edge", "inject_tree_added_edge",
                      "inject_unknotted_cycle", "inject_non_collinear_triple"}
    assert not (tmp_path / "figures").exists()


def test_unwritable_output_exits_3(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["generate", "--out", str(blocker / "sub")]) == 3
