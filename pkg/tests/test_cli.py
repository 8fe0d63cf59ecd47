from __future__ import annotations

import json

import numpy as np
import pytest

from loxoforge.cli import main
from loxoforge.export import read_trace_csv


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list_names_key_surfaces(capsys):
    code, out, _ = _run(capsys, "list")
    assert code == 0
    funnel = next(line for line in out.splitlines() if line.startswith("funnel"))
    assert "complete minimal surface in H2xR" in funnel
    for sid in ("twisted_sphere", "helicoidal_catenoid", "sphere"):
        assert any(line.startswith(sid) for line in out.splitlines())


def test_trace_csv_is_deterministic_and_matches_sphere(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["trace", "--surface", "sphere", "--theta0", "pi/4", "--u0", "0.3",
                     "--u-end", "2.8", "--samples", "51", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    cols = read_trace_csv(a.read_text())
    ref = np.log(np.tan(cols["u"] / 2)) - np.log(np.tan(0.15))
    assert np.max(np.abs(cols["v"] - ref)) <= 1e-9


def test_helicoidal_catenoid_csv(tmp_path):
    th = np.pi / 6

    def ref(u):
        return np.sqrt(2) * (1 + 1 / np.tan(th)) * np.arctan(u / np.sqrt(2)) - np.arctan(u)

    out = tmp_path / "hc.csv"
    assert main(["trace", "--surface", "helicoidal_catenoid", "--theta0", "pi/6", "--u0", "-3",
                 "--v0", repr(float(ref(-3.0))), "--u-end", "3", "--samples", "301",
                 "--out", str(out)]) == 0
    cols = read_trace_csv(out.read_text())
    assert np.max(np.abs(cols["v"] - ref(cols["u"]))) <= 1e-8


def test_trace_json_and_round_trip_verify(tmp_path, capsys):
    csv = tmp_path / "t.csv"
    assert main(["trace", "--surface", "funnel", "--theta0", "pi/3", "--branch", "minus",
                 "--samples", "301", "--out", str(csv)]) == 0
    code, out, _ = _run(capsys, "verify", "--surface", "funnel", "--trace-file", str(csv),
                        "--branch", "minus")
    assert code == 0 and json.loads(out)[0]["pass"] is True
    code, out, _ = _run(capsys, "verify", "--surface", "funnel", "--trace-file", str(csv),
                        "--branch", "minus", "--corrupt")
    assert code == 1 and json.loads(out)[0]["pass"] is False

    js = tmp_path / "t.json"
    assert main(["trace", "--surface", "funnel", "--theta0", "pi/3", "--format", "json",
                 "--samples", "201", "--out", str(js)]) == 0
    doc = json.loads(js.read_text())
    assert len(doc["samples"]["u"]) == 201 and doc["report"]["pass"] is True


def test_verify_suite_subset_and_corrupt(capsys):
    code, out, err = _run(capsys, "verify", "--surface", "sphere,heis_g1", "--theta0", "pi/4")
    assert code == 0 and len(json.loads(out)) == 4 and "4/4" in err
    code, _, _ = _run(capsys, "verify", "--surface", "sphere", "--theta0", "pi/4", "--corrupt")
    assert code == 1
    code, _, _ = _run(capsys, "verify", "--surface", ",")
    assert code == 2


def test_mesh_counts(tmp_path):
    out = tmp_path / "m.obj"
    assert main(["mesh", "--surface", "sphere", "--u-samples", "8", "--v-samples", "16",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert sum(line.startswith("v ") for line in lines) == 8 * 16
    assert main(["mesh", "--surface", "funnel", "--u-samples", "4", "--v-samples", "6",
                 "--traces", "3", "--samples", "11", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert sum(line.startswith("l ") for line in lines) == 3
    assert main(["mesh", "--surface", "sphere", "--u-samples", "1", "--out", str(out)]) == 2


def test_plot_svg(tmp_path):
    csv = tmp_path / "t.csv"
    main(["trace", "--surface", "sphere", "--theta0", "pi/5", "--samples", "31", "--out", str(csv)])
    svg1, svg2 = tmp_path / "1.svg", tmp_path / "2.svg"
    assert main(["plot", str(csv), str(csv), "--out", str(svg1)]) == 0
    assert main(["plot", str(csv), str(csv), "--out", str(svg2)]) == 0
    text = svg1.read_text()
    assert text.startswith("<svg") or text.startswith("<?xml")
    assert svg1.read_bytes() == svg2.read_bytes()
    assert "theta0 = 0.628319" in text


@pytest.mark.parametrize(
    "argv, code",
    [
        (["trace", "--surface", "torus", "--theta0", "1"], 2),
        (["trace", "--surface", "sphere", "--theta0", "nonsense("], 2),
        (["trace", "--surface", "sphere", "--theta0", "1", "--u0", "-1"], 3),
        (["plot", "/nonexistent/file.csv"], 4),
    ],
)
def test_exit_codes(argv, code, capsys):
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code


def test_malformed_csv_exits_4(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("u,v\n1,2\n")
    assert main(["plot", str(bad)]) == 4
    assert main(["verify", "--surface", "sphere", "--trace-file", str(bad)]) == 4
