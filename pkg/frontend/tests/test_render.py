"""Figure rendering: curve counts, monotone axes, and input validation,
all verified by parsing the emitted SVG."""

import re
import xml.etree.ElementTree as ET

import pytest

from fgqc_figures import CSV_HEADER, FigureSpec, read_sweep, render
from fgqc_figures.cli import main

RABI_GRID = [-0.1, -0.05, 0.0, 0.05, 0.1]
DECAY_GRID = [0.0, 1e-3, 2e-3, 3e-3]


def _write_csv(path, rows):
    lines = [CSV_HEADER] + [
        f"{g},{s},{p},{v:.10g},{f:.10g},{leak:.10g},{ms:.10g}"
        for (g, s, p, v, f, leak, ms) in rows
    ]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def _rabi_rows(gate, scheme, fidelities):
    return [
        (gate, scheme, "rabi", v, f, 1e-4, 12.5)
        for v, f in zip(RABI_GRID, fidelities)
    ]


def _fig2_csvs(tmp_path):
    return [
        _write_csv(tmp_path / "dg.csv",
                   _rabi_rows("cnot", "dg-fgqc", [0.979, 0.995, 0.9996, 0.996, 0.980])),
        _write_csv(tmp_path / "both.csv",
                   _rabi_rows("cnot", "fgqc-fgqc", [0.997, 0.999, 0.9996, 0.999, 0.998])),
        _write_csv(tmp_path / "orig.csv",
                   _rabi_rows("cnot", "original-fgqc", [0.93, 0.97, 0.99, 0.95, 0.85])),
    ]


def _fig6_csv(tmp_path):
    rows = [
        ("cnot", "dg-fgqc", "decay", v, f, 1e-3, 900.0)
        for v, f in zip(DECAY_GRID, [0.9996, 0.997, 0.995, 0.993])
    ] + [
        ("ct", "dg-fgqc", "decay", v, f, 1e-3, 300.0)
        for v, f in zip(DECAY_GRID, [0.99997, 0.9996, 0.9992, 0.9989])
    ]
    return _write_csv(tmp_path / "decay.csv", rows)


def _local_name(tag):
    return tag.rsplit("}", 1)[-1]


def _curves(svg_path):
    """Map curve gid -> list of (x, y) display coordinates from the path."""
    root = ET.parse(svg_path).getroot()
    curves = {}
    for el in root.iter():
        gid = el.get("id", "")
        if _local_name(el.tag) == "g" and gid.startswith("curve-"):
            paths = [c for c in el.iter() if _local_name(c.tag) == "path"]
            assert len(paths) == 1, f"{gid}: expected a single polyline path"
            numbers = [float(v) for v in re.findall(r"-?\d+\.?\d*", paths[0].get("d"))]
            curves[gid] = list(zip(numbers[0::2], numbers[1::2]))
    return curves


def _xtick_values(svg_path):
    root = ET.parse(svg_path).getroot()
    values = []
    for el in root.iter():
        if _local_name(el.tag) == "g" and el.get("id", "").startswith("xtick"):
            label = "".join(el.itertext()).strip().replace("−", "-")
            values.append(float(label))
    return values


def test_fig2_has_one_curve_per_scheme(tmp_path):
    out = tmp_path / "fig2.svg"
    render(FigureSpec("fig2", tuple(_fig2_csvs(tmp_path)), str(out)))
    curves = _curves(out)
    assert sorted(curves) == [
        "curve-cnot-dg-fgqc",
        "curve-cnot-fgqc-fgqc",
        "curve-cnot-original-fgqc",
    ]
    assert all(len(pts) == len(RABI_GRID) for pts in curves.values())


def test_fig6_has_one_curve_per_gate(tmp_path):
    out = tmp_path / "fig6.svg"
    assert main(["--figure", "fig6", "--csv", _fig6_csv(tmp_path),
                 "--out", str(out)]) == 0
    curves = _curves(out)
    assert sorted(curves) == ["curve-cnot-dg-fgqc", "curve-ct-dg-fgqc"]


def test_curve_x_coordinates_monotone(tmp_path):
    out = tmp_path / "fig6.svg"
    render(FigureSpec("fig6", (_fig6_csv(tmp_path),), str(out)))
    for gid, pts in _curves(out).items():
        xs = [x for x, _ in pts]
        assert xs == sorted(xs), f"{gid}: x coordinates not monotone"


def test_xtick_labels_monotone(tmp_path):
    out = tmp_path / "fig2.svg"
    render(FigureSpec("fig2", tuple(_fig2_csvs(tmp_path)), str(out)))
    ticks = _xtick_values(out)
    assert len(ticks) >= 3
    assert ticks == sorted(ticks)


def test_rerender_is_identical(tmp_path):
    csvs = tuple(_fig2_csvs(tmp_path))
    out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
    render(FigureSpec("fig2", csvs, str(out1)))
    render(FigureSpec("fig2", csvs, str(out2)))
    assert _curves(out1) == _curves(out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_output_defaults_to_svg_without_extension(tmp_path):
    out = tmp_path / "figure"
    render(FigureSpec("fig6", (_fig6_csv(tmp_path),), str(out)))
    assert b"<svg" in out.read_bytes()


def test_read_sweep_roundtrip(tmp_path):
    path = _write_csv(tmp_path / "x.csv", _rabi_rows("ct", "dg-fgqc", [1, 1, 1, 1, 1]))
    rows = read_sweep(path)
    assert [r["value"] for r in rows] == pytest.approx(RABI_GRID)
    assert rows[0]["gate"] == "ct"


def test_empty_csv_is_an_error(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text(CSV_HEADER + "\n")
    out = tmp_path / "fig2.svg"
    code = main(["--figure", "fig2", "--csv", str(path), "--out", str(out)])
    assert code == 1
    assert "no data rows" in capsys.readouterr().err
    assert not out.exists()


def test_missing_csv_is_an_error(tmp_path, capsys):
    out = tmp_path / "fig2.svg"
    code = main(["--figure", "fig2", "--csv", str(tmp_path / "nope.csv"),
                 "--out", str(out)])
    assert code == 1
    assert "error" in capsys.readouterr().err
    assert not out.exists()


def test_wrong_header_is_an_error(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("gate,scheme,value,fidelity\ncnot,dg-fgqc,0,1\n")
    code = main(["--figure", "fig2", "--csv", str(path), "--out",
                 str(tmp_path / "fig.svg")])
    assert code == 1
    assert "header" in capsys.readouterr().err


def test_param_mismatch_is_an_error(tmp_path, capsys):
    code = main(["--figure", "fig2", "--csv", _fig6_csv(tmp_path),
                 "--out", str(tmp_path / "fig.svg")])
    assert code == 1
    assert "param" in capsys.readouterr().err


def test_unknown_figure_id_is_rejected(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        main(["--figure", "fig9", "--csv", "x.csv", "--out", "y.svg"])
    assert excinfo.value.code == 2


def test_figure_spec_validates_id():
    with pytest.raises(ValueError, match="unknown figure id"):
        FigureSpec("fig9", ("x.csv",), "y.svg")
    with pytest.raises(ValueError, match="CSV path"):
        FigureSpec("fig2", (), "y.svg")
