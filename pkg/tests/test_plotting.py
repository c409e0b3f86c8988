"""SVG emission: gamma_3 curve spot checks and ratio plots from sweep CSVs."""

import json
import re

import pytest

from tauvar.plotting import GAMMA3_SAMPLES, PlotFrame, emit_plot, sample_gamma3_curve
from tauvar.sweep import CSV_COLUMNS


def _extract_metadata(svg_text: str) -> dict:
    m = re.search(r"<metadata>(.*?)</metadata>", svg_text, re.S)
    assert m, "SVG must embed its sampled data"
    return json.loads(m.group(1))


def test_gamma3_samples_spot_values():
    xs, ys = sample_gamma3_curve()
    assert len(xs) == GAMMA3_SAMPLES
    table = dict(zip(xs, ys))
    assert table[0.0] == 0.0
    assert table[3.0] == pytest.approx(0.0, abs=1e-12)
    assert table[1.0] == pytest.approx(9.0, rel=1e-12)  # 9! / 8!
    assert table[2.0] == pytest.approx(9.0, rel=1e-12)
    # curve peaks mid-interval (symmetric hump of the middle branch)
    assert max(ys) == pytest.approx(table[1.5], rel=1e-12)


def test_gamma3_svg(tmp_path):
    out = emit_plot("gamma3", tmp_path / "gamma3.svg")
    text = out.read_text()
    assert text.startswith("<svg")
    meta = _extract_metadata(text)
    assert meta["target"] == "gamma3"
    table = dict(zip(meta["x"], meta["y"]))
    assert table[1.0] == pytest.approx(9.0, rel=1e-12)
    assert table[2.0] == pytest.approx(9.0, rel=1e-12)
    assert table[0.0] == 0.0 and table[3.0] == pytest.approx(0.0, abs=1e-12)
    # polyline pixels must be consistent with the declared data
    pts = re.search(r'<polyline[^>]*points="([^"]+)"', text).group(1).split()
    assert len(pts) == GAMMA3_SAMPLES
    frame = PlotFrame(x0=0.0, x1=3.0, y0=0.0, y1=max(meta["y"]) * 1.06)
    for i in (0, 200, 400, 600):  # c = 0, 1, 2, 3
        px, py = (float(v) for v in pts[i].split(","))
        assert px == pytest.approx(frame.px(meta["x"][i]), abs=0.01)
        assert py == pytest.approx(frame.py(meta["y"][i]), abs=0.01)


def test_ratio_csv_plot(tmp_path):
    csv_path = tmp_path / "summary.csv"
    rows = [
        ",".join(CSV_COLUMNS),
        "3,101,2.6,1.6e5,smooth,1.0,2.0,0.5,simple,0.1",
        "3,1009,2.6,6.4e7,smooth,2.0,2.0,1.0,simple,0.2",
    ]
    csv_path.write_text("\n".join(rows) + "\n")
    out = emit_plot("ratio-csv", tmp_path / "ratio.svg", csv_path=csv_path)
    text = out.read_text()
    meta = _extract_metadata(text)
    assert meta["points"] == 2
    assert "circle" in text and "polyline" in text


def test_ratio_csv_empty_is_fine(tmp_path):
    csv_path = tmp_path / "empty.csv"
    csv_path.write_text(",".join(CSV_COLUMNS) + "\n")
    out = emit_plot("ratio-csv", tmp_path / "empty.svg", csv_path=csv_path)
    text = out.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert _extract_metadata(text)["points"] == 0


def test_plot_errors(tmp_path):
    with pytest.raises(ValueError, match="does not exist"):
        emit_plot("gamma3", tmp_path / "missing_dir" / "x.svg")
    with pytest.raises(ValueError, match="unknown plot target"):
        emit_plot("spectrogram", tmp_path / "x.svg")
    with pytest.raises(ValueError, match="sweep"):
        emit_plot("ratio-csv", tmp_path / "x.svg")
