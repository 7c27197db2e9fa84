import hashlib
import json
from pathlib import Path

import pytest

from plotkit import FigureSpec, SchemaVersionError, render
from plotkit.cli import main

DATA = Path(__file__).parent / "data"


def png_pixel_hash(path) -> str:
    import matplotlib.image as mpimg

    arr = mpimg.imread(path)
    return hashlib.sha256(arr.tobytes()).hexdigest()


class TestSchemaValidation:
    def test_mismatch_is_named_error(self, tmp_path):
        spec = FigureSpec(
            kind="threshold", csv_path=str(DATA / "steane_sweep.csv"), out_path=str(tmp_path / "x.png")
        )
        with pytest.raises(SchemaVersionError) as err:
            render(spec)
        assert err.value.expected == "pauliconj.threshold.v1"
        assert err.value.found == "pauliconj.sweep.v1"

    def test_missing_header(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("code,theta,scheme,fidelity\n")
        spec = FigureSpec(kind="sweep", csv_path=str(bad), out_path=str(tmp_path / "x.png"))
        with pytest.raises(SchemaVersionError):
            render(spec)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            FigureSpec(kind="pie", csv_path="x.csv", out_path="x.png")


class TestRenderKinds:
    @pytest.mark.parametrize(
        "kind,csv_name",
        [
            ("sweep", "steane_sweep.csv"),
            ("threshold", "steane_threshold.csv"),
            ("multiround", "steane_multiround.csv"),
            ("noisy", "five_noisy.csv"),
        ],
    )
    def test_renders_without_error(self, tmp_path, kind, csv_name):
        out = tmp_path / f"{kind}.png"
        spec = FigureSpec(kind=kind, csv_path=str(DATA / csv_name), out_path=str(out))
        assert render(spec) == str(out)
        assert out.stat().st_size > 0

    def test_threshold_with_crossing_markers(self, tmp_path):
        out = tmp_path / "thr.png"
        spec = FigureSpec(
            kind="threshold",
            csv_path=str(DATA / "steane_threshold.csv"),
            out_path=str(out),
            report_path=str(DATA / "steane_threshold.csv.json"),
        )
        render(spec)
        assert out.exists()

    def test_svg_output(self, tmp_path):
        out = tmp_path / "sweep.svg"
        spec = FigureSpec(kind="sweep", csv_path=str(DATA / "steane_sweep.csv"), out_path=str(out))
        render(spec)
        assert out.read_text().startswith("<?xml")

    def test_header_only_csv_gives_empty_axes(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("# schema=pauliconj.sweep.v1\ncode,theta,scheme,fidelity\n")
        out = tmp_path / "empty.png"
        render(FigureSpec(kind="sweep", csv_path=str(empty), out_path=str(out)))
        assert out.exists()


class TestDeterminismAndGolden:
    def test_same_inputs_same_pixels(self, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        for out in (a, b):
            render(FigureSpec(kind="sweep", csv_path=str(DATA / "steane_sweep.csv"), out_path=str(out)))
        assert a.read_bytes() == b.read_bytes()

    def test_golden_sweep(self, tmp_path):
        out = tmp_path / "golden.png"
        render(FigureSpec(kind="sweep", csv_path=str(DATA / "steane_sweep.csv"), out_path=str(out)))
        golden = DATA / "steane_sweep.golden.png"
        assert png_pixel_hash(out) == png_pixel_hash(golden)


class TestCli:
    def test_render_single(self, tmp_path, capsys):
        spec = {
            "kind": "sweep",
            "csv": str(DATA / "steane_sweep.csv"),
            "out": str(tmp_path / "o.png"),
        }
        spec_file = tmp_path / "s.json"
        spec_file.write_text(json.dumps(spec))
        assert main(["render", "--spec", str(spec_file)]) == 0
        assert (tmp_path / "o.png").exists()

    def test_render_all(self, tmp_path, capsys):
        for i in range(2):
            spec = {
                "kind": "sweep",
                "csv": str(DATA / "steane_sweep.csv"),
                "out": str(tmp_path / f"o{i}.png"),
            }
            (tmp_path / f"fig{i}.figspec.json").write_text(json.dumps(spec))
        assert main(["render-all", str(tmp_path)]) == 0
        assert (tmp_path / "o0.png").exists() and (tmp_path / "o1.png").exists()

    def test_schema_error_exit_code(self, tmp_path, capsys):
        spec = {
            "kind": "threshold",
            "csv": str(DATA / "steane_sweep.csv"),
            "out": str(tmp_path / "o.png"),
        }
        spec_file = tmp_path / "s.json"
        spec_file.write_text(json.dumps(spec))
        assert main(["render", "--spec", str(spec_file)]) == 2
