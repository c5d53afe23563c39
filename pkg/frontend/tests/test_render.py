import shutil
from pathlib import Path

import pytest

from plot_emitter import SchemaError, plot_region, plot_sweep
from plot_emitter.cli import main as cli_main

DATA = Path(__file__).parent / "data"
GOLDEN_SWEEP = DATA / "golden_sweep_summary.csv"
GOLDEN_ELEMENTS = DATA / "golden_elements_summary.csv"
GOLDEN_REGION = DATA / "golden_region_summary.csv"


def truncate_column(src: Path, dst: Path, column: str) -> Path:
    lines = src.read_text().splitlines()
    header = lines[0].split(",")
    idx = header.index(column)
    out = []
    for line in lines:
        cells = line.split(",")
        del cells[idx]
        out.append(",".join(cells))
    dst.write_text("\n".join(out) + "\n")
    return dst


class TestSweep:
    def test_renders_golden_sidelength(self, tmp_path):
        out = plot_sweep(GOLDEN_SWEEP, "sidelength", tmp_path / "sweep.svg")
        content = out.read_text()
        assert content.startswith("<?xml")
        assert "</svg>" in content

    def test_renders_golden_elements(self, tmp_path):
        out = plot_sweep(GOLDEN_ELEMENTS, "elements", tmp_path / "elements.svg")
        assert out.stat().st_size > 0

    def test_png_output(self, tmp_path):
        out = plot_sweep(GOLDEN_SWEEP, "sidelength", tmp_path / "sweep.png",
                         image_format="png")
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_deterministic_svg(self, tmp_path):
        a = plot_sweep(GOLDEN_SWEEP, "sidelength", tmp_path / "a.svg")
        b = plot_sweep(GOLDEN_SWEEP, "sidelength", tmp_path / "b.svg")
        assert a.read_bytes() == b.read_bytes()

    def test_truncated_csv_names_missing_column(self, tmp_path):
        bad = truncate_column(GOLDEN_SWEEP, tmp_path / "bad.csv",
                              "weighted_mean_bits")
        with pytest.raises(SchemaError, match="weighted_mean_bits"):
            plot_sweep(bad, "sidelength", tmp_path / "bad.svg")

    def test_rejects_nan_cells(self, tmp_path):
        text = GOLDEN_SWEEP.read_text().splitlines()
        header = text[0].split(",")
        idx = header.index("weighted_mean_bits")
        cells = text[1].split(",")
        cells[idx] = "nan"
        bad = tmp_path / "nan.csv"
        bad.write_text("\n".join([text[0], ",".join(cells)]) + "\n")
        with pytest.raises(SchemaError, match="finite"):
            plot_sweep(bad, "sidelength", tmp_path / "nan.svg")

    def test_rejects_unknown_kind(self, tmp_path):
        with pytest.raises(ValueError, match="kind"):
            plot_sweep(GOLDEN_SWEEP, "frequency", tmp_path / "x.svg")


class TestRegion:
    def test_renders_golden(self, tmp_path):
        out = plot_region(GOLDEN_REGION, tmp_path / "region.svg")
        assert "</svg>" in out.read_text()

    def test_empty_rows_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(GOLDEN_REGION.read_text().splitlines()[0] + "\n")
        with pytest.raises(SchemaError, match="no data rows"):
            plot_region(empty, tmp_path / "empty.svg")

    def test_single_weight_renders_points(self, tmp_path):
        lines = GOLDEN_REGION.read_text().splitlines()
        subset = [lines[0]] + [l for l in lines[1:] if ",0," in l][:2]
        single = tmp_path / "single.csv"
        single.write_text("\n".join(subset) + "\n")
        out = plot_region(single, tmp_path / "single.svg")
        assert out.exists()

    def test_truncated_csv_names_missing_column(self, tmp_path):
        bad = truncate_column(GOLDEN_REGION, tmp_path / "bad.csv", "smi_mean_bits")
        with pytest.raises(SchemaError, match="smi_mean_bits"):
            plot_region(bad, tmp_path / "bad.svg")


class TestCli:
    def test_sweep_subcommand(self, tmp_path, capsys):
        code = cli_main(["sweep", "--in", str(GOLDEN_SWEEP),
                         "--out", str(tmp_path / "fig.svg")])
        assert code == 0
        assert (tmp_path / "fig.svg").exists()

    def test_region_subcommand(self, tmp_path):
        code = cli_main(["region", "--in", str(GOLDEN_REGION),
                         "--out", str(tmp_path / "fig.svg"), "--format", "svg"])
        assert code == 0

    def test_schema_error_exit_code(self, tmp_path, capsys):
        bad = truncate_column(GOLDEN_REGION, tmp_path / "bad.csv", "alpha_w")
        code = cli_main(["region", "--in", str(bad),
                         "--out", str(tmp_path / "fig.svg")])
        assert code == 2
        assert "alpha_w" in capsys.readouterr().err
