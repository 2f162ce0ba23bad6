import re

import numpy as np
import pytest

from qthermo.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from qthermo.metrics import ThermoRecord
from qthermo.sweep import (
    CSV_HEADER,
    ConfigError,
    SweepConfig,
    SweepRow,
    emit_csv,
    parse_config,
    read_csv,
    row_violations,
    run_sweep,
)
from qthermo.svgplot import emit_svg_plot

HEADER_LINE = (
    "nu_f_hz,tau_s,avg_work_hz,delta_f_hz,s_irr_work,s_irr_relent,coherence,"
    "population,bures_length,bound,jarzynski_lhs,jarzynski_rhs"
)


@pytest.fixture(scope="module")
def lab_rows():
    return run_sweep(SweepConfig())


# -- configuration ----------------------------------------------------------------


def test_empty_config_is_lab_default():
    cfg = parse_config("")
    assert cfg == SweepConfig()
    assert cfg.temperature_hz == 1580.2
    assert cfg.nu_i == 2000.0
    assert cfg.nu_f_list == (3600.0, 5000.0)
    assert (cfg.tau_start, cfg.tau_end, cfg.tau_steps) == (100e-6, 800e-6, 8)
    assert (cfg.slices, cfg.tolerance) == (256, 1e-9)
    np.testing.assert_allclose(cfg.tau_grid(), np.arange(1, 9) * 100e-6)


def test_file_parsing_with_comments():
    text = """
    # lab run, finer grid
    temperature_hz = 1580.2
    nu_f_list = 3600, 5000   # both gaps
    tau_steps = 15
    out = result.csv
    """
    cfg = parse_config(text)
    assert cfg.tau_steps == 15
    assert cfg.nu_f_list == (3600.0, 5000.0)
    assert cfg.output_path == "result.csv"


def test_tau_steps_zero_rejected():
    with pytest.raises(ConfigError, match="tau_steps"):
        parse_config("tau_steps = 0")


@pytest.mark.parametrize(
    "text, pattern",
    [
        ("nu_i = fast", r"line 1: malformed value for nu_i"),
        ("\n\ncolour = red", r"line 3: unknown key 'colour'"),
        ("nu_i 2000", r"line 1: expected"),
        ("tau_start = 5e-4\ntau_end = 1e-4", r"tau_end"),
        ("tolerance = -1", r"tolerance"),
        ("nu_f_list = 3600, -5", r"nu_f_list"),
    ],
)
def test_config_errors(text, pattern):
    with pytest.raises(ConfigError, match=pattern):
        parse_config(text)


def test_flag_overrides_file():
    cfg = parse_config("nu_i = 1500\nslices = 64", {"nu_i": "2500", "slices": None})
    assert cfg.nu_i == 2500.0
    assert cfg.slices == 64


def test_bad_flag_value():
    with pytest.raises(ConfigError, match="--tau-steps"):
        parse_config(None, {"tau_steps": "many"})


# -- sweep ---------------------------------------------------------------------------


def test_lab_sweep_rows(lab_rows):
    assert len(lab_rows) == 16
    keys = [(r.nu_f, r.tau) for r in lab_rows]
    assert keys == sorted(keys)
    assert row_violations(lab_rows) == []


def test_sweep_is_deterministic(lab_rows):
    again = run_sweep(SweepConfig())
    assert [r.record for r in again] == [r.record for r in lab_rows]


def test_entropy_falls_with_driving_time(lab_rows):
    for nu_f in (3600.0, 5000.0):
        rows = [r for r in lab_rows if r.nu_f == nu_f]
        assert rows[0].s_irr_relent_route > rows[-1].s_irr_relent_route


def test_equal_gaps_slow_drive():
    cfg = SweepConfig(nu_f_list=(2000.0,), tau_start=5e-3, tau_end=5e-3, tau_steps=1)
    (row,) = run_sweep(cfg)
    # only the field rotation remains, which a slow drive follows adiabatically
    assert 0.0 <= row.s_irr_relent_route < 1e-3


def test_single_tau_grid():
    cfg = SweepConfig(tau_start=2e-4, tau_end=6e-4, tau_steps=1)
    np.testing.assert_array_equal(cfg.tau_grid(), [2e-4])


def test_row_exposes_record_fields(lab_rows):
    r = lab_rows[0]
    assert r.coherence_term == r.record.coherence_term
    with pytest.raises(AttributeError):
        r.nonexistent


# -- CSV --------------------------------------------------------------------------------


def test_csv_layout(lab_rows, tmp_path):
    path = emit_csv(lab_rows, tmp_path / "s.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 17
    assert lines[0] == HEADER_LINE
    assert ",".join(CSV_HEADER) == HEADER_LINE


def test_csv_round_trip(lab_rows, tmp_path):
    path = emit_csv(lab_rows, tmp_path / "s.csv")
    parsed = read_csv(path)
    for rec, row in zip(parsed, lab_rows):
        assert rec["tau_s"] == pytest.approx(row.tau, rel=1e-12)
        assert rec["s_irr_relent"] == pytest.approx(row.s_irr_relent_route, rel=1e-11)
        assert rec["bound"] == pytest.approx(row.bound_value, rel=1e-11)
        assert rec["jarzynski_lhs"] == pytest.approx(row.jarzynski_lhs, rel=1e-11)
    # every field carries at most 12 significant digits
    for line in path.read_text().splitlines()[1:]:
        for field in line.split(","):
            mantissa = re.sub(r"e.*$", "", field).lstrip("-").replace(".", "").lstrip("0")
            assert len(mantissa) <= 12


def test_csv_deterministic(lab_rows, tmp_path):
    a = emit_csv(lab_rows, tmp_path / "a.csv").read_bytes()
    b = emit_csv(run_sweep(SweepConfig()), tmp_path / "b.csv").read_bytes()
    assert a == b


def test_csv_errors(lab_rows, tmp_path):
    with pytest.raises(ValueError):
        emit_csv([], tmp_path / "x.csv")
    with pytest.raises(OSError):
        emit_csv(lab_rows, tmp_path / "missing" / "x.csv")


# -- SVG --------------------------------------------------------------------------------


def _polylines(svg):
    return re.findall(r'<polyline class="series" data-series="(\w+)" points="([^"]*)"', svg)


def test_svg_per_gap(lab_rows, tmp_path):
    paths = emit_svg_plot(lab_rows, tmp_path / "fig.svg")
    assert [p.name for p in paths] == ["fig_3600.svg", "fig_5000.svg"]
    for p in paths:
        svg = p.read_text()
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
        assert "href" not in svg and "<script" not in svg
        assert len(_polylines(svg)) == 3
        assert "driving time" in svg and "entropy (nats)" in svg
        assert svg.count('class="legend"') == 3


def test_svg_bound_below_entropy(lab_rows, tmp_path):
    for p in emit_svg_plot(lab_rows, tmp_path / "fig.svg"):
        series = {name: pts for name, pts in _polylines(p.read_text())}
        top = [tuple(map(float, xy.split(","))) for xy in series["s_irr_relent_route"].split()]
        bound = [tuple(map(float, xy.split(","))) for xy in series["bound_value"].split()]
        for (xs, ys), (xb, yb) in zip(top, bound):
            assert xs == xb
            assert yb >= ys  # SVG y grows downward


def test_svg_single_row(lab_rows, tmp_path):
    (path,) = emit_svg_plot(lab_rows[:1], tmp_path / "one.svg")
    svg = path.read_text()
    assert len(_polylines(svg)) == 3
    assert svg.count("<circle") == 3


def test_svg_deterministic(lab_rows, tmp_path):
    a = emit_svg_plot(lab_rows, tmp_path / "a.svg")
    b = emit_svg_plot(run_sweep(SweepConfig()), tmp_path / "b.svg")
    assert [x.read_bytes() for x in a] == [x.read_bytes() for x in b]


def test_svg_unwritable(lab_rows, tmp_path):
    with pytest.raises(OSError):
        emit_svg_plot(lab_rows, tmp_path / "nope" / "fig.svg")


# -- CLI --------------------------------------------------------------------------------


def test_cli_end_to_end(tmp_path):
    out, plot = tmp_path / "s.csv", tmp_path / "p.svg"
    code = main(["--nu-f", "3600", "--tau-steps", "3", "--out", str(out), "--plot", str(plot)])
    assert code == EXIT_OK
    assert len(out.read_text().splitlines()) == 4
    assert (tmp_path / "p_3600.svg").exists()


def test_cli_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("nu_f_list = 3600, 5000\ntau_steps = 4\n")
    out = tmp_path / "s.csv"
    assert main(["--config", str(cfg), "--tau-steps", "2", "--out", str(out)]) == EXIT_OK
    assert len(read_csv(out)) == 4


def test_cli_config_errors(tmp_path, capsys):
    assert main(["--tau-steps", "0", "--out", str(tmp_path / "x.csv")]) == EXIT_CONFIG
    assert "tau_steps" in capsys.readouterr().err
    assert main(["--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        main(["--bogus", "1"])
    assert exc.value.code == EXIT_CONFIG


def test_cli_numerical_failure(tmp_path, monkeypatch, capsys):
    from qthermo import drive

    monkeypatch.setattr(drive, "MAX_DOUBLINGS", 1)
    code = main(["--tolerance", "1e-15", "--slices", "2", "--out", str(tmp_path / "x.csv")])
    assert code == EXIT_NUMERICAL
    assert "nu_f=3600" in capsys.readouterr().err


def test_cli_flags_invariant_violation(tmp_path, monkeypatch):
    import qthermo.cli as cli

    def broken(cfg):
        rec = ThermoRecord(0, 0, 0.1, 0.1, 0.05, 0.05, 1.0, 0.8, 1.0, 1.0)
        return [SweepRow(3600.0, 1e-4, rec)]

    monkeypatch.setattr(cli, "run_sweep", broken)
    assert main(["--out", str(tmp_path / "x.csv")]) == EXIT_NUMERICAL
