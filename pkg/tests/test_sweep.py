"""Tests for sweep configuration, execution, CSV output and the CLI."""

import json
import math

import numpy as np
import pytest

from filmqed import (
    ConfigError,
    DrudeFilmModel,
    EmtFilmModel,
    Orientation,
    RateSpectrumRow,
    VacuumFilmModel,
    parse_config,
    run_concurrence_map,
    run_rate_spectrum,
    run_special_wavelengths,
    write_map_csv,
    write_rates_csv,
    write_special_csv,
)
from filmqed.cli import main as cli_main
from filmqed.sweep import MAP_CSV_HEADER, RATES_CSV_HEADER, SPECIAL_CSV_HEADER


def make_config(**overrides):
    raw = {"film": {"kind": "vacuum"}}
    raw.update(overrides)
    return json.dumps(raw)


# --- config parsing -----------------------------------------------------------


def test_minimal_config_defaults():
    cfg = parse_config(make_config())
    assert isinstance(cfg.film_model, VacuumFilmModel)
    assert cfg.geometry.z1 == pytest.approx(10e-9)
    assert cfg.geometry.thickness == pytest.approx(20e-9)
    assert cfg.geometry.orientation is Orientation.X
    assert (cfg.lambda_min_nm, cfg.lambda_max_nm, cfg.lambda_count) == (300.0, 800.0, 100)
    assert (cfg.t_max_gamma0, cfg.t_count) == (10.0, 100)
    assert cfg.workers == 1
    assert cfg.quadrature.rel_tol == 1e-8
    assert cfg.quadrature.kappa_max is None
    assert (cfg.rates_csv, cfg.concurrence_csv) == ("rates.csv", "concurrence.csv")
    assert cfg.special_csv is None
    assert cfg.figures is True
    assert cfg.figures_dir is None
    assert len(cfg.lambdas_nm) == 100
    assert cfg.t_grid_gamma0[0] == 0.0


def test_film_scenario_config():
    cfg = parse_config(
        json.dumps(
            {
                "geometry": {"d_nm": 10, "orientation": "x"},
                "film": {"kind": "drude"},
                "sweep": {"lambda_min_nm": 260, "lambda_max_nm": 420},
            }
        )
    )
    assert isinstance(cfg.film_model, DrudeFilmModel)
    assert cfg.film_model.params.eps_inf == 3.7
    assert cfg.geometry.thickness == pytest.approx(10e-9)
    assert (cfg.lambda_min_nm, cfg.lambda_max_nm) == (260.0, 420.0)


@pytest.mark.parametrize(
    "raw,needle",
    [
        ({"film": {"kind": "vacuum"}, "flim": {}}, "flim"),
        ({"film": {"kind": "vacuum"}, "geometry": {"dd_nm": 1}}, "dd_nm"),
        ({"film": {"kind": "vacuum"}, "geometry": {"d_nm": -5}}, "d_nm"),
        ({"film": {"kind": "vacuum"}, "geometry": {"z1_nm": 0}}, "z1_nm"),
        ({"film": {"kind": "vacuum"}, "geometry": {"orientation": "y"}}, "orientation"),
        ({"film": {"kind": "mirror"}}, "film.kind"),
        ({"film": {"kind": "vacuum", "fill": 0.3}}, "fill"),
        ({"film": {"kind": "drude", "eps_dielectric": 4}}, "eps_dielectric"),
        ({"film": {"kind": "drude", "tau": 0}}, "tau"),
        ({"film": {"kind": "emt", "fill": 1.5}}, "fill"),
        ({"film": {"kind": "emt", "eps_dielectric": "glass"}}, "eps_dielectric"),
        ({"film": {"kind": "emt", "eps_dielectric": [4, -0.1]}}, "eps_dielectric"),
        ({"film": {"kind": "vacuum"}, "sweep": {"lambda_min_nm": 500, "lambda_max_nm": 400}}, "lambda"),
        ({"film": {"kind": "vacuum"}, "sweep": {"lambda_count": 0}}, "lambda_count"),
        ({"film": {"kind": "vacuum"}, "sweep": {"t_count": 1}}, "t_count"),
        ({"film": {"kind": "vacuum"}, "sweep": {"t_max_gamma0": 0}}, "t_max_gamma0"),
        ({"film": {"kind": "vacuum"}, "sweep": {"workers": 0}}, "workers"),
        ({"film": {"kind": "vacuum"}, "sweep": {"workers": 2.5}}, "workers"),
        ({"film": {"kind": "vacuum"}, "quadrature": {"rel_tol": 0}}, "quadrature"),
        ({"film": {"kind": "vacuum"}, "quadrature": {"panels": 3}}, "panels"),
        ({"film": {"kind": "vacuum"}, "output": {"figures": "yes"}}, "figures"),
        ({"film": {"kind": "vacuum"}, "output": {"rates_csv": ""}}, "rates_csv"),
    ],
)
def test_config_errors_name_the_problem(raw, needle):
    with pytest.raises(ConfigError, match=needle):
        parse_config(json.dumps(raw))


def test_config_structure_errors():
    with pytest.raises(ConfigError):
        parse_config("not json {")
    with pytest.raises(ConfigError):
        parse_config("[1, 2]")
    with pytest.raises(ConfigError, match="film"):
        parse_config("{}")
    with pytest.raises(ConfigError):
        parse_config(json.dumps({"film": "vacuum"}))


def test_emt_dielectric_forms():
    cfg = parse_config(json.dumps({"film": {"kind": "emt", "eps_dielectric": 4}}))
    assert isinstance(cfg.film_model, EmtFilmModel)
    assert cfg.film_model.eps_dielectric == 4.0 + 0j
    cfg = parse_config(json.dumps({"film": {"kind": "emt", "eps_dielectric": [4, 0.1]}}))
    assert cfg.film_model.eps_dielectric == 4.0 + 0.1j
    cfg = parse_config(json.dumps({"film": {"kind": "emt"}}))
    assert cfg.film_model.eps_dielectric is None
    assert cfg.film_model.fill == 0.35


# --- sweep execution -------------------------------------------------------------


def vacuum_config(**sweep):
    defaults = {"lambda_min_nm": 400, "lambda_max_nm": 600, "lambda_count": 5, "t_count": 4}
    defaults.update(sweep)
    return parse_config(json.dumps({"film": {"kind": "vacuum"}, "sweep": defaults}))


def test_vacuum_spectrum_unit_rate():
    # gamma_s identically 1 in free space, for every wavelength; this also
    # exercises the minimum-loss clamp on a lossless film without harm
    rows = run_rate_spectrum(vacuum_config())
    assert len(rows) == 5
    for row in rows:
        assert row.ok
        assert row.gamma_s == pytest.approx(1.0, abs=1e-6)


def test_silver_rate_peak_near_surface_plasmon():
    # thick film: the two faces decouple and the decay-rate resonance sits
    # near the single-interface surface-plasmon wavelength (~292 nm); the
    # near-field kappa weighting shifts the peak slightly to the red
    cfg = parse_config(
        json.dumps(
            {
                "geometry": {"d_nm": 60, "orientation": "x"},
                "film": {"kind": "drude"},
                "sweep": {"lambda_min_nm": 275, "lambda_max_nm": 315, "lambda_count": 41},
            }
        )
    )
    rows = run_rate_spectrum(cfg)
    assert all(r.ok for r in rows)
    peak_row = max(rows, key=lambda r: r.gamma_s)
    assert 288.0 <= peak_row.lambda_nm <= 300.0
    assert peak_row.gamma_s > 100.0
    assert peak_row.gamma_s > 5.0 * rows[0].gamma_s


def single_lambda_rows(d_nm, lam_nm, kind="drude"):
    cfg = parse_config(
        json.dumps(
            {
                "geometry": {"d_nm": d_nm, "orientation": "x"},
                "film": {"kind": kind},
                "sweep": {
                    "lambda_min_nm": lam_nm,
                    "lambda_max_nm": lam_nm + 1,
                    "lambda_count": 1,
                },
            }
        )
    )
    return run_rate_spectrum(cfg)


def test_thicker_film_weakens_coupling():
    thin = single_lambda_rows(10, 340.0)[0]
    thick = single_lambda_rows(60, 340.0)[0]
    assert thin.ok and thick.ok
    assert abs(thick.gamma_c) < abs(thin.gamma_c)


def test_concurrence_map_grid():
    cmap = run_concurrence_map(vacuum_config())
    assert cmap.concurrence.shape == (5, 4)
    assert np.all(cmap.concurrence[:, 0] == 0.0)
    assert np.all(np.isfinite(cmap.concurrence))
    assert np.all((cmap.concurrence >= 0.0) & (cmap.concurrence <= 1.0))
    assert len(cmap.rate_rows) == 5


def test_special_wavelength_rows():
    drude_cfg = parse_config(json.dumps({"film": {"kind": "drude"}}))
    rows = run_special_wavelengths(drude_cfg)
    by_kind = {r.condition: r.lambda_nm for r in rows}
    assert by_kind["sp"] == pytest.approx(291.862809, abs=1e-3)
    assert by_kind["enz_perp"] == pytest.approx(258.926155, abs=1e-3)
    emt_cfg = parse_config(json.dumps({"film": {"kind": "emt"}}))
    rows = run_special_wavelengths(emt_cfg)
    by_kind = {r.condition: r.lambda_nm for r in rows}
    assert by_kind["enz_perp"] == pytest.approx(551.156407, abs=1e-3)
    assert by_kind["enp_par"] == pytest.approx(395.316736, abs=1e-3)
    assert run_special_wavelengths(vacuum_config()) == []


# --- CSV output -----------------------------------------------------------------


def test_rates_csv_format(tmp_path):
    rows = [
        RateSpectrumRow(300.0, 1.0, 0.5, -0.25, 0.3125),
        RateSpectrumRow(
            310.0, float("nan"), float("nan"), float("nan"), float("nan"), ok=False, error="x"
        ),
    ]
    path = tmp_path / "rates.csv"
    write_rates_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == RATES_CSV_HEADER
    assert lines[1] == "300,1,0.5,-0.25,0.3125"
    assert lines[2] == "310,nan,nan,nan,nan"
    assert len(lines) == 3
    write_rates_csv([], path)
    assert path.read_text() == RATES_CSV_HEADER + "\n"


def test_map_csv_lambda_major(tmp_path):
    cfg = parse_config(
        json.dumps(
            {
                "film": {"kind": "vacuum"},
                "sweep": {
                    "lambda_min_nm": 400,
                    "lambda_max_nm": 500,
                    "lambda_count": 2,
                    "t_max_gamma0": 1.0,
                    "t_count": 3,
                },
            }
        )
    )
    cmap = run_concurrence_map(cfg)
    path = tmp_path / "map.csv"
    write_map_csv(cmap, path)
    lines = path.read_text().splitlines()
    assert lines[0] == MAP_CSV_HEADER
    assert len(lines) == 1 + 2 * 3
    lams = [line.split(",")[0] for line in lines[1:]]
    assert lams == ["400", "400", "400", "500", "500", "500"]
    times = [line.split(",")[1] for line in lines[1:4]]
    assert times == ["0", "0.5", "1"]


def test_special_csv(tmp_path):
    cfg = parse_config(json.dumps({"film": {"kind": "drude"}}))
    rows = run_special_wavelengths(cfg)
    path = tmp_path / "special.csv"
    write_special_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == SPECIAL_CSV_HEADER
    assert lines[1].startswith("sp,291.8628")
    assert lines[2].startswith("enz_perp,258.9261")


def test_nine_significant_digits(tmp_path):
    rows = [RateSpectrumRow(123.456789123, 1.23456789123, 0.0, 0.0, 0.0)]
    path = tmp_path / "rates.csv"
    write_rates_csv(rows, path)
    line = path.read_text().splitlines()[1]
    assert line.split(",")[0] == "123.456789"
    assert line.split(",")[1] == "1.23456789"


# --- determinism and parallelism ---------------------------------------------------


def drude_sweep_config(workers):
    return parse_config(
        json.dumps(
            {
                "geometry": {"d_nm": 20, "orientation": "x"},
                "film": {"kind": "drude"},
                "sweep": {
                    "lambda_min_nm": 300,
                    "lambda_max_nm": 500,
                    "lambda_count": 8,
                    "t_max_gamma0": 5.0,
                    "t_count": 5,
                    "workers": workers,
                },
            }
        )
    )


def test_two_runs_identical_bytes(tmp_path):
    paths = []
    for tag in ("a", "b"):
        cmap = run_concurrence_map(drude_sweep_config(workers=1))
        p_rates = tmp_path / f"rates_{tag}.csv"
        p_map = tmp_path / f"map_{tag}.csv"
        write_rates_csv(cmap.rate_rows, p_rates)
        write_map_csv(cmap, p_map)
        paths.append((p_rates.read_bytes(), p_map.read_bytes()))
    assert paths[0] == paths[1]


def test_parallel_serial_bitwise_equality(tmp_path):
    outputs = {}
    for workers in (1, 2):
        cmap = run_concurrence_map(drude_sweep_config(workers=workers))
        p_rates = tmp_path / f"rates_w{workers}.csv"
        p_map = tmp_path / f"map_w{workers}.csv"
        write_rates_csv(cmap.rate_rows, p_rates)
        write_map_csv(cmap, p_map)
        outputs[workers] = (p_rates.read_bytes(), p_map.read_bytes())
    assert outputs[1] == outputs[2]


# --- CLI ---------------------------------------------------------------------------


def write_config(tmp_path, raw):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    return path


def cli_raw_config(tmp_path, **extra):
    raw = {
        "film": {"kind": "vacuum"},
        "sweep": {
            "lambda_min_nm": 400,
            "lambda_max_nm": 600,
            "lambda_count": 3,
            "t_max_gamma0": 2.0,
            "t_count": 4,
        },
        "output": {
            "rates_csv": str(tmp_path / "rates.csv"),
            "concurrence_csv": str(tmp_path / "concurrence.csv"),
        },
    }
    for key, value in extra.items():
        raw.setdefault(key, {}).update(value) if isinstance(value, dict) else raw.update(
            {key: value}
        )
    return raw


def test_cli_missing_config_file(tmp_path, capsys):
    rc = cli_main(["rates", "--config", str(tmp_path / "absent.json")])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_cli_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    assert cli_main(["rates", "--config", str(path)]) == 2
    path.write_text(json.dumps({"film": {"kind": "vacuum"}, "flim": {}}))
    assert cli_main(["rates", "--config", str(path)]) == 2
    assert "flim" in capsys.readouterr().err


def test_cli_rates_writes_csv_and_figure(tmp_path):
    cfg = write_config(tmp_path, cli_raw_config(tmp_path))
    assert cli_main(["rates", "--config", str(cfg)]) == 0
    csv = (tmp_path / "rates.csv").read_text().splitlines()
    assert csv[0] == RATES_CSV_HEADER
    assert len(csv) == 4
    figure = tmp_path / "rates.png"
    assert figure.exists() and figure.stat().st_size > 0


def test_cli_figures_disabled(tmp_path):
    raw = cli_raw_config(tmp_path)
    raw["output"]["figures"] = False
    cfg = write_config(tmp_path, raw)
    assert cli_main(["rates", "--config", str(cfg)]) == 0
    assert (tmp_path / "rates.csv").exists()
    assert not (tmp_path / "rates.png").exists()


def test_cli_figures_dir(tmp_path):
    raw = cli_raw_config(tmp_path)
    raw["output"]["figures_dir"] = str(tmp_path / "figs")
    cfg = write_config(tmp_path, raw)
    assert cli_main(["concurrence", "--config", str(cfg)]) == 0
    assert (tmp_path / "concurrence.csv").exists()
    assert (tmp_path / "figs" / "concurrence.png").exists()


def test_cli_concurrence_map(tmp_path):
    cfg = write_config(tmp_path, cli_raw_config(tmp_path))
    assert cli_main(["concurrence", "--config", str(cfg)]) == 0
    lines = (tmp_path / "concurrence.csv").read_text().splitlines()
    assert lines[0] == MAP_CSV_HEADER
    assert len(lines) == 1 + 3 * 4


def test_cli_special_wavelengths(tmp_path, capsys):
    raw = {
        "film": {"kind": "drude"},
        "output": {"special_csv": str(tmp_path / "special.csv")},
    }
    cfg = write_config(tmp_path, raw)
    assert cli_main(["special-wavelengths", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "sp,291.862809" in out
    assert "enz_perp,258.926155" in out
    assert (tmp_path / "special.csv").exists()


def test_cli_special_wavelengths_vacuum(tmp_path, capsys):
    cfg = write_config(tmp_path, {"film": {"kind": "vacuum"}})
    assert cli_main(["special-wavelengths", "--config", str(cfg)]) == 0
    assert "no special wavelengths" in capsys.readouterr().err


def test_cli_whole_sweep_failure_is_exit_3(tmp_path, capsys):
    # one allowed subdivision cannot resolve the surface-plasmon ridge at
    # any of these wavelengths, so every row fails and nothing is written
    raw = {
        "geometry": {"d_nm": 10},
        "film": {"kind": "drude"},
        "sweep": {"lambda_min_nm": 285, "lambda_max_nm": 295, "lambda_count": 3},
        "quadrature": {"rel_tol": 1e-13, "max_subdivisions": 1},
        "output": {"rates_csv": str(tmp_path / "rates.csv")},
    }
    cfg = write_config(tmp_path, raw)
    assert cli_main(["rates", "--config", str(cfg)]) == 3
    assert not (tmp_path / "rates.csv").exists()
    err = capsys.readouterr().err
    assert "every wavelength" in err
