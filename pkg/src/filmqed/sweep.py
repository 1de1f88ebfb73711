"""Wavelength sweeps: config parsing, rate spectra, concurrence maps, CSV output.

The config is a single JSON object with five optional-except-film sections
(``geometry``, ``film``, ``sweep``, ``quadrature``, ``output``); unknown
keys anywhere are rejected by name so typos cannot silently fall back to a
default.  Sweeps parallelize over wavelength with processes; every
wavelength is computed independently and aggregated in input order, so
serial and parallel runs produce bitwise-identical tables.  A wavelength
whose quadrature or rate extraction fails yields a NaN row and a warning
rather than killing the sweep.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dispersion import (
    DispersionError,
    DrudeFilmModel,
    DrudeParams,
    EmtFilmModel,
    SpecialWavelength,
    UniaxialMedium,
    VacuumFilmModel,
    find_special_wavelength,
)
from .dynamics import RateTriple, concurrence_curve, rates_from_greens, transmission_proxy
from .greens import Geometry, Orientation, QuadratureError, QuadratureSpec, g_cross, g_single


class ConfigError(ValueError):
    """Raised for malformed or inconsistent sweep configurations."""


#: Smallest Im(eps) admitted into a sweep; keeps user-supplied lossless
#: media off the real-axis guided-mode poles of the film coefficients.
_MIN_LOSS = 1e-9


@dataclass(frozen=True)
class SweepConfig:
    geometry: Geometry
    film_model: VacuumFilmModel | DrudeFilmModel | EmtFilmModel
    lambda_min_nm: float
    lambda_max_nm: float
    lambda_count: int
    t_max_gamma0: float
    t_count: int
    workers: int
    quadrature: QuadratureSpec
    rates_csv: str
    concurrence_csv: str
    special_csv: str | None
    figures: bool
    figures_dir: str | None

    @property
    def lambdas_nm(self) -> np.ndarray:
        return np.linspace(self.lambda_min_nm, self.lambda_max_nm, self.lambda_count)

    @property
    def t_grid_gamma0(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max_gamma0, self.t_count)


@dataclass(frozen=True)
class RateSpectrumRow:
    """One wavelength of a rate sweep; NaN-filled when ``ok`` is False."""

    lambda_nm: float
    gamma_s: float
    gamma_c: float
    omega_c: float
    transmission_proxy: float
    ok: bool = True
    error: str = ""


@dataclass(frozen=True)
class SpecialWavelengthRow:
    condition: str
    lambda_nm: float
    ok: bool = True
    error: str = ""


@dataclass(frozen=True)
class ConcurrenceMap:
    """Concurrence over a (wavelength, time) grid, wavelength-major."""

    lambdas_nm: np.ndarray
    t_gamma0: np.ndarray
    concurrence: np.ndarray  # shape (len(lambdas_nm), len(t_gamma0))
    rate_rows: list[RateSpectrumRow]


def _check_keys(section: str, mapping: dict, allowed: set[str]) -> None:
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in section '{section}'")


def _number(section: str, mapping: dict, key: str, default):
    value = mapping.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{section}.{key}' must be a number, got {value!r}")
    return float(value)


def _integer(section: str, mapping: dict, key: str, default):
    value = mapping.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{section}.{key}' must be an integer, got {value!r}")
    return value


def _parse_film(film: dict):
    _check_keys("film", film, {"kind", "eps_inf", "omega_p", "tau", "fill", "eps_dielectric"})
    kind = film.get("kind")
    if kind not in ("vacuum", "drude", "emt"):
        raise ConfigError(f"'film.kind' must be one of vacuum/drude/emt, got {kind!r}")
    if kind == "vacuum":
        for key in ("eps_inf", "omega_p", "tau", "fill", "eps_dielectric"):
            if key in film:
                raise ConfigError(f"'film.{key}' is meaningless for film.kind 'vacuum'")
        return VacuumFilmModel()
    try:
        params = DrudeParams(
            eps_inf=_number("film", film, "eps_inf", 3.7),
            omega_p=_number("film", film, "omega_p", 1.4e16),
            tau=_number("film", film, "tau", 0.45e-14),
        )
    except DispersionError as exc:
        raise ConfigError(f"'film': {exc}") from exc
    if kind == "drude":
        for key in ("fill", "eps_dielectric"):
            if key in film:
                raise ConfigError(f"'film.{key}' is meaningless for film.kind 'drude'")
        return DrudeFilmModel(params=params)
    fill = _number("film", film, "fill", 0.35)
    if not 0.0 <= fill <= 1.0:
        raise ConfigError(f"'film.fill' must lie in [0, 1], got {fill}")
    eps_d = film.get("eps_dielectric")
    if eps_d is not None:
        if isinstance(eps_d, (int, float)) and not isinstance(eps_d, bool):
            eps_d = complex(float(eps_d))
        elif (
            isinstance(eps_d, list)
            and len(eps_d) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in eps_d)
        ):
            eps_d = complex(float(eps_d[0]), float(eps_d[1]))
        else:
            raise ConfigError(
                f"'film.eps_dielectric' must be a number or [re, im] pair, got {eps_d!r}"
            )
        if eps_d.imag < 0.0:
            raise ConfigError(f"'film.eps_dielectric' must have Im >= 0, got {eps_d}")
    return EmtFilmModel(fill=fill, params=params, eps_dielectric=eps_d)


def parse_config(text: str) -> SweepConfig:
    """Parse and validate a JSON sweep configuration."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    _check_keys("<top level>", raw, {"geometry", "film", "sweep", "quadrature", "output"})
    for name in ("geometry", "film", "sweep", "quadrature", "output"):
        if name in raw and not isinstance(raw[name], dict):
            raise ConfigError(f"section '{name}' must be a JSON object")
    if "film" not in raw:
        raise ConfigError("missing required section 'film'")

    geometry = raw.get("geometry", {})
    _check_keys("geometry", geometry, {"z1_nm", "d_nm", "orientation"})
    z1_nm = _number("geometry", geometry, "z1_nm", 10.0)
    d_nm = _number("geometry", geometry, "d_nm", 20.0)
    if z1_nm <= 0.0:
        raise ConfigError(f"'geometry.z1_nm' must be positive, got {z1_nm}")
    if d_nm < 0.0:
        raise ConfigError(f"'geometry.d_nm' must be >= 0, got {d_nm}")
    orientation_raw = geometry.get("orientation", "x")
    if not isinstance(orientation_raw, str) or orientation_raw.lower() not in ("x", "z"):
        raise ConfigError(f"'geometry.orientation' must be 'x' or 'z', got {orientation_raw!r}")
    orientation = Orientation(orientation_raw.lower())

    film_model = _parse_film(raw["film"])

    sweep = raw.get("sweep", {})
    _check_keys(
        "sweep",
        sweep,
        {"lambda_min_nm", "lambda_max_nm", "lambda_count", "t_max_gamma0", "t_count", "workers"},
    )
    lambda_min = _number("sweep", sweep, "lambda_min_nm", 300.0)
    lambda_max = _number("sweep", sweep, "lambda_max_nm", 800.0)
    lambda_count = _integer("sweep", sweep, "lambda_count", 100)
    t_max = _number("sweep", sweep, "t_max_gamma0", 10.0)
    t_count = _integer("sweep", sweep, "t_count", 100)
    workers = _integer("sweep", sweep, "workers", 1)
    if lambda_min <= 0.0 or lambda_max <= lambda_min:
        raise ConfigError(
            f"'sweep' needs 0 < lambda_min_nm < lambda_max_nm, got {lambda_min}, {lambda_max}"
        )
    if lambda_count < 1:
        raise ConfigError(f"'sweep.lambda_count' must be >= 1, got {lambda_count}")
    if t_max <= 0.0:
        raise ConfigError(f"'sweep.t_max_gamma0' must be positive, got {t_max}")
    if t_count < 2:
        raise ConfigError(f"'sweep.t_count' must be >= 2, got {t_count}")
    if workers < 1:
        raise ConfigError(f"'sweep.workers' must be >= 1, got {workers}")

    quad = raw.get("quadrature", {})
    _check_keys("quadrature", quad, {"rel_tol", "abs_tol", "kappa_max", "max_subdivisions"})
    try:
        quadrature = QuadratureSpec(
            rel_tol=_number("quadrature", quad, "rel_tol", 1e-8),
            abs_tol=(
                _number("quadrature", quad, "abs_tol", None) if "abs_tol" in quad else None
            ),
            kappa_max=(
                _number("quadrature", quad, "kappa_max", None) if "kappa_max" in quad else None
            ),
            max_subdivisions=_integer("quadrature", quad, "max_subdivisions", 400),
        )
    except ValueError as exc:
        raise ConfigError(f"'quadrature': {exc}") from exc

    output = raw.get("output", {})
    _check_keys(
        "output", output, {"rates_csv", "concurrence_csv", "special_csv", "figures", "figures_dir"}
    )
    rates_csv = output.get("rates_csv", "rates.csv")
    concurrence_csv = output.get("concurrence_csv", "concurrence.csv")
    special_csv = output.get("special_csv")
    figures = output.get("figures", True)
    figures_dir = output.get("figures_dir")
    for key, value in (("rates_csv", rates_csv), ("concurrence_csv", concurrence_csv)):
        if not isinstance(value, str) or not value:
            raise ConfigError(f"'output.{key}' must be a non-empty string, got {value!r}")
    if special_csv is not None and (not isinstance(special_csv, str) or not special_csv):
        raise ConfigError(f"'output.special_csv' must be a non-empty string, got {special_csv!r}")
    if not isinstance(figures, bool):
        raise ConfigError(f"'output.figures' must be a boolean, got {figures!r}")
    if figures_dir is not None and (not isinstance(figures_dir, str) or not figures_dir):
        raise ConfigError(f"'output.figures_dir' must be a non-empty string, got {figures_dir!r}")

    return SweepConfig(
        geometry=Geometry(z1=z1_nm * 1e-9, thickness=d_nm * 1e-9, orientation=orientation),
        film_model=film_model,
        lambda_min_nm=lambda_min,
        lambda_max_nm=lambda_max,
        lambda_count=lambda_count,
        t_max_gamma0=t_max,
        t_count=t_count,
        workers=workers,
        quadrature=quadrature,
        rates_csv=rates_csv,
        concurrence_csv=concurrence_csv,
        special_csv=special_csv,
        figures=figures,
        figures_dir=figures_dir,
    )


def _with_min_loss(medium: UniaxialMedium) -> UniaxialMedium:
    def clamp(eps: complex) -> complex:
        return complex(eps.real, max(eps.imag, _MIN_LOSS))

    return UniaxialMedium(eps_perp=clamp(medium.eps_perp), eps_par=clamp(medium.eps_par))


def _rates_at(task) -> RateSpectrumRow:
    """Rates at one wavelength; module-level so process pools can pickle it."""
    config, lambda_nm = task
    k0 = 2.0 * math.pi / (lambda_nm * 1e-9)
    try:
        medium = _with_min_loss(config.film_model.medium(lambda_nm * 1e-9))
        single = g_single(config.geometry, medium, k0, config.quadrature)
        cross = g_cross(config.geometry, medium, k0, config.quadrature)
        rates = rates_from_greens(single, cross)
    except (ValueError, QuadratureError) as exc:
        nan = float("nan")
        return RateSpectrumRow(lambda_nm, nan, nan, nan, nan, ok=False, error=str(exc))
    return RateSpectrumRow(
        lambda_nm,
        rates.gamma_s,
        rates.gamma_c,
        rates.omega_c,
        transmission_proxy(rates),
        ok=True,
    )


def run_rate_spectrum(config: SweepConfig) -> list[RateSpectrumRow]:
    """Emission rates over the configured wavelength grid (parallel over lambda)."""
    tasks = [(config, float(lam)) for lam in config.lambdas_nm]
    if config.workers > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (4 * config.workers))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_rates_at, tasks, chunksize=chunk))
    else:
        rows = [_rates_at(t) for t in tasks]
    return rows


def run_concurrence_map(config: SweepConfig) -> ConcurrenceMap:
    """Closed-form concurrence on the (lambda, t) grid, from the swept rates."""
    rows = run_rate_spectrum(config)
    t_grid = config.t_grid_gamma0
    values = np.full((len(rows), len(t_grid)), np.nan)
    for i, row in enumerate(rows):
        if not row.ok:
            continue
        rates = RateTriple(gamma_s=row.gamma_s, gamma_c=row.gamma_c, omega_c=row.omega_c)
        values[i, :] = concurrence_curve(rates, t_grid)
    return ConcurrenceMap(
        lambdas_nm=config.lambdas_nm,
        t_gamma0=t_grid,
        concurrence=values,
        rate_rows=rows,
    )


_SPECIAL_BRACKETS_NM = {
    "drude": (150.0, 2000.0),
    # the TiO2 fit has a pole near 283 nm; start the EMT bracket above it
    "emt": (300.0, 2000.0),
}


def run_special_wavelengths(config: SweepConfig) -> list[SpecialWavelengthRow]:
    """Locate the special wavelengths appropriate to the configured film."""
    model = config.film_model
    if isinstance(model, DrudeFilmModel):
        kinds = (SpecialWavelength.SURFACE_PLASMON, SpecialWavelength.ENZ_PERP)
        bracket = _SPECIAL_BRACKETS_NM["drude"]
    elif isinstance(model, EmtFilmModel):
        kinds = (SpecialWavelength.ENZ_PERP, SpecialWavelength.ENP_PAR)
        bracket = _SPECIAL_BRACKETS_NM["emt"]
    else:
        return []
    rows = []
    for kind in kinds:
        try:
            lam = find_special_wavelength(model, kind, bracket)
            rows.append(SpecialWavelengthRow(condition=kind.value, lambda_nm=lam))
        except DispersionError as exc:
            rows.append(
                SpecialWavelengthRow(
                    condition=kind.value, lambda_nm=float("nan"), ok=False, error=str(exc)
                )
            )
    return rows


def _fmt(x: float) -> str:
    return format(x, ".9g")


RATES_CSV_HEADER = "lambda_nm,gamma_s,gamma_c,omega_c,transmission_proxy"
MAP_CSV_HEADER = "lambda_nm,t_gamma0,concurrence"
SPECIAL_CSV_HEADER = "condition,lambda_nm"


def write_rates_csv(rows: list[RateSpectrumRow], path) -> None:
    lines = [RATES_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (r.lambda_nm, r.gamma_s, r.gamma_c, r.omega_c, r.transmission_proxy)
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_map_csv(cmap: ConcurrenceMap, path) -> None:
    """Wavelength-major long-format table of the concurrence map."""
    lines = [MAP_CSV_HEADER]
    for i, lam in enumerate(cmap.lambdas_nm):
        for j, t in enumerate(cmap.t_gamma0):
            lines.append(f"{_fmt(float(lam))},{_fmt(float(t))},{_fmt(float(cmap.concurrence[i, j]))}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_special_csv(rows: list[SpecialWavelengthRow], path) -> None:
    lines = [SPECIAL_CSV_HEADER]
    for r in rows:
        lines.append(f"{r.condition},{_fmt(r.lambda_nm)}")
    Path(path).write_text("\n".join(lines) + "\n")
