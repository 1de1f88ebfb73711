"""Command-line interface.

    simulate rates --config config.json
    simulate concurrence --config config.json
    simulate special-wavelengths --config config.json

Exit codes: 0 on success, 2 for configuration problems (unreadable file,
bad JSON, unknown or invalid keys), 3 when a sweep fails numerically at
every wavelength.  Individual failed wavelengths only warn on stderr and
leave NaN rows in the output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import plotting
from .sweep import (
    ConfigError,
    SweepConfig,
    parse_config,
    run_concurrence_map,
    run_rate_spectrum,
    run_special_wavelengths,
    write_map_csv,
    write_rates_csv,
    write_special_csv,
)


def _figure_path(csv_path: str, figures_dir: str | None) -> Path:
    csv = Path(csv_path)
    target = csv.with_suffix(".png")
    if figures_dir is not None:
        directory = Path(figures_dir)
        directory.mkdir(parents=True, exist_ok=True)
        target = directory / target.name
    return target


def _warn_failures(rows) -> int:
    failed = [r for r in rows if not r.ok]
    for r in failed:
        print(f"warning: lambda = {r.lambda_nm:.6g} nm failed: {r.error}", file=sys.stderr)
    return len(failed)


def _cmd_rates(config: SweepConfig) -> int:
    rows = run_rate_spectrum(config)
    n_failed = _warn_failures(rows)
    if n_failed == len(rows):
        print("error: every wavelength in the sweep failed", file=sys.stderr)
        return 3
    write_rates_csv(rows, config.rates_csv)
    print(f"wrote {config.rates_csv} ({len(rows)} wavelengths, {n_failed} failed)")
    if config.figures:
        fig = _figure_path(config.rates_csv, config.figures_dir)
        plotting.save_rate_spectrum_figure(rows, fig)
        print(f"wrote {fig}")
    return 0


def _cmd_concurrence(config: SweepConfig) -> int:
    cmap = run_concurrence_map(config)
    n_failed = _warn_failures(cmap.rate_rows)
    if n_failed == len(cmap.rate_rows):
        print("error: every wavelength in the sweep failed", file=sys.stderr)
        return 3
    write_map_csv(cmap, config.concurrence_csv)
    print(
        f"wrote {config.concurrence_csv} "
        f"({len(cmap.lambdas_nm)} wavelengths x {len(cmap.t_gamma0)} times, {n_failed} failed)"
    )
    if config.figures:
        fig = _figure_path(config.concurrence_csv, config.figures_dir)
        plotting.save_concurrence_map_figure(cmap, fig)
        print(f"wrote {fig}")
    return 0


def _cmd_special(config: SweepConfig) -> int:
    rows = run_special_wavelengths(config)
    if not rows:
        print("no special wavelengths defined for this film kind", file=sys.stderr)
        return 0
    n_failed = _warn_failures_special(rows)
    if n_failed == len(rows):
        print("error: no special-wavelength condition could be bracketed", file=sys.stderr)
        return 3
    for r in rows:
        print(f"{r.condition},{r.lambda_nm:.9g}")
    if config.special_csv is not None:
        write_special_csv(rows, config.special_csv)
        print(f"wrote {config.special_csv}")
    return 0


def _warn_failures_special(rows) -> int:
    failed = [r for r in rows if not r.ok]
    for r in failed:
        print(f"warning: condition {r.condition} failed: {r.error}", file=sys.stderr)
    return len(failed)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Collective emission and concurrence of two emitters across a thin film.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("rates", "sweep emission rates over wavelength, write CSV (and figure)"),
        ("concurrence", "compute the concurrence (wavelength, time) map, write CSV (and figure)"),
        ("special-wavelengths", "locate SP / ENZ / ENP wavelengths of the configured film"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the JSON sweep config")
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        config = parse_config(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.command == "rates":
        return _cmd_rates(config)
    if args.command == "concurrence":
        return _cmd_concurrence(config)
    return _cmd_special(config)


if __name__ == "__main__":
    sys.exit(main())
