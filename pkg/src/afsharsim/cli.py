"""Command-line front end.

Commands: ``simulate`` (bench scenarios), ``duality`` (V/K models and the
binned-visibility ladder), ``remnant`` (screen model with vibrational
post-selection), ``report`` (aggregate prior CSV outputs).  All outputs
are CSV plus plain text; identical inputs produce byte-identical files.

Exit codes: 0 success, 2 usage/configuration error, 3 band-limit guard
violation (the message names the failing stage).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import apparatus, duality, remnant
from .config import ConfigError, load_config
from .report import ReportError, build_report, render_report
from .wavefield import Grid, apply_mask, make_plane_wave, propagate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARD = 3

_SCENARIO_ORDER = [
    ("both", "in"),
    ("both", "out"),
    ("upper", "in"),
    ("upper", "out"),
    ("lower", "in"),
    ("lower", "out"),
]

POWERS_HEADER = (
    "scenario,grid,power_incident,power_after_grid,power_at_detectors,"
    "power_window_U,power_window_L"
)


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_lines(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n")


def _parse_complex_pair(text: str, flag: str) -> tuple[complex, complex]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"{flag} expects two comma-separated values, got {text!r}")
    try:
        return complex(parts[0]), complex(parts[1])
    except ValueError as exc:
        raise ConfigError(f"{flag}: cannot parse {text!r} as complex numbers") from exc


# ---------------------------------------------------------------- simulate


def _upsert_powers(path: Path, row: dict[str, str]) -> None:
    rows: dict[tuple[str, str], str] = {}
    if path.is_file():
        lines = path.read_text().splitlines()
        for line in lines[1:]:
            if line:
                parts = line.split(",")
                rows[(parts[0], parts[1])] = line
    line = ",".join(
        [
            row["scenario"],
            row["grid"],
            row["power_incident"],
            row["power_after_grid"],
            row["power_at_detectors"],
            row["power_window_U"],
            row["power_window_L"],
        ]
    )
    rows[(row["scenario"], row["grid"])] = line
    ordered = [rows[key] for key in _SCENARIO_ORDER if key in rows]
    _write_lines(path, [POWERS_HEADER] + ordered)


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    geometry = cfg.geometry()
    grid = cfg.grid()
    scenario = apparatus.Scenario(
        slits=apparatus.Slits(args.scenario), grid=apparatus.GridState(args.grid)
    )
    record = apparatus.run_scenario(geometry, scenario, grid)

    out = Path(args.out or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    x = grid.coordinates
    _write_lines(
        out / "sigma1.csv",
        ["x_m,intensity"]
        + [f"{_fmt(xi)},{_fmt(ii)}" for xi, ii in zip(x, record.intensity_sigma1)],
    )
    _write_lines(
        out / "sigma2.csv",
        ["x_m,intensity"]
        + [f"{_fmt(xi)},{_fmt(ii)}" for xi, ii in zip(x, record.intensity_sigma2)],
    )
    _upsert_powers(
        out / "powers.csv",
        {
            "scenario": scenario.slits.value,
            "grid": scenario.grid.value,
            "power_incident": _fmt(record.power_incident),
            "power_after_grid": _fmt(record.power_after_grid),
            "power_at_detectors": _fmt(record.power_at_detectors),
            "power_window_U": _fmt(record.power_window_U),
            "power_window_L": _fmt(record.power_window_L),
        },
    )
    (u_lo, u_hi), (l_lo, l_hi) = apparatus.image_windows(geometry)
    _write_lines(
        out / "derived.csv",
        [
            "key,value",
            f"fill_factor,{_fmt(apparatus.fill_factor(geometry))}",
            f"fringe_spacing_m,{_fmt(geometry.fringe_spacing)}",
            f"magnification,{_fmt(geometry.magnification)}",
            f"window_U_lo_m,{_fmt(u_lo)}",
            f"window_U_hi_m,{_fmt(u_hi)}",
            f"window_L_lo_m,{_fmt(l_lo)}",
            f"window_L_hi_m,{_fmt(l_hi)}",
        ],
    )
    print(
        f"simulate {scenario.slits.value}/{scenario.grid.value}: "
        f"P_sigma1={_fmt(record.power_incident)} "
        f"P_after_grid={_fmt(record.power_after_grid)} "
        f"P_detectors={_fmt(record.power_at_detectors)} "
        f"P_U={_fmt(record.power_window_U)} P_L={_fmt(record.power_window_L)}"
    )
    return EXIT_OK


# ----------------------------------------------------------------- duality


def _ladder_widths(period_samples: int, count: int) -> list[int]:
    """Bin widths in samples: divisors of the period, log-spread, incl. 1 and period."""
    divisors = [j for j in range(1, period_samples + 1) if period_samples % j == 0]
    if count >= len(divisors):
        return divisors
    picks = np.unique(
        np.round(np.geomspace(1, len(divisors), count)).astype(int) - 1
    )
    return [divisors[i] for i in picks]


def cmd_duality(args: argparse.Namespace) -> int:
    rows: list[str] = ["model,a_or_V_source,V,K,V2K2"]

    if args.probe:
        a, b = _parse_complex_pair(args.probe, "--probe")
        try:
            probe = duality.ProbeAmplitudes(a, b)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        pair = duality.vk_from_probe(probe)
        rows.append(
            f"probe,a={a!r};b={b!r},{_fmt(pair.V)},{_fmt(pair.K)},"
            f"{_fmt(duality.duality_check(pair))}"
        )
        if abs(a.imag) < 1e-12 and abs(b.imag) < 1e-12:
            model = duality.probe_detector_model(probe)
            dpair = duality.vk_from_detector(model)
            rows.append(
                f"detector,rotations-for-a={a!r};b={b!r},{_fmt(dpair.V)},"
                f"{_fmt(dpair.K)},{_fmt(duality.duality_check(dpair))}"
            )

    if args.random_detectors:
        rng = np.random.default_rng(args.seed)
        for i in range(args.random_detectors):
            pair = duality.vk_from_detector(duality.random_detector_model(rng))
            rows.append(
                f"detector,random[{i}],{_fmt(pair.V)},{_fmt(pair.K)},"
                f"{_fmt(duality.duality_check(pair))}"
            )

    # visibility ladder: external pattern if given, else the canonical cosine
    if args.pattern:
        path = Path(args.pattern)
        if not path.is_file():
            raise ConfigError(f"pattern file not found: {path}")
        lines = path.read_text().splitlines()
        try:
            data = np.array([[float(v) for v in line.split(",")] for line in lines[1:] if line])
            xs, pattern = data[:, 0], data[:, 1]
            spacing = float(xs[1] - xs[0])
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"cannot parse pattern CSV {path}") from exc
        try:
            grid = Grid(n_samples=len(xs), spacing=spacing, center=float(xs[len(xs) // 2]))
        except ValueError as exc:
            raise ConfigError(f"pattern CSV is not a uniform power-of-two grid: {exc}") from exc
        period_samples = args.period_samples
        region = (float(xs[0]), float(xs[0]) + (len(xs) - 1) * spacing)
        source = path.name
    else:
        grid = Grid(n_samples=1024, spacing=5e-6)
        period_samples = 64
        xs = grid.coordinates
        pattern = 1.0 + np.cos(2.0 * np.pi * xs / (period_samples * grid.spacing))
        region = (float(xs[0]), float(xs[0]) + 512 * grid.spacing)
        source = "cosine"

    ladder_lines = ["bin_width_m,V"]
    for j in _ladder_widths(period_samples, args.bin_ladder):
        bw = j * grid.spacing
        v = duality.visibility_from_pattern(pattern, grid, bw, region)
        ladder_lines.append(f"{_fmt(bw)},{_fmt(v)}")
    fine_v = duality.visibility_from_pattern(pattern, grid, grid.spacing, region)
    rows.append(f"pattern,{source},{_fmt(fine_v)},{_fmt(np.sqrt(max(0.0, 1 - fine_v**2)))},1.0")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_lines(out / "vk.csv", rows)
    _write_lines(out / "visibility_bins.csv", ladder_lines)
    worst = 0.0
    for line in rows[1:]:
        parts = line.split(",")
        if parts[0] in ("probe", "detector"):
            worst = max(worst, abs(float(parts[-1]) - 1.0))
    print(
        f"duality: {len(rows) - 1} model rows, max |V^2+K^2-1| = {_fmt(worst)}; "
        f"ladder of {len(ladder_lines) - 1} widths on '{source}' pattern"
    )
    return EXIT_OK


# ----------------------------------------------------------------- remnant


def cmd_remnant(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    geometry = cfg.geometry()
    grid = cfg.grid()
    wave = make_plane_wave(grid, geometry.wavelength)
    phi_u = propagate(
        apply_mask(wave, apparatus.slit_mask(geometry, grid, apparatus.Slits.UPPER_ONLY)),
        geometry.z_slits_to_grid,
    )
    phi_l = propagate(
        apply_mask(wave, apparatus.slit_mask(geometry, grid, apparatus.Slits.LOWER_ONLY)),
        geometry.z_slits_to_grid,
    )
    state = remnant.build_remnant(phi_u, phi_l)
    total = remnant.total_pattern(state)

    directions = [
        ("post_vU", remnant.VibrationalDirection.v_upper()),
        ("post_vL", remnant.VibrationalDirection.v_lower()),
        ("post_plus", remnant.VibrationalDirection.fringe()),
        ("post_minus", remnant.VibrationalDirection.antifringe()),
    ]
    if args.direction:
        alpha, beta = _parse_complex_pair(args.direction, "--direction")
        try:
            directions.append(("post_custom", remnant.VibrationalDirection(alpha, beta)))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    probs: dict[str, float] = {}
    patterns: dict[str, np.ndarray] = {}
    for name, direction in directions:
        probs[name], patterns[name] = remnant.postselect(state, direction)

    out = Path(args.out or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = [name for name, _ in directions]
    header = "x_m,total," + ",".join(names)
    lines = [header]
    for i, x in enumerate(state.sites):
        vals = [patterns[name][i] for name in names]
        lines.append(",".join([_fmt(x), _fmt(total[i])] + [_fmt(v) for v in vals]))
    _write_lines(out / "remnant.csv", lines)
    _write_lines(
        out / "remnant_summary.csv",
        ["key,value"] + [f"{name},{_fmt(probs[name])}" for name in names],
    )

    seed = args.seed if args.seed is not None else cfg.seed
    if args.samples:
        if seed is None:
            raise ConfigError("--samples requires --seed (or seed in config)")
        rng = np.random.default_rng(seed)
        draws = remnant.sample_sites(state, args.samples, rng)
        _write_lines(
            out / "remnant_samples.csv",
            ["index,x_m"] + [f"{i},{_fmt(x)}" for i, x in enumerate(draws)],
        )

    residue_ul = float(
        np.max(np.abs(probs["post_vU"] * patterns["post_vU"]
                      + probs["post_vL"] * patterns["post_vL"] - total))
    )
    residue_pm = float(
        np.max(np.abs(probs["post_plus"] * patterns["post_plus"]
                      + probs["post_minus"] * patterns["post_minus"] - total))
    )
    print(
        "remnant: completeness residue "
        f"v_U/v_L = {_fmt(residue_ul)}, fringe/antifringe = {_fmt(residue_pm)}"
    )
    print(remnant.ORTHONORMAL_NOTE)
    return EXIT_OK


# ------------------------------------------------------------------ report


def cmd_report(args: argparse.Namespace) -> int:
    try:
        report = build_report(args.out)
    except ReportError as exc:
        raise ConfigError(str(exc)) from exc
    note = remnant.ORTHONORMAL_NOTE if report.remnant_columns else ""
    text = render_report(report, note)
    (Path(args.out) / "report.txt").write_text(text)
    print(text, end="")
    return EXIT_OK


# ------------------------------------------------------------------- main


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afsharsim",
        description="Two-slit wave-optics bench with which-way analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one bench scenario")
    p_sim.add_argument("--config", help="key = value config file")
    p_sim.add_argument("--scenario", choices=["both", "upper", "lower"], default="both")
    p_sim.add_argument("--grid", choices=["in", "out"], default="out")
    p_sim.add_argument("--out", help="output directory (default from config)")
    p_sim.set_defaults(fn=cmd_simulate)

    p_dual = sub.add_parser("duality", help="V/K models and binned visibility")
    p_dual.add_argument("--probe", metavar="A,B", help="probe amplitudes, e.g. '0.6,0.8'")
    p_dual.add_argument("--random-detectors", type=int, default=0, metavar="N")
    p_dual.add_argument("--seed", type=int, default=0)
    p_dual.add_argument("--pattern", help="x_m,intensity CSV to analyze")
    p_dual.add_argument(
        "--period-samples",
        type=int,
        default=64,
        help="fringe period of the pattern in samples (ladder upper end)",
    )
    p_dual.add_argument("--bin-ladder", type=int, default=7, metavar="N")
    p_dual.add_argument("--out", default="out")
    p_dual.set_defaults(fn=cmd_duality)

    p_rem = sub.add_parser("remnant", help="screen model with post-selection")
    p_rem.add_argument("--config", help="key = value config file")
    p_rem.add_argument("--direction", metavar="ALPHA,BETA", help="extra post-selection direction")
    p_rem.add_argument("--seed", type=int, default=None)
    p_rem.add_argument("--samples", type=int, default=0, metavar="N")
    p_rem.add_argument("--out", help="output directory (default from config)")
    p_rem.set_defaults(fn=cmd_remnant)

    p_rep = sub.add_parser("report", help="aggregate CSV outputs into a report")
    p_rep.add_argument("--out", default="out", help="directory holding the CSV outputs")
    p_rep.set_defaults(fn=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except apparatus.BandLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
