"""Flat key = value configuration files (SI units, '#' comments).

Every geometric key is optional and defaults to the reference bench;
``z_lens_to_detectors`` may be omitted entirely, in which case it is
derived from the imaging condition.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .apparatus import DEFAULT_N_SAMPLES, DEFAULT_SPACING, AfsharGeometry
from .wavefield import Grid

__all__ = ["Config", "ConfigError", "load_config", "parse_config"]


class ConfigError(ValueError):
    """Unreadable, unparsable, or physically inconsistent configuration."""


_GEOMETRY_FLOAT_KEYS = (
    "wavelength",
    "slit_width",
    "slit_separation",
    "z_slits_to_grid",
    "z_grid_to_lens",
    "focal_length",
    "z_lens_to_detectors",
    "wire_width",
)


@dataclass
class Config:
    wavelength: float = 650e-9
    slit_width: float = 30e-6
    slit_separation: float = 187.5e-6
    z_slits_to_grid: float = 1.0
    z_grid_to_lens: float = 0.5
    focal_length: float = 0.5
    z_lens_to_detectors: float | None = None
    wire_width: float = 130e-6
    n_wires: int = 6
    n_samples: int = DEFAULT_N_SAMPLES
    spacing: float = DEFAULT_SPACING
    out_dir: str = "out"
    seed: int | None = None

    def geometry(self) -> AfsharGeometry:
        z_det = self.z_lens_to_detectors
        if z_det is None:
            s = self.z_slits_to_grid + self.z_grid_to_lens
            inv = 1.0 / self.focal_length - 1.0 / s
            if inv <= 0:
                raise ConfigError(
                    "imaging condition has no solution: the slit plane sits inside "
                    "the focal length"
                )
            z_det = 1.0 / inv
        try:
            return AfsharGeometry(
                slit_width=self.slit_width,
                slit_separation=self.slit_separation,
                z_slits_to_grid=self.z_slits_to_grid,
                z_grid_to_lens=self.z_grid_to_lens,
                focal_length=self.focal_length,
                z_lens_to_detectors=z_det,
                wire_width=self.wire_width,
                n_wires=self.n_wires,
                wavelength=self.wavelength,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def grid(self) -> Grid:
        try:
            return Grid(n_samples=self.n_samples, spacing=self.spacing)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def parse_config(text: str) -> Config:
    cfg = Config()
    known = {f.name for f in fields(Config)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key in _GEOMETRY_FLOAT_KEYS or key == "spacing":
                setattr(cfg, key, float(value))
            elif key in ("n_wires", "n_samples", "seed"):
                setattr(cfg, key, int(value))
            else:  # out_dir
                setattr(cfg, key, value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from exc
    return cfg


def load_config(path: str | Path | None) -> Config:
    """Config from a file, or the built-in defaults when no path is given."""
    if path is None:
        return Config()
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    return parse_config(p.read_text())
