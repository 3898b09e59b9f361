"""The two-slit / wire-grid / imaging-lens bench.

Layout along the optical axis: double slit -> free space -> plane sigma1
(where a thin wire grid may sit on the interference minima) -> free space
-> thin lens -> free space -> detection plane sigma2.  The lens images the
slit plane onto sigma2, so each slit maps to its own detector window and
the window powers act as which-slit detectors.

Numerical design notes
----------------------
The slit source is built directly in the spatial-frequency domain: the
aperture-pair spectrum is multiplied by a raised-cosine low-pass window
whose cutoff keeps (a) the outer Nyquist band empty, so spectral
propagation never aliases, and (b) the diffracted beam inside the periodic
computation box all the way to the lens.  The window's flat passband covers
the whole fringe region at sigma1, so fringe positions and the single-slit
envelope there are unaffected.  The wire bars are given a narrow tanh edge
(about one sample) for the same reason; their nominal width is preserved.

Every stage of a scenario run is checked against the band-limit guard and
violations raise :class:`BandLimitError` naming the stage.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .wavefield import (
    ComplexField,
    Grid,
    Mask,
    apply_mask,
    intensity,
    make_plane_wave,
    nyquist_tail_fraction,
    propagate,
    thin_lens,
    total_power,
)

__all__ = [
    "AfsharGeometry",
    "Slits",
    "GridState",
    "Scenario",
    "SimulationRecord",
    "BandLimitError",
    "DEFAULT_N_SAMPLES",
    "DEFAULT_SPACING",
    "default_grid",
    "slit_mask",
    "fringe_minima",
    "build_wire_grid",
    "fill_factor",
    "image_windows",
    "run_scenario",
    "discrimination",
]

DEFAULT_N_SAMPLES = 2**14
DEFAULT_SPACING = 5e-6

# Band-limit guard: tolerated spectral-energy fraction in the outer 5% of the
# Nyquist band, and the minimum sampling of the sigma1 fringe period.
GUARD_TAIL_LIMIT = 1e-6
GUARD_MIN_SAMPLES_PER_FRINGE = 4

# Spectral window for the slit source (fractions of the box/Nyquist limits)
# and the tanh edge scale of the wire bars, in samples.
_CUT_BOX_MARGIN = 0.95
_CUT_NYQUIST_FRACTION = 0.55
_FLAT_FRACTION = 0.5
_WIRE_EDGE_SAMPLES = 1.3

# Acceptable depth of a refined interference minimum relative to the
# neighboring maxima; shallower minima are not resolvable wire sites.
_MINIMUM_DEPTH = 1e-4


class BandLimitError(RuntimeError):
    """A scenario field failed the band-limit guard at a named stage."""

    def __init__(self, stage: str, detail: str):
        super().__init__(f"band-limit guard violated at stage '{stage}': {detail}")
        self.stage = stage


class Slits(enum.Enum):
    BOTH = "both"
    UPPER_ONLY = "upper"
    LOWER_ONLY = "lower"


class GridState(enum.Enum):
    IN = "in"
    OUT = "out"


@dataclass(frozen=True)
class Scenario:
    slits: Slits
    grid: GridState


@dataclass(frozen=True)
class AfsharGeometry:
    """Physical dimensions of the bench (SI units, meters).

    The lens must image the slit plane onto the detector plane:
    ``1/(z_slits_to_grid + z_grid_to_lens) + 1/z_lens_to_detectors ==
    1/focal_length`` to a relative 1e-9, otherwise the detector windows
    carry no which-slit meaning.
    """

    slit_width: float
    slit_separation: float
    z_slits_to_grid: float
    z_grid_to_lens: float
    focal_length: float
    z_lens_to_detectors: float
    wire_width: float
    n_wires: int
    wavelength: float

    def __post_init__(self) -> None:
        for name in (
            "slit_width",
            "slit_separation",
            "z_slits_to_grid",
            "z_grid_to_lens",
            "focal_length",
            "z_lens_to_detectors",
            "wire_width",
            "wavelength",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not (isinstance(self.n_wires, int) and self.n_wires >= 1):
            raise ValueError(f"n_wires must be a positive integer, got {self.n_wires}")
        if not self.slit_separation > self.slit_width:
            raise ValueError("slit_separation must exceed slit_width")
        if not self.wire_width < self.fringe_spacing:
            raise ValueError(
                f"wire_width {self.wire_width} is not below the sigma1 fringe "
                f"spacing {self.fringe_spacing:.4g}"
            )
        s = self.z_slits_to_grid + self.z_grid_to_lens
        lhs = 1.0 / s + 1.0 / self.z_lens_to_detectors
        rhs = 1.0 / self.focal_length
        if abs(lhs - rhs) > 1e-9 * abs(rhs):
            raise ValueError(
                f"imaging condition violated: 1/{s} + 1/{self.z_lens_to_detectors} "
                f"differs from 1/{self.focal_length} by more than 1e-9 relative"
            )

    @staticmethod
    def default() -> "AfsharGeometry":
        """Reference bench used by the CLI and the acceptance suite.

        Chosen so that, on the default grid, the band-limit guard holds at
        every stage, the interference minima at sigma1 are below 1e-4 of
        the neighboring maxima, and the single-slit envelope covers the
        wire region (these properties are exercised by the test suite).
        """
        return AfsharGeometry(
            slit_width=30e-6,
            slit_separation=187.5e-6,
            z_slits_to_grid=1.0,
            z_grid_to_lens=0.5,
            focal_length=0.5,
            z_lens_to_detectors=0.75,
            wire_width=130e-6,
            n_wires=6,
            wavelength=650e-9,
        )

    @property
    def fringe_spacing(self) -> float:
        """Two-slit fringe period at sigma1, lambda*L/d."""
        return self.wavelength * self.z_slits_to_grid / self.slit_separation

    @property
    def object_distance(self) -> float:
        return self.z_slits_to_grid + self.z_grid_to_lens

    @property
    def magnification(self) -> float:
        """|image|/|object| scale of the (inverting) slit-plane image."""
        return self.z_lens_to_detectors / self.object_distance


@dataclass(frozen=True)
class SimulationRecord:
    """Power accounting and intensity profiles of one scenario run."""

    scenario: Scenario
    power_incident: float
    power_after_grid: float
    power_at_detectors: float
    power_window_U: float
    power_window_L: float
    intensity_sigma1: np.ndarray
    intensity_sigma2: np.ndarray
    minima_positions: tuple[float, ...]

    def __post_init__(self) -> None:
        for arr_name in ("intensity_sigma1", "intensity_sigma2"):
            arr = np.asarray(getattr(self, arr_name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, arr_name, arr)


def default_grid(
    geometry: AfsharGeometry,
    n_samples: int = DEFAULT_N_SAMPLES,
    spacing: float = DEFAULT_SPACING,
) -> Grid:
    del geometry  # the default sampling is geometry-independent; kept for call symmetry
    return Grid(n_samples=n_samples, spacing=spacing)


def _source_cutoffs(geometry: AfsharGeometry, grid: Grid) -> tuple[float, float]:
    """Flat-band edge and cutoff of the slit source's spectral window."""
    k = 2.0 * np.pi / geometry.wavelength
    half_box = grid.extent / 2.0
    # widest plane of the bench is the lens; light beyond this transverse
    # frequency would leave the periodic box before reaching it
    k_box = _CUT_BOX_MARGIN * k * half_box / geometry.object_distance
    k_cut = min(k_box, _CUT_NYQUIST_FRACTION * grid.nyquist)
    return _FLAT_FRACTION * k_cut, k_cut


def _check_sampling(geometry: AfsharGeometry, grid: Grid) -> None:
    fringe_samples = geometry.fringe_spacing / grid.spacing
    if fringe_samples < GUARD_MIN_SAMPLES_PER_FRINGE:
        raise BandLimitError(
            "source",
            f"only {fringe_samples:.2f} samples per sigma1 fringe "
            f"(need >= {GUARD_MIN_SAMPLES_PER_FRINGE})",
        )
    k = 2.0 * np.pi / geometry.wavelength
    k_flat, _ = _source_cutoffs(geometry, grid)
    outer_minimum = (geometry.n_wires / 2.0) * geometry.fringe_spacing
    k_fringe_band = k * (outer_minimum + geometry.slit_separation / 2.0) / geometry.z_slits_to_grid
    if k_fringe_band >= k_flat:
        raise BandLimitError(
            "source",
            "the spectral window needed to keep the beam inside the computation "
            f"box (flat to {k_flat:.4g} rad/m) would distort the fringe region "
            f"(up to {k_fringe_band:.4g} rad/m); enlarge the grid extent",
        )


def _guard(field: ComplexField, stage: str) -> None:
    frac = nyquist_tail_fraction(field)
    if frac > GUARD_TAIL_LIMIT:
        raise BandLimitError(
            stage,
            f"outer-band spectral energy fraction {frac:.3e} exceeds {GUARD_TAIL_LIMIT:.0e}",
        )


def slit_mask(geometry: AfsharGeometry, grid: Grid, slits: Slits) -> Mask:
    """Transmission profile of the slit pair (or a single slit).

    Built in the frequency domain: rectangular-aperture spectra at the two
    slit positions, multiplied by a raised-cosine low-pass window (see the
    module notes).  The profile is real, within [-1, 1], and its sampled
    spectrum vanishes identically beyond the window cutoff.
    """
    _check_sampling(geometry, grid)
    k_flat, k_cut = _source_cutoffs(geometry, grid)
    kx = grid.wavenumbers()
    a = geometry.slit_width
    rect_spectrum = a * np.sinc(kx * a / (2.0 * np.pi))
    centers = {
        Slits.BOTH: (+geometry.slit_separation / 2.0, -geometry.slit_separation / 2.0),
        Slits.UPPER_ONLY: (+geometry.slit_separation / 2.0,),
        Slits.LOWER_ONLY: (-geometry.slit_separation / 2.0,),
    }[slits]
    spectrum = np.zeros_like(kx, dtype=complex)
    for c in centers:
        spectrum += rect_spectrum * np.exp(-1j * kx * c)

    akx = np.abs(kx)
    window = np.zeros_like(akx)
    window[akx <= k_flat] = 1.0
    roll = (akx > k_flat) & (akx < k_cut)
    window[roll] = np.cos(0.5 * np.pi * (akx[roll] - k_flat) / (k_cut - k_flat)) ** 2
    spectrum *= window

    x0 = grid.coordinates[0]
    profile = np.fft.ifft(spectrum * np.exp(1j * kx * x0)).real / grid.spacing
    peak = np.max(np.abs(profile))
    if peak > 1.0:
        profile = profile / (peak * (1.0 + 1e-12))
    return Mask(grid, profile)


def _golden_section(fun, lo: float, hi: float, rel_tol: float = 1e-12) -> float:
    """Deterministic golden-section minimizer on a bracket."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = fun(c), fun(d)
    span = hi - lo
    while (hi - lo) > rel_tol * span:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = fun(d)
    return 0.5 * (lo + hi)


def fringe_minima(geometry: AfsharGeometry, grid: Grid | None = None) -> np.ndarray:
    """Positions of the ``n_wires`` interference minima nearest the axis.

    Seeds each minimum at the small-angle estimate ``(m + 1/2) * lambda*L/d``
    and refines it by golden-section search on the simulated both-slit
    intensity at sigma1 (evaluated by band-limited interpolation, so the
    result is not quantized to the sample spacing).  The set is symmetric
    under reflection; the positive-side minima are refined and mirrored.
    """
    if geometry.n_wires % 2 != 0:
        raise ValueError(
            f"a symmetric minima set needs an even wire count, got {geometry.n_wires}"
        )
    grid = grid if grid is not None else default_grid(geometry)
    src = apply_mask(
        make_plane_wave(grid, geometry.wavelength), slit_mask(geometry, grid, Slits.BOTH)
    )
    _guard(src, "source")
    at_sigma1 = propagate(src, geometry.z_slits_to_grid)
    _guard(at_sigma1, "sigma1")

    fringe = geometry.fringe_spacing
    half_extent = grid.coordinates[-1]

    # band-limited interpolation with the spectrum hoisted out of the search loop
    spectrum = np.fft.fft(at_sigma1.amplitudes)
    kx = grid.wavenumbers()
    x0 = grid.coordinates[0]
    n = grid.n_samples

    def pattern(x: float) -> float:
        value = np.exp(1j * (x - x0) * kx) @ spectrum / n
        return float(abs(value) ** 2)

    positive = []
    for m in range(geometry.n_wires // 2):
        seed = (m + 0.5) * fringe
        if seed + 0.35 * fringe > half_extent:
            raise ValueError(
                f"fewer than {geometry.n_wires} resolvable minima within the grid"
            )
        x_min = _golden_section(pattern, seed - 0.35 * fringe, seed + 0.35 * fringe)
        left_max = _golden_section(
            lambda q: -pattern(q), m * fringe - 0.35 * fringe, m * fringe + 0.35 * fringe
        )
        right_max = _golden_section(
            lambda q: -pattern(q),
            (m + 1) * fringe - 0.35 * fringe,
            (m + 1) * fringe + 0.35 * fringe,
        )
        neighbor = max(pattern(left_max), pattern(right_max))
        depth = pattern(x_min) / neighbor
        if depth > _MINIMUM_DEPTH:
            raise ValueError(
                f"minimum near {seed:.4g} m is not resolvable: intensity is "
                f"{depth:.2e} of the neighboring maximum (limit {_MINIMUM_DEPTH:.0e})"
            )
        positive.append(x_min)

    positions = np.array([-p for p in reversed(positive)] + positive)
    return positions


def build_wire_grid(
    geometry: AfsharGeometry,
    minima: np.ndarray,
    grid: Grid | None = None,
    edge_sigma: float = 0.0,
) -> Mask:
    """Absorbing wire bars of ``wire_width`` centered on the given minima.

    With ``edge_sigma == 0`` the mask is strictly binary (0 inside a bar,
    1 elsewhere).  Scenario runs pass a tanh edge of about one sample so
    the bars do not inject energy at the sampling limit; the transition is
    odd-symmetric about the nominal bar boundary, which preserves the
    bar's nominal width.
    """
    grid = grid if grid is not None else default_grid(geometry)
    centers = np.sort(np.asarray(minima, dtype=float))
    if centers.size >= 2:
        gaps = np.diff(centers)
        if np.any(gaps < geometry.wire_width):
            raise ValueError("wire bars overlap: minima closer than wire_width")
    x = grid.coordinates
    w = geometry.wire_width
    t = np.ones_like(x)
    for c in centers:
        if edge_sigma > 0.0:
            bar = 0.5 * (
                np.tanh((x - (c - w / 2)) / edge_sigma)
                - np.tanh((x - (c + w / 2)) / edge_sigma)
            )
            t = t * (1.0 - bar)
        else:
            t[np.abs(x - c) <= w / 2] = 0.0
    return Mask(grid, t)


def fill_factor(geometry: AfsharGeometry) -> float:
    """Geometric fraction of the illuminated width blocked by the wires.

    The illuminated width is the interval covered by the outermost wires
    plus one fringe spacing on each side; this is the reference region for
    the "known amount" of blocking expected when no interference minima
    coincide with the wires.
    """
    fringe = geometry.fringe_spacing
    outer = (geometry.n_wires / 2.0 - 0.5) * fringe
    illuminated = 2.0 * outer + geometry.wire_width + 2.0 * fringe
    return geometry.n_wires * geometry.wire_width / illuminated


def image_windows(geometry: AfsharGeometry) -> tuple[tuple[float, float], tuple[float, float]]:
    """Detector windows (U, L) at sigma2 as closed coordinate intervals.

    Each window has half-width ``M*d/2`` and is centered on the geometric
    image ``-M*(+-d/2)`` of its slit; the lens inverts, so the upper slit
    images into the negative-coordinate window.
    """
    md = geometry.magnification * geometry.slit_separation
    return ((-md, 0.0), (0.0, md))


def run_scenario(
    geometry: AfsharGeometry, scenario: Scenario, grid: Grid | None = None
) -> SimulationRecord:
    """Propagate one scenario through the bench and record power accounting.

    Pipeline: slit mask -> propagate to sigma1 -> (wire grid if in) ->
    propagate to lens -> thin lens -> propagate to sigma2.  The band-limit
    guard runs after every stage; ``power_incident`` is measured at sigma1
    before the grid, ``intensity_sigma1`` after it.  A sample exactly on
    the shared window boundary at x = 0 is assigned to window U
    (deterministic tie-break).
    """
    grid = grid if grid is not None else default_grid(geometry)
    src = apply_mask(
        make_plane_wave(grid, geometry.wavelength), slit_mask(geometry, grid, scenario.slits)
    )
    _guard(src, "source")

    at_sigma1 = propagate(src, geometry.z_slits_to_grid)
    _guard(at_sigma1, "sigma1")
    power_incident = total_power(at_sigma1)

    minima: tuple[float, ...] = ()
    if scenario.slits is Slits.BOTH or scenario.grid is GridState.IN:
        minima = tuple(float(p) for p in fringe_minima(geometry, grid))

    if scenario.grid is GridState.IN:
        wires = build_wire_grid(
            geometry, np.asarray(minima), grid, edge_sigma=_WIRE_EDGE_SAMPLES * grid.spacing
        )
        after_grid = apply_mask(at_sigma1, wires)
        _guard(after_grid, "wire_grid")
    else:
        after_grid = at_sigma1
    power_after_grid = total_power(after_grid)

    at_lens = propagate(after_grid, geometry.z_grid_to_lens)
    _guard(at_lens, "lens")
    after_lens = thin_lens(at_lens, geometry.focal_length)
    _guard(after_lens, "lens_phase")
    at_sigma2 = propagate(after_lens, geometry.z_lens_to_detectors)
    _guard(at_sigma2, "sigma2")

    power_at_detectors = total_power(at_sigma2)
    (u_lo, u_hi), (l_lo, l_hi) = image_windows(geometry)
    x = grid.coordinates
    in_u = (x >= u_lo) & (x <= u_hi)
    in_l = (x >= l_lo) & (x <= l_hi) & ~in_u
    i2 = intensity(at_sigma2)
    power_window_u = float(np.sum(i2[in_u]) * grid.spacing)
    power_window_l = float(np.sum(i2[in_l]) * grid.spacing)

    record_minima = minima if scenario.slits is Slits.BOTH else ()
    return SimulationRecord(
        scenario=scenario,
        power_incident=power_incident,
        power_after_grid=power_after_grid,
        power_at_detectors=power_at_detectors,
        power_window_U=power_window_u,
        power_window_L=power_window_l,
        intensity_sigma1=intensity(after_grid),
        intensity_sigma2=i2,
        minima_positions=record_minima,
    )


def discrimination(record: SimulationRecord) -> float:
    """Which-slit contrast |P_U - P_L| / (P_U + P_L) of the window powers."""
    total = record.power_window_U + record.power_window_L
    if total <= 0.0:
        raise ValueError("no detector power in the image windows")
    return abs(record.power_window_U - record.power_window_L) / total
