"""Fringe visibility (V) versus which-way knowledge (K).

Two standard models of a two-path experiment with a which-way probe:

* the photon-probe model: scattering amplitudes ``a`` (correct detector)
  and ``b`` (wrong detector) mix the two path amplitudes, giving the
  screen pattern ``|a*phi1 + b*phi2|^2 + |a*phi2 + b*phi1|^2`` and the
  correspondence ``V = |2ab|``, ``K = sqrt(1 - V^2)``;
* the detector-unitary model: a probe in pure state ``d`` is kicked by
  path-conditioned unitaries ``U+``/``U-`` and ``V = |<d| U- U+^dag |d>|``.

For pure states both models satisfy ``V^2 + K^2 = 1`` exactly; the general
bound is ``V^2 + K^2 <= 1``.  :func:`visibility_from_pattern` estimates V
from a sampled pattern at a chosen spatial resolution (bin width); coarse
bins mix maxima into minima and collapse the estimate, which is the
resolution artifact this estimator exists to expose.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .wavefield import ComplexField, FieldFlagWarning, Grid

__all__ = [
    "ProbeAmplitudes",
    "DetectorModel",
    "VKPair",
    "feynman_pattern",
    "vk_from_probe",
    "vk_from_detector",
    "duality_check",
    "visibility_from_pattern",
    "probe_detector_model",
    "random_detector_model",
]

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class ProbeAmplitudes:
    """Scattering amplitudes (a, b) of the photon probe, |a|^2 + |b|^2 = 1."""

    a: complex
    b: complex

    def __post_init__(self) -> None:
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"|a|^2 + |b|^2 = {norm}, expected 1 within {_NORM_TOL}")


@dataclass(frozen=True)
class DetectorModel:
    """Which-way detector: initial state d and path unitaries U_plus, U_minus."""

    d: np.ndarray
    U_plus: np.ndarray
    U_minus: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.d, dtype=np.complex128).reshape(2)
        if abs(np.linalg.norm(d) - 1.0) > _NORM_TOL:
            raise ValueError(f"detector state norm {np.linalg.norm(d)} is not 1")
        ident = np.eye(2)
        mats = []
        for name in ("U_plus", "U_minus"):
            u = np.asarray(getattr(self, name), dtype=np.complex128).reshape(2, 2)
            if np.max(np.abs(u.conj().T @ u - ident)) > _NORM_TOL:
                raise ValueError(f"{name} is not unitary to {_NORM_TOL}")
            u.flags.writeable = False
            mats.append(u)
        d.flags.writeable = False
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "U_plus", mats[0])
        object.__setattr__(self, "U_minus", mats[1])


@dataclass(frozen=True)
class VKPair:
    V: float
    K: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.V <= 1.0 and 0.0 <= self.K <= 1.0):
            raise ValueError(f"V, K must lie in [0, 1], got ({self.V}, {self.K})")


def feynman_pattern(
    phi1: ComplexField, phi2: ComplexField, probe: ProbeAmplitudes
) -> np.ndarray:
    """Screen pattern of the probe model given the two path amplitudes.

    ``b = 0`` removes all cross terms (incoherent sum, sharp which-way
    knowledge); ``a = b`` reproduces the fully coherent pattern.
    """
    if phi1.grid != phi2.grid:
        raise ValueError("path fields live on different grids")
    if phi1.wavelength != phi2.wavelength:
        raise ValueError("path fields have different wavelengths")
    a, b = probe.a, probe.b
    u1, u2 = phi1.amplitudes, phi2.amplitudes
    return np.abs(a * u1 + b * u2) ** 2 + np.abs(a * u2 + b * u1) ** 2


def vk_from_probe(probe: ProbeAmplitudes) -> VKPair:
    """V = |2ab| and K = sqrt(1 - V^2) from the probe amplitudes.

    For unit-norm amplitudes sqrt(1 - |2ab|^2) equals ||a|^2 - |b|^2|;
    the latter is evaluated because it stays exact at the endpoints where
    the direct subtraction would amplify the last-bit norm error.
    """
    v = min(abs(2.0 * probe.a * probe.b), 1.0)
    k = min(abs(abs(probe.a) ** 2 - abs(probe.b) ** 2), 1.0)
    return VKPair(V=v, K=k)


def vk_from_detector(model: DetectorModel, ordering: str = "primary") -> VKPair:
    """V = |<d| U_minus U_plus^dag |d>| and K = sqrt(1 - V^2).

    ``ordering="adjoint"`` computes the alternative operator ordering
    ``|<d| U_minus^dag U_plus |d>|`` seen elsewhere in the literature; for
    the real-rotation construction of :func:`probe_detector_model` (and for
    any commuting pair) the two agree.
    """
    if ordering == "primary":
        op = model.U_minus @ model.U_plus.conj().T
    elif ordering == "adjoint":
        op = model.U_minus.conj().T @ model.U_plus
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    v = abs(np.vdot(model.d, op @ model.d))
    v = min(v, 1.0)
    return VKPair(V=v, K=_k_from_v(v))


def _k_from_v(v: float) -> float:
    # clamp absorbs ~1e-16 negatives from the subtraction
    return float(np.sqrt(max(0.0, 1.0 - v * v)))


def duality_check(pair: VKPair) -> float:
    """Return V^2 + K^2 (1 for pure-state models, <= 1 in general)."""
    return pair.V**2 + pair.K**2


def probe_detector_model(probe: ProbeAmplitudes) -> DetectorModel:
    """Detector-unitary model equivalent to a real-amplitude probe.

    Takes ``d = (1, 1)/sqrt(2)`` and real rotations sending d to (a, b)
    and to (b, a); requires real (a, b).  By construction
    ``vk_from_detector`` of the result equals ``vk_from_probe(probe)``.
    """
    if abs(probe.a.imag) > _NORM_TOL or abs(probe.b.imag) > _NORM_TOL:
        raise ValueError("the real-rotation construction needs real (a, b)")
    theta = np.arctan2(probe.b.real, probe.a.real)

    def rot(angle: float) -> np.ndarray:
        c, s = np.cos(angle), np.sin(angle)
        return np.array([[c, -s], [s, c]])

    d = np.array([1.0, 1.0]) / np.sqrt(2.0)
    return DetectorModel(
        d=d,
        U_plus=rot(theta - np.pi / 4.0),
        U_minus=rot(np.pi / 4.0 - theta),
    )


def random_detector_model(rng: np.random.Generator) -> DetectorModel:
    """Haar-ish random pure detector model (random d, random unitaries)."""
    d = rng.normal(size=2) + 1j * rng.normal(size=2)
    d = d / np.linalg.norm(d)

    def haar_unitary() -> np.ndarray:
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, r = np.linalg.qr(z)
        return q * (np.diag(r) / np.abs(np.diag(r)))

    return DetectorModel(d=d, U_plus=haar_unitary(), U_minus=haar_unitary())


def visibility_from_pattern(
    pattern: np.ndarray,
    grid: Grid,
    bin_width: float,
    region: tuple[float, float],
    anchor_offset: float = 0.0,
) -> float:
    """Visibility (Imax - Imin)/(Imax + Imin) at a chosen resolution.

    The region is partitioned into contiguous disjoint bins of
    ``bin_width`` anchored at its left edge (plus ``anchor_offset``); each
    bin is reduced to its mean intensity and V is computed from the bin
    means.  ``bin_width == grid.spacing`` recovers the fine-resolution
    estimator; widths approaching one fringe period average maxima and
    minima together and drive the estimate toward zero.
    """
    pattern = np.asarray(pattern, dtype=float)
    if pattern.shape != (grid.n_samples,):
        raise ValueError("pattern length does not match grid")
    if bin_width < grid.spacing:
        raise ValueError(
            f"bin_width {bin_width} is below the sample spacing {grid.spacing}"
        )
    lo, hi = region
    x = grid.coordinates
    half = grid.spacing / 2
    if lo > hi or lo < x[0] - half or hi > x[-1] + half:
        raise ValueError(f"region ({lo}, {hi}) does not lie within the grid")
    start = lo + anchor_offset
    n_bins = int(np.floor((hi - start) / bin_width + 1e-12))
    if n_bins < 2:
        raise ValueError("region covers fewer than two bins")
    # half-open bins [start + j*bw, start + (j+1)*bw); the half-ulp nudge keeps
    # samples that sit exactly on a bin boundary in the upper bin
    ratio = (x - start) / bin_width
    idx = np.floor(ratio + 1e-12).astype(int)
    sel = (idx >= 0) & (idx < n_bins)
    sums = np.bincount(idx[sel], weights=pattern[sel], minlength=n_bins)
    counts = np.bincount(idx[sel], minlength=n_bins)
    means = sums[counts > 0] / counts[counts > 0]
    i_max, i_min = float(np.max(means)), float(np.min(means))
    if i_max <= 0.0:
        warnings.warn("all-zero pattern: visibility defined as 0", FieldFlagWarning)
        return 0.0
    return (i_max - i_min) / (i_max + i_min)
