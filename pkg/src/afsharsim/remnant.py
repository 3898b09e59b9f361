"""Unitary screen model with a vibrational which-slit record.

Each screen site x keeps, besides the arrival amplitude, an internal
"vibrational" mode of its detector element that records which slit fed
it: the joint state after the particle reaches the screen is

    sum_x |x> (a_x |v_U> + b_x |v_L>),

with a_x / b_x the propagated upper/lower slit amplitudes.  Detection at
x keeps a single term of the sum, whose vibrational part is still the
superposition (a_x, b_x) -- so a later measurement of the vibrational
mode in any basis post-selects the recorded events.  Selecting v_U or
v_L splits the arrivals into the two single-slit patterns; selecting the
diagonal directions splits them into fringes and antifringes.

The vibrational modes are taken exactly orthonormal here.  A direct
consequence worth stating plainly: the unconditioned arrival pattern is
then |a_x|^2 + |b_x|^2, which carries no fringes; fully articulated
fringes exist only within the post-selected subensembles.  This module
implements exactly that model and the report surfaces the consequence.

Also included: the spin-1/2 pre/post-selection analogy as a sequence of
projective measurements along x or z starting from the +1 eigenstate
of x.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .wavefield import ComplexField

__all__ = [
    "RemnantState",
    "CollapsedSite",
    "VibrationalDirection",
    "ORTHONORMAL_NOTE",
    "build_remnant",
    "total_pattern",
    "detect",
    "postselect",
    "sample_sites",
    "qubit_analogy",
]

_NORM_TOL = 1e-12

ORTHONORMAL_NOTE = (
    "note: with exactly orthonormal vibrational modes the unconditioned "
    "arrival pattern is |a_x|^2 + |b_x|^2 and carries no fringes; fully "
    "articulated fringes appear only in the post-selected subensembles "
    "(diagonal vibrational directions). This tension is a property of the "
    "orthonormal-mode model itself and is reported rather than patched."
)


@dataclass(frozen=True)
class RemnantState:
    """Joint particle-position / vibrational state over the screen sites."""

    sites: np.ndarray
    amps_U: np.ndarray
    amps_L: np.ndarray

    def __post_init__(self) -> None:
        sites = np.asarray(self.sites, dtype=float)
        a = np.asarray(self.amps_U, dtype=np.complex128)
        b = np.asarray(self.amps_L, dtype=np.complex128)
        if not (sites.shape == a.shape == b.shape):
            raise ValueError("sites, amps_U and amps_L must share one shape")
        norm = float(np.sum(np.abs(a) ** 2 + np.abs(b) ** 2))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {norm} differs from 1 beyond {_NORM_TOL}")
        for name, arr in (("sites", sites), ("amps_U", a), ("amps_L", b)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class CollapsedSite:
    """Post-detection state at one site: the remnant vibrational superposition."""

    x: float
    c_U: complex
    c_L: complex

    def __post_init__(self) -> None:
        norm = abs(self.c_U) ** 2 + abs(self.c_L) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"collapsed-site norm {norm} differs from 1")


@dataclass(frozen=True)
class VibrationalDirection:
    """Post-selection direction alpha|v_U> + beta|v_L> (unit norm)."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"direction norm {norm} differs from 1")

    @staticmethod
    def v_upper() -> "VibrationalDirection":
        return VibrationalDirection(1.0, 0.0)

    @staticmethod
    def v_lower() -> "VibrationalDirection":
        return VibrationalDirection(0.0, 1.0)

    @staticmethod
    def fringe() -> "VibrationalDirection":
        r = 1.0 / np.sqrt(2.0)
        return VibrationalDirection(r, r)

    @staticmethod
    def antifringe() -> "VibrationalDirection":
        r = 1.0 / np.sqrt(2.0)
        return VibrationalDirection(r, -r)


def build_remnant(phi_U: ComplexField, phi_L: ComplexField) -> RemnantState:
    """Entangled screen state from the propagated per-slit fields.

    The particle enters as the equal superposition of the two slit paths,
    so each field is weighted by 1/sqrt(2) before the joint normalization
    sum(|a_x|^2 + |b_x|^2) = 1.
    """
    if phi_U.grid != phi_L.grid:
        raise ValueError("slit fields live on different grids")
    if phi_U.wavelength != phi_L.wavelength:
        raise ValueError("slit fields have different wavelengths")
    a = phi_U.amplitudes / np.sqrt(2.0)
    b = phi_L.amplitudes / np.sqrt(2.0)
    norm = np.sum(np.abs(a) ** 2 + np.abs(b) ** 2)
    if norm <= 0.0:
        raise ValueError("both slit fields are zero; no state to build")
    scale = 1.0 / np.sqrt(norm)
    return RemnantState(phi_U.grid.coordinates, a * scale, b * scale)


def total_pattern(state: RemnantState) -> np.ndarray:
    """Unconditioned arrival probability per site, |a_x|^2 + |b_x|^2."""
    return np.abs(state.amps_U) ** 2 + np.abs(state.amps_L) ** 2


def detect(state: RemnantState, x: float) -> tuple[float, CollapsedSite]:
    """Arrival probability at site x and the remnant superposition left there."""
    sites = state.sites
    idx = int(np.argmin(np.abs(sites - x)))
    spacing = np.min(np.diff(sites)) if sites.size > 1 else np.inf
    if abs(sites[idx] - x) > spacing / 2:
        raise ValueError(f"{x} is not a site of this state")
    a, b = state.amps_U[idx], state.amps_L[idx]
    p = float(abs(a) ** 2 + abs(b) ** 2)
    if p <= 0.0:
        raise ValueError(f"zero arrival probability at x = {sites[idx]}: no collapse defined")
    root = np.sqrt(p)
    return p, CollapsedSite(x=float(sites[idx]), c_U=a / root, c_L=b / root)


def postselect(
    state: RemnantState, direction: VibrationalDirection
) -> tuple[float, np.ndarray]:
    """Probability and normalized site pattern of one vibrational outcome.

    Site weights are |alpha* a_x + beta* b_x|^2; their sum is the outcome
    probability.  Post-selecting v_U returns the upper-slit marginal,
    the diagonal directions return the fringe/antifringe patterns.
    """
    w = np.abs(np.conj(direction.alpha) * state.amps_U + np.conj(direction.beta) * state.amps_L) ** 2
    prob = float(np.sum(w))
    if prob < 1e-300:
        raise ValueError("post-selection outcome has vanishing probability")
    return prob, w / prob


def sample_sites(state: RemnantState, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n detection sites from the unconditioned arrival distribution."""
    p = total_pattern(state)
    p = p / p.sum()
    return rng.choice(state.sites, size=n, p=p)


def qubit_analogy(axes: Sequence[str]) -> list[dict[int, float]]:
    """Projective x/z measurement sequence on a spin prepared in |x=+1>.

    Returns one outcome table {+1: p, -1: p} per measurement.  After each
    measurement the state collapses; the sequence deterministically follows
    the +1 branch whenever it has nonzero probability (for the x/z pair the
    later statistics do not depend on the branch whenever both outcomes are
    possible, and the +1 branch is the one a confirming intermediate
    measurement keeps).

    Restricted to x/z measurements, every reachable state is an x or z
    eigenstate, and every overlap probability is exactly 0, 1/2, or 1; the
    computation is carried out in that exact algebra, so the returned
    probabilities carry no floating-point error.
    """
    if not axes:
        raise ValueError("measurement sequence is empty")
    state_axis, state_sign = "x", +1
    tables: list[dict[int, float]] = []
    for axis in axes:
        if axis not in ("x", "z"):
            raise ValueError(f"unknown measurement axis {axis!r}; use 'x' or 'z'")
        if axis == state_axis:
            p_plus = 1.0 if state_sign == +1 else 0.0
        else:
            p_plus = 0.5  # mutually unbiased bases
        tables.append({+1: p_plus, -1: 1.0 - p_plus})
        state_axis, state_sign = axis, (+1 if p_plus > 0.0 else -1)
    return tables
