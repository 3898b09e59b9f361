import numpy as np
import pytest

from afsharsim import (
    AfsharGeometry,
    GridState,
    Scenario,
    Slits,
    apply_mask,
    default_grid,
    make_plane_wave,
    propagate,
    run_scenario,
    slit_mask,
)


@pytest.fixture(scope="session")
def geometry():
    return AfsharGeometry.default()


@pytest.fixture(scope="session")
def bench_grid(geometry):
    return default_grid(geometry)


@pytest.fixture(scope="session")
def records(geometry, bench_grid):
    """All six scenario runs, computed once for the whole suite."""
    return {
        (slits.value, grid_state.value): run_scenario(
            geometry, Scenario(slits, grid_state), bench_grid
        )
        for slits in Slits
        for grid_state in GridState
    }


@pytest.fixture(scope="session")
def sigma1_fields(geometry, bench_grid):
    """Per-slit fields at the sigma1 plane (upper, lower)."""
    wave = make_plane_wave(bench_grid, geometry.wavelength)
    fields = {}
    for which in (Slits.UPPER_ONLY, Slits.LOWER_ONLY):
        src = apply_mask(wave, slit_mask(geometry, bench_grid, which))
        fields[which] = propagate(src, geometry.z_slits_to_grid)
    return fields[Slits.UPPER_ONLY], fields[Slits.LOWER_ONLY]
