"""Geometric multipath channel model for a uniform linear receive array.

Each user's channel is a sparse sum of plane-wave arrivals: complex Gaussian
path gains on steering vectors of the receive array, normalized so the
expected per-user channel energy equals the antenna count (perfect power
control, unit pathloss).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array: element count and spacing in carrier wavelengths."""

    n_antennas: int
    spacing_ratio: float = 0.5

    def __post_init__(self) -> None:
        if self.n_antennas < 1:
            raise ValueError(f"n_antennas must be >= 1, got {self.n_antennas}")
        if not 0.0 < self.spacing_ratio <= 0.5:
            raise ValueError(
                f"spacing_ratio must lie in (0, 0.5], got {self.spacing_ratio}"
            )


@dataclass
class PathSet:
    """Gains and physical arrival angles of one user's propagation paths."""

    gains: np.ndarray
    aoas: np.ndarray

    def __post_init__(self) -> None:
        self.gains = np.asarray(self.gains, dtype=complex)
        self.aoas = np.asarray(self.aoas, dtype=float)
        if self.gains.ndim != 1 or self.gains.shape != self.aoas.shape:
            raise ValueError("gains and aoas must be 1-D arrays of equal length")
        if self.count < 1:
            raise ValueError("a path set needs at least one path")

    @property
    def count(self) -> int:
        return self.gains.shape[0]


@dataclass(frozen=True)
class ChannelParams:
    """Static parameters of the channel ensemble.

    Arrival angles are drawn uniformly on [-pi/2, pi/2] (front half-plane of
    the array); the per-user path count is max{1, Poisson(mean_paths)}.
    """

    n_users: int
    mean_paths: float
    geometry: ArrayGeometry

    def __post_init__(self) -> None:
        if self.n_users < 1:
            raise ValueError(f"n_users must be >= 1, got {self.n_users}")
        if not self.mean_paths > 0:
            raise ValueError(f"mean_paths must be > 0, got {self.mean_paths}")


@dataclass
class ChannelMatrix:
    """One channel realization: the matrix plus the paths that generated it."""

    h: np.ndarray
    paths: list[PathSet]
    geometry: ArrayGeometry

    @property
    def n_antennas(self) -> int:
        return self.h.shape[0]

    @property
    def n_users(self) -> int:
        return self.h.shape[1]


def steering_vector(geometry: ArrayGeometry, spatial_angle: float) -> np.ndarray:
    """Unit-norm array response of the ULA at a spatial angle in [-1, 1].

    Element m carries phase exp(-j*pi*m*spatial_angle); the 1/sqrt(N) scale
    makes the vector unit norm. Responses at spatial angles separated by a
    nonzero multiple of 2/N are mutually orthogonal.
    """
    if abs(spatial_angle) > 1.0:
        raise ValueError(f"spatial angle must lie in [-1, 1], got {spatial_angle}")
    m = np.arange(geometry.n_antennas)
    return np.exp(-1j * np.pi * m * spatial_angle) / np.sqrt(geometry.n_antennas)


def spatial_from_physical(geometry: ArrayGeometry, physical_angle):
    """Map physical arrival angles in [-pi/2, pi/2] to spatial angles.

    The spatial angle is 2*(d/lambda)*sin(phi); with half-wavelength spacing
    it covers [-1, 1] without aliasing.
    """
    phi = np.asarray(physical_angle, dtype=float)
    if np.any(np.abs(phi) > np.pi / 2):
        raise ValueError("physical angles must lie in [-pi/2, pi/2]")
    out = 2.0 * geometry.spacing_ratio * np.sin(phi)
    return float(out) if np.isscalar(physical_angle) else out


def draw_path_count(mean_paths: float, rng: np.random.Generator) -> int:
    """Poisson path count floored at one so every user keeps a channel."""
    if not mean_paths > 0:
        raise ValueError(f"mean_paths must be > 0, got {mean_paths}")
    return max(1, int(rng.poisson(mean_paths)))


def column_from_paths(geometry: ArrayGeometry, paths: PathSet) -> np.ndarray:
    """Rebuild one user's channel column from its stored path parameters."""
    responses = np.stack(
        [
            steering_vector(geometry, spatial_from_physical(geometry, phi))
            for phi in paths.aoas
        ],
        axis=1,
    )
    return np.sqrt(geometry.n_antennas / paths.count) * (responses @ paths.gains)


def generate_channel(params: ChannelParams, rng: np.random.Generator) -> ChannelMatrix:
    """Draw one channel realization.

    Per user: a floored-Poisson number of paths, i.i.d. CN(0, 1) gains
    (real and imaginary parts each N(0, 1/2)), and uniform arrival angles.
    The sqrt(N/L) column scale keeps E[||h_k||^2] equal to the antenna count.

    Parameters
    ----------
    params : ChannelParams
        Ensemble parameters (users, mean path count, array geometry).
    rng : numpy.random.Generator
        Source of randomness; a fixed seed reproduces the realization exactly.
    """
    columns = []
    path_sets = []
    for _ in range(params.n_users):
        count = draw_path_count(params.mean_paths, rng)
        gains = (
            rng.standard_normal(count) + 1j * rng.standard_normal(count)
        ) / np.sqrt(2.0)
        aoas = rng.uniform(-np.pi / 2, np.pi / 2, size=count)
        paths = PathSet(gains=gains, aoas=aoas)
        columns.append(column_from_paths(params.geometry, paths))
        path_sets.append(paths)
    h = np.stack(columns, axis=1)
    return ChannelMatrix(h=h, paths=path_sets, geometry=params.geometry)
