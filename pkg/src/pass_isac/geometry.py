"""Waveguide geometry, system configuration, and exact complex channel gains.

Two parallel dielectric waveguides run along the x-axis at height ``altitude``:
the transmit line at y=0 and the receive line at y=``waveguide_offset``.  Each
carries repositionable radiating elements ("pinches") at tunable x-locations.
An element at location ``ell`` couples to a point ``u`` through a spherical
wave whose amplitude decays as 1/distance and whose phase accumulates over
the air path plus the in-waveguide path (scaled by the effective refractive
index).  Transmit elements carry an extra 1/sqrt(N) amplitude factor so that
the radiated power is independent of the element count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

SPEED_OF_LIGHT = 3.0e8  # m/s

# Relative slack used when checking float-built layouts against exact bounds.
_REL_TOL = 1e-9


class PassIsacError(Exception):
    """Base class for errors raised by this package."""


class GeometryError(PassIsacError):
    """Degenerate geometry, e.g. an evaluation point on top of an element."""


class FeasibilityError(PassIsacError):
    """A layout cannot satisfy the spacing/span constraints."""


class LayoutError(PassIsacError):
    """A layout object violates one of its invariants."""


class ConfigError(PassIsacError):
    """Invalid configuration value; the message names the offending field."""


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def watts_to_dbm(watts: float) -> float:
    if watts < 0.0:
        raise ValueError("watts must be nonnegative for a dBm conversion")
    if watts == 0.0:
        return float("-inf")
    return 10.0 * math.log10(watts * 1000.0)


class WaveguideRole(str, Enum):
    TRANSMIT = "transmit"
    RECEIVE = "receive"


@dataclass(frozen=True)
class SystemConfig:
    """Physical and algorithmic constants for one deployment.

    Power and noise fields are stored in watts; loaders convert dBm inputs
    at read time.  Fields left at ``None`` are derived in ``__post_init__``:

    * ``element_amplitude`` defaults to wavelength/(4*pi), the free-space
      spherical-wave amplitude scale.
    * ``min_spacing`` defaults to wavelength/2.
    * ``cluster_spacing`` defaults to the smallest multiple of the guide
      wavelength (wavelength / refractive_index) that is >= ``min_spacing``.
      With that spacing, adjacent elements of a cluster superimpose in phase
      at the point directly facing the cluster center; free-space-wavelength
      spacing can be forced by setting ``cluster_spacing`` explicitly.

    Both waveguides are centred on x=0, spanning [-length/2, +length/2].
    """

    carrier_frequency: float = 28e9      # Hz
    refractive_index: float = 1.4        # effective in-waveguide index
    element_amplitude: float | None = None
    altitude: float = 3.0                # waveguide height above user plane (m)
    waveguide_offset: float = 4.0        # y-distance between the waveguides (m)
    tx_length: float = 40.0              # transmit span (m)
    rx_length: float = 40.0              # receive span (m)
    min_spacing: float | None = None     # minimum inter-element distance (m)
    cluster_spacing: float | None = None # template spacing inside a cluster (m)
    frame_length: int = 5                # samples per sensing frame
    rcs_variance: float = 10.0           # reflectivity variance (dimensionless)
    noise_user: float = dbm_to_watts(-114.0)    # W
    noise_rx_dl: float = dbm_to_watts(-114.0)   # W
    noise_rx_ul: float = dbm_to_watts(-114.0)   # W
    p_max: float = dbm_to_watts(10.0)           # W, downlink budget
    p_c_max: float = dbm_to_watts(5.0)          # W, uplink communication budget
    p_s_max: float = dbm_to_watts(5.0)          # W, uplink sensing budget
    grid_resolution: int = 10_000
    n_tx: int = 10
    n_rx: int = 10
    target_altitude: float = 0.0         # z used when sampling targets (m)
    scene_depth: float = 8.0             # rectangle side along y (m)

    def __post_init__(self) -> None:
        if self.carrier_frequency <= 0.0:
            raise ConfigError("carrier_frequency: must be positive")
        if self.refractive_index <= 0.0:
            raise ConfigError("refractive_index: must be positive")
        if self.altitude <= 0.0:
            raise ConfigError("altitude: must be positive")
        if self.waveguide_offset < 0.0:
            raise ConfigError("waveguide_offset: must be nonnegative")
        if self.tx_length <= 0.0:
            raise ConfigError("tx_length: must be positive")
        if self.rx_length <= 0.0:
            raise ConfigError("rx_length: must be positive")
        if self.frame_length < 1:
            raise ConfigError("frame_length: must be >= 1")
        if self.rcs_variance < 0.0:
            raise ConfigError("rcs_variance: must be nonnegative")
        for name in ("noise_user", "noise_rx_dl", "noise_rx_ul"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name}: must be positive")
        for name in ("p_max", "p_c_max", "p_s_max"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name}: must be nonnegative")
        if self.grid_resolution < 2:
            raise ConfigError("grid_resolution: must be an integer >= 2")
        if self.n_tx < 1:
            raise ConfigError("n_tx: must be >= 1")
        if self.n_rx < 1:
            raise ConfigError("n_rx: must be >= 1")
        if self.scene_depth < 0.0:
            raise ConfigError("scene_depth: must be nonnegative")

        wavelength = SPEED_OF_LIGHT / self.carrier_frequency
        if self.element_amplitude is None:
            object.__setattr__(self, "element_amplitude", wavelength / (4.0 * math.pi))
        if self.element_amplitude <= 0.0:
            raise ConfigError("element_amplitude: must be positive")
        if self.min_spacing is None:
            object.__setattr__(self, "min_spacing", wavelength / 2.0)
        if self.min_spacing <= 0.0:
            raise ConfigError("min_spacing: must be positive")
        if self.min_spacing > wavelength * (1.0 + _REL_TOL):
            raise ConfigError(
                "min_spacing: must not exceed the wavelength "
                f"({self.min_spacing:.6g} m > {wavelength:.6g} m)"
            )
        if self.cluster_spacing is None:
            object.__setattr__(self, "cluster_spacing", in_phase_spacing(
                wavelength, self.refractive_index, self.min_spacing))
        if self.cluster_spacing < self.min_spacing * (1.0 - _REL_TOL):
            raise ConfigError(
                "cluster_spacing: must be at least min_spacing "
                f"({self.cluster_spacing:.6g} m < {self.min_spacing:.6g} m)"
            )

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength


def in_phase_spacing(wavelength: float, refractive_index: float,
                     min_spacing: float) -> float:
    """Smallest multiple of the guide wavelength that satisfies ``min_spacing``.

    Spacing the elements of a cluster by a multiple of wavelength/index makes
    the in-waveguide phase increment a multiple of 2*pi, so the element
    signals add coherently toward the point facing the cluster center.
    """
    guide = wavelength / refractive_index
    multiples = max(1, math.ceil(min_spacing / guide * (1.0 - _REL_TOL)))
    spacing = multiples * guide
    if spacing < min_spacing * (1.0 - _REL_TOL):
        spacing = (multiples + 1) * guide
    return spacing


@dataclass(frozen=True)
class Vec3:
    """Cartesian coordinate in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"Vec3.{name}: must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class Scene:
    """One user/target drop.  The user sits on the ground plane (z = 0)."""

    user: Vec3
    target: Vec3

    def __post_init__(self) -> None:
        if self.user.z != 0.0:
            raise ValueError("Scene.user: must have z = 0")


@dataclass(frozen=True)
class PinchingLayout:
    """Ordered pinching locations on one waveguide.

    Locations must be strictly increasing.  Span and spacing constraints
    depend on the configuration and are checked by :meth:`validate` and
    enforced by :func:`project_feasible`.
    """

    role: WaveguideRole
    locations: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.locations) == 0:
            raise LayoutError("layout must contain at least one element")
        object.__setattr__(self, "locations", tuple(float(v) for v in self.locations))
        diffs = np.diff(self.locations)
        if len(diffs) and np.any(diffs <= 0.0):
            raise LayoutError("locations must be strictly increasing")

    def __len__(self) -> int:
        return len(self.locations)

    def validate(self, cfg: SystemConfig) -> None:
        """Raise :class:`LayoutError` naming the violated invariant, if any."""
        x_min, x_max = waveguide_span(self.role, cfg)
        tol = _REL_TOL * max(1.0, x_max - x_min)
        locs = np.asarray(self.locations)
        if locs[0] < x_min - tol or locs[-1] > x_max + tol:
            raise LayoutError(
                f"locations must lie within the {self.role.value} span "
                f"[{x_min:.6g}, {x_max:.6g}] m"
            )
        gaps = np.diff(locs)
        if len(gaps) and np.min(gaps) < cfg.min_spacing * (1.0 - _REL_TOL):
            raise LayoutError(
                f"consecutive gaps must be >= min_spacing ({cfg.min_spacing:.6g} m); "
                f"smallest gap is {float(np.min(gaps)):.6g} m"
            )


def waveguide_length(role: WaveguideRole, cfg: SystemConfig) -> float:
    return cfg.tx_length if role is WaveguideRole.TRANSMIT else cfg.rx_length


def waveguide_span(role: WaveguideRole, cfg: SystemConfig) -> tuple[float, float]:
    half = waveguide_length(role, cfg) / 2.0
    return -half, half


def element_y(role: WaveguideRole, cfg: SystemConfig) -> float:
    return 0.0 if role is WaveguideRole.TRANSMIT else cfg.waveguide_offset


def _distances(role: WaveguideRole, ells: np.ndarray, u: Vec3,
               cfg: SystemConfig) -> np.ndarray:
    dy = element_y(role, cfg) - u.y
    dz = cfg.altitude - u.z
    return np.sqrt((ells - u.x) ** 2 + dy * dy + dz * dz)


def distance_to_element(role: WaveguideRole, ell: float, u: Vec3,
                        cfg: SystemConfig) -> float:
    """Euclidean distance from the element at location ``ell`` to ``u``."""
    d = float(_distances(role, np.asarray([ell], dtype=float), u, cfg)[0])
    if d == 0.0:
        raise GeometryError("singular geometry: point coincides with the element")
    return d


def element_gains(role: WaveguideRole, locations, u: Vec3,
                  cfg: SystemConfig) -> np.ndarray:
    """Complex gains of individual elements at ``locations`` toward ``u``."""
    ells = np.asarray(locations, dtype=float)
    d = _distances(role, ells, u, cfg)
    if np.any(d == 0.0):
        raise GeometryError("singular geometry: point coincides with an element")
    amplitude = cfg.element_amplitude / d
    if role is WaveguideRole.TRANSMIT:
        amplitude = amplitude / math.sqrt(cfg.n_tx)
    phase = -cfg.wavenumber * (d + cfg.refractive_index * ells)
    return amplitude * np.exp(1j * phase)


def element_gain_tx(ell: float, u: Vec3, cfg: SystemConfig) -> complex:
    """Channel from a transmit element at ``ell`` to the point ``u``."""
    return complex(element_gains(WaveguideRole.TRANSMIT, [ell], u, cfg)[0])


def element_gain_rx(ell: float, u: Vec3, cfg: SystemConfig) -> complex:
    """Channel from an emitter at ``u`` to a receive element at ``ell``."""
    return complex(element_gains(WaveguideRole.RECEIVE, [ell], u, cfg)[0])


def aggregate_gain(role: WaveguideRole, layout: PinchingLayout, u: Vec3,
                   cfg: SystemConfig) -> complex:
    """Coherent sum of the element gains of ``layout`` toward ``u``."""
    if layout.role is not role:
        raise LayoutError(f"layout role {layout.role.value!r} does not match {role.value!r}")
    return complex(np.sum(element_gains(role, layout.locations, u, cfg)))


def cascade_gain(l_tx: PinchingLayout, l_rx: PinchingLayout, u: Vec3,
                 cfg: SystemConfig) -> complex:
    """Transmit-to-receive channel through a reflector at ``u``."""
    g_tx = aggregate_gain(WaveguideRole.TRANSMIT, l_tx, u, cfg)
    g_rx = aggregate_gain(WaveguideRole.RECEIVE, l_rx, u, cfg)
    return g_tx * g_rx


def uniform_layout(role: WaveguideRole, count: int, cfg: SystemConfig) -> PinchingLayout:
    """``count`` elements evenly spread over the span (cell centers)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    x_min, _ = waveguide_span(role, cfg)
    length = waveguide_length(role, cfg)
    locs = x_min + (np.arange(count) + 0.5) * (length / count)
    return project_feasible(PinchingLayout(role, tuple(locs)), cfg)


def _satisfies(locs: np.ndarray, cfg: SystemConfig, x_min: float, x_max: float) -> bool:
    tol = _REL_TOL * max(1.0, x_max - x_min)
    if locs[0] < x_min - tol or locs[-1] > x_max + tol:
        return False
    gaps = np.diff(locs)
    if len(gaps) == 0:
        return True
    return bool(np.all(gaps > 0.0) and np.min(gaps) >= cfg.min_spacing * (1.0 - _REL_TOL))


def _merge_groups(locs: np.ndarray, min_spacing: float) -> list[np.ndarray]:
    """Split at gaps that already satisfy the spacing; the rest must merge."""
    gaps = np.diff(locs)
    breaks = np.nonzero(gaps >= min_spacing * (1.0 - _REL_TOL))[0]
    return np.split(locs, breaks + 1)


def _chain(center: float, count: int, spacing: float, length: float) -> np.ndarray:
    # Compress only when the span physically cannot hold the chain.
    if count > 1 and (count - 1) * spacing > length:
        spacing = length / (count - 1)
    return center + (np.arange(count) - (count - 1) / 2.0) * spacing


def project_feasible(layout: PinchingLayout, cfg: SystemConfig) -> PinchingLayout:
    """Return the nearest layout satisfying all spacing/span invariants.

    Valid layouts are returned unchanged.  Spacing violations are repaired by
    merging each offending group of elements into a single cluster-spaced
    chain centred at the group's mass center (equivalently, the size-weighted
    center of the merged clusters).  Span violations are repaired by rigidly
    shifting the whole assembly; element geometry is deformed only when a
    chain is longer than the span itself.
    """
    count = len(layout)
    x_min, x_max = waveguide_span(layout.role, cfg)
    length = x_max - x_min
    if count * cfg.min_spacing > length * (1.0 + _REL_TOL):
        raise FeasibilityError(
            f"waveguide too short: {count} elements at spacing >= "
            f"{cfg.min_spacing:.6g} m do not fit a {length:.6g} m span"
        )

    locs = np.asarray(layout.locations, dtype=float)
    if _satisfies(locs, cfg, x_min, x_max):
        return layout

    for _ in range(count + 2):
        gaps = np.diff(locs)
        if len(gaps) and np.min(gaps) < cfg.min_spacing * (1.0 - _REL_TOL):
            rebuilt = []
            for group in _merge_groups(locs, cfg.min_spacing):
                if len(group) == 1:
                    rebuilt.append(group)
                else:
                    rebuilt.append(_chain(float(np.mean(group)), len(group),
                                          cfg.cluster_spacing, length))
            locs = np.sort(np.concatenate(rebuilt))
            continue
        spread = locs[-1] - locs[0]
        if spread > length:
            locs = np.sort(_chain(float(np.mean(locs)), count,
                                  cfg.cluster_spacing, length))
        if locs[0] < x_min:
            locs = locs + (x_min - locs[0])
        elif locs[-1] > x_max:
            locs = locs - (locs[-1] - x_max)
        if _satisfies(locs, cfg, x_min, x_max):
            return PinchingLayout(layout.role, tuple(locs))

    raise FeasibilityError("projection failed to produce a feasible layout")
