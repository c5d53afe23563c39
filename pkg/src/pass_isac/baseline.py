"""Fixed half-wavelength arrays with analog (unit-modulus) beamforming.

The comparison baseline keeps all elements at the waveguide centers and
steers with per-element phase shifters.  Weights are drawn from a
one-parameter family that interpolates per-element phases between the
conjugate match toward the user and the conjugate match toward the target;
the blend angle is selected by grid search on the exact objective.  Sides
without a communication/sensing trade-off (the receive side in the downlink,
the transmit side in the uplink) use the conjugate match toward the target,
which is their exact maximizer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .geometry import (
    FeasibilityError,
    PinchingLayout,
    Scene,
    SystemConfig,
    Vec3,
    WaveguideRole,
    element_gains,
    waveguide_length,
)
from .metrics import (
    IsacWeights,
    make_report,
    smi_bound_from_gain_sq,
    spectral_efficiency_from_gain_sq,
)
from .solution import DesignSolution
from .uplink import q_star

logger = logging.getLogger(__name__)

_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class AnalogWeights:
    """Per-element unit-modulus beamforming weights."""

    values: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))
        moduli = np.abs(np.asarray(self.values))
        if np.any(np.abs(moduli - 1.0) > _UNIT_TOL):
            raise ValueError("analog weights must have unit modulus")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=complex)


def baseline_layout(count: int, cfg: SystemConfig, role: WaveguideRole) -> PinchingLayout:
    """Half-wavelength array symmetric about the waveguide center."""
    if count < 1:
        raise ValueError("count must be >= 1")
    spacing = cfg.wavelength / 2.0
    offsets = (np.arange(1, count + 1) - (count + 1) / 2.0) * spacing
    if count > 1 and (count - 1) * spacing > waveguide_length(role, cfg):
        raise FeasibilityError("waveguide too short for the fixed array")
    return PinchingLayout(role, tuple(offsets))


def conjugate_match_weights(layout: PinchingLayout, u: Vec3,
                            cfg: SystemConfig) -> AnalogWeights:
    """Weights that align every element phase toward ``u``."""
    gains = element_gains(layout.role, layout.locations, u, cfg)
    return AnalogWeights(tuple(np.exp(-1j * np.angle(gains))))


def blend_weights(layout: PinchingLayout, scene: Scene, theta: float,
                  cfg: SystemConfig) -> AnalogWeights:
    """Per-element phase interpolation between the user match (theta = 0)
    and the target match (theta = 1), along the shorter arc."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    phi_user, delta = _blend_phases(layout, scene, cfg)
    return AnalogWeights(tuple(np.exp(1j * (phi_user + theta * delta))))


def beamform_gain(layout: PinchingLayout, weights: AnalogWeights, u: Vec3,
                  cfg: SystemConfig, role: WaveguideRole) -> complex:
    """Weighted coherent sum of the element gains toward ``u``."""
    if layout.role is not role:
        raise ValueError(f"layout role {layout.role.value!r} does not match {role.value!r}")
    if len(weights.values) != len(layout):
        raise ValueError("weights and layout must have the same length")
    gains = element_gains(role, layout.locations, u, cfg)
    return complex(np.sum(weights.as_array() * gains))


def _blend_phases(layout: PinchingLayout, scene: Scene, cfg: SystemConfig):
    g_user = element_gains(layout.role, layout.locations, scene.user, cfg)
    g_target = element_gains(layout.role, layout.locations, scene.target, cfg)
    phi_user = -np.angle(g_user)
    phi_target = -np.angle(g_target)
    delta = np.angle(np.exp(1j * (phi_target - phi_user)))
    return phi_user, delta


def _blend_gain_curves(layout: PinchingLayout, scene: Scene, cfg: SystemConfig,
                       thetas: np.ndarray):
    """|G(theta, user)|^2 and |G(theta, target)|^2 over a theta grid."""
    g_user = element_gains(layout.role, layout.locations, scene.user, cfg)
    g_target = element_gains(layout.role, layout.locations, scene.target, cfg)
    phi_user, delta = _blend_phases(layout, scene, cfg)
    rotation = np.exp(1j * np.outer(thetas, delta))  # (n_theta, n_elements)
    toward_user = rotation @ (np.exp(1j * phi_user) * g_user)
    toward_target = rotation @ (np.exp(1j * phi_user) * g_target)
    return np.abs(toward_user) ** 2, np.abs(toward_target) ** 2


def _power_objective_batch(q, g_user_sq, g_target_sq, weights: IsacWeights,
                           cfg: SystemConfig):
    noise = cfg.noise_rx_ul
    interference = cfg.rcs_variance * g_target_sq * q + noise
    comm = weights.communication * np.log1p(g_user_sq * cfg.p_c_max / interference)
    sense = (weights.sensing / cfg.frame_length) * np.log1p(
        cfg.rcs_variance * g_target_sq * cfg.frame_length * q / noise)
    return comm + sense


def _q_star_batch(g_user_sq: np.ndarray, g_target_sq: np.ndarray, q_max: float,
                  weights: IsacWeights, cfg: SystemConfig):
    """Vectorized best scaled sensing power per (user, target) gain pair."""
    n = len(g_user_sq)
    candidates = [np.zeros(n), np.full(n, q_max)]
    if weights.sensing > 0.0:
        a = weights.sensing
        a_sig = g_user_sq * cfg.p_c_max
        noise = cfg.noise_rx_ul
        t = float(cfg.frame_length)
        b = a_sig * (weights.sensing - weights.communication * t)
        c = a_sig * weights.communication * (t - 1.0) * noise
        disc = b * b - 4.0 * a * c
        valid = disc >= 0.0
        sq = np.sqrt(np.where(valid, disc, 0.0))
        r1 = np.where(b >= 0.0, -b - sq, -b + sq) / (2.0 * a)
        with np.errstate(divide="ignore", invalid="ignore"):
            r2 = np.where(r1 != 0.0, c / (a * r1), -b / a - r1)
            for root in (r1, r2):
                q = (root - noise) / (cfg.rcs_variance * g_target_sq)
                q = np.where(valid & (root > noise) & (g_target_sq > 0.0), q, 0.0)
                candidates.append(np.clip(np.nan_to_num(q), 0.0, q_max))
    stacked = np.stack(candidates)
    values = _power_objective_batch(stacked, g_user_sq[None, :],
                                    g_target_sq[None, :], weights, cfg)
    best = np.argmax(values, axis=0)
    cols = np.arange(n)
    return stacked[best, cols], values[best, cols]


def baseline_design(scene: Scene, weights: IsacWeights, cfg: SystemConfig,
                    link: str) -> DesignSolution:
    """Fixed-array design with blended phase-match beamforming."""
    if link not in ("downlink", "uplink"):
        raise ValueError("link must be 'downlink' or 'uplink'")
    l_tx = baseline_layout(cfg.n_tx, cfg, WaveguideRole.TRANSMIT)
    l_rx = baseline_layout(cfg.n_rx, cfg, WaveguideRole.RECEIVE)
    thetas = np.linspace(0.0, 1.0, cfg.grid_resolution)

    if link == "downlink":
        rx_weights = conjugate_match_weights(l_rx, scene.target, cfg)
        g_rx_target_sq = abs(
            beamform_gain(l_rx, rx_weights, scene.target, cfg, WaveguideRole.RECEIVE)) ** 2
        gain_user, gain_target = _blend_gain_curves(l_tx, scene, cfg, thetas)
        objective = (
            weights.communication
            * spectral_efficiency_from_gain_sq(gain_user, cfg.p_max, cfg.noise_user)
            + weights.sensing
            * smi_bound_from_gain_sq(gain_target * g_rx_target_sq, cfg.p_max,
                                     cfg.noise_rx_dl, cfg)
        )
        idx = int(np.argmax(objective))
        theta_tx = float(thetas[idx])
        tx_weights = blend_weights(l_tx, scene, theta_tx, cfg)
        se = float(spectral_efficiency_from_gain_sq(gain_user[idx], cfg.p_max,
                                                    cfg.noise_user))
        smi = float(smi_bound_from_gain_sq(gain_target[idx] * g_rx_target_sq,
                                           cfg.p_max, cfg.noise_rx_dl, cfg))
        return DesignSolution(
            method="baseline",
            link="downlink",
            tx_layout=l_tx,
            rx_layout=l_rx,
            power=cfg.p_max,
            report=make_report(se, smi, weights),
            extras={"theta_tx": theta_tx, "theta_rx": 1.0,
                    "tx_weights": tx_weights, "rx_weights": rx_weights},
        )

    # Uplink: the transmit array only illuminates the target; the receive
    # blend trades user reception against target reception.
    tx_weights = conjugate_match_weights(l_tx, scene.target, cfg)
    g_tx_target_sq = abs(
        beamform_gain(l_tx, tx_weights, scene.target, cfg, WaveguideRole.TRANSMIT)) ** 2
    q_max = g_tx_target_sq * cfg.p_s_max
    gain_user, gain_target = _blend_gain_curves(l_rx, scene, cfg, thetas)
    _, objective = _q_star_batch(gain_user, gain_target, q_max, weights, cfg)
    idx = int(np.argmax(objective))
    theta_rx = float(thetas[idx])
    rx_weights = blend_weights(l_rx, scene, theta_rx, cfg)

    qsol = q_star(float(gain_user[idx]), float(gain_target[idx]), q_max, weights, cfg)
    p_s = 0.0 if g_tx_target_sq == 0.0 else min(qsol.q_star / g_tx_target_sq, cfg.p_s_max)
    interference = cfg.rcs_variance * gain_target[idx] * g_tx_target_sq * p_s
    se = float(np.log1p(gain_user[idx] * cfg.p_c_max / (interference + cfg.noise_rx_ul)))
    smi = float(smi_bound_from_gain_sq(gain_target[idx] * g_tx_target_sq, p_s,
                                       cfg.noise_rx_ul, cfg))
    return DesignSolution(
        method="baseline",
        link="uplink",
        tx_layout=l_tx,
        rx_layout=l_rx,
        power=cfg.p_c_max,
        sensing_power=p_s,
        report=make_report(se, smi, weights),
        q_solution=qsol,
        extras={"theta_tx": 1.0, "theta_rx": theta_rx,
                "tx_weights": tx_weights, "rx_weights": rx_weights},
    )
