"""Spectral efficiency, sensing-rate bounds, and scalarized objectives.

All rates are in nats internally (natural log); CSV writers also emit bits.
The sensing metric is the per-sample mutual information between the received
reflections and the target reflectivity, upper-bounded by moving the
expectation over the waveform energy inside the log (Jensen).  A Monte-Carlo
estimator of the exact expectation is provided to validate the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    PinchingLayout,
    Scene,
    SystemConfig,
    WaveguideRole,
    aggregate_gain,
    cascade_gain,
)

LN2 = math.log(2.0)

WAVEFORM_LAWS = ("gaussian-iid", "constant-modulus")


@dataclass(frozen=True)
class IsacWeights:
    """Scalarization weights: ``communication`` for the spectral efficiency,
    ``sensing`` for the sensing-rate bound."""

    communication: float
    sensing: float

    def __post_init__(self) -> None:
        if self.communication < 0.0 or self.sensing < 0.0:
            raise ValueError("weights must be nonnegative")
        if self.communication + self.sensing <= 0.0:
            raise ValueError("at least one weight must be positive")

    @property
    def sensing_ratio(self) -> float:
        """sensing/communication; only defined when communication > 0."""
        if self.communication == 0.0:
            raise ZeroDivisionError("sensing_ratio undefined for zero communication weight")
        return self.sensing / self.communication


@dataclass(frozen=True)
class MetricReport:
    """Achieved metrics of one configuration, in nats (per channel use for
    the spectral efficiency, per sample for the sensing bound)."""

    spectral_efficiency: float
    smi_bound: float
    weighted: float

    def __post_init__(self) -> None:
        for name in ("spectral_efficiency", "smi_bound", "weighted"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"MetricReport.{name}: must be finite and nonnegative")


@dataclass(frozen=True)
class SmiEstimate:
    """Monte-Carlo estimate of the exact sensing rate."""

    estimate: float
    stderr: float
    n_draws: int
    law: str


def spectral_efficiency_from_gain_sq(gain_sq: float, power: float, noise: float):
    return np.log1p(power * gain_sq / noise)


def _smi_from_energy(gain_sq, energy, noise: float, cfg: SystemConfig):
    # Shared by the closed-form bound (energy = T*P) and the Monte-Carlo
    # estimator (energy = per-draw waveform energy) so that a deterministic
    # waveform reproduces the bound bit for bit.
    snr = cfg.rcs_variance * gain_sq * energy / noise
    return np.log1p(snr) / cfg.frame_length


def smi_bound_from_gain_sq(gain_sq: float, power: float, noise: float,
                           cfg: SystemConfig):
    return _smi_from_energy(gain_sq, cfg.frame_length * power, noise, cfg)


def dl_spectral_efficiency(l_tx: PinchingLayout, power: float, scene: Scene,
                           cfg: SystemConfig) -> float:
    """Downlink rate: log(1 + P |G_tx(user)|^2 / noise_user)."""
    if power < 0.0:
        raise ValueError("power must be nonnegative")
    g = aggregate_gain(WaveguideRole.TRANSMIT, l_tx, scene.user, cfg)
    return float(spectral_efficiency_from_gain_sq(abs(g) ** 2, power, cfg.noise_user))


def dl_smi_bound(l_tx: PinchingLayout, l_rx: PinchingLayout, power: float,
                 scene: Scene, cfg: SystemConfig) -> float:
    """Downlink sensing bound: (1/T) log(1 + rcs T P |G(target)|^2 / noise)."""
    if power < 0.0:
        raise ValueError("power must be nonnegative")
    g = cascade_gain(l_tx, l_rx, scene.target, cfg)
    return float(smi_bound_from_gain_sq(abs(g) ** 2, power, cfg.noise_rx_dl, cfg))


def ul_spectral_efficiency(l_tx: PinchingLayout, l_rx: PinchingLayout,
                           p_c: float, p_s: float, scene: Scene,
                           cfg: SystemConfig) -> float:
    """Uplink rate with the sensing reflection treated as noise."""
    if p_c < 0.0 or p_s < 0.0:
        raise ValueError("powers must be nonnegative")
    g_user = aggregate_gain(WaveguideRole.RECEIVE, l_rx, scene.user, cfg)
    g_cascade = cascade_gain(l_tx, l_rx, scene.target, cfg)
    interference = cfg.rcs_variance * abs(g_cascade) ** 2 * p_s
    return float(np.log1p(abs(g_user) ** 2 * p_c / (interference + cfg.noise_rx_ul)))


def ul_smi_bound(l_tx: PinchingLayout, l_rx: PinchingLayout, p_s: float,
                 scene: Scene, cfg: SystemConfig) -> float:
    """Uplink sensing bound after interference cancellation."""
    if p_s < 0.0:
        raise ValueError("p_s must be nonnegative")
    g = cascade_gain(l_tx, l_rx, scene.target, cfg)
    return float(smi_bound_from_gain_sq(abs(g) ** 2, p_s, cfg.noise_rx_ul, cfg))


def weighted_objective(spectral_efficiency: float, smi_bound: float,
                       weights: IsacWeights) -> float:
    return weights.communication * spectral_efficiency + weights.sensing * smi_bound


def make_report(spectral_efficiency: float, smi_bound: float,
                weights: IsacWeights) -> MetricReport:
    return MetricReport(
        spectral_efficiency=spectral_efficiency,
        smi_bound=smi_bound,
        weighted=weighted_objective(spectral_efficiency, smi_bound, weights),
    )


def mc_smi_estimate(l_tx: PinchingLayout, l_rx: PinchingLayout, power: float,
                    scene: Scene, cfg: SystemConfig,
                    waveform_law: str = "gaussian-iid",
                    n_draws: int = 100_000,
                    rng: np.random.Generator | None = None,
                    noise_variance: float | None = None) -> SmiEstimate:
    """Monte-Carlo estimate of the exact per-sample sensing rate.

    Draws waveform energies with mean T*power and averages the log term.
    ``gaussian-iid`` draws i.i.d. circularly symmetric Gaussian samples of
    per-sample power ``power`` (the energy is then a scaled chi-square), so
    the Jensen gap is strictly positive.  ``constant-modulus`` waveforms have
    deterministic energy T*power, making the estimate equal the closed-form
    bound with zero variance.
    """
    if waveform_law not in WAVEFORM_LAWS:
        raise ValueError(f"waveform_law must be one of {WAVEFORM_LAWS}")
    if n_draws < 1:
        raise ValueError("n_draws must be >= 1")
    if power < 0.0:
        raise ValueError("power must be nonnegative")
    if rng is None:
        rng = np.random.default_rng()
    noise = cfg.noise_rx_dl if noise_variance is None else noise_variance
    g = cascade_gain(l_tx, l_rx, scene.target, cfg)

    if waveform_law == "constant-modulus":
        # The waveform energy is deterministic, so every draw evaluates to
        # the closed-form bound; skip the averaging to keep the equality
        # exact in floating point.
        value = float(_smi_from_energy(abs(g) ** 2, cfg.frame_length * power,
                                       noise, cfg))
        return SmiEstimate(estimate=value, stderr=0.0, n_draws=n_draws,
                           law=waveform_law)

    # |x_t|^2 of a CN(0, power) sample is exponential with mean power.
    energies = rng.exponential(scale=power, size=(n_draws, cfg.frame_length)).sum(axis=1) \
        if power > 0.0 else np.zeros(n_draws)
    values = _smi_from_energy(abs(g) ** 2, energies, noise, cfg)
    estimate = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(n_draws)) if n_draws > 1 else 0.0
    return SmiEstimate(estimate=estimate, stderr=stderr, n_draws=n_draws, law=waveform_law)
