"""Brute-force reference computations for desk-scale validation.

Every oracle is a pure function of its inputs and a seed, so repeated runs
are bit-identical.  These searches stay deliberately independent of the
closed forms they check: partitions are enumerated, powers are grid-swept,
and tiny instances are solved by exhaustive search over a location lattice.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .downlink import (
    scalarized_objective_dl,
    split_cluster_layout,
    tx_gain_objective,
)
from .geometry import (
    PassIsacError,
    PinchingLayout,
    Scene,
    SystemConfig,
    WaveguideRole,
    aggregate_gain,
    waveguide_span,
)
from .metrics import IsacWeights, mc_smi_estimate, smi_bound_from_gain_sq
from .uplink import (
    q_star,
    recover_sensing_power,
    scalarized_objective_ul,
    tx_design_ul,
)


class OracleRefusalError(PassIsacError):
    """The requested instance exceeds the desk-scale guard."""


@dataclass(frozen=True)
class ValidationRecord:
    name: str
    digest: str
    passed: bool
    gap: float
    detail: str


def _digest(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def exhaustive_partition(scene: Scene, weights: IsacWeights, cfg: SystemConfig,
                         link: str) -> tuple[int, float]:
    """Best template split by direct enumeration, with exact channels.

    Downlink: enumerates the transmit split under the weighted-gain transmit
    objective (the quantity the split surrogate approximates).  Uplink:
    enumerates the receive split under the exact scalarized rate objective,
    with the target-clustered transmit layout and per-split sensing power.
    """
    if link == "downlink":
        best_n1, best_obj = 0, -math.inf
        for n1 in range(cfg.n_tx + 1):
            l_tx = split_cluster_layout(scene.user.x, n1, scene.target.x,
                                        cfg.n_tx, cfg, WaveguideRole.TRANSMIT)
            obj = tx_gain_objective(l_tx, scene, weights, cfg)
            if obj > best_obj:
                best_n1, best_obj = n1, obj
        return best_n1, best_obj

    if link == "uplink":
        l_tx = tx_design_ul(scene, cfg)
        q_max = abs(aggregate_gain(WaveguideRole.TRANSMIT, l_tx,
                                   scene.target, cfg)) ** 2 * cfg.p_s_max
        best_m1, best_obj = 0, -math.inf
        for m1 in range(cfg.n_rx + 1):
            l_rx = split_cluster_layout(scene.user.x, m1, scene.target.x,
                                        cfg.n_rx, cfg, WaveguideRole.RECEIVE)
            g_user = abs(aggregate_gain(WaveguideRole.RECEIVE, l_rx, scene.user, cfg)) ** 2
            g_target = abs(aggregate_gain(WaveguideRole.RECEIVE, l_rx, scene.target, cfg)) ** 2
            qsol = q_star(g_user, g_target, q_max, weights, cfg, validate_grid=False)
            p_s = recover_sensing_power(qsol.q_star, l_tx, scene, cfg)
            obj = scalarized_objective_ul(l_tx, l_rx, p_s, scene, weights, cfg)
            if obj > best_obj:
                best_m1, best_obj = m1, obj
        return best_m1, best_obj

    raise ValueError("link must be 'downlink' or 'uplink'")


def grid_search_power(objective, q_max: float, resolution: int) -> tuple[float, float]:
    """Uniform-grid maximization on [0, q_max] including both endpoints."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    grid = np.linspace(0.0, q_max, resolution)
    values = np.asarray(objective(grid), dtype=float)
    idx = int(np.argmax(values))
    return float(grid[idx]), float(values[idx])


def _lattice(role: WaveguideRole, cfg: SystemConfig, points: int) -> np.ndarray:
    lo, hi = waveguide_span(role, cfg)
    return np.linspace(lo, hi, points)


def _feasible_tuples(lattice: np.ndarray, count: int, min_spacing: float):
    for combo in itertools.combinations(range(len(lattice)), count):
        locs = lattice[list(combo)]
        if count == 1 or np.all(np.diff(locs) >= min_spacing):
            yield tuple(float(v) for v in locs)


def snap_to_lattice(layout: PinchingLayout, cfg: SystemConfig,
                    points: int) -> PinchingLayout:
    """Nearest-lattice-point version of ``layout`` (ties toward the lower
    index); used to compare algorithm outputs against lattice searches."""
    lattice = _lattice(layout.role, cfg, points)
    idx = sorted({int(np.argmin(np.abs(lattice - loc))) for loc in layout.locations})
    if len(idx) != len(layout):
        raise OracleRefusalError("snapping collapsed distinct elements; lattice too coarse")
    return PinchingLayout(layout.role, tuple(float(lattice[i]) for i in idx))


def joint_layout_grid_search(scene: Scene, weights: IsacWeights,
                             cfg: SystemConfig, link: str,
                             grid_points_per_element: int):
    """Exhaustive search over lattice placements of both waveguides.

    Guarded to tiny instances (at most two elements per side, at most 64
    lattice points).  Returns ``((l_tx, l_rx), objective)`` with ties broken
    toward the lexicographically smallest pair of location tuples.
    """
    if cfg.n_tx > 2 or cfg.n_rx > 2:
        raise OracleRefusalError("instance too large: at most 2 elements per waveguide")
    if grid_points_per_element > 64 or grid_points_per_element < 2:
        raise OracleRefusalError("grid_points_per_element must lie in [2, 64]")

    tx_lattice = _lattice(WaveguideRole.TRANSMIT, cfg, grid_points_per_element)
    rx_lattice = _lattice(WaveguideRole.RECEIVE, cfg, grid_points_per_element)
    tx_candidates = list(_feasible_tuples(tx_lattice, cfg.n_tx, cfg.min_spacing))
    rx_candidates = list(_feasible_tuples(rx_lattice, cfg.n_rx, cfg.min_spacing))

    if link == "uplink":
        l_tx_star = tx_design_ul(scene, cfg)
        q_max_global = abs(aggregate_gain(WaveguideRole.TRANSMIT, l_tx_star,
                                          scene.target, cfg)) ** 2 * cfg.p_s_max

    best = None
    for tx_locs in tx_candidates:
        l_tx = PinchingLayout(WaveguideRole.TRANSMIT, tx_locs)
        for rx_locs in rx_candidates:
            l_rx = PinchingLayout(WaveguideRole.RECEIVE, rx_locs)
            if link == "downlink":
                obj = scalarized_objective_dl(l_tx, l_rx, scene, weights, cfg)
            else:
                g_user = abs(aggregate_gain(WaveguideRole.RECEIVE, l_rx,
                                            scene.user, cfg)) ** 2
                g_target = abs(aggregate_gain(WaveguideRole.RECEIVE, l_rx,
                                              scene.target, cfg)) ** 2
                g_tx_t = abs(aggregate_gain(WaveguideRole.TRANSMIT, l_tx,
                                            scene.target, cfg)) ** 2
                q_max = min(q_max_global, g_tx_t * cfg.p_s_max)
                qsol = q_star(g_user, g_target, q_max, weights, cfg,
                              validate_grid=False)
                p_s = 0.0 if g_tx_t == 0.0 else qsol.q_star / g_tx_t
                obj = scalarized_objective_ul(l_tx, l_rx, p_s, scene, weights, cfg)
            key = (-obj, tx_locs, rx_locs)
            if best is None or key < best[0]:
                best = (key, (l_tx, l_rx), obj)
    assert best is not None
    return best[1], best[2]


def jensen_check(configurations, n_draws: int,
                 rng: np.random.Generator) -> list[ValidationRecord]:
    """Check the closed-form sensing bound against Monte-Carlo estimates.

    Each configuration is a ``(l_tx, l_rx, power, scene, cfg)`` tuple.  The
    Gaussian law must stay below bound + 3 stderr; the constant-modulus law
    must match the bound exactly.
    """
    records = []
    for i, (l_tx, l_rx, power, scene, cfg) in enumerate(configurations):
        g = abs(aggregate_gain(WaveguideRole.TRANSMIT, l_tx, scene.target, cfg)
                * aggregate_gain(WaveguideRole.RECEIVE, l_rx, scene.target, cfg)) ** 2
        bound = float(smi_bound_from_gain_sq(g, power, cfg.noise_rx_dl, cfg))
        digest = _digest({"locs_tx": list(l_tx.locations),
                          "locs_rx": list(l_rx.locations),
                          "power": power, "index": i})

        gaussian = mc_smi_estimate(l_tx, l_rx, power, scene, cfg,
                                   waveform_law="gaussian-iid",
                                   n_draws=n_draws, rng=rng)
        gap = bound - gaussian.estimate
        records.append(ValidationRecord(
            name=f"jensen-gaussian-{i}",
            digest=digest,
            passed=gaussian.estimate <= bound + 3.0 * gaussian.stderr,
            gap=gap,
            detail=f"estimate={gaussian.estimate:.9g} bound={bound:.9g} "
                   f"stderr={gaussian.stderr:.3g}",
        ))

        constant = mc_smi_estimate(l_tx, l_rx, power, scene, cfg,
                                   waveform_law="constant-modulus",
                                   n_draws=max(2, min(n_draws, 100)), rng=rng)
        records.append(ValidationRecord(
            name=f"jensen-constant-modulus-{i}",
            digest=digest,
            passed=constant.estimate == bound,
            gap=bound - constant.estimate,
            detail=f"estimate={constant.estimate:.9g} bound={bound:.9g}",
        ))
    return records
