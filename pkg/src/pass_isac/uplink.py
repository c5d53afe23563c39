"""Uplink design: block-coordinate alternation between the transmit side
(with a closed-form scaled sensing power) and the receive-side bi-partition.

The sensing power enters only through Q = |G_tx(target)|^2 * P_s, so the
transmit marginal reduces to a one-dimensional problem in Q on [0, Q_max].
Stationary points of the scalarized objective in Q solve a quadratic in the
shifted variable q = rcs * |G_rx(target)|^2 * Q + noise; the candidate set
{0, Q_max, interior stationary points} therefore contains the exact
maximizer.  A grid check at the configured resolution arbitrates against
numerical surprises and flags any disagreement.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .downlink import (
    blend_gain_sq,
    maximize_scalar,
    phase_factor,
    place_cluster,
    split_cluster_layout,
)
from .geometry import (
    PinchingLayout,
    Scene,
    SystemConfig,
    WaveguideRole,
    aggregate_gain,
    distance_to_element,
    uniform_layout,
)
from .metrics import IsacWeights, make_report, ul_smi_bound, ul_spectral_efficiency
from .solution import DesignSolution

logger = logging.getLogger(__name__)

BCD_MAX_ITERATIONS = 20
BCD_REL_TOL = 1e-6
_GRID_SLACK = 1e-9  # nats


@dataclass(frozen=True)
class QSolution:
    """Chosen scaled sensing power Q and how it was selected.

    ``q0`` is the nonnegative root of the stated quadratic when it exists
    (it does not for frame lengths above one, which forces a boundary or
    stationary-point branch).  ``grid_flagged`` records that the grid check
    beat every closed-form candidate by more than the tolerance; the grid
    value is then returned.
    """

    q_star: float
    branch: str  # "interior" | "boundary-zero" | "boundary-max"
    q0: float | None
    objective: float
    grid_flagged: bool = False


@dataclass(frozen=True)
class BcdTrace:
    """Per-iteration exact objective values of the alternation.

    ``cycle_detected`` marks convergence declared because the iterate state
    recurred exactly; the deterministic update then repeats forever and the
    best iterate cannot improve.
    """

    objectives: tuple[float, ...]
    converged: bool
    cycle_detected: bool = False

    @property
    def iterations(self) -> int:
        return len(self.objectives)


def tx_design_ul(scene: Scene, cfg: SystemConfig) -> PinchingLayout:
    """Transmit side: all elements clustered over the target."""
    return place_cluster(scene.target.x, cfg.n_tx, cfg, WaveguideRole.TRANSMIT)


def power_objective_ul(q, g_user_sq: float, g_target_sq: float,
                       weights: IsacWeights, cfg: SystemConfig):
    """Scalarized uplink objective as a function of the scaled sensing power
    Q, for fixed receive gains.  Vectorized in ``q``."""
    q = np.asarray(q, dtype=float)
    noise = cfg.noise_rx_ul
    interference = cfg.rcs_variance * g_target_sq * q + noise
    comm = weights.communication * np.log1p(g_user_sq * cfg.p_c_max / interference)
    sense = (weights.sensing / cfg.frame_length) * np.log1p(
        cfg.rcs_variance * g_target_sq * cfg.frame_length * q / noise)
    return comm + sense


def _quadratic_roots(a: float, b: float, c: float) -> tuple[float, ...]:
    """Real roots of a*x^2 + b*x + c, numerically stable."""
    if a == 0.0:
        if b == 0.0:
            return ()
        return (-c / b,)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return ()
    sq = math.sqrt(disc)
    if b >= 0.0:
        r1 = (-b - sq) / (2.0 * a)
    else:
        r1 = (-b + sq) / (2.0 * a)
    if r1 == 0.0:
        return (0.0, -b / a)
    return (r1, c / (a * r1))


def q_quadratic_root(g_rx_user_sq: float, g_rx_target_sq: float,
                     weights: IsacWeights, cfg: SystemConfig) -> float | None:
    """Nonnegative root of w2*q^2 + A*(q - rho) = 0 with
    A = |G_rx(user)|^2 * P_c_max and rho = w1 * noise * (1 - T).

    Returns the largest real root when it is nonnegative, else ``None``.
    Only the user-side gain enters; the target-side gain is accepted for
    interface symmetry with :func:`q_star`.
    """
    del g_rx_target_sq
    a = g_rx_user_sq * cfg.p_c_max
    rho = weights.communication * cfg.noise_rx_ul * (1.0 - cfg.frame_length)
    roots = _quadratic_roots(weights.sensing, a, -a * rho)
    nonneg = [r for r in roots if r >= 0.0]
    if not nonneg:
        return None
    return max(nonneg)


def _stationary_q_candidates(g_user_sq: float, g_target_sq: float,
                             weights: IsacWeights, cfg: SystemConfig) -> list[float]:
    # Stationarity of the Q-objective in the shifted variable
    # u = rcs * g_target * Q + noise:
    #   w2*u^2 + A*(w2 - w1*T)*u + A*w1*(T - 1)*noise^2 = 0,  A = g_user*P_c.
    if weights.sensing == 0.0 or g_target_sq == 0.0:
        return []
    a_sig = g_user_sq * cfg.p_c_max
    noise = cfg.noise_rx_ul
    t = float(cfg.frame_length)
    roots = _quadratic_roots(
        weights.sensing,
        a_sig * (weights.sensing - weights.communication * t),
        a_sig * weights.communication * (t - 1.0) * noise,
    )
    scale = cfg.rcs_variance * g_target_sq
    return [(u - noise) / scale for u in roots if u > noise]


def q_star(g_rx_user_sq: float, g_rx_target_sq: float, q_max: float,
           weights: IsacWeights, cfg: SystemConfig,
           validate_grid: bool = True) -> QSolution:
    """Maximize the scalarized objective over the scaled sensing power.

    Candidates are the two boundary points, the closed-form root candidate
    when it exists, and the interior stationary points.  With
    ``validate_grid`` a uniform grid at the configured resolution acts as an
    arbiter: if it beats the best candidate by more than 1e-9 nats, the grid
    value wins and the solution is flagged.
    """
    if q_max < 0.0:
        raise ValueError("q_max must be nonnegative")

    q0 = q_quadratic_root(g_rx_user_sq, g_rx_target_sq, weights, cfg)
    candidates: list[float] = [0.0, q_max]
    if q0 is not None and g_rx_target_sq > 0.0:
        q_closed = (q0 - cfg.noise_rx_ul) / (cfg.rcs_variance * g_rx_target_sq)
        if 0.0 <= q_closed <= q_max:
            candidates.append(q_closed)
    candidates.extend(
        q for q in _stationary_q_candidates(g_rx_user_sq, g_rx_target_sq, weights, cfg)
        if 0.0 < q < q_max)

    values = power_objective_ul(np.asarray(candidates), g_rx_user_sq,
                                g_rx_target_sq, weights, cfg)
    best = int(np.argmax(values))  # first max: ties prefer the smaller power
    q_best = candidates[best]
    value_best = float(values[best])

    flagged = False
    if validate_grid and q_max > 0.0:
        grid = np.linspace(0.0, q_max, cfg.grid_resolution)
        grid_values = power_objective_ul(grid, g_rx_user_sq, g_rx_target_sq,
                                         weights, cfg)
        g_idx = int(np.argmax(grid_values))
        if float(grid_values[g_idx]) > value_best + _GRID_SLACK:
            logger.warning(
                "grid arbiter beat the closed-form candidates by %.3e nats; "
                "using the grid value", float(grid_values[g_idx]) - value_best)
            q_best = float(grid[g_idx])
            value_best = float(grid_values[g_idx])
            flagged = True

    if q_best == 0.0:
        branch = "boundary-zero"
    elif q_best == q_max:
        branch = "boundary-max"
    else:
        branch = "interior"
    return QSolution(q_star=q_best, branch=branch, q0=q0,
                     objective=value_best, grid_flagged=flagged)


def recover_sensing_power(q_value: float, l_tx: PinchingLayout, scene: Scene,
                          cfg: SystemConfig) -> float:
    """Transmit power realizing the scaled sensing power on ``l_tx``."""
    if q_value < 0.0:
        raise ValueError("q_value must be nonnegative")
    gain_sq = abs(aggregate_gain(WaveguideRole.TRANSMIT, l_tx, scene.target, cfg)) ** 2
    if gain_sq == 0.0:
        if q_value > 0.0:
            raise ValueError("cannot realize a positive Q with zero transmit gain")
        return 0.0
    p_s = q_value / gain_sq
    if p_s > cfg.p_s_max:
        if p_s > cfg.p_s_max * (1.0 + 1e-9):
            logger.warning("sensing power %.6g W clamped to budget %.6g W",
                           p_s, cfg.p_s_max)
        p_s = cfg.p_s_max
    return p_s


def _rx_split_geometry(scene: Scene, cfg: SystemConfig):
    rx = WaveguideRole.RECEIVE
    d_u1 = distance_to_element(rx, scene.user.x, scene.user, cfg)
    d_u2 = distance_to_element(rx, scene.target.x, scene.user, cfg)
    d_t1 = distance_to_element(rx, scene.target.x, scene.target, cfg)
    d_t2 = distance_to_element(rx, scene.user.x, scene.target, cfg)
    zeta_u = phase_factor(rx, scene.user.x, scene.target.x, scene.user, cfg)
    zeta_t = phase_factor(rx, scene.target.x, scene.user.x, scene.target, cfg)
    return d_u1, d_u2, d_t1, d_t2, zeta_u, zeta_t


def e_hat(alpha, which: str, scene: Scene, cfg: SystemConfig):
    """Per-element-squared receive gain of the bi-partitioned layout.

    ``M^2 * e_hat`` approximates |G_rx|^2 toward the user or the target under
    in-phase clusters; the squared element amplitude is included so that the
    approximation carries the absolute scale.
    """
    d_u1, d_u2, d_t1, d_t2, zeta_u, zeta_t = _rx_split_geometry(scene, cfg)
    beta_sq = cfg.element_amplitude ** 2
    a = np.asarray(alpha, dtype=float)
    if which == "user":
        return beta_sq * blend_gain_sq(a, d_u1, d_u2, zeta_u)
    if which == "target":
        return beta_sq * blend_gain_sq(1.0 - a, d_t1, d_t2, zeta_t)
    raise ValueError("which must be 'user' or 'target'")


def s_hat_ul(alpha, q_value: float, scene: Scene, weights: IsacWeights,
             cfg: SystemConfig):
    """Split surrogate for the receive side at a fixed scaled sensing power.
    Vectorized in ``alpha``."""
    m_sq = float(cfg.n_rx) ** 2
    e_user = e_hat(alpha, "user", scene, cfg)
    e_target = e_hat(alpha, "target", scene, cfg)
    noise = cfg.noise_rx_ul
    interference = cfg.rcs_variance * q_value * m_sq * e_target + noise
    comm = weights.communication * np.log1p(e_user * cfg.p_c_max * m_sq / interference)
    sense = (weights.sensing / cfg.frame_length) * np.log1p(
        cfg.rcs_variance * cfg.frame_length * q_value * m_sq * e_target / noise)
    return comm + sense


def rx_design_ul(alpha_star: float, scene: Scene, cfg: SystemConfig) -> PinchingLayout:
    """Receive side: floor(alpha*M) elements at the user, the rest at the target."""
    if not 0.0 <= alpha_star <= 1.0:
        raise ValueError("alpha_star must lie in [0, 1]")
    m_user = int(math.floor(cfg.n_rx * alpha_star))
    return split_cluster_layout(scene.user.x, m_user, scene.target.x,
                                cfg.n_rx, cfg, WaveguideRole.RECEIVE)


def scalarized_objective_ul(l_tx: PinchingLayout, l_rx: PinchingLayout,
                            p_s: float, scene: Scene, weights: IsacWeights,
                            cfg: SystemConfig) -> float:
    """Exact weighted objective at full communication power."""
    se = ul_spectral_efficiency(l_tx, l_rx, cfg.p_c_max, p_s, scene, cfg)
    smi = ul_smi_bound(l_tx, l_rx, p_s, scene, cfg)
    return weights.communication * se + weights.sensing * smi


def design_uplink(scene: Scene, weights: IsacWeights, cfg: SystemConfig,
                  tol_rel: float = BCD_REL_TOL,
                  max_iterations: int = BCD_MAX_ITERATIONS) -> DesignSolution:
    """Alternating uplink design with best-iterate tracking.

    The receive layout starts uniform over the span.  Each iteration fixes
    the transmit cluster at the target, picks the scaled sensing power from
    the current exact receive gains, picks the split ratio on the surrogate,
    and rebuilds the receive layout.  Convergence is declared on the exact
    objective; the best iterate is returned even if a surrogate-driven step
    regressed.
    """
    l_tx = tx_design_ul(scene, cfg)
    q_max = abs(aggregate_gain(WaveguideRole.TRANSMIT, l_tx, scene.target, cfg)) ** 2 \
        * cfg.p_s_max
    l_rx = uniform_layout(WaveguideRole.RECEIVE, cfg.n_rx, cfg)

    objectives: list[float] = []
    best: tuple[float, PinchingLayout, float, QSolution, float] | None = None
    converged = False
    cycle_detected = False
    prev_obj: float | None = None
    seen_states: set[tuple] = set()

    for _ in range(max_iterations):
        g_user_sq = abs(aggregate_gain(WaveguideRole.RECEIVE, l_rx, scene.user, cfg)) ** 2
        g_target_sq = abs(aggregate_gain(WaveguideRole.RECEIVE, l_rx, scene.target, cfg)) ** 2
        qsol = q_star(g_user_sq, g_target_sq, q_max, weights, cfg)
        alpha_star, _ = maximize_scalar(
            lambda a: s_hat_ul(a, qsol.q_star, scene, weights, cfg),
            0.0, 1.0, cfg.grid_resolution)
        l_rx = rx_design_ul(alpha_star, scene, cfg)
        p_s = recover_sensing_power(qsol.q_star, l_tx, scene, cfg)
        obj = scalarized_objective_ul(l_tx, l_rx, p_s, scene, weights, cfg)
        objectives.append(obj)
        if best is None or obj > best[0]:
            best = (obj, l_rx, p_s, qsol, alpha_star)
        if prev_obj is not None:
            if abs(obj - prev_obj) <= tol_rel * max(abs(prev_obj), abs(obj)):
                converged = True
                break
        state = (l_rx.locations, qsol.q_star, p_s)
        if state in seen_states:
            converged = True
            cycle_detected = True
            break
        seen_states.add(state)
        prev_obj = obj

    assert best is not None
    _, l_rx_best, p_s_best, qsol_best, alpha_best = best
    se = ul_spectral_efficiency(l_tx, l_rx_best, cfg.p_c_max, p_s_best, scene, cfg)
    smi = ul_smi_bound(l_tx, l_rx_best, p_s_best, scene, cfg)
    return DesignSolution(
        method="pass",
        link="uplink",
        tx_layout=l_tx,
        rx_layout=l_rx_best,
        power=cfg.p_c_max,
        sensing_power=p_s_best,
        report=make_report(se, smi, weights),
        bcd=BcdTrace(objectives=tuple(objectives), converged=converged,
                     cycle_detected=cycle_detected),
        q_solution=qsol_best,
        extras={"alpha_star": alpha_best, "q_max": q_max},
    )
