"""Monte-Carlo experiment harness: scene sampling, sweeps, and CSV output.

Scenes are sampled uniformly in a rectangle centred at the origin with side
lengths d_x (along the waveguides) and ``scene_depth`` across.  Every drop
uses an rng seeded from (seed, point index, drop index), so results are
reproducible regardless of execution order, and both methods of a drop see
the same scene.  Floats are serialized with 17 significant digits; repeated
runs with the same seed produce byte-identical records up to the wall-time
column.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .baseline import baseline_design
from .downlink import design_downlink
from .geometry import (
    ConfigError,
    PinchingLayout,
    Scene,
    SystemConfig,
    Vec3,
    WaveguideRole,
    cascade_gain,
    dbm_to_watts,
    watts_to_dbm,
)
from .metrics import LN2, IsacWeights
from .oracle import (
    ValidationRecord,
    grid_search_power,
    jensen_check,
    joint_layout_grid_search,
    snap_to_lattice,
)
from .solution import DesignSolution
from .uplink import design_uplink, power_objective_ul, q_star

EXPERIMENT_KINDS = ("sweep-sidelength", "sweep-elements", "rate-region",
                    "validate", "single")
METHODS = ("pass", "baseline")
LINKS = ("downlink", "uplink")

RECORD_COLUMNS = (
    "experiment", "method", "link", "d_x", "n_tx", "n_rx", "alpha_w", "drop",
    "user_x", "user_y", "target_x", "target_y", "target_z",
    "se_nats", "smi_nats", "weighted_nats",
    "se_bits", "smi_bits", "weighted_bits",
    "power_w", "p_s_w", "bcd_iterations", "wall_time_s",
)

SUMMARY_COLUMNS = (
    "experiment", "method", "link", "d_x", "n_tx", "n_rx", "alpha_w", "drops",
    "se_mean_nats", "se_ci95_nats", "smi_mean_nats", "smi_ci95_nats",
    "weighted_mean_nats", "weighted_ci95_nats",
    "se_mean_bits", "se_ci95_bits", "smi_mean_bits", "smi_ci95_bits",
    "weighted_mean_bits", "weighted_ci95_bits",
)

_Z95 = 1.959963984540054


@dataclass(frozen=True)
class ExperimentSpec:
    """What to run and where to write it."""

    kind: str = "single"
    dx_values: tuple[float, ...] = (40.0,)
    element_counts: tuple[int, ...] = (10,)
    weight_values: tuple[float, ...] = (0.5,)
    drops: int = 200
    seed: int = 0
    link: str = "downlink"
    methods: tuple[str, ...] = ("pass", "baseline")
    out_dir: str = "results"
    resume: bool = False

    def validate(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"kind: must be one of {EXPERIMENT_KINDS}")
        if not self.dx_values:
            raise ConfigError("dx_list: must be nonempty")
        if any(dx <= 0.0 for dx in self.dx_values):
            raise ConfigError("dx_list: side lengths must be positive")
        if not self.element_counts:
            raise ConfigError("element_list: must be nonempty")
        if any(n < 1 for n in self.element_counts):
            raise ConfigError("element_list: counts must be >= 1")
        if not self.weight_values:
            raise ConfigError("weight_list: must be nonempty")
        if any(not 0.0 <= w <= 1.0 for w in self.weight_values):
            raise ConfigError("weight_list: weights must lie in [0, 1]")
        if self.drops < 1:
            raise ConfigError("drops: must be >= 1")
        if self.link not in LINKS:
            raise ConfigError(f"link: must be one of {LINKS}")
        if not self.methods or any(m not in METHODS for m in self.methods):
            raise ConfigError(f"methods: must be a nonempty subset of {METHODS}")


@dataclass(frozen=True)
class ExperimentResult:
    records_path: Path
    summary_path: Path
    records: tuple[dict, ...] = field(repr=False, default=())


def sample_scene(d_x: float, d_y: float, rng: np.random.Generator,
                 target_altitude: float = 0.0) -> Scene:
    """Uniform user/target drop in the centred d_x-by-d_y rectangle.

    Draw order is fixed (user x, user y, target x, target y) so a seeded
    generator reproduces the same scene sequence.
    """
    half_x, half_y = d_x / 2.0, d_y / 2.0
    user_x = float(rng.uniform(-half_x, half_x))
    user_y = float(rng.uniform(-half_y, half_y))
    target_x = float(rng.uniform(-half_x, half_x))
    target_y = float(rng.uniform(-half_y, half_y))
    return Scene(user=Vec3(user_x, user_y, 0.0),
                 target=Vec3(target_x, target_y, target_altitude))


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _sweep_points(spec: ExperimentSpec) -> list[dict]:
    n0 = spec.element_counts[0]
    dx0 = spec.dx_values[0]
    w0 = spec.weight_values[0]
    if spec.kind == "sweep-sidelength":
        return [{"d_x": dx, "count": n0, "alpha_w": w}
                for dx in spec.dx_values for w in spec.weight_values]
    if spec.kind == "sweep-elements":
        return [{"d_x": dx0, "count": n, "alpha_w": w}
                for n in spec.element_counts for w in spec.weight_values]
    if spec.kind == "rate-region":
        return [{"d_x": dx0, "count": n0, "alpha_w": w}
                for w in spec.weight_values]
    if spec.kind == "single":
        return [{"d_x": dx0, "count": n0, "alpha_w": w0}]
    raise ConfigError(f"kind: {spec.kind!r} has no sweep points")


def point_config(cfg: SystemConfig, d_x: float, count: int) -> SystemConfig:
    return replace(cfg, tx_length=d_x, rx_length=d_x, n_tx=count, n_rx=count)


def run_design(method: str, link: str, scene: Scene, weights: IsacWeights,
               cfg: SystemConfig) -> DesignSolution:
    if method == "pass":
        if link == "downlink":
            return design_downlink(scene, weights, cfg)
        return design_uplink(scene, weights, cfg)
    if method == "baseline":
        return baseline_design(scene, weights, cfg, link)
    raise ConfigError(f"methods: unknown method {method!r}")


def _record_key(row: dict) -> tuple:
    return (row["method"], row["d_x"], row["n_tx"], row["alpha_w"], row["drop"])


def _build_row(experiment: str, method: str, link: str, point: dict, drop: int,
               scene: Scene, solution: DesignSolution, wall_time: float) -> dict:
    report = solution.report
    for name in ("spectral_efficiency", "smi_bound", "weighted"):
        value = getattr(report, name)
        if not math.isfinite(value) or value < 0.0:
            raise ValueError(f"metric {name} is not finite/nonnegative: {value}")
    return {
        "experiment": experiment,
        "method": method,
        "link": link,
        "d_x": _fmt(point["d_x"]),
        "n_tx": str(point["count"]),
        "n_rx": str(point["count"]),
        "alpha_w": _fmt(point["alpha_w"]),
        "drop": str(drop),
        "user_x": _fmt(scene.user.x),
        "user_y": _fmt(scene.user.y),
        "target_x": _fmt(scene.target.x),
        "target_y": _fmt(scene.target.y),
        "target_z": _fmt(scene.target.z),
        "se_nats": _fmt(report.spectral_efficiency),
        "smi_nats": _fmt(report.smi_bound),
        "weighted_nats": _fmt(report.weighted),
        "se_bits": _fmt(report.spectral_efficiency / LN2),
        "smi_bits": _fmt(report.smi_bound / LN2),
        "weighted_bits": _fmt(report.weighted / LN2),
        "power_w": _fmt(solution.power),
        "p_s_w": "" if solution.sensing_power is None else _fmt(solution.sensing_power),
        "bcd_iterations": "" if solution.bcd is None else str(solution.bcd.iterations),
        "wall_time_s": format(wall_time, ".6f"),
    }


def _load_existing_records(path: Path) -> dict[tuple, dict]:
    existing: dict[tuple, dict] = {}
    if not path.exists():
        return existing
    with path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            existing[_record_key(row)] = row
    return existing


def _write_csv(path: Path, columns: tuple[str, ...], rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns))
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
            fh.flush()


def summarize(rows: list[dict]) -> list[dict]:
    """Per-point means and 95% confidence half-widths over drops."""
    groups: dict[tuple, list[dict]] = {}
    order: list[tuple] = []
    for row in rows:
        key = (row["experiment"], row["method"], row["link"], row["d_x"],
               row["n_tx"], row["n_rx"], row["alpha_w"])
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)

    summary = []
    for key in order:
        members = groups[key]
        out = dict(zip(("experiment", "method", "link", "d_x", "n_tx", "n_rx",
                        "alpha_w"), key))
        out["drops"] = str(len(members))
        for column, prefix in (("se_nats", "se"), ("smi_nats", "smi"),
                               ("weighted_nats", "weighted")):
            values = np.asarray([float(m[column]) for m in members])
            mean = float(np.mean(values))
            half = 0.0 if len(values) < 2 else \
                float(_Z95 * np.std(values, ddof=1) / math.sqrt(len(values)))
            out[f"{prefix}_mean_nats"] = _fmt(mean)
            out[f"{prefix}_ci95_nats"] = _fmt(half)
            out[f"{prefix}_mean_bits"] = _fmt(mean / LN2)
            out[f"{prefix}_ci95_bits"] = _fmt(half / LN2)
        summary.append(out)
    return summary


def run_experiment(spec: ExperimentSpec, cfg: SystemConfig,
                   experiment_id: str | None = None) -> ExperimentResult:
    """Execute the sweep described by ``spec`` and write records/summary CSVs.

    Rows are produced in deterministic (point, drop, method) order.  With
    ``spec.resume`` any rows already present in records.csv are kept instead
    of recomputed, so an interrupted sweep can be continued drop by drop.
    """
    spec.validate()
    out_dir = Path(spec.out_dir)
    records_path = out_dir / "records.csv"
    summary_path = out_dir / "summary.csv"

    if spec.kind == "validate":
        records = run_validation(cfg, spec.seed, out_dir)
        return ExperimentResult(records_path=out_dir / "validation.csv",
                                summary_path=out_dir / "validation.csv",
                                records=tuple(
                                    {"name": r.name, "passed": str(r.passed)}
                                    for r in records))

    experiment = experiment_id or spec.kind
    existing = _load_existing_records(records_path) if spec.resume else {}

    # Rows stream to disk in deterministic (point, drop, method) order and
    # are flushed per record, so an interrupted sweep leaves a usable
    # partial file that a --resume rerun picks up drop by drop.
    records_path.parent.mkdir(parents=True, exist_ok=True)
    rows: list[dict] = []
    with records_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(RECORD_COLUMNS))
        writer.writeheader()
        for point_index, point in enumerate(_sweep_points(spec)):
            cfg_point = point_config(cfg, point["d_x"], point["count"])
            weights = IsacWeights(communication=point["alpha_w"],
                                  sensing=1.0 - point["alpha_w"])
            for drop in range(spec.drops):
                rng = np.random.default_rng([spec.seed, point_index, drop])
                scene = sample_scene(point["d_x"], cfg_point.scene_depth, rng,
                                     cfg_point.target_altitude)
                for method in spec.methods:
                    probe = {"method": method, "d_x": _fmt(point["d_x"]),
                             "n_tx": str(point["count"]),
                             "alpha_w": _fmt(point["alpha_w"]), "drop": str(drop)}
                    row = existing.get(_record_key(probe))
                    if row is None:
                        start = time.perf_counter()
                        solution = run_design(method, spec.link, scene, weights,
                                              cfg_point)
                        elapsed = time.perf_counter() - start
                        row = _build_row(experiment, method, spec.link, point,
                                         drop, scene, solution, elapsed)
                    rows.append(row)
                    writer.writerow(row)
                fh.flush()

    summary_rows = summarize(rows)
    _write_csv(summary_path, SUMMARY_COLUMNS, summary_rows)
    return ExperimentResult(records_path=records_path, summary_path=summary_path,
                            records=tuple(rows))


# ---------------------------------------------------------------------------
# Validation harness (CLI `validate`)
# ---------------------------------------------------------------------------

VALIDATION_COLUMNS = ("name", "digest", "passed", "gap", "detail")


def _random_split_layout(role: WaveguideRole, count: int, scene: Scene,
                         cfg: SystemConfig, rng: np.random.Generator) -> PinchingLayout:
    from .downlink import split_cluster_layout

    n_user = int(rng.integers(0, count + 1))
    return split_cluster_layout(scene.user.x, n_user, scene.target.x,
                                count, cfg, role)


def run_validation(cfg: SystemConfig, seed: int,
                   out_dir: Path | str) -> list[ValidationRecord]:
    """Desk-scale oracle checks; writes validation.csv and returns records."""
    from .downlink import design_downlink as _design_dl
    from .downlink import rx_design_dl
    from .geometry import aggregate_gain
    from .oracle import exhaustive_partition
    from .uplink import tx_design_ul

    out_dir = Path(out_dir)
    rng = np.random.default_rng([seed, 0])
    records: list[ValidationRecord] = []

    def scene_draw() -> Scene:
        return sample_scene(cfg.tx_length, cfg.scene_depth, rng,
                            cfg.target_altitude)

    # Cascade factorization on random split layouts.
    worst = 0.0
    for _ in range(50):
        scene = scene_draw()
        l_tx = _random_split_layout(WaveguideRole.TRANSMIT, cfg.n_tx, scene, cfg, rng)
        l_rx = _random_split_layout(WaveguideRole.RECEIVE, cfg.n_rx, scene, cfg, rng)
        g = abs(cascade_gain(l_tx, l_rx, scene.target, cfg)) ** 2
        g_split = (abs(aggregate_gain(WaveguideRole.TRANSMIT, l_tx, scene.target, cfg)) ** 2
                   * abs(aggregate_gain(WaveguideRole.RECEIVE, l_rx, scene.target, cfg)) ** 2)
        if g_split > 0.0:
            worst = max(worst, abs(g - g_split) / g_split)
    records.append(ValidationRecord(
        name="cascade-factorization", digest=f"seed={seed}", passed=worst <= 1e-12,
        gap=worst, detail=f"max relative error {worst:.3e} over 50 draws"))

    # Jensen bound on a few random configurations.
    configs = []
    for _ in range(3):
        scene = scene_draw()
        l_rx = rx_design_dl(scene, cfg)
        l_tx = _random_split_layout(WaveguideRole.TRANSMIT, cfg.n_tx, scene, cfg, rng)
        power = float(rng.uniform(0.1, 1.0)) * cfg.p_max
        configs.append((l_tx, l_rx, power, scene, cfg))
    records.extend(jensen_check(configs, n_draws=20_000, rng=rng))

    # Closed-form scaled sensing power against the power grid oracle.
    worst_gap = 0.0
    for _ in range(20):
        scene = scene_draw()
        l_tx = tx_design_ul(scene, cfg)
        q_max = abs(aggregate_gain(WaveguideRole.TRANSMIT, l_tx,
                                   scene.target, cfg)) ** 2 * cfg.p_s_max
        l_rx = _random_split_layout(WaveguideRole.RECEIVE, cfg.n_rx, scene, cfg, rng)
        g_user = abs(aggregate_gain(WaveguideRole.RECEIVE, l_rx, scene.user, cfg)) ** 2
        g_target = abs(aggregate_gain(WaveguideRole.RECEIVE, l_rx, scene.target, cfg)) ** 2
        w = float(rng.uniform(0.0, 1.0))
        weights = IsacWeights(communication=w, sensing=1.0 - w) if 0 < w < 1 \
            else IsacWeights(communication=0.5, sensing=0.5)
        qsol = q_star(g_user, g_target, q_max, weights, cfg)
        _, grid_best = grid_search_power(
            lambda q: power_objective_ul(q, g_user, g_target, weights, cfg),
            q_max, cfg.grid_resolution)
        worst_gap = max(worst_gap, grid_best - qsol.objective)
    records.append(ValidationRecord(
        name="q-star-vs-grid", digest=f"seed={seed}", passed=worst_gap <= 1e-9,
        gap=worst_gap, detail=f"max grid advantage {worst_gap:.3e} nats over 20 draws"))

    # Downlink split against exhaustive enumeration of the transmit gain
    # objective (the quantity the split surrogate approximates).
    worst_ratio = 1.0
    for _ in range(10):
        scene = scene_draw()
        weights = IsacWeights(communication=0.5, sensing=0.5)
        solution = _design_dl(scene, weights, cfg)
        alg_gain = max(solution.extras["gain_objectives"].values())
        _, best = exhaustive_partition(scene, weights, cfg, "downlink")
        if best > 0.0:
            worst_ratio = min(worst_ratio, alg_gain / best)
    records.append(ValidationRecord(
        name="partition-vs-enumeration", digest=f"seed={seed}",
        passed=worst_ratio >= 0.95, gap=1.0 - worst_ratio,
        detail=f"worst transmit-objective ratio {worst_ratio:.4f} over 10 scenes"))

    # Tiny-instance global search superset property.
    tiny = point_config(cfg, cfg.tx_length, 1)
    worst_excess = 0.0
    for _ in range(3):
        scene = sample_scene(tiny.tx_length, tiny.scene_depth, rng,
                             tiny.target_altitude)
        weights = IsacWeights(communication=0.5, sensing=0.5)
        solution = _design_dl(scene, weights, tiny)
        _, oracle_best = joint_layout_grid_search(scene, weights, tiny,
                                                  "downlink", 32)
        snapped_tx = snap_to_lattice(solution.tx_layout, tiny, 32)
        snapped_rx = snap_to_lattice(solution.rx_layout, tiny, 32)
        from .downlink import scalarized_objective_dl
        snapped_obj = scalarized_objective_dl(snapped_tx, snapped_rx, scene,
                                              weights, tiny)
        worst_excess = max(worst_excess, snapped_obj - oracle_best)
    records.append(ValidationRecord(
        name="tiny-joint-oracle", digest=f"seed={seed}",
        passed=worst_excess <= 1e-9, gap=worst_excess,
        detail=f"max snapped-objective excess {worst_excess:.3e} over 3 scenes"))

    rows = [{"name": r.name, "digest": r.digest, "passed": str(r.passed),
             "gap": _fmt(r.gap), "detail": r.detail} for r in records]
    _write_csv(out_dir / "validation.csv", VALIDATION_COLUMNS, rows)
    return records


# ---------------------------------------------------------------------------
# Flat key=value configuration files
# ---------------------------------------------------------------------------

def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _parse_link(text: str) -> str:
    alias = {"dl": "downlink", "ul": "uplink"}
    return alias.get(text.strip().lower(), text.strip().lower())


def _dbm(text: str) -> float:
    return dbm_to_watts(float(text))


# key -> (SystemConfig field, parser).  Powers and noise are given in dBm.
_SYSTEM_KEYS = {
    "carrier_frequency_hz": ("carrier_frequency", float),
    "refractive_index": ("refractive_index", float),
    "element_amplitude": ("element_amplitude", float),
    "altitude_m": ("altitude", float),
    "waveguide_offset_m": ("waveguide_offset", float),
    "tx_length_m": ("tx_length", float),
    "rx_length_m": ("rx_length", float),
    "min_spacing_m": ("min_spacing", float),
    "cluster_spacing_m": ("cluster_spacing", float),
    "frame_length": ("frame_length", int),
    "rcs_variance": ("rcs_variance", float),
    "noise_user_dbm": ("noise_user", _dbm),
    "noise_rx_dl_dbm": ("noise_rx_dl", _dbm),
    "noise_rx_ul_dbm": ("noise_rx_ul", _dbm),
    "p_max_dbm": ("p_max", _dbm),
    "p_c_max_dbm": ("p_c_max", _dbm),
    "p_s_max_dbm": ("p_s_max", _dbm),
    "grid_resolution": ("grid_resolution", int),
    "n_tx": ("n_tx", int),
    "n_rx": ("n_rx", int),
    "target_altitude_m": ("target_altitude", float),
    "scene_depth_m": ("scene_depth", float),
}

_EXPERIMENT_KEYS = {
    "kind": ("kind", str.strip),
    "dx_list": ("dx_values", _parse_floats),
    "element_list": ("element_counts", _parse_ints),
    "weight_list": ("weight_values", _parse_floats),
    "drops": ("drops", int),
    "seed": ("seed", int),
    "link": ("link", _parse_link),
    "methods": ("methods", lambda t: tuple(m.strip() for m in t.split(",") if m.strip())),
    "out_dir": ("out_dir", str.strip),
}


def parse_config_text(text: str) -> tuple[SystemConfig, ExperimentSpec]:
    system_kwargs: dict = {}
    spec_kwargs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in _SYSTEM_KEYS:
            field_name, parser = _SYSTEM_KEYS[key]
            try:
                system_kwargs[field_name] = parser(value)
            except ValueError as exc:
                raise ConfigError(f"{key}: invalid value {value!r} ({exc})") from exc
        elif key in _EXPERIMENT_KEYS:
            field_name, parser = _EXPERIMENT_KEYS[key]
            try:
                spec_kwargs[field_name] = parser(value)
            except ValueError as exc:
                raise ConfigError(f"{key}: invalid value {value!r} ({exc})") from exc
        else:
            raise ConfigError(f"unknown config key: {key}")
    cfg = SystemConfig(**system_kwargs)
    spec = ExperimentSpec(**spec_kwargs)
    spec.validate()
    return cfg, spec


def load_config(path: str | Path | None) -> tuple[SystemConfig, ExperimentSpec]:
    """Load a flat key=value configuration; ``None`` yields all defaults."""
    if path is None:
        cfg = SystemConfig()
        spec = ExperimentSpec()
        spec.validate()
        return cfg, spec
    return parse_config_text(Path(path).read_text())


def config_text(cfg: SystemConfig, spec: ExperimentSpec | None = None) -> str:
    """Effective configuration in the flat key=value format (round-trips
    through :func:`load_config`)."""
    lines = [
        f"carrier_frequency_hz = {_fmt(cfg.carrier_frequency)}",
        f"refractive_index = {_fmt(cfg.refractive_index)}",
        f"element_amplitude = {_fmt(cfg.element_amplitude)}",
        f"altitude_m = {_fmt(cfg.altitude)}",
        f"waveguide_offset_m = {_fmt(cfg.waveguide_offset)}",
        f"tx_length_m = {_fmt(cfg.tx_length)}",
        f"rx_length_m = {_fmt(cfg.rx_length)}",
        f"min_spacing_m = {_fmt(cfg.min_spacing)}",
        f"cluster_spacing_m = {_fmt(cfg.cluster_spacing)}",
        f"frame_length = {cfg.frame_length}",
        f"rcs_variance = {_fmt(cfg.rcs_variance)}",
        f"noise_user_dbm = {_fmt(watts_to_dbm(cfg.noise_user))}",
        f"noise_rx_dl_dbm = {_fmt(watts_to_dbm(cfg.noise_rx_dl))}",
        f"noise_rx_ul_dbm = {_fmt(watts_to_dbm(cfg.noise_rx_ul))}",
        f"p_max_dbm = {_fmt(watts_to_dbm(cfg.p_max))}",
        f"p_c_max_dbm = {_fmt(watts_to_dbm(cfg.p_c_max))}",
        f"p_s_max_dbm = {_fmt(watts_to_dbm(cfg.p_s_max))}",
        f"grid_resolution = {cfg.grid_resolution}",
        f"n_tx = {cfg.n_tx}",
        f"n_rx = {cfg.n_rx}",
        f"target_altitude_m = {_fmt(cfg.target_altitude)}",
        f"scene_depth_m = {_fmt(cfg.scene_depth)}",
    ]
    if spec is not None:
        lines.extend([
            f"kind = {spec.kind}",
            "dx_list = " + ",".join(_fmt(v) for v in spec.dx_values),
            "element_list = " + ",".join(str(v) for v in spec.element_counts),
            "weight_list = " + ",".join(_fmt(v) for v in spec.weight_values),
            f"drops = {spec.drops}",
            f"seed = {spec.seed}",
            f"link = {spec.link}",
            "methods = " + ",".join(spec.methods),
            f"out_dir = {spec.out_dir}",
        ])
    return "\n".join(lines) + "\n"
