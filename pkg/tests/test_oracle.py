import dataclasses

import numpy as np
import pytest

from pass_isac import (
    IsacWeights,
    PinchingLayout,
    Scene,
    SystemConfig,
    Vec3,
    WaveguideRole,
    design_downlink,
    q_star,
    rx_design_ul,
    tx_design_ul,
)
from pass_isac.downlink import rx_design_dl, scalarized_objective_dl
from pass_isac.experiments import point_config, sample_scene
from pass_isac.geometry import aggregate_gain
from pass_isac.oracle import (
    OracleRefusalError,
    exhaustive_partition,
    grid_search_power,
    jensen_check,
    joint_layout_grid_search,
    snap_to_lattice,
    _feasible_tuples,
    _lattice,
)
from pass_isac.uplink import power_objective_ul

TX = WaveguideRole.TRANSMIT
RX = WaveguideRole.RECEIVE


class TestExhaustivePartition:
    def test_single_element_two_candidates(self, scene_factory):
        cfg = point_config(SystemConfig(), 40.0, 1)
        scene = scene_factory(2)
        n1, best = exhaustive_partition(scene, IsacWeights(0.5, 0.5), cfg, "downlink")
        assert n1 in (0, 1)
        assert best > 0.0

    def test_symmetric_scene_boundary_best(self):
        # Equidistant user/target geometry: the best split is a single
        # cluster on one side.
        cfg = point_config(SystemConfig(), 40.0, 8)
        scene = Scene(user=Vec3(-2.0, 0.0, 0.0), target=Vec3(2.0, 0.0, 0.0))
        n1, _ = exhaustive_partition(scene, IsacWeights(0.5, 0.5), cfg, "downlink")
        assert n1 in (0, cfg.n_tx)

    def test_algorithm_matches_enumeration(self, scene_factory):
        cfg = point_config(SystemConfig(), 40.0, 12)
        for seed in range(10):
            scene = scene_factory(seed)
            w = IsacWeights(0.5, 0.5)
            solution = design_downlink(scene, w, cfg)
            alg = max(solution.extras["gain_objectives"].values())
            _, best = exhaustive_partition(scene, w, cfg, "downlink")
            assert alg >= 0.95 * best

    def test_uplink_matches_bcd_result(self, scene_factory):
        cfg = point_config(SystemConfig(), 40.0, 6)
        scene = scene_factory(25)
        w = IsacWeights(0.5, 0.5)
        m1, best = exhaustive_partition(scene, w, cfg, "uplink")
        assert 0 <= m1 <= cfg.n_rx
        from pass_isac import design_uplink

        solution = design_uplink(scene, w, cfg)
        assert solution.report.weighted <= best + 1e-9

    def test_link_validation(self, cfg, scene_factory):
        with pytest.raises(ValueError):
            exhaustive_partition(scene_factory(0), IsacWeights(0.5, 0.5), cfg, "x")


class TestGridSearchPower:
    def test_monotone_increasing(self):
        arg, value = grid_search_power(lambda q: np.asarray(q), 2.0, 101)
        assert arg == 2.0 and value == 2.0

    def test_monotone_decreasing(self):
        arg, value = grid_search_power(lambda q: -np.asarray(q), 2.0, 101)
        assert arg == 0.0 and value == 0.0

    def test_agrees_with_closed_form(self, cfg, scene_factory):
        scene = scene_factory(12)
        l_tx = tx_design_ul(scene, cfg)
        q_max = abs(aggregate_gain(TX, l_tx, scene.target, cfg)) ** 2 * cfg.p_s_max
        l_rx = rx_design_ul(0.4, scene, cfg)
        g_user = abs(aggregate_gain(RX, l_rx, scene.user, cfg)) ** 2
        g_target = abs(aggregate_gain(RX, l_rx, scene.target, cfg)) ** 2
        w = IsacWeights(0.5, 0.5)
        sol = q_star(g_user, g_target, q_max, w, cfg)
        _, grid_best = grid_search_power(
            lambda q: power_objective_ul(q, g_user, g_target, w, cfg),
            q_max, cfg.grid_resolution)
        assert sol.objective >= grid_best - 1e-9


class TestJointLayoutGridSearch:
    def test_candidate_counts(self):
        cfg = point_config(SystemConfig(), 40.0, 1)
        lattice = _lattice(TX, cfg, 16)
        assert len(list(_feasible_tuples(lattice, 1, cfg.min_spacing))) == 16

    def test_refuses_large_instances(self, scene_factory):
        cfg = point_config(SystemConfig(), 40.0, 3)
        with pytest.raises(OracleRefusalError):
            joint_layout_grid_search(scene_factory(0), IsacWeights(0.5, 0.5),
                                     cfg, "downlink", 16)
        cfg1 = point_config(SystemConfig(), 40.0, 1)
        with pytest.raises(OracleRefusalError):
            joint_layout_grid_search(scene_factory(0), IsacWeights(0.5, 0.5),
                                     cfg1, "downlink", 65)

    def test_superset_property(self, scene_factory):
        cfg = point_config(SystemConfig(), 40.0, 1)
        w = IsacWeights(0.5, 0.5)
        for seed in range(5):
            scene = scene_factory(seed)
            (_, _), oracle_best = joint_layout_grid_search(scene, w, cfg,
                                                           "downlink", 32)
            solution = design_downlink(scene, w, cfg)
            snapped_tx = snap_to_lattice(solution.tx_layout, cfg, 32)
            snapped_rx = snap_to_lattice(solution.rx_layout, cfg, 32)
            snapped = scalarized_objective_dl(snapped_tx, snapped_rx, scene, w, cfg)
            assert snapped <= oracle_best + 1e-9

    def test_objective_nondecreasing_in_grid_points(self, scene_factory):
        cfg = point_config(SystemConfig(), 40.0, 1)
        w = IsacWeights(0.5, 0.5)
        scene = scene_factory(3)
        # Nested lattices: 2k-1 points contain every point of the k lattice.
        _, coarse = joint_layout_grid_search(scene, w, cfg, "downlink", 9)
        _, fine = joint_layout_grid_search(scene, w, cfg, "downlink", 17)
        assert fine >= coarse - 1e-12

    def test_colocated_degenerate_geometry(self):
        cfg = point_config(SystemConfig(), 40.0, 1)
        lattice = _lattice(TX, cfg, 17)
        spot = float(lattice[8])
        scene = Scene(user=Vec3(spot, 0.0, 0.0), target=Vec3(spot, 1e-6, 0.0))
        (l_tx, l_rx), _ = joint_layout_grid_search(scene, IsacWeights(0.5, 0.5),
                                                   cfg, "downlink", 17)
        assert l_tx.locations[0] == pytest.approx(spot)
        assert l_rx.locations[0] == pytest.approx(spot)

    def test_uplink_instance(self, scene_factory):
        cfg = point_config(SystemConfig(), 40.0, 1)
        scene = scene_factory(6)
        (l_tx, l_rx), best = joint_layout_grid_search(scene, IsacWeights(0.5, 0.5),
                                                      cfg, "uplink", 9)
        assert best >= 0.0
        assert len(l_tx) == len(l_rx) == 1


class TestJensenCheck:
    def test_report_structure(self, cfg, scene_factory):
        rng = np.random.default_rng(0)
        scene = scene_factory(1)
        l_rx = rx_design_dl(scene, cfg)
        l_tx = tx_design_ul(scene, cfg)  # any feasible transmit cluster
        configs = [(l_tx, l_rx, cfg.p_max, scene, cfg)]
        records = jensen_check(configs, n_draws=5_000, rng=rng)
        assert len(records) == 2
        by_name = {r.name.rsplit("-", 1)[0]: r for r in records}
        assert by_name["jensen-gaussian"].passed
        assert by_name["jensen-constant-modulus"].passed
        assert by_name["jensen-constant-modulus"].gap == 0.0
        assert by_name["jensen-gaussian"].gap > 0.0

    def test_zero_power_configuration(self, cfg, scene_factory):
        rng = np.random.default_rng(0)
        scene = scene_factory(1)
        l_rx = rx_design_dl(scene, cfg)
        l_tx = tx_design_ul(scene, cfg)
        records = jensen_check([(l_tx, l_rx, 0.0, scene, cfg)], n_draws=100, rng=rng)
        assert all(r.passed for r in records)
        assert all(r.gap == 0.0 for r in records)


class TestSnapping:
    def test_snap_identity_on_lattice_points(self):
        cfg = point_config(SystemConfig(), 40.0, 1)
        lattice = _lattice(TX, cfg, 33)
        layout = PinchingLayout(TX, (float(lattice[5]),))
        assert snap_to_lattice(layout, cfg, 33).locations == layout.locations

    def test_snap_collapse_refused(self):
        cfg = point_config(SystemConfig(), 40.0, 2)
        layout = PinchingLayout(TX, (0.0, cfg.min_spacing))
        with pytest.raises(OracleRefusalError):
            snap_to_lattice(layout, cfg, 9)
