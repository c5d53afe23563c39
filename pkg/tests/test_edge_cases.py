"""Degenerate geometries and alternate configuration modes."""

import dataclasses

import pytest

from pass_isac import (
    FeasibilityError,
    IsacWeights,
    Scene,
    SystemConfig,
    Vec3,
    design_downlink,
    design_uplink,
)
from pass_isac.experiments import parse_config_text, point_config


def test_colocated_user_and_target():
    cfg = point_config(SystemConfig(), 40.0, 10)
    scene = Scene(user=Vec3(1.0, 0.5, 0.0), target=Vec3(1.0, 0.5, 0.0))
    dl = design_downlink(scene, IsacWeights(0.5, 0.5), cfg)
    ul = design_uplink(scene, IsacWeights(0.5, 0.5), cfg)
    assert dl.report.weighted > 0.0
    assert ul.bcd.converged
    dl.tx_layout.validate(cfg)
    ul.rx_layout.validate(cfg)


def test_target_behind_receive_line():
    cfg = point_config(SystemConfig(), 40.0, 10)
    scene = Scene(user=Vec3(0.0, 0.0, 0.0), target=Vec3(3.0, 7.9, 0.0))
    assert design_downlink(scene, IsacWeights(0.5, 0.5), cfg).report.weighted > 0.0


def test_unit_refractive_index_mode():
    cfg = point_config(SystemConfig(refractive_index=1.0), 40.0, 10)
    scene = Scene(user=Vec3(0.0, 0.0, 0.0), target=Vec3(3.0, 2.0, 0.0))
    assert design_downlink(scene, IsacWeights(0.5, 0.5), cfg).report.weighted > 0.0


def test_free_space_spacing_mode_runs():
    base = SystemConfig()
    cfg = point_config(dataclasses.replace(base, cluster_spacing=base.wavelength),
                       40.0, 10)
    scene = Scene(user=Vec3(0.0, 0.0, 0.0), target=Vec3(3.0, 2.0, 0.0))
    assert design_uplink(scene, IsacWeights(0.5, 0.5), cfg).bcd.converged


def test_zero_sensing_budget():
    cfg = dataclasses.replace(point_config(SystemConfig(), 40.0, 6), p_s_max=0.0)
    scene = Scene(user=Vec3(0.0, 0.0, 0.0), target=Vec3(3.0, 2.0, 0.0))
    solution = design_uplink(scene, IsacWeights(0.5, 0.5), cfg)
    assert solution.sensing_power == 0.0
    assert solution.bcd.converged


def test_single_element_designs():
    cfg = point_config(SystemConfig(), 40.0, 1)
    scene = Scene(user=Vec3(-5.0, 1.0, 0.0), target=Vec3(5.0, -1.0, 0.0))
    dl = design_downlink(scene, IsacWeights(0.5, 0.5), cfg)
    ul = design_uplink(scene, IsacWeights(0.5, 0.5), cfg)
    assert len(dl.tx_layout) == len(dl.rx_layout) == 1
    assert 0.0 <= ul.sensing_power <= cfg.p_s_max


def test_overfull_waveguide_raises():
    cfg = point_config(SystemConfig(), 0.05, 20)
    scene = Scene(user=Vec3(0.0, 0.0, 0.0), target=Vec3(0.01, 1.0, 0.0))
    with pytest.raises(FeasibilityError, match="too short"):
        design_downlink(scene, IsacWeights(0.5, 0.5), cfg)


def test_empty_config_text_gives_defaults():
    cfg, spec = parse_config_text("")
    assert cfg == SystemConfig()
    assert spec.drops == 200
