"""Configuration parsing: bundled profiles, INI validation, round-trips."""

import pytest

from slicerl.config import (
    ConfigError,
    RunConfig,
    config_to_text,
    load_config_text,
    load_profile,
    profile_text,
)


def test_bundled_profiles_parse():
    desk = load_profile("desk")
    assert desk.env.n_aps == 4
    assert desk.env.n_users_max == 8
    assert desk.env.horizon == 200
    assert desk.max_timesteps == 50_000
    assert [s.id for s in desk.env.slices] == ["A", "B", "C"]

    paper = load_profile("paper")
    assert paper.env.n_aps == 20
    assert paper.env.n_users_max == 50
    assert paper.max_timesteps == 2_000_000
    assert paper.agent.hidden == (128,) * 5  # full-scale network


def test_unknown_profile_raises():
    with pytest.raises(ConfigError):
        profile_text("laptop")


def test_algorithm_switch_rebuilds_agent_defaults():
    base = load_profile("desk")
    ddpg = load_profile("desk", algorithm="ddpg")
    assert ddpg.algorithm == "ddpg"
    assert ddpg.agent.hidden != base.agent.hidden or ddpg.agent.lr_actor != base.agent.lr_actor


def test_unknown_override_rejected():
    with pytest.raises(ConfigError):
        load_profile("desk", nonexistent_knob=3)


def test_unknown_key_in_section_rejected():
    with pytest.raises(ConfigError):
        load_config_text("[run]\nalgorithm = tdsac\nwarp_speed = 9\n")


def test_bad_value_types_rejected():
    with pytest.raises(ConfigError):
        load_config_text("[run]\nmax_timesteps = soon\n")
    with pytest.raises(ConfigError):
        load_config_text("[run]\ncheckpoint_buffer = maybe\n")
    with pytest.raises(ConfigError):
        load_config_text("[env]\nomega_hat = none\n")


def test_malformed_ini_rejected():
    with pytest.raises(ConfigError):
        load_config_text("this is not an ini file [")


def test_run_config_invariants():
    with pytest.raises(ConfigError):
        RunConfig(eval_best=6, eval_episodes=5)
    with pytest.raises(ConfigError):
        RunConfig(max_timesteps=100, start_timesteps=100)
    with pytest.raises(ConfigError):
        RunConfig(algorithm="a2c")


def test_bad_slice_section_reports_config_error():
    text = "[slice.X]\nsinr_threshold = 1.0\ncpu_threshold = 1.0\n" \
           "arrival_rate = 0.5\npenalty_sinr = 0.1\npenalty_cpu = 0.2\n"
    with pytest.raises(ConfigError):
        load_config_text(text)


def test_config_text_round_trip():
    cfg = load_profile("desk")
    back = load_config_text(config_to_text(cfg))
    assert back.algorithm == cfg.algorithm
    assert back.max_timesteps == cfg.max_timesteps
    assert back.agent == cfg.agent
    assert back.env.omega_hat == cfg.env.omega_hat
    assert back.env.compute == cfg.env.compute
    assert back.env.slices == cfg.env.slices


def test_agent_section_overrides():
    text = profile_text("desk") + "\n[agent]\nhidden = 8,8\nbatch_size = 4\n"
    cfg = load_config_text(text)
    assert cfg.agent.hidden == (8, 8)
    assert cfg.agent.batch_size == 4
