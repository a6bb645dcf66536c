import numpy as np
import pytest

from so3pid.config import (
    ConfigError,
    apply_overrides,
    build_config,
    load_config,
    parse_config,
    parse_pairs,
    serialize_config,
)

MINIMAL = """
# minimal scenario
controller = geometric-pid
h = 0.01        # s
duration = 5.0  # s
"""


class TestParsing:
    def test_minimal_defaults(self):
        cfg = parse_config(MINIMAL, name="mini")
        assert cfg.name == "mini"
        assert cfg.h == 0.01
        assert cfg.duration == 5.0
        assert cfg.gains.kD == 3.0
        assert np.allclose(np.diag(cfg.inertia.J), [0.0820, 0.0845, 0.1377])
        assert cfg.disturbance is None

    def test_comments_and_blanks_ignored(self):
        values = parse_pairs("# lone comment\n\nh = 0.02 # trailing\n")
        assert values == {"h": 0.02}

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            parse_pairs("gains.kX = 1.0\n")

    def test_bad_value_rejected(self):
        with pytest.raises(ConfigError):
            parse_pairs("h = fast\n")

    def test_triple_needs_three(self):
        with pytest.raises(ConfigError):
            parse_pairs("gains.K = 1.0,1.1\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigError):
            parse_pairs("just some words\n")


class TestValidation:
    def test_consistent_kd_accepted(self):
        cfg = parse_config(MINIMAL + "gains.kI = 1.0\ngains.kDI = 2.0\n"
                           "gains.kD = 3.0\n")
        assert cfg.gains.kD == 3.0

    def test_inconsistent_kd_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL + "gains.kI = 1.0\ngains.kDI = 2.0\n"
                         "gains.kD = 2.5\n")

    def test_zero_duration_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("controller = geometric-pid\nh = 0.01\n"
                         "duration = 0.0\n")

    def test_unknown_controller_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("controller = lqr\nh = 0.01\nduration = 1.0\n")

    def test_repeated_error_weights_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL + "gains.K = 1.0,1.0,1.2\n")

    def test_disturbance_block(self):
        cfg = parse_config(MINIMAL + "disturbance.const = 0.1,0,0\n")
        assert cfg.disturbance is not None
        assert np.array_equal(cfg.disturbance.const, [0.1, 0.0, 0.0])
        assert np.array_equal(cfg.disturbance.ampl, np.zeros(3))

    def test_disturbance_disabled(self):
        cfg = parse_config(MINIMAL + "disturbance.const = 0.1,0,0\n"
                           "disturbance.enabled = false\n")
        assert cfg.disturbance is None

    def test_disturbance_enabled_defaults(self):
        cfg = parse_config(MINIMAL + "disturbance.enabled = true\n")
        assert cfg.disturbance is not None
        assert cfg.disturbance.gamma() > 0.0

    def test_scalar_position_gain_expands(self):
        cfg = parse_config(MINIMAL + "gains.P = 10.0\n")
        assert np.allclose(cfg.gains.P, 10.0 * np.eye(3))


class TestOverrides:
    def test_last_wins(self):
        values = apply_overrides(parse_pairs(MINIMAL),
                                 ["duration=7.5", "duration=9.0"])
        assert build_config(values).duration == 9.0

    def test_unknown_override_rejected(self):
        with pytest.raises(ConfigError):
            apply_overrides({}, ["nonsense=1"])

    def test_not_key_value_rejected(self):
        with pytest.raises(ConfigError):
            apply_overrides({}, ["justnonsense"])

    def test_controller_override(self):
        cfg = parse_config(MINIMAL, overrides=["controller=geometric-pd"])
        assert cfg.controller == "geometric-pd"


class TestRoundTrip:
    def test_serialize_parse_round_trip(self):
        cfg = parse_config(MINIMAL + "disturbance.const = 0.1,-0.08,0.06\n"
                           "seed = 7\nyaw = 0.3\n", name="rt")
        text = serialize_config(cfg)
        cfg2 = parse_config(text, name="rt")
        assert cfg2.h == cfg.h
        assert cfg2.duration == cfg.duration
        assert cfg2.yaw_d == cfg.yaw_d
        assert cfg2.seed == cfg.seed
        assert np.array_equal(cfg2.init_omega, cfg.init_omega)
        assert np.array_equal(cfg2.disturbance.const, cfg.disturbance.const)
        assert cfg2.gains.kD == cfg.gains.kD

    def test_load_config_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.cfg")

    def test_load_config_uses_stem(self, tmp_path):
        path = tmp_path / "study1.cfg"
        path.write_text(MINIMAL)
        assert load_config(path).name == "study1"
