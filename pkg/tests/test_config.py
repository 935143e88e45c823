from pathlib import Path

import numpy as np
import pytest

from lvfte import (
    ConfigError,
    State2,
    apply_overrides,
    config_digest,
    emit_config,
    parse_config,
)

ODE_TEXT = """\
[run]
name = demo
seed = 42

[model]
kind = ode

[kinetics]
a1 = 1.8
a2 = 3
b1 = 1
b2 = 1
c1 = 0.5
c2 = 1.8
p = 0.4

[initial]
u = 0.5
v = 10

[solver]
t_end = 100
"""

PDE_TEXT = """\
[model]
kind = pde-inhomogeneous

[resource]
b = 0.999
c = 0.999
p = 1.0
m = x*(1-x)

[domain]
x0 = 0
x1 = 1
n_x = 32
d1 = 0.001
d2 = 0.01

[initial]
u = 0.2 + 0.05*cos(3.141592653589793*x)
v = 0.2

[solver]
t_end = 50
dt = 0.05
"""


class TestParsing:
    def test_typed_values(self):
        cfg = parse_config(ODE_TEXT)
        assert cfg.get("run", "seed") == 42
        assert cfg.get("kinetics", "a1") == 1.8
        assert cfg.kind == "ode"

    def test_unknown_section_rejected_with_line(self):
        bad = ODE_TEXT + "\n[extras]\nfoo = 1\n"
        with pytest.raises(ConfigError) as err:
            parse_config(bad)
        assert "extras" in str(err.value)

    def test_unknown_key_rejected_with_line(self):
        bad = ODE_TEXT.replace("a1 = 1.8", "a1 = 1.8\nzz = 3")
        with pytest.raises(ConfigError) as err:
            parse_config(bad)
        msg = str(err.value)
        assert "zz" in msg and "line" in msg

    def test_bad_float_names_the_key(self):
        bad = ODE_TEXT.replace("a1 = 1.8", "a1 = fast")
        with pytest.raises(ConfigError) as err:
            parse_config(bad)
        assert "kinetics.a1" in str(err.value)

    def test_non_finite_float_rejected(self):
        bad = ODE_TEXT.replace("a1 = 1.8", "a1 = inf")
        with pytest.raises(ConfigError):
            parse_config(bad)

    def test_bad_model_kind_lists_choices(self):
        bad = ODE_TEXT.replace("kind = ode", "kind = odex")
        with pytest.raises(ConfigError) as err:
            parse_config(bad)
        assert "ode-harvest" in str(err.value)

    def test_expression_keys_validated_at_parse_time(self):
        bad = PDE_TEXT.replace("m = x*(1-x)", "m = x*(1-x")
        with pytest.raises(ConfigError):
            parse_config(bad)


class TestBuilders:
    def test_kinetics_defaults(self):
        cfg = parse_config(ODE_TEXT)
        k = cfg.build_kinetics()
        assert k.p == 0.4 and k.q == 1.0

    def test_missing_required_key_is_named(self):
        cfg = parse_config(ODE_TEXT.replace("c2 = 1.8\n", ""))
        with pytest.raises(ConfigError) as err:
            cfg.build_kinetics()
        assert "kinetics.c2" in str(err.value)

    def test_initial_point_needs_plain_numbers(self):
        cfg = parse_config(ODE_TEXT.replace("u = 0.5", "u = 0.5*cos(x)"))
        with pytest.raises(ConfigError):
            cfg.build_initial_point()

    def test_initial_point_value(self):
        cfg = parse_config(ODE_TEXT)
        assert cfg.build_initial_point() == State2(0.5, 10.0)

    def test_pde_build_chain(self):
        cfg = parse_config(PDE_TEXT)
        grid = cfg.build_grid()
        assert grid.n_x == 32
        params = cfg.build_pde_params(grid)
        assert params.resource_model
        assert params.m.values == pytest.approx(grid.centers() * (1 - grid.centers()))
        init = cfg.build_initial_state(grid)
        assert init.u == pytest.approx(
            0.2 + 0.05 * np.cos(3.141592653589793 * grid.centers())
        )

    def test_grid_resolution_override(self):
        cfg = parse_config(PDE_TEXT)
        assert cfg.build_grid(n_x_override=64).n_x == 64


class TestRoundTrip:
    @pytest.mark.parametrize("text", [ODE_TEXT, PDE_TEXT])
    def test_emit_then_parse_is_identity(self, text):
        cfg = parse_config(text)
        assert parse_config(emit_config(cfg)) == cfg

    def test_shipped_recipes_round_trip(self):
        recipes = sorted((Path(__file__).parent.parent / "configs").glob("*.ini"))
        assert len(recipes) >= 8
        for path in recipes:
            cfg = parse_config(path.read_text())
            assert parse_config(emit_config(cfg)) == cfg, path.name

    def test_emit_is_canonical_under_reordering(self):
        reordered = "\n".join(
            [
                "[solver]",
                "t_end = 100",
                "[model]",
                "kind = ode",
                "[kinetics]",
                "c2 = 1.8",
                "c1 = 0.5",
                "a1 = 1.8",
                "a2 = 3",
                "b1 = 1",
                "b2 = 1",
                "p = 0.4",
                "[initial]",
                "u = 0.5",
                "v = 10",
                "[run]",
                "name = demo",
                "seed = 42",
            ]
        )
        a = parse_config(ODE_TEXT)
        b = parse_config(reordered)
        assert a == b
        assert emit_config(a) == emit_config(b)
        assert config_digest(a) == config_digest(b)


class TestOverrides:
    def test_override_changes_one_value(self):
        cfg = parse_config(ODE_TEXT)
        out = apply_overrides(cfg, ["kinetics.p=0.7"])
        assert out.get("kinetics", "p") == 0.7
        assert cfg.get("kinetics", "p") == 0.4  # original untouched

    def test_override_is_type_checked(self):
        cfg = parse_config(ODE_TEXT)
        with pytest.raises(ConfigError):
            apply_overrides(cfg, ["run.seed=soon"])

    def test_unknown_target_rejected(self):
        cfg = parse_config(ODE_TEXT)
        with pytest.raises(ConfigError):
            apply_overrides(cfg, ["kinetics.zz=1"])
        with pytest.raises(ConfigError):
            apply_overrides(cfg, ["nosuch.a=1"])

    def test_malformed_item_rejected(self):
        cfg = parse_config(ODE_TEXT)
        with pytest.raises(ConfigError):
            apply_overrides(cfg, ["kinetics.p"])
        with pytest.raises(ConfigError):
            apply_overrides(cfg, ["kineticsp=1"])

    def test_digest_tracks_value_changes(self):
        cfg = parse_config(ODE_TEXT)
        changed = apply_overrides(cfg, ["kinetics.p=0.7"])
        assert config_digest(cfg) != config_digest(changed)
