import numpy as np
import pytest

from supershift.config import ConfigError, RunConfig, parse_complex_list, parse_list


def test_list_syntax():
    np.testing.assert_allclose(parse_list("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
    np.testing.assert_allclose(parse_list("1, 2.5,3"), [1, 2.5, 3])
    assert parse_list("").size == 0
    np.testing.assert_allclose(parse_complex_list("0.5+0.25j,1.5"), [0.5 + 0.25j, 1.5])
    with pytest.raises(ConfigError):
        parse_list("1:2")
    with pytest.raises(ConfigError):
        parse_list("a,b")


def test_round_trip_through_ini(tmp_path):
    cfg = RunConfig.from_sources(None, ["potential.variant=point", "potential.phi=0.3"])
    path = tmp_path / "run.ini"
    path.write_text(cfg.to_ini())
    again = RunConfig.from_sources(str(path))
    assert again.values == cfg.values
    assert again.green_spec().variant == "point"


def test_unknown_key_and_malformed_override():
    with pytest.raises(ConfigError):
        RunConfig.from_sources(None, ["potential.colour=blue"])
    with pytest.raises(ConfigError):
        RunConfig.from_sources(None, ["potential.variant"])


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.from_sources(str(tmp_path / "missing.ini"))
    bad = tmp_path / "bad.ini"
    bad.write_text("no section header\n")
    with pytest.raises(ConfigError):
        RunConfig.from_sources(str(bad))


def test_typed_views():
    cfg = RunConfig.default()
    t, x = cfg.grids()
    assert np.all(t > 0) and 0 not in x
    assert cfg.problem().green.variant == "free"
    cfg.set("potential.variant", "centrifugal")
    cfg.set("potential.lambda", "1.0")
    assert cfg.green_spec().is_centrifugal
    cfg.set("initial.kind", "superosc")
    with pytest.raises(ConfigError):
        cfg.initial()
    cfg.set("initial.k", "2.0")
    assert "F_16" in cfg.initial().name


def test_origin_only_allowed_for_free_particle():
    cfg = RunConfig.from_sources(None, ["grid.x=-1:1:3"])
    assert 0.0 in cfg.grids()[1]
    cfg.set("potential.variant", "point")
    with pytest.raises(ConfigError):
        cfg.grids()


@pytest.mark.parametrize("overrides", [
    ["potential.variant=harmonic"],
    ["grid.t=0,1"],
    ["grid.x="],
    ["contour.theta=2.0"],
    ["quadrature.rel_tol=1e-20"],
    ["initial.kind=gaussian"],
    ["potential.variant=centrifugal", "potential.lambda=-0.25"],
    ["potential.variant=point", "potential.alpha_re=0.5"],
])
def test_invalid_values_are_config_errors(overrides):
    cfg = RunConfig.from_sources(None, overrides)
    with pytest.raises(ValueError):
        cfg.problem()
        cfg.grids()
