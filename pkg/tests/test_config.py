import pytest

from mural.config import PRESETS, Config, load_config


def test_defaults():
    cfg = Config()
    assert (cfg.levels, cfg.window, cfg.eta) == (4, 20, 20)
    assert (cfg.budget, cfg.warmup, cfg.cadence) == (30, 10, 2)
    assert cfg.queries_per_round == 2
    assert cfg.init_threshold == "elbow"
    assert cfg.eps is None


def test_presets():
    assert set(PRESETS) == {"babyecg", "ucihar", "honeybee", "uschad"}
    assert (PRESETS["babyecg"].levels, PRESETS["babyecg"].window) == (5, 15)
    assert PRESETS["babyecg"].eta == 15
    assert (PRESETS["ucihar"].levels, PRESETS["ucihar"].window, PRESETS["ucihar"].eta) == (2, 12, 8)
    assert (PRESETS["honeybee"].levels, PRESETS["honeybee"].window) == (5, 30)
    assert (PRESETS["uschad"].levels, PRESETS["uschad"].window, PRESETS["uschad"].eta) == (6, 100, 100)


def test_load_config_overrides(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text(
        "# experiment settings\n"
        "levels = 5\n"
        "window=30   # inline comment\n"
        "\n"
        "eta = 15\n"
        "init_threshold = max\n"
        "eps = 1e-5\n"
        "optimizer.evaluations = 80\n"
        "optimizer_grid_size = 100\n"
    )
    cfg = load_config(f)
    assert (cfg.levels, cfg.window, cfg.eta) == (5, 30, 15)
    assert cfg.init_threshold == "max"
    assert cfg.eps == pytest.approx(1e-5)
    assert cfg.optimizer_evaluations == 80
    assert cfg.optimizer_grid_size == 100
    assert cfg.budget == 30  # untouched default


def test_load_config_eps_adaptive(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("eps = adaptive\n")
    assert load_config(f, base=Config(eps=1e-4)).eps is None


def test_load_config_errors(tmp_path):
    bad_key = tmp_path / "a.cfg"
    bad_key.write_text("depth = 3\n")
    with pytest.raises(ValueError, match="line 1"):
        load_config(bad_key)
    bad_value = tmp_path / "b.cfg"
    bad_value.write_text("levels = deep\n")
    with pytest.raises(ValueError, match="line 1"):
        load_config(bad_value)
    no_eq = tmp_path / "c.cfg"
    no_eq.write_text("levels\n")
    with pytest.raises(ValueError, match="key = value"):
        load_config(no_eq)


def test_config_validation():
    for kwargs in (
        {"levels": 0},
        {"window": 1},
        {"eta": -1},
        {"budget": -1},
        {"cadence": 0},
        {"queries_per_round": 3},
        {"seed": -1},
        {"init_threshold": "median"},
        {"normalize": "channel"},
        {"eps": 0.0},
        {"optimizer_evaluations": 0},
        {"optimizer_grid_size": 1},
        {"optimizer_weight_max": 0.0},
    ):
        with pytest.raises(ValueError):
            Config(**kwargs)
