import pytest

from core.settings import Settings, get_settings, load_env_file


def test_defaults():
    s = get_settings()
    assert (s.tol, s.seed, s.fd_step, s.workers, s.log_level) == (1e-8, 0, 1e-6, 4, "WARNING")
    assert get_settings() is s


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("NEUTRAL_GEOM_SEED", "42")
    monkeypatch.setenv("NEUTRAL_GEOM_TOL", "1e-6")
    monkeypatch.setenv("NEUTRAL_GEOM_WORKERS", "")
    s = get_settings()
    assert (s.seed, s.tol, s.workers) == (42, 1e-6, 4)


@pytest.mark.parametrize("key, value", [("NEUTRAL_GEOM_TOL", "-1"), ("NEUTRAL_GEOM_WORKERS", "zero")])
def test_invalid_environment_value(monkeypatch, key, value):
    monkeypatch.setenv(key, value)
    with pytest.raises(RuntimeError, match=key):
        get_settings()


def test_env_file_wins_over_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("NEUTRAL_GEOM_SEED", "1")
    monkeypatch.setenv("NEUTRAL_GEOM_WORKERS", "2")
    env = tmp_path / "run.env"
    env.write_text("NEUTRAL_GEOM_SEED=9\nNEUTRAL_GEOM_FD_STEP=1e-5\n", encoding="utf-8")
    s = load_env_file(str(env))
    assert (s.seed, s.fd_step, s.workers) == (9, 1e-5, 2)
    assert get_settings() is s


def test_missing_env_file(tmp_path):
    with pytest.raises(RuntimeError, match="not found"):
        load_env_file(str(tmp_path / "missing.env"))


def test_with_overrides():
    base = Settings()
    s = base.with_overrides(tol=1e-4, seed=None)
    assert (s.tol, s.seed) == (1e-4, 0)
    assert base.tol == 1e-8
    with pytest.raises(ValueError):
        base.with_overrides(tol=0.0)
