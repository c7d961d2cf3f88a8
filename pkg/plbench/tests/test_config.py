from pathlib import Path

import pytest

from plbench.workbench.config import DEFAULT_SEED, load_config


@pytest.fixture(autouse=True)
def isolated(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    for key in ("PLBENCH_SEED", "PLBENCH_RADII", "PLBENCH_RMAX", "PLBENCH_OUTPUT_DIR", "PLBENCH_CSV"):
        monkeypatch.delenv(key, raising=False)


def test_defaults() -> None:
    config = load_config()
    assert config.numerics.seed == DEFAULT_SEED
    assert config.limits.max_variables == 8
    assert config.output.directory is None
    assert ("numerics.radii", "13") in config.as_rows()


def test_toml_file_is_read(tmp_path: Path) -> None:
    path = tmp_path / "custom.toml"
    path.write_text("[numerics]\nangles = 4\n\n[output]\ncsv = true\n", encoding="utf-8")
    config = load_config(path)
    assert config.numerics.angles == 4
    assert config.output.csv is True


def test_environment_overrides_file(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    (tmp_path / "plbench.toml").write_text("[numerics]\nseed = 5\nradii = 6\n", encoding="utf-8")
    monkeypatch.setenv("PLBENCH_SEED", "11")
    config = load_config()
    assert config.numerics.seed == 11
    assert config.numerics.radii == 6


def test_dotenv_is_loaded(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    # registers the key so teardown removes what load_dotenv sets
    monkeypatch.setenv("PLBENCH_RMAX", "1e3")
    monkeypatch.delenv("PLBENCH_RMAX")
    (tmp_path / ".env").write_text("PLBENCH_RMAX=500\n", encoding="utf-8")
    config = load_config()
    assert config.numerics.rmax == 500.0


@pytest.mark.parametrize(("key", "value"), [("PLBENCH_SEED", "abc"), ("PLBENCH_RADII", "1"), ("PLBENCH_RMAX", "0.5")])
def test_invalid_values_raise(monkeypatch: pytest.MonkeyPatch, key: str, value: str) -> None:
    monkeypatch.setenv(key, value)
    with pytest.raises(ValueError):
        load_config()


def test_missing_config_file(tmp_path: Path) -> None:
    with pytest.raises(ValueError):
        load_config(tmp_path / "absent.toml")
