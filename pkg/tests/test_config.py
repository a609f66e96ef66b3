import pytest

from schemas.config import RunConfig
from utils.errors import ConfigError


def test_defaults():
    config = RunConfig()
    assert (config.sigma_threshold, config.window, config.dim, config.epochs) == (0.3, 40, 32, 100)
    assert (config.bandwidth, config.delta_threshold, config.top_n, config.seed) == (2.0, 0.3, 5, 0)
    assert config.threads == 1
    assert config.ascii_separator is False


def test_from_file(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text("top_n = 3\nwindow = 10\nsigma_threshold = 0.25\n", encoding="utf-8")
    config = RunConfig.from_file(str(path))
    assert (config.top_n, config.window, config.sigma_threshold) == (3, 10, 0.25)
    assert config.dim == 32


@pytest.mark.parametrize("text", [
    "unknown_key = 1\n",
    "top_n = 0\n",
    "sigma_threshold = 1.5\n",
    "input_format = \"xml\"\n",
    "window = [\n",
])
def test_bad_config_file(tmp_path, text):
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError) as exc:
        RunConfig.from_file(str(path))
    assert exc.value.exit_code == 1


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="Tidak bisa membaca"):
        RunConfig.from_file(str(tmp_path / "nope.toml"))


def test_overrides_skip_none():
    config = RunConfig().with_overrides(top_n=None, seed=9)
    assert config.top_n == 5
    assert config.seed == 9
    with pytest.raises(ConfigError):
        RunConfig().with_overrides(threads=0)


def test_fingerprint_tracks_algorithm_params_only():
    base = RunConfig()
    assert base.fingerprint() == RunConfig().fingerprint()
    assert base.with_overrides(threads=4, output_path="x.tsv").fingerprint() == base.fingerprint()
    assert base.with_overrides(window=10).fingerprint() != base.fingerprint()
