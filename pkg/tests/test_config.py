from pathlib import Path

import pytest

from netsampler.config import Aggregation, PropertyName, RunConfig, load_config, parse_config
from netsampler.defaults import DEFAULTS, get_default, get_float
from netsampler.errors import ConfigError
from netsampler.samplers import ALL_TECHNIQUES, Technique


def test_defaults_registry(monkeypatch):
    assert get_float("fraction") == 0.15
    monkeypatch.setenv("NETSAMPLER_RUNS", "7")
    assert get_default("runs") == "7"
    with pytest.raises(ValueError):
        get_default("nonsense")
    assert set(DEFAULTS) >= {"fraction", "runs", "flyback_c", "forward_burning_p"}


def test_load_fixture_config(toy_path):
    config = load_config(toy_path.parent / "toy.cfg")
    assert config.master_seed == 7
    assert config.runs == 3
    assert config.techniques == [Technique.RNS, Technique.RLS, Technique.RWS, Technique.FFS]
    assert config.properties == [PropertyName.DEGREE_DIST, PropertyName.AVG_DEGREE]
    (dataset,) = config.datasets
    assert dataset.name == "toy"
    assert dataset.path == toy_path.parent / "toy.txt"
    assert (dataset.expected_n, dataset.expected_m) == (5, 5)


def test_defaults_fill_missing_keys():
    config = parse_config("dataset.g = /data/g.txt")
    assert config.techniques == list(ALL_TECHNIQUES)
    assert config.properties == list(PropertyName)
    assert config.fraction == 0.15
    assert config.runs == 100
    assert config.aggregation == Aggregation.MEAN
    assert not config.paired


def test_relative_dataset_paths_resolve_against_base_dir(tmp_path):
    config = parse_config("dataset.g = sub/g.txt", base_dir=tmp_path)
    assert config.datasets[0].path == tmp_path / "sub" / "g.txt"


def test_lowercase_techniques_and_duplicates():
    config = parse_config("techniques = rns, FFI, rns\ndataset.g = g.txt")
    assert config.techniques == [Technique.RNS, Technique.FFI]


def test_overrides_win_over_file():
    config = parse_config("runs = 10\ndataset.g = g.txt", runs=2, paired=True)
    assert config.runs == 2
    assert config.paired


def test_none_overrides_are_ignored():
    config = parse_config("runs = 10\ndataset.g = g.txt", runs=None)
    assert config.runs == 10


@pytest.mark.parametrize(
    "text",
    [
        "fraction = 0\ndataset.g = g.txt",
        "fraction = 1.5\ndataset.g = g.txt",
        "runs = 0\ndataset.g = g.txt",
        "techniques = XYZ\ndataset.g = g.txt",
        "properties = diameter\ndataset.g = g.txt",
        "runs = 10",
        "sweep_fractions = 0.5, 1.5\ndataset.g = g.txt",
    ],
)
def test_invalid_values(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_unknown_key_names_the_key():
    with pytest.raises(ConfigError) as info:
        parse_config("colour = blue\ndataset.g = g.txt")
    assert info.value.key == "colour"


def test_bad_expected_count():
    with pytest.raises(ConfigError) as info:
        parse_config("dataset.g = g.txt, many")
    assert info.value.key == "dataset.g"


def test_too_many_dataset_fields():
    with pytest.raises(ConfigError):
        parse_config("dataset.g = g.txt, 1, 2, 3")


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")


def test_sweep_fractions_sorted_and_unique():
    config = parse_config("sweep_fractions = 0.5, 0.1, 0.5\ndataset.g = g.txt")
    assert config.sweep_fractions == [0.1, 0.5]


def test_duplicate_dataset_names_rejected():
    with pytest.raises(ValueError):
        RunConfig(datasets=[{"name": "a", "path": "x"}, {"name": "a", "path": "y"}])


def test_sampler_spec_carries_run_settings():
    config = parse_config("fraction = 0.2\nflyback_c = 0.3\ndataset.g = g.txt")
    spec = config.sampler_spec(Technique.RWI, seed=5, induction_fraction=0.4)
    assert spec.target_fraction == 0.2
    assert spec.flyback_c == 0.3
    assert spec.induction_fraction == 0.4
    assert config.sampler_spec(Technique.RWI, seed=5).induction_fraction == 1.0


def test_environment_expansion(monkeypatch, tmp_path):
    monkeypatch.setenv("DATA_ROOT", str(tmp_path))
    config = parse_config("dataset.g = ${DATA_ROOT}/g.txt")
    assert config.datasets[0].path == Path(tmp_path) / "g.txt"
