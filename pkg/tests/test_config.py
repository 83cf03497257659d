import pytest
from pydantic import ValidationError

from os_aio_pod.utils import load_module_from_pyfile, vars_from_module
from os_vilenkin.config import OutputFormat, RunConfig


@pytest.fixture
def config():
    def _config(config_file):
        module = load_module_from_pyfile(config_file)
        return RunConfig.parse_obj(vars_from_module(module))

    return _config


def test_empty_config(config):
    conf = config("tests/configs/empty.py")
    default = RunConfig()
    for k, v in default:
        assert getattr(conf, k) == v


def test_output_format(config):
    conf = config("tests/configs/csv_format.py")
    assert conf.format == OutputFormat.CSV
    assert conf.p == 3


def test_time_limit(config):
    conf = config("tests/configs/time_limit.py")
    assert conf.time_limit == 1.5
    with pytest.raises(ValidationError):
        RunConfig(time_limit=-1)

    conf = RunConfig(time_limit=None)
    assert conf.time_limit is None


def test_commands(config):
    conf = config("tests/configs/commands.py")
    assert conf.COMMANDS[0].cls is None
    assert conf.COMMANDS[1].name == "echo"
    assert conf.COMMANDS[1].cls.__name__ == "EchoCommand"


@pytest.mark.parametrize("p", [0, 1, 4, 9])
def test_prime_validation(p):
    with pytest.raises(ValidationError) as e:
        RunConfig(p=p)
    assert "p must be prime ≥ 2" in str(e.value)


def test_size_guard():
    RunConfig(p=2, r=19, levels=0)
    with pytest.raises(ValidationError):
        RunConfig(p=2, r=20)
    with pytest.raises(ValidationError):
        RunConfig(p=5, levels=5, r=4)


def test_positive_parameters():
    with pytest.raises(ValidationError):
        RunConfig(s=0)
    with pytest.raises(ValidationError):
        RunConfig(tolerance=-1e-9)


def test_env_prefix(monkeypatch):
    monkeypatch.setenv("OS_VILENKIN_P", "5")
    assert RunConfig().p == 5
