import pytest

from penalty_lab.config import (
    ConfigError,
    build_config,
    load_config,
    parse_config_text,
    resolve_workers,
    worker_cap_from_env,
)

EXAMPLE = """
# naive exponential sweep
model_family = exponential
L = 20
bias_regime = naive
m = 5
n_values = 2-4, 10
mechanisms = 2BPB, MPlus1, FCFS
fcfs_penalties = 5, 2.5, 0
replicates = 100
seed = 7   # fixed
per_agent_stats = yes
"""


def test_parse_and_build():
    values = parse_config_text(EXAMPLE)
    assert values['n_values'] == [2, 3, 4, 10]
    assert values['fcfs_penalties'] == [5.0, 2.5, 0.0]
    assert values['per_agent_stats'] is True

    cfg = build_config(values)
    assert cfg.population.model_family == 'exponential'
    assert cfg.population.L == 20.0
    assert cfg.mechanisms == ['2BPB', 'MPlus1', 'FCFS']
    assert cfg.seed == 7
    assert cfg.check_invariants


@pytest.mark.parametrize('text, field', [
    ('color = red', 'color'),
    ('m = 1\nm = 2', 'm'),
    ('m = two', 'm'),
    ('n_values = 5-2', 'n_values'),
    ('per_agent_stats = maybe', 'per_agent_stats'),
])
def test_parse_errors_name_the_key(text, field):
    with pytest.raises(ConfigError) as err:
        parse_config_text(text)
    assert err.value.field == field
    assert field in str(err.value)


def test_missing_equals_sign():
    with pytest.raises(ConfigError, match='line 1'):
        parse_config_text('m 5')


@pytest.mark.parametrize('text, field', [
    ('m = 0', 'm'),
    ('bias_regime = stubborn', 'bias_regime'),
    ('mechanisms = 2BPB, Lottery', 'mechanisms'),
    ('L = -1', 'L'),
    ('fcfs_penalties = 1, 1', 'fcfs_penalties'),
])
def test_validation_errors_name_the_key(text, field):
    with pytest.raises(ConfigError) as err:
        build_config(parse_config_text(text))
    assert err.value.field == field
    assert str(err.value).startswith(field)


def test_load_config_with_overrides(tmp_path):
    path = tmp_path / 'sweep.cfg'
    path.write_text(EXAMPLE, encoding='utf-8')
    cfg = load_config(str(path), {'seed': 99, 'replicates': None})
    assert cfg.seed == 99
    assert cfg.replicates == 100


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match='cannot read config'):
        load_config(str(tmp_path / 'absent.cfg'))


def test_worker_cap(monkeypatch):
    monkeypatch.delenv('PENALTY_LAB_THREADS', raising=False)
    assert worker_cap_from_env() is None
    assert resolve_workers(3) == 3

    monkeypatch.setenv('PENALTY_LAB_THREADS', '2')
    assert resolve_workers(3) == 2
    assert resolve_workers(1) == 1
    assert resolve_workers() <= 2

    monkeypatch.setenv('PENALTY_LAB_THREADS', 'zero')
    with pytest.raises(ConfigError):
        resolve_workers(3)
