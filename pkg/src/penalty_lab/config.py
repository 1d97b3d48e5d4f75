"""
Flat ``key = value`` experiment configuration files.

    # naive exponential sweep
    model_family = exponential
    L = 20
    bias_regime = naive
    m = 5
    n_values = 2-30
    mechanisms = 2BPB, MPlus1, FCFS, FirstBestWelfare, FirstBestUtilization
    fcfs_penalties = 5, 2.5, 0
    replicates = 10000
    seed = 7

Lists are comma separated; ``n_values`` also accepts inclusive ranges.
"""
import os
from typing import Any, Callable, Dict, List, Mapping, Optional

from pydantic import ValidationError

from .constants import THREADS_ENV_VAR
from .datatypes import ExperimentConfig, PopulationSpec


class ConfigError(ValueError):

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _split(text: str) -> List[str]:
    return [part.strip() for part in text.split(',') if part.strip()]


def _parse_n_values(text: str) -> List[int]:
    values = []
    for part in _split(text):
        if '-' in part[1:]:
            lo, hi = part.split('-', 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(part))
    return values


POPULATION_KEYS = ('model_family', 'L', 'bias_regime', 'array_awareness')

PARSERS: Dict[str, Callable[[str], Any]] = {
    'model_family': str.strip,
    'L': float,
    'bias_regime': str.strip,
    'array_awareness': str.strip,
    'm': int,
    'n_values': _parse_n_values,
    'mechanisms': _split,
    'fcfs_penalties': lambda text: [float(x) for x in _split(text)],
    'replicates': int,
    'seed': int,
    'per_agent_stats': _parse_bool,
    'fb_cipi_allow_transfers': _parse_bool,
    'check_invariants': _parse_bool,
}


def parse_config_text(text: str) -> Dict[str, Any]:
    """Parse config text into typed values keyed by config key."""
    values: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", field=key)
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}", field=key)
        try:
            values[key] = PARSERS[key](value)
        except ValueError as err:
            raise ConfigError(f"{key}: {err}", field=key) from err
    return values


def build_config(values: Mapping[str, Any]) -> ExperimentConfig:
    """Validate parsed values; errors name the offending config key."""
    values = dict(values)
    population = {key: values.pop(key) for key in POPULATION_KEYS if key in values}
    try:
        return ExperimentConfig(population=PopulationSpec(**population), **values)
    except ValidationError as err:
        first = err.errors()[0]
        field = next((p for p in reversed(first['loc']) if isinstance(p, str)), None)
        raise ConfigError(f"{field or 'config'}: {first['msg']}", field=field) from err


def load_config(path: str, overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err.strerror}") from err
    values = parse_config_text(text)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_config(values)


def worker_cap_from_env() -> Optional[int]:
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or not raw.strip():
        return None
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        raise ConfigError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}",
                          field=THREADS_ENV_VAR)
    return cap


def resolve_workers(requested: Optional[int] = None) -> int:
    """Worker processes: the request (or CPU count), capped by the environment."""
    workers = requested if requested is not None else (os.cpu_count() or 1)
    cap = worker_cap_from_env()
    if cap is not None:
        workers = min(workers, cap)
    return max(workers, 1)
