from typing import List, Optional

import numpy as np


def chunk_bounds(total: int, chunk_size: int) -> List[range]:
    """Split ``range(total)`` into consecutive ranges of at most ``chunk_size``."""
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    return [range(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for ``key`` under ``seed``; the same key always yields the same stream."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def fmt_number(x: Optional[float], digits: int = 9) -> str:
    if x is None:
        return ''
    return f"{x:.{digits}g}"
