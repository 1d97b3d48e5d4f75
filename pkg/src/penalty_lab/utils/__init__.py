from .utils import chunk_bounds, derive_rng, fmt_number
