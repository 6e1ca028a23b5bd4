# services/homodyne/rng.py
"""
Seeded, splittable random streams for pulse generation.

The pulse record is cut into fixed-size chunks. Chunk k draws from
    numpy.random.Generator(PCG64(SeedSequence([master_seed, k])))
so any chunk can be generated independently: serial and parallel
generation produce the same stream. RNG_ALGORITHM names this derivation
in every file header.
"""

from __future__ import annotations

import numpy as np

from squeeze_config import RNG_ALGORITHM


def chunk_generator(master_seed: int, chunk_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence([int(master_seed), int(chunk_index)])
    return np.random.Generator(np.random.PCG64(seq))


def chunk_bounds(n_pulses: int, chunk_size: int, chunk_index: int) -> tuple[int, int]:
    """Half-open pulse index range [start, stop) covered by a chunk."""
    start = chunk_index * chunk_size
    return start, min(start + chunk_size, n_pulses)


def level_generator(master_seed: int, level_index: int) -> np.random.Generator:
    """Independent stream per LO level of a shot-noise scan."""
    seq = np.random.SeedSequence([int(master_seed), 0x5C0, int(level_index)])
    return np.random.Generator(np.random.PCG64(seq))


def rng_identifier() -> str:
    return RNG_ALGORITHM
