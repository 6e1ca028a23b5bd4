# services/estimators/blocks.py
"""
Block variances of a pulse record: the noise trace against LO phase.

Blocks are non-overlapping and fixed-size; a trailing partial block is
dropped. Each block variance is the unbiased (n−1) sample variance,
converted to SNU by dividing by snl_raw. Within a block numpy's pairwise
summation is used on the contiguous row, so results do not depend on how
many blocks are evaluated together.
"""

from __future__ import annotations
import math
from typing import Iterable, List, Tuple, Union

import numpy as np

from squeeze_config import DEFAULT_BLOCK_SIZE
from services.homodyne import PulseRecord
from .models import VarianceTrace

PulseStream = Union[Tuple[np.ndarray, np.ndarray], Iterable[PulseRecord]]


def variance_stderr(v: float, n: int) -> float:
    """Standard error of an unbiased Gaussian sample variance: v·√(2/(n−1))."""
    if n < 2:
        raise ValueError(f"need n >= 2 samples, got {n}")
    if v <= 0:
        raise ValueError(f"variance must be positive, got {v}")
    return v * math.sqrt(2.0 / (n - 1))


def as_arrays(stream: PulseStream) -> Tuple[np.ndarray, np.ndarray]:
    """(phases, values) from either an array pair or an iterable of PulseRecords."""
    if isinstance(stream, tuple) and len(stream) == 2 and isinstance(stream[0], np.ndarray):
        phases, values = stream
        return np.asarray(phases, dtype=float), np.asarray(values, dtype=float)
    records = list(stream)
    phases = np.fromiter((r.lo_phase for r in records), dtype=float, count=len(records))
    values = np.fromiter((r.value for r in records), dtype=float, count=len(records))
    return phases, values


def block_layout(n_pulses: int, block_size: int) -> Tuple[int, int]:
    """(number of full blocks, number of trailing pulses dropped)."""
    return n_pulses // block_size, n_pulses % block_size


def block_variances(
    stream: PulseStream,
    block_size: int = DEFAULT_BLOCK_SIZE,
    *,
    snl_raw: float,
) -> List[VarianceTrace]:
    if snl_raw <= 0:
        raise ValueError(f"snl_raw must be positive, got {snl_raw}")
    if block_size < 2:
        raise ValueError(f"block_size must be >= 2, got {block_size}")

    phases, values = as_arrays(stream)
    if values.size == 0:
        raise ValueError("empty pulse stream")
    if values.size < block_size:
        raise ValueError(f"stream has {values.size} pulses, fewer than one block of {block_size}")

    n_blocks, dropped = block_layout(values.size, block_size)
    if dropped:
        print(f"⚠️ dropped {dropped} trailing pulse(s) outside the last full block")

    used = n_blocks * block_size
    v_blocks = values[:used].reshape(n_blocks, block_size)
    p_blocks = phases[:used].reshape(n_blocks, block_size)

    variances = np.var(v_blocks, axis=1, ddof=1) / snl_raw
    phase_mid = np.mean(p_blocks, axis=1)

    traces = []
    for k in range(n_blocks):
        v = float(variances[k])
        degenerate = v == 0.0
        traces.append(VarianceTrace(
            block_index=k,
            phase_mid=float(phase_mid[k]),
            variance_snu=v,
            stderr_snu=0.0 if degenerate else variance_stderr(v, block_size),
            degenerate=degenerate,
        ))
    degenerate_count = sum(t.degenerate for t in traces)
    if degenerate_count:
        print(f"⚠️ {degenerate_count} degenerate block(s) with zero variance")
    return traces
