"""Counter-based uniform random streams (splitmix64 finalizer chains).

Every value is a pure function of (seed, sample index, column), so any
partitioning of the sample range across workers reproduces the same numbers
and a failing sample can be regenerated from its index alone.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_INV53 = float(2.0**-53)


def _finalize(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _seed_u64(seed: int) -> np.uint64:
    return np.uint64(seed & 0xFFFFFFFFFFFFFFFF)


def _columns(n_cols: int) -> np.ndarray:
    return (np.arange(1, n_cols + 1, dtype=np.uint64) * _GAMMA)[None, :]


def _to_unit(bits: np.ndarray) -> np.ndarray:
    return (bits >> np.uint64(11)).astype(np.float64) * _INV53


def uniform_block(seed: int, start: int, stop: int, n_cols: int) -> np.ndarray:
    """Uniforms in [0, 1) for sample indices [start, stop), shape (stop-start, n_cols)."""
    with np.errstate(over="ignore"):
        base = _finalize((_seed_u64(seed) + np.uint64(1)) * _GAMMA)
        idx = np.arange(start + 1, stop + 1, dtype=np.uint64)
        keys = _finalize(base + idx * _GAMMA)[:, None]
        return _to_unit(_finalize(keys + _columns(n_cols)))


def uniform_rows_for_seeds(seeds: np.ndarray, n_cols: int) -> np.ndarray:
    """One row of uniforms per seed: row k equals uniform_block(seeds[k], 0, 1, n_cols)."""
    with np.errstate(over="ignore"):
        base = _finalize((seeds.astype(np.uint64) + np.uint64(1)) * _GAMMA)
        keys = _finalize(base + _GAMMA)[:, None]
        return _to_unit(_finalize(keys + _columns(n_cols)))
