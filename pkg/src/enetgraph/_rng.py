"""Seed derivation shared by every stochastic stage.

All randomness flows from a master seed through ``derive_rng``; streams are
keyed by a stage label plus integer indices so that adding cells to an
experiment never perturbs the streams of existing cells.
"""
from __future__ import annotations

import zlib

import numpy as np

__all__ = ["derive_seed_sequence", "derive_rng"]


def _label_key(label: str) -> int:
    return zlib.crc32(label.encode("utf-8"))


def derive_seed_sequence(master_seed: int, label: str, *indices: int) -> np.random.SeedSequence:
    """Deterministic child seed for (master, stage label, cell indices)."""
    return np.random.SeedSequence(entropy=[int(master_seed), _label_key(label), *map(int, indices)])


def derive_rng(master_seed: int, label: str, *indices: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed_sequence(master_seed, label, *indices))
