"""Shared helpers: deterministic seed derivation and atomic file writes."""

from __future__ import annotations

import os
import tempfile
import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(root: int, stage: str, index: int = 0) -> np.random.SeedSequence:
    """Derive a per-stage seed from a root seed.

    The derivation is (root, crc32(stage), index) fed to a SeedSequence, so a
    single root seed replays an entire multi-stage run while stages and
    repeated runs within a stage stay statistically independent.
    """
    return np.random.SeedSequence(
        (int(root) & _MASK64, zlib.crc32(stage.encode("utf8")), int(index))
    )


def as_rng(seed) -> np.random.Generator:
    """Accept an int, SeedSequence, Generator, or None and return a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write a whole file via temp-file + rename so readers never see partial output."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp.", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fmt_real(x: float) -> str:
    """Format a real with 17 significant digits (bit-exact float round trip)."""
    return format(float(x), ".17g")
