"""Persistent cache of sense-pair relatedness values.

A cache file is a 48-byte header followed by fixed 16-byte records,
little-endian, strictly sorted by (lo, hi) sense index.  Unreachable
pairs are encoded by absence; identity pairs are never stored (callers
compute the identity clause live).  The header carries a fingerprint of
the source graph, so lookups against a different thesaurus are refused,
plus the build scope (seed mode, budget, completeness) so callers can
tell "not cached" apart from "not connected".

Lookups use positional reads, so one open cache serves any number of
concurrent readers; records are reachable by binary search without
scanning the file.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .pathfinder import max_relatedness, relatedness_to_targets
from .termrel import CacheMismatchError
from .thesaurus import SenseId, ThesaurusGraph

MAGIC = b"SRPAIRS1"
FORMAT_VERSION = 1

# magic, version, fingerprint, record count, seed mode, exhaustive,
# cross-POS-excluded flag, pad, budget
_HEADER = struct.Struct("<8sI16sQBBBBQ")
_RECORD = struct.Struct("<IId")

SEEDS_ALL = 0
SEEDS_SUBSET = 1


class StoreError(RuntimeError):
    """Unreadable or inconsistent cache file."""


class PairCache:
    """Read handle over a completed cache file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._fh = open(self.path, "rb")
        header = os.pread(self._fh.fileno(), _HEADER.size, 0)
        if len(header) < _HEADER.size:
            raise StoreError(f"{self.path}: truncated header")
        (magic, version, fingerprint, count, seeds_mode, exhaustive,
         simple, _pad, budget) = _HEADER.unpack(header)
        if magic != MAGIC:
            raise StoreError(f"{self.path}: bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise StoreError(f"{self.path}: unsupported version {version}")
        expected = _HEADER.size + count * _RECORD.size
        if self.path.stat().st_size != expected:
            raise StoreError(
                f"{self.path}: size mismatch, expected {expected} bytes")
        self.fingerprint = fingerprint
        self.record_count = count
        self.seeds_mode = seeds_mode
        self.exhaustive = bool(exhaustive)
        self.simple = bool(simple)
        self.budget = budget

    @property
    def covers_all_pairs(self) -> bool:
        """Absence may be read as zero relatedness only for a complete
        all-seeds build."""
        return self.seeds_mode == SEEDS_ALL and self.exhaustive

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "PairCache":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def validate_for(self, graph: ThesaurusGraph) -> None:
        if self.fingerprint != graph.fingerprint:
            raise CacheMismatchError(
                f"{self.path}: cache fingerprint does not match the "
                "loaded thesaurus")

    def record(self, i: int) -> tuple[int, int, float]:
        if not (0 <= i < self.record_count):
            raise IndexError(i)
        raw = os.pread(self._fh.fileno(), _RECORD.size,
                       _HEADER.size + i * _RECORD.size)
        return _RECORD.unpack(raw)

    def lookup_by_index(self, i: int, j: int) -> float | None:
        lo, hi = (i, j) if i <= j else (j, i)
        if lo == hi:
            return None
        left, right = 0, self.record_count
        while left < right:
            mid = (left + right) // 2
            rlo, rhi, value = self.record(mid)
            if (rlo, rhi) == (lo, hi):
                return value
            if (rlo, rhi) < (lo, hi):
                left = mid + 1
            else:
                right = mid
        return None

    def lookup(self, s1: SenseId, s2: SenseId) -> float | None:
        return self.lookup_by_index(s1.index, s2.index)


def precompute(
    graph: ThesaurusGraph,
    path: str | Path,
    seeds: str | Iterable[SenseId] = "all",
    budget: int = 1_000_000,
    *,
    exclude_cross_pos: bool = False,
) -> PairCache:
    """Compute and store relatedness for pairs reachable from the seeds.

    Seeds are swept in ascending index order; each sweep records pairs
    whose other endpoint has a higher index, so every stored value is the
    one a live search from the lower index produces.  Writing stops once
    ``budget`` records exist; a truncated or seeded build is marked
    non-exhaustive in the header.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if isinstance(seeds, str):
        if seeds != "all":
            raise ValueError(f"seeds must be 'all' or sense ids: {seeds!r}")
        seed_indices = list(range(len(graph.senses)))
        seeds_mode = SEEDS_ALL
    else:
        seed_indices = sorted({s.index for s in seeds})
        for i in seed_indices:
            if not (0 <= i < len(graph.senses)):
                raise ValueError(f"seed index out of range: {i}")
        seeds_mode = SEEDS_SUBSET

    path = Path(path)
    truncated = False
    count = 0
    with open(path, "wb") as out:
        out.write(b"\0" * _HEADER.size)
        for i in seed_indices:
            if count >= budget:
                truncated = True
                break
            source = graph.senses[i]
            targets = [graph.senses[j] for j in range(i + 1, len(graph.senses))]
            if not targets:
                continue
            found = relatedness_to_targets(
                graph, source, targets, "sr",
                exclude_cross_pos=exclude_cross_pos)
            for j in sorted(found):
                rel = found[j]
                if rel.value == 0.0 and rel.witness is None:
                    continue
                if count >= budget:
                    truncated = True
                    break
                out.write(_RECORD.pack(i, j, rel.value))
                count += 1
        exhaustive = seeds_mode == SEEDS_ALL and not truncated
        out.seek(0)
        out.write(_HEADER.pack(
            MAGIC, FORMAT_VERSION, graph.fingerprint, count,
            seeds_mode, int(exhaustive), int(exclude_cross_pos), 0,
            budget))
    return PairCache(path)


@dataclass(frozen=True)
class CacheReport:
    """Outcome of sampling a cache against live recomputation."""

    sampled: int
    mismatches: int
    max_abs_deviation: float

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def verify_cache(
    cache: PairCache,
    graph: ThesaurusGraph,
    sample_size: int,
    *,
    seed: int = 0,
) -> CacheReport:
    """Recompute a uniform random sample of records live and report the
    worst deviation; a valid cache deviates by zero in every bit."""
    cache.validate_for(graph)
    n = cache.record_count
    take = min(sample_size, n)
    if take == 0:
        return CacheReport(0, 0, 0.0)
    rng = np.random.default_rng(seed)
    picks = rng.choice(n, size=take, replace=False)
    mismatches = 0
    worst = 0.0
    for i in sorted(int(p) for p in picks):
        lo, hi, stored = cache.record(i)
        live = max_relatedness(
            graph, graph.senses[lo], graph.senses[hi], "sr",
            exclude_cross_pos=cache.simple).value
        if stored != live:
            mismatches += 1
            worst = max(worst, abs(stored - live))
    return CacheReport(take, mismatches, worst)
