"""Driving-term censuses: counts of cyclic runs of gaps by span and length.

A driving term for a gap g is a contiguous run of gaps summing to g. Runs are
taken cyclically, so a run may wrap past the end of the stored cycle; each run
is owned by its start index and counted once.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from gapcycles.cycle import GapCycle
from gapcycles.errors import PreconditionError

CYCLIC_CONVENTION = "cyclic"
CHUNK_STARTS = 1 << 22
CLASSES = ("a", "b", "c", "d")


@dataclass(frozen=True)
class DrivingTermCensus:
    """Counts ``n_{g,j}`` of driving terms for ``gap`` by length ``j``."""

    prime: int
    gap: int
    counts: dict[int, int] = field(default_factory=dict)
    truncated: bool = False

    @property
    def max_length(self) -> int:
        nonzero = [j for j, n in self.counts.items() if n]
        return max(nonzero, default=0)

    def __getitem__(self, j: int) -> int:
        return self.counts.get(j, 0)

    def vector(self, J: int | None = None) -> list[int]:
        """Counts for lengths 1..J as a dense list."""
        J = self.max_length if J is None else J
        return [self.counts.get(j, 0) for j in range(1, J + 1)]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class SubpopulationCensus:
    """Driving terms split by whether the first and last gaps are 2.

    Class ``a`` holds X...X runs and every length-1 run, ``b`` X...2,
    ``c`` 2...X and ``d`` 2...2.
    """

    prime: int
    gap: int
    a: dict[int, int] = field(default_factory=dict)
    b: dict[int, int] = field(default_factory=dict)
    c: dict[int, int] = field(default_factory=dict)
    d: dict[int, int] = field(default_factory=dict)

    def classes(self) -> dict[str, dict[int, int]]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}

    def merged(self) -> DrivingTermCensus:
        total: dict[int, int] = defaultdict(int)
        for counts in self.classes().values():
            for j, n in counts.items():
                total[j] += n
        return DrivingTermCensus(self.prime, self.gap, dict(sorted(total.items())))

    def class_total(self, name: str) -> int:
        return sum(self.classes()[name].values())

    @property
    def max_length(self) -> int:
        return max((j for cls in self.classes().values() for j, n in cls.items() if n), default=0)


def _check_gap(cycle: GapCycle, gap: int) -> None:
    if gap < 2 or gap % 2:
        raise PreconditionError(f"gap must be even and at least 2, got {gap}")
    if gap > cycle.span:
        raise PreconditionError(f"gap {gap} exceeds the span {cycle.span} of G({cycle.prime}#)")


def _cyclic_slice(gaps: np.ndarray, start: int, size: int) -> np.ndarray:
    n = gaps.size
    start %= n
    if start + size <= n:
        return gaps[start : start + size]
    return np.concatenate([gaps[start:], gaps[: size - (n - start)]])


def _window_sums(
    gaps: np.ndarray, start: int, stop: int, limit: int, max_len: int | None
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(j, sums)`` where ``sums[i]`` is the span of the length-j run
    starting at ``start + i``. Stops once every run exceeds ``limit``; a final
    ``(-1, sums)`` marks a scan cut short by ``max_len``."""
    size = stop - start
    sums = np.zeros(size, dtype=np.int32)
    j = 0
    while True:
        j += 1
        if max_len is not None and j > max_len:
            yield -1, sums
            return
        sums += _cyclic_slice(gaps, start + j - 1, size)
        yield j, sums
        if int(sums.min()) > limit:
            return


def _chunks(n: int, chunk: int = CHUNK_STARTS) -> list[tuple[int, int]]:
    return [(s, min(s + chunk, n)) for s in range(0, n, chunk)]


def _map_chunks(fn: Callable[[int, int], dict], n: int, threads: int) -> list[dict]:
    bounds = _chunks(n)
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda b: fn(*b), bounds))
    return [fn(*b) for b in bounds]


def census_gap(
    cycle: GapCycle, gap: int, max_len: int | None = None, *, threads: int = 1
) -> DrivingTermCensus:
    """Count the runs of span ``gap`` in ``cycle`` by length."""
    _check_gap(cycle, gap)

    def scan(start: int, stop: int) -> dict:
        counts: dict[int, int] = {}
        truncated = False
        for j, sums in _window_sums(cycle.gaps, start, stop, gap, max_len):
            if j == -1:
                truncated = bool((sums < gap).any())
                break
            hits = int(np.count_nonzero(sums == gap))
            if hits:
                counts[j] = hits
        return {"counts": counts, "truncated": truncated}

    merged: dict[int, int] = defaultdict(int)
    truncated = False
    for part in _map_chunks(scan, cycle.length, threads):
        truncated |= part["truncated"]
        for j, n in part["counts"].items():
            merged[j] += n
    return DrivingTermCensus(cycle.prime, gap, dict(sorted(merged.items())), truncated)


def census_all(
    cycle: GapCycle, max_gap: int, *, threads: int = 1
) -> dict[int, DrivingTermCensus]:
    """Censuses for every even gap up to ``max_gap`` in one pass."""
    if max_gap < 2 or max_gap % 2:
        raise PreconditionError(f"max_gap must be even and at least 2, got {max_gap}")
    if max_gap > cycle.span:
        raise PreconditionError(f"max_gap {max_gap} exceeds the span {cycle.span}")

    def scan(start: int, stop: int) -> dict:
        table: dict[int, np.ndarray] = {}
        for j, sums in _window_sums(cycle.gaps, start, stop, max_gap, None):
            small = sums[sums <= max_gap]
            if small.size:
                table[j] = np.bincount(small, minlength=max_gap + 1).astype(np.int64)
        return table

    totals: dict[int, np.ndarray] = {}
    for part in _map_chunks(scan, cycle.length, threads):
        for j, row in part.items():
            totals[j] = totals[j] + row if j in totals else row

    out = {}
    for g in range(2, max_gap + 1, 2):
        counts = {j: int(row[g]) for j, row in sorted(totals.items()) if row[g]}
        out[g] = DrivingTermCensus(cycle.prime, g, counts)
    return out


def census_subpop(cycle: GapCycle, gap: int, *, threads: int = 1) -> SubpopulationCensus:
    """Census of ``gap`` split into the four first/last-gap classes."""
    _check_gap(cycle, gap)
    if gap < 6:
        raise PreconditionError(f"subpopulation census needs gap >= 6, got {gap}")
    n = cycle.length
    gaps = cycle.gaps

    def scan(start: int, stop: int) -> dict:
        acc: dict[str, dict[int, int]] = {k: {} for k in CLASSES}
        for j, sums in _window_sums(gaps, start, stop, gap, None):
            hits = np.flatnonzero(sums == gap) + start
            if not hits.size:
                continue
            if j == 1:
                acc["a"][1] = int(hits.size)
                continue
            first2 = gaps[hits % n] == 2
            last2 = gaps[(hits + j - 1) % n] == 2
            for name, mask in (
                ("a", ~first2 & ~last2),
                ("b", ~first2 & last2),
                ("c", first2 & ~last2),
                ("d", first2 & last2),
            ):
                k = int(np.count_nonzero(mask))
                if k:
                    acc[name][j] = k
        return acc

    merged: dict[str, dict[int, int]] = {k: defaultdict(int) for k in CLASSES}
    for part in _map_chunks(scan, n, threads):
        for name in CLASSES:
            for j, k in part[name].items():
                merged[name][j] += k
    return SubpopulationCensus(
        cycle.prime, gap, **{k: dict(sorted(v.items())) for k, v in merged.items()}
    )
