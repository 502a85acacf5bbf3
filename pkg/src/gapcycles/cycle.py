"""Cycles of gaps G(p#) and the recursion that carries G(p_k#) to G(p_{k+1}#).

A cycle is anchored at residue 1: ``gaps[0]`` is the distance from 1 to the
next integer coprime to p#, and the last gap closes the cycle at p# + 1.
Gaps are stored as uint8, widened to uint16 only if some gap reaches 256.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from gapcycles.errors import PreconditionError, ResourceError
from gapcycles.primes import is_prime, next_prime, phi_primorial, primorial, primes_upto

log = logging.getLogger(__name__)

DEFAULT_MEMORY_LIMIT = 2 * 1024**3
# Largest stage built without an explicit override (36,495,360 gaps).
DESK_MAX_PRIME = 23
# Target gaps per chunk when the recursion is partitioned.
CHUNK_GAPS = 1 << 23


def _narrow(gaps: np.ndarray) -> np.ndarray:
    if gaps.size and int(gaps.max()) >= 256:
        if int(gaps.max()) >= 1 << 16:
            raise ValueError("gap too large for 16-bit storage")
        return gaps.astype(np.uint16, copy=False)
    return gaps.astype(np.uint8, copy=False)


@dataclass(frozen=True, eq=False)
class GapCycle:
    """The cycle of gaps at stage ``prime`` of the sieve."""

    prime: int
    gaps: np.ndarray

    def __post_init__(self) -> None:
        gaps = np.asarray(self.gaps)
        if gaps.dtype not in (np.uint8, np.uint16):
            gaps = _narrow(gaps.astype(np.int64))
        elif not gaps.flags.c_contiguous:
            gaps = np.ascontiguousarray(gaps)
        gaps.setflags(write=False)
        object.__setattr__(self, "gaps", gaps)

    @property
    def length(self) -> int:
        return int(self.gaps.size)

    @property
    def span(self) -> int:
        return int(self.gaps.sum(dtype=np.int64))

    @property
    def width(self) -> int:
        """Bytes per stored gap."""
        return self.gaps.dtype.itemsize

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GapCycle):
            return NotImplemented
        return self.prime == other.prime and np.array_equal(self.gaps, other.gaps)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        head = " ".join(str(int(g)) for g in self.gaps[:10])
        more = " ..." if self.length > 10 else ""
        return f"GapCycle(prime={self.prime}, length={self.length}, gaps=[{head}{more}])"

    def points(self) -> np.ndarray:
        """Coprime residues 1 = c_0 < c_1 < ... < c_length = p# + 1."""
        pts = np.empty(self.length + 1, dtype=np.int64)
        pts[0] = 1
        np.cumsum(self.gaps, dtype=np.int64, out=pts[1:])
        pts[1:] += 1
        return pts

    def is_symmetric(self) -> bool:
        body = self.gaps[:-1]
        return bool(np.array_equal(body, body[::-1]))

    def validate(self, check_sum: bool = True) -> None:
        """Raise PreconditionError if any cycle invariant fails."""
        if not is_prime(self.prime):
            raise PreconditionError(f"stage {self.prime} is not prime")
        phi = phi_primorial(self.prime)
        if self.length != phi:
            raise PreconditionError(
                f"G({self.prime}#) must have {phi} gaps, found {self.length}"
            )
        if check_sum:
            if self.span != primorial(self.prime):
                raise PreconditionError(
                    f"G({self.prime}#) must span {primorial(self.prime)}, sums to {self.span}"
                )
            if self.prime >= 3 and (np.any(self.gaps % 2) or np.any(self.gaps < 2)):
                raise PreconditionError("every gap must be even and at least 2")


def rotation_equivalent(a: GapCycle | np.ndarray, b: GapCycle | np.ndarray) -> bool:
    """True if ``b`` is a cyclic rotation of ``a``."""
    ga = np.asarray(a.gaps if isinstance(a, GapCycle) else a, dtype=np.uint16)
    gb = np.asarray(b.gaps if isinstance(b, GapCycle) else b, dtype=np.uint16)
    if ga.size != gb.size:
        return False
    if ga.size == 0:
        return True
    hay = np.concatenate([ga, ga]).tobytes()
    needle = gb.tobytes()
    start = hay.find(needle)
    while start != -1:
        if start % 2 == 0:
            return True
        start = hay.find(needle, start + 1)
    return False


class FusionEvent(NamedTuple):
    copy_index: int
    position_in_copy: int
    absolute_offset: int


@dataclass(frozen=True)
class FusionTrace:
    """All fusions of one recursion step, as parallel arrays.

    ``position_in_copy`` is the index of the left gap of the fused pair within
    its copy, before fusion. ``absolute_offset`` is the removed integer
    p_{k+1} * c, i.e. the running sums of p_{k+1} * G(p_k#) started at p_{k+1}.
    """

    copy_index: np.ndarray
    position_in_copy: np.ndarray
    absolute_offset: np.ndarray

    def __len__(self) -> int:
        return int(self.copy_index.size)

    def __getitem__(self, i: int) -> FusionEvent:
        return FusionEvent(
            int(self.copy_index[i]), int(self.position_in_copy[i]), int(self.absolute_offset[i])
        )

    def __iter__(self) -> Iterator[FusionEvent]:
        for i in range(len(self)):
            yield self[i]


def seed_cycle() -> GapCycle:
    """G(3#): integers coprime to 6 from 1 run 1, 5, 7."""
    return GapCycle(3, np.array([4, 2], dtype=np.uint8))


def _check_budget(n_bytes: int, what: str, memory_limit: int | None) -> None:
    limit = DEFAULT_MEMORY_LIMIT if memory_limit is None else memory_limit
    if n_bytes > limit:
        raise ResourceError(f"{what} needs about {n_bytes} bytes, over the limit of {limit}")


def _fusion_sites(cycle: GapCycle, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Copy index, in-copy left-gap index and removed integer for each fusion."""
    pts = cycle.points()
    span = int(pts[-1]) - 1
    removed = p * pts[:-1]
    # Point x sits in copy m at residue r, with r in [c_1, span + 1].
    copy = (removed - 2) // span
    residue = removed - copy * span
    t = np.searchsorted(pts, residue)
    if not np.array_equal(pts[t], residue):
        raise AssertionError("removed integer is not a point of the concatenated cycle")
    return copy, t - 1, removed


def _fuse_copies(
    gaps: np.ndarray,
    span: int,
    p: int,
    m0: int,
    m1: int,
    left: np.ndarray,
) -> np.ndarray:
    """Fuse the copies ``m0 <= m < m1``.

    ``left`` holds the chunk-local indices of left gaps to fuse. A pair that
    straddles the chunk's right edge is fused here using ``gaps[0]``, the first
    gap of every copy; the chunk that starts at that edge drops its first gap.
    """
    local = np.tile(gaps.astype(np.uint16), m1 - m0)
    keep = np.ones(local.size, dtype=bool)
    inner = left[left < local.size - 1]
    local[inner] += local[inner + 1]
    keep[inner + 1] = False
    if left.size and left[-1] == local.size - 1:
        local[-1] += gaps[0]
    if m0 > 0 and (m0 * span + 1) % p == 0:
        keep[0] = False
    return local[keep]


def recurse(
    cycle: GapCycle,
    next_p: int,
    trace_wanted: bool = False,
    *,
    threads: int = 1,
    memory_limit: int | None = None,
    chunk_gaps: int = CHUNK_GAPS,
) -> tuple[GapCycle, FusionTrace | None]:
    """Build G(next_p#) from G(p#): concatenate ``next_p`` copies, then fuse
    the pair of gaps around every multiple of ``next_p``."""
    if not is_prime(next_p):
        raise PreconditionError(f"{next_p} is not prime")
    expected = next_prime(cycle.prime)
    if next_p != expected:
        raise PreconditionError(
            f"{next_p} does not follow {cycle.prime}; the next stage prime is {expected}"
        )
    if cycle.length != phi_primorial(cycle.prime):
        raise PreconditionError(f"input is not a valid G({cycle.prime}#)")

    n_new = (next_p - 1) * cycle.length
    _check_budget(
        next_p * cycle.length * 3 + cycle.length * 40,
        f"G({next_p}#) with {n_new} gaps",
        memory_limit,
    )

    span = cycle.span
    copy, pos, removed = _fusion_sites(cycle, next_p)
    left = copy * cycle.length + pos  # sorted, since removed is increasing

    per_chunk = max(1, chunk_gaps // max(cycle.length, 1))
    bounds = [(m, min(m + per_chunk, next_p)) for m in range(0, next_p, per_chunk)]
    edges = np.searchsorted(left, [m * cycle.length for m, _ in bounds] + [next_p * cycle.length])

    def work(k: int) -> np.ndarray:
        m0, m1 = bounds[k]
        sel = left[edges[k] : edges[k + 1]] - m0 * cycle.length
        return _fuse_copies(cycle.gaps, span, next_p, m0, m1, sel)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, range(len(bounds))))
    else:
        parts = [work(k) for k in range(len(bounds))]
    new_gaps = np.concatenate(parts)
    if new_gaps.size != n_new:
        raise AssertionError(f"fusion produced {new_gaps.size} gaps, expected {n_new}")

    log.debug("built G(%d#): %d gaps in %d chunks", next_p, n_new, len(bounds))
    result = GapCycle(next_p, _narrow(new_gaps))
    trace = FusionTrace(copy, pos, removed) if trace_wanted else None
    return result, trace


def direct_sieve(prime: int, memory_limit: int | None = None) -> GapCycle:
    """Oracle: gaps between the integers in [1, p# + 1] coprime to p#."""
    if not is_prime(prime):
        raise PreconditionError(f"{prime} is not prime")
    span = primorial(prime)
    _check_budget(span + 17 * phi_primorial(prime), f"direct sieve of {prime}#", memory_limit)
    alive = np.ones(span + 2, dtype=bool)
    alive[0] = False
    for q in primes_upto(prime):
        alive[::q] = False
    pts = np.flatnonzero(alive)
    del alive
    return GapCycle(prime, _narrow(np.diff(pts)))


@lru_cache(maxsize=None)
def build_cycle(prime: int, memory_limit: int | None = None) -> GapCycle:
    """G(prime#) by the recursion chain from the seed; cached per process."""
    if not is_prime(prime) or prime < 3:
        raise PreconditionError(f"stage must be an odd prime, got {prime}")
    if prime == 3:
        return seed_cycle()
    prev = max(q for q in primes_upto(prime - 1))
    cycle, _ = recurse(build_cycle(prev, memory_limit), prime, memory_limit=memory_limit)
    return cycle
