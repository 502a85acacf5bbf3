"""One-step model for gaps g = 2*p1 + 2 from classified initial counts.

At this gap an interior fusion next to an end gap of 2 lands in the same
image as the far boundary fusion, so the plain recurrence miscounts. Each
length-j term of class

* a (X...X, and length 1): keeps p1-j-1 intact images, j-1 shortened;
* b, c (X...2, 2...X): keeps p1-j intact images, j-2 shortened;
* d (2...2): keeps p1-j+1 intact images, j-3 shortened.

After this step g < 2*p2 and the general model takes over.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from gapcycles.census import SubpopulationCensus
from gapcycles.errors import PreconditionError
from gapcycles.popmodel import PopulationVector, iterate, _ratio
from gapcycles.primes import next_prime

# (intact offset, shortened offset): intact = p1 - j + intact, shortened = j - shortened.
_RULES = {"a": (-1, 1), "b": (0, 2), "c": (0, 2), "d": (1, 3)}

FIRST_STEP_MODE = "subpop-2p1+2"


@dataclass(frozen=True)
class SubpopVector:
    gap: int
    stage_prime: int
    classes: dict[str, dict[int, int]] = field(default_factory=dict)

    @classmethod
    def from_census(cls, census: SubpopulationCensus) -> SubpopVector:
        return cls(census.gap, census.prime, census.classes())

    def merged(self) -> dict[int, int]:
        total: dict[int, int] = defaultdict(int)
        for counts in self.classes.values():
            for j, n in counts.items():
                total[j] += n
        return dict(sorted(total.items()))


def _check(sp: SubpopVector, p1: int) -> None:
    if p1 != next_prime(sp.stage_prime):
        raise PreconditionError(f"{p1} is not the stage prime following {sp.stage_prime}")
    if sp.gap != 2 * p1 + 2:
        raise PreconditionError(
            f"the subpopulation step applies to gap 2*p1+2 = {2 * p1 + 2}, got {sp.gap}"
        )
    p2 = next_prime(p1)
    if sp.gap >= 2 * p2:
        raise PreconditionError(
            f"gap {sp.gap} reaches 2*p2 = {2 * p2}; the general model cannot follow"
        )
    unknown = set(sp.classes) - set(_RULES)
    if unknown:
        raise PreconditionError(f"unknown subpopulation classes {sorted(unknown)}")


def class_contributions(name: str, counts: dict[int, int], p1: int) -> dict[int, int]:
    """Counts at stage ``p1`` produced by one class."""
    intact_off, short_off = _RULES[name]
    out: dict[int, int] = defaultdict(int)
    for j, n in counts.items():
        intact = p1 - j + intact_off
        shortened = j - short_off
        if intact < 0 or shortened < 0:
            if n:
                raise PreconditionError(f"class {name} cannot hold length-{j} terms at p1={p1}")
            continue
        out[j] += intact * n
        if j > 1:
            out[j - 1] += shortened * n
    return dict(out)


def subpop_step(sp: SubpopVector, p1: int) -> dict[int, int]:
    """Exact counts ``n_{g,j}`` at stage ``p1``."""
    _check(sp, p1)
    total: dict[int, int] = defaultdict(int)
    for name, counts in sp.classes.items():
        for j, n in class_contributions(name, counts, p1).items():
            total[j] += n
    J = max(total, default=0)
    return {j: total.get(j, 0) for j in range(1, J + 1)}


def chain_from_subpop(
    sp: SubpopVector,
    p1: int,
    n2_at_p1: int,
    target_prime: int,
    exact: bool = True,
    J: int | None = None,
) -> PopulationVector:
    """Subpopulation step to ``p1``, normalize, then general steps to ``target_prime``."""
    if target_prime < p1:
        raise PreconditionError(f"target {target_prime} precedes p1 = {p1}")
    if n2_at_p1 <= 0:
        raise PreconditionError("the count of gaps 2 must be positive")
    counts = subpop_step(sp, p1)
    J = max(counts, default=1) if J is None else J
    entries = tuple(_ratio(counts.get(j, 0), n2_at_p1, exact) for j in range(1, J + 1))
    w1 = PopulationVector(sp.gap, p1, entries)
    return iterate(w1, target_prime)[-1]
