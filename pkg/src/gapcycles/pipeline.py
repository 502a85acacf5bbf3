"""End-to-end runs: mode selection, model paths, verification campaigns and
the gap-82 regression."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Sequence

from gapcycles.census import DrivingTermCensus, census_all, census_gap, census_subpop
from gapcycles.cycle import DESK_MAX_PRIME, build_cycle
from gapcycles.errors import PreconditionError, ResourceError
from gapcycles.fixtures import TABLE_82, Gap82Fixture
from gapcycles.popmodel import (
    ModelCoefficients,
    PopulationVector,
    back_step,
    coefficients_at,
    iterate,
    normalize,
    step,
    step_counts,
)
from gapcycles.primes import next_prime, primes_between, twin_count
from gapcycles.subpop import FIRST_STEP_MODE, SubpopVector, subpop_step

FLOAT_TOLERANCE = 1e-12


def select_mode(gap: int, p0: int) -> str:
    """First-step mode for ``gap`` starting from stage ``p0``."""
    if gap < 2 or gap % 2:
        raise PreconditionError(f"gap must be even and at least 2, got {gap}")
    p1 = next_prime(p0)
    if gap < 2 * p1:
        return "general"
    if gap == 2 * p1:
        return "special"
    if gap == 2 * p1 + 2:
        return FIRST_STEP_MODE
    raise PreconditionError(
        f"gap {gap} exceeds 2*p1+2 = {2 * p1 + 2} for p0={p0}; no exact model from this "
        "stage (from 2*p1+4 on, the gap may also equal 2*p2 when p2 = p1+2)"
    )


@dataclass
class ModelRun:
    gap: int
    p0: int
    target: int
    mode: str
    exact: bool
    initial: PopulationVector
    path: list[PopulationVector]  # stages p1..target
    coefficients: ModelCoefficients
    surrogate: PopulationVector


def _census_at(p0: int, gap: int, memory_limit: int | None, threads: int) -> DrivingTermCensus:
    if p0 > DESK_MAX_PRIME:
        raise ResourceError(f"G({p0}#) is beyond desk scale; supply fixture counts instead")
    return census_gap(build_cycle(p0, memory_limit), gap, threads=threads)


def run_model(
    p0: int,
    gap: int,
    target: int,
    *,
    exact: bool = True,
    initial: DrivingTermCensus | None = None,
    n2: int | None = None,
    subpop: SubpopVector | None = None,
    memory_limit: int | None = None,
    threads: int = 1,
) -> ModelRun:
    """Model ``gap`` from the census of G(p0#) through stage ``target``.

    ``initial``/``n2`` replace the cycle census (the gap-82 fixture uses
    this); ``subpop`` supplies classified counts for gap 2*p1+2.
    """
    mode = select_mode(gap, p0)
    p1 = next_prime(p0)
    if target < p1:
        raise PreconditionError(f"target {target} precedes the first modelled stage {p1}")
    if initial is None:
        initial = _census_at(p0, gap, memory_limit, threads)
    if n2 is None:
        n2 = twin_count(p0)
    J = max(initial.max_length, 1)
    w0 = normalize(initial, n2, J, exact)

    if mode == FIRST_STEP_MODE:
        if subpop is None:
            if p0 > DESK_MAX_PRIME:
                raise ResourceError("subpopulation counts needed beyond desk scale")
            subpop = SubpopVector.from_census(census_subpop(build_cycle(p0, memory_limit), gap))
        counts = subpop_step(subpop, p1)
        n2_p1 = (p1 - 2) * n2
        J1 = max(J, max(counts, default=1))
        w1 = normalize(DrivingTermCensus(p1, gap, counts), n2_p1, J1, exact)
    else:
        w1 = step(w0, p1, mode)  # type: ignore[arg-type]

    path = iterate(w1, target)
    return ModelRun(
        gap, p0, target, mode, exact, w0, path, coefficients_at(w1), back_step(w1, p1)
    )


# -- verification ---------------------------------------------------------


@dataclass
class Check:
    gap: int
    stage: int
    mode: str
    predicted: list[int]
    observed: list[int]
    residual: list[int]
    w_error: float
    passed: bool


@dataclass
class VerificationReport:
    p0: int
    target: int
    exact: bool
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def tolerance(self) -> float:
        return 0.0 if self.exact else FLOAT_TOLERANCE


def _pad(v: Sequence[int], n: int) -> list[int]:
    return list(v) + [0] * (n - len(v))


def applicable_gaps(p0: int) -> list[int]:
    return list(range(2, 2 * next_prime(p0) + 3, 2))


def verify_models(
    p0: int,
    target: int,
    gaps: Sequence[int] | None = None,
    *,
    exact: bool = True,
    perturb: Callable[[int, list[int]], list[int]] | None = None,
    memory_limit: int | None = None,
    threads: int = 1,
) -> VerificationReport:
    """Predict counts from G(p0#) and compare with censuses of every stage
    through ``target``. ``perturb(gap, counts)`` alters the initial counts
    (negative controls)."""
    if target > DESK_MAX_PRIME:
        raise ResourceError(f"verification needs G({target}#); desk scale stops at {DESK_MAX_PRIME}")
    gaps = applicable_gaps(p0) if gaps is None else sorted(gaps)
    modes = {g: select_mode(g, p0) for g in gaps}
    p1 = next_prime(p0)
    stages = primes_between(p1, target)
    max_gap = max(gaps)

    base = build_cycle(p0, memory_limit)
    censuses = {p0: census_all(base, max_gap, threads=threads)}
    for q in stages:
        censuses[q] = census_all(build_cycle(q, memory_limit), max_gap, threads=threads)

    report = VerificationReport(p0, target, exact)
    for g in gaps:
        mode = modes[g]
        counts = censuses[p0][g].vector(max(censuses[p0][g].max_length, 1))
        if perturb is not None:
            counts = perturb(g, list(counts))
        n2 = twin_count(p0)
        if mode == FIRST_STEP_MODE:
            sp = SubpopVector.from_census(census_subpop(base, g))
            if perturb is not None:
                sp = SubpopVector(g, p0, {**sp.classes, "a": _perturbed_class_a(counts, sp)})
            stepped = subpop_step(sp, p1)
            J = max(len(counts), max(stepped, default=1))
            pred = _pad([stepped.get(j, 0) for j in range(1, J + 1)], J)
            first_mode = "general"
            start_stage = p1
        else:
            J = len(counts)
            pred = list(counts)
            first_mode = mode
            start_stage = p0

        denom = n2 if start_stage == p0 else n2 * (p1 - 2)
        w = PopulationVector(
            g, start_stage, tuple(Fraction(n, denom) if exact else n / denom for n in pred)
        )
        step_mode = first_mode
        for q in stages:
            if q > start_stage:
                pred = step_counts(pred, q, step_mode)  # type: ignore[arg-type]
                w = step(w, q, step_mode)  # type: ignore[arg-type]
                step_mode = "general"
            obs_c = censuses[q][g]
            width = max(J, obs_c.max_length)
            observed = obs_c.vector(width)
            predicted = _pad(pred, width)
            residual = [a - b for a, b in zip(predicted, observed)]
            obs_w = normalize(obs_c, twin_count(q), width, exact)
            w_err = _w_error(_pad_w(w.entries, width), obs_w.entries)
            ok = not any(residual) and w_err <= report.tolerance
            report.checks.append(Check(g, q, mode, predicted, observed, residual, w_err, ok))
    return report


def _perturbed_class_a(counts: list[int], sp: SubpopVector) -> dict[int, int]:
    """Class-a counts adjusted so the merged counts equal ``counts``."""
    merged = sp.merged()
    a = dict(sp.classes.get("a", {}))
    for j, n in enumerate(counts, start=1):
        a[j] = a.get(j, 0) + n - merged.get(j, 0)
    return a


def _pad_w(entries: tuple, n: int) -> list:
    zero = entries[0] * 0 if entries else 0
    return list(entries) + [zero] * (n - len(entries))


def _w_error(pred: Sequence, obs: Sequence) -> float:
    err = 0.0
    for a, b in zip(pred, obs):
        if a == b:
            continue
        scale = max(abs(float(a)), abs(float(b)))
        err = max(err, abs(float(a) - float(b)) / scale if scale else 0.0)
    return err


# -- gap 82 regression ----------------------------------------------------

REL_TOL = 1e-5
ABS_TOL = 5e-12
MAGNITUDE_SPLIT = 1e-6


def within_tolerance(value, printed: str) -> bool:
    """Relative 1e-5 for printed magnitudes >= 1e-6, absolute 5e-12 below."""
    ref = float(printed)
    diff = abs(float(value) - ref)
    if abs(ref) >= MAGNITUDE_SPLIT:
        return diff <= REL_TOL * abs(ref)
    return diff <= ABS_TOL


def matches_printed(value, printed: str) -> bool:
    """True if ``value`` rounds to exactly the printed digits."""
    ref = Decimal(printed)
    exponent = ref.as_tuple().exponent
    if "E" in printed.upper():
        digits = len(printed.upper().split("E")[0].split(".")[-1]) if "." in printed else 0
        return Decimal(f"{float(value):.{digits}E}") == ref
    return Decimal(f"{float(value):.{-exponent}f}") == ref


@dataclass
class Table82Result:
    fixture: Gap82Fixture
    computed: dict[str, tuple]
    sums: dict[str, object]

    def column_rows(self, name: str) -> list[dict]:
        printed = getattr(self.fixture, name)
        return [
            {
                "j": j,
                "computed": value,
                "printed": ref,
                "within_tolerance": within_tolerance(value, ref),
                "matches_digits": matches_printed(value, ref),
            }
            for j, (value, ref) in enumerate(zip(self.computed[name], printed), start=1)
        ]

    def column_passed(self, name: str) -> bool:
        return all(r["within_tolerance"] for r in self.column_rows(name))

    @property
    def passed(self) -> bool:
        return all(self.column_passed(n) for n in self.computed) and self.sums["w_p1"] == Fraction(40, 39)


def table82(fixture: Gap82Fixture = TABLE_82, exact: bool = True) -> Table82Result:
    """Recompute the published gap-82 columns from the fixture counts."""
    run = run_model(
        fixture.p0, fixture.gap, fixture.p1, exact=exact, initial=fixture.census(), n2=fixture.n2
    )
    w1 = run.path[0]
    computed = {
        "w_p0": run.initial.entries,
        "w_p1": w1.entries,
        "w_surrogate": run.surrogate.entries,
        "l": run.coefficients.magnitudes,
    }
    sums = {
        "w_p0": run.initial.total,
        "w_p1": w1.total,
        "w_surrogate": run.surrogate.total,
    }
    return Table82Result(fixture, computed, sums)
