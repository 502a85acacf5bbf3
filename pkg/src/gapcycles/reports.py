"""CSV and JSON emission for censuses, models, verification and the gap-82 table."""

from __future__ import annotations

import csv
import io
import json
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence

from gapcycles.census import CLASSES, CYCLIC_CONVENTION, DrivingTermCensus, SubpopulationCensus
from gapcycles.pipeline import ModelRun, Table82Result, VerificationReport

ANCHOR_CONVENTION = "anchored at residue 1"


def metadata(exact: bool | None = None) -> dict:
    from gapcycles import __version__

    meta = {
        "tool": "gapcycles",
        "version": __version__,
        "anchor": ANCHOR_CONVENTION,
        "counting": CYCLIC_CONVENTION,
    }
    if exact is not None:
        meta["arithmetic"] = "exact" if exact else "float"
    return meta


def decimal_string(x, precision: int = 12) -> str:
    """Scientific notation with ``precision`` significant digits."""
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        if x == 0:
            return "0"
        with localcontext() as ctx:
            ctx.prec = precision + 5
            d = Decimal(x.numerator) / Decimal(x.denominator)
    else:
        if x == 0:
            return "0"
        d = Decimal(repr(float(x)))
    return f"{d:.{precision - 1}E}"


def exact_string(x) -> str:
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def to_csv(rows: Iterable[dict], fieldnames: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2)


# -- census ---------------------------------------------------------------

CENSUS_FIELDS = ("stage_prime", "gap", "length", "count")
SUBPOP_FIELDS = ("stage_prime", "gap", "class", "length", "count")


def census_rows(censuses: Iterable[DrivingTermCensus]) -> list[dict]:
    return [
        {"stage_prime": c.prime, "gap": c.gap, "length": j, "count": n}
        for c in censuses
        for j, n in sorted(c.counts.items())
    ]


def subpop_rows(sp: SubpopulationCensus) -> list[dict]:
    classes = sp.classes()
    return [
        {"stage_prime": sp.prime, "gap": sp.gap, "class": name, "length": j, "count": n}
        for name in CLASSES
        for j, n in sorted(classes[name].items())
    ]


def census_json(rows: list[dict], note: str | None = None) -> dict:
    payload = {"meta": metadata(), "rows": rows}
    if note:
        payload["note"] = note
    return payload


# -- model ----------------------------------------------------------------

MODEL_FIELDS = ("stage", "j", "value")


def model_json(run: ModelRun, precision: int = 12) -> dict:
    def vec(w) -> dict:
        return {
            "stage": w.stage_prime,
            "surrogate": w.surrogate,
            "decimal": [decimal_string(x, precision) for x in w.entries],
            "exact": [exact_string(x) for x in w.entries],
        }

    l = run.coefficients
    return {
        "meta": metadata(run.exact),
        "gap": run.gap,
        "start_stage": run.p0,
        "target": run.target,
        "first_step_mode": run.mode,
        "initial": vec(run.initial),
        "stages": [vec(w) for w in run.path],
        "surrogate_start": vec(run.surrogate),
        "coefficients": {
            "first_prime": l.first_prime,
            "sign_convention": l.sign_convention,
            "l": [decimal_string(x, precision) for x in l.magnitudes],
            "l_exact": [exact_string(x) for x in l.magnitudes],
            "signed": [exact_string(x) for x in l.signed],
        },
    }


def model_rows(run: ModelRun, precision: int = 12) -> list[dict]:
    rows = []
    for w in [run.initial, *run.path]:
        for j, x in enumerate(w.entries, start=1):
            rows.append({"stage": w.stage_prime, "j": j, "value": decimal_string(x, precision)})
    return rows


# -- verification ---------------------------------------------------------

VERIFY_FIELDS = ("gap", "stage", "mode", "predicted", "observed", "residual", "w_error", "pass")


def verify_rows(report: VerificationReport) -> list[dict]:
    return [
        {
            "gap": c.gap,
            "stage": c.stage,
            "mode": c.mode,
            "predicted": " ".join(map(str, c.predicted)),
            "observed": " ".join(map(str, c.observed)),
            "residual": " ".join(map(str, c.residual)),
            "w_error": f"{c.w_error:.3e}",
            "pass": c.passed,
        }
        for c in report.checks
    ]


def verify_json(report: VerificationReport) -> dict:
    return {
        "meta": metadata(report.exact),
        "p0": report.p0,
        "target": report.target,
        "tolerance": report.tolerance,
        "passed": report.passed,
        "checks": [
            {
                "gap": c.gap,
                "stage": c.stage,
                "mode": c.mode,
                "predicted": c.predicted,
                "observed": c.observed,
                "residual": c.residual,
                "exact_zero": not any(c.residual),
                "w_error": c.w_error,
                "pass": c.passed,
            }
            for c in report.checks
        ],
    }


# -- gap 82 table ---------------------------------------------------------

TABLE_FIELDS = ("column", "j", "computed", "printed", "within_tolerance", "matches_digits")


def table82_rows(result: Table82Result, precision: int = 10) -> list[dict]:
    rows = []
    for name in result.computed:
        for r in result.column_rows(name):
            rows.append({"column": name, **r, "computed": decimal_string(r["computed"], precision)})
    return rows


def table82_json(result: Table82Result, precision: int = 10) -> dict:
    return {
        "meta": metadata(True),
        "gap": result.fixture.gap,
        "p0": result.fixture.p0,
        "p1": result.fixture.p1,
        "n2": result.fixture.n2,
        "rows": table82_rows(result, precision),
        "sums": {k: exact_string(v) for k, v in result.sums.items()},
        "columns_within_tolerance": {n: result.column_passed(n) for n in result.computed},
        "passed": result.passed,
    }
