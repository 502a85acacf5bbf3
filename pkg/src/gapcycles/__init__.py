"""Cycles of gaps across stages of Eratosthenes sieve and exact population models
for the driving terms of small gaps."""

from gapcycles.census import (
    DrivingTermCensus,
    SubpopulationCensus,
    census_all,
    census_gap,
    census_subpop,
)
from gapcycles.cycle import (
    FusionTrace,
    GapCycle,
    build_cycle,
    direct_sieve,
    recurse,
    seed_cycle,
)
from gapcycles.errors import (
    ChecksumError,
    CycleFileError,
    MagicError,
    PreconditionError,
    ResourceError,
    TruncationError,
)
from gapcycles.popmodel import (
    ModelCoefficients,
    PopulationVector,
    SystemMatrix,
    back_step,
    build_matrix,
    coefficients,
    evaluate_closed_form,
    iterate,
    normalize,
    step,
    step_counts,
)
from gapcycles.primes import is_prime, next_prime, primorial, twin_count
from gapcycles.storage import load_cycle, save_cycle
from gapcycles.subpop import SubpopVector, chain_from_subpop, subpop_step

__version__ = "0.1.0"

__all__ = [
    "ChecksumError",
    "CycleFileError",
    "DrivingTermCensus",
    "FusionTrace",
    "GapCycle",
    "MagicError",
    "ModelCoefficients",
    "PopulationVector",
    "PreconditionError",
    "ResourceError",
    "SubpopVector",
    "SubpopulationCensus",
    "SystemMatrix",
    "TruncationError",
    "back_step",
    "build_cycle",
    "build_matrix",
    "census_all",
    "census_gap",
    "census_subpop",
    "chain_from_subpop",
    "coefficients",
    "direct_sieve",
    "evaluate_closed_form",
    "iterate",
    "is_prime",
    "next_prime",
    "primorial",
    "twin_count",
    "load_cycle",
    "normalize",
    "recurse",
    "save_cycle",
    "seed_cycle",
    "step",
    "step_counts",
    "subpop_step",
]
