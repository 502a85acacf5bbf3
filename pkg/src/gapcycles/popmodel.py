"""Population dynamics of driving terms across stages of the sieve.

The relative population vector ``w_g = (w_{g,1}, ..., w_{g,J})`` holds the
counts of driving terms for g of each length, divided by the count of gaps 2
at the same stage. One sieve stage at prime p multiplies it by an upper
bidiagonal matrix:

* general, valid for g < 2p: diagonal ``1, (p-3)/(p-2), ..., (p-J-1)/(p-2)``
* special, for the single step where g == 2p: diagonal
  ``(p-1)/(p-2), 1, (p-3)/(p-2), ..., (p-J)/(p-2)``

and superdiagonal ``j/(p-2)`` in both. Exact mode uses ``Fraction``; float
mode uses Python floats through the same code paths.

The general matrices for different p share their eigenvectors: for the
eigenvalue ``(p-m-1)/(p-2)`` the eigenvector has entries
``(-1)**(j-1) * C(m-1, j-1)``. Expanding a vector in that basis gives the
closed form for the top entry as a signed sum of prime products.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from typing import Literal, Sequence, Union

from gapcycles.census import DrivingTermCensus
from gapcycles.errors import PreconditionError
from gapcycles.primes import is_prime, next_prime, primes_between

Number = Union[Fraction, float]
Kind = Literal["general", "special", "inverse_general"]
Mode = Literal["general", "special"]


def _ratio(num: int, den: int, exact: bool) -> Number:
    return Fraction(num, den) if exact else num / den


@dataclass(frozen=True)
class PopulationVector:
    gap: int
    stage_prime: int
    entries: tuple
    surrogate: bool = False

    @property
    def J(self) -> int:
        return len(self.entries)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (Fraction, int)) for x in self.entries)

    @property
    def total(self) -> Number:
        return sum(self.entries, Fraction(0) if self.exact else 0.0)

    def __getitem__(self, j: int) -> Number:
        """Entry for driving-term length ``j`` (1-based)."""
        return self.entries[j - 1]

    def to_float(self) -> PopulationVector:
        return replace(self, entries=tuple(float(x) for x in self.entries))


@dataclass(frozen=True)
class SystemMatrix:
    kind: str
    prime: int
    J: int
    entries: tuple

    def __getitem__(self, ij: tuple[int, int]) -> Number:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def __matmul__(self, other):
        if isinstance(other, SystemMatrix):
            rows = [
                tuple(
                    sum((self.entries[i][k] * other.entries[k][j] for k in range(self.J)), 0)
                    for j in range(self.J)
                )
                for i in range(self.J)
            ]
            return rows
        return [sum((row[k] * other[k] for k in range(self.J)), 0) for row in self.entries]

    def column_sums(self) -> list[Number]:
        return [sum((self.entries[i][j] for i in range(self.J)), 0) for j in range(self.J)]


def _diagonal(kind: str, p: int, j: int, exact: bool) -> Number:
    if kind == "general":
        return _ratio(1, 1, exact) if j == 1 else _ratio(p - j - 1, p - 2, exact)
    if j == 1:
        return _ratio(p - 1, p - 2, exact)
    return _ratio(p - j, p - 2, exact)


def _check_dimension(kind: str, p: int, J: int) -> None:
    if J < 1:
        raise PreconditionError(f"dimension must be at least 1, got {J}")
    if p < 5 or not is_prime(p):
        raise PreconditionError(f"matrix prime must be a prime >= 5, got {p}")
    if kind in ("general", "inverse_general") and p < J + 2:
        raise PreconditionError(
            f"entry ({J},{J}) = ({p}-{J}-1)/({p}-2) is not positive; need prime >= J+2 = {J + 2}"
        )
    if kind == "special" and p < J + 1:
        raise PreconditionError(
            f"entry ({J},{J}) = ({p}-{J})/({p}-2) is not positive; need prime >= J+1 = {J + 1}"
        )


def build_matrix(kind: Kind, prime: int, J: int, exact: bool = True) -> SystemMatrix:
    """Dense J x J system matrix of the given kind."""
    if kind not in ("general", "special", "inverse_general"):
        raise PreconditionError(f"unknown matrix kind {kind!r}")
    _check_dimension(kind, prime, J)
    zero = _ratio(0, 1, exact)
    if kind == "inverse_general":
        # Column k of the inverse solves M x = e_k.
        cols = []
        for k in range(J):
            e = [zero] * J
            e[k] = _ratio(1, 1, exact)
            cols.append(_solve_general(e, prime, exact))
        rows = tuple(tuple(cols[k][i] for k in range(J)) for i in range(J))
        return SystemMatrix(kind, prime, J, rows)
    rows = []
    for i in range(1, J + 1):
        row = [zero] * J
        row[i - 1] = _diagonal(kind, prime, i, exact)
        if i < J:
            row[i] = _ratio(i, prime - 2, exact)
        rows.append(tuple(row))
    return SystemMatrix(kind, prime, J, tuple(rows))


def _apply(entries: Sequence[Number], p: int, kind: str, exact: bool) -> list[Number]:
    J = len(entries)
    out = []
    for j in range(1, J + 1):
        v = _diagonal(kind, p, j, exact) * entries[j - 1]
        if j < J:
            v += _ratio(j, p - 2, exact) * entries[j]
        out.append(v)
    return out


def _solve_general(rhs: Sequence[Number], p: int, exact: bool) -> list[Number]:
    """Back-substitution for M_J(p) x = rhs."""
    J = len(rhs)
    x: list[Number] = [0] * J
    for j in range(J, 0, -1):
        r = rhs[j - 1]
        if j < J:
            r -= _ratio(j, p - 2, exact) * x[j]
        x[j - 1] = r / _diagonal("general", p, j, exact)
    return x


def _check_step(gap: int, stage: int, next_p: int, mode: str, surrogate: bool = False) -> None:
    if next_p != next_prime(stage):
        raise PreconditionError(f"{next_p} is not the stage prime following {stage}")
    if mode == "general":
        # A surrogate is defined as the general pre-image of a modelled
        # vector, so it takes the general step whatever its gap.
        if surrogate:
            return
        if gap == 2 * next_p:
            raise PreconditionError(
                f"gap {gap} equals 2*{next_p}; the general model needs gap < 2p, "
                "use the special step for this stage"
            )
        if gap > 2 * next_p:
            raise PreconditionError(
                f"gap {gap} is not below the 2p threshold {2 * next_p} at stage {next_p}"
            )
    elif mode == "special":
        if gap != 2 * next_p:
            raise PreconditionError(
                f"the special step applies only when gap == 2p; gap {gap}, 2p = {2 * next_p}"
            )
    else:
        raise PreconditionError(f"unknown step mode {mode!r}")


def step(w: PopulationVector, next_p: int, mode: Mode = "general") -> PopulationVector:
    """Advance ``w`` from its stage to ``next_p``.

    The general step needs gap < 2 * next_p; the special step needs
    gap == 2 * next_p, which can only happen on the first step from the
    initial stage.
    """
    _check_step(w.gap, w.stage_prime, next_p, mode, w.surrogate)
    _check_dimension(mode, next_p, w.J)
    entries = _apply(w.entries, next_p, mode, w.exact)
    return PopulationVector(w.gap, next_p, tuple(entries))


def back_step(w: PopulationVector, prime: int | None = None) -> PopulationVector:
    """Pre-image of ``w`` under the general matrix at ``prime``.

    The result is a surrogate at the previous stage: stepping it forward with
    the general matrix gives ``w`` back, but it need not be any census.
    """
    prime = w.stage_prime if prime is None else prime
    if prime != w.stage_prime:
        raise PreconditionError(f"vector is at stage {w.stage_prime}, not {prime}")
    _check_dimension("general", prime, w.J)
    prev = max(q for q in primes_between(2, prime - 1))
    entries = _solve_general(w.entries, prime, w.exact)
    return PopulationVector(w.gap, prev, tuple(entries), surrogate=True)


def normalize(
    census: DrivingTermCensus, n2: int, J: int | None = None, exact: bool = True
) -> PopulationVector:
    """Divide the census counts by ``n2``, the count of gaps 2 at that stage."""
    if n2 <= 0:
        raise PreconditionError("the count of gaps 2 must be positive")
    J = census.max_length if J is None else J
    if J < census.max_length:
        raise PreconditionError(f"J={J} is below the longest driving term {census.max_length}")
    entries = tuple(_ratio(n, n2, exact) for n in census.vector(max(J, 1)))
    return PopulationVector(census.gap, census.prime, entries)


def step_counts(counts: Sequence[int], next_p: int, mode: Mode = "general") -> list[int]:
    """Integer form of one step: predicted counts ``n_{g,j}`` at ``next_p``.

    general: ``(p-j-1) n_j + j n_{j+1}``; special: ``(p-j) n_j + j n_{j+1}``.
    """
    J = len(counts)
    shift = 1 if mode == "general" else 0
    out = []
    for j in range(1, J + 1):
        v = (next_p - j - shift) * counts[j - 1]
        if j < J:
            v += j * counts[j]
        out.append(v)
    return out


def iterate(w: PopulationVector, target: int, first_mode: Mode = "general") -> list[PopulationVector]:
    """All vectors from ``w`` through stage ``target``; the first step uses ``first_mode``."""
    path = [w]
    mode: Mode = first_mode
    while path[-1].stage_prime < target:
        path.append(step(path[-1], next_prime(path[-1].stage_prime), mode))
        mode = "general"
    return path


@dataclass(frozen=True)
class ModelCoefficients:
    """Closed form for the top entry.

    ``w_{g,1}(p_k#) = sum_m signed[m] * prod_{first_prime <= q <= p_k} (q-m-1)/(q-2)``
    with ``signed[m] = (-1)**(m-1) * magnitudes[m]``. Index 0 is m = 1.
    """

    gap: int
    first_prime: int
    signed: tuple
    sign_convention: str = "alternating: w1 = l1 - l2*P2 + l3*P3 - ..."

    @property
    def magnitudes(self) -> tuple:
        return tuple(c if m % 2 == 0 else -c for m, c in enumerate(self.signed))

    @property
    def J(self) -> int:
        return len(self.signed)


def eigenvector(m: int, J: int) -> list[int]:
    """Eigenvector of every general matrix for eigenvalue index ``m``."""
    return [(-1) ** (j - 1) * comb(m - 1, j - 1) for j in range(1, J + 1)]


def expand(w: PopulationVector) -> list[Number]:
    """Coefficients ``a`` with ``w = sum_m a_m v_m`` by back-substitution."""
    J = w.J
    basis = [eigenvector(m, J) for m in range(1, J + 1)]  # basis[m-1][j-1]
    a: list[Number] = [0] * J
    for j in range(J, 0, -1):
        # Row j of V has nonzeros in columns m >= j; V[j][j] = (-1)**(j-1).
        r = w.entries[j - 1] - sum((basis[m - 1][j - 1] * a[m - 1] for m in range(j + 1, J + 1)), 0)
        a[j - 1] = r * basis[j - 1][j - 1]
    return a


def coefficients_at(w1: PopulationVector) -> ModelCoefficients:
    """Coefficients for a vector already at the first modelled stage ``p_1``.

    The products in the closed form start at ``p_1``, so the expansion is of
    the general-matrix pre-image of ``w1``.
    """
    base = back_step(w1, w1.stage_prime)
    return ModelCoefficients(w1.gap, w1.stage_prime, tuple(expand(base)))


def coefficients(
    w_start: PopulationVector, first_step_mode: Mode, first_prime: int
) -> ModelCoefficients:
    """Take the first step with the given mode, then expand in the eigenbasis."""
    w1 = step(w_start, first_prime, first_step_mode)
    return coefficients_at(w1)


def evaluate_closed_form(l: ModelCoefficients, target_prime: int) -> Number:
    """Top entry ``w_{g,1}`` at stage ``target_prime`` from the closed form."""
    if target_prime < l.first_prime:
        raise PreconditionError(
            f"closed form starts at stage {l.first_prime}, asked for {target_prime}"
        )
    if not is_prime(target_prime):
        raise PreconditionError(f"{target_prime} is not prime")
    exact = all(isinstance(c, (Fraction, int)) for c in l.signed)
    qs = primes_between(l.first_prime, target_prime)
    total: Number = Fraction(0) if exact else 0.0
    for m, a in enumerate(l.signed, start=1):
        prod: Number = _ratio(1, 1, exact)
        for q in qs:
            prod *= _ratio(q - m - 1, q - 2, exact)
        total += a * prod
    return total
