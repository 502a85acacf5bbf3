"""Brute-force references, kept independent of the package's fast paths."""

from fractions import Fraction
from math import comb, gcd


def coprime_gaps(span):
    """Gaps between integers in [1, span + 1] coprime to span, by gcd."""
    pts = [x for x in range(1, span + 2) if gcd(x, span) == 1]
    return [b - a for a, b in zip(pts, pts[1:])]


def naive_census(gaps, g):
    """n_{g,j} by trying every start and extending until the run passes g."""
    gaps = [int(x) for x in gaps]
    n = len(gaps)
    counts = {}
    for i in range(n):
        total, j = 0, 0
        while total < g and j < n:
            total += gaps[(i + j) % n]
            j += 1
        if total == g:
            counts[j] = counts.get(j, 0) + 1
    return dict(sorted(counts.items()))


def naive_subpop(gaps, g):
    gaps = [int(x) for x in gaps]
    n = len(gaps)
    out = {k: {} for k in "abcd"}
    for i in range(n):
        total, j = 0, 0
        while total < g and j < n:
            total += gaps[(i + j) % n]
            j += 1
        if total != g:
            continue
        if j == 1:
            cls = "a"
        else:
            first, last = gaps[i] == 2, gaps[(i + j - 1) % n] == 2
            cls = {(False, False): "a", (False, True): "b", (True, False): "c", (True, True): "d"}[
                (first, last)
            ]
        out[cls][j] = out[cls].get(j, 0) + 1
    return out


def dense_general(p, J):
    """M_J(p) written out entry by entry from its definition."""
    M = [[Fraction(0)] * J for _ in range(J)]
    for i in range(J):
        M[i][i] = Fraction(1) if i == 0 else Fraction(p - (i + 1) - 1, p - 2)
        if i + 1 < J:
            M[i][i + 1] = Fraction(i + 1, p - 2)
    return M


def dense_special(p, J):
    M = [[Fraction(0)] * J for _ in range(J)]
    for i in range(J):
        j = i + 1
        M[i][i] = Fraction(p - 1, p - 2) if j == 1 else Fraction(p - j, p - 2)
        if j < J:
            M[i][i + 1] = Fraction(j, p - 2)
    return M


def matvec(M, v):
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in M]


def binomial_magnitudes(w):
    """l_m = sum_j C(j-1, m-1) w_j, the explicit inverse of the eigenvector matrix."""
    J = len(w)
    return [sum((comb(j - 1, m - 1) * w[j - 1] for j in range(1, J + 1)), Fraction(0))
            for m in range(1, J + 1)]
