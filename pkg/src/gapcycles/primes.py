"""Small-prime arithmetic over Python integers.

Everything here works on unbounded ints; primorials overflow 64 bits
at 53#.
"""

from __future__ import annotations

from functools import reduce
from operator import mul

# Deterministic for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Least prime strictly greater than n."""
    k = max(n + 1, 2)
    while not is_prime(k):
        k += 1
    return k


def prev_prime(n: int) -> int:
    """Greatest prime strictly less than n."""
    k = n - 1
    while k >= 2 and not is_prime(k):
        k -= 1
    if k < 2:
        raise ValueError(f"no prime below {n}")
    return k


def primes_upto(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if is_prime(q)]


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes q with lo <= q <= hi."""
    return [q for q in range(max(lo, 2), hi + 1) if is_prime(q)]


def primorial(p: int) -> int:
    return reduce(mul, primes_upto(p), 1)


def phi_primorial(p: int) -> int:
    """Euler phi of p#, i.e. the number of gaps in G(p#)."""
    return reduce(mul, (q - 1 for q in primes_upto(p)), 1)


def twin_count(p: int) -> int:
    """Number of gaps 2 in G(p#): the product of q - 2 over odd primes q <= p."""
    return reduce(mul, (q - 2 for q in primes_upto(p) if q > 2), 1)


def euler_phi(n: int) -> int:
    """Euler phi by trial factorization; used as an independent check."""
    result, m, f = n, n, 2
    while f * f <= m:
        if m % f == 0:
            while m % f == 0:
                m //= f
            result -= result // f
        f += 1
    if m > 1:
        result -= result // m
    return result
