"""Small integer-arithmetic helpers shared by several modules."""

import math

import numpy as np


def spf_sieve(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 2:
        spf[2::2] = 2
        for p in range(3, int(math.isqrt(limit)) + 1, 2):
            if spf[p] == 0:
                spf[p * p::2 * p] = np.where(spf[p * p::2 * p] == 0, p,
                                             spf[p * p::2 * p])
        odd = np.arange(3, limit + 1, 2)
        untouched = spf[3::2] == 0
        spf[3::2] = np.where(untouched, odd, spf[3::2])
    return spf


def mobius_sieve(limit: int) -> np.ndarray:
    """mu(0..limit) as int8, via the smallest-prime-factor table."""
    spf = spf_sieve(limit)
    mu = np.zeros(limit + 1, dtype=np.int8)
    if limit >= 1:
        mu[1] = 1
    for n in range(2, limit + 1):
        p = spf[n]
        m = n // p
        mu[n] = 0 if m % p == 0 else -mu[m]
    return mu


def primes_up_to(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    spf = spf_sieve(limit)
    idx = np.arange(limit + 1)
    return idx[(idx >= 2) & (spf[idx] == idx)].astype(np.int64)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 by trial division, as (p, exponent) pairs."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    d = 5
    while d * d <= n:
        for q in (d, d + 2):
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            if e:
                out.append((q, e))
        d += 6
    if n > 1:
        out.append((n, 1))
    return out


def mobius_of(n: int) -> int:
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p ** j for d in ds for j in range(e + 1)]
    return sorted(ds)


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi
