"""Ramanujan tau values and normalized Hecke eigenvalues for the weight-12
level-1 eigenform (the discriminant cusp form), plus the symmetric-square
coefficient sequences a_n = lambda(n^2) and b_n = mu^2(n) a_n.

tau(n) is exact: the table is the q-expansion of q * prod(1-q^n)^24,
computed as 23 sparse multiplications by the pentagonal-number series
modulo four 31-bit primes, then CRT-reconstructed to Python integers.
The product of the primes (~2^124) exceeds twice the Deligne bound
d(n) n^{11/2} for every n <= 10^6, so the reconstruction is exact.
An independent build path (prime-power recursion + multiplicativity)
is provided for cross-checking.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .arith import divisors, factorize, mobius_of, mobius_sieve, spf_sieve
from .exceptions import SizeError

MAX_TAU_LIMIT = 10 ** 6

# largest four primes below 2^31; accumulators stay within int64 because
# every pentagonal pass adds at most ~1700 terms of size < 2^31
_CRT_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579)

_CACHE_MAGIC = b"TAU1"


def pentagonal_series(max_degree: int):
    """Exponents and signs of prod(1-q^n) = sum (-1)^k q^{k(3k±1)/2}, degree <= max_degree."""
    offs = [0]
    signs = [1]
    k = 1
    while k * (3 * k - 1) // 2 <= max_degree:
        s = 1 if k % 2 == 0 else -1
        offs.append(k * (3 * k - 1) // 2)
        signs.append(s)
        e2 = k * (3 * k + 1) // 2
        if e2 <= max_degree:
            offs.append(e2)
            signs.append(s)
        k += 1
    order = np.argsort(offs)
    return (np.asarray(offs, dtype=np.int64)[order],
            np.asarray(signs, dtype=np.int64)[order])


@dataclass
class HeckeTable:
    """Exact tau(1..limit) plus lambda(n) = tau(n) / n^{11/2} in float64.

    tau is a Python list indexed by n (tau[0] = 0 sentinel); lam is a
    float64 array of the same layout.  Immutable after construction.
    """
    limit: int
    tau: list
    lam: np.ndarray = field(repr=False)


def _crt_reconstruct(residues):
    """Centered exact integers from residue rows mod _CRT_PRIMES (mixed radix)."""
    p1, p2, p3, p4 = _CRT_PRIMES
    r1, r2, r3, r4 = residues
    inv_p1_p2 = pow(p1, -1, p2)
    inv_p12_p3 = pow(p1 * p2 % p3, -1, p3)
    inv_p123_p4 = pow(p1 * p2 * p3 % p4, -1, p4)
    t1 = r1
    t2 = (r2 - t1) % p2 * inv_p1_p2 % p2
    u = (r3 - t1 - (p1 % p3) * t2) % p3
    t3 = u * inv_p12_p3 % p3
    v = (r4 - t1 - (p1 % p4) * t2 - (p1 * p2 % p4) * t3) % p4
    t4 = v * inv_p123_p4 % p4
    prod = p1 * p2 * p3 * p4
    half = prod // 2
    out = []
    for a, b, c, d in zip(t1.tolist(), t2.tolist(), t3.tolist(), t4.tolist()):
        x = a + p1 * (b + p2 * (c + p3 * d))
        if x > half:
            x -= prod
        out.append(x)
    return out


def build_tau_table(limit: int) -> HeckeTable:
    """Exact tau(n) for 1 <= n <= limit via the eta-product expansion."""
    if not (1 <= limit <= MAX_TAU_LIMIT):
        raise SizeError(f"tau table limit must be in [1, {MAX_TAU_LIMIT}], got {limit}")
    offs, signs = pentagonal_series(limit - 1)
    residues = [kernels.eta_power_mod(limit, offs, signs, 24, p) % p
                for p in _CRT_PRIMES]
    tau = [0] + _crt_reconstruct(residues)
    return HeckeTable(limit=limit, tau=tau, lam=_lambda_array(tau))


def _lambda_array(tau):
    n = np.arange(len(tau), dtype=np.float64)
    n[0] = 1.0
    lam = np.array([float(t) for t in tau], dtype=np.float64) / n ** 5.5
    return lam


def tau_table_by_recursion(prime_tau: dict, limit: int) -> list:
    """Independent tau table: tau(p) given, prime powers by the Hecke recursion
    tau(p^{k+1}) = tau(p) tau(p^k) - p^11 tau(p^{k-1}), composites by
    multiplicativity.  Returns a list indexed like HeckeTable.tau."""
    spf = spf_sieve(limit)
    tau = [0] * (limit + 1)
    if limit >= 1:
        tau[1] = 1
    pp = {}

    def tau_prime_power(p, e):
        key = (p, e)
        if key not in pp:
            tp = prime_tau[p]
            prev, cur = 1, tp
            for _ in range(e - 1):
                prev, cur = cur, tp * cur - p ** 11 * prev
            pp[key] = cur
        return pp[key]

    for n in range(2, limit + 1):
        p = int(spf[n])
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        tau[n] = tau_prime_power(p, e) * tau[m]
    return tau


def lambda_value(table: HeckeTable, n: int) -> float:
    """lambda(n) = tau(n) / n^{11/2}."""
    if not (1 <= n <= table.limit):
        raise SizeError(f"n={n} outside tau table (limit {table.limit})")
    return float(table.lam[n])


def check_mult_identity(table: HeckeTable, m: int, n: int) -> float:
    """|lambda(mn) - sum_{d | gcd(m,n)} mu(d) lambda(m/d) lambda(n/d)|."""
    if m < 1 or n < 1 or m * n > table.limit:
        raise SizeError(f"need mn <= {table.limit}, got m={m}, n={n}")
    lam = table.lam
    g = math.gcd(m, n)
    rhs = 0.0
    for d in divisors(g):
        mu = mobius_of(d)
        if mu:
            rhs += mu * lam[m // d] * lam[n // d]
    return abs(float(lam[m * n]) - rhs)


def deligne_violations(table: HeckeTable) -> list:
    """Primes p <= limit with tau(p)^2 > 4 p^11 (exact integers; must be empty)."""
    spf = spf_sieve(table.limit)
    bad = []
    for p in range(2, table.limit + 1):
        if spf[p] == p:
            if table.tau[p] ** 2 > 4 * p ** 11:
                bad.append(p)
    return bad


@dataclass
class Sym2Coeffs:
    """a_n = lambda(n^2) and b_n = mu^2(n) a_n for n <= limit.

    a is stored for every n (the non-squarefree entries are still
    lambda(n^2), flagged off in ``squarefree``); b zeroes them out.
    """
    limit: int
    a: np.ndarray
    b: np.ndarray
    squarefree: np.ndarray  # uint8 mask, = mu^2


def lambda_prime_power(lam_p: float, e: int) -> float:
    """lambda(p^e) from lambda(p) via lambda(p^{k+1}) = lambda(p) lambda(p^k) - lambda(p^{k-1})."""
    prev, cur = 1.0, lam_p
    if e == 0:
        return 1.0
    for _ in range(e - 1):
        prev, cur = cur, lam_p * cur - prev
    return cur


def build_sym2_coeffs(table: HeckeTable, limit: int) -> Sym2Coeffs:
    """Symmetric-square coefficients up to ``limit``.

    Requires tau(p) for every prime p <= limit, i.e. table.limit >= limit;
    lambda(n^2) is assembled multiplicatively from lambda(p^{2e}) so no
    table of size limit^2 is ever needed.
    """
    if table.limit < limit:
        raise SizeError(
            f"tau table covers n <= {table.limit}, need primes up to {limit}")
    spf = spf_sieve(limit)
    mu = mobius_sieve(limit)
    a = np.zeros(limit + 1, dtype=np.float64)
    if limit >= 1:
        a[1] = 1.0
    pp_cache = {}
    for n in range(2, limit + 1):
        p = int(spf[n])
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        key = (p, 2 * e)
        if key not in pp_cache:
            pp_cache[key] = lambda_prime_power(float(table.lam[p]), 2 * e)
        a[n] = pp_cache[key] * a[m]
    sqfree = (mu != 0).astype(np.uint8)
    b = a * sqfree
    return Sym2Coeffs(limit=limit, a=a, b=b, squarefree=sqfree)


# -- binary cache ------------------------------------------------------------

def save_tau_cache(table: HeckeTable, path) -> None:
    """Write the tau table: magic 'TAU1', u64 LE limit, limit x s128 LE values."""
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(table.limit.to_bytes(8, "little"))
        for n in range(1, table.limit + 1):
            fh.write(table.tau[n].to_bytes(16, "little", signed=True))


def load_tau_cache(path) -> HeckeTable:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _CACHE_MAGIC:
            raise ValueError(f"bad tau cache magic {magic!r} in {path}")
        limit = int.from_bytes(fh.read(8), "little")
        if not (1 <= limit <= MAX_TAU_LIMIT):
            raise SizeError(f"tau cache reports limit {limit}, outside range")
        raw = fh.read(16 * limit)
        if len(raw) != 16 * limit:
            raise ValueError(f"tau cache truncated: {path}")
    tau = [0] + [int.from_bytes(raw[16 * i:16 * (i + 1)], "little", signed=True)
                 for i in range(limit)]
    return HeckeTable(limit=limit, tau=tau, lam=_lambda_array(tau))


def load_or_build_tau(limit: int, cache_path=None) -> HeckeTable:
    """Use the cache when it exists and covers ``limit``; build (and save) otherwise."""
    if cache_path:
        import os
        if os.path.exists(cache_path):
            table = load_tau_cache(cache_path)
            if table.limit >= limit:
                return table
    table = build_tau_table(limit)
    if cache_path:
        save_tau_cache(table, cache_path)
    return table
