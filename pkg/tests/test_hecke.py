"""Tau table, eigenvalue identities, symmetric-square coefficients, cache."""

import math
import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from expsumlab import hecke
from expsumlab.arith import mobius_of, primes_up_to
from expsumlab.exceptions import SizeError

from helpers import naive_delta_expansion, tau_by_sigma_identity

# frozen from the naive q-expansion oracle (re-derived below in
# test_first_values_match_naive_oracle)
TAU_1_TO_7 = [1, -24, 252, -1472, 4830, -6048, -16744]


def test_first_values_match_naive_oracle(tau_10k):
    oracle = naive_delta_expansion(8)
    assert oracle[1:8] == TAU_1_TO_7
    assert tau_10k.tau[1:8] == TAU_1_TO_7


def test_limit_one():
    t = hecke.build_tau_table(1)
    assert t.tau[1:] == [1]
    assert hecke.lambda_value(t, 1) == 1.0


def test_sigma_identity_oracle(tau_10k):
    # a second, fully independent exact route
    for n in (2, 3, 10, 30, 100, 200):
        assert tau_10k.tau[n] == tau_by_sigma_identity(n)


def test_multiplicativity_example(tau_10k):
    assert tau_10k.tau[6] == tau_10k.tau[2] * tau_10k.tau[3] == -6048


def test_lambda_values(tau_10k):
    assert hecke.lambda_value(tau_10k, 1) == 1.0
    assert abs(hecke.lambda_value(tau_10k, 2) - (-24 / 2 ** 5.5)) < 1e-15
    assert hecke.lambda_value(tau_10k, 4) == -1472 / 2 ** 11 == -0.71875


def test_lambda_out_of_table(tau_10k):
    with pytest.raises(SizeError):
        hecke.lambda_value(tau_10k, tau_10k.limit + 1)


def test_mult_identity_examples(tau_10k):
    # gcd = 1: single d = 1 term, lambda(6) = lambda(2) lambda(3) up to 1 ulp
    assert hecke.check_mult_identity(tau_10k, 2, 3) < 1e-15
    # lambda(4) = lambda(2)^2 - 1
    assert hecke.check_mult_identity(tau_10k, 2, 2) < 1e-15
    assert hecke.check_mult_identity(tau_10k, 6, 10) < 1e-12


def test_mult_identity_all_coprime_pairs(tau_10k):
    limit = 2000
    worst = 0.0
    for n in range(2, limit + 1):
        for m in range(2, n + 1):
            if m * n > limit:
                break
            if math.gcd(m, n) == 1:
                worst = max(worst, hecke.check_mult_identity(tau_10k, m, n))
    assert worst < 1e-12


def test_deligne_bound_exact(tau_10k):
    assert hecke.deligne_violations(tau_10k) == []


def test_lambda_p_squared_relation(tau_10k):
    for p in primes_up_to(100):
        lam_p = tau_10k.lam[p]
        lam_p2 = tau_10k.lam[p * p]
        assert abs(lam_p * lam_p - 1.0 - lam_p2) < 1e-12


def test_recursion_equals_eta(tau_10k):
    prime_tau = {int(p): tau_10k.tau[int(p)] for p in primes_up_to(2000)}
    rec = hecke.tau_table_by_recursion(prime_tau, 2000)
    assert rec == tau_10k.tau[:2001]


@given(st.integers(min_value=2, max_value=97), st.integers(min_value=2, max_value=97))
def test_tau_multiplicative_property(m, n):
    table = _small_table()
    if math.gcd(m, n) == 1 and m * n <= table.limit:
        assert table.tau[m * n] == table.tau[m] * table.tau[n]


_CACHED = {}


def _small_table():
    if "t" not in _CACHED:
        _CACHED["t"] = hecke.build_tau_table(97 * 97)
    return _CACHED["t"]


def test_size_errors():
    with pytest.raises(SizeError):
        hecke.build_tau_table(0)
    with pytest.raises(SizeError):
        hecke.build_tau_table(hecke.MAX_TAU_LIMIT + 1)


# -- symmetric-square coefficients -------------------------------------------

def test_sym2_examples(tau_10k):
    s2 = hecke.build_sym2_coeffs(tau_10k, 1000)
    assert s2.b[1] == 1.0
    assert s2.b[2] == -0.71875  # = lambda(4) from tau(4) = -1472
    assert s2.b[4] == 0.0
    assert s2.squarefree[4] == 0 and s2.squarefree[6] == 1


def test_sym2_a_matches_direct_table_lookup(tau_10k):
    s2 = hecke.build_sym2_coeffs(tau_10k, 100)
    ns = np.arange(1, 101)
    direct = tau_10k.lam[ns * ns]
    dev = np.abs(s2.a[1:101] - direct)
    assert np.max(dev) < 1e-12


def test_sym2_b_zero_iff_not_squarefree(tau_10k):
    s2 = hecke.build_sym2_coeffs(tau_10k, 500)
    for n in range(1, 501):
        if mobius_of(n) == 0:
            assert s2.b[n] == 0.0
        else:
            assert s2.b[n] == s2.a[n]


def test_sym2_b_multiplicative_on_coprime_squarefree(tau_10k):
    s2 = hecke.build_sym2_coeffs(tau_10k, 1000)
    for m in (2, 3, 5, 7, 10, 13):
        for n in (3, 7, 11, 21, 31):
            if math.gcd(m, n) != 1 or m * n > 1000:
                continue
            if mobius_of(m) == 0 or mobius_of(n) == 0:
                continue
            assert abs(s2.b[m * n] - s2.b[m] * s2.b[n]) < 1e-12


def test_sym2_insufficient_table(tau_10k):
    with pytest.raises(SizeError):
        hecke.build_sym2_coeffs(tau_10k, tau_10k.limit + 1)


# -- binary cache ---------------------------------------------------------------

def test_cache_roundtrip(tmp_path, tau_10k):
    path = tmp_path / "tau.bin"
    hecke.save_tau_cache(tau_10k, path)
    assert os.path.getsize(path) == 12 + 16 * tau_10k.limit
    back = hecke.load_tau_cache(path)
    assert back.limit == tau_10k.limit
    assert back.tau == tau_10k.tau
    assert np.array_equal(back.lam, tau_10k.lam)


def test_cache_bad_magic(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"XXXX" + (1).to_bytes(8, "little") + b"\x00" * 16)
    with pytest.raises(ValueError):
        hecke.load_tau_cache(path)


def test_cache_truncated(tmp_path):
    path = tmp_path / "short.bin"
    path.write_bytes(b"TAU1" + (5).to_bytes(8, "little") + b"\x00" * 16)
    with pytest.raises(ValueError):
        hecke.load_tau_cache(path)


def test_load_or_build_uses_cache(tmp_path):
    path = tmp_path / "tau.bin"
    t1 = hecke.load_or_build_tau(50, path)
    assert path.exists()
    t2 = hecke.load_or_build_tau(30, path)  # covered by the cached 50
    assert t2.limit == 50
    assert t1.tau == t2.tau
