"""Direct sums, arc partitions, the splitting identity, bound sweeps."""

import cmath
import math

import numpy as np
import pytest

from expsumlab import expsum
from expsumlab.exceptions import DomainError, SizeError
from expsumlab.phase import PhaseFunction

PS_PHASE = PhaseFunction(k=1.0, m=1, gamma=1 / 1.03)


@pytest.fixture(scope="module")
def b_coeffs(tau_20k):
    return expsum.make_coeffs("b", 2 * 10 ** 4, table=tau_20k)


def test_empty_range():
    c = expsum.make_coeffs("unit", 100)
    f = PhaseFunction(k=1.0, m=1, gamma=0.5)
    assert expsum.direct_sum(c, f, 50.0, 50.0) == 0.0


def test_ten_term_brute_force():
    f = PhaseFunction(k=1.0, m=1, gamma=0.5)
    c = expsum.make_coeffs("unit", 20)
    got = expsum.direct_sum(c, f, 10.0, 20.0)
    want = sum(cmath.exp(2j * cmath.pi * math.sqrt(n)) for n in range(11, 21))
    assert abs(got - want) < 1e-12


def test_chunking_determinism(b_coeffs):
    one = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4, chunk=10 ** 6)
    many = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4, chunk=157)
    assert abs(one - many) < 1e-12
    # fixed chunking must be bit-identical, whatever the worker count
    a = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4)
    b = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4, workers=4)
    c = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4, workers=8)
    assert a == b == c


def test_triangle_inequality(b_coeffs):
    s = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4)
    assert abs(s) <= np.sum(np.abs(b_coeffs[10 ** 4 + 1:2 * 10 ** 4 + 1]))


def test_conjugation_symmetry(b_coeffs):
    s = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4)
    sc = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4, conjugate=True)
    assert abs(sc - s.conjugate()) < 1e-12


def test_size_error_when_table_short():
    c = expsum.make_coeffs("unit", 100)
    f = PhaseFunction(k=1.0, m=1, gamma=0.5)
    with pytest.raises(SizeError):
        expsum.direct_sum(c, f, 100.0, 200.0)


def test_arc_partition_matches_direct(b_coeffs):
    direct = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4)
    rep = expsum.arc_partition_sum(b_coeffs, PS_PHASE, 1e4, 2e4, 80)
    assert abs(rep.value - direct) < 1e-6
    assert len(rep.arcs) > 10
    total = sum(v for _, _, v in rep.arcs)
    assert abs(total - rep.value) < 1e-6 * len(rep.arcs)


def test_arc_partition_single_arc_degenerate(b_coeffs):
    rep = expsum.arc_partition_sum(b_coeffs, PS_PHASE, 1e4, 2e4, 10)
    # at Q=10 the whole h-interval sits between the mediants of 5/7's neighbors
    assert len(rep.arcs) == 1
    direct = expsum.direct_sum(b_coeffs, PS_PHASE, 1e4, 2e4)
    assert abs(rep.value - direct) < 1e-12


def test_arc_partition_term_counts(b_coeffs):
    from expsumlab.farey import HMap, dissect
    arcs = dissect(HMap(PS_PHASE), 40, 1e4, 2e4)
    counts = [math.floor(a.x_hi) - math.floor(a.x_lo) for a in arcs]
    assert sum(counts) == 10 ** 4


# -- splitting identity -------------------------------------------------------

def test_splitting_q1_exact():
    c = expsum.make_coeffs("unit", 300)
    assert expsum.splitting_identity_check(c, 1, 0, 0.0, (10.0, 50.0)) < 1e-14


def test_splitting_example_q4():
    c = expsum.make_coeffs("unit", 300)
    assert expsum.splitting_identity_check(c, 4, 3, 0.0, (10.0, 50.0)) < 1e-9


def test_splitting_example_q6_hecke(tau_20k):
    c = expsum.make_coeffs("a", 300, table=tau_20k)
    dev = expsum.splitting_identity_check(c, 6, 5, 17.3, (50.0, 250.0))
    assert dev < 1e-7 * 200


def test_splitting_grid_small(tau_20k):
    kinds = [expsum.make_coeffs("unit", 600),
             expsum.make_coeffs("a", 600, table=tau_20k),
             expsum.make_coeffs("b", 600, table=tau_20k)]
    for q in range(1, 9):
        for l in range(0 if q == 1 else 1, q + 1):
            if math.gcd(l, q) != 1:
                continue
            for T in (0.0, 1.0, 17.3):
                for c in kinds:
                    dev = expsum.splitting_identity_check(c, q, l, T, (50.0, 250.0))
                    assert dev < 1e-7 * 200, (q, l, T)


def test_splitting_non_reduced_fraction():
    c = expsum.make_coeffs("unit", 300)
    with pytest.raises(DomainError):
        expsum.splitting_identity_check(c, 6, 2, 0.0, (10.0, 50.0))


def test_splitting_independent_brute_force(tau_20k):
    # recompute both sides with plain complex arithmetic, no shared code
    import cmath as cm
    from expsumlab.arith import divisors
    from expsumlab.characters import enumerate_characters, gauss_sum_conj

    coeffs = expsum.make_coeffs("a", 300, table=tau_20k)
    q, l, T, lo, u = 6, 5, 17.3, 50.0, 250.0

    def nit(n):
        return cm.exp(-1j * T * math.log(n))

    lhs = sum(coeffs[n] * cm.exp(2j * cm.pi * n * l / q) * nit(n)
              for n in range(51, 251))
    rhs = 0
    for d in divisors(q):
        q2 = q // d
        chars = enumerate_characters(q2)
        phi = len(chars)
        for chi in chars:
            # multiples of d in (50, 250]: n' ranges over (50/d, 250/d]
            inner = sum(coeffs[d * n] * chi(n) * nit(n)
                        for n in range(50 // d + 1, 250 // d + 1))
            rhs += d ** (-1j * T) / phi * chi(l) * gauss_sum_conj(chi) * inner
    assert abs(lhs - rhs) < 1e-9 * 200
    got = expsum.splitting_identity_check(coeffs, q, l, T, (lo, u))
    assert abs(got - abs(lhs - rhs)) < 1e-8


# -- coefficients and sweeps ------------------------------------------------------

def test_make_coeffs_kinds(tau_20k):
    cu = expsum.make_coeffs("unit", 50)
    assert cu[0] == 0.0 and np.all(cu[1:] == 1.0)
    cb = expsum.make_coeffs("b", 50, table=tau_20k)
    assert cb[4] == 0.0 and cb[2] == -0.71875
    with pytest.raises(DomainError):
        expsum.make_coeffs("a", 50)
    with pytest.raises(DomainError):
        expsum.make_coeffs("weird", 50)


def test_make_coeffs_coprime_filter():
    c = expsum.make_coeffs("unit", 60, coprime_to=6)
    for n in range(1, 61):
        assert c[n] == (1.0 if math.gcd(n, 6) == 1 else 0.0)


def test_bound_sweep_empty_grid():
    assert expsum.bound_sweep(0.97, 1.0, [], "unit") == []


def test_bound_sweep_skips_window_violations(capsys):
    # k so large that f(N) > N^(3/2-eta): the point is skipped with a warning
    reports = expsum.bound_sweep(0.97, 1e9, [4096], "unit")
    assert reports == []
    assert "skipping" in capsys.readouterr().err


def test_bound_sweep_reports(tau_20k):
    grid = [2 ** e for e in range(12, 15)]
    reports = expsum.bound_sweep(0.97, 1.0, grid, "unit")
    assert [r.N for r in reports] == [float(g) for g in grid]
    for r in reports:
        assert r.bound == expsum.theorem_bound(r.N, r.N ** 0.97)
        assert r.ratio == abs(r.value) / r.bound
        assert r.sqrtN_ratio == abs(r.value) / math.sqrt(r.N)
    # the ratio trend is the only thing asserted, and only as a heuristic
    assert expsum.ratio_loglog_slope(reports) < 0.05


def test_sum_report_json_schema():
    rep = expsum.SumReport(N=10.0, Nprime=20.0, k=1.0, m=1, gamma=0.5,
                           coeff_kind="unit", coprime_to=1, Q=3,
                           value=1 + 2j, bound=5.0,
                           arcs=[(2, 1, 0.5 + 0.5j)])
    d = rep.to_json_dict()
    assert set(d) == {"params", "value", "abs", "bound", "ratio",
                      "sqrtN_ratio", "arcs"}
    assert d["value"] == {"re": 1.0, "im": 2.0}
    assert d["arcs"] == [{"q": 2, "l": 1, "re": 0.5, "im": 0.5}]
    assert d["abs"] == abs(1 + 2j)
