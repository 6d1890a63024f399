import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shorprob.errors import ModulusTooLargeError, NotCoprimeError
from shorprob.modular import (
    OrderInstance,
    continued_fraction_convergents,
    count_periodic_terms,
    decompose_order,
    extract_divisor,
    integer_root,
    is_prime,
    is_prime_power,
    kl_decompose,
    multiplicative_order,
    register_sizes,
)
from shorprob.shor_state import TargetKind, TargetSet, target_set_members


# --- worked examples -------------------------------------------------------

@pytest.mark.parametrize("b, N, r", [(4, 247, 18), (2, 7, 3), (2, 15, 4), (7, 15, 4)])
def test_order_examples(b, N, r):
    assert multiplicative_order(b, N) == r


@pytest.mark.parametrize("N", [3, 10, 247, 1001, 65535])
def test_order_of_minus_one(N):
    assert multiplicative_order(N - 1, N) == 2


def test_order_errors():
    with pytest.raises(NotCoprimeError):
        multiplicative_order(13, 247)
    with pytest.raises(ModulusTooLargeError):
        multiplicative_order(3, 1 << 25)
    with pytest.raises(ValueError):
        multiplicative_order(1, 15)
    with pytest.raises(ValueError):
        multiplicative_order(15, 15)


@pytest.mark.parametrize("r, split", [(18, (1, 9)), (1, (0, 1)), (40, (3, 5)), (64, (6, 1))])
def test_decompose_order(r, split):
    assert decompose_order(r) == split


@pytest.mark.parametrize("N, sizes", [(247, (16, 8)), (2, (2, 1)), (1000, (20, 10)), (1024, (20, 10)), (1025, (21, 11))])
def test_register_sizes_examples(N, sizes):
    assert register_sizes(N) == sizes


def test_register_sizes_parity_rule():
    # n = 2 n0 or 2 n0 - 1, and the defining inequalities, for every N up to 10^6
    for N in range(2, 10 ** 6 + 1):
        n, n0 = register_sizes(N)
        assert n == 2 * n0 or n == 2 * n0 - 1
        assert N * N <= 1 << n < 2 * N * N
        assert 1 << (n0 - 1) < N <= 1 << n0


@pytest.mark.parametrize("args, expected", [((16, 1, 9), (3640, 8)), ((4, 2, 1), (4, 0)), ((16, 0, 9), (7281, 7))])
def test_kl_examples(args, expected):
    kl = kl_decompose(*args)
    assert (kl.q_int, kl.t) == expected


def test_instance_247(inst247):
    assert (inst247.r, inst247.kappa, inst247.r_prime) == (18, 1, 9)
    assert (inst247.n, inst247.n0, inst247.m) == (16, 8, 3641)
    assert inst247.with_x0(17).m == 3640  # ceil(65519 / 18)
    assert inst247.with_q_pad(1).m == math.ceil((1 << 17) / 18)


def test_instance_rejects_bad_offsets():
    with pytest.raises(ValueError):
        OrderInstance.from_base(247, 4, x0=18)
    with pytest.raises(ValueError):
        OrderInstance.from_base(247, 4, q_pad=-1)


@pytest.mark.parametrize("N, expected", [(247, False), (8, True), (12, False), (2, True), (243, True),
                                         (1 << 24, True), (3 ** 15, True), (6, False), (4096 * 3, False)])
def test_is_prime_power_examples(N, expected):
    assert is_prime_power(N) is expected


def test_is_prime_power_against_factorisation():
    def distinct_primes(N):
        ps, d = set(), 2
        while d * d <= N:
            while N % d == 0:
                ps.add(d)
                N //= d
            d += 1
        if N > 1:
            ps.add(N)
        return ps

    for N in range(2, 5000):
        assert is_prime_power(N) == (len(distinct_primes(N)) == 1)


@given(st.integers(0, 2 ** 80), st.integers(1, 7))
def test_integer_root(value, k):
    root = integer_root(value, k)
    assert root ** k <= value < (root + 1) ** k


def test_is_prime_small():
    sieve = [True] * 2000
    sieve[0] = sieve[1] = False
    for i in range(2, 2000):
        if sieve[i]:
            for j in range(i * i, 2000, i):
                sieve[j] = False
    assert [is_prime(i) for i in range(2000)] == sieve


# --- exhaustive number-theory properties ------------------------------------

def test_lemma_bijection():
    # s -> (k r + s) t mod r permutes {1, ..., r-1} when gcd(t, r) = 1
    for r in range(2, 201):
        s = np.arange(1, r, dtype=np.int64)
        target = set(range(1, r))
        for t in range(1, r):
            if math.gcd(t, r) != 1:
                continue
            for k in range(4):
                image = ((k * r + s) * t) % r
                assert len(set(image.tolist())) == r - 1
                assert set(image.tolist()) == target


def test_lemma_coprime_remainder():
    for r_prime in range(1, 100, 2):
        for kappa in range(0, 8):
            for n in range(1, 25):
                if (1 << n) <= (r_prime << kappa):
                    continue
                kl = kl_decompose(n, kappa, r_prime)
                assert (1 << (n - kappa)) == kl.q_int * r_prime + kl.t
                assert 0 <= kl.t < r_prime
                if kl.t:
                    assert math.gcd(kl.t, r_prime) == 1


def _phi(N):
    result, m, p = N, N, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def test_order_divides_phi_small():
    for N in range(3, 200):
        phi = _phi(N)
        for b in range(2, N):
            if math.gcd(b, N) == 1:
                r = multiplicative_order(b, N)
                assert phi % r == 0
                assert pow(b, r, N) == 1


# The full N <= 1000 Gerjuoy / phi(N) sweep runs in test_acceptance.py.


# --- continued fractions ----------------------------------------------------

@pytest.mark.parametrize("y, den, expect", [(0, 16, [(0, 1)]), (1, 2, [(0, 1), (1, 2)]), (3, 4, [(1, 1), (3, 4)])])
def test_convergent_examples(y, den, expect):
    assert list(continued_fraction_convergents(y, den)) == expect


def test_convergents_247():
    conv = continued_fraction_convergents(3641, 65536)
    assert (1, 18) in conv
    assert conv.entries[-1] == (3641, 65536)


@settings(max_examples=300)
@given(st.integers(1, 24).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1))))
def test_convergent_invariants(args):
    n, y = args
    conv = continued_fraction_convergents(y, 1 << n)
    dens = conv.denominators
    assert all(a < b for a, b in zip(dens, dens[1:]))
    assert all(math.gcd(s, d) == 1 for s, d in conv)
    assert Fraction(*conv.entries[-1]) == Fraction(y, 1 << n)


def test_convergent_optimality_exhaustive():
    # every reduced s/d with d < N and |y/2^n - s/d| <= 1/(2 d^2) is a convergent,
    # except the tie 1/1 at y/2^n = 1/2 (0/1 and 1/1 are then equally close)
    rng = np.random.default_rng(7)
    misses = set()
    for N in [5, 16, 37, 100, 247, 300, 511, 512]:
        n, _ = register_sizes(N)
        M = 1 << n
        ys = set(rng.integers(0, M, size=60).tolist()) | {0, 1, M - 1, M // 2}
        for y in ys:
            conv = continued_fraction_convergents(y, M)
            d = np.arange(1, N, dtype=np.int64)
            for s in (y * d // M, y * d // M + 1):
                err = np.abs(y * d - s * M)  # |x - s/d| = err / (M d)
                ok = 2 * err * d <= M
                for si, di in zip(s[ok].tolist(), d[ok].tolist()):
                    if math.gcd(si, di) == 1 and (si, di) not in conv:
                        misses.add((Fraction(y, M), si, di))
    assert misses == {(Fraction(1, 2), 1, 1)}


@pytest.mark.parametrize("y, n, N, expected", [(3641, 16, 247, 18), (0, 16, 247, None), (32768, 16, 247, 2)])
def test_extract_divisor_examples(y, n, N, expected):
    assert extract_divisor(y, n, N) == expected


def test_extract_divisor_can_overshoot_for_loose_outcomes():
    # 159/256 is within 1/8 of 1/2, yet its best convergent below 15 is 5/8
    assert abs(Fraction(159, 256) - Fraction(1, 2)) <= Fraction(1, 8)
    assert extract_divisor(159, 8, 15) == 8


def test_extract_divisor_divides_order_on_targets():
    for N in range(6, 160):
        if is_prime_power(N):
            continue
        for b in range(2, N):
            if math.gcd(b, N) != 1:
                continue
            inst = OrderInstance.from_base(N, b)
            for y in target_set_members(inst, TargetSet(TargetKind.NEAREST_INTEGER)):
                d = extract_divisor(y, inst.n_total, N)
                assert d is None or inst.r % d == 0
            # within distance 2 the cap has to drop to N/2 (r < N/2 there)
            for y in target_set_members(inst, TargetSet(TargetKind.WINDOW_2)):
                d = extract_divisor(y, inst.n_total, N, max_denominator=N // 2 + 1)
                assert d is None or inst.r % d == 0


def test_extract_divisor_window_needs_smaller_cap():
    inst = OrderInstance.from_base(86, 3)
    assert inst.r == 42
    assert 197 in target_set_members(inst, TargetSet(TargetKind.WINDOW_2))
    assert extract_divisor(197, inst.n, 86) == 83
    assert inst.r % extract_divisor(197, inst.n, 86, max_denominator=44) == 0


def test_count_periodic_terms():
    assert count_periodic_terms(16, 18, 0) == 3641
    assert count_periodic_terms(4, 4, 0) == 4
    assert count_periodic_terms(16, 18, 17) == 3640
    for r in range(1, 60):
        for x0 in range(r):
            m = count_periodic_terms(10, r, x0)
            assert x0 + (m - 1) * r < 1 << 10 <= x0 + m * r
