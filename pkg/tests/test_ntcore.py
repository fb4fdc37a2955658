"""Exact arithmetic layer: factorization, totient, inverses, signed powers."""

import math
import random

import numpy as np
import pytest

from lehmer_lab import (
    InvalidModulus,
    Modulus,
    NotInvertible,
    ZeroExponent,
    build_crt_plan,
    divisors,
    euler_phi,
    factor,
    is_prime,
    mod_inverse,
    pow_mod_signed,
    primes_in_range,
)
from lehmer_lab.ntcore import pow_mod_array, signed_power_array, unit_residues


def trial_division_factor(n):
    """Independent oracle: plain trial division."""
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_factor_examples():
    assert factor(360) == [(2, 3), (3, 2), (5, 1)]
    assert factor(7) == [(7, 1)]
    # trial division confirms 10007 prime
    assert trial_division_factor(10007) == [(10007, 1)]
    assert factor(10007) == [(10007, 1)]


def test_factor_matches_trial_division():
    rng = random.Random(7)
    for n in list(range(2, 400)) + [rng.randrange(2, 10**6) for _ in range(300)]:
        assert factor(n) == trial_division_factor(n)


def test_factor_reconstructs_product():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randrange(2, 10**6)
        prod = 1
        for p, a in factor(n):
            assert is_prime(p)
            prod *= p**a
        assert prod == n


def test_factor_past_trial_range_uses_rho():
    p, q = 1000003, 1000033
    assert factor(p * q) == [(p, 1), (q, 1)]
    assert factor(p * p) == [(p, 2)]
    big_prime = (1 << 61) - 1
    assert factor(big_prime) == [(big_prime, 1)]


@pytest.mark.parametrize("bad", [1, 0, -5, (1 << 62) + 1])
def test_factor_rejects_out_of_range(bad):
    with pytest.raises(InvalidModulus):
        factor(bad)


def test_euler_phi_examples():
    assert euler_phi(Modulus.of(12)) == 4
    assert euler_phi(Modulus.of(7)) == 6
    # brute-force gcd count over 1..359
    assert sum(1 for n in range(1, 360) if math.gcd(n, 360) == 1) == 96
    assert euler_phi(Modulus.of(360)) == 96


def test_euler_phi_brute_force_all_q_to_1e4():
    for q in range(2, 10**4 + 1):
        expected = int(np.count_nonzero(np.gcd(np.arange(1, q), q) == 1))
        assert Modulus.of(q).phi == expected


def test_mod_inverse_examples():
    assert mod_inverse(3, 7) == 5
    assert mod_inverse(1, 97) == 1
    assert mod_inverse(5, 3) == 2


def test_mod_inverse_properties():
    rng = random.Random(3)
    for _ in range(500):
        q = rng.randrange(2, 10**4)
        n = rng.randrange(1, q)
        if math.gcd(n, q) != 1:
            with pytest.raises(NotInvertible):
                mod_inverse(n, q)
            continue
        x = mod_inverse(n, q)
        assert 1 <= x < q
        assert n * x % q == 1
        assert mod_inverse(x, q) == n % q


def test_pow_mod_signed_examples():
    assert pow_mod_signed(3, -2, 7) == 4
    assert pow_mod_signed(2, 3, 5) == 3
    rng = random.Random(5)
    done = 0
    while done < 50:
        q = rng.randrange(2, 10**4)
        n = rng.randrange(1, q)
        if math.gcd(n, q) != 1:
            continue
        assert pow_mod_signed(n, 1, q) == n % q
        done += 1


def test_pow_mod_signed_inverse_pairs():
    rng = random.Random(9)
    done = 0
    while done < 300:
        q = rng.randrange(2, 10**3)
        n = rng.randrange(1, q)
        if math.gcd(n, q) != 1:
            continue
        k = rng.choice([v for v in range(-10, 11) if v != 0])
        assert pow_mod_signed(n, k, q) * pow_mod_signed(n, -k, q) % q == 1
        done += 1


def test_pow_mod_signed_errors():
    with pytest.raises(ZeroExponent):
        pow_mod_signed(3, 0, 7)
    with pytest.raises(NotInvertible):
        pow_mod_signed(6, -1, 9)
    with pytest.raises(ValueError):
        pow_mod_signed(3, (1 << 20) + 1, 7)


def test_pow_mod_signed_result_is_unit():
    for q in (2, 3, 9, 10, 97):
        for n in range(1, q):
            if math.gcd(n, q) != 1:
                continue
            for k in (-3, -1, 1, 2):
                x = pow_mod_signed(n, k, q)
                assert 1 <= x < q


def test_build_crt_plan_examples():
    plan = build_crt_plan(Modulus.of(15))
    assert plan.components == ((3, 5, 2), (5, 3, 2))
    plan_p = build_crt_plan(Modulus.of(13))
    assert plan_p.components == ((13, 1, 1),)


def ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def test_build_crt_plan_inverses():
    for q in (360, 12, 2 * 3 * 5 * 7 * 11, 1024, 9 * 25 * 49):
        m = Modulus.of(q)
        plan = build_crt_plan(m)
        assert len(plan.components) == len(m.factors)
        prod = 1
        for pp, cof, t in plan.components:
            assert 0 <= t < pp
            assert t * cof % pp == 1
            # extended-gcd oracle for the same inverse
            g, x, _ = ext_gcd(cof % pp, pp)
            assert g == 1 and t == x % pp
            assert pp * cof == q
            prod *= pp
        assert prod == q


def test_divisors():
    assert divisors(Modulus.of(12)) == [1, 2, 3, 4, 6, 12]
    assert divisors(Modulus.of(13)) == [1, 13]
    d360 = divisors(Modulus.of(360))
    assert len(d360) == 24
    assert d360 == sorted(d360)
    assert all(360 % d == 0 for d in d360)
    assert set(d360) == {d for d in range(1, 361) if 360 % d == 0}


def test_modulus_invariants():
    rng = random.Random(17)
    for _ in range(100):
        q = rng.randrange(2, 10**6)
        m = Modulus.of(q)
        prod = 1
        last = 1
        for p, a in m.factors:
            assert p > last and a >= 1
            last = p
            prod *= p**a
        assert prod == q
        assert m.divisor_count == len(divisors(m))


def test_modulus_rejects_inconsistent_fields():
    with pytest.raises(InvalidModulus):
        Modulus(q=12, factors=((2, 1), (3, 1)), phi=4, divisor_count=6)  # product 6 != 12
    with pytest.raises(InvalidModulus):
        Modulus(q=12, factors=((2, 2), (3, 1)), phi=5, divisor_count=6)  # phi wrong
    with pytest.raises(InvalidModulus):
        Modulus(q=12, factors=((3, 1), (2, 2)), phi=4, divisor_count=6)  # order wrong


def test_is_prime_against_trial_division():
    for n in range(2, 3000):
        assert is_prime(n) == (trial_division_factor(n) == [(n, 1)])
    # Carmichael numbers and near-misses
    for n in (561, 1105, 1729, 2465, 2821, 6601, 8911, 41041):
        assert not is_prime(n)
    assert is_prime((1 << 61) - 1)


def test_primes_in_range():
    assert primes_in_range(5, 30) == [5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_in_range(24, 28) == []
    assert primes_in_range(2, 2) == [2]
    assert len(primes_in_range(2, 10**5)) == 9592


def test_unit_residues_and_vector_pow():
    for q in (2, 5, 12, 45, 360, 997):
        m = Modulus.of(q)
        units = unit_residues(m)
        assert len(units) == m.phi
        expected = [n for n in range(1, q) if math.gcd(n, q) == 1]
        assert units.tolist() == expected
        # vector pow vs scalar pow
        got = pow_mod_array(units, 5, q)
        assert got.tolist() == [pow(n, 5, q) for n in expected]
        neg = signed_power_array(units, -3, m)
        assert neg.tolist() == [pow_mod_signed(n, -3, q) for n in expected]


def test_no_silent_wrap_for_large_moduli():
    # Spot-check products near 2**40: scalar path must stay exact.
    q = (1 << 40) + 15
    n = q - 2
    assert math.gcd(n, q) == 1
    x = pow_mod_signed(n, 2, q)
    assert x == pow(n, 2, q)
    inv = mod_inverse(n, q)
    assert n * inv % q == 1
