"""Exact integer number theory: factorization, totient, divisors, signed
modular powers, and the per-prime-power CRT scaffolding.

Everything here is exact.  Scalar operations run on Python integers (no
overflow at any supported size); the vectorized helpers use int64 arrays and
are guarded so that intermediate products never exceed 2**62.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidModulus, NotInvertible, ZeroExponent

MAX_MODULUS = 1 << 62

# |k| cap for signed powers; keeps a single exponentiation cheap and bounded.
MAX_EXPONENT_MAGNITUDE = 1 << 20

# Largest q for which (q-1)**2 fits an int64; above this the dense numpy
# paths are refused and callers fall back to exact scalar loops.
VECTOR_Q_LIMIT = 1 << 31

_TRIAL_LIMIT = 10**6

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10**24,
# which covers the full supported modulus range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n <= 2**62."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of an odd composite n (Brent's cycle rho).

    The polynomial constant is stepped deterministically so repeated runs
    factor identically.
    """
    for c in range(1, 1000):
        y, r, acc = 2, 1, 1
        g = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    acc = acc * abs(x - y) % n
                g = math.gcd(acc, n)
                k += 128
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho stage exhausted its constants on {n}")


def factor(n: int) -> list[tuple[int, int]]:
    """Full prime factorization of n as [(p, alpha), ...] with p ascending.

    Trial division up to 10**6 (with an early exit past sqrt(n)), then
    Miller-Rabin plus Pollard rho on whatever cofactor survives.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidModulus(f"modulus must be an integer, got {n!r}")
    if n < 2 or n > MAX_MODULUS:
        raise InvalidModulus(f"modulus {n} outside supported range [2, 2**62]")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n and p < _TRIAL_LIMIT:
        for q in (p, p + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        p += 6
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.append(d)
        stack.append(m // d)
    return sorted(out.items())


@dataclass(frozen=True)
class Modulus:
    """A modulus q >= 2 together with its factorization, totient, and
    divisor count.  Immutable; safe to share across workers."""

    q: int
    factors: tuple[tuple[int, int], ...]
    phi: int
    divisor_count: int

    @classmethod
    def of(cls, q: int) -> "Modulus":
        facs = tuple(factor(q))
        phi = 1
        dcount = 1
        for p, a in facs:
            phi *= p ** (a - 1) * (p - 1)
            dcount *= a + 1
        return cls(q=q, factors=facs, phi=phi, divisor_count=dcount)

    def __post_init__(self) -> None:
        if self.q < 2 or self.q > MAX_MODULUS:
            raise InvalidModulus(f"modulus {self.q} outside supported range")
        prod = 1
        last = 1
        for p, a in self.factors:
            if p <= last or a < 1 or not is_prime(p):
                raise InvalidModulus(f"bad factorization entry ({p}, {a})")
            last = p
            prod *= p**a
        if prod != self.q:
            raise InvalidModulus(f"factors do not reconstruct {self.q}")
        phi = 1
        dcount = 1
        for p, a in self.factors:
            phi *= p ** (a - 1) * (p - 1)
            dcount *= a + 1
        if phi != self.phi or dcount != self.divisor_count:
            raise InvalidModulus("derived fields inconsistent with factors")


@dataclass(frozen=True)
class CrtPlan:
    """Per-prime-power decomposition of a modulus.

    Each component stores the prime power P_i, the cofactor q/P_i, and the
    inverse t_i of that cofactor modulo P_i.  A single-prime modulus gets the
    convention cofactor 1, t = 1, so evaluation through a plan is total.
    """

    parent: Modulus
    components: tuple[tuple[int, int, int], ...]


def euler_phi(m: Modulus) -> int:
    """Euler totient of m.q: the number of units in [1, q)."""
    return m.phi


def mod_inverse(n: int, q: int) -> int:
    """The unique x in [1, q) with n*x = 1 (mod q)."""
    if q < 2:
        raise ValueError(f"modulus must be >= 2, got {q}")
    n %= q
    if math.gcd(n, q) != 1:
        raise NotInvertible(f"{n} is not a unit modulo {q}")
    return pow(n, -1, q)


def pow_mod_signed(n: int, k: int, q: int) -> int:
    """n**k mod q for nonzero k of either sign; negative k inverts first.

    The result is the least nonnegative residue, and is a unit (so in
    [1, q)) because n must be coprime to q.
    """
    if k == 0:
        raise ZeroExponent("exponent 0 is not allowed; power vectors must have nonzero components")
    if abs(k) > MAX_EXPONENT_MAGNITUDE:
        raise ValueError(f"|k| = {abs(k)} exceeds the exponent cap 2**20")
    if q < 2:
        raise ValueError(f"modulus must be >= 2, got {q}")
    n %= q
    if math.gcd(n, q) != 1:
        raise NotInvertible(f"{n} is not a unit modulo {q}")
    base = n if k > 0 else pow(n, -1, q)
    return pow(base, abs(k), q)


def build_crt_plan(m: Modulus) -> CrtPlan:
    """One (prime power, cofactor, cofactor-inverse) component per prime of q."""
    comps = []
    for p, a in m.factors:
        pp = p**a
        cof = m.q // pp
        t = mod_inverse(cof % pp, pp)
        comps.append((pp, cof, t))
    return CrtPlan(parent=m, components=tuple(comps))


def divisors(m: Modulus) -> list[int]:
    """All divisors of m.q, ascending."""
    divs = [1]
    for p, a in m.factors:
        divs = [d * p**e for d in divs for e in range(a + 1)]
    divs.sort()
    return divs


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi, via a byte sieve."""
    if hi < 2 or hi < lo:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(hi) + 1):
        if sieve[p]:
            start = p * p
            sieve[start :: p] = b"\x00" * ((hi - start) // p + 1)
    return [p for p in range(max(lo, 2), hi + 1) if sieve[p]]


def unit_residues(m: Modulus) -> np.ndarray:
    """Ascending int64 array of the units in [1, q).  Dense path only."""
    q = m.q
    if q >= VECTOR_Q_LIMIT:
        raise ValueError(f"q = {q} too large for dense unit enumeration")
    mask = np.ones(q, dtype=bool)
    for p, _ in m.factors:
        mask[::p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def pow_mod_array(base: np.ndarray, exp: int, q: int) -> np.ndarray:
    """Elementwise base**exp mod q for exp >= 0 on an int64 array.

    Requires q < VECTOR_Q_LIMIT so products stay inside int64.
    """
    if exp < 0:
        raise ValueError("pow_mod_array takes a nonnegative exponent")
    if q >= VECTOR_Q_LIMIT:
        raise ValueError(f"q = {q} too large for the int64 vector path")
    result = np.ones_like(base)
    b = base % q
    e = exp
    while e:
        if e & 1:
            result = (result * b) % q
        b = (b * b) % q
        e >>= 1
    return result


def signed_power_array(units: np.ndarray, k: int, m: Modulus, inv_units: np.ndarray | None = None) -> np.ndarray:
    """units**k mod q elementwise, k of either sign and nonzero.

    `inv_units` may carry a precomputed inverse table (units**(phi-1)) to be
    shared across several exponents; it is computed on demand otherwise.
    """
    if k == 0:
        raise ZeroExponent("exponent 0 is not allowed; power vectors must have nonzero components")
    if abs(k) > MAX_EXPONENT_MAGNITUDE:
        raise ValueError(f"|k| = {abs(k)} exceeds the exponent cap 2**20")
    if k > 0:
        return pow_mod_array(units, k, m.q)
    if inv_units is None:
        inv_units = pow_mod_array(units, m.phi - 1, m.q)
    return pow_mod_array(inv_units, -k, m.q)
