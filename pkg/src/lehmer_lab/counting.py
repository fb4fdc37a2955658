"""Exact counts of units whose signed-power residues fall in prescribed
arithmetic progressions, with two independent routes:

* `count_direct` checks each residue against its progression,
* `count_via_congruence_system` rewrites the constraints through the
  inverses of the progression moduli and checks window membership.

Both enumerate the full unit group; they must agree wherever the second one
is defined (all m_j coprime to q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ntcore
from .errors import CoprimalityViolation, EvenModulus, ZeroExponent
from .ntcore import Modulus


@dataclass(frozen=True)
class ProblemSpec:
    """One counting instance: power vector k, progression moduli m, targets a.

    Targets are normalized to 0 <= a_j < m_j on construction.
    """

    k: tuple[int, ...]
    m: tuple[int, ...]
    a: tuple[int, ...]

    @classmethod
    def of(cls, k, m, a) -> "ProblemSpec":
        k = tuple(int(v) for v in k)
        m = tuple(int(v) for v in m)
        a = tuple(int(v) for v in a)
        if not (len(k) == len(m) == len(a)):
            raise ValueError(
                f"component counts differ: k has {len(k)}, m has {len(m)}, a has {len(a)}"
            )
        if not k:
            raise ValueError("instance must have at least one component")
        if any(v == 0 for v in k):
            raise ZeroExponent("power vector contains a zero component")
        if any(v > ntcore.MAX_EXPONENT_MAGNITUDE for v in map(abs, k)):
            raise ValueError("a power component exceeds the exponent cap 2**20")
        if any(v < 1 for v in m):
            raise ValueError("progression moduli must be >= 1")
        a = tuple(aj % mj for aj, mj in zip(a, m))
        return cls(k=k, m=m, a=a)

    @property
    def s(self) -> int:
        return len(self.k)


@dataclass(frozen=True)
class CongruenceSystem:
    """Per-coordinate data (r_j, b_j, U_j) for the window formulation.

    r_j inverts m_j mod q, b_j = a_j * r_j mod q, and U_j is the largest
    integer with m_j * U_j + a_j < q (negative when a_j >= q, meaning the
    window is empty).
    """

    q: Modulus
    r: tuple[int, ...]
    b: tuple[int, ...]
    u: tuple[int, ...]


@dataclass(frozen=True)
class CountReport:
    """Exact count with its main term, signed error, and error exponent."""

    q: int
    spec: ProblemSpec
    count: int
    main_term: Fraction
    error: float
    normalized_exponent: float | None
    theorem_applies: bool
    oversized_m: bool


def _signed_power_table(modulus: Modulus, units: np.ndarray, k: tuple[int, ...]) -> list[np.ndarray]:
    inv_units = None
    if any(kj < 0 for kj in k):
        inv_units = ntcore.pow_mod_array(units, modulus.phi - 1, modulus.q)
    cache: dict[int, np.ndarray] = {}
    out = []
    for kj in k:
        if kj not in cache:
            cache[kj] = ntcore.signed_power_array(units, kj, modulus, inv_units)
        out.append(cache[kj])
    return out


def _count_direct_vec(modulus: Modulus, spec: ProblemSpec) -> int:
    units = ntcore.unit_residues(modulus)
    powers = _signed_power_table(modulus, units, spec.k)
    mask = np.ones(len(units), dtype=bool)
    for xj, mj, aj in zip(powers, spec.m, spec.a):
        if mj == 1:
            continue
        mask &= (xj % mj) == aj
    return int(np.count_nonzero(mask))


def _count_direct_scalar(modulus: Modulus, spec: ProblemSpec) -> int:
    q = modulus.q
    need_inv = any(kj < 0 for kj in spec.k)
    total = 0
    for n in range(1, q):
        if math.gcd(n, q) != 1:
            continue
        inv_n = pow(n, -1, q) if need_inv else None
        ok = True
        for kj, mj, aj in zip(spec.k, spec.m, spec.a):
            if mj == 1:
                continue
            base = n if kj > 0 else inv_n
            if pow(base, abs(kj), q) % mj != aj:
                ok = False
                break
        if ok:
            total += 1
    return total


def count_direct(modulus: Modulus, spec: ProblemSpec) -> int:
    """Number of units n with n^{k_j} mod q = a_j (mod m_j) for every j.

    No coprimality between the m_j and q is required; the count is defined
    regardless.
    """
    if modulus.q < ntcore.VECTOR_Q_LIMIT:
        return _count_direct_vec(modulus, spec)
    return _count_direct_scalar(modulus, spec)


def congruence_system(modulus: Modulus, spec: ProblemSpec) -> CongruenceSystem:
    """Build the (r_j, b_j, U_j) data; requires gcd(m_j, q) = 1 for all j."""
    q = modulus.q
    rs, bs, us = [], [], []
    for mj, aj in zip(spec.m, spec.a):
        if math.gcd(mj, q) != 1:
            raise CoprimalityViolation(
                f"progression modulus {mj} shares a factor with q = {q}"
            )
        rj = ntcore.mod_inverse(mj, q)
        rs.append(rj)
        bs.append(aj * rj % q)
        us.append((q - 1 - aj) // mj)
    return CongruenceSystem(q=modulus, r=tuple(rs), b=tuple(bs), u=tuple(us))


def _count_system_vec(modulus: Modulus, system: CongruenceSystem, spec: ProblemSpec) -> int:
    q = modulus.q
    units = ntcore.unit_residues(modulus)
    powers = _signed_power_table(modulus, units, spec.k)
    mask = np.ones(len(units), dtype=bool)
    for xj, rj, bj, uj in zip(powers, system.r, system.b, system.u):
        if uj < 0:
            return 0
        mask &= ((rj * xj - bj) % q) <= uj
    return int(np.count_nonzero(mask))


def _count_system_scalar(modulus: Modulus, system: CongruenceSystem, spec: ProblemSpec) -> int:
    q = modulus.q
    if any(uj < 0 for uj in system.u):
        return 0
    need_inv = any(kj < 0 for kj in spec.k)
    total = 0
    for n in range(1, q):
        if math.gcd(n, q) != 1:
            continue
        inv_n = pow(n, -1, q) if need_inv else None
        ok = True
        for kj, rj, bj, uj in zip(spec.k, system.r, system.b, system.u):
            base = n if kj > 0 else inv_n
            if (rj * pow(base, abs(kj), q) - bj) % q > uj:
                ok = False
                break
        if ok:
            total += 1
    return total


def count_via_congruence_system(modulus: Modulus, spec: ProblemSpec) -> int:
    """Independent recount through the inverse-multiplied window form.

    For each unit n, coordinate j holds iff (r_j n^{k_j} - b_j) mod q lands
    in [0, U_j].  Must equal `count_direct` wherever both are defined.
    """
    system = congruence_system(modulus, spec)
    if modulus.q < ntcore.VECTOR_Q_LIMIT:
        return _count_system_vec(modulus, system, spec)
    return _count_system_scalar(modulus, system, spec)


def main_term(modulus: Modulus, spec: ProblemSpec) -> Fraction:
    """phi(q) / (m_1 ... m_s), exact."""
    prod = 1
    for mj in spec.m:
        prod *= mj
    return Fraction(modulus.phi, prod)


def u_bounds(modulus: Modulus, spec: ProblemSpec) -> tuple[list[int], Fraction]:
    """The window lengths U_j plus |prod U_j - q^s / prod m_j|, exact.

    The deviation is the closing-estimate quantity; its expected size is
    O(q^{s-1}) with a small constant.
    """
    q = modulus.q
    us = [(q - 1 - aj) // mj for mj, aj in zip(spec.m, spec.a)]
    prod_u = 1
    for uj in us:
        prod_u *= uj
    prod_m = 1
    for mj in spec.m:
        prod_m *= mj
    deviation = abs(Fraction(prod_u) - Fraction(q**spec.s, prod_m))
    return us, deviation


@dataclass(frozen=True)
class ParityReport:
    """Joint parity statistics of n^k mod q and its inverse residue."""

    q: int
    k: int
    both_even: int
    both_odd: int
    same_parity: int
    main: Fraction
    error: float


def parity_report(modulus: Modulus, k: int) -> ParityReport:
    """Count units whose k-th power residue and its inverse share parity.

    The inverse of n^k mod q is n^{-k} mod q, so the instance uses the power
    vector (k, -k) with progression moduli (2, 2); q must be odd.
    """
    if modulus.q % 2 == 0:
        raise EvenModulus(f"q = {modulus.q} is even; parity statistics need odd q")
    if k == 0:
        raise ZeroExponent("parity statistics need a nonzero power")
    spec_even = ProblemSpec.of((k, -k), (2, 2), (0, 0))
    spec_odd = ProblemSpec.of((k, -k), (2, 2), (1, 1))
    both_even = count_direct(modulus, spec_even)
    both_odd = count_direct(modulus, spec_odd)
    same = both_even + both_odd
    main = Fraction(modulus.phi, 2)
    return ParityReport(
        q=modulus.q,
        k=k,
        both_even=both_even,
        both_odd=both_odd,
        same_parity=same,
        main=main,
        error=float(same - main),
    )


def count_report(modulus: Modulus, spec: ProblemSpec) -> CountReport:
    """Assemble count, exact main term, signed error, and error exponent.

    `theorem_applies` records whether every m_j is coprime to q (the
    asymptotic main/error split is only claimed there); the count itself is
    unconditional.  Instances with some m_j >= q are flagged as degenerate.
    """
    n = count_direct(modulus, spec)
    main = main_term(modulus, spec)
    err = float(Fraction(n) - main)
    norm = math.log(abs(err)) / math.log(modulus.q) if abs(err) >= 1.0 else None
    return CountReport(
        q=modulus.q,
        spec=spec,
        count=n,
        main_term=main,
        error=err,
        normalized_exponent=norm,
        theorem_applies=all(math.gcd(mj, modulus.q) == 1 for mj in spec.m),
        oversized_m=any(mj >= modulus.q for mj in spec.m),
    )
