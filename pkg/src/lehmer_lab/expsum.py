"""Unit-group exponential sums with signed power vectors.

S(lambda; k, q) = sum over units n of e_q(lambda_1 n^{k_1} + ... + lambda_s n^{k_s}),
evaluated directly and through the prime-power product decomposition, plus
the geometric sums used to bound the incomplete pieces.

Phases are reduced modulo q as integers before any float conversion, and the
final accumulation uses math.fsum, so a sum's value does not depend on how
the unit range was chunked.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import ntcore
from .errors import AllZeroCoefficients, PlanMismatch, ZeroExponent
from .ntcore import CrtPlan, Modulus

_TWO_PI = 2.0 * math.pi


def _symmetric_reduce(value: int, q: int) -> int:
    """Reduce to the symmetric residue range (-(q-1)/2, q/2]."""
    r = value % q
    if r > q // 2:
        r -= q
    return r


def symmetric_range(l: int) -> range:
    """The l consecutive integers mu with -(l-1)/2 <= mu <= l/2."""
    return range(-((l - 1) // 2), l // 2 + 1)


@dataclass(frozen=True)
class ExpSumArgs:
    """A coefficient vector bound to a modulus and a power vector.

    Coefficients are stored reduced to the symmetric range; `gcd_class` is
    the plain integer gcd of the nonzero coefficients (None when all are
    zero, in which case the sum is trivially phi(q)).
    """

    modulus: Modulus
    k: tuple[int, ...]
    lam: tuple[int, ...]
    gcd_class: int | None

    @classmethod
    def of(cls, modulus: Modulus, k, lam) -> "ExpSumArgs":
        k = tuple(int(v) for v in k)
        lam = tuple(int(v) for v in lam)
        if len(k) != len(lam):
            raise ValueError(f"k has {len(k)} components but lambda has {len(lam)}")
        if not k:
            raise ValueError("power vector must have at least one component")
        if any(v == 0 for v in k):
            raise ZeroExponent("power vector contains a zero component")
        lam = tuple(_symmetric_reduce(v, modulus.q) for v in lam)
        d = math.gcd(*lam) if any(lam) else None
        return cls(modulus=modulus, k=k, lam=lam, gcd_class=d)

    @property
    def s(self) -> int:
        return len(self.k)


@dataclass(frozen=True)
class ComplexSum:
    """A complex sum value plus the number of summands it accumulated."""

    re: float
    im: float
    terms: int

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    def __complex__(self) -> complex:
        return self.value


def e_l(l: int, z: int) -> complex:
    """exp(2*pi*i*z/l), with z reduced mod l first."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    return cmath.exp(2j * math.pi * (z % l) / l)


def _phase_array(args: ExpSumArgs) -> np.ndarray:
    """Integer phases (sum_j lambda_j n^{k_j}) mod q over ascending units."""
    m = args.modulus
    q = m.q
    units = ntcore.unit_residues(m)
    inv_units: np.ndarray | None = None
    if any(kj < 0 for kj in args.k):
        inv_units = ntcore.pow_mod_array(units, m.phi - 1, q)
    phase = np.zeros_like(units)
    for kj, lj in zip(args.k, args.lam):
        if lj == 0:
            continue
        x = ntcore.signed_power_array(units, kj, m, inv_units)
        phase = (phase + lj * x) % q
    return phase


def _sum_of_phases(phase: np.ndarray, q: int) -> ComplexSum:
    theta = phase * (_TWO_PI / q)
    terms = np.exp(1j * theta)
    return ComplexSum(
        re=math.fsum(terms.real.tolist()),
        im=math.fsum(terms.imag.tolist()),
        terms=len(phase),
    )


def _exp_sum_scalar(args: ExpSumArgs) -> ComplexSum:
    """Exact-integer fallback for moduli past the int64 vector range."""
    m = args.modulus
    q = m.q
    res: list[float] = []
    ims: list[float] = []
    count = 0
    for n in range(1, q):
        if math.gcd(n, q) != 1:
            continue
        count += 1
        inv_n = pow(n, -1, q) if any(kj < 0 for kj in args.k) else None
        phase = 0
        for kj, lj in zip(args.k, args.lam):
            if lj == 0:
                continue
            base = n if kj > 0 else inv_n
            phase = (phase + lj * pow(base, abs(kj), q)) % q
        z = cmath.exp(2j * math.pi * phase / q)
        res.append(z.real)
        ims.append(z.imag)
    return ComplexSum(re=math.fsum(res), im=math.fsum(ims), terms=count)


def exp_sum_direct(args: ExpSumArgs) -> ComplexSum:
    """Direct evaluation over all phi(q) units, ascending n.

    math.fsum makes the result exactly rounded, hence independent of any
    worker partitioning of the unit range.
    """
    if args.modulus.q < ntcore.VECTOR_Q_LIMIT:
        return _sum_of_phases(_phase_array(args), args.modulus.q)
    return _exp_sum_scalar(args)


def exp_sum_crt(args: ExpSumArgs, plan: CrtPlan) -> ComplexSum:
    """Evaluation via the product over prime-power components.

    Each factor sums e_{P_i}(t_i * sum_j lambda_j n^{k_j}) over the units of
    P_i; the product equals the direct sum exactly, so any disagreement past
    rounding is a defect.
    """
    if plan.parent != args.modulus:
        raise PlanMismatch(
            f"plan was built for q = {plan.parent.q}, args use q = {args.modulus.q}"
        )
    total = complex(1.0, 0.0)
    for pp, _cof, t in plan.components:
        sub_m = Modulus.of(pp)
        sub_lam = tuple(t * lj for lj in args.lam)
        sub = ExpSumArgs.of(sub_m, args.k, sub_lam)
        total *= exp_sum_direct(sub).value
    return ComplexSum(re=total.real, im=total.imag, terms=args.modulus.phi)


def lemma_ratio(args: ExpSumArgs) -> float:
    """|S| normalized by d^{1/s} * q^{1-1/s}.

    This is the quantity whose empirical boundedness the analysis sweeps
    monitor; it is not asserted against any threshold here.
    """
    if args.s < 2:
        raise ValueError("the normalized ratio needs at least two components")
    if args.gcd_class is None:
        raise AllZeroCoefficients("coefficient vector is identically zero")
    s = args.s
    q = args.modulus.q
    d = args.gcd_class
    norm = d ** (1.0 / s) * q ** (1.0 - 1.0 / s)
    return exp_sum_direct(args).magnitude / norm


def geometric_sum(l: int, mu: int, U: int) -> ComplexSum:
    """sum_{u=0}^{U} e_l(mu*u), in closed form.

    Angle arguments are reduced as exact integers mod 2l before the trig
    calls, so large U costs nothing in accuracy.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if U < 0:
        raise ValueError(f"U must be >= 0, got {U}")
    mu_r = mu % l
    if mu_r == 0:
        return ComplexSum(re=float(U + 1), im=0.0, terms=U + 1)
    num_t = (mu_r * (U + 1)) % (2 * l)
    pha_t = (mu_r * U) % (2 * l)
    mag = math.sin(math.pi * num_t / l) / math.sin(math.pi * mu_r / l)
    z = cmath.exp(1j * math.pi * pha_t / l) * mag
    return ComplexSum(re=z.real, im=z.imag, terms=U + 1)


def _abs_geometric_sums(l: int, U: int) -> np.ndarray:
    """|geometric_sum(l, mu, U)| over the symmetric range, vectorized."""
    mus = np.arange(-((l - 1) // 2), l // 2 + 1, dtype=np.int64)
    mu_r = mus % l
    out = np.empty(len(mus), dtype=np.float64)
    zero = mu_r == 0
    out[zero] = float(U + 1)
    nz = ~zero
    num_t = (mu_r[nz] * (U + 1)) % (2 * l)
    out[nz] = np.abs(np.sin(np.pi * num_t / l)) / np.sin(np.pi * mu_r[nz] / l)
    return out

def geometric_bound_ratios(l: int, U: int) -> tuple[float, float]:
    """Ratios of the summed |geometric_sum| masses to l*ln(l) and U + l*ln(l).

    r1 excludes mu = 0; r2 includes it.  Raw values only; thresholds live in
    the analysis sweeps.
    """
    if l < 3:
        raise ValueError(f"l must be >= 3, got {l}")
    sums = _abs_geometric_sums(l, U)
    mus = np.arange(-((l - 1) // 2), l // 2 + 1, dtype=np.int64)
    nonzero_mass = float(np.sum(sums[mus != 0]))
    total_mass = nonzero_mass + float(U + 1)
    lnl = l * math.log(l)
    return nonzero_mass / lnl, total_mass / (U + lnl)
