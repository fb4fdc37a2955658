"""Family sweeps, empirical bound checks, and log-log exponent fits.

Asymptotic statements are operationalized two ways: per-point caps with
explicit constants, and least-squares slopes of ln|error| against ln q with
stated margins.  Points with |error| < 1 carry no exponent information and
are excluded from fits (but counted).

All sampling is driven by a single 64-bit seed (default 0xC0FFEE); scans
distribute independent q values across a worker pool and sort the gathered
records by q, so output is schedule-independent.
"""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import counting, expsum, ntcore
from .counting import ProblemSpec
from .errors import InsufficientData, RangeTooLarge
from .expsum import ExpSumArgs
from .ntcore import Modulus

logger = logging.getLogger(__name__)

DEFAULT_SEED = 0xC0FFEE
DEFAULT_WORK_BUDGET = 10**10

FAMILIES = ("prime", "odd", "all", "prime_power")


@dataclass(frozen=True)
class ScanRecord:
    """One row of a modulus-family sweep."""

    q: int
    family_tag: str
    phi: int
    N: int
    main: float
    abs_error: float
    lemma_ratio_max: float | None
    wall_time: float


@dataclass(frozen=True)
class ExponentFit:
    """Ordinary least squares of ln|error| on ln q."""

    slope: float
    intercept: float
    r_squared: float
    n_points: int
    filtered_zero_errors: int


class LemmaSweepRow(NamedTuple):
    q: int
    max_ratio: float
    mean_ratio: float


class BoundSweepRow(NamedTuple):
    l: int
    U: int
    r1: float
    r2: float


@dataclass(frozen=True)
class CheckOutcome:
    """Result of one verification suite: data rows plus a pass/fail tally."""

    name: str
    header: tuple[str, ...]
    rows: list[tuple]
    n_total: int
    n_failed: int

    @property
    def passed(self) -> bool:
        return self.n_failed == 0

    @property
    def summary(self) -> str:
        return f"{self.name}: {self.n_total - self.n_failed}/{self.n_total} pass"


# ----------------------------------------------------------------------
# identities and geometric-sum ratio sweeps
# ----------------------------------------------------------------------

def orthogonality_check(l: int, tol: float = 1e-9) -> bool:
    """Does averaging e_l(mu*u) over a full symmetric period detect u = 0?

    For every u in [0, l) the detector must be within `tol` of 1 when
    u = 0 mod l and of 0 otherwise.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    mus = np.fromiter(expsum.symmetric_range(l), dtype=np.int64)
    for u in range(l):
        val = np.exp((2j * math.pi / l) * ((mus * u) % l)).sum() / l
        expected = 1.0 if u % l == 0 else 0.0
        if abs(val - expected) > tol:
            return False
    return True


def check_orthogonality(l_max: int, tol: float = 1e-9) -> CheckOutcome:
    """Run the root-of-unity detector for every l in [1, l_max]."""
    rows = []
    n_fail = 0
    for l in range(1, l_max + 1):
        ok = orthogonality_check(l, tol)
        n_fail += not ok
        rows.append((l, int(ok)))
    return CheckOutcome(
        name="orthogonality", header=("l", "ok"), rows=rows, n_total=l_max, n_failed=n_fail
    )


def geometric_l_ladder(l_min: int = 3, l_max: int = 10**4, growth: float = 1.5) -> list[int]:
    """Integer l values from l_min to l_max spaced by ~`growth`."""
    out = []
    x = float(l_min)
    while x <= l_max:
        v = round(x)
        if not out or v > out[-1]:
            out.append(v)
        x *= growth
    if out[-1] != l_max:
        out.append(l_max)
    return out


def bound_ratio_sweep(l_values: Iterable[int], u_values: Iterable[int]) -> list[BoundSweepRow]:
    """Tabulate the geometric-sum mass ratios over l_values x u_values."""
    rows = []
    for l in l_values:
        for u in u_values:
            r1, r2 = expsum.geometric_bound_ratios(l, u)
            rows.append(BoundSweepRow(l=l, U=u, r1=r1, r2=r2))
    return rows


def check_geometric_bounds(
    l_min: int = 3,
    l_max: int = 10**4,
    growth: float = 1.5,
    r1_cap: float = 2.0,
    r2_cap: float = 3.0,
) -> CheckOutcome:
    """Sweep l by ~1.5x steps, U in {0, l/2, l, 10l}; cap r1 and r2.

    The caps are fixed working constants: the underlying estimates promise
    only boundedness, so any violation is grounds to re-examine, not retune.
    """
    rows = []
    n_fail = 0
    for l in geometric_l_ladder(l_min, l_max, growth):
        for u in (0, l // 2, l, 10 * l):
            r1, r2 = expsum.geometric_bound_ratios(l, u)
            ok = r1 <= r1_cap and r2 <= r2_cap
            n_fail += not ok
            rows.append((l, u, r1, r2, int(ok)))
    return CheckOutcome(
        name="geometric-bounds",
        header=("l", "U", "r1", "r2", "ok"),
        rows=rows,
        n_total=len(rows),
        n_failed=n_fail,
    )


# ----------------------------------------------------------------------
# family scans
# ----------------------------------------------------------------------

def family_members(family: str, q_min: int, q_max: int) -> list[int]:
    """Moduli of the given family inside [q_min, q_max], ascending."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    lo = max(q_min, 2)
    if q_max < lo:
        return []
    if family == "prime":
        return ntcore.primes_in_range(lo, q_max)
    if family == "odd":
        start = max(lo, 3)
        if start % 2 == 0:
            start += 1
        return list(range(start, q_max + 1, 2))
    if family == "all":
        return list(range(lo, q_max + 1))
    members = []
    for p in ntcore.primes_in_range(2, q_max):
        pp = p
        while pp <= q_max:
            if pp >= lo:
                members.append(pp)
            pp *= p
    members.sort()
    return members


def _estimate_ops(q_values: Sequence[int], s: int) -> int:
    # One modular exponentiation per unit per coordinate, phi(q) <= q.
    return s * sum(q_values)


def _guard_budget(est: int, work_budget: int) -> None:
    if est > work_budget:
        raise RangeTooLarge(
            f"estimated {est} modular operations exceed the work budget {work_budget}"
        )


def _chunk(values: Sequence, n_chunks: int) -> list[list]:
    n_chunks = max(1, min(n_chunks, len(values)))
    size = (len(values) + n_chunks - 1) // n_chunks
    return [list(values[i : i + size]) for i in range(0, len(values), size)]


def _lemma_sample_max(modulus: Modulus, k: tuple[int, ...], samples: int, seed: int) -> float:
    rng = random.Random((seed * 1000003 + modulus.q) & 0xFFFFFFFFFFFFFFFF)
    worst = 0.0
    for _ in range(samples):
        lam = _draw_nonzero_vector(rng, modulus.q, len(k))
        args = ExpSumArgs.of(modulus, k, lam)
        worst = max(worst, expsum.lemma_ratio(args))
    return worst


def _scan_family_payload(payload) -> list[tuple]:
    qs, k, m, a, family, timing, lemma_samples, seed = payload
    spec = ProblemSpec.of(k, m, a)
    out = []
    for q in qs:
        t0 = time.perf_counter()
        modulus = Modulus.of(q)
        n = counting.count_direct(modulus, spec)
        main = counting.main_term(modulus, spec)
        err = float(abs(n - main))
        lr = None
        if lemma_samples > 0 and len(k) >= 2:
            lr = _lemma_sample_max(modulus, spec.k, lemma_samples, seed)
        dt = time.perf_counter() - t0 if timing else 0.0
        out.append((q, family, modulus.phi, n, float(main), err, lr, dt))
    return out


def _run_chunked(worker, payloads: list, jobs: int) -> list:
    if jobs <= 1 or len(payloads) <= 1:
        results = [worker(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, payloads))
    merged = []
    for r in results:
        merged.extend(r)
    return merged


def scan_family(
    family: str,
    q_min: int,
    q_max: int,
    spec: ProblemSpec,
    *,
    jobs: int = 1,
    work_budget: int = DEFAULT_WORK_BUDGET,
    timing: bool = True,
    lemma_samples: int = 0,
    seed: int = DEFAULT_SEED,
) -> list[ScanRecord]:
    """One ScanRecord per admissible family member.

    Moduli sharing a factor with some m_j are skipped (and logged): the
    main/error split is only claimed under coprimality.  Estimated work is
    refused up front when it exceeds `work_budget`.
    """
    if q_max > 10**7:
        raise ValueError(f"q_max = {q_max} not supported (need q_max <= 1e7)")
    if q_max < q_min:
        return []
    members = []
    for q in family_members(family, q_min, q_max):
        if all(math.gcd(mj, q) == 1 for mj in spec.m):
            members.append(q)
        else:
            logger.info("skipping q=%d: gcd(m_j, q) > 1", q)
    _guard_budget(_estimate_ops(members, spec.s), work_budget)
    payloads = [
        (chunk, spec.k, spec.m, spec.a, family, timing, lemma_samples, seed)
        for chunk in _chunk(members, jobs * 4)
    ]
    rows = _run_chunked(_scan_family_payload, payloads, jobs)
    rows.sort(key=lambda r: r[0])
    return [
        ScanRecord(
            q=q, family_tag=fam, phi=phi, N=n, main=main, abs_error=err,
            lemma_ratio_max=lr, wall_time=dt,
        )
        for q, fam, phi, n, main, err, lr, dt in rows
    ]


# ----------------------------------------------------------------------
# parity scans (power vector (k, -k), progressions (2, 2))
# ----------------------------------------------------------------------

def _parity_counts_fast(modulus: Modulus, ks: Sequence[int]) -> dict[int, tuple[int, int]]:
    """(both_even, both_odd) per k, sharing one inverse table.

    Only the units below q/2 are enumerated: n <-> q-n either fixes both
    residues (k even) or flips both parities (k odd, q odd), so totals
    follow from the half-range tallies.
    """
    q = modulus.q
    units = ntcore.unit_residues(modulus)
    half = units[: len(units) // 2]
    inv_half = ntcore.pow_mod_array(half, modulus.phi - 1, q)
    out = {}
    for k in ks:
        ak = abs(k)
        x = ntcore.pow_mod_array(half, ak, q)
        y = ntcore.pow_mod_array(inv_half, ak, q)
        be_half = int(np.count_nonzero(((x | y) & 1) == 0))
        bo_half = int(np.count_nonzero((x & y & 1) == 1))
        if ak % 2 == 1:
            be = bo = be_half + bo_half
        else:
            be, bo = 2 * be_half, 2 * bo_half
        out[k] = (be, bo)
    return out


def _parity_scan_payload(payload) -> list[tuple]:
    qs, ks, family, timing = payload
    out = []
    for q in qs:
        t0 = time.perf_counter()
        modulus = Modulus.of(q)
        if q < ntcore.VECTOR_Q_LIMIT:
            counts = _parity_counts_fast(modulus, ks)
        else:
            counts = {}
            for k in ks:
                rep = counting.parity_report(modulus, k)
                counts[k] = (rep.both_even, rep.both_odd)
        dt = time.perf_counter() - t0 if timing else 0.0
        out.append((q, family, modulus.phi, counts, dt))
    return out


def parity_scan(
    k_values: Sequence[int],
    q_min: int,
    q_max: int,
    *,
    family: str = "prime",
    jobs: int = 1,
    work_budget: int = DEFAULT_WORK_BUDGET,
    timing: bool = True,
) -> dict[int, list[ScanRecord]]:
    """Same-parity counts N(q) with main term phi(q)/2, per k, over odd q.

    family "prime" sweeps odd primes, "odd" sweeps all odd moduli.  The
    per-q timing covers all k values jointly (the inverse table is shared).
    """
    if family not in ("prime", "odd"):
        raise ValueError("parity scans support the prime and odd families only")
    if any(k == 0 for k in k_values):
        raise ValueError("power values must be nonzero")
    members = [q for q in family_members(family, q_min, q_max) if q % 2 == 1]
    _guard_budget(_estimate_ops(members, 2) * len(k_values), work_budget)
    payloads = [(chunk, tuple(k_values), family, timing) for chunk in _chunk(members, jobs * 4)]
    rows = _run_chunked(_parity_scan_payload, payloads, jobs)
    rows.sort(key=lambda r: r[0])
    result: dict[int, list[ScanRecord]] = {k: [] for k in k_values}
    for q, fam, phi, counts, dt in rows:
        for k in k_values:
            be, bo = counts[k]
            n = be + bo
            main = phi / 2.0
            result[k].append(
                ScanRecord(
                    q=q, family_tag=fam, phi=phi, N=n, main=main,
                    abs_error=abs(n - main), lemma_ratio_max=None, wall_time=dt,
                )
            )
    return result


# ----------------------------------------------------------------------
# exponent fitting
# ----------------------------------------------------------------------

def fit_exponent(records: Sequence[ScanRecord]) -> ExponentFit:
    """OLS slope of ln|error| against ln q over records with |error| >= 1."""
    usable = [r for r in records if r.abs_error >= 1.0]
    filtered = len(records) - len(usable)
    if len(usable) < 5:
        raise InsufficientData(
            f"need >= 5 records with |error| >= 1, have {len(usable)}"
        )
    xs = np.log([r.q for r in usable])
    ys = np.log([r.abs_error for r in usable])
    xbar = xs.mean()
    ybar = ys.mean()
    sxx = float(np.sum((xs - xbar) ** 2))
    if sxx == 0.0:
        raise InsufficientData("all usable records share one q; slope undefined")
    slope = float(np.sum((xs - xbar) * (ys - ybar)) / sxx)
    intercept = float(ybar - slope * xbar)
    ss_res = float(np.sum((ys - (intercept + slope * xs)) ** 2))
    ss_tot = float(np.sum((ys - ybar) ** 2))
    if ss_tot > 0.0:
        r2 = 1.0 - ss_res / ss_tot
    else:
        r2 = 1.0 if ss_res < 1e-18 else 0.0
    return ExponentFit(
        slope=slope,
        intercept=intercept,
        r_squared=r2,
        n_points=len(usable),
        filtered_zero_errors=filtered,
    )


# ----------------------------------------------------------------------
# lemma-ratio sampling
# ----------------------------------------------------------------------

def _draw_nonzero_vector(rng: random.Random, q: int, s: int) -> tuple[int, ...]:
    lo, hi = -((q - 1) // 2), q // 2
    while True:
        lam = tuple(rng.randint(lo, hi) for _ in range(s))
        if any(lam):
            return lam


def lemma_ratio_sweep(
    q_list: Sequence[Modulus],
    k: Sequence[int],
    samples_per_q: int,
    seed: int = DEFAULT_SEED,
) -> list[LemmaSweepRow]:
    """Sampled max/mean of the normalized sum ratio at each modulus.

    A single seeded stream drives all draws, so repeated runs are
    byte-identical.
    """
    k = tuple(int(v) for v in k)
    if len(k) < 2:
        raise ValueError("need at least two power components")
    if samples_per_q < 1:
        raise ValueError("samples_per_q must be >= 1")
    rng = random.Random(seed)
    rows = []
    for modulus in q_list:
        ratios = []
        for _ in range(samples_per_q):
            lam = _draw_nonzero_vector(rng, modulus.q, len(k))
            ratios.append(expsum.lemma_ratio(ExpSumArgs.of(modulus, k, lam)))
        rows.append(
            LemmaSweepRow(
                q=modulus.q,
                max_ratio=max(ratios),
                mean_ratio=math.fsum(ratios) / len(ratios),
            )
        )
    return rows


def lemma_ratio_exhaustive(modulus: Modulus, k: Sequence[int]) -> float:
    """Max ratio over every nonzero coefficient vector; tiny q only."""
    k = tuple(int(v) for v in k)
    q = modulus.q
    if q ** len(k) > 10**6:
        raise ValueError("exhaustive enumeration is limited to q^s <= 1e6")
    worst = 0.0
    rng = [list(expsum.symmetric_range(q))] * len(k)
    def rec(prefix):
        nonlocal worst
        if len(prefix) == len(k):
            if any(prefix):
                worst = max(worst, expsum.lemma_ratio(ExpSumArgs.of(modulus, k, prefix)))
            return
        for v in rng[len(prefix)]:
            rec(prefix + (v,))
    rec(())
    return worst


# ----------------------------------------------------------------------
# seeded verification suites
# ----------------------------------------------------------------------

def _fmt_vec(vec: Sequence[int]) -> str:
    return ";".join(str(v) for v in vec)


def _draw_nonzero(rng: random.Random, cap: int) -> int:
    while True:
        v = rng.randint(-cap, cap)
        if v != 0:
            return v


def _draw_coprime(rng: random.Random, q: int, cap: int) -> int:
    while True:
        v = rng.randint(1, cap)
        if math.gcd(v, q) == 1:
            return v


def check_oracle_equivalence(
    instances: int = 200, q_max: int = 2000, seed: int = DEFAULT_SEED
) -> CheckOutcome:
    """Direct count vs window-form recount on seeded random instances."""
    rng = random.Random(seed)
    rows = []
    n_fail = 0
    for _ in range(instances):
        q = rng.randint(3, q_max)
        s = rng.choice((2, 3))
        k = tuple(_draw_nonzero(rng, 4) for _ in range(s))
        m = tuple(_draw_coprime(rng, q, 6) for _ in range(s))
        a = tuple(rng.randrange(mj) for mj in m)
        modulus = Modulus.of(q)
        spec = ProblemSpec.of(k, m, a)
        n_direct = counting.count_direct(modulus, spec)
        n_system = counting.count_via_congruence_system(modulus, spec)
        ok = n_direct == n_system
        n_fail += not ok
        rows.append((q, _fmt_vec(k), _fmt_vec(m), _fmt_vec(a), n_direct, n_system, int(ok)))
    return CheckOutcome(
        name="oracle-equivalence",
        header=("q", "k", "m", "a", "n_direct", "n_system", "ok"),
        rows=rows,
        n_total=instances,
        n_failed=n_fail,
    )


def check_crt_agreement(
    instances: int = 300, q_max: int = 10**4, seed: int = DEFAULT_SEED
) -> CheckOutcome:
    """Direct sum vs prime-power product on seeded composite moduli."""
    rng = random.Random(seed)
    rows = []
    n_fail = 0
    for _ in range(instances):
        while True:
            q = rng.randint(4, q_max)
            if not ntcore.is_prime(q):
                break
        s = rng.choice((2, 3))
        k = tuple(_draw_nonzero(rng, 5) for _ in range(s))
        lam = tuple(rng.randint(-((q - 1) // 2), q // 2) for _ in range(s))
        modulus = Modulus.of(q)
        args = ExpSumArgs.of(modulus, k, lam)
        direct = expsum.exp_sum_direct(args)
        via_crt = expsum.exp_sum_crt(args, ntcore.build_crt_plan(modulus))
        delta = abs(direct.value - via_crt.value)
        tol = max(1e-6, 1e-6 * direct.magnitude)
        ok = delta <= tol
        n_fail += not ok
        rows.append(
            (q, _fmt_vec(k), _fmt_vec(lam), direct.re, direct.im,
             via_crt.re, via_crt.im, delta, tol, int(ok))
        )
    return CheckOutcome(
        name="crt-agreement",
        header=("q", "k", "lambda", "re_direct", "im_direct", "re_crt", "im_crt",
                "abs_delta", "tol", "ok"),
        rows=rows,
        n_total=instances,
        n_failed=n_fail,
    )


def check_weil_bound(
    q_max: int = 2000, pairs_per_q: int = 10, seed: int = DEFAULT_SEED
) -> CheckOutcome:
    """|K(a, b; p)| <= 2*sqrt(p) for seeded (a, b) over primes in [5, q_max]."""
    rng = random.Random(seed)
    rows = []
    n_fail = 0
    for q in ntcore.primes_in_range(5, q_max):
        modulus = Modulus.of(q)
        bound = 2.0 * math.sqrt(q) + 1e-6
        for _ in range(pairs_per_q):
            a = rng.randint(1, q - 1)
            b = rng.randint(1, q - 1)
            mag = expsum.exp_sum_direct(ExpSumArgs.of(modulus, (1, -1), (a, b))).magnitude
            ok = mag <= bound
            n_fail += not ok
            rows.append((q, a, b, mag, bound, int(ok)))
    return CheckOutcome(
        name="weil-bound",
        header=("q", "a", "b", "magnitude", "bound", "ok"),
        rows=rows,
        n_total=len(rows),
        n_failed=n_fail,
    )


def check_u_bounds(
    instances: int = 100, q_max: int = 10**6, seed: int = DEFAULT_SEED
) -> CheckOutcome:
    """|prod U_j - q^s / prod m_j| <= s * q^(s-1), in exact rationals."""
    rng = random.Random(seed)
    rows = []
    n_fail = 0
    for _ in range(instances):
        q = rng.randint(2, q_max)
        s = rng.choice((2, 3))
        m = tuple(rng.randint(1, 10) for _ in range(s))
        a = tuple(rng.randrange(mj) for mj in m)
        spec = ProblemSpec.of((1,) * s, m, a)
        modulus = Modulus.of(q)
        _, deviation = counting.u_bounds(modulus, spec)
        cap = s * q ** (s - 1)
        ok = deviation <= cap
        n_fail += not ok
        rows.append((q, s, _fmt_vec(m), _fmt_vec(a), float(deviation), float(cap), int(ok)))
    return CheckOutcome(
        name="u-bounds",
        header=("q", "s", "m", "a", "deviation", "cap", "ok"),
        rows=rows,
        n_total=instances,
        n_failed=n_fail,
    )


def check_partition_identity(
    instances: int = 50, q_max: int = 500, seed: int = DEFAULT_SEED
) -> CheckOutcome:
    """Summing the count over every target vector must give exactly phi(q).

    Progression moduli here may share factors with q; the cell partition of
    the unit group holds regardless.
    """
    rng = random.Random(seed)
    rows = []
    n_fail = 0
    for _ in range(instances):
        q = rng.randint(3, q_max)
        k = (_draw_nonzero(rng, 3), _draw_nonzero(rng, 3))
        m = (rng.randint(1, 4), rng.randint(1, 4))
        modulus = Modulus.of(q)
        total = 0
        for a1 in range(m[0]):
            for a2 in range(m[1]):
                total += counting.count_direct(modulus, ProblemSpec.of(k, m, (a1, a2)))
        ok = total == modulus.phi
        n_fail += not ok
        rows.append((q, _fmt_vec(k), _fmt_vec(m), total, modulus.phi, int(ok)))
    return CheckOutcome(
        name="partition-identity",
        header=("q", "k", "m", "total", "phi", "ok"),
        rows=rows,
        n_total=instances,
        n_failed=n_fail,
    )
