"""Scans, fits, ratio sweeps, and the seeded verification suites."""

import math

import numpy as np
import pytest

from lehmer_lab import (
    ExpSumArgs,
    InsufficientData,
    Modulus,
    ProblemSpec,
    RangeTooLarge,
    ScanRecord,
    bound_ratio_sweep,
    fit_exponent,
    lemma_ratio,
    lemma_ratio_sweep,
    orthogonality_check,
    parity_report,
    parity_scan,
    scan_family,
)
from lehmer_lab import analysis
from lehmer_lab.expsum import symmetric_range


def test_orthogonality_detector_values():
    # l=5: detector is exactly 1 at u=0 and exactly 0 elsewhere
    mus = list(symmetric_range(5))
    for u in range(5):
        val = sum(np.exp(2j * math.pi * mu * u / 5) for mu in mus) / 5
        assert abs(val - (1.0 if u == 0 else 0.0)) < 1e-12
    assert orthogonality_check(5)
    assert orthogonality_check(1)


def test_orthogonality_all_small():
    assert all(orthogonality_check(l) for l in range(1, 61))


def test_check_orthogonality_outcome():
    out = analysis.check_orthogonality(50)
    assert out.passed
    assert out.summary == "orthogonality: 50/50 pass"
    assert out.rows[0] == (1, 1)


def test_family_members():
    assert analysis.family_members("prime", 5, 100)[:3] == [5, 7, 11]
    assert analysis.family_members("odd", 3, 9) == [3, 5, 7, 9]
    assert analysis.family_members("odd", 2, 9) == [3, 5, 7, 9]
    assert analysis.family_members("all", 2, 6) == [2, 3, 4, 5, 6]
    assert analysis.family_members("prime_power", 2, 30) == [
        2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29,
    ]
    assert analysis.family_members("prime", 24, 28) == []
    with pytest.raises(ValueError):
        analysis.family_members("fibonacci", 2, 10)


def test_scan_family_prime_parity_cells():
    spec = ProblemSpec.of((1, -1), (2, 2), (0, 0))
    records = scan_family("prime", 5, 100, spec, timing=False)
    assert [r.q for r in records] == analysis.family_members("prime", 5, 100)
    assert all(r.family_tag == "prime" for r in records)
    qs = [r.q for r in records]
    assert qs == sorted(qs) and len(set(qs)) == len(qs)
    for r in records[:5]:
        mod = Modulus.of(r.q)
        assert r.phi == mod.phi
        assert r.abs_error == abs(r.N - mod.phi / 4)
        assert r.wall_time == 0.0


def test_scan_family_skips_noncoprime():
    spec = ProblemSpec.of((1, -1), (2, 2), (0, 0))
    records = scan_family("all", 2, 20, spec, timing=False)
    assert [r.q for r in records] == [3, 5, 7, 9, 11, 13, 15, 17, 19]


def test_scan_family_empty_range():
    spec = ProblemSpec.of((1, -1), (2, 2), (0, 0))
    assert scan_family("prime", 50, 40, spec) == []


def test_scan_family_budget_refusal():
    spec = ProblemSpec.of((1, -1), (2, 2), (0, 0))
    with pytest.raises(RangeTooLarge):
        scan_family("prime", 5, 5000, spec, work_budget=100)


def test_scan_family_jobs_equality():
    spec = ProblemSpec.of((1, -1), (2, 2), (1, 1))
    a = scan_family("prime", 5, 400, spec, jobs=1, timing=False)
    b = scan_family("prime", 5, 400, spec, jobs=2, timing=False)
    assert a == b


def test_scan_family_lemma_column():
    spec = ProblemSpec.of((1, -1), (2, 2), (0, 0))
    records = scan_family("prime", 5, 40, spec, timing=False, lemma_samples=3, seed=1)
    again = scan_family("prime", 5, 40, spec, timing=False, lemma_samples=3, seed=1)
    assert records == again
    assert all(r.lemma_ratio_max is not None and r.lemma_ratio_max >= 0 for r in records)
    plain = scan_family("prime", 5, 40, spec, timing=False)
    assert all(r.lemma_ratio_max is None for r in plain)


def test_parity_scan_matches_parity_report():
    per_k = parity_scan((1, 2, 3, 4), 3, 300, family="prime", timing=False)
    for k, records in per_k.items():
        assert [r.q for r in records] == analysis.family_members("prime", 3, 300)
        for r in records:
            rep = parity_report(Modulus.of(r.q), k)
            assert r.N == rep.same_parity
            assert r.phi == Modulus.of(r.q).phi
            assert r.abs_error == abs(rep.error)


def test_parity_scan_odd_family():
    per_k = parity_scan((1,), 3, 99, family="odd", timing=False)
    records = per_k[1]
    assert [r.q for r in records] == list(range(3, 100, 2))
    for r in records[:10]:
        rep = parity_report(Modulus.of(r.q), 1)
        assert r.N == rep.same_parity


def test_parity_scan_jobs_equality():
    a = parity_scan((1, 2), 3, 200, jobs=1, timing=False)
    b = parity_scan((1, 2), 3, 200, jobs=2, timing=False)
    assert a == b


def _synthetic_records(pairs):
    return [
        ScanRecord(q=q, family_tag="prime", phi=q - 1, N=0, main=0.0,
                   abs_error=err, lemma_ratio_max=None, wall_time=0.0)
        for q, err in pairs
    ]


def test_fit_exponent_exact_power_law():
    recs = _synthetic_records([(q, q ** 0.5) for q in (10, 100, 1000, 10**4, 10**5)])
    fit = fit_exponent(recs)
    assert abs(fit.slope - 0.5) < 1e-9
    assert fit.r_squared >= 1 - 1e-9
    assert fit.n_points == 5
    assert fit.filtered_zero_errors == 0
    recs = _synthetic_records([(q, 2.0 * q ** 0.75) for q in (10, 30, 100, 300, 1000, 3000)])
    fit = fit_exponent(recs)
    assert abs(fit.slope - 0.75) < 1e-9
    assert abs(fit.intercept - math.log(2.0)) < 1e-9


def test_fit_exponent_constant():
    recs = _synthetic_records([(q, 3.0) for q in (10, 100, 1000, 10**4, 10**5)])
    fit = fit_exponent(recs)
    assert abs(fit.slope) < 1e-12
    assert fit.r_squared == 1.0


def test_fit_exponent_filters_small_errors():
    recs = _synthetic_records(
        [(q, q ** 0.5) for q in (10, 100, 1000, 10**4, 10**5)]
        + [(7, 0.25), (11, 0.0)]
    )
    fit = fit_exponent(recs)
    assert fit.filtered_zero_errors == 2
    assert fit.n_points == 5
    assert abs(fit.slope - 0.5) < 1e-9


def test_fit_exponent_insufficient():
    recs = _synthetic_records([(10, 5.0), (100, 9.0), (1000, 2.0), (10**4, 0.5)])
    with pytest.raises(InsufficientData):
        fit_exponent(recs)


def test_lemma_ratio_sweep_deterministic_and_exhaustive_max():
    mods = [Modulus.of(q) for q in (5, 7, 9)]
    rows = lemma_ratio_sweep(mods, (1, -1), samples_per_q=300, seed=11)
    rows2 = lemma_ratio_sweep(mods, (1, -1), samples_per_q=300, seed=11)
    assert rows == rows2
    assert all(row.max_ratio >= row.mean_ratio >= 0 for row in rows)
    # q=5: the coefficient space is {-2..2}^2 minus zero (24 vectors); 300
    # seeded samples saturate it, so the sweep max is the exhaustive max.
    exh = analysis.lemma_ratio_exhaustive(mods[0], (1, -1))
    by_hand = max(
        lemma_ratio(ExpSumArgs.of(mods[0], (1, -1), (l1, l2)))
        for l1 in range(-2, 3)
        for l2 in range(-2, 3)
        if (l1, l2) != (0, 0)
    )
    assert exh == by_hand
    assert rows[0].max_ratio == pytest.approx(exh, abs=1e-12)
    with pytest.raises(ValueError):
        lemma_ratio_sweep(mods, (1,), samples_per_q=5)
    with pytest.raises(ValueError):
        lemma_ratio_sweep(mods, (1, -1), samples_per_q=0)


def test_bound_ratio_sweep():
    rows = bound_ratio_sweep([3, 10], [0, 5])
    assert [(r.l, r.U) for r in rows] == [(3, 0), (3, 5), (10, 0), (10, 5)]
    r30 = rows[0]
    assert r30.r1 == pytest.approx(2 / (3 * math.log(3)), abs=1e-12)
    assert all(r.r1 >= 0 and r.r2 >= 0 for r in rows)


def test_geometric_l_ladder():
    ladder = analysis.geometric_l_ladder(3, 10**4, 1.5)
    assert ladder[0] == 3 and ladder[-1] == 10**4
    assert all(b > a for a, b in zip(ladder, ladder[1:]))
    assert len(ladder) < 30


def test_check_geometric_bounds_small():
    out = analysis.check_geometric_bounds(l_min=3, l_max=500)
    assert out.passed
    assert all(row[2] <= 2.0 and row[3] <= 3.0 for row in out.rows)


def test_check_oracle_equivalence_smoke():
    out = analysis.check_oracle_equivalence(instances=30, q_max=500, seed=5)
    assert out.passed and out.n_total == 30
    out2 = analysis.check_oracle_equivalence(instances=30, q_max=500, seed=5)
    assert out.rows == out2.rows


def test_check_crt_agreement_smoke():
    out = analysis.check_crt_agreement(instances=20, q_max=2000, seed=5)
    assert out.passed and out.n_total == 20


def test_check_weil_bound_smoke():
    out = analysis.check_weil_bound(q_max=200, pairs_per_q=4, seed=5)
    assert out.passed
    assert all(row[3] <= row[4] for row in out.rows)


def test_check_u_bounds_smoke():
    out = analysis.check_u_bounds(instances=40, seed=5)
    assert out.passed


def test_check_partition_identity_smoke():
    out = analysis.check_partition_identity(instances=12, q_max=200, seed=5)
    assert out.passed
