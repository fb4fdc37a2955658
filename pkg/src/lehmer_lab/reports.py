"""CSV / JSON / pretty rendering for reports, with fixed schemas.

The scan CSV schema is pinned: `q,family,phi,N,main,error,abs_error,seconds`
with main/error at 12 significant digits.  Byte-identical output for
identical inputs is part of the contract, which is why emitters write "\n"
line endings and fixed float formats; wall-clock columns are only
reproducible when scans run with timing disabled.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .analysis import CheckOutcome, ExponentFit, ScanRecord
from .counting import CountReport, ParityReport, ProblemSpec

SCAN_CSV_HEADER = "q,family,phi,N,main,error,abs_error,seconds"


def _f12(x: float) -> str:
    return f"{x:.12g}"


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return _f12(value)
    return str(value)


def scan_records_to_csv(records: Sequence[ScanRecord]) -> str:
    lines = [SCAN_CSV_HEADER]
    for r in records:
        error = r.N - r.main
        lines.append(
            f"{r.q},{r.family_tag},{r.phi},{r.N},{_f12(r.main)},{_f12(error)},"
            f"{_f12(r.abs_error)},{r.wall_time:.6f}"
        )
    return "\n".join(lines) + "\n"


def scan_record_to_dict(r: ScanRecord) -> dict:
    return {
        "q": r.q,
        "family": r.family_tag,
        "phi": r.phi,
        "N": r.N,
        "main": r.main,
        "error": r.N - r.main,
        "abs_error": r.abs_error,
        "lemma_ratio_max": r.lemma_ratio_max,
        "seconds": r.wall_time,
    }


def scan_record_from_dict(d: Mapping) -> ScanRecord:
    return ScanRecord(
        q=int(d["q"]),
        family_tag=str(d["family"]),
        phi=int(d["phi"]),
        N=int(d["N"]),
        main=float(d["main"]),
        abs_error=float(d["abs_error"]),
        lemma_ratio_max=None if d.get("lemma_ratio_max") is None else float(d["lemma_ratio_max"]),
        wall_time=float(d["seconds"]),
    )


def scan_records_from_csv(text: str) -> list[ScanRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != SCAN_CSV_HEADER:
        raise ValueError(f"expected header {SCAN_CSV_HEADER!r}")
    out = []
    for ln in lines[1:]:
        q, family, phi, n, main, _error, abs_error, seconds = ln.split(",")
        out.append(
            ScanRecord(
                q=int(q), family_tag=family, phi=int(phi), N=int(n),
                main=float(main), abs_error=float(abs_error),
                lemma_ratio_max=None, wall_time=float(seconds),
            )
        )
    return out


def scan_payload_to_json(
    records: Sequence[ScanRecord], spec: ProblemSpec | None, meta: Mapping
) -> str:
    payload: dict = {"records": [scan_record_to_dict(r) for r in records]}
    if spec is not None:
        payload["spec"] = {"k": list(spec.k), "m": list(spec.m), "a": list(spec.a)}
    payload["meta"] = dict(meta)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def count_report_to_dict(r: CountReport) -> dict:
    return {
        "q": r.q,
        "spec": {"k": list(r.spec.k), "m": list(r.spec.m), "a": list(r.spec.a)},
        "N": r.count,
        "main": float(r.main_term),
        "main_exact": f"{r.main_term.numerator}/{r.main_term.denominator}",
        "error": r.error,
        "normalized_exponent": r.normalized_exponent,
        "theorem_applies": r.theorem_applies,
        "oversized_m": r.oversized_m,
    }


def count_report_from_dict(d: Mapping) -> CountReport:
    spec = ProblemSpec.of(d["spec"]["k"], d["spec"]["m"], d["spec"]["a"])
    num, den = d["main_exact"].split("/")
    return CountReport(
        q=int(d["q"]),
        spec=spec,
        count=int(d["N"]),
        main_term=Fraction(int(num), int(den)),
        error=float(d["error"]),
        normalized_exponent=None if d["normalized_exponent"] is None else float(d["normalized_exponent"]),
        theorem_applies=bool(d["theorem_applies"]),
        oversized_m=bool(d["oversized_m"]),
    )


COUNT_CSV_HEADER = "q,k,m,a,N,main,main_exact,error,normalized_exponent,theorem_applies,oversized_m"


def count_report_to_csv(r: CountReport) -> str:
    d = count_report_to_dict(r)
    norm = "" if r.normalized_exponent is None else _f12(r.normalized_exponent)
    row = ",".join(
        [
            str(r.q),
            ";".join(map(str, r.spec.k)),
            ";".join(map(str, r.spec.m)),
            ";".join(map(str, r.spec.a)),
            str(r.count),
            _f12(d["main"]),
            d["main_exact"],
            _f12(r.error),
            norm,
            str(int(r.theorem_applies)),
            str(int(r.oversized_m)),
        ]
    )
    return COUNT_CSV_HEADER + "\n" + row + "\n"


def count_report_pretty(r: CountReport) -> str:
    lines = [
        f"q                   = {r.q}",
        f"k                   = {list(r.spec.k)}",
        f"m                   = {list(r.spec.m)}",
        f"a                   = {list(r.spec.a)}",
        f"N                   = {r.count}",
        f"main term           = {r.main_term} ({float(r.main_term):.6f})",
        f"error               = {_f12(r.error)}",
        f"normalized exponent = "
        + ("negligible (|error| < 1)" if r.normalized_exponent is None else _f12(r.normalized_exponent)),
        f"theorem applies     = {r.theorem_applies}",
    ]
    if r.oversized_m:
        lines.append("note: some m_j >= q (degenerate instance)")
    return "\n".join(lines) + "\n"


def parity_report_to_dict(r: ParityReport) -> dict:
    return {
        "q": r.q,
        "k": r.k,
        "both_even": r.both_even,
        "both_odd": r.both_odd,
        "same_parity": r.same_parity,
        "main": float(r.main),
        "main_exact": f"{r.main.numerator}/{r.main.denominator}",
        "error": r.error,
    }


PARITY_CSV_HEADER = "q,k,both_even,both_odd,same_parity,main,error"


def parity_report_to_csv(r: ParityReport) -> str:
    row = (
        f"{r.q},{r.k},{r.both_even},{r.both_odd},{r.same_parity},"
        f"{_f12(float(r.main))},{_f12(r.error)}"
    )
    return PARITY_CSV_HEADER + "\n" + row + "\n"


def parity_report_pretty(r: ParityReport) -> str:
    return (
        f"q           = {r.q}\n"
        f"k           = {r.k}\n"
        f"both even   = {r.both_even}\n"
        f"both odd    = {r.both_odd}\n"
        f"same parity = {r.same_parity}\n"
        f"main term   = {r.main} ({float(r.main):.6f})\n"
        f"error       = {_f12(r.error)}\n"
    )


def fit_to_dict(fit: ExponentFit) -> dict:
    return {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "n_points": fit.n_points,
        "filtered_zero_errors": fit.filtered_zero_errors,
    }


FIT_CSV_HEADER = "slope,intercept,r_squared,n_points,filtered_zero_errors"


def fit_to_csv(fit: ExponentFit) -> str:
    row = (
        f"{_f12(fit.slope)},{_f12(fit.intercept)},{_f12(fit.r_squared)},"
        f"{fit.n_points},{fit.filtered_zero_errors}"
    )
    return FIT_CSV_HEADER + "\n" + row + "\n"


def fit_pretty(fit: ExponentFit) -> str:
    return (
        f"slope (empirical exponent) = {fit.slope:.6f}\n"
        f"intercept                  = {fit.intercept:.6f}\n"
        f"r^2                        = {fit.r_squared:.6f}\n"
        f"points used                = {fit.n_points}\n"
        f"filtered (|error| < 1)     = {fit.filtered_zero_errors}\n"
    )


def outcome_to_csv(outcome: CheckOutcome) -> str:
    lines = [",".join(outcome.header)]
    for row in outcome.rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def outcome_to_json(outcome: CheckOutcome, meta: Mapping) -> str:
    payload = {
        "name": outcome.name,
        "header": list(outcome.header),
        "rows": [[v for v in row] for row in outcome.rows],
        "n_total": outcome.n_total,
        "n_failed": outcome.n_failed,
        "meta": dict(meta),
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
