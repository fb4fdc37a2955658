"""Command-line front end: counting, sum evaluation, scans, fits, checks.

Exit codes: 0 success, 1 a verification check failed, 2 validation error,
3 work-budget refusal.  Data goes to stdout (or --out); logs go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
import time

from . import __version__, analysis, counting, expsum, ntcore, reports
from .analysis import DEFAULT_SEED, DEFAULT_WORK_BUDGET
from .counting import ProblemSpec
from .errors import (
    InsufficientData,
    InvalidModulus,
    LehmerLabError,
    RangeTooLarge,
    ZeroExponent,
)
from .expsum import ExpSumArgs
from .ntcore import Modulus

logger = logging.getLogger(__name__)

_VECTOR_FLAGS = ("--k", "--m", "--a", "--lambda")


class _ValidationError(Exception):
    """User input violated a precondition; message names the flag."""


def _merge_negative_vectors(argv: list[str]) -> list[str]:
    # `--k -1,2` would look like a stray option to argparse; fold the value
    # into `--k=-1,2`.  Negative integers use a leading minus with no space.
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VECTOR_FLAGS and i + 1 < len(argv) and re.match(r"^-\d", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _parse_vector(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise _ValidationError(f"{flag}: expected comma-separated integers, got {text!r}")


def _build_spec(args: argparse.Namespace) -> ProblemSpec:
    k = _parse_vector(args.k, "--k")
    m = _parse_vector(args.m, "--m")
    a = _parse_vector(args.a, "--a")
    if len(m) != len(k):
        raise _ValidationError(f"--m: expected {len(k)} components to match --k, got {len(m)}")
    if len(a) != len(k):
        raise _ValidationError(f"--a: expected {len(k)} components to match --k, got {len(a)}")
    if any(v == 0 for v in k):
        raise _ValidationError("--k contains a zero component; all power exponents must be nonzero")
    if any(v < 1 for v in m):
        raise _ValidationError("--m components must be >= 1")
    try:
        return ProblemSpec.of(k, m, a)
    except (ZeroExponent, ValueError) as exc:
        raise _ValidationError(f"--k/--m/--a: {exc}")


def _modulus_of(q: int, flag: str = "--q") -> Modulus:
    try:
        return Modulus.of(q)
    except InvalidModulus as exc:
        raise _ValidationError(f"{flag}: {exc}")


def _resolve_seed(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("LEHMER_LAB_SEED")
    if env is not None:
        try:
            return int(env, 0)
        except ValueError:
            raise _ValidationError(f"LEHMER_LAB_SEED must be an integer, got {env!r}")
    return DEFAULT_SEED


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(seed: int, wall: float) -> dict:
    return {"seed": seed, "version": __version__, "wall_time_s": round(wall, 6)}


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json", "pretty"), default="pretty",
                   help="output format (default: pretty)")
    p.add_argument("--out", metavar="PATH", default=None,
                   help="write data to PATH instead of stdout")


def _add_seed_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: $LEHMER_LAB_SEED or 0xC0FFEE)")


def _add_scan_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--work-budget", type=int, default=DEFAULT_WORK_BUDGET,
                   help="refuse scans above this estimated modular-op count")
    p.add_argument("--no-timing", action="store_true",
                   help="zero the seconds column for byte-reproducible output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lehmer-lab",
        description="Exact modular counting, unit-group exponential sums, and "
                    "error-exponent scans.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="exact count for one (q, k, m, a) instance")
    p_count.add_argument("--q", type=int, required=True, help="modulus, q >= 2")
    p_count.add_argument("--k", required=True, help="power vector, e.g. 1,-1")
    p_count.add_argument("--m", required=True, help="progression moduli, e.g. 2,2")
    p_count.add_argument("--a", required=True, help="progression targets, e.g. 1,1")
    _add_output_flags(p_count)

    p_exp = sub.add_parser("expsum", help="evaluate a unit-group exponential sum")
    p_exp.add_argument("--q", type=int, required=True)
    p_exp.add_argument("--k", required=True, help="power vector, e.g. 1,-1")
    p_exp.add_argument("--lambda", dest="lam", required=True,
                       help="coefficient vector, e.g. 1,1")
    p_exp.add_argument("--method", choices=("direct", "crt", "both"), default="both")
    _add_output_flags(p_exp)

    p_par = sub.add_parser("parity", help="joint parity of n^k and its inverse residue")
    p_par.add_argument("--q", type=int, default=None, help="single odd modulus")
    p_par.add_argument("--q-min", type=int, default=None)
    p_par.add_argument("--q-max", type=int, default=None)
    p_par.add_argument("--k", type=int, default=1, help="power (default 1)")
    p_par.add_argument("--family", choices=("prime", "odd"), default="prime",
                       help="family for range scans (default prime)")
    _add_scan_flags(p_par)
    _add_output_flags(p_par)

    p_scan = sub.add_parser("scan", help="sweep a modulus family for one instance")
    p_scan.add_argument("--family", required=True,
                        choices=("prime", "odd", "all", "prime-power"))
    p_scan.add_argument("--q-min", type=int, required=True)
    p_scan.add_argument("--q-max", type=int, required=True)
    p_scan.add_argument("--k", required=True)
    p_scan.add_argument("--m", required=True)
    p_scan.add_argument("--a", required=True)
    p_scan.add_argument("--lemma-samples", type=int, default=0,
                        help="sampled coefficient vectors per q for the ratio column")
    _add_seed_flag(p_scan)
    _add_scan_flags(p_scan)
    _add_output_flags(p_scan)

    p_fit = sub.add_parser("fit", help="log-log exponent fit of scan errors")
    p_fit.add_argument("--records", metavar="CSV", default=None,
                       help="scan CSV to fit; omit to scan inline with the flags below")
    p_fit.add_argument("--family", choices=("prime", "odd", "all", "prime-power"))
    p_fit.add_argument("--q-min", type=int)
    p_fit.add_argument("--q-max", type=int)
    p_fit.add_argument("--k")
    p_fit.add_argument("--m")
    p_fit.add_argument("--a")
    _add_seed_flag(p_fit)
    _add_scan_flags(p_fit)
    _add_output_flags(p_fit)

    p_chk = sub.add_parser("check", help="run verification suites")
    p_chk.add_argument("--identities", action="store_true",
                       help="root-of-unity detector for l in [1, --l-max]")
    p_chk.add_argument("--bounds", action="store_true",
                       help="geometric-sum mass ratios vs fixed caps")
    p_chk.add_argument("--oracles", action="store_true",
                       help="direct count vs window-form recount")
    p_chk.add_argument("--crt", action="store_true",
                       help="direct sum vs prime-power product")
    p_chk.add_argument("--weil", action="store_true",
                       help="|K(a,b;p)| <= 2*sqrt(p) over primes")
    p_chk.add_argument("--ubounds", action="store_true",
                       help="window-product closing estimate, exact rationals")
    p_chk.add_argument("--partition", action="store_true",
                       help="counts over all targets sum to phi(q)")
    p_chk.add_argument("--l-max", type=int, default=None,
                       help="identity/bound sweep limit (defaults 200 / 10000)")
    p_chk.add_argument("--instances", type=int, default=None,
                       help="instance count for the sampled checks")
    p_chk.add_argument("--samples", type=int, default=10,
                       help="coefficient pairs per prime for --weil (default 10)")
    _add_seed_flag(p_chk)
    _add_output_flags(p_chk)

    return parser


def _cmd_count(args: argparse.Namespace) -> int:
    modulus = _modulus_of(args.q)
    spec = _build_spec(args)
    report = counting.count_report(modulus, spec)
    if args.format == "json":
        import json

        _emit(json.dumps(reports.count_report_to_dict(report), indent=2, sort_keys=True) + "\n",
              args.out)
    elif args.format == "csv":
        _emit(reports.count_report_to_csv(report), args.out)
    else:
        _emit(reports.count_report_pretty(report), args.out)
    return 0


def _cmd_expsum(args: argparse.Namespace) -> int:
    modulus = _modulus_of(args.q)
    k = _parse_vector(args.k, "--k")
    lam = _parse_vector(args.lam, "--lambda")
    if len(lam) != len(k):
        raise _ValidationError(f"--lambda: expected {len(k)} components to match --k, got {len(lam)}")
    if any(v == 0 for v in k):
        raise _ValidationError("--k contains a zero component; all power exponents must be nonzero")
    sum_args = ExpSumArgs.of(modulus, k, lam)
    payload: dict = {
        "q": modulus.q,
        "k": list(sum_args.k),
        "lambda": list(sum_args.lam),
        "gcd_class": sum_args.gcd_class,
        "terms": modulus.phi,
    }
    if args.method in ("direct", "both"):
        direct = expsum.exp_sum_direct(sum_args)
        payload["direct"] = {"re": direct.re, "im": direct.im, "abs": direct.magnitude}
    if args.method in ("crt", "both"):
        via = expsum.exp_sum_crt(sum_args, ntcore.build_crt_plan(modulus))
        payload["crt"] = {"re": via.re, "im": via.im, "abs": via.magnitude}
    if args.method == "both":
        payload["abs_delta"] = abs(
            complex(payload["direct"]["re"], payload["direct"]["im"])
            - complex(payload["crt"]["re"], payload["crt"]["im"])
        )
    if args.format == "json":
        import json

        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    elif args.format == "csv":
        keys = [k_ for k_ in ("direct", "crt") if k_ in payload]
        header = "q,k,lambda," + ",".join(f"{k_}_re,{k_}_im,{k_}_abs" for k_ in keys)
        row = [str(modulus.q), ";".join(map(str, sum_args.k)), ";".join(map(str, sum_args.lam))]
        for k_ in keys:
            row += [f"{payload[k_]['re']:.12g}", f"{payload[k_]['im']:.12g}",
                    f"{payload[k_]['abs']:.12g}"]
        _emit(header + "\n" + ",".join(row) + "\n", args.out)
    else:
        lines = [f"q = {modulus.q}, k = {list(sum_args.k)}, lambda = {list(sum_args.lam)}, "
                 f"terms = {modulus.phi}"]
        for k_ in ("direct", "crt"):
            if k_ in payload:
                v = payload[k_]
                lines.append(f"{k_:6s}: {v['re']:+.12g} {v['im']:+.12g}i   |S| = {v['abs']:.12g}")
        if "abs_delta" in payload:
            lines.append(f"delta : {payload['abs_delta']:.3g}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_parity(args: argparse.Namespace) -> int:
    if args.k == 0:
        raise _ValidationError("--k must be nonzero")
    scan_mode = args.q_min is not None or args.q_max is not None
    if scan_mode:
        if args.q is not None:
            raise _ValidationError("--q cannot be combined with --q-min/--q-max")
        if args.q_min is None or args.q_max is None:
            raise _ValidationError("--q-min and --q-max must be given together")
        per_k = analysis.parity_scan(
            (args.k,), args.q_min, args.q_max, family=args.family,
            jobs=args.jobs, work_budget=args.work_budget, timing=not args.no_timing,
        )
        records = per_k[args.k]
        t_total = sum(r.wall_time for r in records)
        if args.format == "json":
            _emit(reports.scan_payload_to_json(
                records, ProblemSpec.of((args.k, -args.k), (2, 2), (0, 0)),
                _meta(DEFAULT_SEED, t_total)), args.out)
        elif args.format == "csv":
            _emit(reports.scan_records_to_csv(records), args.out)
        else:
            lines = [f"q={r.q} N={r.N} main={r.main:.1f} error={r.N - r.main:+.1f}"
                     for r in records]
            _emit("\n".join(lines) + "\n", args.out)
        return 0
    if args.q is None:
        raise _ValidationError("--q (or --q-min/--q-max) is required")
    modulus = _modulus_of(args.q)
    report = counting.parity_report(modulus, args.k)
    if args.format == "json":
        import json

        _emit(json.dumps(reports.parity_report_to_dict(report), indent=2, sort_keys=True) + "\n",
              args.out)
    elif args.format == "csv":
        _emit(reports.parity_report_to_csv(report), args.out)
    else:
        _emit(reports.parity_report_pretty(report), args.out)
    return 0


def _scan_records(args: argparse.Namespace, seed: int) -> tuple[list, ProblemSpec]:
    spec = _build_spec(args)
    family = args.family.replace("-", "_")
    records = analysis.scan_family(
        family, args.q_min, args.q_max, spec,
        jobs=args.jobs, work_budget=args.work_budget, timing=not args.no_timing,
        lemma_samples=args.lemma_samples if hasattr(args, "lemma_samples") else 0,
        seed=seed,
    )
    return records, spec


def _cmd_scan(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    t0 = time.perf_counter()
    records, spec = _scan_records(args, seed)
    wall = time.perf_counter() - t0
    logger.info("scanned %d moduli in %.2fs", len(records), wall)
    if args.format == "json":
        _emit(reports.scan_payload_to_json(records, spec, _meta(seed, wall)), args.out)
    elif args.format == "csv":
        _emit(reports.scan_records_to_csv(records), args.out)
    else:
        lines = [f"q={r.q} phi={r.phi} N={r.N} main={r.main:.4f} error={r.N - r.main:+.4f}"
                 for r in records]
        lines.append(f"-- {len(records)} records")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_fit(args: argparse.Namespace) -> int:
    if args.records is not None:
        try:
            with open(args.records, encoding="utf-8") as fh:
                records = reports.scan_records_from_csv(fh.read())
        except OSError as exc:
            raise _ValidationError(f"--records: {exc}")
        except ValueError as exc:
            raise _ValidationError(f"--records: {exc}")
    else:
        needed = ("family", "q_min", "q_max", "k", "m", "a")
        missing = [f"--{n.replace('_', '-')}" for n in needed if getattr(args, n) is None]
        if missing:
            raise _ValidationError(
                f"fit needs --records or a full scan spec; missing {', '.join(missing)}"
            )
        args.lemma_samples = 0
        records, _ = _scan_records(args, _resolve_seed(args))
    try:
        fit = analysis.fit_exponent(records)
    except InsufficientData as exc:
        raise _ValidationError(str(exc))
    if args.format == "json":
        import json

        _emit(json.dumps(reports.fit_to_dict(fit), indent=2, sort_keys=True) + "\n", args.out)
    elif args.format == "csv":
        _emit(reports.fit_to_csv(fit), args.out)
    else:
        _emit(reports.fit_pretty(fit), args.out)
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    selected = []
    if args.identities:
        selected.append(lambda: analysis.check_orthogonality(args.l_max or 200))
    if args.bounds:
        selected.append(lambda: analysis.check_geometric_bounds(l_max=args.l_max or 10**4))
    if args.oracles:
        selected.append(lambda: analysis.check_oracle_equivalence(
            instances=args.instances or 200, seed=seed))
    if args.crt:
        selected.append(lambda: analysis.check_crt_agreement(
            instances=args.instances or 300, seed=seed))
    if args.weil:
        selected.append(lambda: analysis.check_weil_bound(
            pairs_per_q=args.samples, seed=seed))
    if args.ubounds:
        selected.append(lambda: analysis.check_u_bounds(
            instances=args.instances or 100, seed=seed))
    if args.partition:
        selected.append(lambda: analysis.check_partition_identity(
            instances=args.instances or 50, seed=seed))
    if not selected:
        raise _ValidationError(
            "check: select at least one of --identities --bounds --oracles "
            "--crt --weil --ubounds --partition"
        )
    if args.out and len(selected) > 1:
        raise _ValidationError("--out supports a single check selection")
    all_ok = True
    t0 = time.perf_counter()
    for run_check in selected:
        outcome = run_check()
        all_ok &= outcome.passed
        print(outcome.summary)
        if args.out or args.format != "pretty":
            if args.format == "json":
                text = reports.outcome_to_json(outcome, _meta(seed, time.perf_counter() - t0))
            else:
                text = reports.outcome_to_csv(outcome)
            _emit(text, args.out)
    return 0 if all_ok else 1


_DISPATCH = {
    "count": _cmd_count,
    "expsum": _cmd_expsum,
    "parity": _cmd_parity,
    "scan": _cmd_scan,
    "fit": _cmd_fit,
    "check": _cmd_check,
}


def run(argv: list[str] | None = None) -> int:
    """Parse argv and execute; returns the process exit code."""
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(_merge_negative_vectors(list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _DISPATCH[args.command](args)
    except _ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RangeTooLarge as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except LehmerLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
