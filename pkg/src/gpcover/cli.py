"""``gpcover`` command line.

Exit codes: 0 success, 1 not covered or property violated, 2 input error,
3 resource cap hit.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .classes import mindeg_of, spectrum_of
from .errors import CoverError, GpcoverError, InputError, MindegUnavailable
from .fileio import (dumps, envelope, group_from_spec, load_certificate, load_group, load_pipeline_config,
                     load_sets, write_csv, write_json)
from .groups import DEFAULT_CAP, FAMILIES
from .harness import DEFAULT_SEED, SUITES, eta_pair, run_suite, suite_trichotomy
from .normal import DEFAULT_MEMO_CAP, rs_exponent_search
from .search import resolve_threads
from .solver import CoverCertificate, exhaustive_oracle, pipeline, verify_certificate

DEFAULT_ORACLE_CAP = 10**8
# never embedded in reports: output locations and the thread count vary between equivalent runs
_VOLATILE_ARGS = {"out", "threads", "func"}


def _positive(kind):
    def parse(text: str):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _add_group_args(p: argparse.ArgumentParser, *, family: bool = False) -> None:
    p.add_argument("--group", help="group JSON file")
    if family:
        p.add_argument("--family", choices=FAMILIES)
        p.add_argument("--q", type=int)
        p.add_argument("--n", type=int)
    p.add_argument("--cap-elements", type=_positive(int), default=DEFAULT_CAP,
                   help="largest group order to enumerate")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="report path (JSON); CSV and PNG go next to it")
    p.add_argument("--threads", type=_positive(int), help="worker threads (default: GPCOVER_THREADS or CPU count)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpcover", description="Cover finite groups by products of conjugates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group-info", help="order, classes, minclass, mindeg, simplicity")
    _add_group_args(p, family=True)
    _add_common(p)
    p.set_defaults(func=cmd_group_info)

    p = sub.add_parser("solve", help="find conjugators covering G")
    _add_group_args(p)
    p.add_argument("--sets", required=True)
    p.add_argument("--strategy", choices=("pipeline", "exhaustive"), default="pipeline")
    p.add_argument("--config", help="pipeline constants (JSON)")
    p.add_argument("--seed", type=_nonnegative_int)
    p.add_argument("--cap-candidates", type=_positive(int),
                   help="conjugators scanned per merge (pipeline) or search-space cap (exhaustive)")
    p.add_argument("--time-budget-s", type=_positive(float))
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run a property suite")
    _add_group_args(p, family=True)
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--trials", type=_nonnegative_int, default=1000)
    p.add_argument("--seed", type=_nonnegative_int, default=DEFAULT_SEED)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rs-exponent", help="empirical covering exponent of class products")
    _add_group_args(p, family=True)
    p.add_argument("--max-len", type=_positive(int), default=8)
    p.add_argument("--memo-cap", type=_positive(int), default=DEFAULT_MEMO_CAP)
    _add_common(p)
    p.set_defaults(func=cmd_rs_exponent)

    p = sub.add_parser("estimate-eta", help="measure tripling and pair-growth exponents")
    _add_group_args(p, family=True)
    p.add_argument("--trials", type=_nonnegative_int, default=1000)
    p.add_argument("--seed", type=_nonnegative_int, default=DEFAULT_SEED)
    p.add_argument("--epsilon", type=_positive(float), default=0.01)
    p.add_argument("--delta", type=_positive(float), default=23 / 24)
    _add_common(p)
    p.set_defaults(func=cmd_estimate_eta)

    p = sub.add_parser("replay", help="check a certificate")
    _add_group_args(p)
    p.add_argument("--sets", required=True)
    p.add_argument("--cert", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_replay)
    return parser


def _group(args):
    if getattr(args, "family", None):
        if args.group:
            raise InputError("give either --group or --family, not both")
        spec = {"kind": "family", "family": args.family}
        spec.update({k: getattr(args, k) for k in ("n", "q") if getattr(args, k) is not None})
        return group_from_spec(spec, cap=args.cap_elements)
    if not args.group:
        raise InputError("--group (or --family) is required")
    return load_group(args.group, cap=args.cap_elements)


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _VOLATILE_ARGS}


def _emit(args, report: dict) -> None:
    if args.out:
        write_json(args.out, report)
    else:
        sys.stdout.write(dumps(report))


def _side_files(args, rows: list[dict], plot) -> dict:
    """Write ``<out>.csv`` and ``<out>.png`` when an output path is given."""
    if not args.out or not rows:
        return {}
    base = Path(args.out)
    out = {"csv": str(write_csv(base.with_suffix(".csv"), rows))}
    from . import plots

    png = plot(plots, base.with_suffix(".png"))
    if png:
        out["png"] = str(png)
    return out


def cmd_group_info(args, threads: int) -> int:
    G = _group(args)
    spec = spectrum_of(G)
    result = {"order": G.order, "degree": G.degree, "generators": len(G.generators), **spec.to_dict()}
    try:
        result["mindeg"] = mindeg_of(G).to_dict()
    except (MindegUnavailable, ArithmeticError) as exc:
        result["mindeg"] = {"error": str(exc)}
    if not args.out:
        md = result["mindeg"].get("value", "unavailable")
        print(f"{G.meta.name}: order {G.order}, {len(spec.classes)} classes, minclass {spec.minclass}, "
              f"mindeg {md}, simple {spec.simple}", file=sys.stderr)
    _emit(args, envelope("group-info", _config(args), G, result, threads=threads))
    return 0


def cmd_solve(args, threads: int) -> int:
    G = _group(args)
    sets = load_sets(G, args.sets)
    cfg = load_pipeline_config(args.config, seed=args.seed, max_candidates=args.cap_candidates,
                               time_budget_s=args.time_budget_s)
    config = {**_config(args), "pipeline": cfg.to_dict()}
    code = 0
    if args.strategy == "pipeline":
        try:
            cert = pipeline(G, sets, cfg, threads=threads)
            body = {"strategy": "pipeline", **cert.to_dict()}
        except CoverError as exc:
            body = {"strategy": "pipeline", "covered": False, "conjugators": None, "trace": [],
                    "failure": exc.to_dict()}
            code = 1
    else:
        found = exhaustive_oracle(G, sets, cap=args.cap_candidates or DEFAULT_ORACLE_CAP)
        if found is None:
            body = {"strategy": "exhaustive", "covered": False, "conjugators": None, "trace": []}
            code = 1
        else:
            cert = CoverCertificate(found, [], True, G.order)
            body = {"strategy": "exhaustive", **cert.to_dict()}
    if code == 0:
        replay = verify_certificate(G, sets, cert)
        body["replay"] = {"ok": replay.ok, "divergence": replay.divergence}
        code = 0 if replay.ok else 1
    report = envelope("solve", config, G, {}, threads=threads)
    del report["result"]
    report.update(body)
    _emit(args, report)
    return code


def cmd_verify(args, threads: int) -> int:
    G = _group(args)
    rep = run_suite(args.suite, G, args.trials, args.seed, threads)
    result = rep.to_dict()
    files = _side_files(args, rep.rows, lambda p, path: p.plot_suite(rep.suite, rep.group, rep.rows, path))
    _emit(args, envelope("verify", _config(args), G, result, threads=threads, files=files))
    return 0 if rep.passed else 1


def cmd_rs_exponent(args, threads: int) -> int:
    G = _group(args)
    rep = rs_exponent_search(G, args.max_len, memo_cap=args.memo_cap)
    result = rep.to_dict()
    files = _side_files(args, rep.per_length, lambda p, path: p.plot_rs(rep.per_length, rep.group, path))
    _emit(args, envelope("rs-exponent", _config(args), G, result, threads=threads, files=files))
    return 0


def cmd_estimate_eta(args, threads: int) -> int:
    G = _group(args)
    trip = run_suite("tripling", G, args.trials, args.seed, threads)
    if trip.skipped:
        result = {"skipped": trip.skipped}
        _emit(args, envelope("estimate-eta", _config(args), G, result, threads=threads))
        return 0
    pair = suite_trichotomy(G, args.trials, args.seed, threads, epsilon=args.epsilon, delta=args.delta)
    result = {
        "eta_PT_emp": trip.summary["eta_pt_emp"],
        "tripling": trip.summary,
        "eta_pair": eta_pair(args.delta, args.epsilon),
        "pair": pair.summary,
        "pair_violations": len(pair.violations),
    }
    files = _side_files(args, trip.rows, lambda p, path: p.plot_suite("tripling", G.meta.name, trip.rows, path))
    _emit(args, envelope("estimate-eta", _config(args), G, result, threads=threads, files=files))
    return 0 if trip.passed else 1


def cmd_replay(args, threads: int) -> int:
    G = _group(args)
    sets = load_sets(G, args.sets)
    cert = load_certificate(args.cert)
    replay = verify_certificate(G, sets, cert)
    result = {"ok": replay.ok, "divergence": replay.divergence, "final_size": replay.final_size}
    _emit(args, envelope("replay", _config(args), G, result, threads=threads))
    return 0 if replay.ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        threads = resolve_threads(args.threads)
        return args.func(args, threads)
    except GpcoverError as exc:
        print(f"gpcover: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"gpcover: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
