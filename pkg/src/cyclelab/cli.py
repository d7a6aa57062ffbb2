"""``cyclelab`` command line: estimate, validate, analytic, fseries, replay.

Exit codes: 0 ok, 1 runtime failure, 2 usage error, 3 hard-invariant
failure in ``validate``.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, analytic
from .estimator import CSV_COLUMNS, estimate_batch
from .local_limit import ATTACH_BALL, ATTACH_FRONTIER, f_eps

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3
SEED_ENV = "CYCLELAB_SEED"


def source_hash():
    """SHA-256 over the package sources; identifies the code that ran."""
    h = hashlib.sha256()
    for path in sorted(Path(__file__).parent.glob("*.py")):
        h.update(path.name.encode())
        h.update(path.read_bytes())
    return h.hexdigest()


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def write_manifest(out, argv, args, seed, started):
    manifest = {
        "command": args.command,
        "argv": list(argv),
        "flags": {k: v for k, v in vars(args).items() if k not in ("func", "command")},
        "master_seed": seed,
        "version": __version__,
        "source_sha256": source_hash(),
        "started": started,
        "finished": _now(),
    }
    (Path(out) / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _positive_int(text):
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"{text} must be >= 1")
    return val


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _resolve_seed(args):
    env = os.environ.get(SEED_ENV)
    return int(env) if env not in (None, "") else args.seed


# -- estimate ----------------------------------------------------------------

def cmd_estimate(args, argv, parser):
    if not args.c > 1:
        parser.error("--c must be > 1 (the giant 2-core needs c > 1)")
    seed = _resolve_seed(args)
    started = _now()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    batch = estimate_batch(args.n, args.c, args.trials, seed, threads=args.threads)
    with open(out / "records.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in batch.records:
            w.writerow(rec.csv_row(timing=args.timing))
    with open(out / "records.jsonl", "w") as fh:
        for rec in batch.records:
            row = rec.to_dict()
            if not args.timing:
                row.pop("ms")
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    summary = {
        "n": args.n, "c": args.c, "trials": args.trials, "master_seed": seed,
        "mean_l_hat_over_n": batch.mean, "stderr": batch.stderr, "sd": batch.sd,
        "corollary1": analytic.corollary1(args.c)[0],
        "core_vertex_fraction": analytic.core_fractions(args.c).core_vertex_fraction,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    write_manifest(out, argv, args, seed, started)
    print(f"mean L/n = {batch.mean:.7f} +- {batch.stderr:.2e} over {args.trials} trials -> {out}")
    return EXIT_OK


# -- validate ----------------------------------------------------------------

def cmd_validate(args, argv, parser):
    from .validate import run

    seed = _resolve_seed(args)
    checks = run(args.only, max_tree=args.max_tree, master=seed)
    for chk in checks:
        print(chk.line())
    hard_fail = [c for c in checks if c.hard and not c.passed]
    if args.json:
        Path(args.json).write_text(json.dumps([vars(c) for c in checks], indent=2) + "\n")
    print(f"{len(checks)} checks, {len(hard_fail)} hard failures")
    return EXIT_INVARIANT if hard_fail else EXIT_OK


# -- analytic ----------------------------------------------------------------

ANALYTIC_COLUMNS = ("c", "status", "x", "core_vertex_fraction", "core_edge_fraction",
                    "corollary1", "corollary1_band", "core_ratio", "lambda", "k1", "k1_bound")


def analytic_row(c, eps):
    row = dict.fromkeys(ANALYTIC_COLUMNS, "n/a")
    row["c"] = c
    if not c > 1:
        row["status"] = "rejected: c > 1 required"
        return row
    cp = analytic.core_fractions(c)
    cor, band = analytic.corollary1(c)
    row.update(status="ok", x=cp.x, core_vertex_fraction=cp.core_vertex_fraction,
               core_edge_fraction=cp.core_edge_fraction, corollary1=cor,
               corollary1_band=band, core_ratio=cp.core_ratio,
               **{"lambda": analytic.solve_lambda(cp.core_ratio).lam})
    try:
        row["k1"] = analytic.k1_of(eps, c)
        row["k1_bound"] = analytic.k1_bound(eps, c)
    except analytic.UndefinedRadius:
        pass
    return row


def cmd_analytic(args, argv, parser):
    rows = [analytic_row(c, args.eps) for c in args.c]
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, ANALYTIC_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


# -- fseries -----------------------------------------------------------------

def cmd_fseries(args, argv, parser):
    if args.cap < 0:
        parser.error("--cap must be >= 0")
    N = args.N
    if args.M is not None:
        M = args.M
    elif args.c > 1:
        M = round(N * analytic.core_fractions(args.c).core_ratio / 2)
    else:
        parser.error("--M is required when c <= 1")
    report = {"c": args.c, "eps": args.eps, "cap": args.cap, "N": N, "M": M}
    try:
        _, detail = f_eps(args.c, args.eps, args.cap, N, M, variant=args.variant,
                          attach=args.attach, max_candidates=args.max_candidates)
        report.update(detail)
    except analytic.UndefinedRadius as exc:
        report.update(value="n/a", variant=args.variant, trees_evaluated=0,
                      truncated=True, error=str(exc))
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def _emit(text, out):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- replay ------------------------------------------------------------------

def cmd_replay(args, argv, parser):
    manifest = json.loads(Path(args.manifest).read_text())
    replay_argv = list(manifest["argv"])
    if args.out:
        if "--out" in replay_argv:
            replay_argv[replay_argv.index("--out") + 1] = args.out
        else:
            replay_argv += ["--out", args.out]
    if manifest["command"] in ("estimate", "validate") and SEED_ENV not in os.environ:
        replay_argv += ["--seed", str(manifest["master_seed"])]
    return main(replay_argv)


def build_parser():
    p = argparse.ArgumentParser(prog="cyclelab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate", help="Monte Carlo estimate of the longest cycle of G(n, c/n)")
    e.add_argument("--n", type=_positive_int, required=True)
    e.add_argument("--c", type=float, required=True)
    e.add_argument("--trials", type=_positive_int, default=1)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", required=True)
    e.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    e.add_argument("--timing", action="store_true",
                   help="fill the ms column (makes CSV output run-dependent)")
    e.set_defaults(func=cmd_estimate)

    v = sub.add_parser("validate", help="run invariant and oracle suites")
    from .validate import SUITES
    v.add_argument("--only", nargs="+", choices=SUITES)
    v.add_argument("--max-tree", type=_positive_int, default=9)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json")
    v.set_defaults(func=cmd_validate)

    a = sub.add_parser("analytic", help="table of analytic quantities over a c-grid")
    a.add_argument("--c", type=_float_list, required=True)
    a.add_argument("--eps", type=float, default=0.01)
    a.add_argument("--format", choices=("csv", "json"), default="csv")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analytic)

    f = sub.add_parser("fseries", help="truncated local-limit series")
    f.add_argument("--c", type=float, required=True)
    f.add_argument("--eps", type=float, required=True)
    f.add_argument("--cap", type=int, required=True)
    f.add_argument("--variant", choices=("exp", "f2"), default="exp")
    f.add_argument("--N", type=_positive_int, default=10**6)
    f.add_argument("--M", type=_positive_int)
    f.add_argument("--attach", choices=(ATTACH_FRONTIER, ATTACH_BALL), default=ATTACH_FRONTIER)
    f.add_argument("--max-candidates", type=_positive_int, default=5000)
    f.add_argument("--out")
    f.set_defaults(func=cmd_fseries)

    r = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    r.add_argument("manifest")
    r.add_argument("--out")
    r.set_defaults(func=cmd_replay)
    return p


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv, parser)
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001
        print(f"cyclelab: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
