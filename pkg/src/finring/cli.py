"""Command-line entry point: ``finring analyze`` and ``finring suite``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import config
from .closures import canonical_tower
from .errors import ImproperExtension, RingError
from .fixtures import fixture, fixture_names
from .lattice import enumerate_interval, hasse_dot, is_chained, maximal_chain
from .ringspec import parse_ringspec
from .suite import DEFAULT_BUDGET, Instance, parse_check_ids, random_instances, run_suite

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
DEFAULT_RANDOM = 200


def _support_entry(E, M):
    return {"size": len(M), "residue_size": E.R.order // len(M), "members": list(M.members)}


def _predicates(E):
    try:
        minimal = E.is_minimal
    except ImproperExtension:
        minimal = None
    return {
        "seminormal": E.is_seminormal,
        "subintegral": E.is_subintegral,
        "infraintegral": E.is_infraintegral,
        "tclosed": E.is_tclosed,
        "flat": E.is_flat,
        "unramified": E.is_unramified,
        "etale": E.is_etale,
        "minimal": minimal,
    }


def analysis_report(E, lattice=None):
    """The analysis of one extension as an ordered dict (without the suite)."""
    L = lattice or enumerate_interval(E)
    tower = canonical_tower(E)
    steps = []
    if not E.is_improper:
        path = maximal_chain(L)
        for (a, b), cls in zip(zip(path.chain, path.chain[1:]), path.classes):
            steps.append({"from_size": len(L.nodes[a]), "to_size": len(L.nodes[b]), "type": cls.tag})
    return {
        "conductor_size": len(E.conductor),
        "support": [_support_entry(E, M) for M in E.support],
        "predicates": _predicates(E),
        "tower": {"plus_size": len(tower.plus_ring), "t_size": len(tower.t_ring)},
        "lattice": {"count": len(L), "chained": is_chained(L), "hasse_edge_count": len(L.hasse_edges)},
        "minimal_steps": steps,
    }


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _suite_targets(args, extra=()):
    targets = list(extra)
    if args.seed is not None:
        count = DEFAULT_RANDOM if args.random is None else args.random
        targets += random_instances(args.seed, count, args.budget)
    return targets


def _run_targets(targets, ids):
    results = []
    for name, E in targets:
        results.extend(run_suite(Instance(E, name), ids))
    return results


def cmd_analyze(args):
    with open(args.file, encoding="utf-8") as fh:
        doc = parse_ringspec(fh.read())
    E = doc.extension(args.ext)
    L = enumerate_interval(E)
    report = analysis_report(E, L)
    status = EXIT_OK
    if args.suite:
        ids = parse_check_ids(args.suite)
        results = _run_targets(_suite_targets(args, [(args.ext, E)]), ids)
        report["suite"] = [r.to_dict() for r in results]
        if any(r.verdict == "fail" for r in results):
            status = EXIT_FAIL
    _write(args.json or "-", _dump(report))
    if args.dot:
        _write(args.dot, hasse_dot(L))
    return status


def cmd_suite(args):
    ids = parse_check_ids(args.checks)
    names = fixture_names() if args.fixtures == "all" else [n for n in args.fixtures.split(",") if n]
    targets = [(n, fixture(n).ext) for n in names]
    if args.seed is None and args.random:
        args.seed = 0
    results = _run_targets(_suite_targets(args, targets), ids)
    counts = {v: sum(r.verdict == v for r in results) for v in ("pass", "fail", "skipped")}
    report = {"counts": counts, "results": [r.to_dict() for r in results]}
    _write(args.json or "-", _dump(report))
    return EXIT_FAIL if counts["fail"] else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="finring", description="Finite ring extensions and their lattices.")
    p.add_argument("--max-carrier", type=int, default=None,
                   help="largest ring order accepted (overrides FINRING_MAX_CARRIER)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one extension from a ring-spec file")
    a.add_argument("file")
    a.add_argument("--ext", required=True, help="extension name declared in the file")
    a.add_argument("--json", metavar="PATH", help="write the JSON report here instead of stdout")
    a.add_argument("--dot", metavar="PATH", help="write the Hasse diagram in DOT format")
    a.add_argument("--suite", metavar="all|ID,...", help="run registry checks on the extension")
    a.add_argument("--seed", type=int, help="also run the checks on seeded random instances")
    a.add_argument("--random", type=int, metavar="K", help=f"number of random instances (default {DEFAULT_RANDOM})")

    s = sub.add_parser("suite", help="run registry checks over fixtures and random instances")
    s.add_argument("--checks", default="all", metavar="all|ID,...")
    s.add_argument("--fixtures", default="all", metavar="all|NAME,...", help="fixtures to include ('' for none)")
    s.add_argument("--seed", type=int)
    s.add_argument("--random", type=int, metavar="K")
    s.add_argument("--json", metavar="PATH")

    for q in (a, s):
        q.add_argument("--max-carrier", type=int, default=argparse.SUPPRESS)
        q.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest |S| of random instances")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        cap = args.max_carrier
        if cap is None and os.environ.get(config.ENV_CARRIER_CAP):
            cap = int(os.environ[config.ENV_CARRIER_CAP])
        with config.limits_override(**({"carrier": cap} if cap else {})):
            return {"analyze": cmd_analyze, "suite": cmd_suite}[args.command](args)
    except RingError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(json.dumps({"error": "BAD_VALUE", "message": str(exc)}), file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(json.dumps({"error": "IO_ERROR", "message": str(exc)}), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
