"""Batch front-end: reproducible instance reports and cross-validation.

Every report echoes the seed and the prime, carries a schema version,
and is serialised with sorted keys so identical inputs produce
byte-identical output.  Exit codes: 0 success, 2 invalid input,
3 verification disagreement, 4 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import warnings
from fractions import Fraction
from math import comb

from . import interpolation, invariants, splitting
from .errors import InconsistentModelError, ResourceCapError
from .interpolation import Method, NodeConfiguration, NodeKind
from .invariants import CoverProblem, check_scrollar_sum
from .modp import DEFAULT_PRIME, PrimeField, derive_seed
from .surface import DivisorClass, Surface

SCHEMA_VERSION = 1
SEED_ENV_VAR = "SCROLLAR_SEED"
DEFAULT_MAX_INSTANCES = 5000

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DISAGREE = 3
EXIT_RESOURCE = 4


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from exc


def _parse_class(text: str) -> DivisorClass:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--class expects 'k,a', got {text!r}")
    return DivisorClass(int(parts[0]), int(parts[1]))


def _parse_sections(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x != "")
    except ValueError as exc:
        raise ValueError(f"--sections expects comma-separated integers, got {text!r}") from exc


def _parse_range(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"range expects 'lo:hi', got {text!r}")
    lo, hi = int(parts[0]), int(parts[1])
    if hi < lo:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def _config_from_args(args) -> NodeConfiguration:
    if args.sections is not None and args.general_nodes is not None:
        raise ValueError("--sections and --general-nodes are mutually exclusive")
    if args.sections is not None:
        return NodeConfiguration.on_sections(_parse_sections(args.sections))
    return NodeConfiguration.general_points(args.general_nodes or 0)


def _replay_object(surface, divisor, config, prime, seed, trials) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "m": surface.m,
        "k": divisor.k,
        "a": divisor.a,
        "config": config.to_json(),
        "prime": prime,
        "seed": seed,
        "trials": trials,
    }


def _emit(args, payload: dict, csv_rows=None, csv_header=None) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header or [])
        for row in csv_rows or []:
            writer.writerow(row)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# invariants


def _normalized_tuple(entries, genus: int) -> list[str]:
    n = genus + len(entries)
    return [str(Fraction(v, n)) for v in entries]


def _invariants_payload(args) -> dict:
    surface = Surface(args.m)
    divisor = _parse_class(args.curve_class)
    config = _config_from_args(args)
    problem = CoverProblem(surface, divisor, config)
    field = PrimeField(args.prime)
    genus = invariants.genus_of(problem)

    wanted = ["scan", "closed", "oracle"] if args.method == "all" else [args.method]
    methods: dict = {}
    notes: list[str] = []
    closed_detail = None
    for name in wanted:
        if name == "scan":
            vec = invariants.scrollar_scan(problem)
        elif name == "oracle":
            vec = invariants.scrollar_scan_oracle(problem, field, args.seed, args.trials)
        else:
            if config.kind is NodeKind.GENERAL_POINTS:
                with warnings.catch_warnings(record=True) as caught:
                    warnings.simplefilter("always")
                    vec = invariants.scrollar_generic_closed_form(surface, divisor, config.delta)
                notes.extend(str(w.message) for w in caught)
                closed_detail = {
                    "balanced": vec.is_balanced(),
                    "threshold": comb(divisor.k - 1, 2) * surface.m,
                }
            else:
                trace = invariants.sections_closed_form_trace(problem)
                vec = trace.vector
                closed_detail = {
                    "levels": [
                        {
                            "twist": lvl.twist,
                            "generic_count": lvl.generic_count,
                            "deficit": lvl.deficit,
                            "sections_dropped": lvl.sections_dropped,
                        }
                        for lvl in trace.levels
                    ]
                }
        check_scrollar_sum(vec, genus, divisor.k)
        methods[name] = list(vec.entries)

    canonical_name = "scan" if "scan" in methods else wanted[0]
    canonical = methods[canonical_name]

    try:
        delta_splitting = invariants.directrix_splitting(problem)
        splitting_delta = list(delta_splitting.entries)
    except ValueError:
        splitting_delta = None

    poly = splitting.polytope_membership(canonical, genus)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "invariants",
        "instance": problem.to_json(),
        "prime": args.prime,
        "seed": args.seed,
        "trials": args.trials,
        "genus": genus,
        "method": canonical_name,
        "scrollar": canonical,
        "methods": methods,
        "normalized": _normalized_tuple(canonical, genus),
        "balanced": max(canonical) - min(canonical) <= 1,
        "splitting_delta": splitting_delta,
        "polytope": {"member": poly.member, "violated": list(poly.violated)},
        "closed_form": closed_detail,
        "warnings": notes,
    }
    return payload


def _cmd_invariants(args) -> int:
    payload = _invariants_payload(args)
    header = ["m", "k", "a", "config", "genus", "scrollar", "balanced", "polytope_member"]
    inst = payload["instance"]
    rows = [
        [
            inst["m"],
            inst["k"],
            inst["a"],
            json.dumps(inst["config"], sort_keys=True),
            payload["genus"],
            " ".join(str(x) for x in payload["scrollar"]),
            payload["balanced"],
            payload["polytope"]["member"],
        ]
    ]
    _emit(args, payload, rows, header)
    return EXIT_OK


# ---------------------------------------------------------------------------
# conditions


def _conditions_result(surface, divisor, config, field, seed, trials) -> dict:
    reports = {}
    if config.kind is NodeKind.ON_SECTIONS:
        reports["mincut"] = interpolation.conditions_on_sections_mincut(
            divisor, surface, config.multiplicities
        )
        reports["sigma"] = interpolation.conditions_on_sections_sigma(
            divisor, surface, config.multiplicities
        )
    else:
        reports["closed"] = interpolation.conditions_general_points(divisor, surface, config.delta)
    reports["oracle"] = interpolation.oracle_conditions(divisor, surface, config, field, seed, trials)
    values = {name: r.conditions_imposed for name, r in reports.items()}
    agree = len(set(values.values())) == 1
    sample = next(iter(reports.values()))
    return {
        "instance": {"m": surface.m, "k": divisor.k, "a": divisor.a, "config": config.to_json()},
        "h0": sample.h0_ambient,
        "conditions": values,
        "h0_ideal": {name: r.h0_ideal for name, r in reports.items()},
        "agree": agree,
    }


def _cmd_conditions(args) -> int:
    if args.replay:
        with open(args.replay, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        surface = Surface(int(obj["m"]))
        divisor = DivisorClass(int(obj["k"]), int(obj["a"]))
        config = NodeConfiguration.from_json(obj["config"])
        prime = int(obj.get("prime", args.prime))
        seed = int(obj.get("seed", args.seed))
        trials = int(obj.get("trials", args.trials))
    else:
        if args.m is None or args.curve_class is None:
            raise ValueError("conditions needs --replay or both --m and --class")
        surface = Surface(args.m)
        divisor = _parse_class(args.curve_class)
        config = _config_from_args(args)
        prime, seed, trials = args.prime, args.seed, args.trials
    field = PrimeField(prime)
    result = _conditions_result(surface, divisor, config, field, seed, trials)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "conditions",
        "prime": prime,
        "seed": seed,
        "trials": trials,
        **result,
    }
    if not result["agree"]:
        payload["replay"] = _replay_object(surface, divisor, config, prime, seed, trials)
    header = ["m", "k", "a", "config", "h0", "conditions", "agree"]
    inst = result["instance"]
    rows = [
        [
            inst["m"],
            inst["k"],
            inst["a"],
            json.dumps(inst["config"], sort_keys=True),
            result["h0"],
            json.dumps(result["conditions"], sort_keys=True),
            result["agree"],
        ]
    ]
    _emit(args, payload, rows, header)
    return EXIT_OK if result["agree"] else EXIT_DISAGREE


# ---------------------------------------------------------------------------
# verify


def random_sections_instance(rnd: random.Random, max_m: int, max_k: int, max_abs_a: int, max_u: int, max_s: int, max_total: int):
    """One deterministic random instance inside the sweep bounds."""
    while True:
        m = rnd.randint(0, max_m)
        k = rnd.randint(1, max_k)
        a = rnd.randint(-max_abs_a, max_abs_a)
        u = rnd.randint(1, max_u)
        s = sorted((rnd.randint(1, max_s) for _ in range(u)), reverse=True)
        if sum(s) <= max_total:
            return Surface(m), DivisorClass(k, a), NodeConfiguration.on_sections(s)


def verify_sweep(
    count: int,
    *,
    seed: int,
    prime: int,
    trials: int,
    max_m: int = 2,
    max_k: int = 5,
    max_abs_a: int = 6,
    max_u: int = 3,
    max_s: int = 6,
    max_total: int = 60,
) -> dict:
    """Closed forms against the oracle on seeded random section instances.

    Deterministic in (seed, prime, trials, bounds); the report is
    byte-stable across runs.
    """
    field = PrimeField(prime)
    rnd = random.Random(derive_seed(seed, 0x5EED))
    results = []
    disagreements = []
    for idx in range(count):
        surface, divisor, config = random_sections_instance(
            rnd, max_m, max_k, max_abs_a, max_u, max_s, max_total
        )
        inst_seed = derive_seed(seed, 1000 + idx)
        row = _conditions_result(surface, divisor, config, field, inst_seed, trials)
        row["index"] = idx
        results.append(row)
        if not row["agree"]:
            disagreements.append(_replay_object(surface, divisor, config, prime, inst_seed, trials))
    return {
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "count": count,
        "prime": prime,
        "seed": seed,
        "trials": trials,
        "bounds": {
            "max_m": max_m,
            "max_k": max_k,
            "max_abs_a": max_abs_a,
            "max_u": max_u,
            "max_s": max_s,
            "max_total": max_total,
        },
        "all_agree": not disagreements,
        "disagreements": disagreements,
        "results": results,
    }


def _cmd_verify(args) -> int:
    if args.random is not None:
        payload = verify_sweep(
            args.random,
            seed=args.seed,
            prime=args.prime,
            trials=args.trials,
            max_m=args.max_m,
            max_k=args.max_k,
            max_abs_a=args.max_a,
            max_u=args.max_u,
            max_s=args.max_s,
            max_total=args.max_total,
        )
    else:
        if args.m is None or args.curve_class is None:
            raise ValueError("verify needs --random N or an explicit instance")
        surface = Surface(args.m)
        divisor = _parse_class(args.curve_class)
        config = _config_from_args(args)
        field = PrimeField(args.prime)
        row = _conditions_result(surface, divisor, config, field, args.seed, args.trials)
        disagreements = []
        if not row["agree"]:
            disagreements.append(
                _replay_object(surface, divisor, config, args.prime, args.seed, args.trials)
            )
        payload = {
            "schema": SCHEMA_VERSION,
            "command": "verify",
            "count": 1,
            "prime": args.prime,
            "seed": args.seed,
            "trials": args.trials,
            "all_agree": row["agree"],
            "disagreements": disagreements,
            "results": [row],
        }
    header = ["index", "m", "k", "a", "config", "conditions", "agree"]
    rows = [
        [
            r.get("index", 0),
            r["instance"]["m"],
            r["instance"]["k"],
            r["instance"]["a"],
            json.dumps(r["instance"]["config"], sort_keys=True),
            json.dumps(r["conditions"], sort_keys=True),
            r["agree"],
        ]
        for r in payload["results"]
    ]
    _emit(args, payload, rows, header)
    return EXIT_OK if payload["all_agree"] else EXIT_DISAGREE


# ---------------------------------------------------------------------------
# scan


def _nonincreasing_tuples(max_u: int, max_s: int):
    """All non-increasing positive tuples, shortest first, lexicographic."""

    def rec(prefix, remaining, cap):
        if prefix:
            yield tuple(prefix)
        if remaining == 0:
            return
        for v in range(min(cap, max_s), 0, -1):
            prefix.append(v)
            yield from rec(prefix, remaining - 1, v)
            prefix.pop()

    yield from rec([], max_u, max_s)


def _scan_grid(args):
    surface = Surface(args.m)
    divisor = _parse_class(args.curve_class)
    configs = []
    if args.delta_range:
        lo, hi = _parse_range(args.delta_range)
        configs.extend(NodeConfiguration.general_points(d) for d in range(lo, hi + 1))
    if args.sections_grid:
        umax, smax = _parse_range(args.sections_grid) if ":" in args.sections_grid else (None, None)
        if umax is None:
            raise ValueError("--sections-grid expects 'max_u:max_s'")
        configs.extend(NodeConfiguration.on_sections(t) for t in _nonincreasing_tuples(umax, smax))
    if not configs:
        raise ValueError("scan needs --delta-range and/or --sections-grid")
    if len(configs) > args.max_instances:
        raise ResourceCapError(
            f"grid holds {len(configs)} instances, above the cap {args.max_instances}; "
            "raise --max-instances to proceed"
        )
    return surface, divisor, configs


def _cmd_scan(args) -> int:
    surface, divisor, configs = _scan_grid(args)
    rows = []
    skipped = 0
    duplicates = 0
    seen: set = set()
    for idx, config in enumerate(configs):
        try:
            problem = CoverProblem(surface, divisor, config)
            vec = invariants.scrollar_scan(problem)
        except (ValueError, InconsistentModelError):
            skipped += 1
            continue
        genus = invariants.genus_of(problem)
        check_scrollar_sum(vec, genus, divisor.k)
        normalized = tuple(_normalized_tuple(vec.entries, genus))
        if normalized in seen:
            duplicates += 1
            continue
        seen.add(normalized)
        poly = splitting.polytope_membership(vec, genus)
        gap = vec.gap()
        existence = {
            "gap_realizable": "guaranteed"
            if splitting.existence_guaranteed_gap(genus, gap, divisor.k)
            else "unknown",
        }
        if config.kind is NodeKind.ON_SECTIONS:
            s = config.multiplicities
            ok = divisor.k >= 3 and splitting.existence_guaranteed_sections(
                divisor.k, len(s), s[0], divisor.a
            )
            existence["prescribed_nodes"] = "guaranteed" if ok else "unknown"
        else:
            existence["prescribed_nodes"] = None
        rows.append(
            {
                "index": idx,
                "config": config.to_json(),
                "genus": genus,
                "scrollar": list(vec.entries),
                "normalized": list(normalized),
                "balanced": vec.is_balanced(),
                "polytope_member": poly.member,
                "existence": existence,
            }
        )
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "scan",
        "instance": {"m": surface.m, "k": divisor.k, "a": divisor.a},
        "prime": args.prime,
        "seed": args.seed,
        "grid_size": len(configs),
        "skipped": skipped,
        "duplicate_normalized": duplicates,
        "rows": rows,
    }
    header = [
        "index",
        "config",
        "genus",
        "scrollar",
        "normalized",
        "balanced",
        "polytope_member",
    ]
    csv_rows = [
        [
            r["index"],
            json.dumps(r["config"], sort_keys=True),
            r["genus"],
            " ".join(str(x) for x in r["scrollar"]),
            " ".join(r["normalized"]),
            r["balanced"],
            r["polytope_member"],
        ]
        for r in rows
    ]
    _emit(args, payload, csv_rows, header)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scrollar",
        description="Scrollar invariants of ruling covers cut from nodal curves on Hirzebruch surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="field modulus for the oracle")
        p.add_argument("--seed", type=int, default=None, help=f"base seed (default ${SEED_ENV_VAR} or 0)")
        p.add_argument("--trials", type=int, default=3, help="oracle trials per instance")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="write the report to this path instead of stdout")

    def add_instance(p):
        p.add_argument("--m", type=int, default=None, help="surface index")
        p.add_argument("--class", dest="curve_class", default=None, help="curve class as 'k,a'")
        p.add_argument("--sections", default=None, help="node multiplicities on sections, e.g. '18,18,10,6,2'")
        p.add_argument("--general-nodes", type=int, default=None, help="number of general nodes")

    p_inv = sub.add_parser("invariants", help="scrollar invariants of one instance")
    add_instance(p_inv)
    p_inv.add_argument("--method", choices=("scan", "closed", "oracle", "all"), default="scan")
    add_common(p_inv)

    p_cond = sub.add_parser("conditions", help="conditions imposed by one configuration")
    add_instance(p_cond)
    p_cond.add_argument("--replay", default=None, help="JSON replay file with {m,k,a,config,prime,seed,trials}")
    add_common(p_cond)

    p_ver = sub.add_parser("verify", help="closed forms against the rank oracle")
    add_instance(p_ver)
    p_ver.add_argument("--random", type=int, default=None, help="verify this many seeded random instances")
    p_ver.add_argument("--max-m", type=int, default=2)
    p_ver.add_argument("--max-k", type=int, default=5)
    p_ver.add_argument("--max-a", type=int, default=6)
    p_ver.add_argument("--max-u", type=int, default=3)
    p_ver.add_argument("--max-s", type=int, default=6)
    p_ver.add_argument("--max-total", type=int, default=60)
    add_common(p_ver)

    p_scan = sub.add_parser("scan", help="sweep a parameter grid and summarise the vectors")
    p_scan.add_argument("--m", type=int, required=True)
    p_scan.add_argument("--class", dest="curve_class", required=True)
    p_scan.add_argument("--delta-range", default=None, help="general-node range 'lo:hi'")
    p_scan.add_argument("--sections-grid", default=None, help="section grid 'max_u:max_s'")
    p_scan.add_argument("--max-instances", type=int, default=DEFAULT_MAX_INSTANCES)
    add_common(p_scan)

    return parser


_COMMANDS = {
    "invariants": _cmd_invariants,
    "conditions": _cmd_conditions,
    "verify": _cmd_verify,
    "scan": _cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return _COMMANDS[args.command](args)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InconsistentModelError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_DISAGREE


def main_entry() -> None:  # console-script wrapper
    raise SystemExit(main())
