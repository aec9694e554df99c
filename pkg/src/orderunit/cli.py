"""Command-line front end.

Subcommands: ``check`` (functional/operator law checkers), ``norm``,
``extend``, ``openness``, ``compact``, and ``gallery`` (built-in fixtures
reproducing the package's stock examples end to end).

Exit codes: 0 all requested checks passed, 1 a property/contract check
failed (the report carries a witness), 2 malformed input.  JSON reports are
byte-deterministic for a fixed seed: keys are sorted and wall-clock timing
is only rendered in text mode.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .dual import subsequence_limit
from .extension import (
    extension_interval,
    extend_one,
    partial_from_json,
    partial_to_json,
    partial_functional,
    span_contains,
)
from .functionals import (
    capacity_from_json,
    capacity_to_json,
    check_normed,
    check_order_preserving,
    check_positive,
    check_weak_additivity,
    functional_from_json,
    sqrt_gap_functional,
)
from .operators import (
    check_order_preserving_op,
    check_weakly_additive_op,
    clamp_operator,
    openness_check,
    operator_from_json,
    unit_image_interior,
)
from .spaces import (
    order_norm,
    orthant,
    space_from_json,
    validate_space,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _parse_point(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad point {text!r}: expected comma-separated floats") from exc


def _report_entry(report) -> dict:
    return report.to_json()


def _emit(payload: dict, fmt: str, elapsed: float) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
        return
    print(f"command: {payload.get('command')}")
    for key, value in payload.items():
        if key in ("command", "checks", "fixtures"):
            continue
        print(f"{key}: {json.dumps(value, sort_keys=True)}")
    for entry in payload.get("checks", []):
        mark = "PASS" if entry.get("passed") else "FAIL"
        line = f"  [{mark}] {entry.get('name')}"
        if entry.get("witness"):
            line += f"  witness={json.dumps(entry['witness'], sort_keys=True)}"
        print(line)
    for entry in payload.get("fixtures", []):
        mark = "ok" if entry.get("matched") else "MISMATCH"
        print(f"  [{mark}] {entry.get('name')} (expected {entry.get('expected')})")
    print(f"elapsed: {elapsed:.3f}s")


def run_check(args) -> tuple[dict, int]:
    space = space_from_json(_load_json(args.space))
    checks = [{"name": "space_valid", "passed": validate_space(space).ok, "samples": 256, "witness": None}]
    n = args.samples
    if args.functional:
        f = functional_from_json(space, _load_json(args.functional))
        checks.append(_report_entry(check_weak_additivity(f, seed=args.seed, n=n, tol=args.tol)))
        checks.append(_report_entry(check_order_preserving(f, seed=args.seed, n=n, tol=args.tol)))
        checks.append(_report_entry(check_normed(f, tol=args.tol)))
        checks.append(_report_entry(check_positive(f, seed=args.seed, n=min(n, 4096), tol=args.tol)))
        subject = {"functional": args.functional}
    else:
        T = operator_from_json(space, _load_json(args.operator))
        checks.append(_report_entry(check_weakly_additive_op(T, seed=args.seed, n=min(n, 8192), tol=args.tol)))
        checks.append(_report_entry(check_order_preserving_op(T, seed=args.seed, n=min(n, 8192), tol=args.tol)))
        subject = {"operator": args.operator, "unit_image_interior": unit_image_interior(T)}
    ok = all(c["passed"] for c in checks)
    payload = {
        "command": "check",
        "seed": args.seed,
        "samples": n,
        "subject": subject,
        "checks": checks,
        "exit_status": EXIT_OK if ok else EXIT_VIOLATION,
    }
    return payload, payload["exit_status"]


def run_norm(args) -> tuple[dict, int]:
    space = space_from_json(_load_json(args.space))
    entries = []
    for text in args.point:
        p = _parse_point(text)
        entries.append({"point": p, "norm": order_norm(space, p)})
    payload = {"command": "norm", "points": entries, "exit_status": EXIT_OK}
    return payload, EXIT_OK


def run_extend(args) -> tuple[dict, int]:
    space = space_from_json(_load_json(args.space))
    pf = partial_from_json(space, _load_json(args.partial), strict=False)
    if not pf.consistent:
        from .extension import check_partial_consistency

        report = check_partial_consistency(pf)
        payload = {
            "command": "extend",
            "checks": [_report_entry(report)],
            "exit_status": EXIT_VIOLATION,
        }
        return payload, EXIT_VIOLATION
    entries = []
    for text in args.target:
        y = _parse_point(text)
        if span_contains(pf.subspace, y):
            entries.append({"target": y, "skipped": "already in span"})
            continue
        interval = extension_interval(pf, y)
        try:
            pf = extend_one(pf, y, rule=args.rule, value=args.value)
        except ValueError as exc:
            entries.append({"target": y, "error": str(exc)})
            payload = {
                "command": "extend",
                "rule": args.rule,
                "targets": entries,
                "exit_status": EXIT_VIOLATION,
            }
            return payload, EXIT_VIOLATION
        chosen = {
            "lower": interval.p_minus,
            "upper": interval.p_plus,
            "midpoint": interval.midpoint,
            "given": args.value,
        }[args.rule]
        entries.append(
            {
                "target": y,
                "p_minus": interval.p_minus,
                "p_plus": interval.p_plus,
                "value": float(chosen),
            }
        )
    payload = {
        "command": "extend",
        "rule": args.rule,
        "targets": entries,
        "result": partial_to_json(pf),
        "exit_status": EXIT_OK,
    }
    return payload, EXIT_OK


def run_openness(args) -> tuple[dict, int]:
    space = space_from_json(_load_json(args.space))
    T = operator_from_json(space, _load_json(args.operator))
    verdict = openness_check(
        T,
        _parse_point(args.at),
        args.epsilon,
        args.delta,
        targets=args.targets,
        budget=args.budget,
        seed=args.seed,
    )
    payload = {
        "command": "openness",
        "at": _parse_point(args.at),
        "verdict": verdict.to_json(),
        "exit_status": EXIT_OK if verdict.passed else EXIT_VIOLATION,
    }
    return payload, payload["exit_status"]


def run_compact(args) -> tuple[dict, int]:
    obj = _load_json(args.capacities)
    try:
        n = int(obj["n"])
        seq = obj["sequence"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad capacity-sequence descriptor: {exc}") from exc
    caps = []
    for entry in seq:
        values = entry["values"] if isinstance(entry, dict) and "values" in entry else entry
        caps.append(capacity_from_json({"n": n, "values": values}))
    space = orthant(n)
    result = subsequence_limit(
        caps,
        space,
        conv_tol=args.tol,
        min_length=args.min_length,
        truncation=args.truncation,
        seed=args.seed,
    )
    payload = {
        "command": "compact",
        "indices": result.indices,
        "limit_capacity": capacity_to_json(result.limit_capacity),
        "distances": [float(d) for d in result.distances],
        "checks": [_report_entry(result.report)],
        "exit_status": EXIT_OK if result.report.passed else EXIT_VIOLATION,
    }
    return payload, payload["exit_status"]


def _fixture(name: str, expected: str, matched: bool, detail=None) -> dict:
    return {"name": name, "expected": expected, "matched": bool(matched), "detail": detail}


def _gallery_band_open(rng, n_points: int = 16) -> dict:
    """Sampled interior balls of the open band ``|x2 - x1| < 1`` stay inside it."""
    space = orthant(2)
    from .sampling import ball_points

    ok = True
    min_margin = np.inf
    for _ in range(n_points):
        t = rng.uniform(-3.0, 3.0)
        a = rng.uniform(-0.95, 0.95)
        z = np.array([t, t + a])
        radius = 0.499 * (1.0 - abs(a))
        min_margin = min(min_margin, radius)
        for w in ball_points(space, z, radius, 8, rng):
            if abs(w[1] - w[0]) >= 1.0:
                ok = False
    return _fixture(
        "band_subspace_open",
        "pass",
        ok,
        {"points": n_points, "min_ball_radius": float(min_margin)},
    )


def _gallery_rational_dense(rng, tol: float, n_points: int = 8) -> dict:
    """Order-norm distance from random plane points to the rational-offset
    line family halves with the denominator and drops below tolerance."""
    profile = []
    ok = True
    for k in range(n_points):
        z = rng.uniform(-3.0, 3.0, size=2)
        gap = z[1] - z[0]
        dists = []
        for j in range(36):
            q = 2**j
            best = round(gap * q) / q
            dists.append(abs(gap - best) / 2.0)
        if any(d2 > d1 + 1e-15 for d1, d2 in zip(dists, dists[1:])):
            ok = False
        if dists[-1] > tol:
            ok = False
        if k == 0:
            profile = dists[:8] + [dists[-1]]
    return _fixture(
        "rational_offsets_dense",
        "pass",
        ok,
        {"distance_profile_head": [float(d) for d in profile]},
    )


def _gallery_band_closed(rng, n_points: int = 8) -> dict:
    """Limits of in-band sequences stay in the closed band ``|x2 - x1| <= 1``;
    points off the band keep a whole ball off it."""

    def in_band(p):
        return abs(p[1] - p[0]) <= 1.0

    ok = True
    for _ in range(n_points):
        t = rng.uniform(-3.0, 3.0)
        approach = [np.array([t, t + 1.0 - 2.0**-k]) for k in range(31)]
        limit = np.array([t, t + 1.0])
        if not all(in_band(p) for p in approach) or not in_band(limit):
            ok = False
        eta = 0.25
        outside = np.array([t, t + 1.0 + eta])
        # the whole radius eta/4 ball around an outside point misses the band
        worst_gap = (outside[1] - outside[0]) - 2 * (eta / 4.0)
        if in_band(outside) or worst_gap <= 1.0:
            ok = False
    return _fixture("band_subspace_closed", "pass", ok, {"points": n_points})


def run_gallery(args) -> tuple[dict, int]:
    seed = args.seed
    rng = np.random.default_rng(seed)
    fixtures = []

    orth2 = orthant(2)
    gapf = sqrt_gap_functional(orth2)

    r = check_weak_additivity(gapf, seed=seed, n=4096)
    fixtures.append(_fixture("sqrt_gap_weakly_additive", "pass", r.passed))

    r = check_order_preserving(gapf, seed=seed, n=4096)
    canonical = (
        not r.passed
        and r.witness is not None
        and np.allclose(r.witness["x"], [0.25, 0.5])
        and np.allclose(r.witness["y"], [0.5, 0.5])
    )
    fixtures.append(_fixture("sqrt_gap_order_violation", "fail_with_witness", canonical, r.witness))

    r = check_positive(gapf, seed=seed, n=2048)
    fixtures.append(_fixture("sqrt_gap_positive", "pass", r.passed))

    clamp = clamp_operator(orth2)
    r = check_weakly_additive_op(clamp, seed=seed, n=4096)
    fixtures.append(_fixture("clamp_weakly_additive", "pass", r.passed))
    r = check_order_preserving_op(clamp, seed=seed, n=4096)
    fixtures.append(_fixture("clamp_order_preserving", "pass", r.passed))

    v0 = openness_check(clamp, [0.0, 0.0], 0.25, 0.25, seed=seed, targets=24, budget=800)
    fixtures.append(_fixture("clamp_open_at_zero", "pass", v0.passed, v0.to_json()))

    v24 = openness_check(clamp, [2.0, 4.0], 1.0, 0.1, seed=seed, targets=24, budget=800)
    witness_ok = (
        not v24.passed
        and v24.witness is not None
        and max(abs(v24.witness[0] - 2.0), abs(v24.witness[1] - 3.0)) <= 0.1
        and abs(v24.witness[1] - v24.witness[0] - 1.0) > 1e-9
    )
    fixtures.append(_fixture("clamp_not_open_off_band", "fail_with_witness", witness_ok, v24.to_json()))

    fixtures.append(_gallery_band_open(rng))
    fixtures.append(_gallery_rational_dense(rng, tol=args.tol))
    fixtures.append(_gallery_band_closed(rng))

    pf = partial_functional(orth2, [], [], 1.0)
    interval = extension_interval(pf, [1.0, 0.0])
    extended = extend_one(pf, [1.0, 0.0], rule="midpoint")
    pinned = extension_interval(extended, [1.0, 0.0])
    demo_ok = (
        abs(interval.p_minus - 0.0) <= 1e-12
        and abs(interval.p_plus - 1.0) <= 1e-12
        and abs(pinned.p_minus - 0.5) <= 1e-12
        and abs(pinned.p_plus - 0.5) <= 1e-12
        and extended.consistent
    )
    fixtures.append(
        _fixture(
            "extension_demo",
            "pass",
            demo_ok,
            {"p_minus": interval.p_minus, "p_plus": interval.p_plus, "midpoint": interval.midpoint},
        )
    )

    ok = all(f["matched"] for f in fixtures)
    payload = {
        "command": "gallery",
        "seed": seed,
        "fixtures": fixtures,
        "exit_status": EXIT_OK if ok else EXIT_VIOLATION,
    }
    return payload, payload["exit_status"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orderunit",
        description="Order-unit space toolkit: cone geometry, weakly additive "
        "functional/operator checks, constructive extension, compactness probes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=2**14)
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")

    p = sub.add_parser("check", help="run the law checkers on a functional or an operator")
    common(p)
    p.add_argument("--space", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--functional")
    group.add_argument("--operator")
    p.set_defaults(handler=run_check)

    p = sub.add_parser("norm", help="order norms of points in a space")
    common(p)
    p.add_argument("--space", required=True)
    p.add_argument("--point", action="append", required=True, help="comma-separated coordinates")
    p.set_defaults(handler=run_norm)

    p = sub.add_parser("extend", help="extend a partial functional to target points")
    common(p)
    p.add_argument("--space", required=True)
    p.add_argument("--partial", required=True)
    p.add_argument("--target", action="append", required=True)
    p.add_argument("--rule", choices=("lower", "upper", "midpoint", "given"), default="midpoint")
    p.add_argument("--value", type=float, default=None, help="value for rule 'given'")
    p.set_defaults(handler=run_extend)

    p = sub.add_parser("openness", help="probe relative openness of an operator at a point")
    common(p)
    p.add_argument("--space", required=True)
    p.add_argument("--operator", required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--targets", type=int, default=32)
    p.set_defaults(handler=run_openness)

    p = sub.add_parser("compact", help="extract a convergent subsequence from a capacity sequence")
    common(p)
    p.add_argument("--capacities", required=True)
    p.add_argument("--min-length", type=int, default=8)
    p.add_argument("--truncation", type=int, default=64)
    p.set_defaults(handler=run_compact, tol_default=1e-6)

    p = sub.add_parser("gallery", help="reproduce the built-in example fixtures")
    common(p)
    p.set_defaults(handler=run_gallery)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "compact" and args.tol == 1e-9:
        args.tol = 1e-6  # convergence tolerance, not a predicate tolerance
    if args.seed < 0 or args.samples <= 0:
        print("error: seed must be nonnegative and samples positive", file=sys.stderr)
        return EXIT_INPUT
    start = time.perf_counter()
    try:
        payload, code = args.handler(args)
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(payload, args.fmt, time.perf_counter() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
