"""Command-line front end: ``shadowlab <command> [options]``.

Exit codes: 0 success, 1 usage or input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .circle_maps import TorusCurve, torus_degree
from .complex import PathBoundViolation, Topology, shadow_classes, shadow_complex
from .curve import CurveError, PLClosedCurve, format_rational, parse_rational, validate_simple
from .generators import GeneratorExhausted, GeneratorSpec, gen_random_knot, generate
from .relations import (
    DEFAULT_EPSILON,
    CompositionError,
    OddDegreeError,
    NotASimplePath,
    compose_relation_curves,
    find_triple_fixed_point,
    relation_fixed_point,
    split_top_bottom,
)

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


class InputError(Exception):
    pass


def _fmt_point(p) -> str:
    return "(" + ", ".join(format_rational(c) for c in p) + ")"


def _emit(args, lines, payload):
    text = json.dumps(payload, indent=2, sort_keys=True) if args.json else "\n".join(lines)
    if args.output and args.command != "plot":
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_curve(path) -> PLClosedCurve:
    if not path:
        raise InputError("--input is required")
    try:
        with open(path) as fh:
            return PLClosedCurve.from_json(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed curve file {path}: {exc}") from exc


# -- analyze --------------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    curve = _load_curve(args.input)
    if not validate_simple(curve):
        raise InputError("curve is not simple")
    try:
        classes = shadow_classes(curve, check_simple=False)
    except PathBoundViolation as exc:
        print(f"path bound violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    lines, axes = [], []
    for i, cls in enumerate(classes, start=1):
        entry = {"axis": i, "class": str(cls.tag),
                 "vertices": len(cls.complex.vertices), "edges": len(cls.complex.edges)}
        line = f"axis {i}: {cls.tag} ({entry['vertices']} vertices, {entry['edges']} edges)"
        if cls.tag is Topology.SIMPLE_PATH:
            split = split_top_bottom(curve, i, cls.complex)
            a, b = curve.point_at(split.a), curve.point_at(split.a_tilde)
            entry["split"] = {"a": format_rational(split.a), "a_tilde": format_rational(split.a_tilde),
                              "a_point": [format_rational(c) for c in a],
                              "a_tilde_point": [format_rational(c) for c in b]}
            line += f"; split at t={split.a} {_fmt_point(a)} and t={split.a_tilde} {_fmt_point(b)}"
        elif cls.tag is Topology.TREE:
            line += f"; branch vertices {[_fmt_point(p) for p in cls.witness_points()]}"
        axes.append(entry)
        lines.append(line)
    counts = Counter(str(c.tag) for c in classes)
    n_paths = counts.get("SimplePath", 0)
    lines.append(", ".join(f"{k}: {v}" for k, v in sorted(counts.items())))
    lines.append(f"SimplePath: {n_paths} (bound 2)")
    _emit(args, lines, {"axes": axes, "counts": dict(counts), "simple_paths": n_paths, "bound": 2})
    return EXIT_OK


# -- verify-theorem -------------------------------------------------------------------------------

def trial_seed(seed: int, i: int) -> int:
    return seed * 1_000_003 + i


def _run_trials(job):
    seed, start, stop, d, n = job
    hist, classes, exhausted = Counter(), Counter(), []
    for i in range(start, stop):
        try:
            curve = gen_random_knot(d, n, trial_seed(seed, i))
        except GeneratorExhausted:
            exhausted.append(i)
            continue
        try:
            cls = shadow_classes(curve, check_simple=False)
        except PathBoundViolation:
            hist[3] += 1
            continue
        tags = [c.tag for c in cls]
        hist[tags.count(Topology.SIMPLE_PATH)] += 1
        classes.update(str(t) for t in tags)
    return hist, classes, exhausted


def thread_cap() -> int:
    try:
        cap = int(os.environ.get("SHADOWLAB_THREADS", "0"))
    except ValueError:
        cap = 0
    cpus = os.cpu_count() or 1
    return max(1, min(cap, cpus) if cap > 0 else cpus)


def verify_theorem(trials: int, seed: int, d: int, n: int, workers: int = 1) -> dict:
    """Histogram of simple-path shadow counts over random simple curves."""
    chunk = max(1, min(500, -(-trials // max(1, workers * 4))))
    jobs = [(seed, s, min(s + chunk, trials), d, n) for s in range(0, trials, chunk)]
    hist, classes, exhausted = Counter(), Counter(), []
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trials, jobs))
    else:
        results = [_run_trials(j) for j in jobs]
    for h, c, e in results:
        hist.update(h)
        classes.update(c)
        exhausted.extend(e)
    return {"trials": trials, "dimension": d, "resolution": n, "seed": seed,
            "histogram": {int(k): v for k, v in sorted(hist.items())},
            "classes": dict(sorted(classes.items())), "exhausted": sorted(exhausted),
            "max": max(hist, default=0)}


def cmd_verify_theorem(args) -> int:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    if args.dimension < 3 or args.resolution < 4:
        raise InputError("random curves need --dimension >= 3 and --resolution >= 4")
    summary = verify_theorem(args.trials, args.seed, args.dimension, args.resolution, thread_cap())
    ok = summary["max"] <= 2
    summary["ok"] = ok
    hist = ", ".join(f"{k}: {v}" for k, v in summary["histogram"].items())
    lines = [f"trials={args.trials} d={args.dimension} n={args.resolution} seed={args.seed}",
             f"SimplePath count histogram: {hist}",
             f"shadow classes: " + ", ".join(f"{k}: {v}" for k, v in summary["classes"].items())]
    if summary["exhausted"]:
        lines.append(f"generator exhausted on trials {summary['exhausted']}")
    lines.append(f"max SimplePath count {summary['max']} (bound 2): {'OK' if ok else 'VIOLATION'}")
    _emit(args, lines, summary)
    return EXIT_OK if ok else EXIT_INVARIANT


# -- demos -------------------------------------------------------------------------------------------

def wiggly_torus_curve(degrees, resolution: int, phase=Fraction(0)) -> TorusCurve:
    """PL torus curve of the given degrees: linear lifts plus a small bounded wiggle."""
    a, b = degrees
    n = resolution
    grid = [Fraction(j, n) for j in range(n)]
    wiggle = [Fraction((j * j) % 3 - 1, 10 * n) for j in range(n)]
    first = [a * t + w for t, w in zip(grid, wiggle)]
    second = [b * t + phase - w for t, w in zip(grid, wiggle)]
    return TorusCurve.from_lifts(grid, first, second, (a, b))


def compose_demo(resolution: int) -> dict:
    phi1 = wiggly_torus_curve((1, 3), resolution)
    phi2 = wiggly_torus_curve((5, 2), resolution, Fraction(1, 7))
    out = {}
    for name, (p, q) in (("direct", (phi1, phi2)), ("swapped", (phi2.swapped(), phi1.swapped()))):
        c = compose_relation_curves(p, q)
        (a, b1), (b2, cc) = c.input_degrees
        expected = (c.k * a // b1, c.k * cc // b2)
        out[name] = {"inputs": [list(torus_degree(p)), list(torus_degree(q))], "k": c.k,
                     "degree": list(c.degree()), "expected": list(expected),
                     "ok": c.degree() == expected and c.k % 2 == 1,
                     "cycles": c.cycle_count, "regular_value": format_rational(c.regular_value)}
    return out


def cmd_compose_demo(args) -> int:
    try:
        report = compose_demo(args.resolution)
    except (OddDegreeError, CompositionError) as exc:
        print(f"composition failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    lines = []
    for name, r in report.items():
        (a, b1), (b2, c) = r["inputs"]
        lines.append(f"{name}: deg phi1 = ({a}, {b1}), deg phi2 = ({b2}, {c}), k = {r['k']}, "
                     f"measured degree {tuple(r['degree'])}, formula (k*{a}/{b1}, k*{c}/{b2}) = "
                     f"{tuple(r['expected'])} {'OK' if r['ok'] else 'MISMATCH'}")
    _emit(args, lines, report)
    return EXIT_OK if all(r["ok"] for r in report.values()) else EXIT_INVARIANT


def cmd_fixedpoint_demo(args) -> int:
    eps = args.epsilon
    if args.input:
        curve = _load_curve(args.input)
        axes = tuple(args.axes)
        try:
            cert = find_triple_fixed_point(curve, eps, axes)
        except NotASimplePath as exc:
            raise InputError(f"{exc}; every listed axis needs a simple-path shadow") from exc
        lines = [f"axes {axes}, epsilon {eps}",
                 *(f"q{i}: t={format_rational(t)} {_fmt_point(p)}"
                   for i, (t, p) in enumerate(zip(cert.params, cert.points))),
                 f"memberships {list(cert.memberships)}",
                 "deviations " + ", ".join(format_rational(x) for x in cert.deviations),
                 f"degrees {cert.degrees}"]
        _emit(args, lines, cert.to_dict())
        return EXIT_OK if all(cert.memberships) else EXIT_INVARIANT
    psis = [wiggly_torus_curve((1, -1), args.resolution, Fraction(i, 5)) for i in range(3)]
    fx = relation_fixed_point(*psis, budget=eps / 1000)
    j, k = fx.final_degree
    ok = j == -k and j % 2 == 1
    lines = [f"three synthetic curves of degree (1, -1), resolution {args.resolution}",
             f"first composite degree {fx.first_degree}, final degree {fx.final_degree}",
             f"diagonal point t={format_rational(fx.t)}: q0={format_rational(fx.q0)}, "
             f"q1={format_rational(fx.q1)}, q2={format_rational(fx.q2)}",
             f"chain gaps {[format_rational(g) for g in fx.gaps]}",
             f"{'OK' if ok else 'VIOLATION'}: degree (k, -k) with k odd"]
    payload = fx.to_dict()
    payload["ok"] = ok
    _emit(args, lines, payload)
    return EXIT_OK if ok else EXIT_INVARIANT


# -- gen and plot ------------------------------------------------------------------------------------

def cmd_gen(args) -> int:
    try:
        spec = GeneratorSpec(args.kind, args.dimension, args.resolution, args.seed)
        curve = generate(spec)
    except GeneratorExhausted as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = curve.to_json()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _chains(complex_):
    """Split the edges into maximal polylines through degree-2 vertices."""
    adj = {i: [] for i in range(len(complex_.vertices))}
    for e, (i, j) in enumerate(complex_.edges):
        adj[i].append((e, j))
        adj[j].append((e, i))
    used, chains = set(), []
    starts = [v for v in adj if len(adj[v]) != 2] + list(adj)
    for v in starts:
        for e, w in adj[v]:
            if e in used:
                continue
            used.add(e)
            chain = [v, w]
            while len(adj[w]) == 2:
                nxt = [(f, x) for f, x in adj[w] if f not in used]
                if not nxt:
                    break
                f, x = nxt[0]
                used.add(f)
                chain.append(x)
                w = x
            chains.append(chain)
    return chains


def shadow_svg(curve: PLClosedCurve, axis: int, size: int = 400, margin: int = 20) -> str:
    """SVG drawing of one shadow of a curve in R^3; endpoints and branch points are marked."""
    if curve.dimension != 3:
        raise InputError("plotting needs a curve in R^3")
    if not 1 <= axis <= 3:
        raise InputError(f"axis {axis} out of range 1..3")
    cx = shadow_complex(curve, axis)
    pts = [(float(p[0]), float(p[1])) for p in cx.vertices]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    k = (size - 2 * margin) / span

    def at(i):
        x, y = pts[i]
        return margin + (x - min(xs)) * k, size - margin - (y - min(ys)) * k

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<title>shadow {axis}</title>']
    for chain in _chains(cx):
        coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in map(at, chain))
        out.append(f'<polyline points="{coords}" fill="none" stroke="black" stroke-width="1.5"/>')
    for i, g in enumerate(cx.degrees()):
        x, y = at(i)
        if g == 1:
            out.append(f'<circle class="endpoint" cx="{x:.3f}" cy="{y:.3f}" r="4" fill="blue"/>')
        elif g >= 3:
            out.append(f'<circle class="branch" cx="{x:.3f}" cy="{y:.3f}" r="5" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_plot(args) -> int:
    curve = _load_curve(args.input)
    svg = shadow_svg(curve, args.axis)
    if not args.output:
        raise InputError("--output is required for plot")
    try:
        with open(args.output, "w") as fh:
            fh.write(svg)
    except OSError as exc:
        raise InputError(f"cannot write {args.output}: {exc.strerror}") from exc
    print(f"wrote {args.output}")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------------------------

def _rational(text):
    try:
        value = parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return value


def _axes(text):
    try:
        return [int(a) for a in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("axes are comma-separated integers") from exc


COMMANDS = {
    "analyze": cmd_analyze,
    "verify-theorem": cmd_verify_theorem,
    "compose-demo": cmd_compose_demo,
    "fixedpoint-demo": cmd_fixedpoint_demo,
    "gen": cmd_gen,
    "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="curve JSON file")
    common.add_argument("--output", help="write the report (or SVG, or curve) here")
    common.add_argument("--axis", type=int, default=1)
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--epsilon", type=_rational, default=DEFAULT_EPSILON)
    common.add_argument("--dimension", type=int, default=3)
    common.add_argument("--resolution", type=int, default=12)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    parser = argparse.ArgumentParser(prog="shadowlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "gen":
            p.add_argument("--kind", default="planar-circle",
                           choices=["planar-circle", "tree-shadow", "random-knot"])
        if name == "fixedpoint-demo":
            p.add_argument("--axes", type=_axes, default=[1, 2, 3],
                           help="axes used with --input, e.g. 1,2,1")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (InputError, CurveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CompositionError, PathBoundViolation) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
