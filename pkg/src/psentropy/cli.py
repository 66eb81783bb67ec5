"""Command-line interface.

Structured output (``--format records``) is one tab-separated record per line:
``key  value  tol``. ``--format json`` emits the same records as a single
document. Tables (weights, currents, gradients, ...) are emitted as records
keyed ``<table>.<row>.<column>`` so every numeric value keeps its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import graph_catalog as cat
from .currents import current_coordinates
from .entropy import volume_entropy
from .errors import EntropyError
from .graph import Graph, MetricStructure, classify_metric, parse_graph_file, parse_number, uniform_metric
from .optimize import OptimizeOptions, minimize_entropy, sup_entropy_demo
from .oracle import estimate_entropy_growth, growth_count, nbrw_simulate, poincare_partial
from .sensitivity import critical_point_residual, entropy_gradient
from .spectral import default_tol


@dataclass
class Report:
    records: list[tuple[str, Any, float | None]] = field(default_factory=list)

    def add(self, key: str, value: Any, tol: float | None = None) -> None:
        self.records.append((key, value, tol))

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {k: ({"value": v, "tol": t} if t is not None else v) for k, v, t in self.records}
            return json.dumps(doc, indent=2, sort_keys=False)
        lines = []
        for k, v, t in self.records:
            if fmt == "records":
                lines.append(f"{k}\t{_fmt(v)}\t{'' if t is None else f'{t:.3g}'}")
            else:
                suffix = "" if t is None else f"  (tol {t:.3g})"
                lines.append(f"{k:<28} {_fmt(v)}{suffix}")
        return "\n".join(lines)


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


# inputs -------------------------------------------------------------------


def parse_list(text: str) -> list[float]:
    return [parse_number(x) for x in text.split(",") if x.strip()]


def load_input(args: argparse.Namespace, source: tuple[str, str]) -> tuple[Graph, MetricStructure, str]:
    kind, name = source
    if kind == "catalog":
        g = cat.catalog_graph(name)
        declared = None
    else:
        g, declared = parse_graph_file(Path(name).read_text(encoding="utf-8"))
    lengths = getattr(args, "lengths", None)
    if lengths:
        values = parse_list(lengths)
        if len(values) == g.num_edges:
            values = list(np.repeat(values, 2))
        m = classify_metric(g, values)
    elif declared is not None:
        m = classify_metric(g, declared)
    else:
        m = uniform_metric(g)
    return g, m, name


# subcommands ----------------------------------------------------------------


def cmd_entropy(args, g, m, rep: Report) -> None:
    sol = volume_entropy(g, m, tol=args.tol)
    rep.add("classification", m.classification)
    rep.add("volume", m.volume, 1e-15)
    rep.add("rank", g.rank)
    rep.add("h", sol.h, args.tol)
    rep.add("phi_residual", sol.residual, args.tol)
    rep.add("conformal_residual_max", float(sol.conformal_residual().max()), args.tol)
    rep.add("iterations", sol.iterations)
    if g.degree_two_vertices:
        rep.add("warning.degree_two_vertices", ",".join(g.degree_two_vertices))


def cmd_weights(args, g, m, rep: Report) -> None:
    sol = volume_entropy(g, m, tol=args.tol).with_scaling(args.scaling)
    rep.add("h", sol.h, args.tol)
    rep.add("scaling", args.scaling)
    for e, w in sol.weight_map().items():
        rep.add(f"w.{e}", w, args.tol)


def cmd_currents(args, g, m, rep: Report) -> None:
    sol = volume_entropy(g, m, tol=args.tol)
    table = current_coordinates(sol, args.max_edges, cap=args.budget)
    rep.add("h", sol.h, args.tol)
    rep.add("max_edges", args.max_edges)
    rep.add("entries", len(table.labels))
    for label, raw, proj in table.records():
        key = label.replace(" ", "_")
        rep.add(f"nu.{key}.raw", raw, 1e-10)
        rep.add(f"nu.{key}.projective", proj, 1e-10)


def cmd_grad(args, g, m, rep: Report) -> None:
    res = entropy_gradient(g, m, volume_entropy(g, m, tol=args.tol))
    rep.add("h", res.h, args.tol)
    rep.add("euler_residual", res.euler_residual, 1e-8)
    rep.add("solve_residual", res.solve_residual, 1e-10)
    rep.add("jacobian_condition", res.condition)
    for e, d in zip(g.edges, res.grad):
        rep.add(f"grad.{e}", float(d), 1e-8)
    # non-oriented gradient: sum of the two orientations
    for name, d in zip(g.base_edges, res.folded()):
        rep.add(f"grad_sym.{name}", float(d), 1e-8)


def cmd_critical(args, g, m, rep: Report) -> None:
    sol = volume_entropy(g, m, tol=args.tol)
    r = critical_point_residual(g, m, sol)
    rep.add("h", sol.h, args.tol)
    rep.add("critical_residual", r, 1e-9)
    rep.add("critical", r <= 1e-9)


def cmd_minimize(args, g, m, rep: Report) -> None:
    if args.init:
        init = np.array(parse_list(args.init))
    else:
        init = np.random.default_rng(args.seed).uniform(0.05, 1.0, g.num_edges)
    opts = OptimizeOptions(tol=args.opt_tol, max_iter=args.max_iter, floor=args.floor)
    res = minimize_entropy(g, init, opts)
    rep.add("h_star", res.h, args.tol)
    rep.add("converged", res.converged)
    rep.add("boundary", res.boundary)
    rep.add("iterations", res.iterations)
    rep.add("grad_norm", res.grad_norm, opts.tol)
    for name, x in zip(g.base_edges, res.lengths):
        rep.add(f"argmin.{name}", float(x), opts.tol)
    for i, (h, gn) in enumerate(res.trajectory):
        rep.add(f"trajectory.{i}.h", h, args.tol)
        rep.add(f"trajectory.{i}.grad_norm", gn)


def cmd_oracle(args, g, m, rep: Report) -> None:
    if args.oracle == "growth":
        grid = parse_list(args.grid) if args.grid else None
        est = estimate_entropy_growth(g, m, grid, origin=args.origin, budget=args.budget)
        rep.add("h_hat", est.h_hat, 0.05)
        rep.add("truncated", est.truncated)
        for R, N in est.samples:
            rep.add(f"growth.{R!r}", N)
        if args.csv:
            _write_csv(args.csv, ["R", "N"], est.samples)
    elif args.oracle == "count":
        rep.add("count", growth_count(g, m, args.radius, args.origin, args.budget))
    elif args.oracle == "poincare":
        for t in range(args.max_edges + 1):
            rep.add(f"poincare.{t}", poincare_partial(g, m, args.s, t, args.origin))
    else:
        ws = nbrw_simulate(g, args.steps, args.trials, args.seed, args.origin)
        rep.add("steps", ws.steps)
        rep.add("trials", ws.trials)
        rep.add("seed", ws.seed)
        for e, f in ws.edge_frequency.items():
            rep.add(f"freq.{e}", f, 3 * ws.sigma(f) if 0 < f < 1 else None)
        if args.csv:
            _write_csv(args.csv, ["edge", "frequency"], ws.edge_frequency.items())


def _write_csv(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def cmd_demo(args, rep: Report) -> None:
    xs = parse_list(args.xs)
    for x, h in sup_entropy_demo(xs):
        rep.add(f"sup.{x!r}", h, args.tol)


def cmd_catalog(args, rep: Report) -> None:
    for name in ("theta", "dumbbell", "K4", "double-loop-theta", "rose(2)", "rose(3)", "theta(4)"):
        g = cat.catalog_graph(name)
        degs = sorted(set(g.degree.values()))
        rep.add(f"catalog.{name}", f"V={len(g.vertices)} N={g.num_edges} k={g.rank} degrees={degs}")


# parser ---------------------------------------------------------------------


def _positive(kind: Callable):
    def conv(text: str):
        v = kind(parse_number(text)) if kind is float else kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text}")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--catalog", action="append", default=[], help="catalog graph name (repeatable)")
    src.add_argument("--graph", action="append", default=[], help="graph file path (repeatable)")
    src.add_argument("--lengths", help="comma-separated lengths, decimals or p/q")
    src.add_argument("--each", action="store_true", help="evaluate several inputs concurrently")
    common.add_argument("--tol", type=_positive(float), default=None, help="solver tolerance (env ENTROPY_TOL)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["text", "records", "json"], default="text")

    p = argparse.ArgumentParser(prog="psentropy", description="Volume entropy of metric graphs.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("entropy", parents=[common])
    w = sub.add_parser("weights", parents=[common])
    w.add_argument("--scaling", choices=["unit-norm", "sum-one"], default="unit-norm")
    c = sub.add_parser("currents", parents=[common])
    c.add_argument("--max-edges", type=_positive(int), default=2)
    c.add_argument("--budget", type=_positive(int), default=2_000_000)
    sub.add_parser("grad", parents=[common])
    sub.add_parser("critical", parents=[common])
    mn = sub.add_parser("minimize", parents=[common])
    mn.add_argument("--init", help="comma-separated initial edge lengths")
    mn.add_argument("--opt-tol", type=_positive(float), default=1e-7)
    mn.add_argument("--max-iter", type=_positive(int), default=2000)
    mn.add_argument("--floor", type=_positive(float), default=1e-9)

    o = sub.add_parser("oracle", parents=[common])
    o.add_argument("oracle", choices=["growth", "count", "poincare", "walk"])
    o.add_argument("--origin")
    o.add_argument("--budget", type=_positive(int), default=10**7)
    o.add_argument("--grid", help="comma-separated increasing R values")
    o.add_argument("--radius", type=_positive(float), default=1.0)
    o.add_argument("--s", type=_positive(float), default=1.0)
    o.add_argument("--max-edges", type=int, default=6)
    o.add_argument("--steps", type=_positive(int), default=10_000)
    o.add_argument("--trials", type=_positive(int), default=50)
    o.add_argument("--csv", help="also write the table as CSV")

    d = sub.add_parser("demo", parents=[common])
    d.add_argument("demo", choices=["sup"])
    d.add_argument("--xs", default="0.5,0.1,0.01,1e-4,1e-6")

    cl = sub.add_parser("catalog", parents=[common])
    cl.add_argument("action", choices=["list"])
    return p


GRAPH_COMMANDS = {
    "entropy": cmd_entropy,
    "weights": cmd_weights,
    "currents": cmd_currents,
    "grad": cmd_grad,
    "critical": cmd_critical,
    "minimize": cmd_minimize,
    "oracle": cmd_oracle,
}


def _run_one(args, source) -> Report:
    g, m, name = load_input(args, source)
    rep = Report()
    if args.each:
        rep.add("input", name)
    GRAPH_COMMANDS[args.command](args, g, m, rep)
    return rep


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.tol is None:
        args.tol = default_tol()
    try:
        if args.command == "demo":
            rep = Report()
            cmd_demo(args, rep)
            reports = [rep]
        elif args.command == "catalog":
            rep = Report()
            cmd_catalog(args, rep)
            reports = [rep]
        else:
            sources = [("catalog", n) for n in args.catalog] + [("file", f) for f in args.graph]
            if not sources:
                raise EntropyError("give --catalog NAME or --graph FILE")
            if len(sources) > 1 and not args.each:
                raise EntropyError("several inputs need --each")
            with ThreadPoolExecutor() as pool:
                reports = list(pool.map(lambda s: _run_one(args, s), sources))
    except EntropyError as exc:
        _error(err, args.format, exc.kind, str(exc))
        return 1
    except (OSError, ValueError) as exc:
        _error(err, args.format, "input", str(exc))
        return 1
    out.write("\n".join(r.render(args.format) for r in reports) + "\n")
    return 0


def _error(err, fmt: str, kind: str, message: str) -> None:
    if fmt == "json":
        err.write(json.dumps({"error": kind, "message": message}) + "\n")
    else:
        err.write(f"error\t{kind}\t{message}\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
