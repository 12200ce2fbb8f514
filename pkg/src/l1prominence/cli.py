"""Command-line front end.

Exit status: 0 on success, 1 for domain errors (e.g. a graph that is not
strongly connected), 2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import curve_variation_screen, find_hubs, flow_totals, margin_correlations
from .errors import InputFormatError, L1Error, NotStronglyConnected
from .geodesics import (
    all_pairs_shortest,
    file_checksum,
    load_distance_cache,
    save_distance_cache,
    symmetry_constant,
)
from .graph import check_strong_connectivity, read_graph, write_graph
from .ingest import FlowFilter, build_flow_graph, parse_flow_csv
from .locality import alpha_range, default_alpha_grid, multiscale_profile, neighborhood
from .prominence import (
    KINDS,
    TIE_TOL,
    l1_prestige,
    l1_prestige_matrix_form,
    median_set,
)

log = logging.getLogger("l1prominence")


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def atomic_write(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# --- alpha grids ---------------------------------------------------------------

def parse_alpha(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad alpha value {text!r}") from None


def parse_grid(text: str) -> list[Fraction]:
    """``a,b,c`` or ``start:stop:step``; each item may be a fraction like ``15/424``."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("range grid must be start:stop:step")
        start, stop, step = (parse_alpha(p) for p in parts)
        try:
            grid = alpha_range(start, stop, step)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    else:
        grid = [parse_alpha(p) for p in text.split(",") if p.strip()]
    if not grid:
        raise argparse.ArgumentTypeError("empty alpha grid")
    if any(not 0 < a <= 1 for a in grid):
        raise argparse.ArgumentTypeError("alpha values must lie in (0, 1]")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise argparse.ArgumentTypeError("alpha grid must be strictly increasing")
    return grid


# --- shared graph loading ------------------------------------------------------

def _load(args):
    g = read_graph(args.edges, args.vertices)
    report = check_strong_connectivity(g)
    if not report.strongly_connected:
        comps = [[g.names[i] for i in c] for c in report.components]
        raise NotStronglyConnected(
            f"graph has {len(comps)} strongly connected components", comps
        )
    D = None
    checksum = None
    cache = getattr(args, "distance_cache", None)
    if cache:
        checksum = file_checksum(args.edges)
        D = load_distance_cache(cache, checksum)
        if D is not None and D.shape[0] != g.n:
            D = None
    if D is None:
        D = all_pairs_shortest(g, workers=args.jobs)
        if cache:
            save_distance_cache(cache, D, checksum)
    S = symmetry_constant(D) if g.n > 1 else 1.0
    return g, D, S


def _kinds(choice: str):
    return KINDS if choice == "both" else (choice,)


# --- commands ------------------------------------------------------------------

def cmd_validate(args) -> int:
    g = read_graph(args.edges, args.vertices)
    report = check_strong_connectivity(g)
    print(f"vertices: {g.n}")
    print(f"edges: {len(g.edges)}")
    print(f"total multiplicity: {fmt(g.total_multiplicity)}")
    print(f"strongly connected: {'yes' if report.strongly_connected else 'no'}")
    if not report.strongly_connected:
        print(f"components: {len(report.components)}")
        for i, comp in enumerate(report.components, 1):
            print(f"  [{i}] " + ", ".join(g.names[v] for v in comp))
        return 1
    if g.n > 1:
        D = all_pairs_shortest(g, workers=args.jobs)
        print(f"symmetry constant: {fmt(symmetry_constant(D))}")
    return 0


def cmd_global(args) -> int:
    g, D, S = _load(args)
    measure = l1_prestige_matrix_form if args.matrix_form else l1_prestige
    kinds = _kinds(args.kind)
    cols = {k: measure(D, g.multiplicities, S, kind=k).values for k in kinds}
    medians = {k: [g.names[i] for i in median_set(D, g.multiplicities, k, args.tol).members]
               for k in kinds}
    if args.format == "json":
        doc = {
            "symmetry_constant": float(S),
            "vertices": [
                {"vertex": name, **{k: float(fmt(cols[k][i])) for k in kinds}}
                for i, name in enumerate(g.names)
            ],
        }
        for k in kinds:
            doc[f"median_{k}"] = medians[k]
        text = json.dumps(doc, indent=2) + "\n"
    else:
        rows = [[name, *(fmt(cols[k][i]) for k in kinds)] for i, name in enumerate(g.names)]
        text = _csv_text(["vertex", *kinds], rows)
    atomic_write(args.output, text)
    return 0


def cmd_multiscale(args) -> int:
    g, D, S = _load(args)
    grid = args.grid if args.grid is not None else default_alpha_grid(g.n)
    prof = multiscale_profile(
        D, g.multiplicities, S, args.kind, grid, margins=True, tol=args.tol, workers=args.jobs
    )
    if prof.clamp_events:
        log.warning("%d local values were clipped into [0, 1]", prof.clamp_events)
    rows = []
    for i, name in enumerate(g.names):
        for c, a in enumerate(grid):
            rows.append([name, fmt(a), fmt(prof.values[i, c]), fmt(prof.uniform_margin[i, c])])
    atomic_write(args.output, _csv_text(["vertex", "alpha", "value", "uniform_margin"], rows))
    if args.wide:
        wide = [[name, *(fmt(v) for v in prof.values[i])] for i, name in enumerate(g.names)]
        atomic_write(args.wide, _csv_text(["vertex", *(fmt(a) for a in grid)], wide))
    if args.screen is not None:
        hits = [g.names[i] for i in curve_variation_screen(prof, args.screen)]
        doc = {"threshold": args.screen, "screened": hits}
        if args.screen_output:
            atomic_write(args.screen_output, json.dumps(doc, indent=2) + "\n")
        else:
            print(json.dumps(doc), file=sys.stderr)
    return 0


def cmd_neighborhood(args) -> int:
    g, D, S = _load(args)
    k = g.index(args.vertex)
    nb = neighborhood(D, g.multiplicities, S, k, args.alpha, args.kind, args.tol)
    members = sorted(nb.members, key=lambda i: (-nb.values[i], i))
    rows = [[g.names[i], fmt(nb.values[i])] for i in members]
    atomic_write(args.output, _csv_text(["vertex", f"modified_{args.kind}"], rows))
    return 0


def _read_columns(path) -> tuple[list[str], dict[str, list[float]]]:
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(str(exc), str(path)) from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0].strip() != "vertex" or len(header) < 2:
            raise InputFormatError("expected header vertex,<measure>,...", str(path), 1)
        names, cols = [], {h.strip(): [] for h in header[1:]}
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise InputFormatError(
                    f"expected {len(header)} fields", str(path), reader.line_num
                )
            names.append(row[0].strip())
            for h, cell in zip(header[1:], row[1:]):
                try:
                    cols[h.strip()].append(float(cell))
                except ValueError:
                    raise InputFormatError(
                        f"bad number {cell!r}", str(path), reader.line_num
                    ) from None
    return names, cols


def _profile_from_long(path):
    """Rebuild vertex order and the uniform-margin matrix from a long-format CSV."""
    names, by = [], {}
    alphas: dict[str, None] = {}
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(str(exc), str(path)) from exc
    with fh:
        reader = csv.DictReader(fh)
        need = {"vertex", "alpha", "uniform_margin"}
        if not need <= set(reader.fieldnames or ()):
            raise InputFormatError("expected columns vertex,alpha,value,uniform_margin", str(path), 1)
        for row in reader:
            v = row["vertex"]
            if v not in by:
                names.append(v)
                by[v] = {}
            alphas.setdefault(row["alpha"])
            try:
                by[v][row["alpha"]] = float(row["uniform_margin"])
            except (TypeError, ValueError):
                raise InputFormatError("bad uniform_margin", str(path), reader.line_num) from None
    try:
        um = np.array([[by[v][a] for a in alphas] for v in names])
    except KeyError:
        raise InputFormatError("profile is missing (vertex, alpha) cells", str(path)) from None

    class _P:
        uniform_margin = um

    return names, _P


def cmd_analyze(args) -> int:
    report: dict = {}
    if args.prominence:
        names, cols = _read_columns(args.prominence)
        if args.index:
            inames, icols = _read_columns(args.index)
            lookup = dict(zip(inames, next(iter(icols.values()))))
            missing = [v for v in names if v not in lookup]
            if missing:
                raise L1Error(f"index file lacks vertices: {', '.join(missing[:10])}")
            cols["index"] = [lookup[v] for v in names]
        report["correlations"] = [
            {"x": a, "y": b, "r": float(fmt(res.r)), "n": res.n,
             "t": float(fmt(res.t_stat)), "p_one_sided": float(fmt(res.p_one_sided)),
             "direction": res.direction}
            for (a, b), res in margin_correlations(cols).items()
        ]
    if args.flows:
        table = parse_flow_csv(args.flows, _flow_filter(args))
        hubs = find_hubs(flow_totals(table), k=args.fence, method=args.quantile_method)
        report["hubs"] = {
            "incoming_outliers": list(hubs.incoming_outliers),
            "outgoing_outliers": list(hubs.outgoing_outliers),
            "hubs": list(hubs.hubs),
            "low_incoming_outliers": [hubs.regions[i] for i in hubs.incoming.low_outliers],
            "low_outgoing_outliers": [hubs.regions[i] for i in hubs.outgoing.low_outliers],
            "incoming_fences": [hubs.incoming.lower_fence, hubs.incoming.upper_fence],
            "outgoing_fences": [hubs.outgoing.lower_fence, hubs.outgoing.upper_fence],
        }
    if args.profile:
        names, prof = _profile_from_long(args.profile)
        report["screened"] = {
            "threshold": args.screen,
            "vertices": [names[i] for i in curve_variation_screen(prof, args.screen)],
        }
    if not report:
        raise L1Error("analyze needs at least one of --prominence, --flows, --profile")
    atomic_write(args.output, json.dumps(report, indent=2) + "\n")
    return 0


def _flow_filter(args) -> FlowFilter:
    return FlowFilter(
        age_min=args.age_min,
        age_max=args.age_max,
        hour_range=tuple(args.hour_range) if args.hour_range else None,
        days=frozenset(d.strip().lower() for d in args.days.split(",")) if args.days else None,
    )


def cmd_ingest(args) -> int:
    table = parse_flow_csv(args.flows, _flow_filter(args))
    g = build_flow_graph(table)
    write_graph(g, args.edges_out, args.vertices_out)
    report = check_strong_connectivity(g)
    print(f"regions: {g.n}")
    print(f"edges: {len(g.edges)}")
    print(f"total multiplicity: {fmt(g.total_multiplicity)}")
    if not report.strongly_connected:
        log.warning("flow graph is not strongly connected (%d components)", len(report.components))
    return 0


# --- parser ------------------------------------------------------------------

def _hour_range(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split("-"))
    except ValueError:
        raise argparse.ArgumentTypeError("hour range must look like 8-10") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="l1prominence", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp, cache=True):
        sp.add_argument("edges", help="edge CSV with header source,target,weight")
        sp.add_argument("--vertices", help="vertex CSV with header name,multiplicity")
        sp.add_argument("-j", "--jobs", type=int, default=1, help="worker threads")
        if cache:
            sp.add_argument("--distance-cache", help="binary distance matrix cache file")
        sp.add_argument("--tol", type=float, default=TIE_TOL, help="tie tolerance")

    def flow_filters(sp):
        sp.add_argument("--age-min", type=float)
        sp.add_argument("--age-max", type=float)
        sp.add_argument("--hour-range", type=_hour_range, help="half-open, e.g. 8-10")
        sp.add_argument("--days", help="comma-separated day labels to keep")

    sp = sub.add_parser("validate", help="check a graph and report S(G)")
    graph_args(sp, cache=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("global", help="global L1 prestige / centrality")
    graph_args(sp)
    sp.add_argument("--kind", choices=[*KINDS, "both"], default="both")
    sp.add_argument("--matrix-form", action="store_true")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_global)

    sp = sub.add_parser("multiscale", help="local measures over an alpha grid")
    graph_args(sp)
    sp.add_argument("--kind", choices=KINDS, default="prestige")
    sp.add_argument("--grid", type=parse_grid, help="a,b,c or start:stop:step")
    sp.add_argument("--screen", type=float, help="report vertices whose margin range exceeds this")
    sp.add_argument("--screen-output")
    sp.add_argument("--wide", help="also write a vertex x alpha matrix CSV here")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_multiscale)

    sp = sub.add_parser("neighborhood", help="order-alpha neighborhood of one vertex")
    graph_args(sp)
    sp.add_argument("--kind", choices=KINDS, default="prestige")
    sp.add_argument("--vertex", required=True)
    sp.add_argument("--alpha", type=parse_alpha, required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_neighborhood)

    sp = sub.add_parser("analyze", help="correlations, hubs and curve screening")
    sp.add_argument("--prominence", help="CSV vertex,<measure>,... (e.g. output of global)")
    sp.add_argument("--index", help="CSV vertex,<value> correlated against each measure")
    sp.add_argument("--flows", help="flow CSV for hub detection")
    sp.add_argument("--profile", help="long-format multiscale CSV")
    sp.add_argument("--screen", type=float, default=0.6)
    sp.add_argument("--fence", type=float, default=1.5, help="IQR multiplier")
    sp.add_argument("--quantile-method", default="linear")
    flow_filters(sp)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("ingest", help="build a flow graph from an OD table")
    sp.add_argument("flows", help="CSV with header origin,destination,count[,age,hour,day]")
    sp.add_argument("--edges-out", required=True)
    sp.add_argument("--vertices-out", required=True)
    flow_filters(sp)
    sp.set_defaults(func=cmd_ingest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (InputFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotStronglyConnected as exc:
        print(f"error: {exc}", file=sys.stderr)
        for i, comp in enumerate(exc.components, 1):
            print(f"  [{i}] " + ", ".join(comp), file=sys.stderr)
        return 1
    except L1Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
