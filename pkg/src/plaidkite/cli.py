"""Command-line interface.

Subcommands
-----------
plaid        write the plaid polygons of a block (data + figures)
graph        write the arithmetic-graph edge list (data + figures)
overlay      write both layers on one canvas
verify       run a verification suite: partitions | intertwining |
             crossings | pixellation | quasi-iso | oracle
prove        run the edge-crossing prover and write its report
oracle-diff  diff the dynamical graph against the PET prediction

Outputs are deterministic: identical inputs produce identical bytes.
The default output directory is taken from $PLAIDKITE_OUT (falling back
to the current directory).  Every report is line-oriented text; figures
(PNG via matplotlib, and SVG 1.1 with ``--svg``) are rendered alongside
the delimited output.  Exit codes: 0 success, 1 verification failure,
2 invalid parameter.
"""

import argparse
import os
import sys
from fractions import Fraction

from .params import make_param, even_rationals, OddProduct, NotCoprime, \
    OutOfRange
from . import plaid, graph, intertwine, quasi, billiards, render

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

SUITES = ("partitions", "intertwining", "crossings", "pixellation",
          "quasi-iso", "oracle")


def _parser():
    top = argparse.ArgumentParser(prog="plaidkite", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, window_default=None):
        p.add_argument("--p", type=int, default=2, help="numerator")
        p.add_argument("--q", type=int, default=9, help="denominator")
        p.add_argument("--window", type=int, default=window_default,
                       help="block size / half-width (default: p+q)")
        p.add_argument("--out", default=None,
                       help="output directory (default: $PLAIDKITE_OUT or .)")
        p.add_argument("--svg", action="store_true",
                       help="also render an SVG 1.1 figure")
        p.add_argument("--paper-units", action="store_true",
                       help="graph output in raw Z^2 coordinates instead "
                            "of the normalized plane")
        p.add_argument("--jobs", type=int, default=1,
                       help="parallel worker processes where supported")
        return p

    common(sub.add_parser("plaid", help="plaid polygons of one block"))
    common(sub.add_parser("graph", help="arithmetic-graph edge list"))
    common(sub.add_parser("overlay", help="plaid + graph overlay"))
    v = common(sub.add_parser("verify", help="run a verification suite"))
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--qmax", type=int, default=30,
                   help="sweep bound for the intertwining suite")
    common(sub.add_parser("prove", help="edge-crossing prover report"))
    d = common(sub.add_parser("oracle-diff",
                              help="dynamical vs PET graph diff"))
    d.set_defaults(window=12)
    return top


def _outdir(args):
    path = args.out or os.environ.get("PLAIDKITE_OUT") or "."
    os.makedirs(path, exist_ok=True)
    return path


def _param(args):
    return make_param(args.p, args.q)


def _window(args, param):
    return args.window if args.window else param.omega


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)
    print(f"wrote {path}")


# ---------------------------------------------------------------------------
# generate commands

def _plaid_data(param, region):
    comps = plaid.plaid_polygons(param, region)
    lines = ["# plaid polygons: component x y (connector midpoints, "
             "in traversal order)"]
    for k, comp in enumerate(comps):
        for x, y in comp:
            lines.append(f"{k} {x} {y}")
    return comps, "\n".join(lines) + "\n"


def _graph_data(param, region, paper_units=False):
    fam = graph.build_graph(param, region)
    lines = ["# graph vertices: (m,n) (i+,j+) (i-,j-) x y"]
    for m in range(region[0], region[2]):
        for n in range(region[1], region[3]):
            asg = graph.edge_assignment(param, (m, n))
            if paper_units:
                x, y = Fraction(m), Fraction(n)
            else:
                x, y = fam.vertices[(m, n)]
            lines.append(f"({m},{n}) ({asg.plus[0]},{asg.plus[1]}) "
                         f"({asg.minus[0]},{asg.minus[1]}) {x} {y}")
    return fam, "\n".join(lines) + "\n"


def cmd_plaid(args):
    param = _param(args)
    w = _window(args, param)
    region = (0, 0, w, w)
    out = _outdir(args)
    comps, data = _plaid_data(param, region)
    _write(os.path.join(out, f"plaid_{param.p}_{param.q}.txt"), data)
    spec = render.RenderSpec(param, region, layers=("plaid",))
    render.render_png(spec, os.path.join(out, f"plaid_{param.p}_{param.q}.png"),
                      plaid_components=comps)
    if args.svg:
        _write(os.path.join(out, f"plaid_{param.p}_{param.q}.svg"),
               render.render_svg(spec, plaid_components=comps))
    return EXIT_OK


def cmd_graph(args):
    param = _param(args)
    w = _window(args, param)
    out = _outdir(args)
    region = (-w, -w, w, w)
    fam, data = _graph_data(param, region, args.paper_units)
    _write(os.path.join(out, f"graph_{param.p}_{param.q}.txt"), data)
    if args.paper_units:
        fam = graph.PolygonFamily(
            {mn: (Fraction(mn[0]), Fraction(mn[1])) for mn in fam.vertices},
            fam.edges, fam.components)
        box = (-w, -w, w, w)
    else:
        xs = [v[0] for v in fam.vertices.values()]
        ys = [v[1] for v in fam.vertices.values()]
        import math
        box = (math.floor(min(xs)), math.floor(min(ys)),
               math.ceil(max(xs)) + 1, math.ceil(max(ys)) + 1)
    spec = render.RenderSpec(param, box, layers=("graph", "grid-points"))
    render.render_png(spec, os.path.join(out, f"graph_{param.p}_{param.q}.png"),
                      graph_family=fam)
    if args.svg:
        _write(os.path.join(out, f"graph_{param.p}_{param.q}.svg"),
               render.render_svg(spec, graph_family=fam))
    return EXIT_OK


def cmd_overlay(args):
    param = _param(args)
    w = _window(args, param)
    out = _outdir(args)
    region = (0, 0, w, w)
    comps, pdata = _plaid_data(param, region)
    grid_pts = graph.graph_grid(param, region)
    mns = [mn for mn, _, _ in grid_pts]
    if mns:
        m0 = min(m for m, _ in mns) - 1
        n0 = min(n for _, n in mns) - 1
        m1 = max(m for m, _ in mns) + 2
        n1 = max(n for _, n in mns) + 2
    else:
        m0 = n0 = 0
        m1 = n1 = 1
    fam, gdata = _graph_data(param, (m0, n0, m1, n1), False)
    _write(os.path.join(out, f"overlay_plaid_{param.p}_{param.q}.txt"), pdata)
    _write(os.path.join(out, f"overlay_graph_{param.p}_{param.q}.txt"), gdata)
    spec = render.RenderSpec(param, region,
                             layers=("plaid", "graph", "grid-points"))
    render.render_png(spec,
                      os.path.join(out, f"overlay_{param.p}_{param.q}.png"),
                      plaid_components=comps, graph_family=fam)
    if args.svg:
        _write(os.path.join(out, f"overlay_{param.p}_{param.q}.svg"),
               render.render_svg(spec, plaid_components=comps,
                                 graph_family=fam))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites

class _Report:
    def __init__(self, suite):
        self.suite = suite
        self.lines = []
        self.ok = True

    def check(self, name, value, expected):
        good = value == expected
        self.ok = self.ok and good
        self.lines.append(f"{name} {value} {expected} "
                          f"{'PASS' if good else 'FAIL'}")

    def text(self):
        status = "PASS" if self.ok else "FAIL"
        return "\n".join(self.lines +
                         [f"# suite {self.suite} {status}"]) + "\n"


def _suite_partitions(args, rep):
    cells = plaid.full_partition()
    rep.check("plaid-cells", len(cells), 26)
    vol = sum(c.geometry.volume() for c in cells)
    rep.check("plaid-volume", vol, 8)
    plus, minus = graph.graph_partitions()
    rep.check("graph-plus-cells", len(plus), 14)
    rep.check("graph-minus-cells", len(minus), 14)
    rep.check("graph-plus-volume",
              sum(c.geometry.volume() for c in plus), Fraction(7, 3))
    rep.check("graph-minus-volume",
              sum(c.geometry.volume() for c in minus), Fraction(7, 3))
    rtp = plaid.triple_partition()
    rep.check("rtp-cells", len(rtp), 218)
    rep.check("rtp-volume", sum(c.geometry.volume() for c in rtp), 8)
    rep.check("rtp-integral",
              all(all(v % 1 == 0 for vert in c.geometry.rescaled(60).vertices
                      for v in vert) for c in rtp), True)


def _sweep_one(pq):
    p, q = pq
    param = make_param(p, q)
    w = param.omega
    return (p, q, len(intertwine.intertwining_check(param, (0, 0, w, w))))


def _suite_intertwining(args, rep):
    params = [(pr.p, pr.q) for pr in even_rationals(args.qmax)]
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_sweep_one, params))
    else:
        results = [_sweep_one(pq) for pq in params]
    for p, q, nviol in sorted(results):
        rep.check(f"intertwine-{p}/{q}", nviol, 0)


def _suite_crossings(args, rep):
    report = intertwine.prove_all()
    rep.check("problems", len(report.problems), 462)
    rep.check("solved", len(report.solved), 416)
    rep.check("recalcitrant", len(report.recalcitrant), 46)
    catch = intertwine.recalcitrant_analysis()
    rep.check("catch-cases",
              tuple(catch.case_counts[i] for i in (1, 2, 3, 4)),
              (9, 7, 3, 4))
    rep.check("errant", len(catch.errant), 0)


def _suite_pixellation(args, rep):
    param = _param(args)
    w = _window(args, param)
    cls, anomalies = quasi.scan_region(param, (0, 0, w, w))
    for name, items in sorted(anomalies.items()):
        rep.check(f"anomaly-{name}", len(items), 0)
    chains = quasi.linked_chains(param, (0, 0, w, w))
    rep.check("chains-bound", all(c.bound for c in chains), True)


def _suite_quasi_iso(args, rep):
    param = _param(args)
    w = _window(args, param)
    matching = quasi.build_homeomorphism(param, (0, 0, w, w))
    rep.check("displacement-le-2", matching.within_two, True)
    rep.check("components-paired", len(matching.pairs) > 0, True)


def _suite_oracle(args, rep):
    param = _param(args)
    w = args.window or 12
    missing, extra, _ = billiards.oracle_diff(param, w)
    rep.check("missing-edges", len(missing), 0)
    rep.check("extra-edges", len(extra), 0)


def cmd_verify(args):
    rep = _Report(args.suite)
    {"partitions": _suite_partitions,
     "intertwining": _suite_intertwining,
     "crossings": _suite_crossings,
     "pixellation": _suite_pixellation,
     "quasi-iso": _suite_quasi_iso,
     "oracle": _suite_oracle}[args.suite](args, rep)
    text = rep.text()
    sys.stdout.write(text)
    out = _outdir(args)
    _write(os.path.join(out, f"verify_{args.suite}.txt"), text)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_prove(args):
    report = intertwine.prove_all()
    text = "\n".join(report.lines()) + "\n"
    sys.stdout.write(text.rsplit("\n", 2)[-2] + "\n")
    out = _outdir(args)
    _write(os.path.join(out, "proof_report.txt"), text)
    ok = len(report.solved) == 416 and len(report.recalcitrant) == 46
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle_diff(args):
    param = _param(args)
    w = args.window or 12
    missing, extra, isolated = billiards.oracle_diff(param, w)
    lines = [f"# oracle-diff p/q={param.p}/{param.q} window={w}"]
    for e in missing:
        lines.append(f"missing {e[0]} {e[1]}")
    for e in extra:
        lines.append(f"extra {e[0]} {e[1]}")
    lines.append(f"# missing {len(missing)} extra {len(extra)} "
                 f"isolated {len(isolated)}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    out = _outdir(args)
    _write(os.path.join(out, f"oracle_diff_{param.p}_{param.q}.txt"), text)
    return EXIT_OK if not missing and not extra else EXIT_FAIL


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        handler = {"plaid": cmd_plaid, "graph": cmd_graph,
                   "overlay": cmd_overlay, "verify": cmd_verify,
                   "prove": cmd_prove,
                   "oracle-diff": cmd_oracle_diff}[args.command]
        return handler(args)
    except (OddProduct, NotCoprime, OutOfRange) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
