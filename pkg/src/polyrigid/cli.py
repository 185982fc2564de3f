"""Command-line workbench: ``polyrigid curvature|solve|polygon|pack|audit``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import curvature as curv
from .audit import run_audit
from .energy import Flavor
from .errors import (
    DegenerateTriangle,
    DocumentError,
    InfeasibleSpec,
    InvalidMetric,
    LayoutInconsistent,
    NoCyclicPolygon,
    NonPositiveLength,
    NonPositiveRadius,
    PolyrigidError,
    SolverError,
)
from .io import document_from_metric, dumps, load_document, load_targets
from .packing import checked_layout, packing_complete, svg_document
from .polygons import cyclic_polygon_solve
from .solver import ProblemSpec, SolverOptions, solve
from .trig import Geometry

OK, AUDIT_FAILED, PARSE, BAD_SPEC, BAD_METRIC, NO_SOLUTION, NO_CONVERGENCE = range(7)

_GEOMETRY_FLAGS = {"e": Geometry.EUCLIDEAN, "h": Geometry.HYPERBOLIC, "s": Geometry.SPHERICAL}


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, DocumentError):
        return PARSE
    if isinstance(exc, (InvalidMetric, DegenerateTriangle, NonPositiveLength, NonPositiveRadius)):
        return BAD_METRIC
    if isinstance(exc, (NoCyclicPolygon, LayoutInconsistent)):
        return NO_SOLUTION
    if isinstance(exc, SolverError):
        return NO_CONVERGENCE
    return BAD_SPEC  # InvalidMesh, InfeasibleSpec and other precondition failures


def solver_flavor(flavor: str, geometry: Geometry) -> Flavor:
    """Map the command-line curvature name to the energy that prescribes it."""
    if flavor == "k":
        return Flavor.U_PACKING
    if flavor == "phi":
        return Flavor.V_PHI if geometry is Geometry.HYPERBOLIC else Flavor.W_PHI
    if geometry is Geometry.HYPERBOLIC:
        return Flavor.W_PSI
    if geometry is Geometry.EUCLIDEAN:
        return Flavor.W_PHI  # psi_h = phi_h in E^2
    raise InfeasibleSpec("psi curvature cannot be prescribed in S^2")


def _geometry(args, doc_geometry: Geometry | None = None) -> Geometry:
    flag = _GEOMETRY_FLAGS[args.geometry] if args.geometry else None
    if doc_geometry is None:
        return flag or Geometry.EUCLIDEAN
    if flag is not None and flag is not doc_geometry:
        raise InfeasibleSpec(f"--geometry {args.geometry} contradicts the document ({doc_geometry.value})")
    return doc_geometry


def _h(args, doc) -> float:
    return doc.h if args.h is None else args.h


def _write(path, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _table(header: tuple[str, str], rows) -> str:
    width = max([len(header[0])] + [len(k) for k, _ in rows])
    lines = [f"{header[0]:<{width}}  {header[1]}"]
    lines += [f"{k:<{width}}  {v:+.12f}" for k, v in rows]
    return "\n".join(lines)


# -- subcommands ------------------------------------------------------------------


def cmd_curvature(args) -> int:
    doc = load_document(args.mesh)
    g = _geometry(args, doc.geometry)
    h = _h(args, doc)
    surface = doc.surface()
    if args.flavor == "k":
        packing = doc.packing(surface)
        values = curv.k_h(surface, packing, h).as_mapping()
        metric = packing.polyhedral()
        label = "vertex"
    else:
        metric = doc.polyhedral(surface)
        fn = curv.phi_h if args.flavor == "phi" else curv.psi_h
        values = fn(surface, metric, h).as_mapping()
        label = "edge"
    delaunay = None if g is Geometry.SPHERICAL else curv.is_delaunay(surface, metric)
    report = {
        "geometry": g.value,
        "flavor": args.flavor,
        "h": float(h),
        "values": values,
        "delaunay": delaunay,
    }
    print(_table((label, f"{args.flavor}_h"), list(values.items())))
    print(f"delaunay: {'n/a' if delaunay is None else str(delaunay).lower()}")
    _write(args.out, dumps(report))
    return OK


def cmd_solve(args) -> int:
    doc = load_document(args.mesh)
    g = _geometry(args, doc.geometry)
    h = _h(args, doc)
    surface = doc.surface()
    flavor = solver_flavor(args.flavor, g)
    if flavor is Flavor.U_PACKING:
        if doc.radii is None:
            raise DocumentError("a packing solve needs boundary radii")
        keep = {str(v) for v in surface.boundary_vertices.tolist()}
        boundary = {k: v for k, v in doc.radii.items() if k in keep}
    else:
        if doc.metric is None:
            raise DocumentError("a solve needs boundary edge lengths")
        keep = set(surface.edge_labels(surface.boundary_edges))
        boundary = {k: v for k, v in doc.metric.items() if k in keep}
    targets = load_targets(args.targets)
    problem = ProblemSpec(surface, g, h, flavor, boundary, targets)
    report = solve(problem, SolverOptions(tol=args.tol))
    out = {"flavor": flavor.value, "h": float(h), **report.to_dict()}
    print(dumps(out), end="")
    if report.no_geometric_solution:
        print("no geometric solution: the minimiser lies on the degenerate boundary", file=sys.stderr)
        return NO_SOLUTION
    _write(args.out, document_from_metric(report.solution, h).to_json())
    return OK


def cmd_polygon(args) -> int:
    g = _geometry(args)
    poly = cyclic_polygon_solve(args.sides, g, tol=args.tol)
    text = dumps(poly.to_dict())
    print(text, end="")
    _write(args.out, text)
    return OK


def cmd_pack(args) -> int:
    doc = load_document(args.mesh)
    g = _geometry(args, doc.geometry)
    h = _h(args, doc)
    surface = doc.surface()
    if doc.radii is None:
        raise DocumentError("pack needs boundary radii")
    keep = {str(v) for v in surface.boundary_vertices.tolist()}
    boundary = {k: v for k, v in doc.radii.items() if k in keep}
    targets = load_targets(args.targets) if args.targets else None
    report = packing_complete(surface, boundary, g, h, targets, SolverOptions(tol=args.tol))
    out = {"radii": report.solution.as_mapping(), **report.to_dict()}
    if g is Geometry.EUCLIDEAN:
        try:
            lay = checked_layout(report.solution)
        except LayoutInconsistent as exc:
            print(dumps(out), end="")
            raise exc
        out["tangency_residual"] = lay.residual
        _write(args.svg, svg_document(lay, surface))
    elif args.svg:
        raise InfeasibleSpec("layouts are drawn for Euclidean packings only")
    print(dumps(out), end="")
    _write(args.out, document_from_metric(report.solution, h).to_json())
    return NO_SOLUTION if report.no_geometric_solution else OK


def cmd_audit(args) -> int:
    report = run_audit(args.seed, args.samples, inject_fault=args.inject_fault)
    for c in report["checks"]:
        mark = "PASS" if c["passed"] else "FAIL"
        print(f"{mark}  {c['name']:<50} worst={c['worst']:.3e} tol={c['tolerance']:.0e}")
    _write(args.out, dumps(report))
    return OK if report["passed"] else AUDIT_FAILED


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--h", type=float, default=None, help="curvature parameter (default: the document's h)")
    common.add_argument("--geometry", choices=sorted(_GEOMETRY_FLAGS), default=None)
    common.add_argument("--tol", type=float, default=1e-10, help="gradient-norm tolerance")
    common.add_argument("--out", default=None, help="write JSON output here")

    p = argparse.ArgumentParser(prog="polyrigid", description="Discrete curvature workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curvature", parents=[common], help="tabulate phi_h, psi_h or k_h")
    c.add_argument("mesh")
    c.add_argument("--flavor", choices=("phi", "psi", "k"), default="phi")
    c.set_defaults(run=cmd_curvature)

    s = sub.add_parser("solve", parents=[common], help="find the metric with prescribed curvature")
    s.add_argument("mesh")
    s.add_argument("targets")
    s.add_argument("--flavor", choices=("phi", "psi", "k"), default="phi")
    s.set_defaults(run=cmd_solve)

    g = sub.add_parser("polygon", parents=[common], help="cyclic polygon from side lengths")
    g.add_argument("sides", nargs="+", type=float)
    g.set_defaults(run=cmd_polygon, tol=1e-12)

    k = sub.add_parser("pack", parents=[common], help="complete a circle packing and lay it out")
    k.add_argument("mesh")
    k.add_argument("--targets", default=None)
    k.add_argument("--svg", default=None)
    k.set_defaults(run=cmd_pack)

    a = sub.add_parser("audit", parents=[common], help="randomised invariant audit")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--samples", type=int, default=1000)
    a.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    a.set_defaults(run=cmd_audit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return PARSE if exc.code else OK
    try:
        return args.run(args)
    except PolyrigidError as exc:
        print(f"polyrigid: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
