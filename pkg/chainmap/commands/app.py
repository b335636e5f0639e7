"""
Comando `app`: coordinate circolari, massimizzazione della densità, confronto di grafi mapper
"""
import argparse
import logging
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from chainmap.commands.common import RunContext, sibling, summary, to_parameterization_coordinates
from chainmap.core.config import settings
from chainmap.core.errors import InputDataError, UsageError
from chainmap.core.models import (
    CircleReport, CircleStart, CircleVariant, DensityReport, FieldName, MapperFilter,
)
from chainmap.services.algebra import QQ
from chainmap.services.apps import (
    TWO_PI, CircleModel, DensityEstimate, coordinate_filter, eccentricity_filter,
    mapper_match, maximize_density, minimize_circle_distortion,
)
from chainmap.services.complexes import PointCloud, SimplicialComplex, model_complex
from chainmap.services.exporters import (
    complex_to_document, map_to_document, mapper_graph_to_document,
    parameterization_to_document, write_csv, write_json,
)
from chainmap.services.homcomplex import MapParameterization, chain_map_generators, evaluate_map
from chainmap.services.optimize import bisimplicial_penalty, norm_objective
from chainmap.services.parsers import read_complex, read_parameterization, read_point_cloud

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("app", help="Applicazioni: cerchio, densità, mapper")
    apps = parser.add_subparsers(dest="app", required=True)

    circle = apps.add_parser("circle-coords", help="Coordinate circolari per minima distorsione")
    _add_pair_arguments(circle)
    circle.add_argument("--n", type=int, help="Costruisce il codominio n-gono invece di leggerlo")
    circle.add_argument("--start", choices=[s.value for s in CircleStart], default=CircleStart.NEAREST.value)
    circle.add_argument("--variant", choices=[v.value for v in CircleVariant], default=CircleVariant.LITERAL.value)
    circle.add_argument("--restarts", type=int, default=0)
    circle.add_argument("--max-iter", type=int)
    circle.add_argument("-o", "--output")

    density = apps.add_parser("density", help="Mappa verso un complesso che massimizza una KDE")
    _add_pair_arguments(density)
    density.add_argument("--samples", help="CSV dei campioni della KDE (default: geometria del codominio)")
    density.add_argument("--bandwidth", type=float, default=settings.density_bandwidth)
    density.add_argument("--restarts", type=int)
    density.add_argument("--max-iter", type=int)
    density.add_argument("-o", "--output")

    mapper = apps.add_parser("mapper-match", help="Grafi mapper, quozienti e mappa tra i quozienti")
    mapper.add_argument("--input-a", required=True)
    mapper.add_argument("--input-b", required=True)
    mapper.add_argument("--filter", choices=[f.value for f in MapperFilter], default=MapperFilter.COORDINATE.value)
    mapper.add_argument("--axis", type=int, default=0)
    mapper.add_argument("--intervals", type=int, default=10)
    mapper.add_argument("--overlap", type=float, default=0.2)
    mapper.add_argument("--link", type=float, required=True)
    mapper.add_argument("-o", "--output")

    parser.set_defaults(handler=handle_app)


def _add_pair_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--parameterization", help="JSON scritto da `hom` (alternativo a --domain/--codomain)")
    parser.add_argument("--domain")
    parser.add_argument("--codomain")


def _load_pair(args: argparse.Namespace, codomain: Optional[SimplicialComplex] = None) -> MapParameterization:
    """Parametrizzazione da file, oppure calcolata sui razionali da dominio e codominio"""
    if args.parameterization:
        p = read_parameterization(args.parameterization)
        if p.field.name == FieldName.Z2:
            raise UsageError("Applications need q or real coefficients, got z2")
        return p
    if not args.domain or (codomain is None and not args.codomain):
        raise UsageError("Give --parameterization or both --domain and --codomain")
    X = read_complex(args.domain)
    Y = codomain if codomain is not None else read_complex(args.codomain)
    return chain_map_generators(X, Y, QQ)


# ============================================================================
# SOTTOCOMANDI
# ============================================================================

def _circle(args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
    model = None
    codomain = None
    if args.n is not None:
        codomain = model_complex("n_gon", args.n)
        model = CircleModel(args.n)
    p = _load_pair(args, codomain)
    if args.n is not None:
        given = p.codomain if args.parameterization else (read_complex(args.codomain) if args.codomain else codomain)
        if given.count(0) != args.n:
            raise InputDataError(f"--n {args.n} disagrees with the {given.count(0)}-vertex codomain")
    has_geometry = all(v in p.domain.geometry for v in p.domain.vertices)
    if args.start == CircleStart.NEAREST.value and not has_geometry:
        raise InputDataError("The nearest start needs domain geometry; use --start zero or lp")
    result = minimize_circle_distortion(
        p,
        model,
        seed=ctx.seed,
        start=args.start,
        variant=args.variant,
        restarts=args.restarts,
        max_iter=args.max_iter,
    )
    X = p.domain
    frame = pd.DataFrame({"vertex": X.vertices, "angle": result.angles})
    if has_geometry:
        coords = X.coordinates()[:, :2]
        coords = coords - coords.mean(axis=0)
        frame["domain_angle"] = np.mod(np.arctan2(coords[:, 1], coords[:, 0]), TWO_PI)

    out = ctx.output(args.output, "circle.json")
    inputs = [args.parameterization, args.domain, args.codomain]
    manifest = ctx.manifest(inputs, field=p.field.name.value)
    report = CircleReport(
        n=model.n if model else p.codomain.count(0),
        variant=CircleVariant(args.variant),
        start=result.start,
        initial_distortion=result.initial_distortion,
        final_distortion=result.final_distortion,
        winding_number=result.winding_number,
    )
    g = result.map
    coefficients = to_parameterization_coordinates(p, result.coefficients)
    outputs = {
        "angles": write_csv(sibling(out, "angles.csv"), frame, manifest),
        "map": write_json(
            sibling(out, "map.json"),
            map_to_document(g, "circle-coords", coefficients, bisimplicial_penalty(g).value, norm_objective(g), manifest),
        ),
        "report": write_json(out, report, manifest),
    }
    return summary("app circle-coords", outputs, report=report)


def _density(args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
    p = _load_pair(args)
    if args.samples:
        samples = read_point_cloud(args.samples)
    else:
        try:
            samples = PointCloud(p.codomain.coordinates())
        except ValueError as e:
            raise InputDataError(f"Density needs --samples or codomain geometry: {e}") from e
    estimate = DensityEstimate(samples, args.bandwidth)
    result = maximize_density(p, estimate, seed=ctx.seed, restarts=args.restarts, max_iter=args.max_iter)

    image = np.asarray(result.image)
    frame = pd.DataFrame(image, columns=[f"x{i}" for i in range(image.shape[1])])
    frame.insert(0, "vertex", p.domain.vertices)

    out = ctx.output(args.output, "density.json")
    inputs = [args.parameterization, args.domain, args.codomain, args.samples]
    manifest = ctx.manifest(inputs, field=p.field.name.value)
    g = evaluate_map(result.parameterization, result.coefficients)
    report = DensityReport(
        bandwidth=args.bandwidth,
        initial_objective=result.initial_objective,
        final_objective=result.final_objective,
        restarts=result.restarts,
    )
    coefficients = to_parameterization_coordinates(p, result.coefficients)
    outputs = {
        "image": write_csv(sibling(out, "image.csv"), frame, manifest),
        "map": write_json(
            sibling(out, "map.json"),
            map_to_document(g, "density", coefficients, bisimplicial_penalty(g).value, norm_objective(g), manifest),
        ),
        "report": write_json(out, report, manifest),
    }
    return summary("app density", outputs, report=report)


def _mapper(args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
    points_a = read_point_cloud(args.input_a)
    points_b = read_point_cloud(args.input_b)
    if args.filter == MapperFilter.COORDINATE.value:
        filter_a, filter_b = coordinate_filter(points_a, args.axis), coordinate_filter(points_b, args.axis)
    else:
        filter_a, filter_b = eccentricity_filter(points_a), eccentricity_filter(points_b)
    match = mapper_match(
        points_a, points_b, filter_a, filter_b,
        args.intervals, args.overlap, args.link, seed=ctx.seed,
    )

    out = ctx.output(args.output, "mapper_match.json")
    manifest = ctx.manifest([args.input_a, args.input_b], field=FieldName.Q.value)
    g = match.solution.map
    coefficients = to_parameterization_coordinates(match.parameterization, match.solution.coefficients)
    outputs = {
        "graph_a": write_json(sibling(out, "graph_a.json"), mapper_graph_to_document(match.graph_a), manifest),
        "graph_b": write_json(sibling(out, "graph_b.json"), mapper_graph_to_document(match.graph_b), manifest),
        "quotient_a": write_json(sibling(out, "quotient_a.json"), complex_to_document(match.quotient_a), manifest),
        "quotient_b": write_json(sibling(out, "quotient_b.json"), complex_to_document(match.quotient_b), manifest),
        "parameterization": write_json(
            sibling(out, "hom.json"), parameterization_to_document(match.parameterization, manifest)
        ),
        "map": write_json(
            out,
            map_to_document(g, "mapper-match", coefficients, bisimplicial_penalty(g).value, norm_objective(g), manifest),
        ),
    }
    return summary(
        "app mapper-match",
        outputs,
        nodes=[len(match.graph_a.nodes), len(match.graph_b.nodes)],
        quotient_vertices=[match.quotient_a.count(0), match.quotient_b.count(0)],
        generators=len(match.parameterization.generators),
        objective=norm_objective(g),
    )


def handle_app(args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
    if args.app == "circle-coords":
        return _circle(args, ctx)
    if args.app == "density":
        return _density(args, ctx)
    return _mapper(args, ctx)
