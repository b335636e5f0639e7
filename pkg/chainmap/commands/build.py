"""
Comando `build`: complessi modello, Vietoris-Rips, lazy-witness e quozienti mapper
"""
import argparse
import logging
from typing import Any, Dict

import pandas as pd

from chainmap.commands.common import RunContext, sibling, summary
from chainmap.core.config import settings
from chainmap.core.models import MapperFilter, ModelName
from chainmap.services.apps import coordinate_filter, eccentricity_filter, mapper_1d, quotient_local_maxima
from chainmap.services.complexes import (
    SimplicialComplex, betti_numbers, lazy_witness, maxmin_landmarks, model_complex, vietoris_rips,
)
from chainmap.services.exporters import complex_to_document, mapper_graph_to_document, write_csv, write_json
from chainmap.services.parsers import read_point_cloud

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("build", help="Costruisce un complesso simpliciale")
    kinds = parser.add_subparsers(dest="kind", required=True)

    model = kinds.add_parser("model", help="Complesso modello")
    model.add_argument("--name", required=True, choices=[m.value for m in ModelName])
    model.add_argument("--n", type=int, help="Numero di vertici per n_gon")
    model.add_argument("-o", "--output")

    rips = kinds.add_parser("rips", help="Vietoris-Rips a scala fissa")
    rips.add_argument("--input", required=True, help="CSV della nuvola di punti")
    rips.add_argument("--rmax", type=float, required=True)
    rips.add_argument("--maxdim", type=int, default=2)
    rips.add_argument("-o", "--output")

    witness = kinds.add_parser("witness", help="Lazy-witness su landmark max-min")
    witness.add_argument("--input", required=True)
    witness.add_argument("--landmarks", type=int, required=True, help="Numero di landmark")
    witness.add_argument("--first", type=int, help="Primo landmark (altrimenti estratto dal seme)")
    witness.add_argument("--nu", type=int, default=settings.witness_nu)
    witness.add_argument("--rmax", type=float, default=float("inf"))
    witness.add_argument("--maxdim", type=int, default=2)
    witness.add_argument("-o", "--output")

    mapper = kinds.add_parser("mapper", help="Grafo mapper 1-d e quoziente sui massimi locali")
    mapper.add_argument("--input", required=True)
    mapper.add_argument("--filter", choices=[f.value for f in MapperFilter], default=MapperFilter.COORDINATE.value)
    mapper.add_argument("--axis", type=int, default=0)
    mapper.add_argument("--intervals", type=int, default=10)
    mapper.add_argument("--overlap", type=float, default=0.2)
    mapper.add_argument("--link", type=float, required=True, help="Soglia single-linkage")
    mapper.add_argument("--no-quotient", action="store_true", help="Scrive il grafo come 1-complesso")
    mapper.add_argument("-o", "--output")

    parser.set_defaults(handler=handle_build)


def _describe(k: SimplicialComplex) -> Dict[str, Any]:
    return {
        "name": k.name,
        "counts": [k.count(d) for d in range(k.dimension + 1)],
        "betti": betti_numbers(k),
    }


def handle_build(args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
    outputs = {}
    extra: Dict[str, Any] = {}
    out = ctx.output(args.output, f"{args.name if args.kind == 'model' else args.kind}.json")

    if args.kind == "model":
        k = model_complex(args.name, args.n)
        inputs = []
    elif args.kind == "rips":
        cloud = read_point_cloud(args.input)
        k = vietoris_rips(cloud, args.rmax, args.maxdim)
        inputs = [args.input]
    elif args.kind == "witness":
        cloud = read_point_cloud(args.input)
        landmarks = maxmin_landmarks(cloud, args.landmarks, ctx.seed, first=args.first)
        k = lazy_witness(cloud, landmarks, args.nu, args.rmax, args.maxdim)
        inputs = [args.input]
        frame = pd.DataFrame({"vertex": range(len(landmarks)), "point": landmarks})
        outputs["landmarks"] = write_csv(sibling(out, "landmarks.csv"), frame, ctx.manifest(inputs))
        extra["landmarks"] = landmarks
    else:
        cloud = read_point_cloud(args.input)
        values = coordinate_filter(cloud, args.axis) if args.filter == MapperFilter.COORDINATE.value else eccentricity_filter(cloud)
        graph = mapper_1d(cloud, values, args.intervals, args.overlap, args.link)
        inputs = [args.input]
        outputs["graph"] = write_json(
            sibling(out, "graph.json"),
            mapper_graph_to_document(graph),
            ctx.manifest(inputs),
        )
        if args.no_quotient:
            k = SimplicialComplex([(n.id,) for n in graph.nodes] + list(graph.edges), name="mapper")
        else:
            k = quotient_local_maxima(graph)
        extra["mapper_nodes"] = len(graph.nodes)

    outputs["complex"] = write_json(out, complex_to_document(k), ctx.manifest(inputs))
    logger.info(f"Built {args.kind} complex {k!r}")
    return summary("build", outputs, **_describe(k), **extra)
