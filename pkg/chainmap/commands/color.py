"""
Comando `color`: colorazione pushforward del codominio tramite l'aggiunta della mappa
"""
import argparse
import logging
from typing import Any, Dict

from chainmap.commands.common import RunContext, summary
from chainmap.core.models import ColoringReport
from chainmap.services.apps import pushforward_coloring
from chainmap.services.exporters import write_json
from chainmap.services.parsers import read_map, read_palette

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("color", help="Colorazione pushforward del codominio")
    parser.add_argument("--map", dest="map_file", required=True, help="JSON di una mappa")
    parser.add_argument("--palette", default="hue", help="'hue' oppure CSV vertex,r,g,b")
    parser.add_argument("--rescale", action="store_true", help="Divide per il massimo invece di saturare")
    parser.add_argument("-o", "--output")
    parser.set_defaults(handler=handle_color)


def handle_color(args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
    g, doc = read_map(args.map_file)
    if not g.is_chain_map:
        logger.warning("Coloring through a matrix that is not a chain map")
    palette = read_palette(args.palette, g.domain.vertices)
    result = pushforward_coloring(g, palette, rescale=args.rescale)
    report = ColoringReport(
        domain=result.domain,
        raw=result.raw,
        clamped=result.clamped,
        intense=result.intense,
        rescaled=result.rescaled,
    )
    out = ctx.output(args.output, "coloring.json")
    manifest = ctx.manifest([args.map_file, args.palette], field=doc.field.value)
    write_json(out, report, manifest)
    return summary("color", {"coloring": out}, intense=result.intense, rescaled=result.rescaled)
