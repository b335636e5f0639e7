"""
Comando `hom`: parametrizzazione delle classi di omotopia [X, Y] con controllo di Künneth
"""
import argparse
import logging
from typing import Any, Dict

from chainmap.commands.common import RunContext, parse_int_list, summary
from chainmap.core.errors import ConsistencyError, UsageError
from chainmap.core.models import BPolicy, FieldName, HomotopyMode
from chainmap.services.algebra import field_for
from chainmap.services.exporters import parameterization_to_document, write_json
from chainmap.services.homcomplex import chain_map_generators
from chainmap.services.parsers import read_complex

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("hom", help="Generatori di H_0(Hom) e omotopie")
    parser.add_argument("--domain", required=True, help="JSON del complesso dominio")
    parser.add_argument("--codomain", required=True, help="JSON del complesso codominio")
    parser.add_argument("--field", choices=[f.value for f in FieldName], default=FieldName.Q.value)
    parser.add_argument("--b", dest="b_policy", choices=[b.value for b in BPolicy], default=BPolicy.ALL_ONES.value)
    parser.add_argument("--b-dims", help="Dimensioni mantenute con --b by_dimension, es. 0,1")
    parser.add_argument("--homotopies", choices=[m.value for m in HomotopyMode], default=HomotopyMode.RAW.value)
    parser.add_argument("-o", "--output")
    parser.set_defaults(handler=handle_hom)


def handle_hom(args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
    dims = parse_int_list(args.b_dims)
    if args.b_policy == BPolicy.BY_DIMENSION.value and dims is None:
        raise UsageError("--b by_dimension needs --b-dims")

    X = read_complex(args.domain)
    Y = read_complex(args.codomain)
    field = field_for(args.field)
    try:
        p = chain_map_generators(X, Y, field, BPolicy(args.b_policy), dims, HomotopyMode(args.homotopies))
    except ConsistencyError as e:
        logger.error(f"Kunneth cross-check failed for {args.domain} -> {args.codomain}: {e}")
        raise

    out = ctx.output(args.output, f"hom_{X.name or 'X'}_{Y.name or 'Y'}.json")
    manifest = ctx.manifest([args.domain, args.codomain], field=args.field)
    write_json(out, parameterization_to_document(p, manifest))
    return summary(
        "hom",
        {"parameterization": out},
        field=args.field,
        generators=len(p.generators),
        generator_degrees=p.generator_degrees,
        homotopies=len(p.raw_homotopies),
        independent_homotopies=len(p.reduced_indices),
        kunneth_rank=p.kunneth,
        hom_h0_rank=p.hom_rank,
    )
