"""
Comando `map`: selezione di una mappa concreta nella classe di omotopia

Metodi continui (lp-random-vertex, aw) su q o real; metodi combinatori (enumerate, anneal,
greedy, random-walk) su z2.
"""
import argparse
import logging
from typing import Any, Dict, List, Optional, Tuple

from chainmap.commands.common import RunContext, sibling, summary, to_parameterization_coordinates
from chainmap.core.config import settings
from chainmap.core.errors import UsageError
from chainmap.core.models import (
    AWReport, FieldName, HistogramReport, HomotopyMode, LPReport, MapMethod, SearchReport, Z2_METHODS,
)
from chainmap.services.exporters import map_to_document, write_json, write_map_csv
from chainmap.services.homcomplex import ChainMapMatrix, MapParameterization, evaluate_map
from chainmap.services.optimize import (
    bisimplicial_penalty, enumerate_z2, greedy_search, minimize_aw, norm_objective, random_vertex,
    random_walk, round_map, simulated_annealing, solve_norm_lp, sparse_vertex_search, sparsity_score,
)
from chainmap.services.parsers import read_coefficients, read_parameterization

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("map", help="Seleziona una mappa di catene nella classe")
    parser.add_argument("--parameterization", required=True, help="JSON scritto da `hom`")
    parser.add_argument("--method", required=True, choices=[m.value for m in MapMethod])
    parser.add_argument("--start", help="Coefficienti iniziali: lista a virgole o CSV")
    parser.add_argument("-o", "--output")

    lp = parser.add_argument_group("lp-random-vertex")
    lp.add_argument("--exact", action="store_true", help="Simplesso su razionali esatti")
    lp.add_argument("--backend", choices=["auto", "simplex", "highs"])
    lp.add_argument("--max-restarts", type=int, help="Vertici estratti per la ricerca di sparsità")
    lp.add_argument("--target-score", type=float, help="Sparsity score che interrompe la ricerca")

    aw = parser.add_argument_group("aw")
    aw.add_argument("--restarts", type=int)
    aw.add_argument("--literal", action="store_true", help="Diagonale di Alexander-Whitney ordinata")
    aw.add_argument("--max-iter", type=int)
    aw.add_argument("--round", type=float, nargs="?", const=settings.round_threshold,
                    help="Arrotonda la mappa a interi con la soglia data")

    z2 = parser.add_argument_group("z2")
    z2.add_argument("--iterations", type=int)
    z2.add_argument("--t0", type=float)
    z2.add_argument("--cooling", type=float)
    z2.add_argument("--steps", type=int)
    z2.add_argument("--cap", type=int, help="Massimo numero di omotopie per enumerate")

    parser.set_defaults(handler=handle_map)


def check_method(method: MapMethod, field: FieldName, exact: bool = False) -> None:
    """
    Raises:
        UsageError: metodo incompatibile con il campo della parametrizzazione
    """
    if method in Z2_METHODS and field != FieldName.Z2:
        raise UsageError(f"Method {method.value} needs a z2 parameterization, got {field.value}")
    if method not in Z2_METHODS and field == FieldName.Z2:
        raise UsageError(f"Method {method.value} needs q or real coefficients, got z2")
    if exact and field != FieldName.Q:
        raise UsageError("--exact needs a rational (q) parameterization")


# ============================================================================
# METODI
# ============================================================================

def _run_lp(args: argparse.Namespace, p: MapParameterization, seed: int) -> Tuple[ChainMapMatrix, List[Any], Dict[str, Any]]:
    reduced = p.with_mode(HomotopyMode.REDUCED)
    if args.max_restarts is not None or args.target_score is not None:
        if args.exact:
            raise UsageError("--exact is not available for the sparsity search")
        search = sparse_vertex_search(p, args.max_restarts, args.target_score, seed=seed, backend=args.backend)
        solution, optimum, scores = search.best, search.optimum, search.scores
    else:
        first = solve_norm_lp(reduced, exact=args.exact, backend=args.backend)
        optimum = first.result.value
        solution = random_vertex(p, seed=seed, exact=args.exact, backend=args.backend, optimum=optimum)
        scores = []
    g = solution.map
    report = LPReport(
        status=solution.result.status,
        optimum=float(optimum),
        objective_of_map=norm_objective(g),
        sparsity_score=sparsity_score(g) if not g.g.is_zero() else None,
        backend=solution.result.backend,
        restarts=max(1, len(scores)),
        scores=scores,
    )
    return g, to_parameterization_coordinates(p, solution.coefficients), {"lp": report}


def _run_aw(args: argparse.Namespace, p: MapParameterization, seed: int) -> Tuple[ChainMapMatrix, List[Any], Dict[str, Any]]:
    start = read_coefficients(args.start, len(p.homotopies))
    result = minimize_aw(
        p,
        start=None if start is None else [float(x) for x in start],
        seed=seed,
        restarts=args.restarts,
        symmetric=not args.literal,
        max_iter=args.max_iter,
    )
    g = evaluate_map(p, result.coefficients)
    report = AWReport(
        initial_loss=result.initial_loss,
        final_loss=result.loss,
        restarts=result.restarts,
        trace=result.trace,
    )
    extra: Dict[str, Any] = {"aw": report}
    if args.round is not None:
        rounded = round_map(g, args.round)
        report.rounded_penalty = bisimplicial_penalty(rounded).value
        report.rounded_is_chain_map = rounded.is_chain_map
        extra["rounded"] = rounded
    return g, result.coefficients, extra


def _run_z2(args: argparse.Namespace, p: MapParameterization, seed: int) -> Tuple[ChainMapMatrix, List[Any], Dict[str, Any]]:
    method = MapMethod(args.method)
    if method == MapMethod.ENUMERATE:
        result = enumerate_z2(p, cap=args.cap)
        best = [int(bit) for bit in result.minimizers[0]] if result.minimizers else []
        report = HistogramReport(
            total=result.total,
            min_value=result.min_value,
            minimizers=result.minimizers,
            histogram={str(k): v for k, v in result.histogram.items()},
            distinct_minimizing_maps=result.distinct_minimizing_maps,
        )
        return evaluate_map(p, best), best, {"histogram": report}

    start = read_coefficients(args.start, len(p.homotopies))
    if method == MapMethod.ANNEAL:
        trace = simulated_annealing(p, iterations=args.iterations, t0=args.t0, cooling=args.cooling, seed=seed, start=start)
    elif method == MapMethod.GREEDY:
        trace = greedy_search(p, seed=seed, restarts=args.restarts, start=start)
    else:
        trace = random_walk(p, steps=args.steps, seed=seed, start=start)
    report = SearchReport(
        method=trace.method,
        iterations=trace.iterations,
        best_value=trace.best_value,
        best_coefficients=trace.best_coefficients,
        seed=trace.seed,
        schedule=trace.schedule,
        history=trace.history,
    )
    return evaluate_map(p, trace.best_coefficients), trace.best_coefficients, {"search": report}


def handle_map(args: argparse.Namespace, ctx: RunContext) -> Dict[str, Any]:
    method = MapMethod(args.method)
    p = read_parameterization(args.parameterization)
    check_method(method, p.field.name, args.exact)

    if method == MapMethod.LP_RANDOM_VERTEX:
        g, coefficients, extra = _run_lp(args, p, ctx.seed)
    elif method == MapMethod.AW:
        g, coefficients, extra = _run_aw(args, p, ctx.seed)
    else:
        g, coefficients, extra = _run_z2(args, p, ctx.seed)

    penalty = bisimplicial_penalty(g).value
    objective = norm_objective(g)
    out = ctx.output(args.output, f"map_{method.value}.json")
    inputs = [args.parameterization, args.start]
    manifest = ctx.manifest(inputs, field=p.field.name.value)

    outputs = {
        "map": write_json(out, map_to_document(g, method.value, coefficients, penalty, objective, manifest)),
        "csv": write_map_csv(sibling(out, "csv"), g, manifest),
    }
    rounded: Optional[ChainMapMatrix] = extra.pop("rounded", None)
    if rounded is not None:
        outputs["rounded"] = write_json(
            sibling(out, "rounded.json"),
            map_to_document(rounded, f"{method.value}+round", (), bisimplicial_penalty(rounded).value, norm_objective(rounded), manifest),
        )
    report_name, report = next(iter(extra.items()))
    outputs[report_name] = write_json(sibling(out, f"{report_name}.json"), report, manifest)

    logger.info(f"Map via {method.value}: penalty {penalty}, objective {objective:.6f}, chain map {g.is_chain_map}")
    return summary(
        "map",
        outputs,
        method=method.value,
        penalty=penalty,
        objective=objective,
        is_chain_map=g.is_chain_map,
        report=report,
    )
