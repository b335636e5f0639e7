"""
Scrittura degli artefatti di chainmap

JSON canonico (chiavi ordinate, indent 2, razionali come "p/q", float arrotondati a
FLOAT_DIGITS cifre) e CSV via pandas. Ogni JSON incorpora il manifest di esecuzione;
ogni CSV ha un file gemello <nome>.manifest.json.
"""
import hashlib
import json
import logging
import math
import os
from fractions import Fraction
from numbers import Integral
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from chainmap import __version__
from chainmap.core.config import settings
from chainmap.core.models import (
    ComplexDocument, KunnethReport, MapDocument, MapperGraphDocument, MapperNodeDocument,
    ParameterizationDocument, RunManifest, SimplexEntry, SparseMatrixDocument,
)
from chainmap.services.algebra import Matrix
from chainmap.services.apps import MapperGraph
from chainmap.services.complexes import SimplicialComplex
from chainmap.services.homcomplex import ChainMapMatrix, HomBasisIndex, MapParameterization

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

FLOAT_DIGITS = 10
CSV_FLOAT_FORMAT = "%.5f"


# ============================================================================
# VALORI
# ============================================================================

def format_scalar(value: Any) -> Union[int, float, str]:
    """Razionali come int o "p/q", interi come int, float arrotondati (−0.0 diventa 0.0)"""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, Integral):
        return int(value)
    x = float(value)
    if not math.isfinite(x):
        return str(x)
    return round(x, FLOAT_DIGITS) + 0.0


def _plain(value: Any) -> Any:
    """Conversione ricorsiva in tipi JSON"""
    if isinstance(value, BaseModel):
        return _plain(value.model_dump(mode="json"))
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (str, type(None))):
        return value
    if isinstance(value, (Fraction, Integral, float, np.floating)):
        return format_scalar(value)
    return str(value)


def canonical_json(payload: Any) -> str:
    return json.dumps(_plain(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ============================================================================
# MANIFEST
# ============================================================================

def file_hash(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_manifest(
    command: Sequence[str],
    seed: int,
    field: Optional[str] = None,
    inputs: Iterable[PathLike] = (),
    wall_clock_seconds: float = 0.0,
) -> RunManifest:
    """
    Manifest di esecuzione: riga di comando, seme, campo, hash SHA-256 degli input, versione.

    Args:
        command: argv del comando (senza l'eseguibile)
        seed: Seme globale
        field: Campo dei coefficienti, se rilevante
        inputs: File letti dal comando (i builtin come "hue" sono ignorati)
        wall_clock_seconds: Durata del calcolo
    """
    hashes = {str(p): file_hash(p) for p in inputs if p and Path(p).is_file()}
    return RunManifest(
        command=list(command),
        seed=seed,
        field=field,
        input_hashes=hashes,
        version=__version__,
        threads=settings.threads,
        wall_clock_seconds=round(wall_clock_seconds, 3),
    )


# ============================================================================
# DOCUMENTI
# ============================================================================

def complex_to_document(k: SimplicialComplex) -> ComplexDocument:
    simplices = [
        SimplexEntry(v=list(s.vertices), filtration=k.filtration.get(s) if k.filtration else None)
        for s in k.all_simplices()
    ]
    geometry = {
        str(v): [format_scalar(x) for x in k.geometry[v]]
        for v in k.vertices if v in k.geometry
    }
    return ComplexDocument(vertices=k.vertices, simplices=simplices, geometry=geometry, name=k.name)


def matrix_to_document(m: Matrix) -> SparseMatrixDocument:
    entries = sorted((r, c, format_scalar(v)) for r, c, v in m.items())
    return SparseMatrixDocument(rows=m.rows, cols=m.cols, field=m.field.name, entries=entries)


def parameterization_to_document(p: MapParameterization, manifest: Optional[RunManifest] = None) -> ParameterizationDocument:
    index = p.basis_index or HomBasisIndex(p.domain, p.codomain, 0)
    return ParameterizationDocument(
        field=p.field.name,
        domain=complex_to_document(p.domain),
        codomain=complex_to_document(p.codomain),
        generators=[matrix_to_document(m) for m in p.generators],
        generator_degrees=list(p.generator_degrees),
        homotopies=[matrix_to_document(m) for m in p.raw_homotopies],
        reduced_homotopies=list(p.reduced_indices),
        homotopy_mode=p.homotopy_mode,
        b=[format_scalar(x) for x in p.b],
        basis_index=index.global_pairs(),
        kunneth=KunnethReport(
            generators=len(p.generators),
            kunneth_rank=p.kunneth,
            hom_h0_rank=p.hom_rank,
            consistent=len(p.generators) == p.kunneth and p.hom_rank in (None, p.kunneth),
        ),
        manifest=manifest,
    )


def map_to_document(
    g: ChainMapMatrix,
    method: Optional[str] = None,
    coefficients: Sequence[Any] = (),
    penalty: Optional[float] = None,
    objective: Optional[float] = None,
    manifest: Optional[RunManifest] = None,
) -> MapDocument:
    return MapDocument(
        map=matrix_to_document(g.g),
        domain=complex_to_document(g.domain),
        codomain=complex_to_document(g.codomain),
        field=g.field.name,
        method=method,
        coefficients=[format_scalar(x) for x in coefficients],
        is_chain_map=g.is_chain_map,
        penalty=penalty,
        objective=None if objective is None else format_scalar(objective),
        manifest=manifest,
    )


# ============================================================================
# FILE
# ============================================================================

def _prepare(path: PathLike) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        os.makedirs(path.parent, exist_ok=True)
    return path


def write_json(path: PathLike, payload: Any, manifest: Optional[RunManifest] = None) -> Path:
    """Scrive JSON canonico; se manifest è dato e payload è un dict, lo incorpora alla chiave "manifest" """
    path = _prepare(path)
    data = _plain(payload)
    if manifest is not None and isinstance(data, dict):
        data["manifest"] = _plain(manifest)
    path.write_text(canonical_json(data), encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path


def write_csv(path: PathLike, df: pd.DataFrame, manifest: RunManifest, header: bool = True) -> Path:
    """CSV via pandas (float a 5 decimali) con manifest gemello"""
    path = _prepare(path)
    df.to_csv(path, index=False, header=header, float_format=CSV_FLOAT_FORMAT)
    write_json(manifest_path(path), manifest)
    logger.info(f"Wrote {path} ({len(df)} rows)")
    return path


def manifest_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".manifest.json")


def map_frame(g: Union[ChainMapMatrix, Matrix]) -> pd.DataFrame:
    """Matrice densa riga per riga, una riga per simplesso del codominio"""
    m = g.g if isinstance(g, ChainMapMatrix) else g
    return pd.DataFrame(m.to_numpy(dtype=float))


def write_map_csv(path: PathLike, g: Union[ChainMapMatrix, Matrix], manifest: RunManifest) -> Path:
    return write_csv(path, map_frame(g), manifest, header=False)


def mapper_graph_to_document(graph: MapperGraph) -> MapperGraphDocument:
    return MapperGraphDocument(
        nodes=[
            MapperNodeDocument(id=n.id, points=list(n.points), filter=format_scalar(n.filter), interval=n.interval)
            for n in graph.nodes
        ],
        edges=[tuple(e) for e in graph.edges],
    )
