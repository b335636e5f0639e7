"""
Parser locali per i file di input di chainmap
Nuvole di punti e palette in CSV (pandas), complessi, parametrizzazioni e mappe in JSON
(validati con i modelli pydantic di chainmap.core.models)

"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Type, TypeVar, Union

import pandas as pd
from pydantic import BaseModel, ValidationError

from chainmap.core.errors import InputDataError, InvalidInputError
from chainmap.core.models import (
    ComplexDocument, MapDocument, ParameterizationDocument, SparseMatrixDocument,
)
from chainmap.services.algebra import Matrix, field_for
from chainmap.services.apps import hue_palette
from chainmap.services.complexes import PointCloud, Simplex, SimplicialComplex
from chainmap.services.homcomplex import ChainMapMatrix, HomBasisIndex, MapParameterization

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
DocumentT = TypeVar("DocumentT", bound=BaseModel)

PALETTE_COLUMNS = ["vertex", "r", "g", "b"]
BUILTIN_PALETTES = {"hue"}


def _existing(path: PathLike) -> Path:
    path = Path(path)
    if not path.is_file():
        raise InputDataError(f"Input file not found: {path}")
    return path


# ============================================================================
# CSV
# ============================================================================

def read_point_cloud(path: PathLike) -> PointCloud:
    """
    Legge una nuvola di punti: un punto per riga, coordinate in virgola mobile.

    Una riga di intestazione non numerica viene ignorata.

    Raises:
        InputDataError: file assente, vuoto o con valori non numerici
    """
    path = _existing(path)
    try:
        df = pd.read_csv(path, header=None, comment="#", skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise InputDataError(f"Point cloud file {path} is empty") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise InputDataError(f"Cannot parse point cloud {path}: {e}") from e

    numeric = df.apply(pd.to_numeric, errors="coerce")
    if len(df) and numeric.iloc[0].isna().all():
        logger.debug(f"Skipping header row of {path.name}")
        numeric = numeric.iloc[1:]
    if numeric.empty:
        raise InputDataError(f"Point cloud file {path} has no points")
    if numeric.isna().any().any():
        bad = int(numeric.isna().any(axis=1).to_numpy().nonzero()[0][0])
        raise InputDataError(f"Non-numeric coordinate in {path.name}, data row {bad}")
    try:
        cloud = PointCloud(numeric.to_numpy(dtype=float))
    except InvalidInputError as e:
        raise InputDataError(f"Invalid point cloud {path.name}: {e}") from e
    logger.info(f"Loaded {len(cloud)} points in R^{cloud.dim} from {path.name}")
    return cloud


def read_palette(spec: str, vertices: List[int]) -> Dict[int, Tuple[float, float, float]]:
    """
    Palette dei vertici del dominio.

    Args:
        spec: "hue" (tinte equispaziate) oppure percorso di un CSV con colonne vertex,r,g,b
        vertices: Vertici del dominio

    Raises:
        InputDataError: file malformato o vertici del dominio senza colore
    """
    if spec in BUILTIN_PALETTES:
        return hue_palette(vertices)

    path = _existing(spec)
    try:
        df = pd.read_csv(path, skipinitialspace=True)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise InputDataError(f"Cannot parse palette {path}: {e}") from e
    df.columns = [str(c).strip().lower() for c in df.columns]
    missing_columns = [c for c in PALETTE_COLUMNS if c not in df.columns]
    if missing_columns:
        raise InputDataError(f"Palette {path.name} lacks columns {missing_columns}")
    df = df[PALETTE_COLUMNS].apply(pd.to_numeric, errors="coerce")
    if df.isna().any().any():
        raise InputDataError(f"Palette {path.name} contains non-numeric values")
    if df["vertex"].duplicated().any():
        raise InputDataError(f"Palette {path.name} lists a vertex twice")

    palette = {
        int(row.vertex): (float(row.r), float(row.g), float(row.b))
        for row in df.itertuples(index=False)
    }
    missing = [v for v in vertices if v not in palette]
    if missing:
        raise InputDataError(f"Palette {path.name} missing domain vertices {missing[:5]}")
    return palette


# ============================================================================
# JSON
# ============================================================================

def load_document(path: PathLike, model: Type[DocumentT]) -> DocumentT:
    """Legge un file JSON e lo valida con il modello pydantic indicato"""
    path = _existing(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise InputDataError(f"Malformed JSON in {path}: {e}") from e
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        logger.error(f"{path.name} is not a valid {model.__name__}: {e.error_count()} errors")
        raise InputDataError(f"{path.name} is not a valid {model.__name__}: {e}") from e


def complex_from_document(doc: ComplexDocument) -> SimplicialComplex:
    """
    Ricostruisce un complesso: i vertici elencati senza simplesso diventano 0-simplessi.
    La filtrazione è tenuta solo se presente su ogni simplesso.
    """
    try:
        simplices = [Simplex.of(entry.v) for entry in doc.simplices]
        declared = set(simplices)
        simplices += [Simplex((v,)) for v in doc.vertices if Simplex((v,)) not in declared]
        values = [entry.filtration for entry in doc.simplices]
        filtration = None
        if values and all(v is not None for v in values):
            filtration = {Simplex.of(entry.v): float(entry.filtration) for entry in doc.simplices}
            for s in simplices:
                filtration.setdefault(s, 0.0)
        elif any(v is not None for v in values):
            logger.warning("Filtration given for some simplices only: ignored")
        geometry = {int(k): coords for k, coords in doc.geometry.items()}
        return SimplicialComplex(simplices, filtration=filtration, geometry=geometry, name=doc.name)
    except (InvalidInputError, ValueError) as e:
        raise InputDataError(f"Invalid complex document: {e}") from e


def read_complex(path: PathLike) -> SimplicialComplex:
    k = complex_from_document(load_document(path, ComplexDocument))
    logger.info(f"Loaded complex {k.name or Path(path).name}: {[k.count(d) for d in range(k.dimension + 1)]}")
    return k


def matrix_from_document(doc: SparseMatrixDocument) -> Matrix:
    f = field_for(doc.field)
    for r, c, _ in doc.entries:
        if not (0 <= r < doc.rows and 0 <= c < doc.cols):
            raise InputDataError(f"Matrix entry ({r}, {c}) outside shape {doc.rows}x{doc.cols}")
    try:
        return Matrix.from_entries(doc.rows, doc.cols, [(r, c, f.convert(v)) for r, c, v in doc.entries], f)
    except InvalidInputError as e:
        raise InputDataError(f"Invalid matrix entries: {e}") from e


def read_parameterization(path: PathLike) -> MapParameterization:
    """
    Ricostruisce una MapParameterization scritta da `chainmap hom`.

    Raises:
        InputDataError: documento non valido o forme incoerenti con i complessi
    """
    doc = load_document(path, ParameterizationDocument)
    X = complex_from_document(doc.domain)
    Y = complex_from_document(doc.codomain)
    f = field_for(doc.field)
    generators = [matrix_from_document(m) for m in doc.generators]
    homotopies = [matrix_from_document(m) for m in doc.homotopies]
    for m in generators + homotopies:
        if m.shape != (len(Y), len(X)):
            raise InputDataError(f"Matrix shape {m.shape} does not match complexes ({len(Y)}, {len(X)})")
        if m.field is not f:
            raise InputDataError(f"Matrix over {m.field.name.value} in a {f.name.value} parameterization")
    if len(doc.generator_degrees) != len(generators):
        raise InputDataError("generator_degrees must list one degree per generator")
    if any(not 0 <= i < len(homotopies) for i in doc.reduced_homotopies):
        raise InputDataError("reduced_homotopies refers to a missing homotopy")

    index = HomBasisIndex(X, Y, 0)
    if [tuple(pair) for pair in doc.basis_index] != index.global_pairs():
        raise InputDataError("basis_index does not match the Hom_0 basis of the complexes")
    try:
        p = MapParameterization(
            domain=X,
            codomain=Y,
            field=f,
            generators=generators,
            generator_degrees=list(doc.generator_degrees),
            raw_homotopies=homotopies,
            reduced_indices=list(doc.reduced_homotopies),
            homotopy_mode=doc.homotopy_mode,
            b=list(doc.b),
            kunneth=doc.kunneth.kunneth_rank if doc.kunneth else len(generators),
            hom_rank=doc.kunneth.hom_h0_rank if doc.kunneth else None,
            basis_index=index,
        )
    except InvalidInputError as e:
        raise InputDataError(f"Invalid parameterization {Path(path).name}: {e}") from e
    logger.info(f"Loaded parameterization: {len(generators)} generators, {len(homotopies)} homotopies over {f.name.value}")
    return p


def read_map(path: PathLike) -> Tuple[ChainMapMatrix, MapDocument]:
    """Legge una mappa JSON; il flag di mappa di catene è ricalcolato, non letto dal file"""
    doc = load_document(path, MapDocument)
    X = complex_from_document(doc.domain)
    Y = complex_from_document(doc.codomain)
    g = matrix_from_document(doc.map)
    if g.shape != (len(Y), len(X)):
        raise InputDataError(f"Map shape {g.shape} does not match complexes ({len(Y)}, {len(X)})")
    checked = ChainMapMatrix.checked(g, X, Y)
    if doc.is_chain_map and not checked.is_chain_map:
        logger.warning(f"{Path(path).name} claims a chain map but the check fails")
    return checked, doc


def read_coefficients(spec: Optional[str], count: int) -> Optional[List[Fraction]]:
    """Coefficienti da riga di comando (lista a virgole "1,0,1/2,0.25" oppure CSV a una colonna), come Fraction esatte"""
    if spec is None:
        return None
    if Path(spec).is_file():
        values = pd.read_csv(spec, header=None, dtype=str).iloc[:, 0].str.strip().tolist()
    else:
        values = [v.strip() for v in spec.split(",") if v.strip()]
    if len(values) != count:
        raise InputDataError(f"Expected {count} coefficients, got {len(values)}")
    parsed: List[Fraction] = []
    for v in values:
        try:
            parsed.append(Fraction(v))
        except (ValueError, ZeroDivisionError) as e:
            raise InputDataError(f"Cannot parse coefficient {v!r}") from e
    return parsed
