"""
Modelli per chainmap: enum dei parametri, documenti JSON validati e report dei comandi
"""
from pydantic import BaseModel, Field
from typing import Optional, List, Dict, Tuple, Union
from datetime import datetime
from enum import Enum


# Valore scalare serializzato: int (anche Z/2), float, oppure razionale "p/q"
Scalar = Union[int, float, str]


class FieldName(str, Enum):
    """Campi dei coefficienti"""
    Q = "q"
    Z2 = "z2"
    REAL = "real"


class ModelName(str, Enum):
    """Complessi modello"""
    POINT = "point"
    TRIANGLE = "triangle"
    SQUARE = "square"
    N_GON = "n_gon"
    FILLED_TRIANGLE = "filled_triangle"
    OCTAHEDRON = "octahedron"
    ICOSAHEDRON = "icosahedron"


class HomotopyMode(str, Enum):
    """Lista delle omotopie: colonne grezze di d^H_1 oppure base ridotta"""
    RAW = "raw"
    REDUCED = "reduced"


class BPolicy(str, Enum):
    """Politiche di scelta dei coefficienti b"""
    ALL_ONES = "all_ones"
    BY_DIMENSION = "by_dimension"


class MapMethod(str, Enum):
    """Metodi di selezione della mappa"""
    LP_RANDOM_VERTEX = "lp-random-vertex"
    AW = "aw"
    ENUMERATE = "enumerate"
    ANNEAL = "anneal"
    GREEDY = "greedy"
    RANDOM_WALK = "random-walk"


Z2_METHODS = {MapMethod.ENUMERATE, MapMethod.ANNEAL, MapMethod.GREEDY, MapMethod.RANDOM_WALK}


class LPStatus(str, Enum):
    """Esito di un programma lineare"""
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


class ConstraintSense(str, Enum):
    """Verso dei vincoli"""
    LE = "<="
    EQ = "="
    GE = ">="


class CircleVariant(str, Enum):
    """Localizzazione sul cerchio: somma pesata degli angoli o media delle corde"""
    LITERAL = "literal"
    CHORD = "chord"


class CircleStart(str, Enum):
    """Punto di partenza della minimizzazione della distorsione"""
    ZERO = "zero"
    NEAREST = "nearest"
    LP = "lp"


class MapperFilter(str, Enum):
    """Funzioni filtro per mapper"""
    COORDINATE = "coordinate"
    ECCENTRICITY = "eccentricity"


# ============================================================================
# DOCUMENTI DI INPUT/OUTPUT
# ============================================================================

class RunManifest(BaseModel):
    """Manifest di esecuzione citato da ogni file di output"""
    command: List[str]
    seed: int
    field: Optional[str] = None
    input_hashes: Dict[str, str] = Field(default_factory=dict)
    version: str
    threads: int = 0
    created_at: datetime = Field(default_factory=datetime.now)
    wall_clock_seconds: float = 0.0


class SimplexEntry(BaseModel):
    """Un simplesso nel formato JSON dei complessi"""
    v: List[int]
    filtration: Optional[float] = None


class ComplexDocument(BaseModel):
    """Complesso simpliciale serializzato"""
    vertices: List[int]
    simplices: List[SimplexEntry]
    geometry: Dict[str, List[float]] = Field(default_factory=dict)
    name: Optional[str] = None


class SparseMatrixDocument(BaseModel):
    """Matrice sparsa: triple (riga, colonna, valore)"""
    rows: int
    cols: int
    field: FieldName
    entries: List[Tuple[int, int, Scalar]] = Field(default_factory=list)


class KunnethReport(BaseModel):
    """Controllo incrociato tra numero di generatori, rango di Künneth e rango di H_0(Hom)"""
    generators: int
    kunneth_rank: int
    hom_h0_rank: Optional[int] = None
    consistent: bool


class ParameterizationDocument(BaseModel):
    """Carta affine di [X, Y]"""
    field: FieldName
    domain: ComplexDocument
    codomain: ComplexDocument
    generators: List[SparseMatrixDocument]
    generator_degrees: List[int]
    homotopies: List[SparseMatrixDocument]
    reduced_homotopies: List[int]
    homotopy_mode: HomotopyMode = HomotopyMode.RAW
    b: List[Scalar]
    basis_index: List[Tuple[int, int]]
    kunneth: Optional[KunnethReport] = None
    manifest: Optional[RunManifest] = None


class MapDocument(BaseModel):
    """Mappa concreta G con i suoi indicatori"""
    map: SparseMatrixDocument
    domain: ComplexDocument
    codomain: ComplexDocument
    field: FieldName
    method: Optional[str] = None
    coefficients: List[Scalar] = Field(default_factory=list)
    is_chain_map: bool = True
    penalty: Optional[float] = None
    objective: Optional[float] = None
    manifest: Optional[RunManifest] = None


# ============================================================================
# REPORT
# ============================================================================

class HistogramReport(BaseModel):
    """Istogramma dell'enumerazione Z/2"""
    total: int
    min_value: int
    minimizers: List[str]
    histogram: Dict[str, int]
    distinct_minimizing_maps: int


class SearchReport(BaseModel):
    """Esito di una ricerca euristica su Z/2"""
    method: str
    iterations: int
    best_value: float
    best_coefficients: List[int]
    seed: int
    schedule: Dict[str, float] = Field(default_factory=dict)
    history: List[Tuple[int, float]] = Field(default_factory=list)


class LPReport(BaseModel):
    """Esito della selezione via programmazione lineare"""
    status: LPStatus
    optimum: Optional[float] = None
    objective_of_map: Optional[float] = None
    sparsity_score: Optional[float] = None
    backend: str
    restarts: int = 1
    scores: List[float] = Field(default_factory=list)


class AWReport(BaseModel):
    """Esito della minimizzazione della loss di Alexander-Whitney"""
    initial_loss: float
    final_loss: float
    restarts: int
    trace: List[float] = Field(default_factory=list)
    rounded_penalty: Optional[float] = None
    rounded_is_chain_map: Optional[bool] = None


class CircleReport(BaseModel):
    """Esito della coordinatizzazione circolare"""
    n: int
    variant: CircleVariant
    start: CircleStart
    initial_distortion: float
    final_distortion: float
    winding_number: Optional[int] = None


class DensityReport(BaseModel):
    """Esito della massimizzazione della densità"""
    bandwidth: float
    initial_objective: float
    final_objective: float
    restarts: int


class MapperNodeDocument(BaseModel):
    """Nodo mapper"""
    id: int
    points: List[int]
    filter: float
    interval: int


class MapperGraphDocument(BaseModel):
    """Grafo mapper"""
    nodes: List[MapperNodeDocument]
    edges: List[Tuple[int, int]]


class ColoringReport(BaseModel):
    """Colorazione del dominio e pushforward sul codominio"""
    domain: Dict[str, List[float]]
    raw: Dict[str, List[float]]
    clamped: Dict[str, List[float]]
    intense: List[str] = Field(default_factory=list)
    rescaled: bool = False
