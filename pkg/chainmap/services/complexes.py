"""
Complessi simpliciali, operatori di bordo e costruttori geometrici

Convenzioni:
- I simplessi sono memorizzati con i vertici in ordine crescente; l'orientazione è quella
  dell'ordine dei vertici e i segni del bordo seguono la parità della posizione.
- La base di C_d è ordinata lessicograficamente sulle liste di vertici; l'ordine globale è
  (dimensione, lessicografico).
- Le soglie di Vietoris-Rips e lazy-witness sono chiuse (<=).
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from chainmap.core.errors import InvalidInputError
from chainmap.core.models import ModelName
from chainmap.services.algebra import QQ, Echelon, Field, Matrix, SparseVector, row_reduce

logger = logging.getLogger(__name__)


# ============================================================================
# SIMPLESSI
# ============================================================================

@dataclass(frozen=True)
class Simplex:
    """Simplesso orientato dall'ordine crescente dei vertici"""

    vertices: Tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise InvalidInputError("A simplex needs at least one vertex")
        if any(v < 0 for v in self.vertices):
            raise InvalidInputError(f"Negative vertex id in {list(self.vertices)}")
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise InvalidInputError(f"Simplex vertices must be strictly increasing: {list(self.vertices)}")

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "Simplex":
        """Costruisce ordinando i vertici; rifiuta i duplicati"""
        verts = tuple(sorted(int(v) for v in vertices))
        if len(set(verts)) != len(verts):
            raise InvalidInputError(f"Duplicate vertex in simplex {list(verts)}")
        return cls(verts)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def boundary(self) -> List[Tuple[int, "Simplex"]]:
        """Facce di codimensione 1 con segno (-1)^i"""
        if self.dim == 0:
            return []
        return [
            ((-1) ** i, Simplex(self.vertices[:i] + self.vertices[i + 1:]))
            for i in range(len(self.vertices))
        ]

    def faces(self) -> List["Simplex"]:
        """Tutte le facce non vuote, simplesso compreso"""
        return [
            Simplex(sub)
            for size in range(1, len(self.vertices) + 1)
            for sub in combinations(self.vertices, size)
        ]

    def front(self, i: int) -> "Simplex":
        return Simplex(self.vertices[: i + 1])

    def back(self, i: int) -> "Simplex":
        return Simplex(self.vertices[i:])

    @property
    def key(self) -> str:
        return ",".join(str(v) for v in self.vertices)

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.vertices) + "]"


def _sort_key(s: Simplex) -> Tuple[int, Tuple[int, ...]]:
    return s.dim, s.vertices


# ============================================================================
# COMPLESSI
# ============================================================================

class SimplicialComplex:
    """
    Complesso simpliciale finito con filtrazione e geometria opzionali.

    Args:
        simplices: Simplessi del complesso (chiuso per facce)
        filtration: Valore di filtrazione per simplesso (monotono sulle facce)
        geometry: Coordinate dei vertici
        name: Etichetta libera
        close: Se True aggiunge le facce mancanti invece di rifiutarle
    """

    def __init__(
        self,
        simplices: Iterable[Union[Simplex, Sequence[int]]],
        filtration: Optional[Dict[Simplex, float]] = None,
        geometry: Optional[Dict[int, Sequence[float]]] = None,
        name: Optional[str] = None,
        close: bool = False,
    ):
        unique = {s if isinstance(s, Simplex) else Simplex.of(s) for s in simplices}
        if close:
            unique = {face for s in unique for face in s.faces()}
        self.name = name
        self._by_dim: List[List[Simplex]] = []
        for s in sorted(unique, key=_sort_key):
            while len(self._by_dim) <= s.dim:
                self._by_dim.append([])
            self._by_dim[s.dim].append(s)
        self._index: Dict[Simplex, int] = {
            s: i for layer in self._by_dim for i, s in enumerate(layer)
        }
        self._offsets = [0]
        for layer in self._by_dim:
            self._offsets.append(self._offsets[-1] + len(layer))
        self.filtration = dict(filtration) if filtration else None
        self.geometry = {int(v): np.asarray(x, dtype=float) for v, x in (geometry or {}).items()}
        self._cofaces: Optional[Dict[Simplex, List[Tuple[int, Simplex]]]] = None
        self.validate()

    # ------------------------------------------------------------------
    # Accesso
    # ------------------------------------------------------------------

    @property
    def dimension(self) -> int:
        return len(self._by_dim) - 1

    @property
    def vertices(self) -> List[int]:
        return [s.vertices[0] for s in self.simplices(0)]

    def simplices(self, dim: int) -> List[Simplex]:
        if 0 <= dim < len(self._by_dim):
            return self._by_dim[dim]
        return []

    def all_simplices(self) -> List[Simplex]:
        return [s for layer in self._by_dim for s in layer]

    def count(self, dim: int) -> int:
        return len(self.simplices(dim))

    def __len__(self) -> int:
        return self._offsets[-1]

    def __contains__(self, s: Simplex) -> bool:
        return s in self._index

    def index(self, s: Simplex) -> int:
        """Indice di s nella base di C_{dim s}"""
        try:
            return self._index[s]
        except KeyError as e:
            raise InvalidInputError(f"Simplex {s} not in complex") from e

    def offset(self, dim: int) -> int:
        if dim < 0:
            return 0
        return self._offsets[min(dim, len(self._by_dim))]

    def global_index(self, s: Simplex) -> int:
        return self.offset(s.dim) + self.index(s)

    def simplex_at(self, global_index: int) -> Simplex:
        for dim, layer in enumerate(self._by_dim):
            if global_index < self._offsets[dim + 1]:
                return layer[global_index - self._offsets[dim]]
        raise InvalidInputError(f"Global index {global_index} out of range for {len(self)} simplices")

    def dim_of(self, global_index: int) -> int:
        return self.simplex_at(global_index).dim

    def cofaces(self, s: Simplex) -> List[Tuple[int, Simplex]]:
        """Cofacce di codimensione 1 con il segno di s nel loro bordo"""
        if self._cofaces is None:
            table: Dict[Simplex, List[Tuple[int, Simplex]]] = {t: [] for t in self._index}
            for t in self.all_simplices():
                for sign, face in t.boundary():
                    table[face].append((sign, t))
            self._cofaces = table
        return self._cofaces.get(s, [])

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(layer) for d, layer in enumerate(self._by_dim))

    def coordinates(self) -> np.ndarray:
        """Matrice delle coordinate dei vertici in ordine di base"""
        missing = [v for v in self.vertices if v not in self.geometry]
        if missing:
            raise InvalidInputError(f"Missing geometry for vertices {missing[:5]}")
        return np.vstack([self.geometry[v] for v in self.vertices]) if self.vertices else np.zeros((0, 0))

    def validate(self) -> None:
        """Verifica chiusura per facce e monotonia della filtrazione"""
        for s in self.all_simplices():
            for _, face in s.boundary():
                if face not in self._index:
                    raise InvalidInputError(f"Complex not closed under faces: {face} missing (face of {s})")
        if self.filtration is not None:
            for s in self.all_simplices():
                value = self.filtration.get(s)
                if value is None:
                    raise InvalidInputError(f"Missing filtration value for {s}")
                if value < 0:
                    raise InvalidInputError(f"Negative filtration value for {s}")
                for _, face in s.boundary():
                    if self.filtration[face] > value:
                        raise InvalidInputError(f"Filtration not monotone: {face} enters after {s}")

    def __repr__(self) -> str:
        counts = [len(layer) for layer in self._by_dim]
        return f"SimplicialComplex(name={self.name!r}, counts={counts})"


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Nuvola di punti in R^n: array n_punti x dimensione, valori finiti"""

    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        array = np.asarray(self.points, dtype=float)
        if array.ndim == 1:
            array = array[:, None]
        if array.ndim != 2 or array.shape[0] == 0:
            raise InvalidInputError("Point cloud must be a nonempty 2-d array")
        if not np.all(np.isfinite(array)):
            raise InvalidInputError("Point cloud contains non-finite coordinates")
        object.__setattr__(self, "points", array)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def distance_matrix(self) -> np.ndarray:
        return squareform(pdist(self.points))


# ============================================================================
# BORDO E OMOLOGIA
# ============================================================================

def boundary_matrix(k: SimplicialComplex, dim: int, field: Field = QQ) -> Matrix:
    """
    Matrice di ∂_dim: C_dim -> C_{dim-1} nelle basi ordinate del complesso.

    Per dim = 0 restituisce una matrice con zero righe; per dimensioni senza simplessi
    una matrice con zero colonne.
    """
    if dim < 0:
        raise InvalidInputError(f"Boundary dimension must be non-negative, got {dim}")
    rows = k.count(dim - 1) if dim >= 1 else 0
    columns = []
    for s in k.simplices(dim):
        columns.append({k.index(face): sign for sign, face in s.boundary()})
    return Matrix.from_columns(rows, columns, field)


def betti_numbers(k: SimplicialComplex, field: Field = QQ) -> List[int]:
    """β_d = n_d − rank ∂_d − rank ∂_{d+1} per d = 0..dim"""
    ranks = [row_reduce(boundary_matrix(k, d, field), with_kernel=False).rank for d in range(k.dimension + 2)]
    return [k.count(d) - ranks[d] - ranks[d + 1] for d in range(k.dimension + 1)]


def _representatives(cycles: Sequence[SparseVector], boundaries: Sequence[SparseVector], field: Field) -> List[SparseVector]:
    # primi cicli indipendenti modulo i bordi, nell'ordine della base del nucleo
    echelon = Echelon(field)
    for b in boundaries:
        residue, _ = echelon.reduce(b.to_dict())
        if residue:
            echelon.insert(residue)
    reps = []
    for z in cycles:
        residue, _ = echelon.reduce(z.to_dict())
        if residue:
            echelon.insert(residue)
            reps.append(z.normalized())
    return reps


def homology_representatives(k: SimplicialComplex, dim: int, field: Field = QQ) -> List[SparseVector]:
    """
    Rappresentanti di una base di H_dim(k): vettori della base del nucleo di ∂_dim,
    presi nell'ordine di eliminazione e scartati se dipendenti modulo im ∂_{dim+1}.
    Ogni rappresentante è normalizzato con primo coefficiente 1.
    """
    cycles = row_reduce(boundary_matrix(k, dim, field)).kernel_basis
    boundaries = row_reduce(boundary_matrix(k, dim + 1, field), with_kernel=False).image_basis
    reps = _representatives(cycles, boundaries, field)
    logger.debug(f"H_{dim} of {k!r}: {len(reps)} representatives")
    return reps


def cohomology_representatives(k: SimplicialComplex, dim: int, field: Field = QQ) -> List[SparseVector]:
    """Rappresentanti di H^dim(k): cocicli di δ = ∂_{dim+1}^T modulo im ∂_dim^T"""
    delta = boundary_matrix(k, dim + 1, field).transpose()
    cocycles = row_reduce(delta).kernel_basis
    coboundaries = row_reduce(boundary_matrix(k, dim, field).transpose(), with_kernel=False).image_basis
    return _representatives(cocycles, coboundaries, field)


# ============================================================================
# COMPLESSI MODELLO
# ============================================================================

def _polygon(n: int, name: str) -> SimplicialComplex:
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    angles = 2 * np.pi * np.arange(n) / n
    geometry = {k: (float(np.cos(a)), float(np.sin(a))) for k, a in enumerate(angles)}
    return SimplicialComplex([(v,) for v in range(n)] + edges, geometry=geometry, name=name)


def _octahedron() -> SimplicialComplex:
    # 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z, una faccia per ogni scelta di un vertice per coppia antipodale
    faces = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    axes = np.eye(3)
    geometry = {2 * i: tuple(axes[i]) for i in range(3)}
    geometry.update({2 * i + 1: tuple(-axes[i]) for i in range(3)})
    return SimplicialComplex(faces, geometry=geometry, name="octahedron", close=True)


def _icosahedron() -> SimplicialComplex:
    # 0 polo nord, 1..5 anello superiore, 6..10 anello inferiore, 11 polo sud
    upper = [1 + i for i in range(5)]
    lower = [6 + i for i in range(5)]
    faces = []
    for i in range(5):
        j = (i + 1) % 5
        faces += [
            (0, upper[i], upper[j]),
            (upper[i], upper[j], lower[i]),
            (lower[i], lower[j], upper[j]),
            (11, lower[i], lower[j]),
        ]
    z, rho = 1 / np.sqrt(5), 2 / np.sqrt(5)
    geometry = {0: (0.0, 0.0, 1.0), 11: (0.0, 0.0, -1.0)}
    for i in range(5):
        a = 2 * np.pi * i / 5
        b = a + np.pi / 5
        geometry[upper[i]] = (rho * np.cos(a), rho * np.sin(a), z)
        geometry[lower[i]] = (rho * np.cos(b), rho * np.sin(b), -z)
    return SimplicialComplex(faces, geometry=geometry, name="icosahedron", close=True)


def model_complex(name: Union[ModelName, str], n: Optional[int] = None) -> SimplicialComplex:
    """
    Complessi modello con geometria: poligoni sul cerchio unitario, ottaedro sugli assi,
    icosaedro sulla sfera unitaria.

    Args:
        name: Nome del modello
        n: Numero di vertici per n_gon (>= 3)
    """
    try:
        model = ModelName(name)
    except ValueError as e:
        raise InvalidInputError(f"Unknown model complex {name!r}") from e

    if model == ModelName.POINT:
        return SimplicialComplex([(0,)], geometry={0: (0.0, 0.0)}, name="point")
    if model == ModelName.TRIANGLE:
        return _polygon(3, "triangle")
    if model == ModelName.SQUARE:
        return _polygon(4, "square")
    if model == ModelName.N_GON:
        if n is None or n < 3:
            raise InvalidInputError(f"n_gon needs n >= 3, got {n}")
        return _polygon(n, f"{n}_gon")
    if model == ModelName.FILLED_TRIANGLE:
        triangle = _polygon(3, "filled_triangle")
        return SimplicialComplex(triangle.all_simplices() + [Simplex((0, 1, 2))], geometry=triangle.geometry, name="filled_triangle")
    if model == ModelName.OCTAHEDRON:
        return _octahedron()
    return _icosahedron()


# ============================================================================
# COSTRUTTORI GEOMETRICI
# ============================================================================

def _flag_complex(
    n_vertices: int,
    edges: Dict[Tuple[int, int], float],
    max_dim: int,
    geometry: Dict[int, Sequence[float]],
    name: str,
) -> SimplicialComplex:
    graph = nx.Graph()
    graph.add_nodes_from(range(n_vertices))
    graph.add_edges_from(edges)
    simplices, filtration = [], {}
    # enumerate_all_cliques produce le cricche per cardinalità non decrescente
    for clique in nx.enumerate_all_cliques(graph):
        if len(clique) > max_dim + 1:
            break
        s = Simplex.of(clique)
        simplices.append(s)
        filtration[s] = max((edges[pair] for pair in combinations(s.vertices, 2)), default=0.0)
    return SimplicialComplex(simplices, filtration=filtration, geometry=geometry, name=name)


def vietoris_rips(p: PointCloud, r_max: float, max_dim: int) -> SimplicialComplex:
    """
    Complesso di Vietoris-Rips a scala fissa: un simplesso entra se tutte le distanze
    a coppie sono <= r_max; filtrazione = massima distanza a coppie.
    """
    if r_max < 0 or max_dim < 0:
        raise InvalidInputError(f"Rips needs r_max >= 0 and max_dim >= 0, got {r_max}, {max_dim}")
    distances = p.distance_matrix()
    n = len(p)
    rows, cols = np.nonzero(np.triu(distances <= r_max, k=1))
    edges = {(int(a), int(b)): float(distances[a, b]) for a, b in zip(rows, cols)} if max_dim >= 1 else {}
    geometry = {i: p.points[i] for i in range(n)}
    k = _flag_complex(n, edges, max_dim, geometry, name="rips")
    logger.info(f"Rips complex at r={r_max}: {[k.count(d) for d in range(k.dimension + 1)]} simplices per dimension")
    return k


def maxmin_landmarks(p: PointCloud, count: int, seed: int, first: Optional[int] = None) -> List[int]:
    """
    Selezione sequenziale max-min dei landmark.

    Args:
        p: Nuvola di punti
        count: Numero di landmark (1 <= count <= |p|)
        seed: Seme dell'estrazione del primo landmark
        first: Primo landmark imposto (sostituisce l'estrazione)

    Returns:
        Indici dei landmark nell'ordine di selezione; a parità di distanza vince l'indice minore
    """
    n = len(p)
    if not 1 <= count <= n:
        raise InvalidInputError(f"Landmark count must be in [1, {n}], got {count}")
    if first is None:
        first = int(np.random.default_rng(seed).integers(n))
    elif not 0 <= first < n:
        raise InvalidInputError(f"First landmark {first} out of range")

    chosen = [first]
    min_dist = cdist(p.points[[first]], p.points)[0]
    min_dist[first] = -np.inf
    while len(chosen) < count:
        nxt = int(np.argmax(min_dist))
        chosen.append(nxt)
        min_dist = np.minimum(min_dist, cdist(p.points[[nxt]], p.points)[0])
        min_dist[chosen] = -np.inf
    logger.debug(f"Max-min landmarks: first={first}, count={count}")
    return chosen


def lazy_witness(p: PointCloud, landmarks: Sequence[int], nu: int, r_max: float, max_dim: int) -> SimplicialComplex:
    """
    Complesso lazy-witness sui landmark (vertici = posizione nella lista dei landmark).

    Il lato [a, b] entra al tempo min_w max(0, max(d(a,w), d(b,w)) − m_ν(w)), dove m_ν(w)
    è la ν-esima distanza più piccola di w dai landmark (0 per ν = 0). I simplessi di
    dimensione superiore sono le cricche fino a max_dim.
    """
    if nu < 0:
        raise InvalidInputError(f"Lazy-witness nu must be >= 0, got {nu}")
    if not landmarks:
        raise InvalidInputError("Lazy-witness needs at least one landmark")
    if len(set(landmarks)) != len(landmarks) or any(not 0 <= i < len(p) for i in landmarks):
        raise InvalidInputError("Landmarks must be distinct valid point indices")
    n_land = len(landmarks)
    if nu > n_land:
        raise InvalidInputError(f"Lazy-witness nu={nu} exceeds landmark count {n_land}")
    if r_max < 0 or max_dim < 0:
        raise InvalidInputError(f"Witness needs r_max >= 0 and max_dim >= 0, got {r_max}, {max_dim}")

    distances = cdist(p.points[list(landmarks)], p.points)
    m_nu = np.zeros(len(p)) if nu == 0 else np.partition(distances, nu - 1, axis=0)[nu - 1]

    edges: Dict[Tuple[int, int], float] = {}
    if max_dim >= 1:
        for a in range(n_land - 1):
            times = np.maximum(distances[a][None, :], distances[a + 1:]) - m_nu[None, :]
            entry = np.maximum(times.min(axis=1), 0.0)
            for offset in np.nonzero(entry <= r_max)[0]:
                edges[(a, a + 1 + int(offset))] = float(entry[offset])

    geometry = {i: p.points[idx] for i, idx in enumerate(landmarks)}
    k = _flag_complex(n_land, edges, max_dim, geometry, name="witness")
    logger.info(f"Lazy-witness complex (nu={nu}, r={r_max}): {[k.count(d) for d in range(k.dimension + 1)]} simplices per dimension")
    return k
