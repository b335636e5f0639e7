"""
Applicazioni della parametrizzazione [X, Y]

1. Coordinate circolari: minimizzazione della distorsione verso un n-gono
2. Massimizzazione della densità (KDE gaussiana) delle immagini dei vertici
3. Mapper 1-d, quoziente sui massimi locali e mappa tra due grafi mapper
4. Pushforward di una colorazione attraverso l'aggiunta della mappa

Tutte le ottimizzazioni si muovono dentro [X, Y]: la mappa restituita resta una mappa di catene.
"""
import colorsys
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import cdist, pdist, squareform

from chainmap.core.config import settings
from chainmap.core.errors import InputDataError, InvalidInputError
from chainmap.core.models import CircleStart, CircleVariant, HomotopyMode
from chainmap.services.algebra import QQ, Field, SparseVector
from chainmap.services.complexes import PointCloud, Simplex, SimplicialComplex
from chainmap.services.homcomplex import (
    ChainMapMatrix, MapParameterization, chain_map_generators, coefficients_for_map,
    evaluate_map, simplicial_chain_map,
)
from chainmap.services.optimize import NormSolution, descend, random_vertex

logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi


def localize(chain: SparseVector, phi: np.ndarray) -> np.ndarray:
    """
    ψ(Σ c_i σ_i) = Σ c_i φ(σ_i) per una catena di vertici.

    Args:
        chain: Catena su C(Y) (indici globali; ammessi solo vertici)
        phi: Coordinate dei vertici di Y, una riga per vertice in ordine di base
    """
    phi = np.asarray(phi, dtype=float)
    if phi.ndim == 1:
        phi = phi[:, None]
    result = np.zeros(phi.shape[1])
    for idx, value in chain.entries:
        if idx >= phi.shape[0]:
            raise InvalidInputError(f"Chain has support outside dimension 0 (index {idx})")
        result += float(value) * phi[idx]
    return result


def _vertex_edges(X: SimplicialComplex) -> np.ndarray:
    # lati come coppie di indici di base dei vertici
    pairs = [(X.index(Simplex(e.vertices[:1])), X.index(Simplex(e.vertices[1:]))) for e in X.simplices(1)]
    return np.array(pairs, dtype=int).reshape(-1, 2)


def _vertex_block_map(p: MapParameterization, weights: np.ndarray) -> Tuple[np.ndarray, Any]:
    """
    Per un peso w sui vertici di Y restituisce (w·G0 in c = 0, operatore lineare c -> Δ(w·G0))
    con G0 il blocco vertici -> vertici.
    """
    n0y, n0x = p.codomain.count(0), p.domain.count(0)
    cols = p.shape[1]
    base = weights @ p.base_array()[:n0y, :n0x]
    operator = p.homotopy_operator()
    linear = None
    for k in range(n0y):
        if weights[k] == 0:
            continue
        block = operator[k * cols: k * cols + n0x] * weights[k]
        linear = block if linear is None else linear + block
    if linear is None:
        linear = operator[:n0x] * 0.0
    return base, linear.tocsr()


def wrap_angle(delta: np.ndarray) -> np.ndarray:
    """Differenza angolare ridotta in [−π, π)"""
    return np.mod(np.asarray(delta) + np.pi, TWO_PI) - np.pi


# ============================================================================
# COORDINATE CIRCOLARI
# ============================================================================

@dataclass(frozen=True)
class CircleModel:
    """n-gono con il vertice k all'angolo 2πk/n"""

    n: int

    def __post_init__(self):
        if self.n < 3:
            raise InvalidInputError(f"Circle model needs n >= 3, got {self.n}")

    @property
    def angles(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n) / self.n

    def vertex_angle(self, k: int) -> float:
        return float(TWO_PI * k / self.n)

    @classmethod
    def for_complex(cls, Y: SimplicialComplex) -> "CircleModel":
        """Verifica che Y sia l'n-gono con vertici 0..n−1 e lati [k, k+1], [0, n−1]"""
        n = Y.count(0)
        expected = {(k, k + 1) for k in range(n - 1)} | {(0, n - 1)}
        if Y.dimension != 1 or Y.vertices != list(range(n)) or {s.vertices for s in Y.simplices(1)} != expected:
            raise InvalidInputError("Codomain is not the n-gon of a circle model")
        return cls(n)


class _CircleProblem:
    def __init__(self, p: MapParameterization, model: CircleModel, variant: CircleVariant):
        self.variant = CircleVariant(variant)
        self.edges = _vertex_edges(p.domain)
        angles = model.angles
        if self.variant == CircleVariant.LITERAL:
            self.theta0, self.L = _vertex_block_map(p, angles)
        else:
            self.ux0, self.Lx = _vertex_block_map(p, np.cos(angles))
            self.uy0, self.Ly = _vertex_block_map(p, np.sin(angles))

    def angles(self, c: np.ndarray) -> np.ndarray:
        if self.variant == CircleVariant.LITERAL:
            return self.theta0 + self.L @ c
        return np.arctan2(self.uy0 + self.Ly @ c, self.ux0 + self.Lx @ c)

    def value_and_grad(self, c: np.ndarray) -> Tuple[float, np.ndarray]:
        theta = self.angles(c)
        if len(self.edges) == 0:
            return 0.0, np.zeros_like(c)
        a, b = self.edges[:, 0], self.edges[:, 1]
        delta = wrap_angle(theta[b] - theta[a])
        g_theta = np.zeros_like(theta)
        np.add.at(g_theta, b, 2 * delta)
        np.add.at(g_theta, a, -2 * delta)
        if self.variant == CircleVariant.LITERAL:
            grad = self.L.T @ g_theta
        else:
            ux, uy = self.ux0 + self.Lx @ c, self.uy0 + self.Ly @ c
            r2 = np.maximum(ux ** 2 + uy ** 2, 1e-300)
            grad = self.Ly.T @ (g_theta * ux / r2) - self.Lx.T @ (g_theta * uy / r2)
        return float(np.sum(delta ** 2)), grad

    def admissible(self, old: np.ndarray, new: np.ndarray, cap: float) -> bool:
        # nessun vertice si muove più di cap e nessun lato attraversa il cut locus
        before, after = self.angles(old), self.angles(new)
        moved = wrap_angle(after - before)
        if np.max(np.abs(moved), initial=0.0) > cap:
            return False
        if len(self.edges) == 0:
            return True
        a, b = self.edges[:, 0], self.edges[:, 1]
        continued = wrap_angle(before[b] - before[a]) + moved[b] - moved[a]
        return bool(np.all(np.abs(continued) < np.pi))


def circle_distortion(p: MapParameterization, model: CircleModel, c: Sequence[float], variant: CircleVariant = CircleVariant.LITERAL) -> float:
    """Σ sui lati di X del quadrato della distanza geodetica tra le immagini localizzate"""
    return _CircleProblem(p, model, variant).value_and_grad(np.asarray(c, dtype=float))[0]


def cycle_vertex_order(X: SimplicialComplex) -> Optional[List[int]]:
    """Il ciclo più lungo di una base dei cicli dell'1-scheletro (indici di base dei vertici)"""
    graph = nx.Graph()
    graph.add_nodes_from(range(X.count(0)))
    graph.add_edges_from(map(tuple, _vertex_edges(X)))
    cycles = nx.cycle_basis(graph)
    if not cycles:
        return None
    return max(cycles, key=len)


def winding_number(angles: Sequence[float], cycle: Sequence[int]) -> int:
    """Somma dei passi angolari con segno lungo il ciclo, in giri"""
    theta = np.asarray(angles, dtype=float)[list(cycle)]
    steps = wrap_angle(np.roll(theta, -1) - theta)
    return int(round(float(np.sum(steps)) / TWO_PI))


@dataclass
class CircleResult:
    coefficients: List[float]
    angles: List[float]
    initial_distortion: float
    final_distortion: float
    winding_number: Optional[int]
    start: CircleStart
    parameterization: MapParameterization = field(repr=False)
    map: Optional[ChainMapMatrix] = field(default=None, repr=False)


def _nearest_start(p: MapParameterization, model: CircleModel) -> Optional[np.ndarray]:
    X = p.domain
    try:
        coords = X.coordinates()[:, :2]
    except InvalidInputError:
        logger.warning("Domain has no geometry: nearest start unavailable")
        return None
    coords = coords - coords.mean(axis=0)
    alpha = np.mod(np.arctan2(coords[:, 1], coords[:, 0]), TWO_PI)
    nearest = np.mod(np.rint(alpha * model.n / TWO_PI).astype(int), model.n)
    for label, ks in (("nearest", nearest), ("reflected", np.mod(-nearest, model.n))):
        vertex_map = {v: int(k) for v, k in zip(X.vertices, ks)}
        try:
            g = simplicial_chain_map(X, p.codomain, vertex_map)
        except InvalidInputError:
            logger.warning(f"The {label} vertex assignment is not simplicial")
            return None
        c = coefficients_for_map(p, g, exact=False)
        if c is not None:
            logger.info(f"Circle start: {label} simplicial map")
            return np.asarray(c, dtype=float)
    logger.warning("Nearest simplicial map lies outside the fixed class")
    return None


def minimize_circle_distortion(
    p: MapParameterization,
    model: Optional[CircleModel] = None,
    seed: int = 0,
    start: Union[CircleStart, str] = CircleStart.NEAREST,
    variant: Union[CircleVariant, str] = CircleVariant.LITERAL,
    restarts: int = 0,
    restart_scale: float = 0.1,
    max_iter: Optional[int] = None,
) -> CircleResult:
    """
    Minimizza la distorsione circolare su c (base ridotta delle omotopie).

    Ogni passo sposta gli angoli di al più circle_max_angle_step e non fa attraversare il
    cut locus a nessun lato, quindi il numero di avvolgimento resta quello del punto di
    partenza. I riavvii che cambiano l'avvolgimento sono scartati.

    Returns:
        CircleResult con coefficienti, angoli per vertice del dominio e distorsioni
    """
    model = model or CircleModel.for_complex(p.codomain)
    reduced = p.with_mode(HomotopyMode.REDUCED)
    problem = _CircleProblem(reduced, model, variant)
    n = len(reduced.homotopies)
    start = CircleStart(start)

    x0 = None
    if start == CircleStart.NEAREST:
        x0 = _nearest_start(reduced, model)
    elif start == CircleStart.LP:
        x0 = np.asarray([float(v) for v in random_vertex(reduced, seed=seed).coefficients])
    if x0 is None:
        x0 = np.zeros(n)

    cycle = cycle_vertex_order(p.domain)
    cap = settings.circle_max_angle_step

    def winding(c: np.ndarray) -> Optional[int]:
        return winding_number(problem.angles(c), cycle) if cycle else None

    def admissible(old: np.ndarray, new: np.ndarray) -> bool:
        return problem.admissible(old, new, cap)

    initial = problem.value_and_grad(x0)[0]
    target_winding = winding(x0)
    rng = np.random.default_rng(seed)
    best_x, best_value = x0, initial
    for attempt in range(restarts + 1):
        begin = x0 if attempt == 0 else x0 + restart_scale * rng.standard_normal(n)
        if attempt and winding(begin) != target_winding:
            continue
        x, value, _ = descend(problem.value_and_grad, begin, max_iter=max_iter, admissible=admissible)
        if value < best_value:
            best_x, best_value = x, value

    angles = np.mod(problem.angles(best_x), TWO_PI)
    logger.info(f"Circle distortion {initial:.6f} -> {best_value:.6f}, winding {winding(best_x)}")
    coefficients = best_x.tolist()
    return CircleResult(
        coefficients=coefficients,
        angles=angles.tolist(),
        initial_distortion=initial,
        final_distortion=best_value,
        winding_number=winding(best_x),
        start=start,
        parameterization=reduced,
        map=evaluate_map(reduced, coefficients),
    )


# ============================================================================
# DENSITÀ
# ============================================================================

@dataclass(frozen=True)
class DensityEstimate:
    """KDE gaussiana f(y) = Σ_i (1/(n h)) K((y − y_i)/h)"""

    samples: PointCloud
    bandwidth: float

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise InvalidInputError(f"Bandwidth must be positive, got {self.bandwidth}")


def _kde_terms(d: DensityEstimate, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if y.shape[1] != d.samples.dim:
        raise InvalidInputError(f"Query dimension {y.shape[1]} differs from sample dimension {d.samples.dim}")
    n, dim, h = len(d.samples), d.samples.dim, d.bandwidth
    kernel = np.exp(-0.5 * cdist(y, d.samples.points, "sqeuclidean") / h ** 2)
    return y, kernel, (2 * np.pi) ** (-dim / 2) / (n * h)


def kde_evaluate(d: DensityEstimate, y: np.ndarray) -> Union[float, np.ndarray]:
    """Valore della stima in y (vettore) o in ogni riga di y (matrice)"""
    scalar = np.asarray(y).ndim <= 1
    _, kernel, const = _kde_terms(d, y)
    values = const * kernel.sum(axis=1)
    return float(values[0]) if scalar else values


def kde_gradient(d: DensityEstimate, y: np.ndarray) -> np.ndarray:
    """∇f(y) = Σ_i (1/(n h)) K(u_i) (−u_i / h), u_i = (y − y_i)/h"""
    scalar = np.asarray(y).ndim <= 1
    points, kernel, const = _kde_terms(d, y)
    h = d.bandwidth
    grad = -const / h ** 2 * (kernel.sum(axis=1)[:, None] * points - kernel @ d.samples.points)
    return grad[0] if scalar else grad


@dataclass
class DensityResult:
    coefficients: List[float]
    image: np.ndarray
    initial_objective: float
    final_objective: float
    restarts: int
    parameterization: MapParameterization = field(repr=False)


def maximize_density(
    p: MapParameterization,
    d: DensityEstimate,
    phi: Optional[np.ndarray] = None,
    seed: int = 0,
    restarts: Optional[int] = None,
    start: Optional[Sequence[float]] = None,
    max_iter: Optional[int] = None,
) -> DensityResult:
    """
    Massimizza Σ_{σ ∈ X_0} f(ψ(g(σ))) su c (base ridotta delle omotopie).

    Il risultato non è mai peggiore del punto di partenza.

    Raises:
        InputDataError: se i vertici del codominio non hanno coordinate
    """
    restarts = settings.density_restarts if restarts is None else restarts
    reduced = p.with_mode(HomotopyMode.REDUCED)
    Y = reduced.codomain
    if phi is None:
        try:
            phi = Y.coordinates()
        except InvalidInputError as e:
            raise InputDataError(f"Density maximization needs codomain geometry: {e}") from e
    phi = np.asarray(phi, dtype=float)
    n0y, n0x = Y.count(0), reduced.domain.count(0)
    rows, cols = reduced.shape
    operator = reduced.homotopy_operator()
    n = len(reduced.homotopies)

    def fun(c: np.ndarray) -> Tuple[float, np.ndarray]:
        g0 = reduced.evaluate_array(c)[:n0y, :n0x]
        image = g0.T @ phi
        value = float(np.sum(kde_evaluate(d, image)))
        grad_g = np.zeros((rows, cols))
        grad_g[:n0y, :n0x] = phi @ kde_gradient(d, image).T
        return -value, -(operator.T @ grad_g.ravel()) if n else np.zeros(0)

    x0 = np.zeros(n) if start is None else np.asarray(start, dtype=float)
    initial = -fun(x0)[0]
    best_x, best_value = x0, initial
    if n:
        rng = np.random.default_rng(seed)
        for attempt in range(restarts + 1):
            begin = x0 if attempt == 0 else x0 + settings.density_restart_scale * rng.standard_normal(n)
            x, value, _ = descend(fun, begin, max_iter=max_iter)
            if -value > best_value:
                best_x, best_value = x, -value
    image = reduced.evaluate_array(best_x)[:n0y, :n0x].T @ phi
    logger.info(f"Density objective {initial:.6f} -> {best_value:.6f}")
    return DensityResult(best_x.tolist(), image, initial, best_value, restarts, reduced)


# ============================================================================
# MAPPER
# ============================================================================

@dataclass(frozen=True)
class MapperNode:
    id: int
    points: Tuple[int, ...]
    filter: float
    interval: int


@dataclass
class MapperGraph:
    nodes: List[MapperNode]
    edges: List[Tuple[int, int]]

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        for node in self.nodes:
            graph.add_node(node.id, filter=node.filter)
        graph.add_edges_from(self.edges)
        return graph


def coordinate_filter(points: PointCloud, axis: int = 0) -> np.ndarray:
    if not 0 <= axis < points.dim:
        raise InvalidInputError(f"Axis {axis} out of range for dimension {points.dim}")
    return points.points[:, axis].copy()


def eccentricity_filter(points: PointCloud) -> np.ndarray:
    """Distanza media di ogni punto da tutti gli altri"""
    return squareform(pdist(points.points)).mean(axis=1)


def mapper_1d(
    points: PointCloud,
    filter_values: Sequence[float],
    intervals: int,
    overlap: float,
    link_threshold: float,
) -> MapperGraph:
    """
    Grafo mapper con ricoprimento uniforme di [min f, max f].

    Ogni finestra ha lunghezza L = range / (n − (n−1)·overlap) e passo L·(1 − overlap);
    le preimmagini sono clusterizzate con single linkage alla soglia link_threshold.
    """
    values = np.asarray(filter_values, dtype=float)
    if intervals < 1:
        raise InvalidInputError(f"Mapper needs at least one interval, got {intervals}")
    if not 0 < overlap < 1:
        raise InvalidInputError(f"Overlap must be in (0, 1), got {overlap}")
    if values.shape != (len(points),):
        raise InvalidInputError("Filter needs one value per point")

    lo, hi = float(values.min()), float(values.max())
    span = hi - lo
    if span == 0:
        intervals = 1
    length = span / (intervals - (intervals - 1) * overlap)
    step = length * (1 - overlap)

    nodes: List[MapperNode] = []
    for i in range(intervals):
        left = lo + i * step
        right = hi if i == intervals - 1 else left + length
        members = np.nonzero((values >= left) & (values <= right))[0]
        if members.size == 0:
            continue
        if members.size == 1:
            labels = np.array([1])
        else:
            labels = fcluster(linkage(points.points[members], method="single"), t=link_threshold, criterion="distance")
        clusters = [members[labels == label] for label in np.unique(labels)]
        for cluster in sorted(clusters, key=lambda m: int(m.min())):
            nodes.append(MapperNode(len(nodes), tuple(int(x) for x in cluster), float(values[cluster].mean()), i))

    edges = []
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            if set(nodes[a].points) & set(nodes[b].points):
                edges.append((a, b))
    logger.info(f"Mapper graph: {len(nodes)} nodes, {len(edges)} edges")
    return MapperGraph(nodes, edges)


def quotient_local_maxima(
    graph: MapperGraph,
    values: Optional[Sequence[float]] = None,
    strict: bool = False,
    merge_parallel: bool = False,
) -> SimplicialComplex:
    """
    Quoziente del grafo sui massimi locali del filtro, identificati per componente connessa.

    Un nodo è massimo se il suo valore è >= (o > con strict) di quello di ogni vicino. I cappi
    sono scartati; i lati paralleli sono suddivisi con un vertice intermedio (uniti con
    merge_parallel=True). La filtrazione è il valore del filtro traslato in modo che il
    minimo sia 0, massimo sui lati.
    """
    nx_graph = graph.to_networkx()
    value = {node.id: node.filter for node in graph.nodes}
    if values is not None:
        if len(values) != len(graph.nodes):
            raise InvalidInputError("Quotient needs one value per node")
        value = {node.id: float(v) for node, v in zip(graph.nodes, values)}

    def is_max(v: int) -> bool:
        if strict:
            return all(value[v] > value[u] for u in nx_graph.neighbors(v))
        return all(value[v] >= value[u] for u in nx_graph.neighbors(v))

    representative: Dict[int, int] = {}
    for component in sorted(nx.connected_components(nx_graph), key=min):
        maxima = sorted(v for v in component if is_max(v))
        for v in component:
            representative[v] = maxima[0] if v in maxima else v

    classes = sorted(set(representative.values()))
    vertex_id = {rep: i for i, rep in enumerate(classes)}
    filtration_value: Dict[int, float] = {}
    for v, rep in representative.items():
        cls = vertex_id[rep]
        filtration_value[cls] = max(filtration_value.get(cls, -np.inf), value[v])

    simplices: List[Simplex] = [Simplex((i,)) for i in range(len(classes))]
    seen = set()
    next_vertex = len(classes)
    for a, b in sorted(graph.edges):
        ca, cb = sorted((vertex_id[representative[a]], vertex_id[representative[b]]))
        if ca == cb:
            continue
        if (ca, cb) not in seen:
            seen.add((ca, cb))
            simplices.append(Simplex((ca, cb)))
        elif not merge_parallel:
            mid = next_vertex
            next_vertex += 1
            filtration_value[mid] = max(filtration_value[ca], filtration_value[cb])
            simplices += [Simplex((mid,)), Simplex((ca, mid)), Simplex((cb, mid))]

    low = min(filtration_value.values(), default=0.0)
    filtration = {}
    for s in simplices:
        filtration[s] = max(filtration_value[v] for v in s.vertices) - low
    quotient = SimplicialComplex(simplices, filtration=filtration, name="quotient")
    logger.info(f"Quotient by local maxima: {len(graph.nodes)} -> {quotient.count(0)} vertices, {quotient.count(1)} edges")
    return quotient


@dataclass
class MapperMatch:
    graph_a: MapperGraph
    graph_b: MapperGraph
    quotient_a: SimplicialComplex
    quotient_b: SimplicialComplex
    parameterization: MapParameterization
    solution: NormSolution


def mapper_match(
    points_a: PointCloud,
    points_b: PointCloud,
    filter_a: Sequence[float],
    filter_b: Sequence[float],
    intervals: int,
    overlap: float,
    link_threshold: float,
    seed: int = 0,
    field: Field = QQ,
) -> MapperMatch:
    """Grafi mapper dei due insiemi, quozienti sui massimi locali e mappa di catene tra i quozienti"""
    graph_a = mapper_1d(points_a, filter_a, intervals, overlap, link_threshold)
    graph_b = mapper_1d(points_b, filter_b, intervals, overlap, link_threshold)
    quotient_a = quotient_local_maxima(graph_a)
    quotient_b = quotient_local_maxima(graph_b)
    p = chain_map_generators(quotient_a, quotient_b, field)
    solution = random_vertex(p, seed=seed)
    return MapperMatch(graph_a, graph_b, quotient_a, quotient_b, p, solution)


# ============================================================================
# COLORAZIONE
# ============================================================================

def hue_palette(vertices: Sequence[int]) -> Dict[int, Tuple[float, float, float]]:
    """Tinte equispaziate sui vertici in ordine di id"""
    n = max(len(vertices), 1)
    return {v: colorsys.hsv_to_rgb(i / n, 1.0, 1.0) for i, v in enumerate(sorted(vertices))}


@dataclass
class ColoringResult:
    domain: Dict[str, List[float]]
    raw: Dict[str, List[float]]
    clamped: Dict[str, List[float]]
    intense: List[str]
    rescaled: bool


def pushforward_coloring(g: ChainMapMatrix, mu: Dict[int, Sequence[float]], rescale: bool = False) -> ColoringResult:
    """
    μ*(τ) = μ(f*(τ)): la riga τ di G combina i colori dei simplessi del dominio, ciascuno
    media dei colori dei suoi vertici.

    Raises:
        InputDataError: se la palette non copre tutti i vertici del dominio
    """
    X, Y = g.domain, g.codomain
    missing = [v for v in X.vertices if v not in mu]
    if missing:
        raise InputDataError(f"Palette missing domain vertices {missing[:5]}")
    domain_colors = np.array([
        np.mean([np.asarray(mu[v], dtype=float) for v in s.vertices], axis=0)
        for s in X.all_simplices()
    ]).reshape(len(X), 3)
    raw = g.dense() @ domain_colors
    shown = raw
    if rescale and raw.size and raw.max() > 1:
        shown = raw / raw.max()
    clamped = np.clip(shown, 0.0, 1.0)

    keys = [s.key for s in Y.all_simplices()]
    intense = [key for key, row in zip(keys, raw) if row.sum() > 1 + settings.float_tolerance or row.max() > 1 + settings.float_tolerance]
    if intense:
        logger.info(f"{len(intense)} codomain simplices have color intensity above 1")
    return ColoringResult(
        domain={s.key: domain_colors[i].tolist() for i, s in enumerate(X.all_simplices())},
        raw={key: raw[i].tolist() for i, key in enumerate(keys)},
        clamped={key: clamped[i].tolist() for i, key in enumerate(keys)},
        intense=intense,
        rescaled=bool(rescale and shown is not raw),
    )
