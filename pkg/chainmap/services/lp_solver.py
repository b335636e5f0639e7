"""
Programmazione lineare: simplesso a tableau in due fasi con regola di Bland

Il solver interno lavora in virgola mobile (numpy float) oppure in aritmetica razionale
esatta (array numpy di Fraction). Per programmi grandi il backend "auto" passa al
simplesso duale HiGHS di scipy. Entrambi i backend restituiscono soluzioni di base.

Infeasible e unbounded sono stati del risultato, non eccezioni.
"""
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from chainmap.core.config import settings
from chainmap.core.errors import InvalidInputError, OptimizationError
from chainmap.core.models import ConstraintSense, LPStatus
from chainmap.services.algebra import QQ, RR, Matrix

logger = logging.getLogger(__name__)

Bound = Tuple[Optional[float], Optional[float]]


@dataclass(frozen=True)
class LinearProgram:
    """
    min objective·x  s.t.  constraints x (senses) rhs,  lo <= x <= hi

    Args:
        objective: Coefficienti dell'obiettivo
        constraints: Matrice dei vincoli (righe = vincoli)
        senses: Verso di ogni vincolo
        rhs: Termini noti
        bounds: (lo, hi) per variabile; None = illimitato
        labels: Nomi delle variabili (diagnostica)
    """

    objective: Tuple[Any, ...]
    constraints: Matrix
    senses: Tuple[ConstraintSense, ...]
    rhs: Tuple[Any, ...]
    bounds: Tuple[Bound, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        n, m = len(self.objective), len(self.rhs)
        if self.constraints.shape != (m, n):
            raise InvalidInputError(f"Constraint matrix shape {self.constraints.shape} does not match {m} rows x {n} variables")
        if len(self.senses) != m or len(self.bounds) != n:
            raise InvalidInputError("Senses or bounds length mismatch")
        values = [float(x) for x in self.objective] + [float(x) for x in self.rhs]
        values += [float(v) for _, _, v in self.constraints.items()]
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("Linear program has non-finite coefficients")
        for lo, hi in self.bounds:
            if lo is not None and hi is not None and lo > hi:
                raise InvalidInputError(f"Empty bound [{lo}, {hi}]")

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    @property
    def n_constraints(self) -> int:
        return len(self.rhs)

    def with_constraint(self, row: Dict[int, Any], sense: ConstraintSense, rhs: Any) -> "LinearProgram":
        """Aggiunge un vincolo (riga sparsa indice -> coefficiente)"""
        entries = list(self.constraints.items())
        m = self.n_constraints
        entries += [(m, j, v) for j, v in row.items()]
        matrix = Matrix.from_entries(m + 1, self.n_vars, entries, self.constraints.field)
        return replace(self, constraints=matrix, senses=self.senses + (ConstraintSense(sense),), rhs=self.rhs + (rhs,))

    def with_objective(self, objective: Sequence[Any]) -> "LinearProgram":
        if len(objective) != self.n_vars:
            raise InvalidInputError(f"Objective length {len(objective)} differs from {self.n_vars} variables")
        return replace(self, objective=tuple(objective))


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    value: Optional[Any]
    x: Optional[List[Any]]
    is_vertex: bool
    iterations: int
    backend: str


# ============================================================================
# FORMA STANDARD
# ============================================================================

class _StandardForm:
    """
    Riduzione a min c'y, A y = b, y >= 0, b >= 0 con slack, surplus e artificiali.

    Ogni variabile originale è x_j = shift_j + Σ coef * y_k.
    """

    def __init__(self, lp: LinearProgram, exact: bool):
        self.exact = exact
        conv = (lambda v: QQ.convert(v) if not isinstance(v, float) else Fraction(v)) if exact else float
        self.conv = conv
        zero = conv(0)

        self.substitution: List[Tuple[Any, List[Tuple[int, Any]]]] = []
        n_struct = 0
        extra_rows: List[Tuple[int, Any]] = []
        for lo, hi in lp.bounds:
            if lo is not None:
                self.substitution.append((conv(lo), [(n_struct, conv(1))]))
                if hi is not None:
                    extra_rows.append((n_struct, conv(hi) - conv(lo)))
                n_struct += 1
            elif hi is not None:
                self.substitution.append((conv(hi), [(n_struct, conv(-1))]))
                n_struct += 1
            else:
                self.substitution.append((zero, [(n_struct, conv(1)), (n_struct + 1, conv(-1))]))
                n_struct += 2
        self.n_struct = n_struct

        # righe: (coefficienti strutturali densi, verso, termine noto)
        rows = []
        dense = lp.constraints.to_numpy(dtype=object)
        for i in range(lp.n_constraints):
            coeffs = [zero] * n_struct
            rhs = conv(lp.rhs[i])
            for j in range(lp.n_vars):
                a = conv(dense[i, j])
                if a == 0:
                    continue
                shift, terms = self.substitution[j]
                rhs -= a * shift
                for k, coef in terms:
                    coeffs[k] += a * coef
            rows.append((coeffs, ConstraintSense(lp.senses[i]), rhs))
        for k, width in extra_rows:
            coeffs = [zero] * n_struct
            coeffs[k] = conv(1)
            rows.append((coeffs, ConstraintSense.LE, width))

        self.cost = [zero] * n_struct
        self.constant = zero
        for j, c in enumerate(lp.objective):
            c = conv(c)
            shift, terms = self.substitution[j]
            self.constant += c * shift
            for k, coef in terms:
                self.cost[k] += c * coef

        # normalizza b >= 0 e assegna slack/surplus/artificiali
        normalized = []
        for coeffs, sense, rhs in rows:
            if rhs < 0:
                coeffs = [-a for a in coeffs]
                rhs = -rhs
                sense = {ConstraintSense.LE: ConstraintSense.GE, ConstraintSense.GE: ConstraintSense.LE}.get(sense, sense)
            normalized.append((coeffs, sense, rhs))

        n_slack = sum(1 for _, s, _ in normalized if s != ConstraintSense.EQ)
        n_art = sum(1 for _, s, _ in normalized if s != ConstraintSense.LE)
        m = len(normalized)
        width = n_struct + n_slack + n_art
        dtype = object if exact else float
        table = np.empty((m, width + 1), dtype=dtype)
        table[:, :] = zero
        basis = []
        slack_col, art_col = n_struct, n_struct + n_slack
        self.artificial = list(range(n_struct + n_slack, width))
        for i, (coeffs, sense, rhs) in enumerate(normalized):
            table[i, :n_struct] = coeffs
            table[i, -1] = rhs
            if sense == ConstraintSense.LE:
                table[i, slack_col] = conv(1)
                basis.append(slack_col)
                slack_col += 1
            elif sense == ConstraintSense.GE:
                table[i, slack_col] = conv(-1)
                slack_col += 1
                table[i, art_col] = conv(1)
                basis.append(art_col)
                art_col += 1
            else:
                table[i, art_col] = conv(1)
                basis.append(art_col)
                art_col += 1
        self.table = table
        self.basis = basis
        self.width = width

    def recover(self, y: Sequence[Any]) -> List[Any]:
        return [shift + sum(coef * y[k] for k, coef in terms) for shift, terms in self.substitution]


# ============================================================================
# SIMPLESSO A TABLEAU
# ============================================================================

class _Tableau:
    def __init__(self, table: np.ndarray, basis: List[int], exact: bool, max_iterations: int):
        self.table = table
        self.basis = basis
        self.exact = exact
        self.eps = 0 if exact else settings.float_tolerance
        self.max_iterations = max_iterations
        self.iterations = 0

    def _objective_row(self, cost: Sequence[Any]) -> np.ndarray:
        row = np.empty(self.table.shape[1], dtype=self.table.dtype)
        row[:] = 0 if not self.exact else Fraction(0)
        row[: len(cost)] = cost
        for r, b in enumerate(self.basis):
            if row[b] != 0:
                row -= row[b] * self.table[r]
        return row

    def _pivot(self, obj: np.ndarray, r: int, col: int) -> None:
        t = self.table
        t[r] = t[r] / t[r, col]
        for i in range(t.shape[0]):
            if i != r and t[i, col] != 0:
                t[i] = t[i] - t[i, col] * t[r]
        if obj[col] != 0:
            obj -= obj[col] * t[r]
        if not self.exact:
            t[np.abs(t) <= self.eps] = 0.0
            obj[np.abs(obj) <= self.eps] = 0.0
        self.basis[r] = col

    def run(self, cost: Sequence[Any], allowed: int) -> Tuple[LPStatus, np.ndarray]:
        """Minimizza cost sulle prime `allowed` colonne con la regola di Bland"""
        obj = self._objective_row(cost)
        while True:
            if self.iterations >= self.max_iterations:
                raise OptimizationError(f"Simplex iteration limit {self.max_iterations} reached")
            entering = next((j for j in range(allowed) if obj[j] < -self.eps), None)
            if entering is None:
                return LPStatus.OPTIMAL, obj
            column = self.table[:, entering]
            best, leaving = None, None
            for r in range(self.table.shape[0]):
                if column[r] > self.eps:
                    ratio = self.table[r, -1] / column[r]
                    if best is None or ratio < best or (ratio == best and self.basis[r] < self.basis[leaving]):
                        best, leaving = ratio, r
            if leaving is None:
                return LPStatus.UNBOUNDED, obj
            self._pivot(obj, leaving, entering)
            self.iterations += 1

    def drive_out(self, artificial: Sequence[int], allowed: int) -> None:
        """Porta fuori base le artificiali residue; elimina le righe ridondanti"""
        art = set(artificial)
        keep = []
        dummy = np.zeros(self.table.shape[1], dtype=self.table.dtype)
        for r in range(self.table.shape[0]):
            if self.basis[r] in art:
                col = next((j for j in range(allowed) if abs(self.table[r, j]) > self.eps), None)
                if col is None:
                    continue
                self._pivot(dummy, r, col)
            keep.append(r)
        self.table = self.table[keep]
        self.basis = [self.basis[r] for r in keep]


def _solve_simplex(lp: LinearProgram, exact: bool, max_iterations: int) -> LPResult:
    std = _StandardForm(lp, exact)
    zero = std.conv(0)
    tableau = _Tableau(std.table, std.basis, exact, max_iterations)

    if std.artificial:
        phase1_cost = [zero] * std.width
        for a in std.artificial:
            phase1_cost[a] = std.conv(1)
        _, obj = tableau.run(phase1_cost, std.width)
        infeasibility = -obj[-1]
        if infeasibility > (0 if exact else settings.lp_optimum_slack * 100):
            logger.debug(f"Phase 1 ended with infeasibility {float(infeasibility):.3e}")
            return LPResult(LPStatus.INFEASIBLE, None, None, False, tableau.iterations, "simplex")
        tableau.drive_out(std.artificial, std.artificial[0])
        allowed = std.artificial[0]
    else:
        allowed = std.width

    tableau.table = tableau.table[:, list(range(allowed)) + [std.width]]
    cost = list(std.cost) + [zero] * (allowed - std.n_struct)
    status, _ = tableau.run(cost, allowed)
    if status == LPStatus.UNBOUNDED:
        return LPResult(LPStatus.UNBOUNDED, None, None, False, tableau.iterations, "simplex")

    y = [zero] * allowed
    for r, b in enumerate(tableau.basis):
        y[b] = tableau.table[r, -1]
    x = std.recover(y)
    value = sum((std.conv(c) * xi for c, xi in zip(lp.objective, x)), zero)
    if not exact:
        x = [float(v) for v in x]
        value = float(value)
    return LPResult(LPStatus.OPTIMAL, value, x, True, tableau.iterations, "simplex")


def _solve_highs(lp: LinearProgram) -> LPResult:
    c = np.array([float(v) for v in lp.objective])
    a = sparse.csr_matrix(lp.constraints.convert(RR).to_numpy(dtype=float)) if lp.n_constraints else None
    rhs = np.array([float(v) for v in lp.rhs])
    senses = np.array([ConstraintSense(s) for s in lp.senses])
    ub_rows = [i for i, s in enumerate(senses) if s != ConstraintSense.EQ]
    eq_rows = [i for i, s in enumerate(senses) if s == ConstraintSense.EQ]
    sign = np.array([1.0 if senses[i] == ConstraintSense.LE else -1.0 for i in ub_rows])

    kwargs: Dict[str, Any] = {}
    if ub_rows:
        kwargs["A_ub"] = sparse.diags(sign) @ a[ub_rows]
        kwargs["b_ub"] = sign * rhs[ub_rows]
    if eq_rows:
        kwargs["A_eq"] = a[eq_rows]
        kwargs["b_eq"] = rhs[eq_rows]
    bounds = [(None if lo is None else float(lo), None if hi is None else float(hi)) for lo, hi in lp.bounds]
    res = linprog(c, bounds=bounds, method="highs-ds", **kwargs)

    if res.status == 0:
        return LPResult(LPStatus.OPTIMAL, float(res.fun), [float(v) for v in res.x], True, int(res.nit), "highs")
    if res.status == 2:
        return LPResult(LPStatus.INFEASIBLE, None, None, False, int(res.nit), "highs")
    if res.status == 3:
        return LPResult(LPStatus.UNBOUNDED, None, None, False, int(res.nit), "highs")
    raise OptimizationError(f"HiGHS stopped with status {res.status}: {res.message}")


def solve_lp(
    lp: LinearProgram,
    exact: bool = False,
    backend: Optional[str] = None,
    max_iterations: Optional[int] = None,
) -> LPResult:
    """
    Risolve un programma lineare restituendo una soluzione di base ottima.

    Args:
        lp: Programma lineare
        exact: Aritmetica razionale esatta (solo backend simplex)
        backend: "auto", "simplex" o "highs" (default da settings)
        max_iterations: Limite di pivot del simplesso (default da settings)

    Returns:
        LPResult con stato, valore ottimo, variabili e flag di vertice
    """
    backend = backend or settings.lp_backend
    if backend not in ("auto", "simplex", "highs"):
        raise InvalidInputError(f"Unknown LP backend {backend!r}")
    if backend == "auto":
        backend = "simplex" if exact or lp.n_vars <= settings.lp_simplex_max_vars else "highs"
    if exact and backend != "simplex":
        raise InvalidInputError("Exact LP solving needs the simplex backend")

    if backend == "highs":
        result = _solve_highs(lp)
    else:
        result = _solve_simplex(lp, exact, max_iterations or settings.lp_max_iterations)
    logger.debug(f"LP {lp.n_constraints}x{lp.n_vars} via {result.backend}: {result.status.value} in {result.iterations} pivots")
    return result
