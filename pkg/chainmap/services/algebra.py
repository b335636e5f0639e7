"""
Algebra lineare generica sul campo dei coefficienti

Tre campi supportati:
1. Razionali esatti (fractions.Fraction, sempre ridotti ai minimi termini)
2. Z/2 (interi in {0, 1})
3. Reali in virgola mobile (float, zero sotto soglia assoluta settings.float_tolerance)

L'eliminazione procede per colonne, nell'ordine delle colonne, con pivot sul primo
indice non nullo. Nessuna euristica di pivoting: il risultato è deterministico.
"""
import logging
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Real
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from chainmap.core.config import settings
from chainmap.core.errors import InvalidInputError
from chainmap.core.models import FieldName

logger = logging.getLogger(__name__)


# ============================================================================
# CAMPI
# ============================================================================

class Field:
    """Campo dei coefficienti: conversione, operazioni elementari, test di nullità"""

    name: FieldName = FieldName.Q
    exact: bool = True

    def convert(self, value: Any) -> Any:
        raise NotImplementedError

    def check(self, value: Any) -> bool:
        """True se value è già un elemento canonico di questo campo"""
        raise NotImplementedError

    def zero(self) -> Any:
        return self.convert(0)

    def one(self) -> Any:
        return self.convert(1)

    def is_zero(self, value: Any) -> bool:
        return value == 0

    def add(self, a: Any, b: Any) -> Any:
        return a + b

    def sub(self, a: Any, b: Any) -> Any:
        return a - b

    def mul(self, a: Any, b: Any) -> Any:
        return a * b

    def neg(self, a: Any) -> Any:
        return -a

    def div(self, a: Any, b: Any) -> Any:
        if self.is_zero(b):
            raise ZeroDivisionError(f"Division by zero in field {self.name.value}")
        return a / b

    def __repr__(self) -> str:
        return f"Field({self.name.value})"


class RationalField(Field):
    name = FieldName.Q
    exact = True

    def convert(self, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            return Fraction(int(value))
        if isinstance(value, Integral):
            return Fraction(int(value))
        if isinstance(value, str):
            try:
                return Fraction(value)
            except ValueError as e:
                raise InvalidInputError(f"Cannot parse rational value {value!r}") from e
        raise InvalidInputError(f"Mixed-field input: {type(value).__name__} value {value!r} in exact rational field")

    def check(self, value: Any) -> bool:
        return isinstance(value, Fraction)


class Z2Field(Field):
    name = FieldName.Z2
    exact = True

    def convert(self, value: Any) -> int:
        if isinstance(value, (bool, Integral)):
            return int(value) % 2
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % 2 == 0:
                raise InvalidInputError(f"Value {value} has no residue modulo 2")
            return value.numerator % 2
        raise InvalidInputError(f"Mixed-field input: {type(value).__name__} value {value!r} in Z/2")

    def check(self, value: Any) -> bool:
        return isinstance(value, int) and not isinstance(value, bool) and value in (0, 1)

    def add(self, a: int, b: int) -> int:
        return (a + b) % 2

    def sub(self, a: int, b: int) -> int:
        return (a + b) % 2

    def mul(self, a: int, b: int) -> int:
        return (a * b) % 2

    def neg(self, a: int) -> int:
        return a

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("Division by zero in field z2")
        return a


class RealField(Field):
    name = FieldName.REAL
    exact = False

    def convert(self, value: Any) -> float:
        if isinstance(value, str):
            return float(Fraction(value))
        if isinstance(value, (Real, Fraction)):
            return float(value)
        raise InvalidInputError(f"Cannot convert {value!r} to a floating value")

    def check(self, value: Any) -> bool:
        return isinstance(value, float)

    def is_zero(self, value: float) -> bool:
        return abs(value) <= settings.float_tolerance


QQ = RationalField()
GF2 = Z2Field()
RR = RealField()

_FIELDS = {FieldName.Q: QQ, FieldName.Z2: GF2, FieldName.REAL: RR}


def field_for(name: Any) -> Field:
    """Restituisce il campo associato a un nome ("q", "z2", "real")"""
    try:
        return _FIELDS[FieldName(name)]
    except ValueError as e:
        raise InvalidInputError(f"Unknown field {name!r}") from e


def _axpy(target: Dict[int, Any], source: Iterable[Tuple[int, Any]], scale: Any, field: Field) -> None:
    """target += scale * source, eliminando gli zeri"""
    for idx, value in source:
        updated = field.add(target.get(idx, field.zero()), field.mul(scale, value))
        if field.is_zero(updated):
            target.pop(idx, None)
        else:
            target[idx] = updated


# ============================================================================
# VETTORI E MATRICI SPARSE
# ============================================================================

@dataclass(frozen=True)
class SparseVector:
    """Vettore sparso: coppie (indice, coefficiente) con indici crescenti e senza zeri"""

    dim: int
    entries: Tuple[Tuple[int, Any], ...]
    field: Field

    @classmethod
    def from_dict(cls, dim: int, values: Dict[int, Any], field: Field) -> "SparseVector":
        entries = []
        for idx in sorted(values):
            if not 0 <= idx < dim:
                raise InvalidInputError(f"Index {idx} out of range for dimension {dim}")
            value = field.convert(values[idx])
            if not field.is_zero(value):
                entries.append((idx, value))
        return cls(dim, tuple(entries), field)

    @classmethod
    def from_dense(cls, values: Sequence[Any], field: Field) -> "SparseVector":
        return cls.from_dict(len(values), dict(enumerate(values)), field)

    @classmethod
    def unit(cls, dim: int, index: int, field: Field) -> "SparseVector":
        return cls.from_dict(dim, {index: 1}, field)

    @classmethod
    def zero(cls, dim: int, field: Field) -> "SparseVector":
        return cls(dim, (), field)

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(idx for idx, _ in self.entries)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: int) -> Any:
        pos = bisect_left(self.indices, index)
        if pos < len(self.entries) and self.entries[pos][0] == index:
            return self.entries[pos][1]
        return self.field.zero()

    def to_dict(self) -> Dict[int, Any]:
        return dict(self.entries)

    def to_dense(self) -> List[Any]:
        dense = [self.field.zero()] * self.dim
        for idx, value in self.entries:
            dense[idx] = value
        return dense

    def is_zero(self) -> bool:
        return not self.entries

    def leading(self) -> Optional[int]:
        return self.entries[0][0] if self.entries else None

    def _check_compatible(self, other: "SparseVector") -> None:
        if other.field is not self.field:
            raise InvalidInputError(f"Mixed-field input: {self.field} and {other.field}")
        if other.dim != self.dim:
            raise InvalidInputError(f"Dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "SparseVector") -> "SparseVector":
        self._check_compatible(other)
        acc = self.to_dict()
        _axpy(acc, other.entries, self.field.one(), self.field)
        return SparseVector(self.dim, tuple(sorted(acc.items())), self.field)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        self._check_compatible(other)
        acc = self.to_dict()
        _axpy(acc, other.entries, self.field.neg(self.field.one()), self.field)
        return SparseVector(self.dim, tuple(sorted(acc.items())), self.field)

    def scale(self, factor: Any) -> "SparseVector":
        factor = self.field.convert(factor)
        acc: Dict[int, Any] = {}
        _axpy(acc, self.entries, factor, self.field)
        return SparseVector(self.dim, tuple(sorted(acc.items())), self.field)

    def normalized(self) -> "SparseVector":
        """Riscala in modo che il primo coefficiente non nullo valga 1"""
        if not self.entries:
            return self
        return self.scale(self.field.div(self.field.one(), self.entries[0][1]))


@dataclass(frozen=True)
class Matrix:
    """Matrice sparsa per colonne: per ogni colonna le coppie (riga, valore) ordinate"""

    rows: int
    cols: int
    columns: Tuple[Tuple[Tuple[int, Any], ...], ...]
    field: Field

    # ------------------------------------------------------------------
    # Costruttori
    # ------------------------------------------------------------------

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Dict[int, Any]], field: Field) -> "Matrix":
        stored = []
        for col in columns:
            entries = []
            for r in sorted(col):
                if not 0 <= r < rows:
                    raise InvalidInputError(f"Row index {r} out of range for {rows} rows")
                value = field.convert(col[r])
                if not field.is_zero(value):
                    entries.append((r, value))
            stored.append(tuple(entries))
        return cls(rows, len(stored), tuple(stored), field)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Tuple[int, int, Any]], field: Field) -> "Matrix":
        """Costruisce da triple (riga, colonna, valore); i duplicati si sommano"""
        acc: List[Dict[int, Any]] = [dict() for _ in range(cols)]
        for r, c, value in entries:
            if not 0 <= c < cols:
                raise InvalidInputError(f"Column index {c} out of range for {cols} columns")
            _axpy(acc[c], [(r, field.convert(value))], field.one(), field)
        return cls.from_columns(rows, acc, field)

    @classmethod
    def from_dense(cls, values: Sequence[Sequence[Any]], field: Field, cols: Optional[int] = None) -> "Matrix":
        rows = len(values)
        if cols is None:
            cols = len(values[0]) if rows else 0
        if any(len(row) != cols for row in values):
            raise InvalidInputError("Ragged dense matrix")
        columns = [{r: values[r][c] for r in range(rows)} for c in range(cols)]
        return cls.from_columns(rows, columns, field)

    @classmethod
    def from_numpy(cls, array: np.ndarray, field: Field = RR) -> "Matrix":
        array = np.asarray(array)
        if array.ndim != 2:
            raise InvalidInputError(f"Expected a 2-d array, got shape {array.shape}")
        rows, cols = array.shape
        columns = []
        for c in range(cols):
            nz = np.nonzero(array[:, c])[0]
            columns.append({int(r): array[r, c].item() if hasattr(array[r, c], "item") else array[r, c] for r in nz})
        return cls.from_columns(rows, columns, field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> "Matrix":
        return cls(rows, cols, tuple(() for _ in range(cols)), field)

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        return cls(n, n, tuple(((j, field.one()),) for j in range(n)), field)

    # ------------------------------------------------------------------
    # Accesso
    # ------------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(col) for col in self.columns)

    def column(self, j: int) -> SparseVector:
        return SparseVector(self.rows, self.columns[j], self.field)

    def column_dict(self, j: int) -> Dict[int, Any]:
        return dict(self.columns[j])

    def entry(self, i: int, j: int) -> Any:
        for r, value in self.columns[j]:
            if r == i:
                return value
        return self.field.zero()

    def items(self) -> Iterator[Tuple[int, int, Any]]:
        for c, col in enumerate(self.columns):
            for r, value in col:
                yield r, c, value

    def is_zero(self) -> bool:
        return all(not col for col in self.columns)

    def column_counts(self) -> List[int]:
        return [len(col) for col in self.columns]

    def row_counts(self) -> List[int]:
        counts = [0] * self.rows
        for r, _, _ in self.items():
            counts[r] += 1
        return counts

    def to_dense(self) -> List[List[Any]]:
        dense = [[self.field.zero()] * self.cols for _ in range(self.rows)]
        for r, c, value in self.items():
            dense[r][c] = value
        return dense

    def to_numpy(self, dtype: Any = float) -> np.ndarray:
        """Copia densa; dtype=object conserva i valori esatti"""
        if dtype is object:
            array = np.empty((self.rows, self.cols), dtype=object)
            array[:, :] = self.field.zero()
        else:
            array = np.zeros((self.rows, self.cols), dtype=dtype)
        for r, c, value in self.items():
            array[r, c] = value if dtype is object else float(value)
        return array

    def block(self, row_start: int, row_stop: int, col_start: int, col_stop: int) -> "Matrix":
        columns = []
        for c in range(col_start, col_stop):
            columns.append(tuple((r - row_start, v) for r, v in self.columns[c] if row_start <= r < row_stop))
        return Matrix(row_stop - row_start, col_stop - col_start, tuple(columns), self.field)

    # ------------------------------------------------------------------
    # Operazioni
    # ------------------------------------------------------------------

    def _check_field(self, other: Any) -> None:
        if other.field is not self.field:
            raise InvalidInputError(f"Mixed-field input: {self.field} and {other.field}")

    def convert(self, field: Field) -> "Matrix":
        if field is self.field:
            return self
        return Matrix.from_columns(self.rows, [self.column_dict(j) for j in range(self.cols)], field)

    def transpose(self) -> "Matrix":
        acc: List[List[Tuple[int, Any]]] = [[] for _ in range(self.rows)]
        for r, c, value in self.items():
            acc[r].append((c, value))
        return Matrix(self.cols, self.rows, tuple(tuple(col) for col in acc), self.field)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def __matmul__(self, other: Any) -> Any:
        if isinstance(other, SparseVector):
            self._check_field(other)
            if other.dim != self.cols:
                raise InvalidInputError(f"Dimension mismatch: {self.shape} @ vector of dim {other.dim}")
            acc: Dict[int, Any] = {}
            for k, value in other.entries:
                _axpy(acc, self.columns[k], value, self.field)
            return SparseVector(self.rows, tuple(sorted(acc.items())), self.field)
        if isinstance(other, Matrix):
            self._check_field(other)
            if other.rows != self.cols:
                raise InvalidInputError(f"Dimension mismatch: {self.shape} @ {other.shape}")
            columns = []
            for col in other.columns:
                acc = {}
                for k, value in col:
                    _axpy(acc, self.columns[k], value, self.field)
                columns.append(tuple(sorted(acc.items())))
            return Matrix(self.rows, other.cols, tuple(columns), self.field)
        return NotImplemented

    def _combine(self, other: "Matrix", scale: Any) -> "Matrix":
        self._check_field(other)
        if other.shape != self.shape:
            raise InvalidInputError(f"Shape mismatch: {self.shape} vs {other.shape}")
        columns = []
        for mine, theirs in zip(self.columns, other.columns):
            acc = dict(mine)
            _axpy(acc, theirs, scale, self.field)
            columns.append(tuple(sorted(acc.items())))
        return Matrix(self.rows, self.cols, tuple(columns), self.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, self.field.one())

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, self.field.neg(self.field.one()))

    def __neg__(self) -> "Matrix":
        return self.scale(self.field.neg(self.field.one()))

    def scale(self, factor: Any) -> "Matrix":
        factor = self.field.convert(factor)
        columns = []
        for col in self.columns:
            acc: Dict[int, Any] = {}
            _axpy(acc, col, factor, self.field)
            columns.append(tuple(sorted(acc.items())))
        return Matrix(self.rows, self.cols, tuple(columns), self.field)

    def equals(self, other: "Matrix") -> bool:
        """Uguaglianza esatta (o entro la soglia per i reali)"""
        if self.shape != other.shape or other.field is not self.field:
            return False
        return (self - other).is_zero()

    def validate(self) -> None:
        """Verifica che ogni valore memorizzato appartenga al campo della matrice"""
        for r, c, value in self.items():
            if not self.field.check(value):
                raise InvalidInputError(
                    f"Mixed-field input: entry ({r}, {c}) = {value!r} is not an element of {self.field}"
                )


def linear_combination(matrices: Sequence[Matrix], coefficients: Sequence[Any], rows: int, cols: int, field: Field) -> Matrix:
    """Σ coefficients[k] * matrices[k], con accumulo per colonne"""
    if len(matrices) != len(coefficients):
        raise InvalidInputError(f"Length mismatch: {len(matrices)} matrices, {len(coefficients)} coefficients")
    acc: List[Dict[int, Any]] = [dict() for _ in range(cols)]
    for mat, coef in zip(matrices, coefficients):
        coef = field.convert(coef)
        if field.is_zero(coef):
            continue
        mat = mat.convert(field)
        for c, col in enumerate(mat.columns):
            if col:
                _axpy(acc[c], col, coef, field)
    return Matrix(rows, cols, tuple(tuple(sorted(col.items())) for col in acc), field)


# ============================================================================
# ELIMINAZIONE
# ============================================================================

class Echelon:
    """
    Base a scalini indicizzata dall'indice guida (primo indice non nullo).

    Ogni vettore inserito ha un indice guida distinto; un vettore appartiene allo
    span se e solo se la sua riduzione si annulla. Opzionalmente tiene traccia della
    combinazione dei vettori sorgente che produce ciascun pivot.
    """

    def __init__(self, field: Field):
        self.field = field
        self._pivots: Dict[int, Tuple[Dict[int, Any], Optional[Dict[int, Any]]]] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    @property
    def leads(self) -> List[int]:
        return sorted(self._pivots)

    def reduce(self, values: Dict[int, Any], combo: Optional[Dict[int, Any]] = None) -> Tuple[Dict[int, Any], Optional[Dict[int, Any]]]:
        f = self.field
        vec = dict(values)
        while vec:
            lead = min(vec)
            pivot = self._pivots.get(lead)
            if pivot is None:
                break
            pvec, pcombo = pivot
            factor = f.neg(f.div(vec[lead], pvec[lead]))
            _axpy(vec, pvec.items(), factor, f)
            if combo is not None and pcombo is not None:
                _axpy(combo, pcombo.items(), factor, f)
        return vec, combo

    def insert(self, residue: Dict[int, Any], combo: Optional[Dict[int, Any]] = None) -> int:
        if not residue:
            raise InvalidInputError("Cannot insert a zero vector into an echelon basis")
        lead = min(residue)
        if lead in self._pivots:
            raise InvalidInputError(f"Lead {lead} already present; reduce the vector first")
        self._pivots[lead] = (residue, combo)
        return lead


@dataclass(frozen=True)
class Reduction:
    """Esito dell'eliminazione di una matrice"""
    rank: int
    pivots: Tuple[int, ...]
    kernel_basis: Tuple[SparseVector, ...]
    image_basis: Tuple[SparseVector, ...]


def row_reduce(m: Matrix, with_kernel: bool = True) -> Reduction:
    """
    Eliminazione gaussiana per colonne con pivot sul primo indice non nullo.

    Le colonne sono processate in ordine: una colonna è pivot se non appartiene allo
    span delle precedenti, altrimenti la combinazione che la annulla è un vettore del
    nucleo della forma e_j - Σ (pivot precedenti).

    Args:
        m: Matrice su un unico campo
        with_kernel: Se False salta il tracciamento delle combinazioni (solo rango e pivot)

    Returns:
        Reduction con rango, colonne pivot, base del nucleo e base dell'immagine
        (le colonne originali in posizione pivot)
    """
    m.validate()
    f = m.field
    echelon = Echelon(f)
    pivots: List[int] = []
    kernel: List[SparseVector] = []
    for j in range(m.cols):
        combo = {j: f.one()} if with_kernel else None
        residue, combo = echelon.reduce(m.column_dict(j), combo)
        if residue:
            echelon.insert(residue, combo)
            pivots.append(j)
        elif with_kernel:
            kernel.append(SparseVector(m.cols, tuple(sorted(combo.items())), f))
    image = tuple(m.column(j) for j in pivots)
    logger.debug(f"Row reduction of {m.rows}x{m.cols} over {f.name.value}: rank {len(pivots)}")
    return Reduction(rank=len(pivots), pivots=tuple(pivots), kernel_basis=tuple(kernel), image_basis=image)


def rank(m: Matrix) -> int:
    return row_reduce(m, with_kernel=False).rank


def solve_membership(basis: Sequence[SparseVector], v: SparseVector) -> Optional[List[Any]]:
    """
    Esprime v come combinazione lineare dei vettori di basis.

    Args:
        basis: Vettori generatori (anche linearmente dipendenti)
        v: Vettore da esprimere

    Returns:
        Coefficienti c con Σ c_i basis_i = v, oppure None se v non è nello span.
        Ai vettori dipendenti dai precedenti viene assegnato coefficiente 0.
    """
    f = v.field
    for b in basis:
        if b.dim != v.dim:
            raise InvalidInputError(f"Dimension mismatch: basis vector of dim {b.dim}, target of dim {v.dim}")
        if b.field is not f:
            raise InvalidInputError(f"Mixed-field input: {b.field} and {f}")

    echelon = Echelon(f)
    for i, b in enumerate(basis):
        residue, combo = echelon.reduce(b.to_dict(), {i: f.one()})
        if residue:
            echelon.insert(residue, combo)

    residue, combo = echelon.reduce(v.to_dict(), {})
    if residue:
        return None
    return [f.neg(combo.get(i, f.zero())) for i in range(len(basis))]
