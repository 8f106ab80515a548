"""Exact sparse linear algebra over F_p.

Vectors are dicts from a hashable key (a column index, or a vector-field term)
to a nonzero residue. ``EchelonBasis`` keeps its rows in fully reduced echelon
form as vectors are inserted, which gives rank, membership with coefficients,
and kernel bases without a second pass. Small dense matrices go through a
numpy elimination instead.
"""

from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Generic, TypeVar

import numpy as np

from app.core.config import settings

logger = logging.getLogger(__name__)

K = TypeVar("K", bound=Hashable)


def axpy(target: dict, source: Mapping, scale: int, p: int) -> None:
    """target += scale * source, in place, dropping zeros."""
    for key, value in source.items():
        total = (target.get(key, 0) + scale * value) % p
        if total:
            target[key] = total
        else:
            target.pop(key, None)


@dataclass(frozen=True)
class SparseMatrix:
    """rows x cols matrix over F_p stored as (row, col, value) triples."""

    rows: int
    cols: int
    p: int
    entries: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self) -> None:
        seen: set[tuple[int, int]] = set()
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
            if v % self.p == 0:
                raise ValueError("explicit zero entry")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry ({r}, {c})")
            seen.add((r, c))

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, int]], cols: int, p: int) -> SparseMatrix:
        entries = tuple(
            (r, c, v % p) for r, row in enumerate(rows) for c, v in sorted(row.items()) if v % p
        )
        return cls(len(rows), cols, p, entries)

    @classmethod
    def from_dense(cls, matrix: Sequence[Sequence[int]], p: int) -> SparseMatrix:
        cols = len(matrix[0]) if matrix else 0
        return cls.from_rows([dict(enumerate(row)) for row in matrix], cols, p)

    def row_dicts(self) -> list[dict[int, int]]:
        rows: list[dict[int, int]] = [{} for _ in range(self.rows)]
        for r, c, v in self.entries:
            rows[r][c] = v % self.p
        return rows

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols), dtype=np.int64)
        for r, c, v in self.entries:
            dense[r, c] = v % self.p
        return dense

    @property
    def density(self) -> float:
        cells = self.rows * self.cols
        return len(self.entries) / cells if cells else 0.0

    def matvec(self, vector: Mapping[int, int]) -> dict[int, int]:
        result: dict[int, int] = {}
        for r, c, v in self.entries:
            x = vector.get(c, 0)
            if x:
                result[r] = (result.get(r, 0) + v * x) % self.p
        return {r: v for r, v in result.items() if v}


@dataclass
class _Row(Generic[K]):
    pivot: K
    vector: dict[K, int]
    combination: dict[int, int] = field(default_factory=dict)


class EchelonBasis(Generic[K]):
    """Incrementally maintained reduced row echelon form over F_p.

    Each row has a pivot key with coefficient 1 and no entries on any other
    row's pivot. With ``markowitz`` set, the pivot of a new row is the key
    shared with the fewest existing rows (least back-elimination fill);
    otherwise it is the smallest key under ``sort_key``.
    """

    def __init__(
        self,
        p: int,
        *,
        markowitz: bool = False,
        sort_key=None,
        track: bool = False,
    ) -> None:
        self.p = p
        self.markowitz = markowitz
        self.sort_key = sort_key
        self.track = track
        self.rows: dict[K, _Row[K]] = {}
        # non-pivot key -> pivots of the rows that contain it
        self.occurrences: dict[K, set[K]] = {}
        self.inserted = 0

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[K]:
        return list(self.rows)

    def reduce(self, vector: Mapping[K, int]) -> tuple[dict[K, int], dict[int, int]]:
        """Remainder of vector modulo the row space, and the row-space part's
        coefficients over the inserted vectors (empty unless tracking)."""
        p = self.p
        remainder = {k: v % p for k, v in vector.items() if v % p}
        combination: dict[int, int] = {}
        for key in [k for k in remainder if k in self.rows]:
            coeff = remainder.get(key, 0)
            if not coeff:
                continue
            row = self.rows[key]
            axpy(remainder, row.vector, -coeff, p)
            if self.track:
                axpy(combination, row.combination, coeff, p)
        return remainder, combination

    def contains(self, vector: Mapping[K, int]) -> bool:
        remainder, _ = self.reduce(vector)
        return not remainder

    def coordinates(self, vector: Mapping[K, int]) -> dict[int, int] | None:
        """Coefficients of vector over the inserted vectors, None if outside the span."""
        remainder, combination = self.reduce(vector)
        return None if remainder else combination

    def add(self, vector: Mapping[K, int]) -> bool:
        """Insert a vector; True when it enlarged the span."""
        index = self.inserted
        self.inserted += 1
        p = self.p
        remainder, combination = self.reduce(vector)
        if not remainder:
            return False
        if self.track:
            combination = {i: -c % p for i, c in combination.items()}
            combination[index] = (combination.get(index, 0) + 1) % p
            combination = {i: c for i, c in combination.items() if c}
        pivot = self._choose_pivot(remainder)
        scale = pow(remainder[pivot], -1, p)
        if scale != 1:
            remainder = {k: v * scale % p for k, v in remainder.items()}
            combination = {i: c * scale % p for i, c in combination.items()}
        # back-eliminate the new pivot from the existing rows
        for other in self.occurrences.pop(pivot, set()):
            row = self.rows[other]
            coeff = row.vector[pivot]
            for key, value in remainder.items():
                total = (row.vector.get(key, 0) - coeff * value) % p
                if total:
                    if key not in row.vector:
                        self.occurrences.setdefault(key, set()).add(other)
                    row.vector[key] = total
                elif key in row.vector:
                    del row.vector[key]
                    if key != pivot:
                        self.occurrences[key].discard(other)
            if self.track:
                axpy(row.combination, combination, -coeff, p)
        for key in remainder:
            if key != pivot:
                self.occurrences.setdefault(key, set()).add(pivot)
        self.rows[pivot] = _Row(pivot, remainder, combination)
        return True

    def _choose_pivot(self, remainder: dict[K, int]) -> K:
        if self.markowitz:
            return min(
                remainder,
                key=lambda k: (len(self.occurrences.get(k, ())), self._order(k)),
            )
        return min(remainder, key=self._order)

    def _order(self, key: K):
        return self.sort_key(key) if self.sort_key is not None else key

    def kernel(self, columns: Iterable[K]) -> list[dict[K, int]]:
        """Right null space of the row space, one vector per free column."""
        p = self.p
        basis = []
        for free in columns:
            if free in self.rows:
                continue
            vector = {free: 1}
            for pivot in self.occurrences.get(free, ()):
                vector[pivot] = -self.rows[pivot].vector[free] % p
            basis.append(vector)
        return basis

    def echelon_rows(self) -> list[dict[K, int]]:
        """Rows sorted by pivot order."""
        return [dict(self.rows[k].vector) for k in sorted(self.rows, key=self._order)]


def _use_dense(matrix: SparseMatrix) -> bool:
    cells = matrix.rows * matrix.cols
    return (
        0 < cells <= settings.DENSE_MAX_CELLS
        and matrix.density >= settings.DENSE_DENSITY_THRESHOLD
    )


def rref_dense(
    matrix: np.ndarray, p: int, pivot_columns: int | None = None
) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p of a dense int64 array.

    With ``pivot_columns`` set, only the leading columns are eliminated; the
    rest are carried along, as for an augmented matrix.
    """
    a = np.mod(matrix.astype(np.int64, copy=True), p)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols if pivot_columns is None else min(pivot_columns, cols)):
        if r == rows:
            break
        candidates = np.nonzero(a[r:, c])[0]
        if candidates.size == 0:
            continue
        pivot_row = r + int(candidates[0])
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        factors = a[:, c].copy()
        factors[r] = 0
        touched = np.nonzero(factors)[0]
        if touched.size:
            a[touched] = (a[touched] - np.outer(factors[touched], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


@dataclass(frozen=True)
class DenseSolution:
    """Every solution of A X = R over F_p, for any right-hand side R.

    A X = R is solvable exactly when ``constraints @ R == 0``, and then the
    solutions are ``particular @ R + kernel @ T`` for arbitrary T.
    """

    particular: np.ndarray
    kernel: np.ndarray
    constraints: np.ndarray

    @property
    def nullity(self) -> int:
        return self.kernel.shape[1]


def _free_columns(reduced: np.ndarray, pivots: list[int], cols: int, p: int) -> np.ndarray:
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    kernel = np.zeros((cols, len(free)), dtype=np.int64)
    for index, f in enumerate(free):
        kernel[f, index] = 1
        kernel[pivots, index] = -reduced[: len(pivots), f] % p
    return kernel


def solve_dense(matrix: np.ndarray, p: int) -> DenseSolution:
    """Eliminate A once so that A X = R can be solved for many R."""
    rows, cols = matrix.shape
    identity = np.eye(rows, dtype=np.int64)
    augmented = np.concatenate([np.mod(matrix.astype(np.int64), p), identity], axis=1)
    reduced, pivots = rref_dense(augmented, p, pivot_columns=cols)
    rank = len(pivots)
    transform = reduced[:, cols:]
    particular = np.zeros((cols, rows), dtype=np.int64)
    particular[pivots] = transform[:rank]
    kernel = _free_columns(reduced, pivots, cols, p)
    return DenseSolution(particular, kernel, transform[rank:])


def nullspace_dense(matrix: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : A x = 0}."""
    reduced, pivots = rref_dense(matrix, p)
    return _free_columns(reduced, pivots, matrix.shape[1], p)


def _echelon(matrix: SparseMatrix) -> EchelonBasis[int]:
    basis: EchelonBasis[int] = EchelonBasis(matrix.p, markowitz=True)
    # shortest rows first keeps fill low
    for row in sorted(matrix.row_dicts(), key=len):
        if row:
            basis.add(row)
    return basis


def rank(matrix: SparseMatrix) -> int:
    """Rank over F_p."""
    if _use_dense(matrix):
        _, pivots = rref_dense(matrix.to_dense(), matrix.p)
        return len(pivots)
    return _echelon(matrix).rank


def kernel_basis(matrix: SparseMatrix) -> list[dict[int, int]]:
    """Basis of {v : M v = 0} as sparse coordinate vectors."""
    p = matrix.p
    if _use_dense(matrix):
        reduced, pivots = rref_dense(matrix.to_dense(), p)
        pivot_set = set(pivots)
        basis = []
        for free in range(matrix.cols):
            if free in pivot_set:
                continue
            vector = {free: 1}
            for row_index, pivot in enumerate(pivots):
                value = int(reduced[row_index, free])
                if value:
                    vector[pivot] = -value % p
            basis.append(vector)
        return basis
    return _echelon(matrix).kernel(range(matrix.cols))


@dataclass(frozen=True)
class SpanResult:
    member: bool
    coefficients: list[int] | None = None


def in_span(vector: Sequence[int], basis: Sequence[Sequence[int]], p: int) -> SpanResult:
    """Whether vector is a combination of basis, with the coefficients if so."""
    length = len(vector)
    if any(len(b) != length for b in basis):
        raise ValueError("length mismatch between vector and basis")
    echelon: EchelonBasis[int] = EchelonBasis(p, track=True)
    for b in basis:
        echelon.add({i: v for i, v in enumerate(b) if v % p})
    combination = echelon.coordinates({i: v for i, v in enumerate(vector) if v % p})
    if combination is None:
        return SpanResult(False)
    return SpanResult(True, [combination.get(i, 0) for i in range(len(basis))])


def span_rank(vectors: Iterable[Mapping], p: int) -> int:
    echelon: EchelonBasis = EchelonBasis(p, markowitz=True)
    for vector in vectors:
        echelon.add(vector)
    return echelon.rank


def reduced_echelon(
    vectors: Iterable[Mapping[K, int]], p: int, sort_key=None
) -> list[dict[K, int]]:
    """Canonical basis of the span: reduced echelon rows with the smallest
    available key as pivot, in pivot order."""
    echelon: EchelonBasis[K] = EchelonBasis(p, sort_key=sort_key)
    for vector in vectors:
        echelon.add(vector)
    return echelon.echelon_rows()
