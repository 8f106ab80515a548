"""Z-graded subspaces of W(n,n;t) with exact coordinate lookup.

A ``GradedSubspace`` holds an ordered basis per degree and answers coordinate
queries exactly: a vector outside the span raises instead of being projected.
Global indices run degree-major, so the basis of the lowest degree comes first.
"""

from __future__ import annotations

import logging
from bisect import bisect_right
from collections.abc import Iterable, Iterator, Mapping

from app.core.errors import GradingError, NotInSubspaceError
from app.models.superalgebra import AlgebraParams
from app.models.vector_field import TermKey, VectorField, format_term, term_sort_key
from app.services.linalg import EchelonBasis

logger = logging.getLogger(__name__)


class GradedIndex:
    """Global numbering of a graded basis from per-degree dimensions."""

    def __init__(self, dims: Mapping[int, int]) -> None:
        self.dims = {d: k for d, k in sorted(dims.items()) if k > 0}
        self.degrees = list(self.dims)
        self.offsets: dict[int, int] = {}
        total = 0
        for degree in self.degrees:
            self.offsets[degree] = total
            total += self.dims[degree]
        self.total = total
        self._starts = [self.offsets[d] for d in self.degrees]

    def __len__(self) -> int:
        return self.total

    def dim(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    def indices(self, degree: int) -> range:
        if degree not in self.dims:
            return range(0)
        start = self.offsets[degree]
        return range(start, start + self.dims[degree])

    def degree_of(self, index: int) -> int:
        if not 0 <= index < self.total:
            raise IndexError(f"basis index {index} out of range")
        return self.degrees[bisect_right(self._starts, index) - 1]

    def local(self, index: int) -> int:
        return index - self.offsets[self.degree_of(index)]


class GradedSubspace:
    """Per-degree ordered bases of homogeneous vector fields.

    Build with ``from_basis`` (vectors must be independent) or ``spanned_by``
    (dependent vectors are dropped). The lookup tables are read-only once the
    constructor returns.
    """

    def __init__(self, params: AlgebraParams, name: str = "") -> None:
        self.params = params
        self.name = name
        self._basis: dict[int, list[VectorField]] = {}
        self._echelon: dict[int, EchelonBasis[TermKey]] = {}
        self._index: GradedIndex | None = None

    @classmethod
    def from_basis(
        cls, params: AlgebraParams, vectors: Iterable[VectorField], name: str = ""
    ) -> GradedSubspace:
        space = cls(params, name)
        for vector in vectors:
            if not space._append(vector):
                raise GradingError(f"{name or 'basis'}: vectors are linearly dependent")
        return space

    @classmethod
    def spanned_by(
        cls, params: AlgebraParams, vectors: Iterable[VectorField], name: str = ""
    ) -> GradedSubspace:
        """Subspace spanned by homogeneous vectors, keeping the first independent ones."""
        space = cls(params, name)
        for vector in vectors:
            space._append(vector)
        return space

    def _append(self, vector: VectorField) -> bool:
        if not vector:
            return False
        degree = vector.degree()
        if degree is None:
            raise GradingError("basis vectors must be Z-homogeneous")
        echelon = self._echelon.get(degree)
        if echelon is None:
            echelon = self._echelon[degree] = EchelonBasis(
                self.params.p, sort_key=term_sort_key, track=True
            )
        # only independent vectors are inserted, so tracked indices are basis positions
        if echelon.contains(vector.terms):
            return False
        echelon.add(vector.terms)
        self._basis.setdefault(degree, []).append(vector)
        self._index = None
        return True

    # queries

    @property
    def index(self) -> GradedIndex:
        if self._index is None:
            self._index = GradedIndex({d: len(b) for d, b in self._basis.items()})
        return self._index

    def degrees(self) -> list[int]:
        return sorted(self._basis)

    def basis(self, degree: int) -> list[VectorField]:
        return list(self._basis.get(degree, []))

    def dim(self, degree: int | None = None) -> int:
        if degree is None:
            return sum(len(b) for b in self._basis.values())
        return len(self._basis.get(degree, []))

    def dims(self) -> dict[int, int]:
        return {d: len(self._basis[d]) for d in self.degrees()}

    def __len__(self) -> int:
        return self.dim()

    def __iter__(self) -> Iterator[VectorField]:
        for degree in self.degrees():
            yield from self._basis[degree]

    def vector(self, index: int) -> VectorField:
        """Basis vector by global index."""
        degree = self.index.degree_of(index)
        return self._basis[degree][index - self.index.offsets[degree]]

    def label(self, index: int) -> str:
        key, _ = self.vector(index).leading_term()
        return format_term(key)

    def local_coordinates(self, vector: VectorField, degree: int) -> dict[int, int]:
        """Coordinates of a degree-homogeneous vector over basis(degree)."""
        if not vector:
            return {}
        echelon = self._echelon.get(degree)
        coords = echelon.coordinates(vector.terms) if echelon is not None else None
        if coords is None:
            raise NotInSubspaceError(
                f"vector of degree {degree} is not in {self.name or 'the subspace'}"
            )
        return coords

    def coordinates(self, vector: VectorField) -> dict[int, int]:
        """Global coordinates of any vector in the span, sparse."""
        by_degree: dict[int, dict[TermKey, int]] = {}
        for key, coeff in vector.terms.items():
            by_degree.setdefault(key[0].zdegree - 1, {})[key] = coeff
        result: dict[int, int] = {}
        for degree, terms in by_degree.items():
            offset = self.index.offsets.get(degree, 0)
            local = self.local_coordinates(VectorField._trusted(self.params, terms), degree)
            for i, c in local.items():
                result[offset + i] = c
        return result

    def contains(self, vector: VectorField) -> bool:
        try:
            self.coordinates(vector)
        except NotInSubspaceError:
            return False
        return True

    def combine(self, coordinates: Mapping[int, int]) -> VectorField:
        """The vector with the given global coordinates."""
        result = VectorField.zero(self.params)
        for index, coeff in sorted(coordinates.items()):
            if coeff % self.params.p:
                result = result + self.vector(index).scale(coeff)
        return result

    def is_subspace_of(self, other: GradedSubspace) -> bool:
        return all(other.contains(v) for v in self)

    def __repr__(self) -> str:
        return f"GradedSubspace({self.name or '?'}, dim={self.dim()})"
