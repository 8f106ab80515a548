"""Coordinate views of a graded Lie algebra g acting on a graded module V.

The derivation solver only ever sees basis indices: ``bracket(a, b)`` gives
[g_a, g_b] in g-coordinates and ``act(a, l)`` gives [g_a, v_l] in
V-coordinates. ``FieldAction`` computes both from vector fields on demand;
``TableAction`` reads them from stored structure constants.
"""

from __future__ import annotations

import logging
import threading
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping

from app.core.errors import GradingError
from app.models.vector_field import VectorField, bracket
from app.services.graded import GradedIndex, GradedSubspace

logger = logging.getLogger(__name__)

Coordinates = dict[int, int]


class ActionTable(ABC):
    """A graded Lie algebra g, a graded g-module V, and the action in coordinates."""

    def __init__(self, g_index: GradedIndex, v_index: GradedIndex, p: int) -> None:
        self.g_index = g_index
        self.v_index = v_index
        self.p = p

    @property
    def g_dim(self) -> int:
        return self.g_index.total

    @property
    def v_dim(self) -> int:
        return self.v_index.total

    @property
    def is_adjoint(self) -> bool:
        return False

    @abstractmethod
    def bracket(self, a: int, b: int) -> Coordinates:
        """[g_a, g_b] in g-coordinates."""

    @abstractmethod
    def act(self, a: int, l: int) -> Coordinates:
        """[g_a, v_l] in V-coordinates."""

    def act_on(self, a: int, vector: Mapping[int, int]) -> Coordinates:
        """[g_a, v] for v given in V-coordinates."""
        p = self.p
        result: Coordinates = {}
        for l, c in vector.items():
            for k, value in self.act(a, l).items():
                total = (result.get(k, 0) + c * value) % p
                if total:
                    result[k] = total
                else:
                    result.pop(k, None)
        return result

    def hom_degrees(self) -> list[int]:
        """Degrees m with a nonzero Hom(g_i, V_{i+m}) block."""
        return sorted(
            {v - g for g in self.g_index.degrees for v in self.v_index.degrees}
        )


class FieldAction(ActionTable):
    """Action of a graded subspace g of W on a graded subspace V, by brackets.

    Results are cached behind a lock so solver threads can share one instance.
    """

    def __init__(self, g: GradedSubspace, v: GradedSubspace) -> None:
        super().__init__(g.index, v.index, g.params.p)
        self.g = g
        self.v = v
        self._lock = threading.Lock()
        self._brackets: dict[tuple[int, int], Coordinates] = {}
        self._actions: dict[tuple[int, int], Coordinates] = {}

    @property
    def is_adjoint(self) -> bool:
        return self.g is self.v

    def bracket(self, a: int, b: int) -> Coordinates:
        if a == b:
            return {}
        if a > b:
            return {k: self.p - c for k, c in self.bracket(b, a).items()}
        key = (a, b)
        with self._lock:
            cached = self._brackets.get(key)
        if cached is None:
            cached = self.g.coordinates(bracket(self.g.vector(a), self.g.vector(b)))
            with self._lock:
                self._brackets[key] = cached
        return cached

    def act(self, a: int, l: int) -> Coordinates:
        if self.is_adjoint:
            return self.bracket(a, l)
        key = (a, l)
        with self._lock:
            cached = self._actions.get(key)
        if cached is None:
            cached = self.v.coordinates(bracket(self.g.vector(a), self.v.vector(l)))
            with self._lock:
                self._actions[key] = cached
        return cached

    def v_coordinates(self, vector: VectorField) -> Coordinates:
        return self.v.coordinates(vector)


class TableAction(ActionTable):
    """Adjoint action of an algebra given by structure constants [b_i, b_j] = sum c b_k."""

    def __init__(
        self,
        degrees: Iterable[int],
        constants: Mapping[tuple[int, int], Mapping[int, int]],
        p: int,
    ) -> None:
        degree_list = list(degrees)
        if degree_list != sorted(degree_list):
            raise GradingError("basis indices must be ordered by degree")
        dims: dict[int, int] = {}
        for degree in degree_list:
            dims[degree] = dims.get(degree, 0) + 1
        index = GradedIndex(dims)
        super().__init__(index, index, p)
        self.basis_degrees = degree_list
        self.constants: dict[tuple[int, int], Coordinates] = {}
        for (i, j), image in constants.items():
            if i == j:
                raise GradingError(f"bracket [b_{i}, b_{i}] given explicitly")
            value = {k: c % p for k, c in image.items() if c % p}
            target = degree_list[i] + degree_list[j]
            if any(degree_list[k] != target for k in value):
                raise GradingError(f"bracket [b_{i}, b_{j}] leaves degree {target}")
            if i > j:
                i, j = j, i
                value = {k: p - c for k, c in value.items()}
            if value:
                self.constants[(i, j)] = value

    @classmethod
    def from_triples(
        cls, degrees: Iterable[int], triples: Iterable[tuple[int, int, int, int]], p: int
    ) -> TableAction:
        """From (i, j, k, c) records meaning [b_i, b_j] contains c * b_k, with i < j."""
        constants: dict[tuple[int, int], dict[int, int]] = {}
        for i, j, k, c in triples:
            constants.setdefault((i, j), {})[k] = c
        return cls(degrees, constants, p)

    @property
    def is_adjoint(self) -> bool:
        return True

    def bracket(self, a: int, b: int) -> Coordinates:
        if a == b:
            return {}
        if a > b:
            return {k: self.p - c for k, c in self.constants.get((b, a), {}).items()}
        return self.constants.get((a, b), {})

    def act(self, a: int, l: int) -> Coordinates:
        return self.bracket(a, l)

    def triples(self) -> list[tuple[int, int, int, int]]:
        return sorted(
            (i, j, k, c) for (i, j), image in self.constants.items() for k, c in image.items()
        )
