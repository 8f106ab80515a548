"""Homogeneous derivation spaces Der_m(g, V) of graded Lie algebras.

Convention: a derivation satisfies D([x, y]) = [x, D(y)] - [y, D(x)], and the
inner derivation attached to v in V_m is x -> [x, v]. Unknowns of the linear
system are the entries u(a, k) of D(g_a) = sum_k u(a, k) v_k with g_a in g_i and
v_k in V_{i+m}; a pair (a, b) and a target index k give the row

    sum_e c^e_ab u(e, k) - sum_l [g_a, v_l]_k u(b, l) + sum_l [g_b, v_l]_k u(a, l) = 0.

The graded solver needs explicit rows only for a small set of pairs; the others
follow from the pairs that meet g_{-1}.
"""

from __future__ import annotations

import logging
import random
import time
from bisect import bisect_right
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, partial

import numpy as np

from app.core.config import settings
from app.core.errors import DerivationCheckError, GradingError, IndexRangeError
from app.models.enums import DegreeClass, LeibnizMode
from app.models.superalgebra import AlgebraParams, Monomial, SuperPoly
from app.models.vector_field import VectorField, bracket
from app.schemas.report import DerivationReport, DerivationRow, OuterReport
from app.services.actions import ActionTable, Coordinates, FieldAction
from app.services.ho import HOAlgebra, gamma
from app.services.linalg import (
    DenseSolution,
    EchelonBasis,
    axpy,
    nullspace_dense,
    reduced_echelon,
    solve_dense,
)

logger = logging.getLogger(__name__)


class DerivationLayout:
    """Column numbering of the unknown blocks Hom(g_i, V_{i+m}).

    Source degrees listed in ``vanish_on`` get no columns, which forces those
    blocks to zero.
    """

    def __init__(self, action: ActionTable, degree: int, vanish_on: Iterable[int] = ()) -> None:
        self.action = action
        self.degree = degree
        self.vanish_on = frozenset(vanish_on)
        unknown = self.vanish_on - set(action.g_index.degrees)
        if unknown:
            raise GradingError(f"vanish_on names degrees {sorted(unknown)} that g does not have")
        self.offsets: dict[int, int] = {}
        self.widths: dict[int, int] = {}
        size = 0
        for source in action.g_index.degrees:
            width = action.v_index.dim(source + degree)
            if source in self.vanish_on or width == 0:
                continue
            self.offsets[source] = size
            self.widths[source] = width
            size += action.g_index.dim(source) * width
        self.size = size
        self._sources = list(self.offsets)
        self._starts = [self.offsets[s] for s in self._sources]

    def column(self, a: int, k: int) -> int | None:
        g_index, v_index = self.action.g_index, self.action.v_index
        source = g_index.degree_of(a)
        offset = self.offsets.get(source)
        if offset is None:
            return None
        target = source + self.degree
        if v_index.degree_of(k) != target:
            raise GradingError(f"v_{k} is not in V_{target}")
        local_a = a - g_index.offsets[source]
        local_k = k - v_index.offsets[target]
        return offset + local_a * self.widths[source] + local_k

    def unpack(self, column: int) -> tuple[int, int]:
        source = self._sources[bisect_right(self._starts, column) - 1]
        local = column - self.offsets[source]
        width = self.widths[source]
        a = self.action.g_index.offsets[source] + local // width
        k = self.action.v_index.offsets[source + self.degree] + local % width
        return a, k


@dataclass
class GradedMap:
    """A degree-m linear map g -> V, stored as the images of the g basis."""

    degree: int
    images: dict[int, Coordinates] = field(default_factory=dict)

    def image(self, a: int) -> Coordinates:
        return self.images.get(a, {})

    def is_zero(self) -> bool:
        return not any(self.images.values())

    def apply(self, x: Mapping[int, int], p: int) -> Coordinates:
        result: Coordinates = {}
        for a, c in x.items():
            axpy(result, self.image(a), c, p)
        return result

    def to_vector(self, layout: DerivationLayout) -> dict[int, int]:
        vector: dict[int, int] = {}
        for a, image in self.images.items():
            for k, c in image.items():
                column = layout.column(a, k)
                if column is None:
                    raise GradingError(f"map is nonzero on g_{a}, which has no unknowns")
                vector[column] = c
        return vector

    @classmethod
    def from_vector(cls, layout: DerivationLayout, vector: Mapping[int, int]) -> GradedMap:
        images: dict[int, Coordinates] = {}
        for column, c in sorted(vector.items()):
            a, k = layout.unpack(column)
            images.setdefault(a, {})[k] = c
        return cls(layout.degree, images)

    def block(self, action: ActionTable, source: int) -> np.ndarray:
        """Matrix of the g_source -> V_{source+m} block, columns indexed by g."""
        rows = action.v_index.indices(source + self.degree)
        cols = action.g_index.indices(source)
        matrix = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for j, a in enumerate(cols):
            for k, c in self.image(a).items():
                matrix[k - rows.start, j] = c
        return matrix

    def compose(self, other: GradedMap, p: int) -> GradedMap:
        """self o other, for maps of g into itself."""
        images = {}
        for a, image in other.images.items():
            value = self.apply(image, p)
            if value:
                images[a] = value
        return GradedMap(self.degree + other.degree, images)

    def commutator(self, other: GradedMap, p: int) -> GradedMap:
        first = self.compose(other, p)
        second = other.compose(self, p)
        images: dict[int, Coordinates] = {}
        for a in set(first.images) | set(second.images):
            value = dict(first.image(a))
            axpy(value, second.image(a), -1, p)
            if value:
                images[a] = value
        return GradedMap(self.degree + other.degree, images)


@dataclass
class DerivationBasis:
    """Basis of Der_m(g, V): inner maps first, then an extension, both in reduced
    echelon form over the layout columns."""

    degree: int
    layout: DerivationLayout
    maps: list[GradedMap] = field(default_factory=list)
    inner: list[bool] = field(default_factory=list)
    _echelon: EchelonBasis[int] | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.maps)

    @property
    def inner_dim(self) -> int:
        return sum(self.inner)

    @property
    def outer_dim(self) -> int:
        return self.dim - self.inner_dim

    def vectors(self) -> list[dict[int, int]]:
        return [m.to_vector(self.layout) for m in self.maps]

    def canonical(self) -> list[dict[int, int]]:
        """Reduced echelon basis of the whole space, independent of the inner split."""
        return reduced_echelon(self.vectors(), self.layout.action.p)

    def contains(self, candidate: GradedMap) -> bool:
        if self._echelon is None:
            self._echelon = EchelonBasis(self.layout.action.p)
            for vector in self.vectors():
                self._echelon.add(vector)
        return self._echelon.contains(candidate.to_vector(self.layout))


def _pairs(
    action: ActionTable, mode: LeibnizMode, generators: Sequence[Mapping[int, int]] | None
) -> Iterator[tuple[int, int]]:
    dim = action.g_dim
    if mode == LeibnizMode.ALL or generators is None:
        for a in range(dim):
            for b in range(a + 1, dim):
                yield a, b
        return
    # rows against basis vectors in the support of a generating set
    support = sorted({a for g in generators for a in g})
    seen: set[tuple[int, int]] = set()
    for a in support:
        for b in range(dim):
            pair = (min(a, b), max(a, b))
            if a != b and pair not in seen:
                seen.add(pair)
                yield pair


def _pairs_touching(action: ActionTable, degrees: set[int]) -> Iterator[tuple[int, int]]:
    """Pairs a < b where a map supported on ``degrees`` can break the Leibniz rule:
    deg a, deg b or deg a + deg b lies in ``degrees``."""
    g_index = action.g_index
    for da in g_index.degrees:
        for db in g_index.degrees:
            if db < da or not ({da, db, da + db} & degrees):
                continue
            for a in g_index.indices(da):
                for b in g_index.indices(db):
                    if a < b:
                        yield a, b


def leibniz_rows(layout: DerivationLayout, a: int, b: int) -> list[dict[int, int]]:
    """Rows of the Leibniz identity for the pair (g_a, g_b), one per target index."""
    action = layout.action
    g_index, v_index = action.g_index, action.v_index
    p = action.p
    m = layout.degree
    da, db = g_index.degree_of(a), g_index.degree_of(b)
    target = da + db + m
    if not v_index.dim(target):
        return []
    rows: dict[int, dict[int, int]] = {}

    def add(k: int, column: int | None, value: int) -> None:
        if column is None:
            return
        row = rows.setdefault(k, {})
        total = (row.get(column, 0) + value) % p
        if total:
            row[column] = total
        else:
            row.pop(column, None)

    for e, c in action.bracket(a, b).items():
        for k in v_index.indices(target):
            add(k, layout.column(e, k), c)
    for l in v_index.indices(db + m):
        column = layout.column(b, l)
        if column is not None:
            for k, c in action.act(a, l).items():
                add(k, column, -c)
    for l in v_index.indices(da + m):
        column = layout.column(a, l)
        if column is not None:
            for k, c in action.act(b, l).items():
                add(k, column, c)
    return [row for row in rows.values() if row]


def leibniz_defect(
    action: ActionTable, candidate: GradedMap, pairs: Iterable[tuple[int, int]] | None = None
) -> tuple[int, int] | None:
    """First basis pair on which D([x,y]) = [x,D(y)] - [y,D(x)] fails, or None."""
    p = action.p
    support = {a for a, image in candidate.images.items() if image}
    if not support:
        return None
    g_index, v_index = action.g_index, action.v_index
    if pairs is None:
        pairs = _pairs_touching(action, {g_index.degree_of(a) for a in support})
    for a, b in pairs:
        target = g_index.degree_of(a) + g_index.degree_of(b) + candidate.degree
        if not v_index.dim(target):
            continue
        value: Coordinates = {}
        for e, c in action.bracket(a, b).items():
            if e in support:
                axpy(value, candidate.image(e), c, p)
        if b in support:
            axpy(value, action.act_on(a, candidate.image(b)), -1, p)
        if a in support:
            axpy(value, action.act_on(b, candidate.image(a)), 1, p)
        if value:
            return a, b
    return None


def inner_map(action: ActionTable, degree: int, v: Mapping[int, int]) -> GradedMap:
    """x -> [x, v] for v in V_degree, given in V-coordinates."""
    images = {}
    for a in range(action.g_dim):
        if not action.v_index.dim(action.g_index.degree_of(a) + degree):
            continue
        value = action.act_on(a, v)
        if value:
            images[a] = value
    return GradedMap(degree, images)


def inner_maps(action: ActionTable, degree: int, vanish_on: Iterable[int] = ()) -> list[GradedMap]:
    """Inner derivations of the given degree, restricted to those vanishing on
    the listed source degrees."""
    vanish = set(vanish_on)
    elements: list[dict[int, int]] = [{l: 1} for l in action.v_index.indices(degree)]
    if vanish and elements:
        echelon: EchelonBasis[tuple[int, int]] = EchelonBasis(action.p, markowitz=True)
        columns = list(action.v_index.indices(degree))
        rows: dict[tuple[int, int], dict[int, int]] = {}
        for source in sorted(vanish):
            for a in action.g_index.indices(source):
                for l in columns:
                    for k, c in action.act(a, l).items():
                        rows.setdefault((a, k), {})[l] = c
        for row in rows.values():
            echelon.add(row)
        elements = echelon.kernel(columns)
    return [inner_map(action, degree, v) for v in elements]


def ad_image(
    elements: Sequence[VectorField | Mapping[int, int]], action: ActionTable, degree: int
) -> list[GradedMap]:
    """Inner derivations x -> [x, s] for homogeneous s of the given degree."""
    maps = []
    for s in elements:
        if isinstance(s, VectorField):
            if s and s.degree() != degree:
                raise GradingError(f"element is not homogeneous of degree {degree}")
            if not isinstance(action, FieldAction):
                raise GradingError("vector-field elements need a field action")
            coords = action.v_coordinates(s)
        else:
            coords = dict(s)
            if any(action.v_index.degree_of(l) != degree for l in coords):
                raise GradingError(f"element is not homogeneous of degree {degree}")
        maps.append(inner_map(action, degree, coords))
    return maps


def field_map(
    action: FieldAction, degree: int, fn: Callable[[VectorField], VectorField]
) -> GradedMap:
    """The map g_a -> fn(g_a) in V-coordinates, for a degree-homogeneous fn."""
    images = {}
    for a in range(action.g_dim):
        value = action.v_coordinates(fn(action.g.vector(a)))
        if value:
            images[a] = value
    return GradedMap(degree, images)


ACT_CACHE_SIZE = 16_384


def _act_entries(action: ActionTable, a: int, degree: int) -> tuple[np.ndarray, ...]:
    """Nonzero entries (row, column, value) of v -> [g_a, v] on V_degree, local indices."""
    v_index = action.v_index
    target = degree + action.g_index.degree_of(a)
    rows: list[int] = []
    cols: list[int] = []
    values: list[int] = []
    if v_index.dim(target) and v_index.dim(degree):
        row0, col0 = v_index.offsets[target], v_index.offsets[degree]
        for l in v_index.indices(degree):
            for k, c in action.act(a, l).items():
                rows.append(k - row0)
                cols.append(l - col0)
                values.append(c % action.p)
    return (
        np.array(rows, dtype=np.int64),
        np.array(cols, dtype=np.int64),
        np.array(values, dtype=np.int64),
    )


@lru_cache(maxsize=512)
def lowering_solution(action: ActionTable, degree: int) -> DenseSolution:
    """Solutions of [g_{-1}, X] = R for X in V_degree, rows grouped by g_{-1} basis vector."""
    v_index = action.v_index
    width = v_index.dim(degree)
    blocks = []
    for a in action.g_index.indices(-1):
        rows, cols, values = _act_entries(action, a, degree)
        block = np.zeros((v_index.dim(degree - 1), width), dtype=np.int64)
        block[rows, cols] = values
        blocks.append(block)
    stacked = np.vstack(blocks) if blocks else np.zeros((0, width), dtype=np.int64)
    return solve_dense(stacked, action.p)


class _GradedSolver:
    """Kernel of the Leibniz system solved degree by degree along g_{-1}.

    Every block D(g_s) is kept as a matrix over a parameter vector. Pairs with
    exactly one member in g_{-1} fix D(g_b) modulo the g_{-1}-invariants of V
    from blocks already known, so they are solved directly. A remaining pair
    (u, w) then has its defect inside the invariants of degree du + dw + m, and
    only pairs landing on nonzero invariants need explicit rows.
    """

    def __init__(self, layout: DerivationLayout) -> None:
        self.layout = layout
        self.action = layout.action
        self.p = self.action.p
        self.m = layout.degree
        self.lowest = list(self.action.g_index.indices(-1))
        self.count = 0
        # rows of a source block follow the layout columns of that source
        self.blocks: dict[int, np.ndarray] = {}
        self._entries = lru_cache(maxsize=ACT_CACHE_SIZE)(partial(_act_entries, self.action))

    def act_block(self, a: int, degree: int, block: np.ndarray) -> np.ndarray:
        """[g_a, -] applied to a block of V_degree-valued columns."""
        rows, cols, values = self._entries(a, degree)
        target = degree + self.action.g_index.degree_of(a)
        out = np.zeros((self.action.v_index.dim(target), block.shape[1]), dtype=np.int64)
        if rows.size:
            np.add.at(out, rows, values[:, None] * block[cols])
        return out

    def lowering(self, degree: int) -> DenseSolution:
        return lowering_solution(self.action, degree)

    def block(self, b: int) -> np.ndarray:
        """Current matrix of D(g_b) over the parameters."""
        g_index = self.action.g_index
        source = g_index.degree_of(b)
        stored = self.blocks.get(source)
        if stored is None:
            width = self.action.v_index.dim(source + self.m)
            return np.zeros((width, self.count), dtype=np.int64)
        width = self.layout.widths[source]
        start = (b - g_index.offsets[source]) * width
        return stored[start : start + width]

    def image_of(self, x: Mapping[int, int], degree: int) -> np.ndarray:
        value = np.zeros((self.action.v_index.dim(degree + self.m), self.count), dtype=np.int64)
        for e, c in x.items():
            value += c * self.block(e)
        return value % self.p

    def defect(self, a: int, b: int) -> np.ndarray:
        """D[g_a, g_b] - [g_a, D g_b] + [g_b, D g_a] over the parameters."""
        g_index = self.action.g_index
        da, db = g_index.degree_of(a), g_index.degree_of(b)
        value = self.image_of(self.action.bracket(a, b), da + db)
        value -= self.act_block(a, db + self.m, self.block(b))
        value += self.act_block(b, da + self.m, self.block(a))
        return value % self.p

    def restrict(self, constraints: list[np.ndarray]) -> None:
        """Keep only parameter vectors annihilated by the stacked constraints."""
        rows = [c for c in constraints if c.size]
        if not rows:
            return
        stacked = np.vstack(rows) % self.p
        stacked = stacked[stacked.any(axis=1)]
        if not len(stacked):
            return
        basis = nullspace_dense(stacked, self.p)
        for source, stored in self.blocks.items():
            self.blocks[source] = stored @ basis % self.p
        self.count = basis.shape[1]

    def widen(self, extra: int) -> None:
        for source, stored in self.blocks.items():
            self.blocks[source] = np.pad(stored, ((0, 0), (0, extra)))
        self.count += extra

    def propagate(self, source: int) -> None:
        """Solve the pairs (g_{-1}, g_source) for every g_b in g_source."""
        action, layout = self.action, self.layout
        target = source + self.m
        known = self.count
        solved: list[tuple[np.ndarray, np.ndarray]] = []
        constraints: list[np.ndarray] = []
        for b in action.g_index.indices(source):
            if source == -1:
                if source in layout.offsets:
                    width = layout.widths[source]
                    fresh = np.eye(width, dtype=np.int64)
                    solved.append((np.zeros((width, known), dtype=np.int64), fresh))
                continue
            parts = [
                self.image_of(action.bracket(a, b), source - 1)
                + self.act_block(b, self.m - 1, self.block(a))
                for a in self.lowest
            ]
            rhs = np.vstack(parts) % self.p if parts else np.zeros((0, known), dtype=np.int64)
            if source not in layout.offsets:
                constraints.append(rhs)
                continue
            solution = self.lowering(target)
            constraints.append(solution.constraints @ rhs % self.p)
            solved.append((solution.particular @ rhs % self.p, solution.kernel))
        free = sum(kernel.shape[1] for _, kernel in solved)
        self.widen(free)
        if solved:
            stored = np.zeros((layout.widths[source] * len(solved), self.count), dtype=np.int64)
            row, column = 0, known
            for fixed, kernel in solved:
                height, nullity = kernel.shape
                stored[row : row + height, :known] = fixed
                stored[row : row + height, column : column + nullity] = kernel
                row += height
                column += nullity
            self.blocks[source] = stored
        self.restrict([np.pad(c, ((0, 0), (0, free))) for c in constraints])

    def explicit_degree_pairs(self) -> list[tuple[int, int]]:
        """Degree pairs whose Leibniz rows are not implied by propagation."""
        g_index, v_index = self.action.g_index, self.action.v_index
        offsets = self.layout.offsets
        invariant = {k for k in v_index.degrees if self.lowering(k).nullity}
        has_lowest = bool(self.lowest)
        pairs = []
        for da in g_index.degrees:
            for db in g_index.degrees:
                if db < da:
                    continue
                if has_lowest and (da == -1) != (db == -1):
                    continue
                target = da + db + self.m
                if not v_index.dim(target):
                    continue
                if not (da == db == -1) and target not in invariant:
                    continue
                if not {da, db, da + db} & offsets.keys():
                    continue
                pairs.append((da, db))
        return pairs

    def apply_pairs(self, degree_pairs: Iterable[tuple[int, int]]) -> None:
        g_index = self.action.g_index
        pending: list[np.ndarray] = []
        rows = 0
        for da, db in degree_pairs:
            for a in g_index.indices(da):
                for b in g_index.indices(db):
                    if a >= b or not self.count:
                        continue
                    value = self.defect(a, b)
                    if value.any():
                        pending.append(value)
                        rows += len(value)
                    if rows >= max(64, 2 * self.count):
                        self.restrict(pending)
                        pending, rows = [], 0
        if self.count:
            self.restrict(pending)

    def solve(self) -> list[dict[int, int]]:
        g_index = self.action.g_index
        order = ([-1] if self.lowest else []) + [d for d in g_index.degrees if d != -1]
        waiting = self.explicit_degree_pairs()
        done: set[int] = set()
        for source in order:
            self.propagate(source)
            done.add(source)
            ready = [
                (da, db)
                for da, db in waiting
                if {da, db, da + db} & set(g_index.degrees) <= done
            ]
            waiting = [pair for pair in waiting if pair not in ready]
            self.apply_pairs(ready)
        solutions: list[dict[int, int]] = [{} for _ in range(self.count)]
        for source, stored in self.blocks.items():
            offset = self.layout.offsets[source]
            rows, columns = np.nonzero(stored)
            for r, j in zip(rows.tolist(), columns.tolist(), strict=True):
                solutions[j][offset + r] = int(stored[r, j])
        return solutions


def _sparse_kernel(
    layout: DerivationLayout, mode: LeibnizMode, generators: Sequence[Mapping[int, int]] | None
) -> list[dict[int, int]]:
    echelon: EchelonBasis[int] = EchelonBasis(layout.action.p, markowitz=True)
    row_count = 0
    for a, b in _pairs(layout.action, mode, generators):
        for row in leibniz_rows(layout, a, b):
            row_count += 1
            echelon.add(row)
    logger.debug("Der_%d: %d rows, rank %d", layout.degree, row_count, echelon.rank)
    return echelon.kernel(range(layout.size))


def sample_pairs(
    action: ActionTable, maps: Sequence[GradedMap], degree: int
) -> list[tuple[int, int]]:
    """A seeded sample of the pairs on which the given maps can break the Leibniz rule."""
    degrees = {action.g_index.degree_of(a) for m in maps for a, image in m.images.items() if image}
    pairs = list(_pairs_touching(action, degrees))
    count = settings.VERIFY_PAIRS
    if count <= 0 or len(pairs) <= count:
        return pairs
    return sorted(random.Random(settings.DEFAULT_SEED + degree).sample(pairs, count))


def der_space(
    action: ActionTable,
    degree: int,
    vanish_on: Iterable[int] = (),
    mode: LeibnizMode | None = None,
    generators: Sequence[Mapping[int, int]] | None = None,
    verify: bool | None = None,
) -> DerivationBasis:
    """Basis of the degree-m derivations g -> V, optionally vanishing on some degrees."""
    mode = LeibnizMode(mode or settings.LEIBNIZ_MODE)
    verify = settings.VERIFY_SOLUTIONS if verify is None else verify
    layout = DerivationLayout(action, degree, vanish_on)
    result = DerivationBasis(degree, layout)
    if layout.size == 0:
        return result
    p = action.p
    started = time.perf_counter()
    if mode == LeibnizMode.GRADED:
        kernel = _GradedSolver(layout).solve()
    else:
        kernel = _sparse_kernel(layout, mode, generators)
    logger.info(
        "Der_%d: %d unknowns, kernel %d, %s mode (%.2fs)",
        degree,
        layout.size,
        len(kernel),
        mode.value,
        time.perf_counter() - started,
    )
    solutions: EchelonBasis[int] = EchelonBasis(p)
    for vector in kernel:
        solutions.add(vector)

    inner_span: EchelonBasis[int] = EchelonBasis(p)
    for candidate in inner_maps(action, degree, layout.vanish_on):
        vector = candidate.to_vector(layout)
        if not solutions.contains(vector):
            raise DerivationCheckError(f"inner map of degree {degree} fails the Leibniz rule")
        inner_span.add(vector)
    inner_rows = inner_span.echelon_rows()
    extension = [inner_span.reduce(v)[0] for v in solutions.echelon_rows()]
    extension_rows = reduced_echelon([v for v in extension if v], p)

    result.maps = [GradedMap.from_vector(layout, v) for v in inner_rows + extension_rows]
    result.inner = [True] * len(inner_rows) + [False] * len(extension_rows)
    if verify and result.maps:
        pairs = sample_pairs(action, result.maps, degree)
        for candidate in result.maps:
            pair = leibniz_defect(action, candidate, pairs)
            if pair is not None:
                raise DerivationCheckError(f"Der_{degree} solution fails Leibniz on pair {pair}")
    return result


def der_spaces(
    action: ActionTable,
    degrees: Iterable[int],
    vanish_on: Iterable[int] = (),
    mode: LeibnizMode | None = None,
    generators: Sequence[Mapping[int, int]] | None = None,
    workers: int | None = None,
) -> dict[int, DerivationBasis]:
    """Solve several degrees concurrently; results keyed and ordered by degree."""
    degree_list = sorted(set(degrees))
    vanish = tuple(vanish_on)
    with ThreadPoolExecutor(max_workers=workers or settings.SOLVER_WORKERS) as pool:
        results = pool.map(
            lambda m: der_space(action, m, vanish, mode, generators), degree_list
        )
        return dict(zip(degree_list, results, strict=True))


# p-power maps


def _lower(params: AlgebraParams, i: int, power: int) -> Callable[[SuperPoly], SuperPoly]:
    """d_i^power on O(n,n;t): lowers alpha_i by power with coefficient 1."""

    def shift(f: SuperPoly) -> SuperPoly:
        terms = {}
        for mono, c in f.terms.items():
            if mono.alpha[i - 1] >= power:
                alpha = list(mono.alpha)
                alpha[i - 1] -= power
                terms[Monomial(tuple(alpha), mono.u)] = c
        return SuperPoly._trusted(params, terms)

    return shift


def ad_partial_power(i: int, e: int, action: FieldAction) -> GradedMap:
    """(ad d_i)^(p^e) as d_i^(p^e) applied to every coefficient, checked against
    the p^e-fold iterate of x -> [d_i, x]."""
    params = action.g.params
    if i not in params.y0:
        raise IndexRangeError(f"p-power maps need i in Y0, got {i}")
    if e < 1:
        raise IndexRangeError("the exponent e must be at least 1")
    power = params.p**e
    shift = _lower(params, i, power)
    direct = field_map(action, -power, lambda x: x.map_coefficients(shift))
    if power <= params.pi[i - 1]:
        d_i = VectorField.d(params, i)

        def iterate(x: VectorField) -> VectorField:
            for _ in range(power):
                x = bracket(d_i, x)
                if not x:
                    break
            return x

        if field_map(action, -power, iterate) != direct:
            raise DerivationCheckError(f"(ad d_{i})^{power} differs from its iterate")
    elif not direct.is_zero():
        raise DerivationCheckError(f"(ad d_{i})^{power} should vanish")
    return direct


def p_power_maps(action: FieldAction, degree: int) -> list[tuple[str, GradedMap]]:
    """Nonzero (ad d_i)^(p^e) of the given degree -p^e, labelled."""
    params = action.g.params
    p = params.p
    e, power = 0, 1
    while power < -degree:
        e += 1
        power *= p
    if e == 0 or power != -degree:
        return []
    maps = []
    for i in params.y0:
        candidate = ad_partial_power(i, e, action)
        if not candidate.is_zero():
            maps.append((f"(ad d_{i})^{power}", candidate))
    return maps


def is_p_power_degree(degree: int, p: int) -> bool:
    if degree >= -1:
        return False
    power = -degree
    while power % p == 0:
        power //= p
    return power == 1


def expected_class(degree: int, p: int, adjoint: bool) -> DegreeClass:
    """Expected shape of Der_m for the even part of HO acting on itself or on W."""
    if degree == 0 and adjoint:
        return DegreeClass.INNER_PLUS_GAMMA
    if degree >= -1:
        return DegreeClass.INNER
    if is_p_power_degree(degree, p):
        return DegreeClass.P_POWER
    return DegreeClass.ZERO


def _span_dim(maps: Iterable[GradedMap], layout: DerivationLayout) -> int:
    echelon: EchelonBasis[int] = EchelonBasis(layout.action.p)
    for candidate in maps:
        echelon.add(candidate.to_vector(layout))
    return echelon.rank


def classify(
    space: DerivationBasis, action: FieldAction, extra: Sequence[GradedMap] = ()
) -> DerivationRow:
    """Compare Der_m with its expected span: inner maps plus ``extra``
    (Gamma in degree 0, p-power maps in degrees -p^r)."""
    degree = space.degree
    p = action.p
    cls_ = expected_class(degree, p, action.is_adjoint)
    inner = inner_maps(action, degree)
    expected = inner + list(extra)
    expected_dim = _span_dim(expected, space.layout) if space.layout.size else 0
    contained = all(space.contains(m) for m in expected) if space.layout.size else True
    return DerivationRow(
        degree=degree,
        dim=space.dim,
        inner_dim=space.inner_dim,
        expected_class=cls_,
        expected_dim=expected_dim,
        passed=contained and expected_dim == space.dim,
    )


def gamma_map(action: FieldAction) -> GradedMap:
    """x -> [x, Gamma] on g in V-coordinates."""
    g_gamma = gamma(action.g.params)
    return field_map(action, 0, lambda x: bracket(x, g_gamma))


def expected_extra(action: FieldAction, degree: int) -> list[GradedMap]:
    cls_ = expected_class(degree, action.p, action.is_adjoint)
    if cls_ == DegreeClass.INNER_PLUS_GAMMA:
        return [gamma_map(action)]
    if cls_ == DegreeClass.P_POWER:
        return [m for _, m in p_power_maps(action, degree)]
    return []


def critical_degrees(params: AlgebraParams) -> list[int]:
    """Degrees where Der_m can differ from the inner maps, plus the low ones
    that pin down the rest: -p^e for 1 <= e <= max t, and -2, -1, 0, 1."""
    powers = {-(params.p**e) for e in range(1, max(params.t) + 1)}
    return sorted(powers | {-2, -1, 0, 1})


def full_der(
    ho: HOAlgebra,
    degrees: Iterable[int] | None = None,
    mode: LeibnizMode | None = None,
    action: FieldAction | None = None,
    target: str = "ho",
) -> tuple[DerivationReport, dict[int, DerivationBasis]]:
    """Der_m of the even part of HO over the requested degrees (all with a
    nonzero Hom block by default), classified degree by degree.

    With an explicit degree list the outer dimension sums the listed degrees
    only; every other degree is taken to be inner.
    """
    params = ho.params
    action = action or ho.action
    all_degrees = action.hom_degrees()
    degree_list = sorted(set(degrees)) if degrees is not None else all_degrees
    generators = [action.g.coordinates(v) for v in ho.m_set + ho.n_set]
    spaces = der_spaces(action, degree_list, mode=mode, generators=generators)
    rows = [classify(spaces[m], action, expected_extra(action, m)) for m in degree_list]
    center_dim = ho.center().dim() if action.is_adjoint else 0
    total = sum(s.dim for s in spaces.values())
    inner_total = ho.dim - center_dim
    sum_t, n = params.sum_t, params.n
    half = 2 ** (n - 1) * params.p**sum_t
    report = DerivationReport(
        params=params.label(),
        target=target,
        mode=LeibnizMode(mode or settings.LEIBNIZ_MODE).value,
        degrees=degree_list,
        complete=set(all_degrees) <= set(degree_list),
        rows=rows,
        dim_g=ho.dim,
        dim_center=center_dim,
        total=total,
        outer=sum(s.outer_dim for s in spaces.values()),
        expected_outer=sum_t - n + 1,
        halved_form_total=half + sum_t - n,
        computed_form_total=inner_total + sum_t - n + 1,
    )
    return report, spaces


def outer_rank(action: ActionTable, maps: Sequence[GradedMap]) -> int:
    """Dimension of the span of ``maps`` modulo the inner maps of their degrees."""
    by_degree: dict[int, list[GradedMap]] = {}
    for candidate in maps:
        by_degree.setdefault(candidate.degree, []).append(candidate)
    rank = 0
    for degree, group in by_degree.items():
        layout = DerivationLayout(action, degree)
        inner = inner_maps(action, degree)
        rank += _span_dim(inner + group, layout) - _span_dim(inner, layout)
    return rank


def outer_quotient(
    der_total: Mapping[int, DerivationBasis] | Sequence[DerivationBasis],
    ho: HOAlgebra,
    center_dim: int | None = None,
) -> OuterReport:
    """Outer dimension of the solved degrees, and the commutators of the outer
    representatives.

    The dimension is the sum of the outer parts of the given spaces. When they
    cover every degree it is cross-checked against dim Der - dim ad g.
    """
    params = ho.params
    action = ho.action
    p = params.p
    spaces = list(der_total.values()) if isinstance(der_total, Mapping) else list(der_total)
    degrees = sorted(s.degree for s in spaces)
    complete = set(action.hom_degrees()) <= set(degrees)
    dim = sum(s.outer_dim for s in spaces)
    totals_dim = None
    if complete:
        if center_dim is None:
            center_dim = ho.center().dim()
        totals_dim = sum(s.dim for s in spaces) - (ho.dim - center_dim)

    representatives: list[tuple[str, GradedMap]] = [("ad Gamma", gamma_map(action))]
    powers: list[tuple[str, GradedMap]] = []
    for i in params.y0:
        for e in range(1, params.t[i - 1]):
            powers.append((f"(ad d_{i})^{p**e}", ad_partial_power(i, e, action)))
    powers = [(name, m) for name, m in powers if not m.is_zero()]
    representatives.extend(powers)

    nonzero = []
    for x, (name_a, map_a) in enumerate(representatives):
        for name_b, map_b in representatives[x + 1 :]:
            if not map_a.commutator(map_b, p).is_zero():
                nonzero.append(f"[{name_a}, {name_b}]")
    return OuterReport(
        params=params.label(),
        dim=dim,
        expected_dim=params.sum_t - params.n + 1,
        degrees=degrees,
        complete=complete,
        totals_dim=totals_dim,
        representatives=[name for name, _ in representatives],
        representatives_outer_rank=outer_rank(action, [m for _, m in representatives]),
        p_power_count=len(powers),
        expected_p_power_count=params.sum_t - params.n,
        nonzero_commutators=nonzero,
    )
