"""The odd Hamiltonian superalgebra HO(n,n;t) and its even part.

The even part is built constructively as the span of T_H over odd monomials and
cross-checked against the linear membership conditions that define it inside
the even part of W.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from app.core.errors import GradingError, NotInSubspaceError, ParityError
from app.models.enums import Parity
from app.models.superalgebra import (
    AlgebraParams,
    Monomial,
    SuperPoly,
    enumerate_basis,
    monomial_partial,
    partial,
)
from app.models.vector_field import TermKey, VectorField, apply, bracket
from app.services.graded import GradedSubspace
from app.services.linalg import EchelonBasis, span_rank

logger = logging.getLogger(__name__)


def t_h(a: SuperPoly) -> VectorField:
    """T_H(a) = sum_i (-1)^(mu(i) p(a)) d_i(a) d_i' for parity-homogeneous a."""
    params = a.params
    if not a:
        return VectorField.zero(params)
    parity = a.parity()
    if parity is None:
        raise ParityError("split by parity first")
    p = params.p
    terms: dict[TermKey, int] = {}
    for i in params.y:
        negate = params.mu(i) and parity == Parity.ODD
        target = params.prime(i)
        for mono, coeff in partial(i, a).terms.items():
            terms[(mono, target)] = (p - coeff) if negate else coeff
    return VectorField._trusted(params, terms)


def verify_th_morphism(a: SuperPoly, b: SuperPoly) -> bool:
    """[T_H(a), T_H(b)] == T_H(T_H(a)(b)) exactly."""
    ta = t_h(a)
    return bracket(ta, t_h(b)) == t_h(apply(ta, b))


def normalized(vector: VectorField) -> VectorField:
    """Scale so the leading coefficient is 1."""
    if not vector:
        return vector
    _, coeff = vector.leading_term()
    return vector.scale(pow(coeff, -1, vector.params.p))


def membership_sign(params: AlgebraParams, i: int, j: int, theta: int) -> int:
    """(-1)^(mu(i)mu(j) + (mu(i) + mu(j))(theta + 1))."""
    mi, mj = params.mu(i), params.mu(j)
    return -1 if (mi * mj + (mi + mj) * (theta + 1)) & 1 else 1


def is_member(field_: VectorField) -> bool:
    """Membership in overline-HO: d_i(a_j') = +-d_j(a_i') for all i, j in Y.

    Mixed-parity fields are members when each parity part is.
    """
    if not field_:
        return True
    params = field_.params
    theta = field_.parity()
    if theta is None:
        parts: dict[int, dict[TermKey, int]] = {}
        for key, coeff in field_.terms.items():
            parts.setdefault((len(key[0].u) + params.mu(key[1])) & 1, {})[key] = coeff
        return all(is_member(VectorField._trusted(params, t)) for t in parts.values())
    coefficients = {r: field_.coefficient(r) for r in params.y}
    for i in params.y:
        for j in params.y:
            if j < i:
                continue
            lhs = partial(i, coefficients[params.prime(j)])
            rhs = partial(j, coefficients[params.prime(i)])
            if lhs != rhs.scale(membership_sign(params, i, j, theta)):
                return False
    return True


def membership_kernel_dims(params: AlgebraParams) -> dict[int, int]:
    """Per degree, the dimension of the solutions of the membership conditions
    inside the even part of W."""
    dims: dict[int, int] = {}
    p = params.p
    for zd in range(params.xi + 1):
        columns = [
            (mono, r)
            for mono in enumerate_basis(params, zd)
            for r in params.y
            if (len(mono.u) + params.mu(r)) % 2 == Parity.EVEN
        ]
        if not columns:
            continue
        rows: dict[tuple[int, int, Monomial], dict[int, int]] = {}
        for col, (mono, r) in enumerate(columns):
            # a_r = mono enters d_i(a_j') with j' = r and d_j(a_i') with i' = r
            rp = params.prime(r)
            for i in params.y:
                image = monomial_partial(params, i, mono)
                if image is None:
                    continue
                c, target = image
                # as the left side of the (i, rp) condition
                if i <= rp:
                    row = rows.setdefault((i, rp, target), {})
                    row[col] = (row.get(col, 0) + c) % p
                # as the right side of the (rp, i) condition
                if rp <= i:
                    sign = membership_sign(params, rp, i, 0)
                    row = rows.setdefault((rp, i, target), {})
                    row[col] = (row.get(col, 0) - sign * c) % p
        rank = span_rank(
            ({c: v for c, v in row.items() if v} for row in rows.values()), p
        )
        dims[zd - 1] = len(columns) - rank
    return dims


def odd_part_dimension(params: AlgebraParams) -> int:
    """Rank of T_H over the even monomials, the dimension of the odd part of HO."""
    images = (
        t_h(SuperPoly._trusted(params, {m: 1})).terms
        for m in enumerate_basis(params, parity=Parity.EVEN)
    )
    return span_rank(images, params.p)


def delta(params: AlgebraParams, i: int) -> VectorField:
    """Delta_i = x_i' d_i' - x_i d_i = T_H(x_i x_i') for i in Y0."""
    if i not in params.y0:
        raise GradingError(f"Delta_{i} needs i in Y0")
    return t_h(SuperPoly.var(params, i) * SuperPoly.var(params, params.prime(i)))


def gamma(params: AlgebraParams) -> VectorField:
    """Gamma = sum over i in Y0 of x_i' d_i'."""
    result = VectorField.zero(params)
    for i in params.y0:
        k = params.prime(i)
        result = result + VectorField.from_poly(SuperPoly.var(params, k), k)
    return result


def m_generator(params: AlgebraParams, i: int, q: int, k: int) -> VectorField:
    alpha = [0] * params.n
    alpha[i - 1] = q
    return t_h(SuperPoly.monomial(params, alpha, (k,)))


def generators(params: AlgebraParams) -> tuple[list[VectorField], list[VectorField]]:
    """The generating sets M and N of the even part of HO.

    M lists T_H(x^(q eps_i) x_k) ordered by (i, q, k), duplicates included;
    N lists T_H(x_k x_l x_q) over distinct triples k < l < q in Y1.
    """
    m_set = [
        m_generator(params, i, q, k)
        for i in params.y0
        for q in range(params.pi[i - 1] + 1)
        for k in params.y1
    ]
    n_set = [
        t_h(SuperPoly.monomial(params, None, triple)) for triple in combinations(params.y1, 3)
    ]
    return m_set, n_set


@dataclass
class HOAlgebra:
    """The even part of HO(n,n;t) with its graded basis and generators."""

    params: AlgebraParams
    basis: GradedSubspace
    m_set: list[VectorField] = field(default_factory=list)
    n_set: list[VectorField] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.basis.dim()

    @property
    def degrees(self) -> list[int]:
        return self.basis.degrees()

    @cached_property
    def action(self):
        from app.services.actions import FieldAction

        return FieldAction(self.basis, self.basis)

    def structure_constants(self) -> dict[tuple[int, int], dict[int, int]]:
        """Nonzero brackets [b_i, b_j] for i < j in basis coordinates."""
        constants = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                value = self.action.bracket(i, j)
                if value:
                    constants[(i, j)] = value
        return constants

    def center(self) -> GradedSubspace:
        """C(g) = {x : [x, b] = 0 for every basis vector b}, one kernel per degree."""
        p = self.params.p
        index = self.basis.index
        vectors = []
        for degree in self.degrees:
            columns = list(index.indices(degree))
            echelon: EchelonBasis[int] = EchelonBasis(p, markowitz=True)
            for b in range(self.dim):
                rows: dict[int, dict[int, int]] = {}
                for a in columns:
                    for e, c in self.action.bracket(a, b).items():
                        rows.setdefault(e, {})[a] = c
                for row in rows.values():
                    echelon.add(row)
                if echelon.rank == len(columns):
                    break
            for kernel_vector in echelon.kernel(columns):
                vectors.append(self.basis.combine(kernel_vector))
        return GradedSubspace.from_basis(self.params, vectors, name="center")


def build(params: AlgebraParams) -> HOAlgebra:
    """Even part of HO as the span of T_H over the odd monomials, degree by degree."""
    images = (
        normalized(t_h(SuperPoly._trusted(params, {m: 1})))
        for m in enumerate_basis(params, parity=Parity.ODD)
    )
    basis = GradedSubspace.spanned_by(params, images, name="HO")
    m_set, n_set = generators(params)
    logger.info("HO(%s): dim %d over degrees %s", params.label(), basis.dim(), basis.degrees())
    return HOAlgebra(params, basis, m_set, n_set)


def closure(seed: Sequence[VectorField], ambient: GradedSubspace) -> GradedSubspace:
    """Smallest bracket-closed subspace containing the seed.

    Each round brackets the newly added vectors against everything accepted so
    far, until no round adds anything.
    """
    for vector in seed:
        if vector and vector.degree() is None:
            raise GradingError("closure seed vectors must be Z-homogeneous")
        if not ambient.contains(vector):
            raise NotInSubspaceError("closure seed is not in the ambient subspace")
    result = GradedSubspace(ambient.params, name="closure")
    accepted: list[VectorField] = []
    frontier = [v for v in seed if result._append(v)]
    accepted.extend(frontier)
    rounds = 0
    while frontier:
        rounds += 1
        added: list[VectorField] = []
        for new in frontier:
            for other in list(accepted):
                value = bracket(new, other)
                if value and result._append(value):
                    accepted.append(value)
                    added.append(value)
        logger.debug("closure round %d: +%d (dim %d)", rounds, len(added), result.dim())
        frontier = added
    logger.info("closure: dim %d after %d rounds", result.dim(), rounds)
    return result


def centralizer(sub: Iterable[VectorField], ambient: GradedSubspace) -> GradedSubspace:
    """{X in ambient : [X, s] = 0 for all s in sub}, one kernel per ambient degree."""
    params = ambient.params
    sub = [s for s in sub if s]
    vectors: list[VectorField] = []
    for degree in ambient.degrees():
        basis = ambient.basis(degree)
        columns = range(len(basis))
        echelon: EchelonBasis = EchelonBasis(params.p, markowitz=True)
        for s_index, s in enumerate(sub):
            rows: dict[TermKey, dict[int, int]] = {}
            for col, b in enumerate(basis):
                for key, c in bracket(b, s).terms.items():
                    rows.setdefault(key, {})[col] = c
            for key in sorted(rows, key=lambda k: (k[0].sort_key(), k[1])):
                echelon.add({c: v for c, v in rows[key].items()})
            logger.debug("centralizer degree %d after %d: rank %d", degree, s_index, echelon.rank)
        for kernel_vector in echelon.kernel(columns):
            combined = VectorField.zero(params)
            for col, c in sorted(kernel_vector.items()):
                combined = combined + basis[col].scale(c)
            vectors.append(combined)
    return GradedSubspace.from_basis(params, vectors, name="centralizer")
