"""Monomial bases of the even part of W(n,n;t) and of its subalgebra G."""

from __future__ import annotations

import logging

from app.models.enums import Parity
from app.models.superalgebra import AlgebraParams, Monomial, enumerate_basis
from app.models.vector_field import VectorField
from app.services.graded import GradedSubspace

logger = logging.getLogger(__name__)


def _even_fields(params: AlgebraParams, monomials: list[Monomial]) -> list[VectorField]:
    fields = []
    for mono in monomials:
        for r in params.y:
            if (len(mono.u) + params.mu(r)) % 2 == Parity.EVEN:
                fields.append(VectorField._trusted(params, {(mono, r): 1}))
    return fields


def even_part_basis(params: AlgebraParams) -> GradedSubspace:
    """The even part of W(n,n;t): fields x^(alpha) x^u d_r with |u| + mu(r) even."""
    monomials = enumerate_basis(params)
    space = GradedSubspace.from_basis(params, _even_fields(params, monomials), name="W")
    logger.info("even part of W(%s): dim %d", params.label(), space.dim())
    return space


def g_basis(params: AlgebraParams) -> GradedSubspace:
    """Even exterior-only fields x^u d_r (no divided-power factor)."""
    monomials = [m for m in enumerate_basis(params) if not any(m.alpha)]
    return GradedSubspace.from_basis(params, _even_fields(params, monomials), name="G")


def dim_g(params: AlgebraParams) -> int:
    """Closed form n * 2^n for the dimension of G."""
    return params.n * 2**params.n
