"""Tests for vector fields, the even part of W and graded subspaces."""

import random

import pytest

from app.core.errors import GradingError, NotInSubspaceError
from app.models.enums import Parity
from app.models.superalgebra import AlgebraParams, SuperPoly
from app.models.vector_field import VectorField, apply, bracket
from app.services.graded import GradedIndex, GradedSubspace
from app.services.ho import delta
from app.services.verify import random_field, random_poly
from app.services.witt import dim_g, even_part_basis, g_basis


@pytest.fixture(scope="module")
def params() -> AlgebraParams:
    return AlgebraParams.create(3, 5, (1, 1, 1))


@pytest.fixture(scope="module")
def witt(params: AlgebraParams) -> GradedSubspace:
    return even_part_basis(params)


def x(params: AlgebraParams, *alpha: int) -> SuperPoly:
    return SuperPoly.monomial(params, alpha)


class TestVectorField:
    """Unit tests for the action and the super-bracket."""

    def test_apply(self, params: AlgebraParams) -> None:
        """Test d1 acting on x^(2e1) and any field killing constants."""
        d1 = VectorField.d(params, 1)
        assert apply(d1, x(params, 2, 0, 0)) == x(params, 1, 0, 0)
        assert apply(delta(params, 1), SuperPoly.one(params)).is_zero()

    def test_euler_like_field_kills_x1x4(self, params: AlgebraParams) -> None:
        """Test (x4 d4 - x1 d1)(x1 x4) = 0."""
        x1, x4 = SuperPoly.var(params, 1), SuperPoly.var(params, 4)
        field = VectorField.from_poly(x4, 4) - VectorField.from_poly(x1, 1)
        assert apply(field, x1 * x4).is_zero()

    def test_bracket_example(self, params: AlgebraParams) -> None:
        """Test [d1, x^(2e1) d2] = x^(e1) d2."""
        lhs = bracket(VectorField.d(params, 1), VectorField.from_poly(x(params, 2, 0, 0), 2))
        assert lhs == VectorField.from_poly(x(params, 1, 0, 0), 2)

    def test_delta_fields_commute(self, params: AlgebraParams) -> None:
        """Test [Delta_i, Delta_j] = 0."""
        for i in params.y0:
            for j in params.y0:
                assert bracket(delta(params, i), delta(params, j)).is_zero()

    def test_grading_and_parity(self, params: AlgebraParams) -> None:
        """Test degree zd - 1 and parity of single terms."""
        field = VectorField.from_poly(SuperPoly.var(params, 4), 1)
        assert field.degree() == 0
        assert field.parity() == Parity.ODD
        assert VectorField.d(params, 2).degree() == -1
        mixed = VectorField.d(params, 1) + VectorField.d(params, 4)
        assert mixed.parity() is None

    def test_super_antisymmetry_and_jacobi(self, params: AlgebraParams) -> None:
        """Test the bracket axioms on seeded homogeneous fields."""
        rng = random.Random(3)
        for _ in range(60):
            a, b, c = (
                random_field(rng, params, rng.choice([Parity.EVEN, Parity.ODD])) for _ in range(3)
            )
            pa, pb = a.parity(), b.parity()
            sign_ab = -1 if pa and pb else 1
            assert bracket(a, b) == bracket(b, a).scale(-sign_ab)
            lhs = bracket(a, bracket(b, c))
            rhs = bracket(bracket(a, b), c) + bracket(b, bracket(a, c)).scale(sign_ab)
            assert lhs == rhs

    def test_action_is_a_representation(self, params: AlgebraParams) -> None:
        """Test [D, E](f) = D(E(f)) - (-1)^(p(D)p(E)) E(D(f))."""
        rng = random.Random(9)
        for _ in range(60):
            d = random_field(rng, params, rng.choice([Parity.EVEN, Parity.ODD]))
            e = random_field(rng, params, rng.choice([Parity.EVEN, Parity.ODD]))
            f = random_poly(rng, params, rng.choice([Parity.EVEN, Parity.ODD]), terms=3)
            sign = -1 if d.parity() and e.parity() else 1
            assert apply(bracket(d, e), f) == apply(d, apply(e, f)) - apply(e, apply(d, f)).scale(
                sign
            )

    def test_even_square_vanishes(self, params: AlgebraParams) -> None:
        """Test [X, X] = 0 for even X."""
        rng = random.Random(1)
        for _ in range(30):
            field = random_field(rng, params, Parity.EVEN, terms=3)
            assert bracket(field, field).is_zero()


class TestEvenPart:
    """Tests for the monomial basis of the even part of W."""

    def test_dimension(self, witt: GradedSubspace) -> None:
        """Test dim W_even = n 2^n p^|t| = 3000."""
        assert witt.dim() == 3000
        assert witt.degrees()[0] == -1
        assert witt.degrees()[-1] == 14

    def test_lowest_degree(self, witt: GradedSubspace) -> None:
        """Test that degree -1 is spanned by d1, d2, d3 in order."""
        assert [witt.label(i) for i in witt.index.indices(-1)] == ["d_1", "d_2", "d_3"]

    def test_all_even(self, witt: GradedSubspace) -> None:
        """Test every basis field is even."""
        assert all(v.parity() == Parity.EVEN for v in witt)

    def test_coordinates(self, params: AlgebraParams, witt: GradedSubspace) -> None:
        """Test coordinates of a combination recover the combination."""
        field = VectorField.d(params, 2).scale(3) + delta(params, 1)
        coords = witt.coordinates(field)
        assert witt.combine(coords) == field
        assert witt.index.offsets[-1] + 1 in coords

    def test_odd_field_not_contained(self, params: AlgebraParams, witt: GradedSubspace) -> None:
        """Test that an odd field lies outside the even part."""
        assert not witt.contains(VectorField.d(params, 4))
        with pytest.raises(NotInSubspaceError):
            witt.coordinates(VectorField.d(params, 4))


class TestSubalgebraG:
    """Tests for the exterior-only subalgebra G."""

    def test_dimension(self, params: AlgebraParams) -> None:
        """Test dim G = n 2^n with its graded pieces."""
        g = g_basis(params)
        assert g.dim() == dim_g(params) == 24
        assert g.dims() == {-1: 3, 0: 9, 1: 9, 2: 3}

    def test_membership(self, params: AlgebraParams) -> None:
        """Test x4 d4 is in G while Delta_1, which carries x1 d1, is not."""
        g = g_basis(params)
        assert g.contains(VectorField.from_poly(SuperPoly.var(params, 4), 4))
        assert not g.contains(delta(params, 1))
        assert g.is_subspace_of(even_part_basis(params))


class TestGradedSubspace:
    """Tests for graded subspace construction."""

    def test_dependent_basis_rejected(self, params: AlgebraParams) -> None:
        """Test from_basis refuses linearly dependent input."""
        d1 = VectorField.d(params, 1)
        with pytest.raises(GradingError, match="linearly dependent"):
            GradedSubspace.from_basis(params, [d1, d1.scale(2)])

    def test_spanned_by_drops_dependent(self, params: AlgebraParams) -> None:
        """Test spanned_by keeps the first independent vectors."""
        d1, d2 = VectorField.d(params, 1), VectorField.d(params, 2)
        space = GradedSubspace.spanned_by(params, [d1, d1 + d2, d2, VectorField.zero(params)])
        assert space.dim() == 2
        assert space.basis(-1) == [d1, d1 + d2]

    def test_inhomogeneous_rejected(self, params: AlgebraParams) -> None:
        """Test that a vector mixing degrees cannot be a basis vector."""
        mixed = VectorField.d(params, 1) + delta(params, 1)
        with pytest.raises(GradingError):
            GradedSubspace.from_basis(params, [mixed])

    def test_graded_index(self) -> None:
        """Test global numbering over sparse degrees."""
        index = GradedIndex({2: 1, -1: 3, 0: 0})
        assert index.degrees == [-1, 2]
        assert index.total == 4
        assert list(index.indices(2)) == [3]
        assert [index.degree_of(i) for i in range(4)] == [-1, -1, -1, 2]
        assert index.local(3) == 0
        with pytest.raises(IndexError):
            index.degree_of(4)
