"""Tests for homogeneous derivation spaces and their classification."""

import pytest

from app.core.config import settings
from app.core.errors import GradingError, IndexRangeError
from app.models.enums import DegreeClass, LeibnizMode
from app.models.superalgebra import AlgebraParams
from app.services.actions import FieldAction, TableAction
from app.services.derivations import (
    DerivationLayout,
    GradedMap,
    ad_image,
    ad_partial_power,
    critical_degrees,
    der_space,
    der_spaces,
    expected_class,
    full_der,
    gamma_map,
    inner_map,
    is_p_power_degree,
    leibniz_defect,
    outer_quotient,
    outer_rank,
    sample_pairs,
)
from app.services.ho import HOAlgebra, delta, m_generator
from app.services.verify import build_ho
from app.services.witt import g_basis

# e, h, f with [e,h] = -2e, [e,f] = h, [h,f] = -2f
SL2_CONSTANTS = {(0, 1): {0: -2}, (0, 2): {1: 1}, (1, 2): {2: -2}}

# e_j for j = -1..3 with [e_i, e_j] = (j - i) e_(i+j), zero past degree 3
WITT_CONSTANTS = {
    (0, 1): {0: 1},
    (0, 2): {1: 2},
    (0, 3): {2: 3},
    (0, 4): {3: 4},
    (1, 2): {2: 1},
    (1, 3): {3: 2},
    (1, 4): {4: 3},
    (2, 3): {4: 1},
}


@pytest.fixture(scope="module")
def sl2() -> TableAction:
    return TableAction([0, 0, 0], SL2_CONSTANTS, 5)


@pytest.fixture(scope="module")
def witt() -> TableAction:
    return TableAction([-1, 0, 1, 2, 3], WITT_CONSTANTS, 5)


@pytest.fixture(scope="module")
def params() -> AlgebraParams:
    return AlgebraParams.create(3, 5, (1, 1, 1))


@pytest.fixture(scope="module")
def g_action(params: AlgebraParams) -> FieldAction:
    g = g_basis(params)
    return FieldAction(g, g)


@pytest.fixture(scope="module")
def algebra(params: AlgebraParams) -> HOAlgebra:
    return build_ho(params)


class TestTableAction:
    """Tests for algebras given by structure constants."""

    def test_antisymmetric_lookup(self, sl2: TableAction) -> None:
        """Test [b_j, b_i] = -[b_i, b_j] and [b_i, b_i] = 0."""
        assert sl2.bracket(0, 2) == {1: 1}
        assert sl2.bracket(2, 0) == {1: 4}
        assert sl2.bracket(1, 1) == {}

    def test_rejects_degree_violation(self) -> None:
        """Test a bracket leaving its degree is refused."""
        with pytest.raises(GradingError):
            TableAction([0, 1], {(0, 1): {0: 1}}, 5)
        with pytest.raises(GradingError):
            TableAction([1, 0], {}, 5)

    def test_triples(self, sl2: TableAction) -> None:
        """Test the (i, j, k, c) listing of the constants."""
        assert sl2.triples() == [(0, 1, 0, 3), (0, 2, 1, 1), (1, 2, 2, 3)]
        rebuilt = TableAction.from_triples([0, 0, 0], sl2.triples(), 5)
        assert rebuilt.constants == sl2.constants


class TestDerSpace:
    """Tests for solving the Leibniz system."""

    def test_sl2_all_inner(self, sl2: TableAction) -> None:
        """Test Der(sl2) over F_5 is three-dimensional and inner."""
        space = der_space(sl2, 0)
        assert space.dim == 3
        assert space.inner_dim == 3
        assert space.outer_dim == 0

    def test_generator_mode_agrees(self, sl2: TableAction) -> None:
        """Test rows from the generating set {e, f} give the same space."""
        full = der_space(sl2, 0, mode=LeibnizMode.ALL)
        generated = der_space(sl2, 0, mode=LeibnizMode.GENERATORS, generators=[{0: 1}, {2: 1}])
        assert generated.canonical() == full.canonical()

    def test_empty_degree(self, sl2: TableAction) -> None:
        """Test a degree with no Hom blocks gives the zero space."""
        assert der_space(sl2, 1).dim == 0

    def test_vanish_on(self, sl2: TableAction) -> None:
        """Test vanishing on every degree leaves nothing, and unknown degrees raise."""
        assert der_space(sl2, 0, vanish_on=[0]).dim == 0
        with pytest.raises(GradingError):
            der_space(sl2, 0, vanish_on=[5])

    def test_solutions_satisfy_leibniz(self, g_action: FieldAction) -> None:
        """Test every basis map of Der_m(G) passes the Leibniz check."""
        for m in (-1, 0, 1):
            space = der_space(g_action, m, verify=False)
            assert all(leibniz_defect(g_action, d) is None for d in space.maps)
            assert space.inner_dim <= space.dim

    def test_grading_derivation(self, g_action: FieldAction) -> None:
        """Test x -> deg(x) x is a degree-0 derivation of G."""
        index = g_action.g_index
        grading = GradedMap(
            0,
            {
                a: {a: index.degree_of(a) % 5}
                for a in range(g_action.g_dim)
                if index.degree_of(a) % 5
            },
        )
        assert leibniz_defect(g_action, grading) is None
        assert der_space(g_action, 0).contains(grading)

    def test_broken_map_detected(self, sl2: TableAction) -> None:
        """Test a map that is not a derivation is caught."""
        assert leibniz_defect(sl2, GradedMap(0, {0: {0: 1}})) is not None

    def test_concurrent_matches_sequential(self, g_action: FieldAction) -> None:
        """Test solving degrees concurrently gives the same canonical bases."""
        degrees = [-1, 0, 1, 2]
        together = der_spaces(g_action, degrees, workers=4)
        for m in degrees:
            assert together[m].canonical() == der_space(g_action, m).canonical()


class TestGradedSolver:
    """Tests for the solver that propagates along g_-1."""

    def test_matches_all_pairs_without_lowest_degree(self, sl2: TableAction) -> None:
        """Test sl2, concentrated in degree 0, gives the same space as every pair."""
        graded = der_space(sl2, 0, mode=LeibnizMode.GRADED)
        assert graded.canonical() == der_space(sl2, 0, mode=LeibnizMode.ALL).canonical()

    def test_witt_all_inner(self, witt: TableAction) -> None:
        """Test Der W(1;1) over F_5 is one inner map in each degree -1..3."""
        for m in witt.hom_degrees():
            space = der_space(witt, m, mode=LeibnizMode.GRADED)
            expected = 1 if -1 <= m <= 3 else 0
            assert space.dim == space.inner_dim == expected, m

    def test_witt_matches_all_pairs(self, witt: TableAction) -> None:
        """Test propagation along e_-1 reproduces the full Leibniz system."""
        for m in witt.hom_degrees():
            graded = der_space(witt, m, mode=LeibnizMode.GRADED)
            full = der_space(witt, m, mode=LeibnizMode.ALL)
            assert graded.canonical() == full.canonical(), m

    def test_witt_vanish_on(self, witt: TableAction) -> None:
        """Test forcing blocks to zero agrees between the two solvers."""
        for m in (0, 1, 2):
            graded = der_space(witt, m, vanish_on=[-1], mode=LeibnizMode.GRADED)
            full = der_space(witt, m, vanish_on=[-1], mode=LeibnizMode.ALL)
            assert graded.canonical() == full.canonical(), m

    def test_g_matches_all_pairs(self, g_action: FieldAction) -> None:
        """Test G, whose g_-1 invariants are large, against every pair."""
        for m in (-1, 0, 1):
            graded = der_space(g_action, m, mode=LeibnizMode.GRADED)
            full = der_space(g_action, m, mode=LeibnizMode.ALL)
            assert graded.canonical() == full.canonical(), m
            assert graded.inner_dim == full.inner_dim

    def test_default_mode(self) -> None:
        """Test the graded solver is the default."""
        assert settings.LEIBNIZ_MODE is LeibnizMode.GRADED


class TestSamplePairs:
    """Tests for the seeded re-check sample."""

    def test_small_algebras_use_every_pair(self, sl2: TableAction) -> None:
        """Test all three pairs of sl2 are kept."""
        maps = der_space(sl2, 0, verify=False).maps
        assert sample_pairs(sl2, maps, 0) == [(0, 1), (0, 2), (1, 2)]

    def test_sample_is_seeded(
        self, g_action: FieldAction, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Test a capped sample has the requested size and repeats exactly."""
        monkeypatch.setattr(settings, "VERIFY_PAIRS", 10)
        maps = der_space(g_action, 0, verify=False).maps
        first = sample_pairs(g_action, maps, 0)
        assert len(first) == 10
        assert first == sample_pairs(g_action, maps, 0)
        assert all(a < b for a, b in first)


class TestMaps:
    """Tests for layouts, inner maps and graded map algebra."""

    def test_layout_round_trip(self, sl2: TableAction) -> None:
        """Test column and unpack are inverse on every unknown."""
        layout = DerivationLayout(sl2, 0)
        assert layout.size == 9
        for column in range(layout.size):
            a, k = layout.unpack(column)
            assert layout.column(a, k) == column

    def test_block_matrix(self, sl2: TableAction) -> None:
        """Test the matrix of x -> [x, e] on sl2."""
        block = inner_map(sl2, 0, {0: 1}).block(sl2, 0)
        assert block.shape == (3, 3)
        # [h, e] = 2e and [f, e] = -h
        assert block[:, 1].tolist() == [2, 0, 0]
        assert block[:, 2].tolist() == [0, 4, 0]

    def test_inner_commutator(self, sl2: TableAction) -> None:
        """Test [x -> [x,e], x -> [x,f]] is x -> [x,-h]."""
        e_map, f_map = inner_map(sl2, 0, {0: 1}), inner_map(sl2, 0, {2: 1})
        assert e_map.commutator(f_map, 5) == inner_map(sl2, 0, {1: 4})

    def test_ad_image_eigenvector(self, params: AlgebraParams, algebra: HOAlgebra) -> None:
        """Test x -> [x, Delta_1] fixes T_H(x^(2e1) x4)."""
        (ad_delta,) = ad_image([delta(params, 1)], algebra.action, 0)
        coords = algebra.basis.coordinates(m_generator(params, 1, 2, 4))
        assert ad_delta.apply(coords, params.p) == coords

    def test_ad_image_wrong_degree(self, params: AlgebraParams, algebra: HOAlgebra) -> None:
        """Test ad_image refuses an element of the wrong degree."""
        with pytest.raises(GradingError):
            ad_image([delta(params, 1)], algebra.action, 1)


class TestPPowerMaps:
    """Tests for the maps (ad d_i)^(p^e)."""

    def test_vanishes_when_too_deep(self, algebra: HOAlgebra) -> None:
        """Test (ad d_1)^5 is zero when t_1 = 1."""
        assert ad_partial_power(1, 1, algebra.action).is_zero()

    def test_rejects_bad_arguments(self, algebra: HOAlgebra) -> None:
        """Test odd indices and e < 1 are refused."""
        with pytest.raises(IndexRangeError):
            ad_partial_power(4, 1, algebra.action)
        with pytest.raises(IndexRangeError):
            ad_partial_power(1, 0, algebra.action)

    @pytest.mark.slow
    def test_nonzero_for_larger_t(self) -> None:
        """Test (ad d_1)^5 is a nonzero outer derivation for t = (2,1,1)."""
        params = AlgebraParams.create(3, 5, (2, 1, 1))
        action = build_ho(params).action
        power = ad_partial_power(1, 1, action)
        assert not power.is_zero()
        assert ad_partial_power(2, 1, action).is_zero()
        pairs = [
            (a, b) for a in range(0, action.g_dim, 7) for b in range(0, action.g_dim, 11) if a < b
        ]
        assert leibniz_defect(action, power, pairs[:400]) is None
        assert not action.v_index.dim(-5)

    @pytest.mark.parametrize(
        ("degree", "expected"),
        [(-5, True), (-25, True), (-1, False), (-2, False), (-10, False), (0, False)],
    )
    def test_p_power_degrees(self, degree: int, expected: bool) -> None:
        """Test recognition of degrees -p^r."""
        assert is_p_power_degree(degree, 5) is expected

    @pytest.mark.parametrize(
        ("degree", "adjoint", "expected"),
        [
            (0, True, DegreeClass.INNER_PLUS_GAMMA),
            (0, False, DegreeClass.INNER),
            (3, True, DegreeClass.INNER),
            (-1, True, DegreeClass.INNER),
            (-5, True, DegreeClass.P_POWER),
            (-3, True, DegreeClass.ZERO),
        ],
    )
    def test_expected_class(self, degree: int, adjoint: bool, expected: DegreeClass) -> None:
        """Test the expected shape of Der_m by degree."""
        assert expected_class(degree, 5, adjoint) is expected


class TestOuterMaps:
    """Tests for degree selection and outer representatives."""

    @pytest.mark.parametrize(
        ("t", "expected"),
        [((1, 1, 1), [-5, -2, -1, 0, 1]), ((2, 1, 1), [-25, -5, -2, -1, 0, 1])],
    )
    def test_critical_degrees(self, t: tuple[int, ...], expected: list[int]) -> None:
        """Test -p^e up to max t joined with the low degrees."""
        assert critical_degrees(AlgebraParams.create(3, 5, t)) == expected

    def test_gamma_is_outer(self, algebra: HOAlgebra) -> None:
        """Test ad Gamma is not inner while an inner map has outer rank 0."""
        action = algebra.action
        assert outer_rank(action, [gamma_map(action)]) == 1
        v = action.v_index.indices(0)[0]
        assert outer_rank(action, [inner_map(action, 0, {v: 1})]) == 0


@pytest.mark.slow
class TestHODerivations:
    """Acceptance-scale derivation runs on HO(3,3;(1,1,1)) over F_5."""

    def test_low_degrees(self, algebra: HOAlgebra) -> None:
        """Test Der_m for m = -2, -1, 0, 1 matches inner maps plus Gamma."""
        report, spaces = full_der(algebra, degrees=[-2, -1, 0, 1])
        assert report.mode == LeibnizMode.GRADED.value
        assert all(row.passed for row in report.rows)
        assert not report.complete
        assert spaces[-2].dim == 0
        assert spaces[-1].dim == spaces[-1].inner_dim == 3
        assert spaces[0].dim == 10
        assert spaces[0].outer_dim == 1
        assert spaces[1].dim == spaces[1].inner_dim == 19

    def test_generator_mode_agrees(self, algebra: HOAlgebra) -> None:
        """Test the generating-set rows give the same Der_-1 and Der_0."""
        _, graded = full_der(algebra, degrees=[-1, 0])
        _, generated = full_der(algebra, degrees=[-1, 0], mode=LeibnizMode.GENERATORS)
        for m in (-1, 0):
            assert graded[m].canonical() == generated[m].canonical()


@pytest.mark.slow
class TestCriticalDegreeRun:
    """Derivations of HO(3,3;(2,1,1)) over F_5 on the degrees that carry outer maps."""

    @pytest.fixture(scope="class")
    def larger(self) -> HOAlgebra:
        return build_ho(AlgebraParams.create(3, 5, (2, 1, 1)))

    @pytest.fixture(scope="class")
    def solved(self, larger: HOAlgebra) -> tuple:
        return full_der(larger, degrees=critical_degrees(larger.params))

    def test_degree_classes(self, solved: tuple) -> None:
        """Test Der_-25 = 0, Der_-5 is one outer map and every row passes."""
        report, spaces = solved
        assert report.degrees == [-25, -5, -2, -1, 0, 1]
        assert all(row.passed for row in report.rows)
        assert spaces[-25].dim == 0
        assert spaces[-5].dim == 1
        assert spaces[-5].inner_dim == 0
        assert report.outer == report.expected_outer == 2

    def test_p_power_maps(self, larger: HOAlgebra) -> None:
        """Test (ad d_2)^5 = (ad d_3)^5 = 0 and (ad d_1)^5 is outer."""
        action = larger.action
        assert ad_partial_power(2, 1, action).is_zero()
        assert ad_partial_power(3, 1, action).is_zero()
        power = ad_partial_power(1, 1, action)
        assert not power.is_zero()
        assert outer_rank(action, [power]) == 1

    def test_outer_quotient(self, larger: HOAlgebra, solved: tuple) -> None:
        """Test the outer algebra is two-dimensional, abelian and spanned by its representatives."""
        report, spaces = solved
        outer = outer_quotient(spaces, larger, report.dim_center)
        assert outer.dim == outer.expected_dim == 2
        assert not outer.complete
        assert outer.totals_dim is None
        assert outer.p_power_count == outer.expected_p_power_count == 1
        assert outer.representatives_outer_rank == 2
        assert outer.abelian
