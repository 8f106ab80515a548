"""Verification suites.

Each suite builds what it needs for one parameter set and records every check as
an ``Assertion`` in a ``SuiteReport``. Sampled checks draw from a
``random.Random`` seeded by the run, so reports are reproducible.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable, Sequence
from functools import cache
from math import comb

from app.core.config import settings
from app.core.errors import OptionError
from app.models.enums import Parity, VerifySuite
from app.models.superalgebra import AlgebraParams, Monomial, SuperPoly, enumerate_basis
from app.models.vector_field import VectorField, apply, bracket
from app.schemas.report import SuiteReport
from app.services import ho as ho_service
from app.services.derivations import (
    classify,
    der_space,
    expected_extra,
    full_der,
    outer_quotient,
)
from app.services.ho import HOAlgebra
from app.services.witt import dim_g, even_part_basis, g_basis

logger = logging.getLogger(__name__)

NEGATIVE_DEGREES = (-1, -2, -3, -4, -6)
POSITIVE_DEGREES = (1, 2)
TOP_DEGREES = (-1, 0)


@cache
def build_ho(params: AlgebraParams) -> HOAlgebra:
    """One HO build per parameter set for the lifetime of the process."""
    return ho_service.build(params)


def random_poly(
    rng: random.Random, params: AlgebraParams, parity: Parity, terms: int = 2
) -> SuperPoly:
    monomials = enumerate_basis(params, parity=parity)
    picks = rng.sample(monomials, min(terms, len(monomials)))
    return SuperPoly(params, {m: rng.randrange(1, params.p) for m in picks})


def random_field(
    rng: random.Random, params: AlgebraParams, parity: Parity, terms: int = 2
) -> VectorField:
    result: dict = {}
    monomials = enumerate_basis(params)
    while len(result) < terms:
        mono = rng.choice(monomials)
        r = rng.choice(params.y)
        if (len(mono.u) + params.mu(r)) % 2 == parity:
            result[(mono, r)] = rng.randrange(1, params.p)
    return VectorField(params, result)


def _new_report(suite: VerifySuite, params: AlgebraParams, seed: int) -> SuiteReport:
    return SuiteReport(suite=suite, params=params.label(), seed=seed)


def suite_bracket(params: AlgebraParams, seed: int) -> SuiteReport:
    report = _new_report(VerifySuite.BRACKET, params, seed)
    rng = random.Random(seed)
    p = params.p
    samples = settings.SAMPLE_TRIPLES

    failures = {"antisymmetry": 0, "jacobi": 0, "grading": 0, "closure": 0, "action": 0}
    for _ in range(samples):
        x, y, z = (random_field(rng, params, Parity.EVEN, 1) for _ in range(3))
        xy = bracket(x, y)
        if xy != -bracket(y, x):
            failures["antisymmetry"] += 1
        jacobi = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
        if jacobi:
            failures["jacobi"] += 1
        if xy and xy.degree() != x.degree() + y.degree():
            failures["grading"] += 1
        if xy and xy.parity() != Parity.EVEN:
            failures["closure"] += 1
        a = random_field(rng, params, Parity(rng.randrange(2)))
        b = random_field(rng, params, Parity(rng.randrange(2)))
        g = random_poly(rng, params, Parity(rng.randrange(2)))
        sign = -1 if a.parity() == b.parity() == Parity.ODD else 1
        lhs = apply(bracket(a, b), g)
        rhs = apply(a, apply(b, g)) - apply(b, apply(a, g)).scale(sign)
        if lhs != rhs:
            failures["action"] += 1
    for name, count in failures.items():
        report.check(f"W {name}", f"{name} on {samples} sampled fields of W", count, 0)

    algebra = build_ho(params)
    basis = algebra.basis
    failures = {"jacobi": 0, "closure": 0}
    for _ in range(samples):
        x, y, z = (basis.vector(rng.randrange(basis.dim())) for _ in range(3))
        xy = bracket(x, y)
        if bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, xy):
            failures["jacobi"] += 1
        if not basis.contains(xy):
            failures["closure"] += 1
    report.check("HO jacobi", "Jacobi identity on sampled HO basis triples", failures["jacobi"], 0)
    report.check("HO closure", "[HO, HO] lies in HO", failures["closure"], 0)

    d1 = VectorField.d(params, 1)
    x1_sq = SuperPoly.monomial(params, (2,) + (0,) * (params.n - 1))
    report.check(
        "d1 on x^(2e1) d2",
        "[d_1, x^(2 eps_1) d_2] = x^(eps_1) d_2",
        bracket(d1, VectorField.from_poly(x1_sq, 2)),
        VectorField.from_poly(SuperPoly.var(params, 1), 2),
    )
    deltas = [ho_service.delta(params, i) for i in params.y0]
    commuting = all(not bracket(a, b) for a in deltas for b in deltas)
    report.check("deltas commute", "[Delta_i, Delta_j] = 0", commuting, True)

    eigen_failures = 0
    for i in params.y0:
        for q in range(params.pi[i - 1] + 1):
            for k in params.y1:
                target = ho_service.m_generator(params, i, q, k)
                eigenvalue = (int(k == params.prime(i)) - q) % p
                if bracket(deltas[i - 1], target) != target.scale(eigenvalue):
                    eigen_failures += 1
    report.check(
        "Delta eigenvalues",
        "[Delta_i, T_H(x^(q eps_i) x_k)] = (delta_{k,i'} - q) T_H(x^(q eps_i) x_k)",
        eigen_failures,
        0,
    )
    return report


def _odd_monomials_up_to(params: AlgebraParams, degree: int) -> list[Monomial]:
    return [
        m for d in range(degree + 1) for m in enumerate_basis(params, d, Parity.ODD)
    ]


def suite_th_morphism(params: AlgebraParams, seed: int, degree: int | None = None) -> SuiteReport:
    report = _new_report(VerifySuite.TH_MORPHISM, params, seed)
    rng = random.Random(seed)
    t_h = ho_service.t_h
    x = [None] + [SuperPoly.var(params, i) for i in params.y]

    n1 = params.n + 1
    report.check(
        "T_H(x1 x4)",
        "T_H(x_1 x_(n+1)) = x_(n+1) d_(n+1) - x_1 d_1",
        t_h(x[1] * x[n1]),
        VectorField.from_poly(x[n1], n1) - VectorField.from_poly(x[1], 1),
    )
    report.check(
        "T_H(1)",
        "constants lie in the kernel of T_H",
        t_h(SuperPoly.one(params)),
        VectorField.zero(params),
    )
    report.check(
        "T_H(x4)",
        "T_H(x_(n+1)) = -d_1",
        t_h(x[params.n + 1]),
        -VectorField.d(params, 1),
    )

    top = 4 if degree is None else degree
    odd = _odd_monomials_up_to(params, top)
    exhaustive_failures = 0
    for a in odd:
        pa = SuperPoly._trusted(params, {a: 1})
        for b in odd:
            if not ho_service.verify_th_morphism(pa, SuperPoly._trusted(params, {b: 1})):
                exhaustive_failures += 1
    report.check(
        "morphism exhaustive",
        f"[T_H(a), T_H(b)] = T_H(T_H(a)(b)) on all {len(odd) ** 2} pairs"
        f" of odd monomials of degree <= {top}",
        exhaustive_failures,
        0,
    )

    sampled_failures = 0
    for _ in range(settings.SAMPLE_PAIRS):
        a = random_poly(rng, params, Parity(rng.randrange(2)), rng.randint(1, 3))
        b = random_poly(rng, params, Parity(rng.randrange(2)), rng.randint(1, 3))
        if not ho_service.verify_th_morphism(a, b):
            sampled_failures += 1
    report.check(
        "morphism sampled",
        f"[T_H(a), T_H(b)] = T_H(T_H(a)(b)) on {settings.SAMPLE_PAIRS} seeded pairs",
        sampled_failures,
        0,
    )

    even_rank = build_ho(params).dim
    odd_rank = ho_service.odd_part_dimension(params)
    report.check(
        "kernel of T_H",
        "ker T_H = F * 1",
        params.dim_o - even_rank - odd_rank,
        1,
    )
    return report


def suite_generators(params: AlgebraParams, seed: int) -> SuiteReport:
    report = _new_report(VerifySuite.GENERATORS, params, seed)
    algebra = build_ho(params)
    report.check(
        "|N|", "N runs over triples k < l < q in Y1", len(algebra.n_set), comb(params.n, 3)
    )
    report.check(
        "|M|",
        "M runs over (i, q, k) with 0 <= q <= pi_i",
        len(algebra.m_set),
        sum(pi + 1 for pi in params.pi) * params.n,
    )
    seed_vectors = algebra.m_set + algebra.n_set
    outside = sum(1 for v in seed_vectors if not algebra.basis.contains(v))
    report.check("generators in HO", "M and N lie in HO", outside, 0)
    generated = ho_service.closure(seed_vectors, algebra.basis)
    report.check("closure of M and N", "HO is generated by M and N", generated.dim(), algebra.dim)
    return report


def suite_membership(params: AlgebraParams, seed: int) -> SuiteReport:
    report = _new_report(VerifySuite.MEMBERSHIP, params, seed)
    rng = random.Random(seed)
    algebra = build_ho(params)
    failing = sum(1 for v in algebra.basis if not ho_service.is_member(v))
    report.check(
        "basis members",
        "every T_H(odd monomial) satisfies the membership conditions",
        failing,
        0,
    )

    kernel = ho_service.membership_kernel_dims(params)
    image = {d: algebra.basis.dim(d) for d in kernel}
    report.check(
        "membership kernel",
        "solutions of the membership conditions = span of T_H(odd), degree by degree",
        kernel,
        image,
    )
    odd_failures = 0
    for _ in range(min(settings.SAMPLE_PAIRS, 200)):
        a = random_poly(rng, params, Parity.EVEN, rng.randint(1, 3))
        if not ho_service.is_member(ho_service.t_h(a)):
            odd_failures += 1
    report.check(
        "odd members",
        "T_H of even elements satisfies the odd-part conditions",
        odd_failures,
        0,
    )
    delta_member = ho_service.is_member(ho_service.delta(params, 1))
    report.check("Delta_1 member", "Delta_1 is in HO", delta_member, True)
    gamma_member = ho_service.is_member(ho_service.gamma(params))
    report.check("Gamma not member", "Gamma is not in HO", gamma_member, False)

    half = 2 ** (params.n - 1) * params.p**params.sum_t
    odd = ho_service.odd_part_dimension(params)
    report.check(
        "even plus odd",
        "dim HO_even + dim HO_odd = 2^n p^(sum t) - 1",
        algebra.dim + odd,
        2 * half - 1,
    )
    report.check(
        "halved closed form",
        "dim HO_even = 2^(n-1) p^(sum t) - 1",
        algebra.dim,
        half - 1,
        informational=True,
    )
    report.check(
        "constants closed form",
        "dim HO_even = 2^(n-1) p^(sum t), the constant lies in the kernel on the even side",
        algebra.dim,
        half,
        informational=True,
    )
    return report


def _classified(report: SuiteReport, algebra: HOAlgebra, degrees) -> None:
    action = algebra.action
    generators = [action.g.coordinates(v) for v in algebra.m_set + algebra.n_set]
    for m in degrees:
        space = der_space(action, m, generators=generators)
        row = classify(space, action, expected_extra(action, m))
        report.check(
            f"Der_{m}",
            f"Der_{m} = {row.expected_class.value} span",
            f"dim {row.dim} (inner {row.inner_dim})",
            f"dim {row.expected_dim}",
            passed=row.passed,
        )


def _vanishing(report: SuiteReport, algebra: HOAlgebra, degrees) -> None:
    action = algebra.action
    generators = [action.g.coordinates(v) for v in algebra.m_set + algebra.n_set]
    for m in degrees:
        space = der_space(action, m, vanish_on=TOP_DEGREES, generators=generators)
        report.check(
            f"Der_{m} vanishing on the top",
            "a derivation of degree >= 0 vanishing on degrees -1 and 0 is zero",
            space.dim,
            0,
        )


def suite_der_neg(params: AlgebraParams, seed: int, degree: int | None = None) -> SuiteReport:
    report = _new_report(VerifySuite.DER_NEG, params, seed)
    algebra = build_ho(params)
    degrees = NEGATIVE_DEGREES if degree is None else (degree,)
    _classified(report, algebra, degrees)
    return report


def suite_der_zero(params: AlgebraParams, seed: int) -> SuiteReport:
    report = _new_report(VerifySuite.DER_ZERO, params, seed)
    algebra = build_ho(params)
    _classified(report, algebra, (0,))
    _vanishing(report, algebra, (0,))
    return report


def suite_der_pos(params: AlgebraParams, seed: int, degree: int | None = None) -> SuiteReport:
    report = _new_report(VerifySuite.DER_POS, params, seed)
    algebra = build_ho(params)
    degrees = POSITIVE_DEGREES if degree is None else (degree,)
    _classified(report, algebra, degrees)
    _vanishing(report, algebra, degrees)
    return report


def _partial_note(report: SuiteReport, degrees: Sequence[int], complete: bool) -> None:
    if not complete:
        report.check(
            "degrees solved",
            "degrees outside this list are taken to be inner",
            ",".join(str(m) for m in degrees),
            "all degrees",
            passed=False,
            informational=True,
        )


def suite_full_der(
    params: AlgebraParams, seed: int, degrees: Sequence[int] | None = None
) -> SuiteReport:
    report = _new_report(VerifySuite.FULL_DER, params, seed)
    algebra = build_ho(params)
    result, _ = full_der(algebra, degrees=degrees)
    _partial_note(report, result.degrees, result.complete)
    for row in result.rows:
        report.check(
            f"Der_{row.degree}",
            f"Der_{row.degree} = {row.expected_class.value} span",
            row.dim,
            row.expected_dim,
            passed=row.passed,
        )
    report.check(
        "outer dimension",
        "dim Der - dim ad HO = sum t - n + 1",
        result.outer,
        result.expected_outer,
    )
    report.check(
        "total vs halved form",
        "dim Der = 2^(n-1) p^(sum t) + sum t - n",
        result.total,
        result.halved_form_total,
        informational=True,
    )
    report.check(
        "total vs computed form",
        "dim Der = dim HO - dim C(HO) + 1 + sum t - n",
        result.total,
        result.computed_form_total,
        informational=True,
    )
    return report


def suite_outer(
    params: AlgebraParams, seed: int, degrees: Sequence[int] | None = None
) -> SuiteReport:
    report = _new_report(VerifySuite.OUTER, params, seed)
    algebra = build_ho(params)
    result, spaces = full_der(algebra, degrees=degrees)
    outer = outer_quotient(spaces, algebra, result.dim_center)
    _partial_note(report, outer.degrees, outer.complete)
    report.check(
        "outer dimension", "Der/ad HO has dimension sum t - n + 1", outer.dim, outer.expected_dim
    )
    if outer.totals_dim is not None:
        report.check(
            "outer by totals",
            "dim Der - dim ad HO equals the sum of the outer parts",
            outer.totals_dim,
            outer.dim,
        )
    report.check(
        "representatives outer",
        "ad Gamma and the p-power maps are independent modulo inner derivations",
        outer.representatives_outer_rank,
        len(outer.representatives),
    )
    report.check(
        "degree classes",
        "every solved degree matches its expected span",
        result.passed,
        True,
    )
    report.check(
        "p-power count",
        "nonzero (ad d_i)^(p^k), 1 <= k < t_i, number sum t - n",
        outer.p_power_count,
        outer.expected_p_power_count,
    )
    report.check(
        "abelian",
        "outer representatives commute",
        ", ".join(outer.nonzero_commutators) or "none",
        "none",
    )
    return report


def suite_center(params: AlgebraParams, seed: int) -> SuiteReport:
    report = _new_report(VerifySuite.CENTER, params, seed)
    algebra = build_ho(params)
    report.check("center", "C(HO) = 0", algebra.center().dim(), 0)

    witt = even_part_basis(params)
    g = g_basis(params)
    centralizer = ho_service.centralizer(algebra.basis.basis(-1), witt)
    report.check("dim G", "dim G = n 2^n", g.dim(), dim_g(params))
    report.check("G in centralizer", "G centralizes HO_-1", g.is_subspace_of(centralizer), True)
    report.check("centralizer in G", "C_W(HO_-1) lies in G", centralizer.is_subspace_of(g), True)
    report.check("dim centralizer", "dim C_W(HO_-1) = dim G", centralizer.dim(), g.dim())
    return report


SUITES: dict[VerifySuite, Callable[..., SuiteReport]] = {
    VerifySuite.BRACKET: suite_bracket,
    VerifySuite.TH_MORPHISM: suite_th_morphism,
    VerifySuite.GENERATORS: suite_generators,
    VerifySuite.MEMBERSHIP: suite_membership,
    VerifySuite.DER_NEG: suite_der_neg,
    VerifySuite.DER_ZERO: suite_der_zero,
    VerifySuite.DER_POS: suite_der_pos,
    VerifySuite.FULL_DER: suite_full_der,
    VerifySuite.OUTER: suite_outer,
    VerifySuite.CENTER: suite_center,
}

# th-morphism reads --degree as the top monomial degree, der-neg and der-pos as
# the one degree to classify
DEGREE_SUITES = frozenset({VerifySuite.TH_MORPHISM, VerifySuite.DER_NEG, VerifySuite.DER_POS})
DEGREE_LIST_SUITES = frozenset({VerifySuite.FULL_DER, VerifySuite.OUTER})


def run_suite(
    suite: VerifySuite,
    params: AlgebraParams,
    seed: int | None = None,
    degree: int | None = None,
    degrees: Sequence[int] | None = None,
) -> SuiteReport:
    if degree is not None and suite not in DEGREE_SUITES:
        raise OptionError(f"suite {suite.value} does not take --degree")
    if degrees is not None and suite not in DEGREE_LIST_SUITES:
        raise OptionError(f"suite {suite.value} does not take --degrees")
    seed = settings.DEFAULT_SEED if seed is None else seed
    logger.info("running suite %s for %s (seed %d)", suite.value, params.label(), seed)
    run = SUITES[suite]
    if suite in DEGREE_SUITES:
        return run(params, seed, degree)
    if suite in DEGREE_LIST_SUITES:
        return run(params, seed, degrees)
    return run(params, seed)
