"""Elements of the generalized Witt superalgebra W(n,n;t).

A vector field is a sparse sum of terms f * d_r keyed by (monomial, r). The
parity of a term is parity(f) + mu(r); its Z-degree is zd(f) - 1.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping

from app.models.enums import Parity
from app.models.superalgebra import (
    AlgebraParams,
    Monomial,
    SuperPoly,
    monomial_partial,
    monomial_product,
)

TermKey = tuple[Monomial, int]


def term_sort_key(key: TermKey) -> tuple:
    mono, r = key
    return (mono.sort_key(), r)


def term_parity(params: AlgebraParams, key: TermKey) -> int:
    mono, r = key
    return (len(mono.u) + (r > params.n)) & 1


def format_term(key: TermKey) -> str:
    mono, r = key
    if not any(mono.alpha) and not mono.u:
        return f"d_{r}"
    return f"{mono}*d_{r}"


class VectorField:
    """Sparse combination sum f_r d_r with coefficients in O(n,n;t)."""

    __slots__ = ("params", "terms")

    def __init__(self, params: AlgebraParams, terms: Mapping[TermKey, int] | None = None) -> None:
        self.params = params
        p = params.p
        self.terms: dict[TermKey, int] = {}
        for key, coeff in (terms or {}).items():
            params.check_index(key[1])
            value = coeff % p
            if value:
                self.terms[key] = value

    @classmethod
    def _trusted(cls, params: AlgebraParams, terms: dict[TermKey, int]) -> VectorField:
        field = cls.__new__(cls)
        field.params = params
        field.terms = terms
        return field

    @classmethod
    def zero(cls, params: AlgebraParams) -> VectorField:
        return cls._trusted(params, {})

    @classmethod
    def d(cls, params: AlgebraParams, r: int) -> VectorField:
        """The superderivation d_r itself."""
        params.check_index(r)
        return cls._trusted(params, {(Monomial((0,) * params.n, ()), r): 1})

    @classmethod
    def from_poly(cls, f: SuperPoly, r: int) -> VectorField:
        """The field f * d_r."""
        f.params.check_index(r)
        return cls._trusted(f.params, {(mono, r): c for mono, c in f.terms.items()})

    @classmethod
    def from_coefficients(
        cls, params: AlgebraParams, coefficients: Mapping[int, SuperPoly]
    ) -> VectorField:
        """sum a_r d_r from a map r -> a_r."""
        terms: dict[TermKey, int] = {}
        for r, poly in coefficients.items():
            params.check_index(r)
            for mono, c in poly.terms.items():
                terms[(mono, r)] = c
        return cls._trusted(params, terms)

    def coefficient(self, r: int) -> SuperPoly:
        """The coefficient a_r of d_r."""
        return SuperPoly._trusted(
            self.params, {mono: c for (mono, s), c in self.terms.items() if s == r}
        )

    def __iter__(self) -> Iterator[tuple[TermKey, int]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: VectorField) -> VectorField:
        p = self.params.p
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            value = (terms.get(key, 0) + coeff) % p
            if value:
                terms[key] = value
            else:
                terms.pop(key, None)
        return VectorField._trusted(self.params, terms)

    def __neg__(self) -> VectorField:
        p = self.params.p
        return VectorField._trusted(self.params, {k: p - c for k, c in self.terms.items()})

    def __sub__(self, other: VectorField) -> VectorField:
        return self + (-other)

    def scale(self, c: int) -> VectorField:
        return VectorField(self.params, {k: coeff * c for k, coeff in self.terms.items()})

    def parity(self) -> Parity | None:
        """Common parity of all terms; None for zero or mixed parity."""
        parities = {term_parity(self.params, key) for key in self.terms}
        return Parity(parities.pop()) if len(parities) == 1 else None

    def degree(self) -> int | None:
        """Common Z-degree of all terms; None for zero or mixed degree."""
        degrees = {mono.zdegree - 1 for mono, _ in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def leading_term(self) -> tuple[TermKey, int]:
        key = min(self.terms, key=term_sort_key)
        return key, self.terms[key]

    def map_coefficients(self, fn: Callable[[SuperPoly], SuperPoly]) -> VectorField:
        """Apply a linear map on O(n,n;t) to every coefficient a_r."""
        terms: dict[TermKey, int] = {}
        for r in sorted({r for _, r in self.terms}):
            for mono, c in fn(self.coefficient(r)).terms.items():
                terms[(mono, r)] = c
        return VectorField._trusted(self.params, terms)

    def apply(self, g: SuperPoly) -> SuperPoly:
        return apply(self, g)

    def bracket(self, other: VectorField) -> VectorField:
        return bracket(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=term_sort_key):
            coeff = self.terms[key]
            text = format_term(key)
            parts.append(text if coeff == 1 else f"{coeff}*{text}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"VectorField({self})"


def apply(field: VectorField, g: SuperPoly) -> SuperPoly:
    """Left action sum f_r * d_r(g) of a vector field on O(n,n;t)."""
    params = field.params
    p = params.p
    terms: dict[Monomial, int] = {}
    for (f, r), cf in field.terms.items():
        for mono, cg in g.terms.items():
            derived = monomial_partial(params, r, mono)
            if derived is None:
                continue
            c1, dg = derived
            prod = monomial_product(params, f, dg)
            if prod is None:
                continue
            c2, h = prod
            value = (terms.get(h, 0) + cf * cg * c1 * c2) % p
            if value:
                terms[h] = value
            else:
                terms.pop(h, None)
    return SuperPoly._trusted(params, terms)


def bracket(a: VectorField, b: VectorField) -> VectorField:
    """Super-bracket, termwise from
    [f D, g E] = f D(g) E - (-1)^(p(fD) p(gE)) g E(f) D, using [d_r, d_s] = 0.
    """
    params = a.params
    n = params.n
    p = params.p
    terms: dict[TermKey, int] = {}

    def accumulate(key: TermKey, value: int) -> None:
        total = (terms.get(key, 0) + value) % p
        if total:
            terms[key] = total
        else:
            terms.pop(key, None)

    for (f, r), cf in a.terms.items():
        parity_a = (len(f.u) + (r > n)) & 1
        for (g, s), cg in b.terms.items():
            parity_b = (len(g.u) + (s > n)) & 1
            coeff = cf * cg
            derived = monomial_partial(params, r, g)
            if derived is not None:
                prod = monomial_product(params, f, derived[1])
                if prod is not None:
                    accumulate((prod[1], s), coeff * derived[0] * prod[0])
            derived = monomial_partial(params, s, f)
            if derived is not None:
                prod = monomial_product(params, g, derived[1])
                if prod is not None:
                    sign = 1 if parity_a & parity_b else -1
                    accumulate((prod[1], r), sign * coeff * derived[0] * prod[0])
    return VectorField._trusted(params, terms)
