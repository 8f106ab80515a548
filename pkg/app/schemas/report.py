"""Report schemas emitted by the dims, verify and derive commands."""

from pydantic import BaseModel, Field, computed_field

from app.models.enums import DegreeClass, VerifySuite


class Assertion(BaseModel):
    """One checked claim with its computed and expected values."""

    name: str
    claim: str
    computed: str
    expected: str
    passed: bool
    # informational rows surface a comparison without deciding the exit code
    informational: bool = False


class SuiteReport(BaseModel):
    """Schema for a verification suite run."""

    suite: VerifySuite
    params: str
    seed: int
    assertions: list[Assertion] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions if not a.informational)

    def check(
        self,
        name: str,
        claim: str,
        computed: object,
        expected: object,
        passed: bool | None = None,
        informational: bool = False,
    ) -> bool:
        """Record an assertion; equality of computed and expected unless passed is given."""
        ok = computed == expected if passed is None else passed
        self.assertions.append(
            Assertion(
                name=name,
                claim=claim,
                computed=str(computed),
                expected=str(expected),
                passed=bool(ok),
                informational=informational,
            )
        )
        return bool(ok)


class DegreeRow(BaseModel):
    """Per-degree dimensions of the graded pieces."""

    degree: int
    o: int = 0
    w: int = 0
    ho: int = 0
    membership_kernel: int = 0


class DimsReport(BaseModel):
    """Schema for the dims command."""

    params: str
    dim_o: int
    dim_w: int
    dim_ho: int
    dim_ho_odd: int
    dim_g: int
    # closed forms reported beside the computed values
    dim_ho_halved_form: int
    dim_ho_constants_form: int
    dim_ho_total_form: int
    degrees: list[DegreeRow]

    @computed_field
    @property
    def matches_halved_form(self) -> bool:
        return self.dim_ho == self.dim_ho_halved_form

    @computed_field
    @property
    def matches_constants_form(self) -> bool:
        return self.dim_ho == self.dim_ho_constants_form


class DerivationRow(BaseModel):
    """Classification of one homogeneous derivation space."""

    degree: int
    dim: int
    inner_dim: int
    expected_class: DegreeClass
    expected_dim: int
    passed: bool


class DerivationReport(BaseModel):
    """Schema for derive and the full-der suite."""

    params: str
    target: str
    mode: str
    degrees: list[int]
    # false when only some degrees were solved; the rest count as inner
    complete: bool = True
    rows: list[DerivationRow]
    dim_g: int
    dim_center: int
    total: int
    outer: int
    expected_outer: int
    halved_form_total: int
    computed_form_total: int

    @computed_field
    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


class OuterReport(BaseModel):
    """Outer derivation algebra: dimension and the commuting representatives."""

    params: str
    dim: int
    expected_dim: int
    degrees: list[int]
    complete: bool = True
    # dim Der - dim ad g, only when every degree was solved
    totals_dim: int | None = None
    representatives: list[str]
    representatives_outer_rank: int
    p_power_count: int
    expected_p_power_count: int
    nonzero_commutators: list[str]

    @computed_field
    @property
    def abelian(self) -> bool:
        return not self.nonzero_commutators
