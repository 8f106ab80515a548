"""verify: run one verification suite."""

import click

from app.commands.common import emit, guarded, parse_degrees, verdict
from app.core.errors import EXIT_ASSERTION_FAILED
from app.models.enums import VerifySuite
from app.schemas.report import SuiteReport
from app.schemas.run import RunConfig
from app.services.verify import run_suite


def render(report: SuiteReport) -> list[str]:
    lines = [f"suite {report.suite.value}  {report.params}  seed {report.seed}"]
    for a in report.assertions:
        status = "INFO" if a.informational else verdict(a.passed)
        lines.append(f"[{status}] {a.name}: {a.claim}")
        lines.append(f"       computed {a.computed}  expected {a.expected}")
    lines.append(verdict(report.passed))
    return lines


@click.command("verify")
@click.argument("suite", type=click.Choice([s.value for s in VerifySuite]))
@click.option(
    "--degree",
    type=int,
    default=None,
    help="th-morphism: top odd-monomial degree. der-neg, der-pos: the one degree to classify.",
)
@click.option(
    "--degrees",
    default=None,
    help="full-der, outer: 'critical' or a comma list such as -25,-5,-2,-1,0,1. "
    "Degrees left out are taken to be inner.",
)
@click.pass_obj
@guarded
def verify(config: RunConfig, suite: str, degree: int | None, degrees: str | None) -> None:
    """Run SUITE and exit 0 only if every assertion passes."""
    params = config.params()
    report = run_suite(
        VerifySuite(suite), params, config.seed, degree, parse_degrees(degrees, params)
    )
    emit(config, render(report), report)
    if not report.passed:
        raise SystemExit(EXIT_ASSERTION_FAILED)
