"""derive: homogeneous derivation spaces of the even part of HO."""

import click

from app.commands.common import emit, guarded, parse_degrees, verdict
from app.core.errors import EXIT_ASSERTION_FAILED
from app.models.enums import DerivationTarget, LeibnizMode
from app.schemas.report import DerivationReport
from app.schemas.run import RunConfig
from app.services.actions import FieldAction
from app.services.derivations import full_der
from app.services.verify import build_ho
from app.services.witt import even_part_basis


def render(report: DerivationReport) -> list[str]:
    lines = [
        f"derivations of HO into {report.target}  {report.params}  mode {report.mode}",
        f"{'degree':>6} {'dim':>5} {'inner':>5} {'expected':>8}  class",
    ]
    for row in report.rows:
        lines.append(
            f"{row.degree:>6} {row.dim:>5} {row.inner_dim:>5} {row.expected_dim:>8}"
            f"  {row.expected_class.value} {verdict(row.passed)}"
        )
    if not report.complete:
        lines.append("other degrees not solved, taken to be inner")
    lines += [
        f"total            {report.total}",
        f"outer            {report.outer} (expected {report.expected_outer})",
        f"dim HO, center   {report.dim_g}, {report.dim_center}",
        f"2^(n-1)p^|t| + |t| - n        {report.halved_form_total}",
        f"dim ad HO + 1 + |t| - n       {report.computed_form_total}",
        verdict(report.passed),
    ]
    return lines


@click.command("derive")
@click.option("--degree", type=int, default=None, help="Only this degree (default: all).")
@click.option(
    "--degrees",
    default=None,
    help="'critical' or a comma list such as -25,-5,-2,-1,0,1 (default: all).",
)
@click.option(
    "--target",
    type=click.Choice([t.value for t in DerivationTarget]),
    default=DerivationTarget.HO.value,
    help="Module the derivations take values in.",
)
@click.option(
    "--mode",
    type=click.Choice([m.value for m in LeibnizMode]),
    default=None,
    help="graded propagation, all pairs, or pairs from a generating set.",
)
@click.pass_obj
@guarded
def derive(
    config: RunConfig, degree: int | None, degrees: str | None, target: str, mode: str | None
) -> None:
    """Compute Der_m and classify each degree."""
    if degree is not None and degrees is not None:
        raise click.UsageError("use either --degree or --degrees")
    params = config.params()
    selected = [degree] if degree is not None else parse_degrees(degrees, params)
    algebra = build_ho(params)
    action = algebra.action
    if target == DerivationTarget.WITT:
        action = FieldAction(algebra.basis, even_part_basis(params))
    report, _ = full_der(
        algebra,
        degrees=selected,
        mode=LeibnizMode(mode) if mode else None,
        action=action,
        target=target,
    )
    emit(config, render(report), report)
    if not report.passed:
        raise SystemExit(EXIT_ASSERTION_FAILED)
