"""dims: dimensions of O, W, HO and their graded pieces."""

import click

from app.commands.common import emit, guarded
from app.models.superalgebra import enumerate_basis
from app.schemas.report import DegreeRow, DimsReport
from app.schemas.run import RunConfig
from app.services import ho as ho_service
from app.services.verify import build_ho
from app.services.witt import even_part_basis, g_basis


def dims_report(config: RunConfig) -> DimsReport:
    params = config.params()
    witt = even_part_basis(params)
    algebra = build_ho(params)
    kernel = ho_service.membership_kernel_dims(params)
    o_dims = {d: len(enumerate_basis(params, d)) for d in range(params.xi + 1)}
    degrees = sorted(set(o_dims) | set(witt.degrees()))
    half = 2 ** (params.n - 1) * params.p**params.sum_t
    return DimsReport(
        params=params.label(),
        dim_o=sum(o_dims.values()),
        dim_w=witt.dim(),
        dim_ho=algebra.dim,
        dim_ho_odd=ho_service.odd_part_dimension(params),
        dim_g=g_basis(params).dim(),
        dim_ho_halved_form=half - 1,
        dim_ho_constants_form=half,
        dim_ho_total_form=2 * half - 1,
        degrees=[
            DegreeRow(
                degree=d,
                o=o_dims.get(d, 0),
                w=witt.dim(d),
                ho=algebra.basis.dim(d),
                membership_kernel=kernel.get(d, 0),
            )
            for d in degrees
        ],
    )


def render(report: DimsReport) -> list[str]:
    lines = [
        f"parameters       {report.params}",
        f"dim O            {report.dim_o}",
        f"dim W (even)     {report.dim_w}",
        f"dim HO (even)    {report.dim_ho}",
        f"  2^(n-1)p^|t|-1 {report.dim_ho_halved_form}"
        f"  {'matches' if report.matches_halved_form else 'DIFFERS'}",
        f"  2^(n-1)p^|t|   {report.dim_ho_constants_form}"
        f"  {'matches' if report.matches_constants_form else 'DIFFERS'}",
        f"dim HO (odd)     {report.dim_ho_odd}",
        f"even + odd       {report.dim_ho + report.dim_ho_odd}"
        f" (2^n p^|t| - 1 = {report.dim_ho_total_form})",
        f"dim G            {report.dim_g}",
        "",
        f"{'degree':>6} {'O':>6} {'W':>6} {'HO':>6} {'kernel':>6}",
    ]
    for row in report.degrees:
        lines.append(
            f"{row.degree:>6} {row.o:>6} {row.w:>6} {row.ho:>6} {row.membership_kernel:>6}"
        )
    return lines


@click.command("dims")
@click.pass_obj
@guarded
def dims(config: RunConfig) -> None:
    """Print the dimensions of O, W and HO with per-degree tables."""
    report = dims_report(config)
    emit(config, render(report), report)
