"""Writing and reading export documents."""

from __future__ import annotations

import logging
from pathlib import Path

from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import ExportError
from app.models.enums import ExportKind
from app.models.superalgebra import AlgebraParams
from app.schemas.export import (
    BasisRecord,
    BracketRecord,
    ExportDocument,
    HeaderRecord,
    MapRecord,
    record_adapter,
)
from app.services.actions import TableAction
from app.services.derivations import DerivationBasis
from app.services.graded import GradedSubspace
from app.services.ho import HOAlgebra

logger = logging.getLogger(__name__)


def _header(params: AlgebraParams, what: ExportKind, degree: int | None = None) -> HeaderRecord:
    return HeaderRecord(
        format=settings.EXPORT_FORMAT,
        what=what,
        n=params.n,
        p=params.p,
        t=list(params.t),
        degree=degree,
    )


def basis_records(space: GradedSubspace, degree: int | None = None) -> list[BasisRecord]:
    indices = space.index.indices(degree) if degree is not None else range(space.dim())
    return [
        BasisRecord(
            index=i,
            degree=space.index.degree_of(i),
            label=space.label(i),
            vector=str(space.vector(i)),
        )
        for i in indices
    ]


def structure_constant_lines(ho: HOAlgebra) -> list[str]:
    records: list = [_header(ho.params, ExportKind.STRUCTURE_CONSTANTS)]
    records.extend(basis_records(ho.basis))
    constants = ho.structure_constants()
    for (i, j), image in sorted(constants.items()):
        for k, c in sorted(image.items()):
            records.append(BracketRecord(i=i, j=j, k=k, c=c))
    return _lines(records)


def basis_lines(ho: HOAlgebra, degree: int | None = None) -> list[str]:
    records: list = [_header(ho.params, ExportKind.BASIS, degree)]
    records.extend(basis_records(ho.basis, degree))
    return _lines(records)


def der_basis_lines(params: AlgebraParams, space: DerivationBasis) -> list[str]:
    records: list = [_header(params, ExportKind.DER_BASIS, space.degree)]
    for index, (candidate, inner) in enumerate(zip(space.maps, space.inner, strict=True)):
        entries = [
            (a, k, c)
            for a, image in sorted(candidate.images.items())
            for k, c in sorted(image.items())
        ]
        records.append(MapRecord(index=index, degree=space.degree, inner=inner, entries=entries))
    return _lines(records)


def _lines(records: list) -> list[str]:
    return [settings.EXPORT_FORMAT] + [record.model_dump_json() for record in records]


def write_lines(path: Path, lines: list[str]) -> None:
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc.strerror}") from exc
    logger.info("wrote %d records to %s", len(lines) - 1, path)


def parse_lines(lines: list[str]) -> ExportDocument:
    if not lines or lines[0].strip() != settings.EXPORT_FORMAT:
        raise ExportError(f"missing header line {settings.EXPORT_FORMAT!r}")
    try:
        records = [record_adapter.validate_json(line) for line in lines[1:] if line.strip()]
    except ValidationError as exc:
        raise ExportError(f"malformed export record: {exc.errors()[0]['msg']}") from exc
    if not records or not isinstance(records[0], HeaderRecord):
        raise ExportError("the first record must be a header")
    document = ExportDocument(header=records[0])
    for record in records[1:]:
        if isinstance(record, BasisRecord):
            document.basis.append(record)
        elif isinstance(record, BracketRecord):
            document.brackets.append(record)
        elif isinstance(record, MapRecord):
            document.maps.append(record)
        else:
            raise ExportError("a document has exactly one header")
    return document


def read_export(path: Path) -> ExportDocument:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_lines(text.splitlines())


def table_action(document: ExportDocument) -> TableAction:
    """Re-import exported structure constants as an algebra in coordinates."""
    if document.header.what != ExportKind.STRUCTURE_CONSTANTS:
        raise ExportError("only structure-constant exports can be re-imported")
    degrees = [record.degree for record in sorted(document.basis, key=lambda r: r.index)]
    return TableAction.from_triples(
        degrees, ((b.i, b.j, b.k, b.c) for b in document.brackets), document.header.p
    )
