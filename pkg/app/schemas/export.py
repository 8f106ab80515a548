"""Line records of the export format.

A document is the header line ``cartan-ho-lab/1`` followed by one JSON record
per line, the first of which is a ``HeaderRecord``.
"""

from typing import Annotated, Literal

from pydantic import BaseModel, Field, TypeAdapter

from app.models.enums import ExportKind


class HeaderRecord(BaseModel):
    """Parameters of the exported algebra."""

    kind: Literal["header"] = "header"
    format: str
    what: ExportKind
    n: int
    p: int
    t: list[int]
    degree: int | None = None


class BasisRecord(BaseModel):
    """One basis vector in canonical text form."""

    kind: Literal["basis"] = "basis"
    index: int
    degree: int
    label: str
    vector: str


class BracketRecord(BaseModel):
    """[b_i, b_j] contains c * b_k, with i < j."""

    kind: Literal["bracket"] = "bracket"
    i: int
    j: int
    k: int
    c: int


class MapRecord(BaseModel):
    """A derivation as (source index, target index, coefficient) entries."""

    kind: Literal["der-map"] = "der-map"
    index: int
    degree: int
    inner: bool
    entries: list[tuple[int, int, int]]


ExportRecord = Annotated[
    HeaderRecord | BasisRecord | BracketRecord | MapRecord, Field(discriminator="kind")
]

record_adapter: TypeAdapter[ExportRecord] = TypeAdapter(ExportRecord)


class ExportDocument(BaseModel):
    """A parsed export."""

    header: HeaderRecord
    basis: list[BasisRecord] = Field(default_factory=list)
    brackets: list[BracketRecord] = Field(default_factory=list)
    maps: list[MapRecord] = Field(default_factory=list)
