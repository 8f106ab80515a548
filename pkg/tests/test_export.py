"""Tests for the line-oriented export format."""

import json
from pathlib import Path

import pytest

from app.core.errors import ExportError
from app.models.enums import ExportKind
from app.models.superalgebra import AlgebraParams
from app.services import export as export_service
from app.services.derivations import der_space
from app.services.ho import HOAlgebra
from app.services.verify import build_ho
from app.services.witt import g_basis


@pytest.fixture(scope="module")
def params() -> AlgebraParams:
    return AlgebraParams.create(3, 5, (1, 1, 1))


@pytest.fixture(scope="module")
def small(params: AlgebraParams) -> HOAlgebra:
    """The subalgebra G wrapped like HO, small enough for full structure constants."""
    return HOAlgebra(params, g_basis(params))


class TestExport:
    """Tests for writing and re-reading exports."""

    def test_basis_lines(self, params: AlgebraParams) -> None:
        """Test the degree -1 basis export of HO."""
        lines = export_service.basis_lines(build_ho(params), -1)
        assert lines[0] == "cartan-ho-lab/1"
        header = json.loads(lines[1])
        assert header["kind"] == "header"
        assert (header["n"], header["p"], header["t"], header["degree"]) == (3, 5, [1, 1, 1], -1)
        assert [json.loads(line)["label"] for line in lines[2:]] == ["d_1", "d_2", "d_3"]

    def test_structure_constants_round_trip(self, small: HOAlgebra) -> None:
        """Test re-imported constants reproduce every bracket."""
        lines = export_service.structure_constant_lines(small)
        document = export_service.parse_lines(lines)
        assert document.header.what == ExportKind.STRUCTURE_CONSTANTS
        assert len(document.basis) == 24
        action = export_service.table_action(document)
        for a in range(small.dim):
            for b in range(small.dim):
                assert action.bracket(a, b) == small.action.bracket(a, b)

    def test_deterministic(self, small: HOAlgebra) -> None:
        """Test two exports of the same algebra are identical."""
        first = export_service.structure_constant_lines(small)
        assert export_service.structure_constant_lines(small) == first

    def test_write_and_read(self, small: HOAlgebra, tmp_path: Path) -> None:
        """Test a written file reads back to the same document."""
        lines = export_service.structure_constant_lines(small)
        path = tmp_path / "g.jsonl"
        export_service.write_lines(path, lines)
        assert export_service.read_export(path) == export_service.parse_lines(lines)

    def test_der_basis(self, params: AlgebraParams, small: HOAlgebra) -> None:
        """Test derivation maps export with their inner flags."""
        space = der_space(small.action, -1)
        document = export_service.parse_lines(export_service.der_basis_lines(params, space))
        assert document.header.degree == -1
        assert len(document.maps) == space.dim
        assert [m.inner for m in document.maps] == space.inner
        with pytest.raises(ExportError, match="only structure-constant"):
            export_service.table_action(document)

    @pytest.mark.slow
    def test_ho_structure_constants_round_trip(
        self, params: AlgebraParams, tmp_path: Path
    ) -> None:
        """Test the full HO export survives a file round trip bracket for bracket."""
        algebra = build_ho(params)
        path = tmp_path / "ho.jsonl"
        export_service.write_lines(path, export_service.structure_constant_lines(algebra))
        document = export_service.read_export(path)
        assert len(document.basis) == algebra.dim == 500
        assert [record.label for record in document.basis[:3]] == ["d_1", "d_2", "d_3"]
        action = export_service.table_action(document)
        assert action.g_index.dims == algebra.action.g_index.dims
        mismatches = [
            (a, b)
            for a in range(algebra.dim)
            for b in range(a + 1, algebra.dim)
            if action.bracket(a, b) != algebra.action.bracket(a, b)
        ]
        assert mismatches == []

    def test_rejects_bad_input(self, tmp_path: Path) -> None:
        """Test missing headers, bad records and unreadable files."""
        with pytest.raises(ExportError, match="missing header"):
            export_service.parse_lines(['{"kind": "header"}'])
        with pytest.raises(ExportError, match="malformed"):
            export_service.parse_lines(["cartan-ho-lab/1", '{"kind": "bracket", "i": 0}'])
        with pytest.raises(ExportError, match="first record"):
            export_service.parse_lines(
                ["cartan-ho-lab/1", '{"kind": "bracket", "i": 0, "j": 1, "k": 0, "c": 1}']
            )
        with pytest.raises(ExportError, match="cannot read"):
            export_service.read_export(tmp_path / "missing.jsonl")
