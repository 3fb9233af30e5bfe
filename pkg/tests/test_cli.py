"""Workspace parsing, serialization round-trip, and the command driver."""

import json
import os

import pytest

from prochain.cli import main
from prochain.errors import ParseError, ValidationError
from prochain.workspace import parse_workspace, serialize_workspace

GOLDEN = os.path.join(os.path.dirname(__file__), "..", "workspaces", "moore.json")


def write(tmp_path, doc, name="ws.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


MINIMAL = {
    "ring": "Z",
    "complexes": {"Z0": {"ranks": {"0": 1}, "diffs": {}}},
}


class TestParsing:
    def test_minimal(self, tmp_path):
        ws = parse_workspace(write(tmp_path, MINIMAL))
        assert "Z0" in ws.complexes
        assert ws.complexes["Z0"].rank(0) == 1

    def test_golden_moore_file(self):
        ws = parse_workspace(GOLDEN)
        M2 = ws.complexes["M2"]
        assert M2.diff(1).entries == (2,)
        assert "times2" in ws.maps
        assert ws.maps["times2"].comp(0).entries == (2,)

    def test_invalid_differential_names_degree(self, tmp_path):
        doc = {"ring": "Z", "complexes": {"bad": {
            "ranks": {"0": 1, "1": 1, "2": 1},
            "diffs": {"1": [["2"]], "2": [["1"]]}}}}
        with pytest.raises(ValidationError) as err:
            parse_workspace(write(tmp_path, doc))
        assert "bad" in str(err.value) and "degree 2" in str(err.value)

    def test_noncommuting_map_names_degree(self, tmp_path):
        doc = {
            "ring": "Z",
            "complexes": {"M2": {"ranks": {"0": 1, "1": 1},
                                 "diffs": {"1": [["2"]]}}},
            "maps": {"bad": {"source": "M2", "target": "M2",
                             "comps": {"0": [["1"]], "1": [["2"]]}}},
        }
        with pytest.raises(ValidationError) as err:
            parse_workspace(write(tmp_path, doc))
        assert "bad" in str(err.value)

    def test_unknown_reference(self, tmp_path):
        doc = {"ring": "Z",
               "maps": {"f": {"source": "nope", "target": "nope", "comps": {}}}}
        with pytest.raises(ParseError):
            parse_workspace(write(tmp_path, doc))

    def test_duplicate_names(self, tmp_path):
        doc = {"ring": "Z",
               "complexes": {"x": {"ranks": {"0": 1}, "diffs": {}}},
               "groups": {"x": {"generators": 1, "relations": []}}}
        with pytest.raises(ValidationError):
            parse_workspace(write(tmp_path, doc))

    def test_bad_ring(self, tmp_path):
        with pytest.raises(ParseError):
            parse_workspace(write(tmp_path, {"ring": {"p": 6}}))

    def test_missing_file(self):
        with pytest.raises(ParseError):
            parse_workspace("/nonexistent/ws.json")


class TestRoundTrip:
    def test_canonical_byte_identity(self):
        with open(GOLDEN) as f:
            text = f.read()
        ws = parse_workspace(GOLDEN)
        assert serialize_workspace(ws) == text

    def test_idempotent_on_noncanonical(self, tmp_path):
        p = write(tmp_path, MINIMAL)
        once = serialize_workspace(parse_workspace(p))
        q = tmp_path / "canon.json"
        q.write_text(once)
        assert serialize_workspace(parse_workspace(str(q))) == once


class TestDriver:
    def run(self, tmp_path, *args):
        out = tmp_path / "out"
        code = main([*args, "--workspace", GOLDEN, "--out", str(out)])
        return code, out

    def test_homology(self, tmp_path):
        code, out = self.run(tmp_path, "homology", "M2")
        assert code == 0
        body = (out / "homology_M2.tsv").read_text()
        assert "0\tZ/2" in body

    def test_derived_hom(self, tmp_path):
        code, out = self.run(tmp_path, "derived-hom", "M2", "M2", "0")
        assert code == 0
        assert "Z/2" in (out / "derived_hom_M2_M2_0.tsv").read_text()

    def test_ahss_outputs(self, tmp_path):
        code, out = self.run(tmp_path, "ahss", "M2", "M2")
        assert code == 0
        e2 = (out / "ahss_M2_M2_e2.tsv").read_text()
        assert "0\t0\t2\t0" in e2 and "-1\t0\t2\t0" in e2
        report = (out / "ahss_M2_M2_report.tsv").read_text()
        assert "graded_comparison_all_iso\ttrue" in report

    def test_unknown_exit_code(self, tmp_path):
        # lim1 obstruction makes the value UNKNOWN: exit code 2
        code, out = self.run(tmp_path, "prohom-const", "Z0", "tower2_Z0", "0")
        assert code == 2
        body = (out / "prohom_const_Z0_tower2_Z0_0.tsv").read_text()
        assert "UNKNOWN" in body and "NonzeroUncountable" in body

    def test_error_exit_code(self, tmp_path):
        code = main(["homology", "missing_object", "--workspace", GOLDEN,
                     "--out", str(tmp_path / "o")])
        assert code == 1

    def test_pro_iso(self, tmp_path):
        code, out = self.run(tmp_path, "pro-iso", "id_tower2")
        assert code == 0
        assert "verdict\ttrue" in (out / "pro_iso_id_tower2.tsv").read_text()

    def test_limlim1(self, tmp_path):
        code, out = self.run(tmp_path, "limlim1", "tower2_Z")
        assert code == 0
        body = (out / "limlim1_tower2_Z.tsv").read_text()
        assert "lim\t0" in body and "NonzeroUncountable" in body

    def test_determinism(self, tmp_path):
        _, out1 = self.run(tmp_path, "ahss", "M2", "M2")
        first = (out1 / "ahss_M2_M2_e2.tsv").read_bytes()
        code = main(["ahss", "M2", "M2", "--workspace", GOLDEN,
                     "--out", str(tmp_path / "out2")])
        second = (tmp_path / "out2" / "ahss_M2_M2_e2.tsv").read_bytes()
        assert first == second

    def test_whitehead_and_postnikov(self, tmp_path):
        code, out = self.run(tmp_path, "postnikov", "const_M2")
        assert code == 0
        assert "weak_equivalence" in (out / "postnikov_const_M2.tsv").read_text()
        code, out = self.run(tmp_path, "fibrant-check", "const_M2")
        assert code == 0

    def test_selftest(self, tmp_path):
        code = main(["selftest", "--out", str(tmp_path / "st"), "--seed", "1"])
        assert code == 0
        body = (tmp_path / "st" / "selftest.tsv").read_text()
        assert "FAIL" not in body

    def test_pro_ahss(self, tmp_path):
        code, out = self.run(tmp_path, "pro-ahss", "tower2_Z0", "M2")
        assert code == 0
        assert "comparison_holds\ttrue" in \
            (out / "pro_ahss_tower2_Z0_M2_report.tsv").read_text()
