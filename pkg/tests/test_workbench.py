import subprocess
import sys

import pytest

from qdom.errors import ParseError
from qdom.quantale import ch_plus, q2
from qdom.workbench.cli import main
from qdom.workbench.gallery import (
    formal_ball_bases,
    lattices,
    parallel_map,
    posets,
    run_undetermined,
    star_identity,
)
from qdom.workbench.instance_io import emit_instance, load_instance, parse_instance, validate_instance
from qdom.workbench.report import emit_report, exit_status

from conftest import FIXTURES

FIXTURE_FILES = sorted(p.name for p in FIXTURES.glob("*.qdom"))


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(text):
    return dict(line.split("=", 1) for line in text.splitlines())


class TestInstanceFiles:
    @pytest.mark.parametrize("name", FIXTURE_FILES)
    def test_round_trip(self, name):
        path = FIXTURES / name
        q = q2() if name == "phi_meets.qdom" else None
        doc = load_instance(path, q)
        assert validate_instance(doc) == []
        text = path.read_text()
        if name != "phi_meets.qdom":
            assert emit_instance(doc) == text
            assert emit_instance(parse_instance(emit_instance(doc))) == text

    def test_unknown_element(self):
        text = "[quantale]\nbuiltin = q2\n\n[category c]\nobjects = a\nstructure =\n  2\n"
        with pytest.raises(ParseError) as err:
            parse_instance(text)
        assert err.value.line == 7 and err.value.column == 3
        assert "2" in str(err.value)

    def test_ragged_rows(self):
        text = "[quantale]\nbuiltin = q2\n\n[category c]\nobjects = a b\nstructure =\n  top top\n  top\n"
        with pytest.raises(ParseError) as err:
            parse_instance(text)
        assert err.value.line == 8

    def test_unknown_section(self):
        with pytest.raises(ParseError) as err:
            parse_instance("[quantale]\nbuiltin = q2\n\n[widget]\n")
        # the column points at the section name after the bracket
        assert err.value.line == 4 and err.value.column == 2

    def test_missing_quantale(self):
        with pytest.raises(ParseError):
            parse_instance("[category c]\nobjects = a\nstructure =\n  top\n")

    def test_builtin_with_size(self):
        doc = parse_instance("[quantale]\nbuiltin = ch_plus 2\n")
        assert doc.quantale == ch_plus(2)

    def test_invalid_category_reported(self):
        doc = parse_instance("[quantale]\nbuiltin = q2\n\n[category c]\nobjects = a b\nstructure =\n  bot top\n  bot top\n")
        assert validate_instance(doc)


class TestReport:
    def test_records_sorted(self):
        out = emit_report([("b", "PASS"), ("a", "1")], "records")
        assert out == "a=1\nb=PASS\n"

    def test_human(self):
        out = emit_report([("key", "FAIL"), ("longer.key", "true")], "human")
        assert "1 checks, 1 failed" in out
        assert out.splitlines()[0] == "key         FAIL"

    def test_exit_status_ignores_information(self):
        assert exit_status([("x", "false"), ("y", "PASS")]) == 0
        assert exit_status([("x", "FAIL")]) == 1

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_report([], "xml")


class TestCli:
    def test_check_quantale_builtin(self, capsys):
        code, out, _ = run_cli(capsys, "check-quantale", "q2", "--format", "records")
        assert code == 0
        rec = records(out)
        assert rec["quantale.valid"] == "PASS" and rec["quantale.totally_below"] == "bot<<top top<<top"

    def test_check_category(self, capsys):
        code, out, _ = run_cli(capsys, "check-category", str(FIXTURES / "chain_q2.qdom"), "--format", "records")
        assert code == 0 and records(out)["instance.valid"] == "PASS"

    def test_jx_way_below_fx(self, capsys):
        path = str(FIXTURES / "chain_q2.qdom")
        code, out, _ = run_cli(capsys, "jx", path, "--format", "records")
        assert code == 0 and records(out)["jx.chain.suprema"] == "a b"
        code, out, _ = run_cli(capsys, "way-below", path, "--format", "records")
        assert code == 0
        code, out, _ = run_cli(capsys, "fx", path, "--format", "records")
        rec = records(out)
        assert code == 0 and rec["fx.chain.size"] == "2" and rec["fx.chain.domain"] == "true"

    def test_family_override(self, capsys):
        path = str(FIXTURES / "chain_q2.qdom")
        code, out, _ = run_cli(capsys, "jx", path, "--format", "records", "--ideal-family", "all")
        assert code == 0 and records(out)["jx.chain.size"] == "3"

    def test_phi_family_from_file(self, capsys):
        path = str(FIXTURES / "chain_q2.qdom")
        phi = "phi:" + str(FIXTURES / "phi_meets.qdom")
        code, out, _ = run_cli(capsys, "jx", path, "--format", "records", "--ideal-family", phi)
        assert code == 0 and records(out)["jx.chain.size"] == "2"

    def test_duality_fixtures(self, capsys):
        files = [str(FIXTURES / n) for n in ("chain_q2.qdom", "ntrunc3.qdom")]
        code, out, _ = run_cli(capsys, "duality", *files, "--format", "records")
        assert code == 0
        rec = records(out)
        # with several files every instance is prefixed by its file stem
        assert rec["duality.chain_q2.chain.eta.iso"] == "PASS"
        assert rec["duality.ntrunc3.ntrunc.eta.iso"] == "PASS"
        # maps are only enumerated between categories over the same quantale
        assert "duality.morphisms.chain_q2.chain.ntrunc3.ntrunc.maps" not in rec

    def test_formal_balls_fixture(self, capsys):
        code, out, _ = run_cli(capsys, "duality", str(FIXTURES / "ch_plus2_self.qdom"), "--format", "records")
        assert code == 0 and records(out)["duality.line.eta.iso"] == "PASS"

    def test_broken_instance_not_attempted(self, capsys):
        code, out, _ = run_cli(capsys, "duality", str(FIXTURES / "antichain_all.qdom"), "--format", "records")
        rec = records(out)
        assert code == 0 and rec["duality.antichain.attempted"] == "false"

    def test_parse_error_exit(self, capsys, tmp_path):
        bad = tmp_path / "bad.qdom"
        bad.write_text("[quantale]\nbuiltin = q2\n\n[category c]\nobjects = a\nstructure =\n  2\n")
        code, _, err = run_cli(capsys, "check-category", str(bad))
        assert code == 2 and "line 7" in err

    def test_missing_file_exit(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, "jx", str(tmp_path / "nope.qdom"))
        assert code == 2

    def test_resource_limit_exit(self, capsys):
        code, _, err = run_cli(capsys, "gallery", "lawson", "--max-size", "5", "--cap-objects", "4")
        assert code == 2 and "resource" in err

    def test_failure_exit(self, capsys):
        code, out, _ = run_cli(capsys, "gallery", "ultrametric", "--format", "records")
        assert code == 1 and records(out)["ultrametric.identity.closed_form"] == "FAIL"

    def test_caps_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("QDOM_CAPS", "objects=3")
        code, _, _ = run_cli(capsys, "gallery", "lawson", "--max-size", "4")
        assert code == 2
        code, _, _ = run_cli(capsys, "gallery", "lawson", "--max-size", "4", "--cap-objects", "4", "--no-morphisms")
        assert code == 0

    def test_module_entry_point(self):
        res = subprocess.run(
            [sys.executable, "-m", "qdom", "check-quantale", "ch_max:1", "--format", "records"],
            capture_output=True, text=True, check=False,
        )
        assert res.returncode == 0 and "quantale.valid=PASS" in res.stdout


class TestGallery:
    def test_poset_counts(self):
        assert [len(posets(n)) for n in range(5)] == [1, 1, 2, 5, 16]

    def test_lattice_counts(self):
        assert [len(lattices(n)) for n in range(1, 6)] == [1, 1, 1, 2, 5]

    def test_formal_ball_bases(self):
        names = [n for n, _ in formal_ball_bases(2)]
        assert names[:2] == ["empty", "point"] and len(names) == 12

    def test_parallel_map_keeps_order(self):
        assert parallel_map(abs, [-3, 2, -1], 2) == [3, 2, 1]

    def test_star_identity_counts(self):
        total, closed, ident = star_identity(3)
        assert total == 400 and len(closed) == 13 and len(ident) == 70

    def test_undetermined_reports_only(self):
        rec = dict(run_undetermined(1))
        assert int(rec["undetermined.searched"]) > 0
        assert "FAIL" not in rec.values()
