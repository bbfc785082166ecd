import json

import pytest

from oddtown import build_b22_pair, build_cover_33, trivial_gp_cover
from oddtown.cli import main
from oddtown.fileio import (
    FileFormatError,
    load_cover,
    load_family,
    load_gp_cover,
    load_tuple,
    save_cover,
    save_family,
    save_gp_cover,
    save_tuple,
)
from oddtown.setsystems import SetFamily


class TestRoundTrips:
    def test_family(self, tmp_path):
        fam = SetFamily.from_lists(5, [[1, 3], [2], [4, 5]])
        path = tmp_path / "fam.json"
        save_family(fam, path)
        first = path.read_bytes()
        save_family(load_family(path), path)
        assert path.read_bytes() == first
        assert first.endswith(b"\n")

    def test_tuple(self, tmp_path):
        path = tmp_path / "pair.json"
        save_tuple(build_b22_pair(4), path)
        first = path.read_bytes()
        save_tuple(load_tuple(path), path)
        assert path.read_bytes() == first

    def test_cover(self, tmp_path):
        path = tmp_path / "cover.json"
        save_cover(build_cover_33(2), path)
        first = path.read_bytes()
        save_cover(load_cover(path), path)
        assert path.read_bytes() == first

    def test_gp_cover(self, tmp_path):
        path = tmp_path / "gp.json"
        save_gp_cover(trivial_gp_cover(4, 2), path)
        first = path.read_bytes()
        save_gp_cover(load_gp_cover(path), path)
        assert path.read_bytes() == first


class TestLoadValidation:
    def test_elements_must_increase(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n": 3, "sets": [[2, 1]]}')
        with pytest.raises(FileFormatError, match=r"sets\[0\]\[1\]"):
            load_family(path)

    def test_element_out_of_range(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n": 3, "sets": [[4]]}')
        with pytest.raises(FileFormatError, match="outside"):
            load_family(path)

    def test_json_error_position(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n": 3,\n  "sets": [[1]')
        with pytest.raises(FileFormatError, match="line 2"):
            load_family(path)

    def test_gp_disjointness_enforced(self, tmp_path):
        path = tmp_path / "gp.json"
        path.write_text(json.dumps({"n": 3, "k": 2, "products": [[[1, 2], [2, 3]]]}) + "\n")
        with pytest.raises(FileFormatError, match="overlap"):
            load_gp_cover(path)


class TestCli:
    def test_construct_verify_b22pair(self, tmp_path, capsys):
        out = tmp_path / "pair.json"
        assert main(["construct", "--name", "b22pair", "--n", "4", "--out", str(out)]) == 0
        assert main(["verify", "--kind", "tuple", "--file", str(out)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[-1] == "valid m=5 n=4"

    def test_construct_verify_cover33(self, tmp_path, capsys):
        out = tmp_path / "c.json"
        assert main(["construct", "--name", "cover33", "--n", "2", "--out", str(out)]) == 0
        assert "size=7" in capsys.readouterr().out
        assert main(["verify", "--kind", "cover", "--file", str(out)]) == 0
        assert "valid" in capsys.readouterr().out

    def test_verify_detects_invalid(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps({"n": 3, "k": 2, "t": 2, "products": [[[1, 2, 3], [1, 2, 3]]]}) + "\n"
        )
        assert main(["verify", "--kind", "cover", "--file", str(path)]) == 1
        assert "invalid" in capsys.readouterr().out

    def test_malformed_file_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        assert main(["verify", "--kind", "cover", "--file", str(path)]) == 2
        assert "malformed" in capsys.readouterr().out

    def test_missing_file_is_usage_error(self, tmp_path):
        assert main(["verify", "--kind", "cover", "--file", str(tmp_path / "nope.json")]) == 2

    def test_rank_verdict(self, capsys):
        assert main(["rank", "--n", "5", "--k", "2", "--l", "3", "--p", "2"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[-1] == "formula=6 direct=6 agree=yes"

    def test_rank_mstar_seeded(self, capsys):
        assert main(["rank", "--n", "5", "--k", "2", "--p", "3", "--mstar", "--seed", "7"]) == 0
        first = capsys.readouterr().out.strip().splitlines()[-1]
        assert main(["rank", "--n", "5", "--k", "2", "--p", "3", "--mstar", "--seed", "7"]) == 0
        assert capsys.readouterr().out.strip().splitlines()[-1] == first

    def test_convert_round_trip_parity(self, tmp_path, capsys):
        cover = tmp_path / "cover.json"
        tup = tmp_path / "tuple.json"
        back = tmp_path / "back.json"
        assert main(["construct", "--name", "cover33", "--n", "2", "--out", str(cover)]) == 0
        assert main(["convert", "--direction", "cover-to-tuple", "--in", str(cover), "--out", str(tup)]) == 0
        assert main(["convert", "--direction", "tuple-to-cover", "--in", str(tup), "--out", str(back)]) == 0
        assert main(["verify", "--kind", "cover", "--file", str(cover), "--parity-diff", str(back)]) == 0
        assert "parity-diff equal=yes" in capsys.readouterr().out

    def test_parity_diff_detects_difference(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(["construct", "--name", "cover33", "--n", "2", "--out", str(a)]) == 0
        assert main(["construct", "--name", "cover-t2", "--k", "3", "--n", "2", "--out", str(b)]) == 0
        assert main(["verify", "--kind", "cover", "--file", str(a), "--parity-diff", str(b)]) == 1

    def test_search_exact(self, capsys):
        assert main(["search", "--k", "2", "--t", "2", "--n", "4"]) == 0
        assert "exact k=2 t=2 n=4 f=4" in capsys.readouterr().out

    def test_search_exact_b(self, capsys):
        assert main(["search", "--k", "2", "--t", "2", "--m", "3"]) == 0
        assert "exact-b k=2 t=2 m=3 b=3" in capsys.readouterr().out

    def test_search_cap_exceeded(self, capsys):
        assert main(["search", "--k", "2", "--t", "2", "--n", "7"]) == 2
        assert "cap" in capsys.readouterr().out

    def test_table_writes_rows(self, tmp_path, capsys):
        rows = tmp_path / "t.rows"
        assert main([
            "table", "--k", "2", "--t", "2", "--n-min", "2", "--n-max", "4",
            "--out", str(rows),
        ]) == 0
        out = capsys.readouterr().out
        assert "constructive" in out and "note:" in out
        content = rows.read_text()
        data_lines = [l for l in content.splitlines() if not l.startswith("#")]
        assert len(data_lines) == 3
        assert data_lines[0].split("\t") == ["2", "2", "2", "2", "2", "2", "2"]
        assert data_lines[2].split("\t") == ["2", "2", "4", "4", "5", "4", "4"]

    def test_verify_skew_cli(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        fam = SetFamily.from_lists(3, [[1], [2], [3]])
        save_family(fam, a)
        assert main(["verify", "--kind", "skew", "--file", str(a), "--second", str(a)]) == 0

    def test_verify_family_kinds(self, tmp_path):
        a = tmp_path / "a.json"
        save_family(SetFamily.from_lists(3, [[1], [2], [3]]), a)
        assert main(["verify", "--kind", "family-oddtown", "--file", str(a)]) == 0
        assert main(["verify", "--kind", "family-kt", "--file", str(a), "--k", "2", "--t", "2"]) == 0

    def test_construct_gp_and_permuted(self, tmp_path):
        gp = tmp_path / "gp.json"
        assert main(["construct", "--name", "trivial-gp", "--k", "2", "--n", "4", "--out", str(gp)]) == 0
        assert main(["verify", "--kind", "gp-cover", "--file", str(gp)]) == 0
        perm = tmp_path / "perm.json"
        assert main(["construct", "--name", "permuted-gp", "--k", "2", "--n", "4", "--out", str(perm)]) == 0
        assert main(["verify", "--kind", "cover", "--file", str(perm)]) == 0

    def test_usage_errors(self, capsys):
        assert main(["search", "--k", "2", "--t", "2"]) == 2  # neither --n nor --m
        assert main(["--threads", "0", "rank", "--n", "3", "--k", "1", "--l", "2", "--p", "2"]) == 2
        assert main(["bogus"]) == 2

    def test_internal_inconsistency_exit_code(self, tmp_path, monkeypatch, capsys):
        # force a constructor output to fail its verifier: must exit 3
        from oddtown import cli as cli_mod
        from oddtown.setsystems import VerifyReport

        monkeypatch.setattr(
            cli_mod.covers, "verify_mod2_cover", lambda c: VerifyReport(False, ())
        )
        code = main(["construct", "--name", "cover33", "--n", "2",
                     "--out", str(tmp_path / "c.json")])
        assert code == 3
        assert "internal inconsistency" in capsys.readouterr().out
