import csv
import json
import math
from pathlib import Path

import pytest

from vilenkin.cli import (
    ConfigError,
    RunConfig,
    load_config,
    main,
)

DATA = Path(__file__).parent / "data"


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


class TestConfig:
    def test_defaults_valid(self):
        RunConfig().validate()

    def test_alpha_out_of_range(self):
        with pytest.raises(ConfigError, match="alpha"):
            load_config(None, {"alpha": "1.0"})

    def test_empty_m(self):
        with pytest.raises(ConfigError, match="'m'"):
            load_config(None, {"m": ""})

    def test_unknown_claim(self):
        with pytest.raises(ConfigError, match="claims"):
            load_config(None, {"claims": "theorem9"})

    def test_bad_family(self):
        with pytest.raises(ConfigError, match="families"):
            load_config(None, {"families": "blob(1)"})

    def test_p_tokens(self):
        cfg = load_config(None, {"p": "1,2,inf"})
        assert cfg.p == (1.0, 2.0, math.inf)
        with pytest.raises(ConfigError, match="'p'"):
            load_config(None, {"p": "0.5"})

    def test_level_truncates(self):
        cfg = load_config(None, {"m": "2,3,2,3", "level": 2})
        assert cfg.context().m == (2, 3)
        with pytest.raises(ConfigError, match="level"):
            load_config(None, {"m": "2,3", "level": 5})

    def test_json_document(self):
        cfg = load_config(str(DATA / "config_small.json"), {})
        assert cfg.m == (2, 3, 2)
        assert cfg.claims == ("theorem1", "lemma5")

    def test_flags_override_document(self):
        cfg = load_config(str(DATA / "config_small.json"), {"alpha": "0.25"})
        assert cfg.alpha == (0.25,)
        assert cfg.m == (2, 3, 2)

    def test_json_error_reports_position(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"m": [2,\n 3,]}', encoding="utf-8")
        with pytest.raises(ConfigError, match="line 2"):
            load_config(str(bad), {})

    def test_unknown_field_rejected(self, tmp_path):
        doc = tmp_path / "cfg.json"
        doc.write_text('{"mystery": 1}', encoding="utf-8")
        with pytest.raises(ConfigError, match="mystery"):
            load_config(str(doc), {})


class TestCheckIdentities:
    def test_default_group_passes(self, tmp_path, capsys):
        out = tmp_path / "ids.csv"
        code = main(["check-identities", "--m", "2,3,2,3", "--alpha", "0.5",
                     "--out", str(out)])
        assert code == 0
        rows = read_rows(out)
        assert all(row["status"] == "pass" for row in rows)
        names = {row["check"] for row in rows}
        assert {"eq1", "eq2", "eq3", "eq4", "lemma2", "eq20", "eq20b"} <= names
        assert "0 failures" in capsys.readouterr().out

    def test_config_error_exit_code(self, tmp_path):
        assert main(["check-identities", "--alpha", "1.0"]) == 2
        assert main(["check-identities", "--m", ""]) == 2

    def test_level_flag_truncates_group(self, tmp_path):
        out = tmp_path / "ids.csv"
        code = main(["check-identities", "--m", "2,3,2,3", "--level", "2",
                     "--alpha", "0.5", "--out", str(out)])
        assert code == 0
        rows = read_rows(out)
        eq1_levels = {r["params"] for r in rows if r["check"] == "eq1"}
        assert eq1_levels == {"k=0", "k=1", "k=2"}


class TestVerify:
    def test_single_theorem1_row(self, tmp_path):
        out = tmp_path / "r.csv"
        code = main([
            "verify", "--m", "2,2,2,2", "--alpha", "0.5", "--p", "2",
            "--claims", "theorem1", "--families", "character(1,1)",
            "--out", str(out),
        ])
        assert code == 0
        rows = read_rows(out)
        assert len(rows) == len(set(r["k"] for r in rows))  # one row per k
        k2 = [r for r in rows if r["k"] == "2"]
        assert len(k2) == 1
        assert float(k2[0]["lhs"]) > 0.0
        assert float(k2[0]["rhs"]) > 0.0
        assert k2[0]["error"] == ""

    def test_resolution_error_becomes_row(self, tmp_path):
        out = tmp_path / "r.csv"
        code = main([
            "verify", "--m", "2,3", "--alpha", "0.5", "--p", "2",
            "--claims", "theorem1", "--families", "character(1,1),character(50,0)",
            "--out", str(out),
        ])
        assert code == 0
        rows = read_rows(out)
        errored = [r for r in rows if r["error"]]
        clean = [r for r in rows if not r["error"]]
        assert errored and clean
        assert all(r["ratio"] == "" for r in errored)

    def test_constant_family_zero_rows(self, tmp_path):
        out = tmp_path / "r.csv"
        main([
            "verify", "--m", "2,3,2", "--alpha", "0.5", "--p", "1,2,inf",
            "--claims", "theorem1", "--families", "character(0,0),cylinder(0)",
            "--out", str(out),
        ])
        rows = read_rows(out)
        assert rows
        assert all(float(r["lhs"]) == 0.0 and float(r["ratio"]) == 0.0 for r in rows)


class TestSweep:
    def test_summary_structure(self, tmp_path):
        out = tmp_path / "s.csv"
        code = main([
            "sweep", "--config", str(DATA / "config_small.json"),
            "--out", str(out),
        ])
        assert code == 0
        summary = json.loads((tmp_path / "s.summary.json").read_text())
        assert summary["system"] == "vilenkin"
        assert set(summary) >= {"theorem1", "lemma5", "system"}
        alpha_key = f"{0.5:.17g}"
        assert alpha_key in summary["theorem1"]
        assert summary["lemma5"][alpha_key] > 0.0

    def test_dyadic_label(self, tmp_path):
        out = tmp_path / "d.csv"
        main([
            "sweep", "--m", "2,2,2", "--alpha", "0.5", "--p", "2",
            "--claims", "lemma5", "--out", str(out),
        ])
        summary = json.loads((tmp_path / "d.summary.json").read_text())
        assert summary["system"] == "dyadic"

    def test_byte_identical_reruns(self, tmp_path):
        args = ["sweep", "--config", str(DATA / "config_small.json")]
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        assert main(args + ["--out", str(out_a), "--jobs", "1"]) == 0
        assert main(args + ["--out", str(out_b), "--jobs", "3"]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()
        assert (tmp_path / "a.summary.json").read_bytes() == (
            tmp_path / "b.summary.json"
        ).read_bytes()

    def test_cap_file_controls_exit(self, tmp_path):
        loose = tmp_path / "loose.json"
        loose.write_text(json.dumps({"lemma5": 1e6}), encoding="utf-8")
        tight = tmp_path / "tight.json"
        tight.write_text(json.dumps({"lemma5": 1e-6}), encoding="utf-8")
        base = [
            "sweep", "--m", "2,3,2", "--alpha", "0.5", "--p", "2",
            "--claims", "lemma5",
        ]
        assert main(base + ["--out", str(tmp_path / "l.csv"),
                            "--cap-file", str(loose)]) == 0
        assert main(base + ["--out", str(tmp_path / "t.csv"),
                            "--cap-file", str(tight)]) == 1

    def test_single_tuple_summary_equals_row(self, tmp_path):
        out = tmp_path / "one.csv"
        main([
            "sweep", "--m", "2,3", "--alpha", "0.5", "--p", "2",
            "--claims", "theorem1", "--families", "random_poly(2,5)",
            "--out", str(out),
        ])
        rows = read_rows(out)
        assert len(rows) == 1
        summary = json.loads((tmp_path / "one.summary.json").read_text())
        assert summary["theorem1"][f"{0.5:.17g}"] == float(rows[0]["ratio"])

    def test_lemma1_rows_include_one_dimensional_branch(self, tmp_path):
        out = tmp_path / "l1.csv"
        main([
            "sweep", "--m", "2,3", "--alpha", "0.5", "--p", "2",
            "--claims", "lemma1", "--out", str(out),
        ])
        rows = read_rows(out)
        claims = {r["claim"] for r in rows}
        assert claims == {"lemma0", "lemma1"}
        seeded = [r for r in rows if r["family"] == "pm1"]
        assert seeded and all(r["seed"] for r in seeded)
