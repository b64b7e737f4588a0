"""Command-line behavior: reports, exit codes, certificate files."""

import json
import subprocess
import sys

import pytest

from horaprove import corpus_path
from horaprove.cli import main

PAPER = str(corpus_path("paper.fib"))
MUTATIONS = str(corpus_path("mutations.fib"))
TEMPLATE = str(corpus_path("horadam_extra.fib"))


class TestVerify:
    def test_main_corpus_all_proved(self, capsys):
        assert main(["verify", PAPER]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 20  # one per identity plus the totals line
        assert all("PROVED" in line for line in out[:-1])
        assert out[-1].startswith("total: 19 identities, 19 proved")

    def test_mutation_corpus_all_refuted(self, capsys):
        assert main(["verify", MUTATIONS]) == 1
        out = capsys.readouterr().out.strip().splitlines()
        assert out[-1] == "total: 38 identities, 0 proved, 38 refuted, 0 aborted"

    def test_both_corpora_exit_on_refutation(self, capsys):
        assert main(["verify", PAPER, MUTATIONS]) == 1
        out = capsys.readouterr().out.strip().splitlines()
        assert out[-1].startswith("total: 57 identities, 19 proved, 38 refuted")

    def test_empty_template_exits_clean(self, capsys):
        assert main(["verify", TEMPLATE]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert out[-1].startswith("total: 0 identities")

    def test_missing_file(self, capsys):
        assert main(["verify", "no-such-file.fib"]) == 2
        err = capsys.readouterr().err
        assert "no-such-file.fib" in err

    def test_parse_error_is_positioned(self, tmp_path, capsys):
        bad = tmp_path / "bad.fib"
        bad.write_text("forall n: W(n+1 == W(n)\n", encoding="utf-8")
        assert main(["verify", str(bad)]) == 2
        err = capsys.readouterr().err
        assert f"{bad}:1:" in err

    def test_order_cap_aborts_with_exit_two(self, capsys):
        assert main(["verify", PAPER, "--max-order", "4"]) == 2
        out = capsys.readouterr().out
        assert "ABORTED" in out

    def test_raised_cap_allows_everything(self, capsys):
        assert main(["verify", PAPER, "--max-order", "128"]) == 0
        capsys.readouterr()

    def test_elim_order_flag(self, capsys):
        assert main(["verify", PAPER, "--elim-order", "k,m,n,j,r"]) == 0
        capsys.readouterr()

    def test_elim_order_not_covering_some_identity(self, capsys):
        assert main(["verify", PAPER, "--elim-order", "m,n"]) == 2
        err = capsys.readouterr().err
        assert "does not cover" in err

    def test_fuzz_after_annotates_report(self, capsys):
        assert main(["verify", PAPER, "--fuzz-after", "--trials", "25"]) == 0
        out = capsys.readouterr().out
        assert "fuzz=PASS(25)" in out


class TestCertificates:
    def test_written_one_per_identity(self, tmp_path, capsys):
        certs = tmp_path / "certs"
        assert main(["verify", PAPER, "--cert-out", str(certs)]) == 0
        capsys.readouterr()
        files = sorted(certs.glob("*.json"))
        assert len(files) == 19
        assert files[0].name == "paper-001.json"

    def test_valid_json_with_fixed_keys(self, tmp_path, capsys):
        certs = tmp_path / "certs"
        main(["verify", PAPER, "--cert-out", str(certs)])
        capsys.readouterr()
        for path in certs.glob("*.json"):
            doc = json.loads(path.read_text(encoding="utf-8"))
            assert list(doc.keys()) == [
                "identity", "elimination", "proof", "leaves", "verdict", "ms",
            ]
            assert doc["verdict"] == "PROVED"

    def test_byte_stable_modulo_timing(self, tmp_path, capsys):
        c1, c2 = tmp_path / "c1", tmp_path / "c2"
        main(["verify", PAPER, "--cert-out", str(c1)])
        main(["verify", PAPER, "--cert-out", str(c2)])
        capsys.readouterr()
        for path in sorted(c1.glob("*.json")):
            d1 = json.loads(path.read_text(encoding="utf-8"))
            d2 = json.loads((c2 / path.name).read_text(encoding="utf-8"))
            d1.pop("ms"), d2.pop("ms")
            assert d1 == d2

    def test_refuted_certificates_record_nonzero_leaves(self, tmp_path, capsys):
        certs = tmp_path / "certs"
        assert main(["verify", MUTATIONS, "--cert-out", str(certs)]) == 1
        capsys.readouterr()
        for path in certs.glob("*.json"):
            doc = json.loads(path.read_text(encoding="utf-8"))
            assert doc["verdict"] == "REFUTED"
            assert any(not leaf["zero"] for leaf in doc["leaves"])


class TestFuzzCommand:
    def test_main_corpus_passes(self, capsys):
        assert main(["fuzz", PAPER, "--trials", "50"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert all("PASS" in line for line in out[:-1])
        assert out[-1] == "total: 19 identities fuzzed"

    def test_mutations_all_falsified(self, capsys):
        assert main(["fuzz", MUTATIONS, "--trials", "500"]) == 1
        out = capsys.readouterr().out.strip().splitlines()
        body = out[:-1]
        assert len(body) == 38
        assert all("COUNTEREXAMPLE" in line for line in body)
        assert all("lhs=" in line and "rhs=" in line for line in body)

    def test_deterministic_output(self, capsys):
        main(["fuzz", MUTATIONS, "--seed", "9"])
        first = capsys.readouterr().out
        main(["fuzz", MUTATIONS, "--seed", "9"])
        second = capsys.readouterr().out
        assert first == second

    def test_zero_trials_usage_error(self, capsys):
        assert main(["fuzz", PAPER, "--trials", "0"]) == 2
        assert "--trials" in capsys.readouterr().err

    def test_zero_range_usage_error(self, capsys):
        assert main(["fuzz", PAPER, "--range", "0"]) == 2
        assert "--range" in capsys.readouterr().err


class TestInvocation:
    def test_no_command_is_usage_error(self, capsys):
        assert main([]) == 2
        capsys.readouterr()

    def test_help_exits_clean(self, capsys):
        assert main(["--help"]) == 0
        assert "verify" in capsys.readouterr().out

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "horaprove", "verify", TEMPLATE],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "total: 0 identities" in proc.stdout
