import json
import subprocess
import sys

import pytest

from shiftbisim.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEval:
    def test_value(self, capsys):
        code, out, _ = run(capsys, "eval", "<(shift k1. i (k1 i)) (shift k2. omega) (omega omega)>")
        assert code == 0 and out.strip() == r"value: \x. x x"

    def test_control_stuck(self, capsys):
        code, out, _ = run(capsys, "eval", "(shift k. k) i")
        assert code == 0 and out.startswith("control stuck:")

    def test_open_stuck(self, capsys):
        code, out, _ = run(capsys, "eval", "<x i>")
        assert code == 0 and out.startswith("open stuck on x:")

    def test_fuel(self, capsys):
        code, out, _ = run(capsys, "eval", "--fuel", "10", "Omega")
        assert code == 2 and "after 10 steps" in out

    def test_no_defs(self, capsys):
        code, out, _ = run(capsys, "eval", "--no-defs", "i")
        assert out.strip() == "value: i"

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "eval", "(x")
        assert code == 1 and "parse error at 1:3" in err

    def test_term_from_file(self, capsys, tmp_path):
        f = tmp_path / "t.txt"
        f.write_text("<<\\y. y>>")
        code, out, _ = run(capsys, "eval", f"@{f}")
        assert out.strip() == r"value: \y. y"

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "eval", f"@{tmp_path / 'nope'}")
        assert code == 1 and "cannot read" in err


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", "<<\\y. y>>")
    assert code == 0 and out.splitlines() == [r"<<\y. y>>", r"<\y. y>", r"\y. y"]
    code, _, _ = run(capsys, "trace", "--fuel", "3", "Omega")
    assert code == 2


class TestBisim:
    def test_bisimilar(self, capsys):
        code, out, _ = run(capsys, "bisim", "theta theta", "<theta (shift k. k k)>")
        doc = json.loads(out)
        assert code == 0 and doc["verdict"] == "bisimilar" and 1 <= len(doc["pairs"]) <= 4

    def test_not_bisimilar(self, capsys):
        code, out, _ = run(capsys, "bisim", "\\x. delta delta", "\\x. <delta (shift k. k k)>")
        doc = json.loads(out)
        assert code == 1 and doc["verdict"] == "not-bisimilar" and "<<@>>" in doc["mismatch"]

    def test_inconclusive(self, capsys):
        code, out, _ = run(capsys, "bisim", "--fuel", "20", "(\\x. x x x) (\\x. x x x)", "i")
        assert code == 2 and json.loads(out)["reason"] == "fuel-exhausted"

    def test_mode(self, capsys):
        args = ("shift k. i", "(shift k. i) Omega")
        assert run(capsys, "bisim", *args)[0] == 1
        assert run(capsys, "bisim", "--mode", "refined", *args)[0] == 0

    def test_hint(self, capsys):
        code, out, _ = run(
            capsys, "bisim", "--hint", "theta theta ~ (\\x. <theta x>) (\\x. <theta x>)", "theta theta", "<theta (shift k. k k)>"
        )
        assert code == 0 and len(json.loads(out)["pairs"]) == 2

    def test_bad_hint(self, capsys):
        code, _, err = run(capsys, "bisim", "--hint", "x", "i", "i")
        assert code == 1 and "left ~ right" in err

    def test_stable_output(self, capsys):
        a = run(capsys, "bisim", "theta theta", "\\x. delta delta")[1]
        b = run(capsys, "bisim", "theta theta", "\\x. delta delta")[1]
        assert a == b

    def test_flags_map_to_config(self):
        args = build_parser().parse_args(
            ["bisim", "--no-up-to-context", "--up-to-depth", "2", "--max-pairs", "7", "--assume-divergence", "a", "b"]
        )
        from shiftbisim.cli import _config

        cfg = _config(args)
        assert (cfg.up_to_context, cfg.up_to_depth, cfg.max_pairs, cfg.assume_divergence) == (False, 2, 7, True)

    def test_rejects_non_positive(self, capsys):
        with pytest.raises(SystemExit):
            main(["bisim", "--max-pairs", "0", "i", "i"])


class TestDistinguish:
    def test_found(self, capsys):
        code, out, _ = run(capsys, "distinguish", "x i", "<x i>")
        doc = json.loads(out)
        assert code == 0 and sorted(doc["observables"]) == ["converges-to-control-stuck", "converges-to-value"]

    def test_none(self, capsys):
        code, out, _ = run(capsys, "distinguish", "--context-size", "2", "shift k. i", "(shift k. i) Omega")
        assert code == 0 and out.strip() == "none at bounds"


class TestCorpus:
    def test_filter(self, capsys):
        code, out, _ = run(capsys, "corpus", "--filter", "reset-idempotence")
        lines = out.splitlines()
        assert code == 0 and lines[-1] == "4/4 fixtures pass"
        assert all(line.startswith("PASS") for line in lines[:-1])

    def test_failing_file(self, capsys, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text(
            "name: wrong\nleft: x\nright: y\nplain: bisimilar\nrefined: bisimilar\ndistinguisher: not-found\n"
        )
        code, out, _ = run(capsys, "corpus", "--file", str(f), "--no-distinguish")
        assert code == 1 and out.splitlines()[-1] == "0/1 fixtures pass"

    def test_malformed_file(self, capsys, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("nonsense\n")
        code, _, err = run(capsys, "corpus", "--file", str(f))
        assert code == 1 and "corpus line 1" in err


def test_module_entry_point():
    got = subprocess.run([sys.executable, "-m", "shiftbisim", "eval", "i i"], capture_output=True, text=True)
    assert got.returncode == 0 and got.stdout.strip() == r"value: \x. x"
