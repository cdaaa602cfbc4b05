import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from logsurf.cli import fmt_complex, main, parse_complex
from logsurf.render import read_image


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParsing:
    @pytest.mark.parametrize("text,value", [
        ("5", 5), ("-3", -3), ("2i", 2j), ("i", 1j), ("-i", -1j), ("1+2i", 1 + 2j),
        ("1-2i", 1 - 2j), ("-3+2j", -3 + 2j), ("1e-3-1e2i", 0.001 - 100j), (".5+i", 0.5 + 1j),
    ])
    def test_parse(self, text, value):
        assert parse_complex(text) == value

    @pytest.mark.parametrize("text", ["", "abc", "1+", "1+2", "i2", "1++2i"])
    def test_reject(self, text):
        with pytest.raises(Exception):
            parse_complex(text)

    def test_format(self):
        assert fmt_complex(24, 10) == "24+0i"
        assert fmt_complex(1 - 0.5j, 3) == "1-0.5i"


class TestCommands:
    def test_gamma_five(self, capsys):
        code, out, _ = run(capsys, "gamma", "--z", "5")
        assert code == 0
        assert out.strip() == "24+0i"

    def test_gamma_phase(self, capsys):
        code, out, _ = run(capsys, "gamma", "--z", "10+10i", "--phase")
        assert code == 0
        assert out.splitlines()[1].startswith("A 23.948703")

    def test_digits(self, capsys):
        _, out, _ = run(capsys, "--digits", "4", "zeta", "--z", "2")
        assert out.strip() == "1.645+0i"

    def test_zeta_two(self, capsys):
        code, out, _ = run(capsys, "zeta", "--z", "2")
        assert code == 0
        assert out.strip().startswith("1.644934067")

    def test_phi_methods_agree(self, capsys):
        _, a, _ = run(capsys, "phi", "--z", "20")
        _, b, _ = run(capsys, "phi", "--z", "20", "--method", "asymptotic")
        va = parse_complex(a.split()[0])
        vb = parse_complex(b.splitlines()[0])
        assert abs(va - 1 / 240) < 1e-6
        assert abs(va - vb) < 1e-12

    def test_pole_is_numeric_failure(self, capsys):
        code, _, err = run(capsys, "gamma", "--z=-3")
        assert code == 1
        assert "PoleError" in err

    def test_usage_errors(self, capsys):
        assert run(capsys, "gamma", "--z", "abc")[0] == 2
        assert run(capsys, "nosuch")[0] == 2
        assert run(capsys)[0] == 2
        assert run(capsys, "render", "--fn", "gamma", "--size", "big", "--out", "x.png")[0] == 2

    def test_classify(self, capsys):
        alpha = 14 * math.pi / 30
        code, out, _ = run(capsys, "classify", "--z", "3", "--R", "0.6667", "--alpha", str(alpha))
        assert code == 0 and out.strip() == "0"
        _, out, _ = run(capsys, "classify", "--z=-5+0.1i", "--R", "0.6667", "--alpha", str(alpha))
        assert out.strip() == "outside"

    def test_eval(self, capsys, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"m": 1, "n": 0, "terms": [
            {"alpha": [0.5], "beta": [], "re": 1.0, "im": 0.0},
            {"alpha": [2.0], "beta": [], "re": 0.0, "im": 1.0}]}))
        code, out, _ = run(capsys, "eval", "--series", str(path), "--x", f"0.25:{math.pi}")
        assert code == 0
        value = parse_complex(out.splitlines()[0].split()[1])
        expected = 0.5 * np.exp(0.5j * math.pi) + 1j * 0.0625 * np.exp(2j * math.pi)
        assert abs(value - expected) < 1e-9
        assert out.splitlines()[1].startswith("bound")


class TestVerify:
    def test_sectors_ten_thousand(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "sectors", "--samples", "10000")
        assert code == 0
        assert "0 failures in 10000 trials" in out

    @pytest.mark.parametrize("suite", ["stirling", "gamma", "zeta", "series", "curves"])
    def test_suites_pass(self, capsys, suite):
        code, out, _ = run(capsys, "verify", "--suite", suite, "--samples", "200")
        assert code == 0
        assert "FAIL" not in out

    def test_deterministic(self, capsys):
        a = run(capsys, "verify", "--suite", "sectors", "--samples", "300", "--seed", "7")[1]
        b = run(capsys, "verify", "--suite", "sectors", "--samples", "300", "--seed", "7")[1]
        assert a == b


class TestFiles:
    def test_trace_csv(self, capsys, tmp_path):
        out_path = tmp_path / "c.csv"
        code, out, _ = run(capsys, "trace", "--kind", "mod", "--value", "0.5", "--x0", "2",
                           "--x1", "4", "--step", "0.1", "--out", str(out_path))
        assert code == 0 and "21 samples" in out
        rows = list(csv.DictReader(open(out_path)))
        assert len(rows) == 21
        assert all(abs(float(r["|Gamma|"]) - 0.5) < 1e-9 for r in rows)

    def test_trace_stdout(self, capsys):
        code, out, _ = run(capsys, "trace", "--kind", "arg", "--value", "0", "--x0=-10",
                           "--x1=-8", "--step", "0.5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x,y,residual,A,|Gamma|" and len(lines) == 6

    def test_trace_bg(self, capsys):
        code, _, err = run(capsys, "trace", "--kind", "bg", "--value", "0", "--x0=-10",
                           "--x1=-8", "--step", "0.5")
        assert code == 0 and "ok" in err

    def test_trace_precondition_is_numeric_failure(self, capsys):
        code, _, err = run(capsys, "trace", "--kind", "mod", "--value", "1", "--x0", "0.5", "--x1", "2")
        assert code == 1 and "PreconditionError" in err

    def test_render(self, capsys, tmp_path):
        path = tmp_path / "g.png"
        code, _, _ = run(capsys, "render", "--fn", "gamma", "--window=-7,7,-7,7", "--size", "64x33",
                         "--style", "contour", "--overlay", "sector", "--overlay", "Un=0", "--out", str(path))
        assert code == 0
        img = read_image(path)
        assert (img.width, img.height) == (64, 33)

    def test_render_bad_path(self, capsys, tmp_path):
        code, _, _ = run(capsys, "render", "--fn", "zeta", "--size", "4x4",
                         "--out", str(tmp_path / "no" / "x.png"))
        assert code == 1

    def test_probe(self, capsys):
        code, out, _ = run(capsys, "probe", "--arg-max", "10", "20", "--points", "3", "--t-max", "100")
        assert code == 0
        assert "crossing counts" in out and "lower bound" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "logsurf", "gamma", "--z", "5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "24+0i"
