import io
import subprocess
import sys

import pytest

from multihyp.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def kv(text):
    pairs = [line.split("=", 1) for line in text.splitlines()]
    return pairs, dict(pairs)


@pytest.fixture
def sigfile(tmp_path):
    p = tmp_path / "sig.txt"
    p.write_text("op f 2\nop h 1\n")
    return str(p)


class TestTerm:
    def test_addresses(self):
        code, out, _ = call("term", "addresses", "f(f(x,y),y)")
        assert code == 0 and out == "address=root\naddress=1\n"

    def test_format(self):
        assert call("term", "format", "f( x ,f(y,z))")[1] == "term=f(x1,f(x2,x3))\n"
        assert call("term", "format", "f(x1,x4)", "--named")[1] == "term=f(x,x4)\n"

    def test_signature_file_and_inline_type(self, sigfile):
        assert call("term", "format", "h(f(x,x))", "--sig", sigfile)[0] == 0
        assert call("term", "format", "g(x,x,x)", "--type", "g:3")[0] == 0

    def test_syntax_error_is_usage(self):
        code, out, err = call("term", "format", "f(x")
        assert code == 2 and out == "" and err.startswith("error=")

    def test_unknown_symbol(self):
        assert call("term", "format", "g(x,y)")[0] == 2


class TestHyp:
    def test_apply(self):
        assert call("hyp", "apply", "--hyp", "swap", "f(f(x,y),y)", "--named")[1] == "result=f(y,f(y,x))\n"
        assert call("hyp", "apply", "f(x,f(y,z))", "--hyp", "proj-last")[1] == "result=x3\n"

    def test_apply_file(self, tmp_path):
        p = tmp_path / "h"
        p.write_text("f -> f(x2,f(x1,x2))\n")
        assert call("hyp", "apply", "--hyp", str(p), "f(x,y)")[1] == "result=f(x2,f(x1,x2))\n"

    def test_compose(self):
        assert call("hyp", "compose", "--hyp", "swap", "--with", "swap")[1] == "f=f(x1,x2)\n"
        assert call("hyp", "compose", "--hyp", "swap", "--with", "proj-first")[1] == "f=x1\n"

    def test_usage_errors(self):
        assert call("hyp", "compose", "--hyp", "swap")[0] == 2
        assert call("hyp", "apply", "--hyp", "rotate", "f(x,y)")[0] == 2
        assert call("hyp")[0] == 2


class TestMhyp:
    def test_apply(self, tmp_path):
        p = tmp_path / "rho"
        p.write_text("default id\ncolor 0 swap\n")
        code, out, _ = call(
            "mhyp", "apply", "--coloration", "leftmost-special:f(y,f(y,x)):0:1:0", "--mhyp", str(p),
            "f(f(x,y),y)", "--named",
        )
        assert code == 0 and out == "rho={0: swap, default: id}\nresult=f(y,f(y,x))\n"

    def test_bad_file(self, tmp_path):
        p = tmp_path / "rho"
        p.write_text("color 0 swap\n")
        assert call("mhyp", "apply", "--coloration", "uniform:0", "--mhyp", str(p), "f(x,y)")[0] == 2

    def test_bad_coloration(self, tmp_path):
        p = tmp_path / "rho"
        p.write_text("default id\n")
        assert call("mhyp", "apply", "--coloration", "rainbow", "--mhyp", str(p), "f(x,y)")[0] == 2


class TestAlgebra:
    def test_check_holds_and_fails(self):
        code, out, _ = call("algebra", "check", "--algebra", "left-zero", "--eq", "f(x,y) = x")
        assert code == 0 and kv(out)[1]["holds"] == "true"
        code, out, _ = call("algebra", "check", "--algebra", "semilattice", "--eq", "f(x,y) = x")
        assert code == 1 and kv(out)[1]["assignment"] == "x1=1,x2=0"

    def test_hyper_commutativity(self):
        code, out, _ = call("algebra", "check", "--algebra", "semilattice", "--eq", "f(x,y) = f(y,x)", "--hyper")
        d = kv(out)[1]
        assert code == 1 and d["counterexample"] == "f->x1" and d["holds"] == "false"

    def test_hyper_with_pool(self, tmp_path):
        (tmp_path / "id").write_text("f -> f(x1,x2)\n")
        (tmp_path / "swap").write_text("f -> f(x2,x1)\n")
        code, out, _ = call(
            "algebra", "check", "--algebra", "semilattice", "--eq", "f(x,y) = f(y,x)", "--hyper",
            "--pool", str(tmp_path),
        )
        assert code == 0 and kv(out)[1]["complete"] == "false"

    def test_algebra_file(self, tmp_path):
        p = tmp_path / "alg"
        p.write_text("carrier 2\ntable f\n0 1\n1 1\n")
        assert call("algebra", "check", "--algebra", str(p), "--eq", "f(x,y) = f(y,x)")[0] == 0
        p.write_text("carrier 2\ntable f\n0 1\n")
        assert call("algebra", "check", "--algebra", str(p), "--eq", "x = x")[0] == 2

    def test_derive(self, tmp_path):
        code, out, _ = call("algebra", "derive", "--algebra", "left-zero", "--hyp", "swap")
        assert code == 0 and out == "carrier 2\ntable f\n0 1\n0 1\n"
        p = tmp_path / "rho"
        p.write_text("default proj-last\ncolor 0 proj-first\n")
        code, out, _ = call(
            "algebra", "derive", "--algebra", "left-zero", "--mhyp", str(p), "--coloration", "prop63:f"
        )
        assert code == 0 and out.endswith("0 1\n0 1\n")

    def test_derive_needs_a_map(self):
        assert call("algebra", "derive", "--algebra", "left-zero")[0] == 2

    def test_unknown_model(self):
        assert call("algebra", "check", "--algebra", "nope", "--eq", "x = x")[0] == 2


class TestClosure:
    def test_chi_e(self):
        code, out, _ = call(
            "closure", "chi-e", "--equations", "f(x,y) = f(y,x)", "--coloration", "uniform:0", "--pool-depth", "0"
        )
        assert code == 0 and out == "count=2\nequation=x1 = x2\nequation=x2 = x1\n"

    def test_chi_E_fixpoint(self, tmp_path):
        for name, img in [("a_id", "f(x1,x2)"), ("b_first", "x1"), ("c_last", "x2")]:
            (tmp_path / name).write_text(f"f -> {img}\n")
        code, out, _ = call(
            "closure", "chi-E", "--equations", "RB", "--coloration", "rb-firstlast", "--pool", str(tmp_path),
            "--rounds", "5",
        )
        d = kv(out)[1]
        assert code == 0 and d["fixpoint_reached"] == "true"

    def test_equation_file(self, tmp_path):
        p = tmp_path / "eqs"
        p.write_text("f(x,x) = x\n")
        code, out, _ = call("closure", "chi-e", "--equations", str(p), "--coloration", "uniform:0", "--pool-depth", "1")
        assert code == 0 and "equation=x1 = x1" in out

    def test_bounds(self):
        code, _, err = call(
            "closure", "chi-E", "--equations", "RB", "--coloration", "address-depth", "--pool-depth", "2",
            "--rounds", "3",
        )
        assert code == 3 and "bounds exceeded" in err


class TestSolid:
    def test_check_violated(self):
        code, out, _ = call("solid", "check", "--base", "SL", "--algebra", "semilattice", "--pool-depth", "1")
        pairs, d = kv(out)
        assert code == 1 and pairs[0] == ["verdict", "violated"]
        assert d["image"] == "x1 = x2" and d["stage"] == "base"

    def test_colored_no_violation(self):
        code, out, _ = call(
            "solid", "colored-check", "--base", "RB", "--algebra", "rect-band", "--coloration", "rb-firstlast",
            "--pool-depth", "1", "--universe-depth", "2", "--rounds", "1",
        )
        d = kv(out)[1]
        assert code == 0 and d["verdict"] == "no-violation-within-bounds"
        assert d["universe"] == "depth<=2 over x1..x2 (38 terms)"

    def test_basis_only(self):
        code, out, _ = call(
            "solid", "check", "--base", "RB", "--algebra", "rect-band", "--pool-depth", "2", "--basis-only"
        )
        assert code == 0 and kv(out)[1]["universe"] == "none"

    def test_precondition_is_usage_error(self):
        assert call("solid", "check", "--base", "SL", "--algebra", "left-zero", "--pool-depth", "1")[0] == 2

    def test_bounds(self):
        code, _, err = call(
            "solid", "colored-check", "--base", "RB", "--algebra", "rect-band", "--coloration", "rb-firstlast",
            "--pool-depth", "1", "--universe-depth", "5",
        )
        assert code == 3 and err.startswith("error=bounds exceeded")


class TestVerify:
    def test_list(self):
        code, out, _ = call("verify", "--list")
        names = [k for k, _ in kv(out)[0]]
        assert code == 0 and names[:2] == ["sec2-example", "ex311-collapse"] and len(names) == 10

    def test_sec2_output(self):
        code, out, _ = call("verify", "sec2-example")
        d = kv(out)[1]
        assert code == 0
        assert d["rho(t)"] == "f(y,f(y,x))" and d["rho(s)"] == "f(f(y,x),y)" and d["status"] == "pass"

    def test_collapse(self):
        code, out, _ = call("verify", "ex311-collapse")
        d = kv(out)[1]
        assert code == 0 and d["rho(s)"] == "x" and d["sampled_t_not_fixed"] == "0/100"
        assert out.count("seed=") == 1

    def test_unknown(self):
        code, _, err = call("verify", "nope")
        assert code == 2 and "unknown scenario" in err


def test_console_script_runs():
    res = subprocess.run(
        [sys.executable, "-m", "multihyp.cli", "term", "addresses", "f(x,y)"], capture_output=True, text=True
    )
    assert res.returncode == 0 and res.stdout == "address=root\n"
