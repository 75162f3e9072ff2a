import io
import math

import pytest

from charmoment.cli import HEADER, main
from charmoment.distributions import parse_distribution


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def records(text):
    lines = text.splitlines()
    assert tuple(lines[0].split("\t")) == HEADER
    return [dict(zip(HEADER, line.split("\t"))) for line in lines[1:]]


def test_constants_example():
    code, text = run("constants", "--n", "1", "--p", "0.5")
    assert code == 0
    assert "0 + 5.0132565i" in text
    assert "quadrature" in text and "|delta|" in text


def test_moment_example():
    code, text = run("moment", "--dist", "exp(rate=1)", "--s", "1.5", "--method", "stabilized")
    assert code == 0
    assert "1.3293404" in text and "+/-" in text


def test_cdf_example():
    code, text = run("cdf", "--dist", "normal(mean=0,sd=1)", "--x", "1")
    assert code == 0
    value = float(text.split("=")[1].split()[0])
    assert round(value, 6) == 0.841345


def test_moment_record_value():
    code, text = run("moment", "--dist", "exp(rate=1)", "--s", "1.5", "--method", "stabilized",
                     "--output", "records")
    assert code == 0
    (rec,) = records(text)
    assert rec["value_re"] == "1.32934038818"
    assert rec["converged"] == "true" and rec["method"] == "stabilized"


def test_cdf_record_at_zero():
    code, text = run("cdf", "--dist", "normal(mean=0,sd=1)", "--x", "0", "--output", "records")
    (rec,) = records(text)
    assert code == 0 and rec["value_re"] == "0.5"


def test_non_converged_run():
    code, text = run("cdf", "--dist", "discrete(x=[-1,2],w=[0.5,0.5])", "--x", "0.3",
                     "--tail-terms", "2", "--output", "records")
    (rec,) = records(text)
    assert code == 3 and rec["converged"] == "false"


@pytest.mark.parametrize(
    "argv, token",
    [
        (("moment", "--dist", "frob(x=1)", "--s", "1"), "frob"),
        (("moment", "--dist", "exp(rate=1)", "--s", "1", "--bogus"), "--bogus"),
        (("moment", "--dist", "exp(rate=1)"), "--s"),
        (("constants", "--n", "2", "--p", "0"), ""),
        (("risk", "--dist", "exp(rate=1)", "--alpha", "1", "--q", "0.1", "--lo", "0"), "--hi"),
    ],
)
def test_usage_errors(argv, token, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert token in capsys.readouterr().err


def test_other_commands_produce_records():
    cases = [
        (("cf-pos", "--dist", "point(x=-3)", "--u", "0.5"), 1.0),
        (("truncated", "--dist", "exp(rate=1)", "--x", "1", "--r", "0"), 1 - math.exp(-1)),
        (("risk", "--dist", "point(x=2)", "--alpha", "1", "--q", "0.1"), 2.0),
    ]
    for argv, want in cases:
        code, text = run(*argv, "--output", "records")
        (rec,) = records(text)
        assert code == 0
        assert float(rec["value_re"]) == pytest.approx(want, abs=1e-6)


def test_verify_table():
    code, text = run("verify")
    assert code == 0
    lines = text.splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1] == f"{len(lines) - 1}/{len(lines) - 1} checks passed"


# ---- invariants ------------------------------------------------------------------


@pytest.mark.parametrize(
    "dist",
    ["exp(rate=2)", "normal(mean=1, sd=0.5)", "neg(exp(rate=1))", "shift(point(x=1), c=0.25)",
     "discrete(x=[-1, 0.5, 3], w=[0.2, 0.3, 0.5])"],
)
def test_record_dist_round_trips(dist):
    code, text = run("cdf", "--dist", dist, "--x", "0.7", "--output", "records")
    (rec,) = records(text)
    assert code == 0
    assert parse_distribution(rec["dist"]) == parse_distribution(dist)


def test_records_are_deterministic():
    argv = ("moment", "--dist", "normal(mean=0.3, sd=1)", "--s", "2.5", "--part", "abs",
            "--u", "0.4", "--output", "records")
    assert run(*argv) == run(*argv)


def test_record_layout():
    _, text = run("truncated", "--dist", "exp(rate=1)", "--x", "2", "--output", "records")
    header, line = text.splitlines()
    assert len(line.split("\t")) == len(HEADER)
    assert "\t\t" not in line and "  " not in line
