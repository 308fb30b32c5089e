import contextlib
import io
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from golden_cases import CASES
from pqstancu.cli import main, parse_output

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as exc:  # argparse usage errors
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def table(*argv, fmt="csv"):
    code, text, _ = run(*argv, "--format", fmt)
    assert code in (0, 1), text
    return parse_output(text, fmt)


def column(schema, rows, name, exact=False):
    i = schema.index(name)
    conv = F if exact else float
    return [conv(row[i]) for row in rows]


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, text, _ = run(*CASES[name])
    assert code == 0
    assert text.encode() == (GOLDEN / name).read_bytes()


def test_golden_contents_match_oracle_values():
    _, schema, rows = parse_output((GOLDEN / "basis_exact.csv").read_text(), "csv")
    assert rows[2] == ["1/2", "21/64", "21/64", "7/32", "1/8"]
    _, _, rows = parse_output((GOLDEN / "defect_exact.csv").read_text(), "csv")
    assert rows[0] == ["0", "-1/2"] and rows[-1] == ["1", "0"]
    _, _, rows = parse_output((GOLDEN / "nodes_exact.csv").read_text(), "csv")
    assert [r[1] for r in rows] == ["1/4", "1/2", "3/4"]


class TestBasis:
    def test_linear_rows(self):
        params, schema, rows = table("basis", "--n", "1", "--p", "0.9", "--q", "0.5", "--grid", "3")
        assert schema == ["x", "b_0", "b_1"]
        assert [[float(v) for v in r] for r in rows] == [[0, 1, 0], [0.5, 0.5, 0.5], [1, 0, 1]]
        assert params["n"] == 1

    def test_rows_sum_to_one(self):
        _, schema, rows = table("basis", "--n", "40", "--p", "0.95", "--q", "0.6", "--grid", "65")
        sums = np.array([[float(v) for v in r[1:]] for r in rows]).sum(axis=1)
        assert np.max(np.abs(sums - 1)) <= 1e-13

    def test_large_degree_no_underflow(self):
        _, _, rows = table("basis", "--n", "64", "--p", "0.9", "--q", "0.8", "--grid", "33")
        weights = np.array([[float(v) for v in r[1:]] for r in rows])
        assert np.all(np.isfinite(weights))
        assert np.all(weights[1:-1].max(axis=1) > 1e-3)
        # spot check against the exact backend at small degree
        _, _, exact = table("basis", "--n", "12", "--p", "9/10", "--q", "4/5", "--grid", "5", "--exact")
        _, _, fast = table("basis", "--n", "12", "--p", "0.9", "--q", "0.8", "--grid", "5")
        for re, rf in zip(exact, fast):
            for a, b in zip(re, rf):
                assert float(F(a)) == pytest.approx(float(b), abs=1e-15)
                assert (F(a) == 0) == (float(b) == 0)


class TestMoments:
    def test_columns(self):
        _, schema, rows = table("moments", "--n", "30", "--p", "0.95", "--q", "0.8", "--alpha", "0.5", "--beta", "2", "--grid", "9")
        assert schema == ["x", "m0", "m1", "m2", "c1", "c2", "m1_direct", "m2_direct"]
        assert column(schema, rows, "m0") == [1.0] * 9
        c1 = column(schema, rows, "c1")
        xs = column(schema, rows, "x")
        assert c1[xs.index(0.25)] == pytest.approx(0, abs=1e-16)
        assert c1[0] > 0 > c1[-1]

    def test_direct_twins(self):
        _, schema, rows = table("moments", "--n", "200", "--p", "0.99", "--q", "0.97", "--alpha", "1", "--beta", "2", "--grid", "33")
        for closed, direct in (("m1", "m1_direct"), ("m2", "m2_direct")):
            a, b = np.array(column(schema, rows, closed)), np.array(column(schema, rows, direct))
            assert np.max(np.abs(a - b)) <= 1e-12

    def test_exact(self):
        _, schema, rows = table("moments", "--n", "5", "--p", "3/4", "--q", "1/2", "--alpha", "1/3", "--beta", "1", "--grid", "5", "--exact")
        assert column(schema, rows, "m2", True) == column(schema, rows, "m2_direct", True)


class TestEval:
    def test_constant(self):
        _, schema, rows = table("eval", "--n", "50", "--p", "0.97", "--q", "0.9", "--alpha", "1", "--beta", "2", "--function", "1")
        assert max(column(schema, rows, "error")) <= 1e-13
        _, schema, rows = table("eval", "--n", "6", "--p", "3/4", "--q", "1/2", "--alpha", "1", "--beta", "2", "--function", "1", "--grid", "9", "--exact")
        assert set(column(schema, rows, "error", True)) == {0}

    def test_identity_unshifted(self):
        _, schema, rows = table("eval", "--n", "50", "--p", "0.97", "--q", "0.9", "--function", "t")
        assert max(column(schema, rows, "error")) <= 1e-13

    def test_kink_default_schedule(self):
        params, schema, rows = table("eval", "--n", "512", "--function", "abs:1/2")
        assert max(column(schema, rows, "error")) < 0.05
        assert float(params["p"]) == 1 - 513.0**-2

    def test_unknown_function(self):
        code, _, err = run("eval", "--n", "5", "--function", "sin")
        assert code == 2 and "unknown function" in err

    def test_missing_function(self):
        assert run("eval", "--n", "5")[0] == 2


class TestDefect:
    def test_last_row_zero(self):
        _, schema, rows = table("defect", "--n", "10", "--p", "0.9", "--q", "0.5", "--grid", "11")
        d = column(schema, rows, "defect")
        assert d[-1] == 0
        assert all(v < 0 for v in d[:-1])

    def test_degree_one(self):
        _, schema, rows = table("defect", "--n", "1", "--p", "3/4", "--q", "1/2", "--grid", "9", "--exact")
        assert set(column(schema, rows, "defect", True)) == {0}

    def test_frozen(self):
        _, schema, rows = table("defect", "--n", "2", "--p", "1/2", "--q", "1/4", "--grid", "3", "--exact")
        assert column(schema, rows, "defect", True)[0] == F(-1, 2)

    def test_p_one_is_usage_error(self):
        code, _, err = run("defect", "--n", "3", "--p", "1", "--q", "0.5")
        assert code == 2 and "p < 1" in err


class TestConverge:
    def test_constant_function(self):
        code, text, _ = run("converge", "--function", "1")
        assert code == 0
        _, schema, rows = parse_output(text, "csv")
        assert max(column(schema, rows, "err[monomial:0]")) <= 1e-13

    def test_monomials_converge(self):
        code, _, err = run("converge", "--function", "t", "--function", "t^2", "--alpha", "1", "--beta", "2", "--threshold", "0.02")
        assert code == 0 and "converged" in err

    def test_constant_schedule_fails(self):
        code, text, err = run("converge", "--schedule", "constant:0.5,0.4", "--function", "t^2")
        assert code == 1 and "not converged" in err
        _, schema, rows = parse_output(text, "csv")
        errors = column(schema, rows, "err[monomial:2]")
        assert abs(errors[-1] - errors[-2]) < 1e-6

    @pytest.mark.parametrize("n_list", ["8,4", "", "a,b", "0,5", "8,8", "5000"])
    def test_bad_n_list(self, n_list):
        assert run("converge", "--n-list", n_list)[0] == 2

    def test_bad_schedule(self):
        assert run("converge", "--schedule", "weird")[0] == 2


def test_deterministic():
    for argv in (CASES["moments.csv"], CASES["converge.csv"]):
        assert run(*argv)[1] == run(*argv)[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["basis", "--n", "7", "--p", "0.9", "--q", "0.6", "--grid", "9"],
        ["basis", "--n", "4", "--p", "1", "--q", "1/3", "--grid", "5", "--exact"],
        ["nodes", "--n", "9", "--p", "0.99", "--q", "0.9", "--alpha", "0.5", "--beta", "1"],
        ["moments", "--n", "16", "--p", "0.95", "--q", "0.7", "--alpha", "1", "--beta", "2", "--grid", "9"],
        ["eval", "--n", "20", "--function", "pwl:0:0,0.5:1,1:0", "--grid", "9"],
        ["defect", "--n", "6", "--p", "0.8", "--q", "0.4", "--grid", "9"],
        ["converge", "--n-list", "4,16", "--function", "abs:0.3", "--grid", "17"],
    ],
)
def test_csv_json_agree(argv):
    params_c, schema_c, rows_c = table(*argv, fmt="csv")
    params_j, schema_j, rows_j = table(*argv, fmt="json")
    assert params_c == params_j
    assert schema_c == schema_j
    assert len(rows_c) == len(rows_j)
    exact = "--exact" in argv
    for rc, rj in zip(rows_c, rows_j):
        for a, b in zip(rc, rj):
            if exact:
                assert F(a) == F(b)
            else:
                assert float(a) == float(b)


def test_csv_is_lossless():
    _, _, rows = table("basis", "--n", "9", "--p", "0.93", "--q", "0.41", "--grid", "7")
    from pqstancu.bernstein_stancu import OperatorConfig, basis_matrix
    from pqstancu.pq_core import PQParams

    weights = basis_matrix(OperatorConfig(9, PQParams(0.93, 0.41)), np.linspace(0, 1, 7))
    parsed = np.array([[float(v) for v in r[1:]] for r in rows])
    assert np.array_equal(parsed, weights)


def test_output_file(tmp_path):
    target = tmp_path / "out.csv"
    code, text, _ = run(*CASES["defect_exact.csv"], "--output", str(target))
    assert code == 0 and text == ""
    assert target.read_bytes() == (GOLDEN / "defect_exact.csv").read_bytes()
    assert run(*CASES["defect_exact.csv"], "--output", str(tmp_path / "missing" / "x.csv"))[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["basis"],
        ["basis", "--n", "3", "--p", "0.5", "--q", "0.8"],
        ["basis", "--n", "3", "--p", "0.9"],
        ["basis", "--n", "3", "--grid", "1"],
        ["basis", "--n", "0"],
        ["basis", "--n", "2000"],
        ["basis", "--n", "3", "--exact"],
        ["moments", "--n", "3", "--alpha", "2", "--beta", "1"],
        ["moments", "--n", "3", "--p", "nan", "--q", "0.5"],
        ["nodes", "--n", "3", "--alpha", "1e400", "--beta", "1e400"],
        ["eval", "--n", "3", "--function", "t", "--function", "t^2"],
        ["converge", "--threshold", "-1"],
        ["converge", "--exact"],
        ["bogus"],
        ["basis", "--n", "x"],
        ["basis", "--n", "3", "--format", "xml"],
    ],
)
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert out == ""
    assert "Traceback" not in err


TOKENS = st.sampled_from(
    ["0", "1", "-1", "0.5", "0.9", "1/2", "3/4", "2", "1e-9", "1e400", "nan", "inf", "abc", "", "9/0", "-0.3", "200", "8,16"]
)
FLAGS = st.sampled_from(
    ["--n", "--p", "--q", "--alpha", "--beta", "--grid", "--function", "--n-list", "--schedule", "--threshold", "--format"]
)
COMMANDS = st.sampled_from(["basis", "nodes", "moments", "eval", "defect", "converge"])


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(COMMANDS, st.lists(st.tuples(FLAGS, TOKENS), max_size=6), st.booleans())
def test_fuzz_never_crashes(command, pairs, exact):
    argv = [command]
    for flag, value in pairs:
        argv += [flag, value]
    if exact:
        argv.append("--exact")
    code, _, err = run(*argv)
    assert code in (0, 1, 2)
    assert "Traceback" not in err


def test_console_script():
    result = subprocess.run(
        [sys.executable, "-m", "pqstancu.cli", *CASES["nodes_exact.csv"]],
        capture_output=True,
        check=False,
    )
    assert result.returncode == 0
    assert result.stdout == (GOLDEN / "nodes_exact.csv").read_bytes()
