import io
import json
import subprocess
import sys

import pytest

from wallseries import cli, lie
from wallseries.cyclotomic import CyclotomicInt
from wallseries.series import TruncatedSeries


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv,text", [
    (["series", "orbifold", "--kind", "A1", "--trunc", "0"], "1"),
    (["series", "coarse", "--kind", "A1", "--trunc", "3"], "1 + q + 3*q^2 + 5*q^3"),
    (["series", "cyclic", "--p", "1", "--trunc", "5"], "1 + q + 2*q^2 + 3*q^3 + 5*q^4 + 7*q^5"),
])
def test_documented_outputs(argv, text):
    code, out, _ = call(*argv)
    assert code == 0 and out == text + "\n"


def test_verify_echoes_vectors():
    code, out, _ = call("verify", "coarse-d", "--n", "4", "--trunc", "6")
    assert code == 0
    assert "lhs: 1 1 3 5 11 18 32" in out and "rhs: 1 1 3 5 11 18 32" in out


def test_verify_e_is_labelled():
    code, out, _ = call("verify", "conjectural-e", "--kind", "E6", "--trunc", "10")
    assert code == 0 and out.rstrip().endswith("status: conjectural")
    code, out, _ = call("series", "coarse", "--kind", "E7", "--trunc", "4")
    assert code == 0 and "conjectural" in out


def test_verify_failure_reports_difference(monkeypatch):
    monkeypatch.setattr(cli.cyclic, "jacobi_product", lambda N: cli.cyclic.jacobi_sum(N).scale(2))
    code, out, _ = call("verify", "jacobi", "--trunc", "3")
    assert code == 1 and "first difference" in out


@pytest.mark.parametrize("argv", [
    ["series", "coarse", "--kind", "A1", "--trunc", "-1"],
    ["series", "coarse", "--kind", "B3"],
    ["series", "coarse", "--kind", "A1", "--method", "tl"],
    ["series", "cyclic"],
    ["series", "cyclic", "--p", "0"],
    ["series", "global", "--sing", "Q7"],
    ["series", "nonsense"],
    ["verify", "no-such-identity"],
    ["verify", "triangle"],
    ["series", "higher-rank", "--kind", "A2", "--shifts", "0,x"],
    ["enumerate", "walls", "--kind", "A2"],
    [],
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err.startswith("error:")


def _non_integral(data, N):
    m = data.coxeter + 1
    return TruncatedSeries(("q",), N, {(0,): CyclotomicInt.zeta(m, 1)}, order=m)


def test_integrality_exit_codes(monkeypatch):
    monkeypatch.setattr(lie, "_coarse_via_series", _non_integral)
    monkeypatch.setattr(lie, "_coarse_streamed", _non_integral)
    assert call("series", "coarse", "--kind", "D4", "--trunc", "2")[0] == 3
    assert call("series", "coarse", "--kind", "E6", "--trunc", "2")[0] == 4


@pytest.mark.parametrize("argv", [
    ["series", "orbifold", "--kind", "A2", "--trunc", "4"],
    ["series", "orbifold", "--kind", "D4", "--trunc", "4", "--method", "enumerate"],
    ["series", "coarse", "--kind", "D5", "--trunc", "6"],
    ["series", "higher-rank", "--kind", "A2", "--shifts", "0,1", "--trunc", "4"],
    ["series", "global", "--chi", "2", "--sing", "A1", "D4", "P3", "--trunc", "6"],
])
def test_json_round_trip(argv):
    code, text, _ = call(*argv)
    code_j, js, _ = call(*argv, "--json")
    assert code == code_j == 0
    rec = json.loads(js)
    assert rec.pop("status") == "proven"
    s = TruncatedSeries.from_record(rec)
    assert s.to_text() + "\n" == text
    assert TruncatedSeries.from_json(s.to_json()) == s


def test_enumerate_outputs():
    code, out, _ = call("enumerate", "partitions", "--kind", "A1", "--trunc", "3")
    assert code == 0 and out.splitlines()[-1] == "total 7"
    code, out, _ = call("enumerate", "walls", "--kind", "D4", "--trunc", "2", "--json")
    assert code == 0 and all("distinguished" in r for r in json.loads(out))


def _cli(*argv):
    r = subprocess.run([sys.executable, "-m", "wallseries", *argv], capture_output=True, check=False)
    return r.returncode, r.stdout


@pytest.mark.parametrize("argv", [
    ["series", "coarse", "--kind", "E6", "--trunc", "8", "--json"],
    ["verify", "fountains", "--p", "2", "--trunc", "8"],
    ["enumerate", "walls", "--kind", "D4", "--trunc", "4"],
])
def test_byte_identical_runs(argv):
    assert _cli(*argv) == _cli(*argv)


def test_jobs_do_not_change_output():
    base = _cli("enumerate", "fountains", "--p", "2", "--trunc", "12", "--jobs", "1")
    assert base[0] == 0
    assert _cli("enumerate", "fountains", "--p", "2", "--trunc", "12", "--jobs", "3") == base
