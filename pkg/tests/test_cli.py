import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flagberg import cli, potential
from flagberg.cli import ConfigError, emit, load_report, main, parse_config, run
from flagberg.polycore import Poly


def _cfg(**job):
    base = {"group": "A1", "black": [1], "xi": "KE", "samples": 3, "seed": 1}
    base.update(job)
    return json.dumps({"jobs": [base]})


def test_parse_valid():
    cfg = parse_config(
        '{"jobs":[{"group":"A2","black":[1,2],"xi":"KE","checks":["diastasis","einstein"],'
        '"samples":10,"trunc":200,"seed":7}]}'
    )
    (job,) = cfg.jobs
    assert job.group == "A2" and job.black == (1, 2) and job.seed == 7
    assert job.checks == ("diastasis", "einstein")


@pytest.mark.parametrize(
    "text,needle",
    [
        (_cfg(black=[1, 5], group="A2"), "jobs[0].black[1]"),
        (_cfg(xi=[1, 2]), "jobs[0].xi"),
        (_cfg(group="E6"), "jobs[0].group"),
        (_cfg(checks=["bogus"]), "jobs[0].checks"),
        (_cfg(colour="red"), "colour"),
        ('{"jobs": [}', "line 1"),
        ('{"jobs": []}\n{', "line 2"),
        ('{"jobs": [], "extra": 1}', "extra"),
        ("[]", "object"),
    ],
)
def test_parse_errors(text, needle):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert needle in str(exc.value)


def test_xi_fractions():
    (job,) = parse_config(_cfg(group="A2", black=[1, 2], xi=["3/2", 1])).jobs
    assert job.xi == (pytest.approx(1.5), 1)


def test_cp1_full_run():
    report = run(parse_config(_cfg(checks=list(cli.CHECKS))))
    (job,) = report.jobs
    assert all(c.status == "pass" for c in job.checks.values()), emit(report)
    assert job.checks["dims"].constants["d"] == ["-1", "2"]
    assert job.checks["q"].constants["c_KE"] == ["2"]
    assert not report.failed


def test_non_ke_skips_kernel():
    report = run(parse_config(_cfg(group="A2", black=[1, 2], xi=[2, 1], checks=["einstein", "kernel"])))
    checks = report.jobs[0].checks
    assert checks["einstein"].status == "fail"
    assert checks["kernel"].status == "skipped"
    assert checks["diastasis"].status == "pass"  # implicit prerequisite


def test_unsupported_flag_fails_cleanly():
    report = run(parse_config(_cfg(group="D4", black=[3], checks=["diastasis"])))
    res = report.jobs[0].checks["diastasis"]
    assert res.status == "fail" and res.witness


def test_diastasis_witness_in_json(monkeypatch):
    bad = [Poly.parse(1, "1 + z1 + z1*w1")]
    real = potential.check_diastasis
    monkeypatch.setattr(potential, "check_diastasis", lambda pd: real(bad))
    text = emit(run(parse_config(_cfg(checks=["diastasis"]))), "json")
    assert json.loads(text)["jobs"][0]["checks"]["diastasis"]["witness"] == "P1: z1"


def test_determinism():
    cfg = parse_config(_cfg(group="A2", black=[1, 2], checks=["einstein", "kernel"], seed=3))
    assert emit(run(cfg), "json") == emit(run(cfg), "json")


def test_json_schema_keys():
    data = json.loads(emit(run(parse_config(_cfg(checks=["roots"]))), "json"))
    assert set(data) == {"version", "jobs"}
    job = data["jobs"][0]
    assert set(job) == {"id", "group", "black", "xi", "checks"}
    assert {"status", "ms"} <= set(job["checks"]["roots"])


def test_table():
    text = emit(run(parse_config(_cfg(checks=["roots"]))), "table")
    assert "PASS" in text and text.rstrip().endswith("overall: PASS")


@settings(max_examples=8)
@given(st.sampled_from(cli.CHECKS[:-1]), st.sampled_from([[2, 2], [2, -1], [1, 1], "KE"]))
def test_roundtrip_status_vector(check, xi):
    report = run(parse_config(_cfg(group="A2", black=[1, 2], xi=xi, checks=[check], samples=1)))
    assert load_report(emit(report, "json")).status_vector() == report.status_vector()


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(_cfg(checks=["roots", "q"]))
    out = tmp_path / "out.json"
    assert main(["run", "--config", str(good), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["jobs"][0]["checks"]["q"]["status"] == "pass"

    bad = tmp_path / "bad.json"
    bad.write_text(_cfg(group="A2", black=[1, 2], xi=[2, 1], checks=["einstein"]))
    assert main(["run", "--config", str(bad), "--format", "table"]) == 1
    assert "FAIL" in capsys.readouterr().out

    empty = tmp_path / "empty.json"
    empty.write_text('{"jobs": []}')
    assert main(["run", "--config", str(empty)]) == 0

    broken = tmp_path / "broken.json"
    broken.write_text('{"jobs": [{"group": "A1"}]}')
    assert main(["run", "--config", str(broken)]) == 2


def test_describe(capsys):
    assert main(["describe", "A2", "--black", "1,2"]) == 0
    out = capsys.readouterr().out
    assert "R_M" in out and "Q" in out
