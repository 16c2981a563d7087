import json
import math

from dyadic_schrodinger.report import Case, VerificationReport


def test_case_pass_flag():
    assert Case("a", "x", 1e-13, 1e-12).passed
    assert not Case("a", "x", 2e-12, 1e-12).passed
    assert not Case("a", "x", math.nan, 1.0).passed
    assert not Case("a", "x", -1.0, 1.0).passed
    assert "FAIL" in Case("a", "x", 1.0, 0.0).line()


def test_report_json_round_trip():
    r = VerificationReport("verify", [Case("a", "x", 0.0, 1e-12), Case("b", "y", 1.0, 0.5)], seconds=0.5)
    assert not r.passed and [c.id for c in r.failing()] == ["b"]
    data = json.loads(r.to_json())
    assert set(data) == {"version", "suite", "cases", "pass", "seconds"}
    assert set(data["cases"][0]) == {"id", "anchor", "residual", "tol", "pass"}
    back = VerificationReport.from_dict(data)
    assert back.to_dict() == r.to_dict()
    assert VerificationReport("empty").passed
