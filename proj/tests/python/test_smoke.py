import json
import math
import os
import subprocess

import pytest

import bdelta

ANCHOR = [(100, 30), (200, 33), (400, 36), (800, 38)]


def scaled(points, k=1.0, dq=0.0):
    return [(r * k, q + dq) for r, q in points]


def test_bd_rate_doubled():
    a = bdelta.RdCurve("a", ANCHOR)
    b = bdelta.RdCurve("b", scaled(ANCHOR, 2.0))
    for method in (bdelta.FitMethod.CubicFit, bdelta.FitMethod.PiecewiseCubic):
        r = bdelta.bd_rate(a, b, method)
        assert r.value == pytest.approx(100.0, rel=1e-12)
        assert r.display == "100.0%"


def test_bd_quality_offset_and_weighted():
    a = bdelta.RdCurve("a", ANCHOR)
    b = bdelta.RdCurve("b", scaled(ANCHOR, dq=1.0))
    assert bdelta.bd_quality(a, b).value == pytest.approx(1.0, abs=1e-9)
    pdf = bdelta.RatePdf.uniform(100, 800)
    w = bdelta.bd_quality_weighted(a, b, bdelta.FitMethod.PiecewiseCubic, pdf)
    assert w.value == pytest.approx(1.0, abs=1e-9)


def test_errors_are_typed():
    with pytest.raises(bdelta.BdError) as info:
        bdelta.RdCurve("a", [(100, 30), (100, 31)])
    assert info.value.code == "DuplicateRate"


def test_mode_sentinel():
    a = bdelta.RdCurve("a", ANCHOR)
    b = bdelta.RdCurve("b", scaled(ANCHOR, 0.5, 10.0))
    r = bdelta.bd_rate_with_mode(a, b, mode=bdelta.BdMode.None_)
    assert r.value == -100.0
    assert r.diagnostics.has_lint("NO_OVERLAP")


def test_fit_and_integrate():
    f = bdelta.fit_curve(bdelta.FitMethod.PiecewiseCubic, [0.0, 1.0], [0.0, 2.0])
    assert f(0.5) == pytest.approx(1.0)
    assert f.integrate(0.0, 1.0) == pytest.approx(1.0)


def _csv(tmp_path):
    rows = ["sequence,codec,metric,rate_kbps,quality"]
    rows += [f"s,A,PSNR,{r},{q}" for r, q in ANCHOR]
    rows += [f"s,B,PSNR,{r},{q}" for r, q in scaled(ANCHOR, 2.0)]
    path = tmp_path / "m.csv"
    path.write_text("\n".join(rows) + "\n")
    return path


def test_run_cli_in_process(tmp_path):
    path = _csv(tmp_path)
    code, out, err = bdelta.run_cli(["compute", "-i", str(path), "-a", "A", "-t", "B"])
    assert code == 0
    doc = json.loads(out)
    assert doc["bd_report_version"] == 1
    assert [r["kind"] for r in doc["results"]] == ["BD-Rate", "BD-Quality"]
    assert math.isclose(doc["results"][0]["value"], 100.0, rel_tol=1e-12)
    canonical = bdelta.parse_csv_roundtrip(path.read_text())
    assert bdelta.parse_csv_roundtrip(canonical) == canonical


def test_cli_binary(tmp_path):
    exe = os.environ.get("BDELTA_CLI")
    if not exe:
        pytest.skip("BDELTA_CLI not set")
    path = _csv(tmp_path)
    proc = subprocess.run([exe, "compute", "-i", str(path), "-a", "A", "-t", "B", "-f", "md"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "100.0%" in proc.stdout
    usage = subprocess.run([exe, "compute"], capture_output=True, text=True)
    assert usage.returncode == 64
