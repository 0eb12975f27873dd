import io
import json

import pytest

from floorlab import cli
from floorlab.cli import CampaignConfig, RunResult, UsageError, main
from floorlab.torus_lab import read_dump_csv

GOLDEN = "root([-1,-1,1],1,2)"
SQRT2 = "root([-2,0,1],1,2)"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stream=out)
    return code, out.getvalue()


def test_verify_golden():
    code, text = run("verify", "--variant", "main", "--l", "1", "--k", "1", "--alpha", GOLDEN, "--n", "2000")
    d = json.loads(text)
    assert code == 0
    assert d["verdicts"]["condition"] is True and d["verdicts"]["violation_count"] == 0
    assert d["verdicts"]["status"] == "agree"


def test_verify_sqrt2():
    code, text = run("verify", "--alpha", SQRT2, "--n", "100")
    d = json.loads(text)
    assert code == 0
    assert d["verdicts"]["condition"] is False and d["verdicts"]["first_violation"] == 2
    assert {"n": 2, "lhs": 3, "rhs": 4, "residual": -1} in d["violations"]


def test_verify_poly_undistinguished():
    code, text = run("verify", "--variant", "poly", "--poly", "1,4", "--alpha", "3/2", "--n", "10000")
    d = json.loads(text)
    assert code == 0
    assert d["verdicts"]["condition"] is False
    assert d["verdicts"]["violation_count"] == 0
    assert d["verdicts"]["status"] == "undistinguished"


def test_verify_hard_disagreement_exit_code(monkeypatch):
    from floorlab.identity_engine import ResidualReport, ScanSummary

    fake = ScanSummary(checked=10, skipped=0, violation_count=1, violations=(ResidualReport(3, 1, 2, -1, False),),
                       first_violation=ResidualReport(3, 1, 2, -1, False), cap=1000)
    monkeypatch.setattr(cli, "scan_identity", lambda *a, **k: fake)
    code, text = run("verify", "--alpha", GOLDEN, "--n", "5")
    assert code == 2
    assert json.loads(text)["verdicts"]["status"] == "disagreement"


@pytest.mark.parametrize(
    "argv,field",
    [
        (["verify", "--alpha", "x^2", "--n", "3"], "alpha"),
        (["verify", "--alpha", GOLDEN], "n"),
        (["verify", "--variant", "quux", "--alpha", GOLDEN, "--n", "3"], "variant"),
        (["verify", "--variant", "delta", "--alpha", GOLDEN, "--n", "3"], "delta"),
        (["verify", "--variant", "delta", "--delta", "3/2", "--alpha", GOLDEN, "--n", "3"], "delta"),
        (["verify", "--variant", "poly", "--poly", "1,x", "--alpha", GOLDEN, "--n", "3"], "poly"),
        (["verify", "--variant", "pair", "--alpha", GOLDEN, "--n", "3"], "beta"),
        (["verify", "--alpha", "root([-2,0,1],-2,2)", "--n", "3"], "alpha"),
        (["scan", "--alpha", GOLDEN, "--n-lo", "5", "--n-hi", "1"], "n-lo"),
        (["enumerate", "--l-max", "0"], "l-max"),
        (["dist", "--alpha", "3/2"], "alpha"),
        (["weyl", "--theta", SQRT2, "--k", "0"], "k"),
        (["weyl", "--k", "1"], "theta"),
        (["fig", "fig9"], "figure"),
        (["search-triple", "--n-max", "0"], "n-max"),
        (["nonsense"], "invalid choice"),
        ([], "subcommand"),
    ],
)
def test_usage_errors(argv, field, capsys):
    code, _ = run(*argv)
    assert code == 1
    assert field in capsys.readouterr().err


def test_scan_range():
    code, text = run("scan", "--alpha", SQRT2, "--n-lo", "1", "--n-hi", "10")
    d = json.loads(text)
    assert code == 0 and d["verdicts"]["first_violation"] == 2 and d["verdicts"]["checked"] == 10


def test_scan_delta_half():
    code, text = run("scan", "--variant", "delta", "--delta", "1/2", "--alpha", GOLDEN, "--n-lo", "1", "--n-hi", "10")
    assert json.loads(text)["verdicts"]["first_violation"] == 3


def test_enumerate_examples():
    def fams(l, k, m):
        code, text = run("enumerate", "--l-max", str(l), "--k-max", str(k), "--m-max", str(m), "--quick-n", "50")
        assert code == 0
        return [r for r in json.loads(text)["verdicts"]["families"] if (r["l"], r["k"], r["m"]) == (l, k, m)]

    (g,) = fams(1, 1, 1)
    assert g["M"] == 1 and g["alpha"].startswith("root([-1,-1,1]")
    rows = fams(1, 1, 2)
    assert [r["M"] for r in rows] == [1, 2]
    assert [r["approx"][:6] for r in rows] == ["2.4142", "2.7320"]
    rows = fams(2, 1, 1)
    assert [r["M"] for r in rows] == [1, 2, 3]
    assert all(r["alpha"].startswith(f"root([-{r['M']},0,-1,1]") for r in rows)
    assert all(r["quick_scan"]["violations"] == 0 for r in rows)


def test_enumerate_full_count():
    code, text = run("enumerate", "--l-max", "3", "--k-max", "3", "--m-max", "3", "--quick-n", "0")
    assert json.loads(text)["verdicts"]["count"] == 165


def test_dist():
    code, text = run("dist", "--alpha", "root([-1,-2,1],2,3)", "--m", "2", "--N", "100000")
    d = json.loads(text)["verdicts"]
    assert code == 0 and d["within_tolerance"] and sum(d["counts"]) == 100000


def test_weyl_cli():
    code, text = run("weyl", "--linear", "--theta", SQRT2, "--k", "1", "--N", "10000")
    assert code == 0 and json.loads(text)["verdicts"]["magnitude"] <= 0.01
    code, text = run("weyl", "--poly", "--coeff", "0", "--coeff", "0", "--coeff", SQRT2, "--k", "1", "--N", "3000")
    assert code == 0 and json.loads(text)["verdicts"]["magnitude"] <= 0.05


def test_orbit_rational(tmp_path):
    code, text = run("orbit", "--alpha", "3/2", "--l", "1", "--k", "1", "--n", "20")
    recs = read_dump_csv(text)
    assert code == 0 and len(recs) == 20
    assert [r.x for r in recs[:4]] == ["0.5", "0", "0.5", "0"]
    assert all(r.x == recs[i % 2].x for i, r in enumerate(recs))
    out = tmp_path / "o.csv"
    assert run("orbit", "--alpha", GOLDEN, "--n", "5", "--out", str(out))[0] == 0
    assert all(r.band == 1 for r in read_dump_csv(out.read_text()))


def test_run_result_roundtrip(tmp_path):
    out = tmp_path / "r.json"
    code, text = run("verify", "--alpha", SQRT2, "--n", "50", "--out", str(out))
    assert out.read_text() == text
    loaded = RunResult.from_json(text)
    assert loaded.to_json() == text
    code2, text2 = run("verify", "--alpha", SQRT2, "--n", "50")
    assert RunResult.from_json(text2).without_timing() == loaded.without_timing() | {"config": loaded.config | {"out": None}}


def test_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"variant": "main", "alpha": SQRT2, "n": 20}))
    code, text = run("verify", "--config", str(cfg))
    assert code == 0 and json.loads(text)["verdicts"]["first_violation"] == 2
    cfg.write_text(json.dumps({"variant": "main", "alpha": SQRT2, "n": 20, "colour": "red"}))
    assert run("verify", "--config", str(cfg))[0] == 1
    with pytest.raises(UsageError, match="colour"):
        CampaignConfig.from_dict({"colour": 1})


def test_worker_env_determinism(monkeypatch):
    argv = ("verify", "--alpha", "3/2", "--n", "4000", "--cap", "30")
    monkeypatch.setenv("FLOORLAB_WORKERS", "1")
    one = RunResult.from_json(run(*argv)[1])
    monkeypatch.setenv("FLOORLAB_WORKERS", "2")
    two = RunResult.from_json(run(*argv)[1])
    a, b = one.without_timing(), two.without_timing()
    assert a["config"].pop("workers") == 1 and b["config"].pop("workers") == 2
    assert a == b


def test_fig_outputs(tmp_path):
    code, text = run("fig", "fig1-right", "--out", str(tmp_path))
    s = json.loads(text)
    assert code == 0 and s["outside"] > 0 and s["line_support"]["slope"] == "2"
    recs = read_dump_csv((tmp_path / "fig1-right.csv").read_text())
    assert len(recs) == 100
    assert (tmp_path / "fig1-right_lines.csv").read_text().startswith("curve,x0,y0,x1,y1")


def test_search_triple_small():
    code, text = run("search-triple", "--A", "1", "--n-max", "100")
    d = json.loads(text)["verdicts"]
    assert code == 0
    assert all(r["oracle_confirmed"] for r in d["violated"])
    by_cubic = {tuple(c): r for r in d["violated"] for c in r["cubics"]}
    assert by_cubic[(1, 1, 1)]["first_violation"] == 1
    assert by_cubic[(1, 1, 0)]["first_violation"] == 1  # golden via x(x^2 - x - 1)
    assert "characteriz" not in json.dumps(d["violated"])
