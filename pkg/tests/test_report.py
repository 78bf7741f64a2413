import json
from pathlib import Path

import pytest

from scaffoldlab.errors import ConfigError, PrecisionExhausted
from scaffoldlab.report import STAGES, analyze, load_config, parse_config, render_report

HERE = Path(__file__).parent
CONFIGS = HERE / "configs"
GOLDEN = HERE / "golden"


def cfg(**kw):
    base = {"p": 2, "n": 2, "beta": ["t^-1", "t^-3"]}
    base.update(kw)
    return parse_config(base)


def test_load_family_A():
    c = load_config(CONFIGS / "family_A.json")
    assert (c.p, c.n, c.beta, c.verify_scaffold) == (2, 2, ["t^-1", "t^-3"], True)


@pytest.mark.parametrize(
    "data,field",
    [
        ({"p": 2, "n": 2, "beta": ["t^-1"]}, "beta"),
        ({"p": 4, "n": 2, "beta": ["t^-1", "t^-3"]}, "p"),
        ({"n": 2, "beta": ["t^-1", "t^-3"]}, "p"),
        ({"p": 2, "beta": ["t^-1", "t^-3"]}, "n"),
        ({"p": 2, "n": 2}, "beta"),
        ({"p": "2", "n": 2, "beta": ["t^-1", "t^-3"]}, "p"),
        ({"p": 2, "n": 2, "beta": ["t^-1", "t^-3"], "omega": ["1"]}, "omega"),
        ({"p": 2, "n": 2, "beta": ["t^-1", "t^-3"], "verify": {"scaffold": "yes"}}, "verify.scaffold"),
        ({"p": 2, "n": 2, "beta": ["t^-1", "t^-3"], "verify": {"window": [3, 1]}}, "verify.window"),
        ({"p": 2, "n": 2, "beta": ["t^-1", "t^-3"], "c_test": 2}, "c_test"),
        ({"p": 2, "n": 5, "beta": ["t^-1"] * 5}, "n"),
        ({"p": 2, "n": 8, "beta": ["t^-1"] * 8, "verify": {"scaffold": False}}, "n"),
        ({"p": 2, "n": 2, "beta": ["t^-1", "t^-3 +"]}, "beta[1]"),
    ],
)
def test_config_errors(data, field):
    with pytest.raises(ConfigError) as info:
        parse_config(data)
    assert info.value.field == field


def test_prime_message():
    with pytest.raises(ConfigError, match="p must be prime"):
        parse_config({"p": 4, "n": 2, "beta": ["t^-1", "t^-3"]})


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(bad)


def test_analyze_family_A():
    r = analyze(load_config(CONFIGS / "family_A.json"))
    assert r["eligible"] and r["reduced"]
    assert (r["u"], r["b"], r["m"]) == ([1, 3], [1, 5], [0, 1])
    assert r["precision_c"] == 1 and r["vLY"] == -5
    assert r["cofactor_valuations"] == [-1, 0]
    assert r["gms"]["verdict"] == "free" and r["hopf"]["verdict"] == "unknown"
    assert r["certificate"]["valid"]
    assert r["diagnostics"]["stages"] == list(STAGES)
    assert r["diagnostics"]["break_oracle"]["agrees"]


def test_analyze_family_B():
    r = analyze(load_config(CONFIGS / "family_B.json"))
    assert r["precision_c"] == 3
    assert r["gms"]["verdict"] == "free" and r["hopf"]["verdict"] == "hopf"


def test_analyze_ineligible():
    r = analyze(load_config(CONFIGS / "ineligible.json"))
    assert not r["eligible"]
    assert "gms" not in r and "hopf" not in r
    assert r["certificate"] == {} and r["vLY"] is None
    failed = {c["name"] for c in r["assumption_report"]["checks"] if not c["ok"]}
    assert "break_gap" in failed
    assert r["diagnostics"]["stages"] == list(STAGES[:5])
    assert "verdict: not applicable" in render_report(r, "text").decode()


def test_no_verification():
    r = analyze(cfg(verify={"scaffold": False}))
    assert r["certificate"] == {}
    assert "verification" not in r["diagnostics"]["stages"]
    assert r["gms"]["verdict"] == "free"


def test_n1_unbounded():
    r = analyze(parse_config({"p": 3, "n": 1, "beta": ["t^-2"]}))
    assert r["precision_c"] == "unbounded"
    assert r["certificate"]["precision_c"] == 2  # c_test defaults to b_1
    r = analyze(parse_config({"p": 3, "n": 1, "beta": ["t^-2"], "c_test": 1}))
    assert r["certificate"]["precision_c"] == 1 and r["certificate"]["valid"]


def test_large_degree_skips_tower():
    beta = ["t^-1", "t^-17", "t^-161", "t^-737", "t^-1889"]
    r = analyze(parse_config({"p": 2, "n": 5, "beta": beta, "verify": {"scaffold": False}}))
    assert r["eligible"] and r["vLY"] is None and r["precision_c"] == 1
    assert "tower" not in r["diagnostics"]["stages"]
    assert any("tower stages skipped" in note for note in r["diagnostics"]["notes"])


def test_non_reduced_is_config_error():
    with pytest.raises(ConfigError):
        analyze(cfg(beta=["t^-2", "t^-3"]))


def test_inexact_beta_rejected():
    with pytest.raises(ConfigError):
        analyze(cfg(beta=["t^-1 + O(t^4)", "t^-3"]))


def test_precision_retry():
    c = load_config(CONFIGS / "family_D.json")
    r = analyze(c, precision=40)
    assert r["certificate"]["valid"]
    assert [a["precision"] for a in r["diagnostics"]["retries"]] == [40, 80]
    assert r["diagnostics"]["precision"] == 160
    with pytest.raises(PrecisionExhausted):
        analyze(c, precision=1)


def test_window_override():
    r = analyze(cfg(), window=(0, 4))
    assert r["certificate"]["window"] == [0, 4]
    assert r["certificate"]["counts"]["iv"] == {"passed": 8, "total": 8}


def test_text_render():
    text = render_report(analyze(cfg()), "text").decode()
    for key in ("upper breaks:", "precision c:", "verdict:"):
        assert key in text
    with pytest.raises(ValueError):
        render_report({}, "yaml")


def test_deterministic():
    c = load_config(CONFIGS / "family_A.json")
    assert render_report(analyze(c)) == render_report(analyze(c))


@pytest.mark.parametrize("name", ["A", "B"])
def test_golden(name):
    report = analyze(load_config(CONFIGS / f"family_{name}.json"))
    got = render_report(report, "json")
    assert got == (GOLDEN / f"family_{name}.json").read_bytes()
    json.loads(got)
