"""Case configuration, the analysis pipeline and report rendering."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError, ContractViolation, PrecisionExhausted
from .ramification import (
    AssumptionReport,
    Check,
    DecompositionError,
    break_oracle,
    check_assumptions,
    check_reduced,
    compute_breaks,
    decompose,
    find_uniformizer,
)
from .scaffold import (
    ScaffoldBuilder,
    cofactors,
    conjugate_rank,
    gms_verdict,
    hopf_verdict,
    scaffold_precision,
)
from .series import PrimeField, is_prime, parse_series
from .tower import MAX_TOWER_DEGREE, TowerConfig, build_tower
from .witt import MAX_WITT_DEGREE

log = logging.getLogger(__name__)

__all__ = ["CaseConfig", "load_config", "parse_config", "analyze", "render_report", "default_precision"]

STAGES = (
    "parse",
    "reduce-check",
    "breaks",
    "decompose",
    "assumptions",
    "tower",
    "generator",
    "precision",
    "verification",
    "verdicts",
)
MAX_RETRIES = 3


@dataclass
class CaseConfig:
    p: int
    n: int
    beta: list[str]
    omega: list[str] | None = None
    series_precision: int | None = None
    verify_scaffold: bool = True
    window: tuple[int, int] | None = None
    c_test: int | None = None
    source: str | None = None

    def echo(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "beta": list(self.beta),
            "omega": None if self.omega is None else list(self.omega),
            "series_precision": self.series_precision,
            "verify": {"scaffold": self.verify_scaffold, "window": None if self.window is None else list(self.window)},
            "c_test": self.c_test,
        }


def _req_int(d: dict, key: str, path: str) -> int:
    if key not in d:
        raise ConfigError("missing field", field=path)
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"expected an integer, got {type(v).__name__}", field=path)
    return v


def _opt_int(d: dict, key: str, path: str) -> int | None:
    if d.get(key) is None:
        return None
    return _req_int(d, key, path)


def _series_list(d: dict, key: str, n: int) -> list[str]:
    v = d[key]
    if not isinstance(v, list) or not all(isinstance(s, str) for s in v):
        raise ConfigError("expected a list of series strings", field=key)
    if len(v) != n:
        raise ConfigError(f"expected {n} entries, got {len(v)}", field=key)
    return list(v)


def parse_config(data: Any, source: str | None = None) -> CaseConfig:
    """Validate a decoded JSON object; errors name the offending field."""
    if not isinstance(data, dict):
        raise ConfigError("top level must be a JSON object")
    p = _req_int(data, "p", "p")
    n = _req_int(data, "n", "n")
    if not is_prime(p):
        raise ConfigError("p must be prime", field="p")
    if n < 1:
        raise ConfigError("n must be at least 1", field="n")
    if "beta" not in data:
        raise ConfigError("missing field", field="beta")
    beta = _series_list(data, "beta", n)
    omega = _series_list(data, "omega", n) if data.get("omega") is not None else None
    sp = _opt_int(data, "series_precision", "series_precision")
    if sp is not None and sp < 1:
        raise ConfigError("must be positive", field="series_precision")
    verify = data.get("verify", {}) or {}
    if not isinstance(verify, dict):
        raise ConfigError("expected an object", field="verify")
    scaffold = verify.get("scaffold", True)
    if not isinstance(scaffold, bool):
        raise ConfigError("expected a boolean", field="verify.scaffold")
    window = verify.get("window")
    if window is not None:
        if (
            not isinstance(window, list)
            or len(window) != 2
            or not all(isinstance(w, int) and not isinstance(w, bool) for w in window)
        ):
            raise ConfigError("expected [lo, hi] integers", field="verify.window")
        if window[0] >= window[1]:
            raise ConfigError("empty window", field="verify.window")
        window = (window[0], window[1])
    c_test = _opt_int(data, "c_test", "c_test")
    if c_test is not None:
        if n != 1:
            raise ConfigError("only allowed when n = 1", field="c_test")
        if c_test < 1:
            raise ConfigError("must be positive", field="c_test")
    cap = MAX_TOWER_DEGREE if scaffold else MAX_WITT_DEGREE
    if p**n > cap:
        raise ConfigError(f"p^n = {p**n} exceeds {cap}", field="n")
    field_ = PrimeField(p)
    for key, items in (("beta", beta), ("omega", omega or [])):
        for i, s in enumerate(items):
            try:
                parse_series(s, field_)
            except ConfigError as exc:
                raise ConfigError(str(exc), field=f"{key}[{i}]") from exc
    return CaseConfig(p, n, beta, omega, sp, scaffold, window, c_test, source)


def load_config(path: str | Path) -> CaseConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc.msg} (line {exc.lineno})") from exc
    return parse_config(data, str(path))


def default_precision(p: int, n: int, u_n: int) -> int:
    return 4 * p**n * u_n + 64


# -- pipeline -----------------------------------------------------------------


@dataclass
class _Run:
    cfg: CaseConfig
    precision: int
    stages: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def stage(self, name: str):
        self.stages.append(name)
        log.debug("stage %s", name)


def _jsonable(x):
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return int(x)
    return x


def _require(checks: list[Check], what: str):
    bad = [c for c in checks if not c.ok]
    if bad:
        raise ContractViolation(f"{what}: " + "; ".join(f"{c.name}[{c.index}] lhs={c.lhs} rhs={c.rhs}" for c in bad))


def _analyze_once(cfg: CaseConfig, precision: int, window=None, psi_choice="truncated-exp") -> dict:
    run = _Run(cfg, precision)
    p, n = cfg.p, cfg.n
    run.stage("parse")
    beta = [parse_series(s, p) for s in cfg.beta]
    omega = [parse_series(s, p) for s in cfg.omega] if cfg.omega is not None else None
    if any(not b.is_exact for b in beta):
        raise ConfigError("beta entries must be exact (no O(t^N) term)", field="beta")

    report: dict[str, Any] = {"config": cfg.echo()}
    run.stage("reduce-check")
    reduced, bad = check_reduced(beta, p)
    report["reduced"] = reduced
    if not reduced:
        raise ConfigError(f"beta is not reduced at coordinates {[d['index'] for d in bad]}", field="beta")
    v0 = beta[0].valuation()
    if not v0.value < 0:
        raise ConfigError("v(beta_0) must be negative (totally ramified case)", field="beta")

    run.stage("breaks")
    breaks = compute_breaks(beta, p)
    report["u"], report["b"], report["m"] = list(breaks.u), list(breaks.b), breaks.m and list(breaks.m)
    if breaks.m_error:
        run.notes.append(breaks.m_error)

    run.stage("decompose")
    try:
        dec = decompose(beta, p, omega)
    except DecompositionError as exc:
        dec = None
        run.notes.append(f"decomposition failed: {exc}")

    run.stage("assumptions")
    assumptions: AssumptionReport = check_assumptions(breaks, dec, beta)
    report["assumption_report"] = assumptions.to_dict()
    report["eligible"] = assumptions.eligible
    report["vLY"] = None
    report["cofactor_valuations"] = None
    report["precision_c"] = None
    report["certificate"] = {}
    if not assumptions.eligible:
        failed = sorted({c.name for c in assumptions.failed()})
        run.notes.append("ineligible: " + ", ".join(failed))
        report["diagnostics"] = {"stages": run.stages, "notes": run.notes, "precision": precision}
        return report

    c = scaffold_precision(breaks)
    t_full = cofactors(dec.omega, p, n)
    report["cofactor_valuations"] = [_jsonable(t.valuation().require()) for t in t_full]
    diag: dict[str, Any] = {}

    if p**n > MAX_TOWER_DEGREE:
        run.notes.append(f"p^n = {p**n} exceeds the tower cap {MAX_TOWER_DEGREE}; tower stages skipped")
    else:
        run.stage("tower")
        tower = build_tower(TowerConfig(p, n, tuple(beta), precision))
        builder = ScaffoldBuilder(tower, dec, breaks, precision, psi_choice=psi_choice)

        run.stage("generator")
        report["vLY"] = _jsonable(tower.valuation(builder.Y))
        gen_checks = builder.generator_checks()
        diag["identity_checks"] = [ch.to_dict() for ch in gen_checks]
        _require(gen_checks, "generator identities")
        for j in range(1, n + 1):
            vX = tower.subtower(j).valuation(builder.generator(j).X)
            if vX != -breaks.b[j - 1]:
                raise ContractViolation(f"v_K{j}(X_{j}) = {vX}, expected {-breaks.b[j - 1]}")
            top = tower.subtower(j).apply_sigma(builder.generator(j).X, p ** (j - 1)) - builder.generator(j).X
            if not top.agrees_with(tower.subtower(j).one()):
                raise ContractViolation(f"(sigma^(p^{j - 1}) - 1)(X_{j}) != 1")
        rank = conjugate_rank(tower, builder.Y)
        diag["normal_basis"] = {"conjugate_rank": rank, "degree": tower.R, "independent": rank == tower.R}
        if rank != tower.R:
            run.notes.append(f"conjugates of Y span a subspace of dimension {rank} < {tower.R}")
        pi = find_uniformizer(tower, [builder.X(j) for j in range(1, n + 1)])
        oracle = break_oracle(tower, pi)
        diag["break_oracle"] = {"b": oracle, "agrees": oracle == list(breaks.b)}
        if oracle != list(breaks.b):
            raise ContractViolation(f"break oracle {oracle} disagrees with formula {list(breaks.b)}")

    run.stage("precision")
    report["precision_c"] = "unbounded" if c is None else c

    if cfg.verify_scaffold and p**n <= MAX_TOWER_DEGREE:
        run.stage("verification")
        c_run = c if c is not None else (cfg.c_test if cfg.c_test is not None else breaks.b[0])
        win = window or cfg.window
        cert = builder.verify(win, c_run)
        bounds = cert.mu_eps_bounds
        if not all(bd["ok"] for bd in bounds):
            raise ContractViolation(
                "main/error term bounds fail: " + str([(bd["i"], bd["j"]) for bd in bounds if not bd["ok"]])
            )
        report["certificate"] = cert.to_dict()
        if not cert.valid:
            run.notes.append(f"scaffold certificate invalid: {len(cert.failures())} failing checks")

    run.stage("verdicts")
    gms = gms_verdict(breaks)
    report["gms"] = gms
    report["hopf"] = hopf_verdict(breaks, gms)
    diag.update({"stages": run.stages, "notes": run.notes, "precision": precision})
    report["diagnostics"] = diag
    return report


def analyze(cfg: CaseConfig, precision: int | None = None, window=None, psi_choice: str = "truncated-exp") -> dict:
    """Run the full pipeline, doubling the series precision on exhaustion."""
    if precision is None:
        precision = cfg.series_precision
    if precision is None:
        try:
            beta = [parse_series(s, cfg.p) for s in cfg.beta]
            u_n = compute_breaks(beta, cfg.p).u[-1]
        except (ValueError, ContractViolation):
            u_n = 1
        precision = default_precision(cfg.p, cfg.n, u_n)
    attempts = []
    for attempt in range(MAX_RETRIES + 1):
        try:
            report = _analyze_once(cfg, precision, window, psi_choice)
        except PrecisionExhausted as exc:
            attempts.append({"precision": precision, "error": str(exc)})
            log.info("precision %d exhausted (%s), retrying", precision, exc)
            precision *= 2
            continue
        report["diagnostics"]["retries"] = attempts
        return report
    raise PrecisionExhausted(f"precision exhausted after {MAX_RETRIES} retries: {attempts[-1]['error']}")


# -- rendering ----------------------------------------------------------------


def render_report(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n").encode()
    if fmt == "text":
        return _render_text(report).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _render_text(r: dict) -> str:
    cfg = r["config"]
    lines = [f"case: p={cfg['p']} n={cfg['n']} beta=({', '.join(cfg['beta'])})"]
    lines.append(f"reduced: {r['reduced']}")
    lines.append(f"upper breaks: {r['u']}")
    lines.append(f"lower breaks: {r['b']}")
    lines.append(f"m: {r['m']}")
    lines.append(f"eligible: {r['eligible']}")
    for ch in r["assumption_report"]["checks"]:
        if not ch["ok"]:
            lines.append(f"  failed {ch['name']} (index {ch.get('index')}): {ch.get('lhs')} vs {ch.get('rhs')}")
    lines.append(f"v_L(Y): {r['vLY']}")
    lines.append(f"cofactor valuations: {r['cofactor_valuations']}")
    lines.append(f"precision c: {r['precision_c']}")
    cert = r.get("certificate") or {}
    if cert:
        counts = ", ".join(f"{k} {v['passed']}/{v['total']}" for k, v in cert["counts"].items())
        lines.append(f"scaffold ({cert['psi_choice']}): {'valid' if cert['valid'] else 'INVALID'} [{counts}]")
    else:
        lines.append("scaffold: not verified")
    if "gms" in r:
        g = r["gms"]
        lines.append(
            f"freeness verdict: {g['verdict']} (r(u_1)={g['r_u1']}, "
            f"strengthened={g['strengthened_ok']}, divisor={g['divisor_ok']})"
        )
        h = r["hopf"]
        lines.append(f"hopf verdict: {h['verdict']} (u_1 = -1 mod p^n: {h['congruence_ok']})")
    else:
        lines.append("verdict: not applicable (ineligible)")
    for note in r["diagnostics"].get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"
