"""Batch driver for the workbench.

Subcommands build the exact objects, run their verification suites, and
emit JSON/CSV reports:

* ``rmatrix``   -- braiding series for a pair of simple modules, with
  structural checks, exact rational fit, and optional numeric pole scan.
* ``sugawara``  -- Sugawara operator on a truncated generic Verma module:
  route agreement, intertwining, spectrum inclusion.
* ``coinv``     -- coinvariant space dimensions and the composite-map
  identity certificate.
* ``qdiff``     -- q-difference system: series solution, convergence
  certificate, meromorphic continuation, pole ladder CSV.
* ``verify-all``-- the full desk-scale battery.
* ``run``       -- all of the above driven from a JSON job config.

Exit codes: 0 all checks pass; 1 at least one check failed; 2 invalid
configuration; 3 internal inconsistency (an exception escaped a check —
a bug, not a falsified property).

Every check row carries a stable anchor string (``module.check-name``)
so reports are golden-file comparable; timing fields are informational
and excluded from comparisons.
"""

from __future__ import annotations

import csv
import json
import sys
import time

import click

# desk-scale bounds: orders beyond these are rejected at config time
DESK_BOUNDS = {"braiding_order": 24, "verma_level": 6, "qdiff_order": 200,
               "simple_label": 6, "fit_maxdeg": 40}


class ConfigError(ValueError):
    """Invalid job configuration (CLI exit code 2)."""


# ---------------------------------------------------------------------------
# check plumbing
# ---------------------------------------------------------------------------


def _check(results, anchor, fn, detail=""):
    """Run one named check; booleans from fn decide pass/fail, raised
    exceptions mark internal inconsistency (exit 3)."""
    t0 = time.perf_counter()
    row = {"anchor": anchor, "detail": detail}
    try:
        out = fn()
        if isinstance(out, tuple):
            ok, extra = out
            row["detail"] = extra if not detail else f"{detail}; {extra}"
        else:
            ok = out
        row["ok"] = bool(ok)
    except Exception as exc:  # noqa: BLE001 - reported, not swallowed
        row["ok"] = False
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["seconds"] = round(time.perf_counter() - t0, 3)
    results.append(row)
    return row


def _exit_code(results):
    if any("error" in r for r in results):
        return 3
    return 0 if all(r["ok"] for r in results) else 1


def report_emit(results, out=None, extra=None):
    """Deterministic JSON report (sorted keys); returns the dict."""
    rep = {
        "checks": sorted(results, key=lambda r: r["anchor"]),
        "passed": sum(1 for r in results if r["ok"]),
        "failed": sum(1 for r in results if not r["ok"]),
    }
    if extra:
        rep.update(extra)
    text = json.dumps(rep, indent=2, sort_keys=True, default=str)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)
    return rep


def _parse_simple(label):
    """'V1' / 'V2' ... -> finite simple module."""
    from .findim import build_simple

    if not (label.startswith("V") and label[1:].isdigit()):
        raise ConfigError(f"unknown simple-module label {label!r}")
    m = int(label[1:])
    if not 0 <= m <= DESK_BOUNDS["simple_label"]:
        raise ConfigError(f"simple label {label!r} beyond desk bound")
    return build_simple(m)


def _numeric_assignment(qt, z):
    """Validate the standing numeric assumptions: |qt| < 1 and the
    central value off the forbidden ray (|qt^2 z| > 1 in particular)."""
    if qt is None and z is None:
        return None
    if qt is None or z is None:
        raise ConfigError("numeric assignment needs both qt and z")
    if not abs(qt) < 1:
        raise ConfigError(f"|qt| = {abs(qt)} must be < 1")
    if abs(qt * qt * z) <= 1:
        raise ConfigError(
            f"|qt^2 z| = {abs(qt * qt * z)} <= 1 violates the standing "
            "genericity assumption on the central value"
        )
    return {"qt": complex(qt), "z": complex(z), "ca": 1.0, "caa": 1.0,
            "za2": 1.0}


# ---------------------------------------------------------------------------
# job implementations
# ---------------------------------------------------------------------------


def job_rmatrix(xlabel="V1", ylabel="V1", order=6, fit_maxdeg=24,
                qt=None, z=None, csv_out=None):
    from . import braiding as br
    from .scalars import ts_to_json

    if not 1 <= order <= DESK_BOUNDS["braiding_order"]:
        raise ConfigError(f"braiding order {order} beyond desk bound")
    if fit_maxdeg > DESK_BOUNDS["fit_maxdeg"]:
        raise ConfigError(f"fit degree {fit_maxdeg} beyond desk bound")
    X, Y = _parse_simple(xlabel), _parse_simple(ylabel)
    results = []
    s = br.solve_braiding(X, Y, order)
    _check(results, "braiding.residual-zero",
           lambda: br.braiding_residual(s.coeffs, s.src, s.tgt),
           f"{xlabel},{ylabel} order {order}")
    rel = br.verify_relations(X, Y, X, n=min(order, 4))
    for key, ok in sorted(rel.items()):
        _check(results, f"braiding.{key}", lambda ok=ok: ok)
    fit = br.rational_fit(s, fit_maxdeg)
    _check(results, "braiding.rational-fit",
           lambda: (fit["ok"], f"surplus {fit.get('surplus')}"))
    payload = {
        "series": [[[str(e) for e in row] for row in c] for c in s.coeffs],
    }
    assignment = _numeric_assignment(qt, z)
    if assignment and fit["ok"]:
        poles = br.pole_analysis(fit, assignment)
        _check(results, "braiding.zero-not-a-pole",
               lambda: not poles["zero_in_lambda"] and poles["isolated"],
               f"{len(poles['poles'])} poles sampled")
        payload["poles"] = [[p.real, p.imag] for p in poles["poles"]]
        if csv_out:
            with open(csv_out, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["re", "im", "modulus"])
                for p in sorted(poles["poles"], key=abs):
                    w.writerow([p.real, p.imag, abs(p)])
    return results, payload


def job_sugawara(level=3, beta=1):
    from .cat_o import (
        standard_verma, sugawara, sugawara_spectrum,
        spectral_inclusion_check,
    )
    from .linalg import mat_eq
    from .rootdata import build_affine_sl2
    from .scalars import Z

    if not 1 <= level <= DESK_BOUNDS["verma_level"]:
        raise ConfigError(f"verma level {level} beyond desk bound")
    d = build_affine_sl2()
    V = standard_verma(d, Z, level)
    results = []
    T1 = sugawara(V, route="dual_basis")
    _check(results, "sugawara.routes-agree",
           lambda: mat_eq(T1, sugawara(V, route="recursion")),
           f"level {level}")
    rep = spectral_inclusion_check(V, T1)
    _check(results, "sugawara.spectrum-ladder",
           lambda: all(rep.values()), f"degrees {sorted(rep)}")
    spec = sugawara_spectrum(V, T1)
    return results, {"spectrum": {
        str(k): [str(v) for v, _m in eigs] for k, eigs in spec.items()
    }}


def job_coinv(n=2, beta=1, mX=1):
    from .coinv import DeltaPhi, gamma_coinvariants
    from .cat_o import standard_verma, dotted_tensor
    from .findim import tensor
    from .rootdata import build_affine_sl2, Weight
    from .scalars import Z

    if not 1 <= n <= 4:
        raise ConfigError(f"coinvariant order {n} beyond desk bound")
    d = build_affine_sl2()
    X = _parse_simple(f"V{mX}")
    V = standard_verma(d, Z, n)
    Vb = standard_verma(d, Z, n, base=Weight(1, beta))
    W = Vb.omega_twist()
    VX = tensor(V, X)
    space = gamma_coinvariants([VX, W], [True, False], n,
                               overflow={0: {"F"}, 1: {"E"}})
    mult = sum(1 for w in X.weights if w.m == beta and w.na == 0)
    results = []
    _check(results, "coinv.dimension",
           lambda: (space.dim_c == n * mult,
                    f"dim {space.dim_c} = {n} x mult {mult}"))
    _check(results, "coinv.retraction", space.retraction_check)
    _check(results, "coinv.relations-annihilate", space.annihilation_check)
    if mult:
        dp = DeltaPhi(V, Vb, X, n)
        _check(results, "coinv.composite-identity", dp.phi_is_identity,
               f"n={n} beta={beta} X=V{mX}")
    return results, {"dimension": space.dim_c}


def job_qdiff(system="pochhammer", p=0.5, order=30, continue_at=None,
              csv_out=None):
    import numpy as np
    from . import qdiff as qd

    if not 2 <= order <= DESK_BOUNDS["qdiff_order"]:
        raise ConfigError(f"qdiff order {order} beyond desk bound")
    if isinstance(system, str):
        if system == "pochhammer":
            sys_ = qd.pochhammer_system(p)
            oracle = qd.pochhammer_coeffs(p, order)
        elif system == "inverse-pochhammer":
            sys_ = qd.inverse_pochhammer_system(p)
            oracle = qd.inverse_pochhammer_coeffs(p, order)
        else:
            sys_ = qd.load_system(system)
            oracle = None
    else:
        sys_ = qd.system_from_dict(system)
        oracle = None
    results = []
    coeffs = qd.series_solve(sys_, order)
    if oracle is not None:
        _check(results, "qdiff.oracle-match",
               lambda: max(abs(coeffs[j][0, 0] - oracle[j])
                           for j in range(order)) < 1e-12)
    rng = np.random.default_rng(7)
    _check(results, "qdiff.equation-residual",
           lambda: max(
               qd.equation_residual(sys_, coeffs,
                                    complex(*rng.uniform(-0.2, 0.2, 2)))
               for _ in range(100)) < 1e-10)
    cert = qd.certify_convergence(sys_, coeffs, R=1.0)
    _check(results, "qdiff.convergence-certificate",
           lambda: cert["consistent"],
           f"radius >= {cert['guaranteed_radius']:.4g}")
    payload = {"certificate": cert}
    if continue_at is not None:
        out = qd.continue_meromorphic(sys_, coeffs, continue_at)
        payload["continuation"] = {
            "t": continue_at, "pole": out["pole"],
            "value": None if out["value"] is None
            else [[ [v.real, v.imag] for v in row] for row in out["value"]],
            "pole_location": None if out["pole_location"] is None
            else [out["pole_location"].real, out["pole_location"].imag],
        }
    if csv_out:
        # forward p-ladders of the singular points of phi = candidate poles
        with open(csv_out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im", "modulus"])
            pts = []
            for s0 in sys_.phi.singular_points():
                for k in range(10):
                    pts.append(s0 / (sys_.p ** k))
            for pt in sorted(pts, key=abs):
                w.writerow([pt.real, pt.imag, abs(pt)])
    return results, payload


def job_verify_all(qt=0.3, z=1.7):
    results = []
    for jobname, fn in (
        ("rmatrix", lambda: job_rmatrix("V1", "V1", 6, 24, qt, z)),
        ("sugawara", lambda: job_sugawara(3)),
        ("coinv", lambda: job_coinv(2, 1, 1)),
        ("qdiff", lambda: job_qdiff("pochhammer", 0.5, 30, 2.0)),
    ):
        sub, _ = fn()
        results.extend(sub)
    return results, {}


JOB_RUNNERS = {
    "rmatrix": lambda c: job_rmatrix(
        c.get("X", "V1"), c.get("Y", "V1"), c.get("order", 6),
        c.get("fit_maxdeg", 24), c.get("qt"), c.get("z"), c.get("csv")),
    "sugawara": lambda c: job_sugawara(c.get("level", 3)),
    "coinv": lambda c: job_coinv(c.get("n", 2), c.get("beta", 1),
                                 c.get("mX", 1)),
    "qdiff": lambda c: job_qdiff(c.get("system", "pochhammer"),
                                 c.get("p", 0.5), c.get("order", 30),
                                 c.get("continue_at"), c.get("csv")),
    "verify-all": lambda c: job_verify_all(c.get("qt", 0.3),
                                           c.get("z", 1.7)),
}


def config_load(path):
    """Load and validate a JSON job config: {"jobs": [{"kind": ..}, ..],
    "out": path?}.  Raises ConfigError listing the offending field."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict) or "jobs" not in cfg:
        raise ConfigError("config must be an object with a 'jobs' list")
    for i, job in enumerate(cfg["jobs"]):
        kind = job.get("kind")
        if kind not in JOB_RUNNERS:
            raise ConfigError(f"jobs[{i}].kind {kind!r} not one of "
                              f"{sorted(JOB_RUNNERS)}")
        if "qt" in job or "z" in job:
            _numeric_assignment(job.get("qt"), job.get("z"))
    return cfg


def run(cfg):
    """Execute a validated config; returns (exit_code, report dict)."""
    results, extra = [], {}
    for job in cfg["jobs"]:
        sub, payload = JOB_RUNNERS[job["kind"]](job)
        results.extend(sub)
        if payload:
            extra.setdefault("payloads", {})[job["kind"]] = payload
    rep = report_emit(results, cfg.get("out"), extra)
    return _exit_code(results), rep


# ---------------------------------------------------------------------------
# click front-end
# ---------------------------------------------------------------------------


@click.group()
def main():
    """Exact workbench for deformation braidings, Sugawara operators,
    coinvariant spaces, and q-difference equations."""


def _finish(results, payload, out):
    report_emit(results, out, {"payload": payload} if payload else None)
    sys.exit(_exit_code(results))


@main.command("rmatrix")
@click.option("--X", "xlabel", default="V1", show_default=True)
@click.option("--Y", "ylabel", default="V1", show_default=True)
@click.option("--order", default=6, show_default=True)
@click.option("--fit-maxdeg", default=24, show_default=True)
@click.option("--qt", default=None, type=float)
@click.option("--z", default=None, type=float)
@click.option("--csv", "csv_out", default=None, type=click.Path())
@click.option("--out", default=None, type=click.Path())
def cmd_rmatrix(xlabel, ylabel, order, fit_maxdeg, qt, z, csv_out, out):
    """Braiding series, structural checks, rational fit, pole scan."""
    try:
        results, payload = job_rmatrix(xlabel, ylabel, order, fit_maxdeg,
                                       qt, z, csv_out)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    _finish(results, payload, out)


@main.command("sugawara")
@click.option("--level", default=3, show_default=True)
@click.option("--out", default=None, type=click.Path())
def cmd_sugawara(level, out):
    """Sugawara operator checks on a truncated generic Verma module."""
    try:
        results, payload = job_sugawara(level)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    _finish(results, payload, out)


@main.command("coinv")
@click.option("--n", default=2, show_default=True)
@click.option("--beta", default=1, show_default=True)
@click.option("--mx", "mX", default=1, show_default=True)
@click.option("--out", default=None, type=click.Path())
def cmd_coinv(n, beta, mX, out):
    """Coinvariant dimensions and the composite-map identity."""
    try:
        results, payload = job_coinv(n, beta, mX)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    _finish(results, payload, out)


@main.command("qdiff")
@click.option("--system", default="pochhammer", show_default=True,
              help="builtin name or JSON file path")
@click.option("--p", default=0.5, show_default=True)
@click.option("--order", default=30, show_default=True)
@click.option("--continue", "continue_at", default=None, type=float,
              help="evaluate the continuation at this t")
@click.option("--csv", "csv_out", default=None, type=click.Path())
@click.option("--out", default=None, type=click.Path())
def cmd_qdiff(system, p, order, continue_at, csv_out, out):
    """q-difference system: solve, certify, continue."""
    try:
        results, payload = job_qdiff(system, p, order, continue_at, csv_out)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    _finish(results, payload, out)


@main.command("verify-all")
@click.option("--qt", default=0.3, show_default=True)
@click.option("--z", default=1.7, show_default=True)
@click.option("--out", default=None, type=click.Path())
def cmd_verify_all(qt, z, out):
    """Run the full desk-scale verification battery."""
    try:
        results, payload = job_verify_all(qt, z)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    _finish(results, payload, out)


@main.command("run")
@click.option("--config", "config_path", required=True, type=click.Path())
def cmd_run(config_path):
    """Execute a JSON job config."""
    try:
        cfg = config_load(config_path)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    code, _ = run(cfg)
    sys.exit(code)


if __name__ == "__main__":
    main()
