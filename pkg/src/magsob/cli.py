"""Command line front end: ``magsob <subcommand> [--config FILE] [flags]``.

Configuration files are INI text (``key = value`` under section headers).
Every value is validated before any computation starts and all problems
are reported together. Exit status: 0 success, 1 numerical failure,
2 configuration failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .fields import FieldConfigError, FieldSpec
from .lattice import LatticeDomain, build_links, save_wavefunction

SUBCOMMANDS = ("montgomery", "model", "solve", "sweep", "partition-test",
               "localize")
EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2

log = logging.getLogger("magsob")


class ConfigError(ValueError):
    """One or more configuration problems; ``errors`` lists all of them."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


# --- schema ------------------------------------------------------------------

def _floats(text):
    return tuple(float(v) for v in str(text).replace(",", " ").split())


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int(text):
    f = float(text)
    if f != int(f):
        raise ValueError(f"not an integer: {text!r}")
    return int(f)


# section -> key -> (parser, default)
SCHEMA = {
    "run": {"seed": (_int, 0), "out": (str, "."), "threads": (_int, 1)},
    "field": {"family": (str, None), "b0": (float, 1.0), "k": (_int, 0),
              "strength": (float, 1.0), "x0": (_floats, None),
              "curvature": (float, 1.0), "gamma0": (float, 1.0),
              "r0": (float, 1.0), "center": (_floats, (0.0, 0.0)),
              "b": (float, 0.0), "c1": (float, 0.0), "c2": (float, 1.0)},
    "domain": {"kind": (str, "square"), "half_width": (float, None),
               "radius": (float, None), "center": (_floats, (0.0, 0.0)),
               "n": (_int, 161)},
    "solver": {"max_iter": (_int, 400), "grad_tol": (float, 1e-9),
               "el_tol": (float, 3e-7), "init": (str, "linear-ground-state"),
               "inner": (str, "cg"), "starts": (str, None)},
    "montgomery": {"k": (_int, 1), "half_width": (float, 12.0),
                   "n": (_int, 2048), "window": (_floats, (-2.0, 6.0)),
                   "step": (float, 0.05)},
    "model": {"k": (_int, 0), "p": (float, 4.0), "truncation": (float, 6.0),
              "resolution": (float, 8.0), "strength": (float, 1.0),
              "protocol": (_bool, True)},
    "solve": {"p": (float, 4.0), "h": (float, 0.05),
              "save_psi": (_bool, True)},
    "sweep": {"scenario": (str, "well"), "p": (float, 4.0),
              "hmin": (float, 0.005), "hmax": (float, 0.08), "n": (_int, 6),
              "points_per_length": (float, 12.0), "warm_start": (_bool, True)},
    "partition-test": {"alpha": (float, 7 / 16), "rho": (float, 5 / 16),
                       "h": (float, 0.1), "n": (_int, 128),
                       "samples": (_int, 1000)},
    "localize": {"p": (float, 4.0), "hmin": (float, 0.005),
                 "hmax": (float, 0.08), "n": (_int, 4),
                 "scenario": (str, "well")},
}


@dataclass
class RunConfig:
    subcommand: str
    params: dict
    field_params: dict
    domain: dict
    solver: dict
    seed: int = 0
    out: str = "."
    threads: int = 1
    extra: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        return {"subcommand": self.subcommand, "params": self.params,
                "field": self.field_params, "domain": self.domain,
                "solver": self.solver, "seed": self.seed,
                "threads": self.threads}


def _parse_section(name, items, errors):
    schema = SCHEMA[name]
    out = {k: v[1] for k, v in schema.items()}
    for key, raw in items:
        if key not in schema:
            errors.append(f"[{name}] unknown key {key!r}")
            continue
        parser = schema[key][0]
        try:
            out[key] = parser(raw)
        except (TypeError, ValueError):
            errors.append(f"[{name}] {key} = {raw!r}: expected "
                          f"{getattr(parser, '__name__', 'value').strip('_')}")
    return out


def parse_config(text: str, subcommand: str | None = None,
                 overrides: dict | None = None) -> RunConfig:
    """Parse and validate INI text; raises ``ConfigError`` listing all problems.

    ``overrides`` maps ``(section, key)`` to raw values (command line flags).
    """
    cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
    cp.optionxform = str
    errors = []
    try:
        cp.read_string(text or "")
    except configparser.Error as exc:
        raise ConfigError([f"malformed config: {exc}"]) from exc
    sections = {s: list(cp.items(s)) for s in cp.sections()}
    run_items = dict(sections.get("run", []))
    sub = subcommand or run_items.pop("subcommand", None)
    if "subcommand" in run_items:
        run_items.pop("subcommand")
    if sub not in SUBCOMMANDS:
        raise ConfigError([f"unknown or missing subcommand {sub!r}; choose "
                           f"from {', '.join(SUBCOMMANDS)}"])
    sections["run"] = list(run_items.items())
    for (sec, key), val in (overrides or {}).items():
        if val is not None:
            sections.setdefault(sec, [])
            sections[sec] = [(k, v) for k, v in sections[sec] if k != key]
            sections[sec].append((key, str(val)))
    parsed = {}
    for sec, items in sections.items():
        if sec not in SCHEMA:
            errors.append(f"unknown section [{sec}]")
            continue
        parsed[sec] = _parse_section(sec, items, errors)
    for sec in ("run", "field", "domain", "solver", sub):
        parsed.setdefault(sec, _parse_section(sec, [], errors))
    cfg = RunConfig(sub, parsed[sub], parsed["field"], parsed["domain"],
                    parsed["solver"], parsed["run"]["seed"],
                    parsed["run"]["out"], parsed["run"]["threads"])
    errors += _validate(cfg)
    if errors:
        raise ConfigError(errors)
    return cfg


def _validate(cfg: RunConfig) -> list:
    e = []
    prm = cfg.params
    if "p" in prm and prm["p"] is not None and not prm["p"] >= 2:
        e.append(f"p = {prm['p']}: the exponent must satisfy p >= 2")
    if cfg.subcommand == "sweep":
        if prm["scenario"] not in ("constant", "well", "vanishing"):
            e.append(f"scenario {prm['scenario']!r} not in constant|well|vanishing")
        elif prm["scenario"] == "vanishing" and not prm["p"] > 2:
            e.append("scenario vanishing requires p > 2")
    if cfg.subcommand == "localize" and prm["scenario"] not in ("constant", "well"):
        e.append("localize scenario must be constant or well")
    for sub in ("sweep", "localize"):
        if cfg.subcommand == sub:
            if not 0 < prm["hmin"] < prm["hmax"]:
                e.append("need 0 < hmin < hmax")
            if prm["n"] < 3:
                e.append("n must be >= 3 (a fit needs three samples)")
    if cfg.subcommand == "partition-test":
        if prm["alpha"] < prm["rho"]:
            e.append(f"alpha = {prm['alpha']} < rho = {prm['rho']}: the "
                     "partition requires alpha >= rho (α ≥ ρ)")
        if not prm["rho"] > 0:
            e.append("rho must be > 0")
        if not prm["h"] > 0:
            e.append("h must be > 0")
    if cfg.subcommand == "solve" and not prm["h"] > 0:
        e.append("h must be > 0")
    if cfg.subcommand == "model":
        if prm["k"] < 0:
            e.append("k must be >= 0")
        if not (prm["truncation"] > 0 and prm["resolution"] > 0):
            e.append("truncation and resolution must be > 0")
    if cfg.subcommand == "montgomery":
        mp = prm
        if mp["k"] < 0:
            e.append("k must be >= 0")
        if mp["n"] < 64:
            e.append("montgomery n must be >= 64")
        if len(mp["window"]) != 2 or not mp["window"][0] < mp["window"][1]:
            e.append("window must be two increasing numbers")
        if not mp["half_width"] > 0 or not mp["step"] > 0:
            e.append("half_width and step must be > 0")
    s = cfg.solver
    from .solver import POLICIES
    if s["init"] not in POLICIES:
        e.append(f"solver init {s['init']!r} not in {'|'.join(POLICIES)}")
    if s["inner"] not in ("cg", "direct"):
        e.append("solver inner must be cg or direct")
    if s["starts"] is not None:
        bad = [t for t in s["starts"].replace(",", " ").split() if t not in POLICIES]
        if bad:
            e.append(f"unknown start policies {bad}")
    if not (s["grad_tol"] > 0 and s["el_tol"] > 0 and s["max_iter"] >= 1):
        e.append("solver tolerances must be > 0 and max_iter >= 1")
    d = cfg.domain
    if d["kind"] not in ("square", "disk"):
        e.append(f"domain kind {d['kind']!r} not in square|disk")
    if d["n"] < 8:
        e.append("domain n must be >= 8")
    for key in ("half_width", "radius"):
        if d[key] is not None and not d[key] > 0:
            e.append(f"domain {key} must be > 0")
    if cfg.threads < 1:
        e.append("threads must be >= 1")
    if cfg.field_params["family"] is not None or cfg.subcommand == "solve":
        try:
            _field_spec(cfg)
        except (FieldConfigError, ValueError) as exc:
            e.append(f"[field] {exc}")
    return e


def _field_spec(cfg: RunConfig, scenario=None) -> FieldSpec:
    f = cfg.field_params
    fam = f["family"]
    if scenario == "constant":
        fam = "constant"
    elif scenario == "well":
        fam = "radial_well"
    elif scenario == "vanishing":
        fam = "radial_vanishing"
    if fam is None:
        raise FieldConfigError("family is required")
    x0 = f["x0"]
    if fam == "constant":
        return FieldSpec.constant(f["b0"], f["center"])
    if fam == "power":
        return FieldSpec.power(f["k"], f["strength"])
    if fam == "translated_power":
        return FieldSpec.translated_power(f["k"], x0 or (0.0, 0.0), f["strength"])
    if fam == "radial_well":
        return FieldSpec.radial_well(f["b0"], x0 or (0.1, 0.05), f["curvature"])
    if fam == "radial_vanishing":
        return FieldSpec.radial_vanishing(f["gamma0"], f["r0"], f["center"])
    if fam == "param_model":
        return FieldSpec.param_model(f["b"], f["c1"], f["c2"])
    raise FieldConfigError(f"unknown field family {fam!r}")


def _domain(cfg: RunConfig, default_half=1.0, n=None) -> LatticeDomain:
    d = cfg.domain
    n = n or d["n"]
    if d["kind"] == "disk":
        return LatticeDomain.disk(d["center"], d["radius"] or default_half, n)
    return LatticeDomain.square(d["half_width"] or default_half, n, d["center"])


def _solver_opts(cfg: RunConfig):
    from .solver import POLICIES, SolveOptions
    s = cfg.solver
    starts = (tuple(s["starts"].replace(",", " ").split()) if s["starts"]
              else POLICIES)
    return SolveOptions(max_iter=s["max_iter"], grad_tol=s["grad_tol"],
                        el_tol=s["el_tol"], init=s["init"], inner=s["inner"],
                        starts=starts, seed=cfg.seed)


# --- output ---------------------------------------------------------------------

def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def write_json(path, payload):
    text = json.dumps(_clean(payload), indent=2, sort_keys=True,
                      ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in header])


# --- subcommands ----------------------------------------------------------------

def _run_montgomery(cfg, out):
    from .montgomery import minimize_band
    m = cfg.params
    band = minimize_band(m["k"], m["half_width"], m["n"], tuple(m["window"]),
                         m["step"], threads=cfg.threads)
    write_csv(out / "montgomery.csv", ["alpha", "nu1"],
              [{"alpha": a, "nu1": v} for a, v in zip(band.alphas, band.nu1)])
    summary = band.summary()
    summary["slope_sign_changes"] = band.slope_sign_changes()
    return summary


def _run_model(cfg, out):
    from .solver import model_protocol, solve_model
    m = cfg.params
    spec = FieldSpec.power(m["k"], m["strength"])
    opts = _solver_opts(cfg)
    if m["protocol"]:
        rep = model_protocol(spec, m["p"], m["truncation"], m["resolution"], opts)
        runs = rep.runs
        payload = rep.report()
    else:
        res, _ = solve_model(spec, m["p"], m["truncation"], m["resolution"], opts)
        runs = [{"truncation": m["truncation"], "resolution": m["resolution"],
                 "lambda": res.lam, "converged": res.converged,
                 "el_residual": res.el_residual}]
        payload = {"lambda": res.lam, "spread": 0.0, "warning": None,
                   "runs": runs, "el_residual": res.el_residual,
                   "iterations": res.iterations, "converged": res.converged}
    write_csv(out / "model.csv",
              ["truncation", "resolution", "lambda", "converged", "el_residual"],
              runs)
    return payload


def _run_solve(cfg, out):
    from .solver import minimize_rayleigh
    m = cfg.params
    spec = _field_spec(cfg)
    dom = _domain(cfg)
    links = build_links(dom, spec, m["h"])
    res = minimize_rayleigh(links, m["p"], _solver_opts(cfg))
    if m["save_psi"]:
        save_wavefunction(out / "psi.bin", res.psi)
    return res.report() | {"nodes": dom.n_interior, "h": m["h"]}


def _sweep_fit(cfg, scenario, p, hs, opts, **kw):
    from .asymptotics import sweep_constant_field, sweep_vanishing_field
    spec = _field_spec(cfg, scenario)
    if scenario == "vanishing":
        dom = _domain(cfg, default_half=2.0)
        return sweep_vanishing_field(dom, spec, p, hs, opts, **kw)
    return sweep_constant_field(_domain(cfg), spec, p, hs, opts, **kw)


def _run_sweep(cfg, out):
    m = cfg.params
    hs = np.geomspace(m["hmax"], m["hmin"], m["n"])
    fit = _sweep_fit(cfg, m["scenario"], m["p"], hs, _solver_opts(cfg),
                     points_per_length=m["points_per_length"],
                     warm_start=m["warm_start"])
    write_csv(out / "sweep.csv",
              ["h", "lambda", "exponent_running", "tail_lp", "tail_inf"],
              fit.rows)
    vanish = m["scenario"] == "vanishing"
    verdict = fit.verdict(0.07 if vanish else 0.05,
                          (0.85, 1.15) if vanish else (0.9, 1.1))
    rows = [{k: v for k, v in r.items() if k != "seconds"} for r in fit.rows]
    return {"verdict": verdict, "law": ("vanishing-field law" if vanish
                                        else "non-vanishing-field law"),
            "fit": {"exponent": fit.exponent, "prefactor": fit.prefactor,
                    "r2": fit.r2, "subset": fit.subset,
                    "exponent_all": fit.exponent_all,
                    "exponent_smallest3": fit.exponent_small,
                    "model_value": fit.model_value,
                    "prefactor_fit_ratio": fit.prefactor_fit_ratio},
            "tainted": fit.tainted, "rows": rows}


def _run_localize(cfg, out):
    from .asymptotics import decay_rate_report
    m = cfg.params
    hs = np.geomspace(m["hmax"], m["hmin"], m["n"])
    fit = _sweep_fit(cfg, m["scenario"], m["p"], hs, _solver_opts(cfg),
                     trial=False)
    ref = fit.rows[0]["radius"]
    rows = []
    for pr in fit.profiles:
        for r, tl, ti in zip(pr.radii, pr.tail_lp, pr.tail_inf):
            rows.append({"h": pr.h, "radius": r, "tail_lp": tl, "tail_inf": ti})
    write_csv(out / "localize.csv", ["h", "radius", "tail_lp", "tail_inf"], rows)
    try:
        decay = decay_rate_report(fit.profiles, ref)
    except ValueError as exc:
        decay = {"rho": None, "localizing": False, "error": str(exc)}
    tails = [pr.at(ref)[0] for pr in fit.profiles]
    strictly = bool(all(b < a for a, b in zip(tails, tails[1:])))
    return {"reference_radius": ref, "decay": decay,
            "tail_lp_strictly_decreasing": strictly,
            "tails": [{"h": pr.h, "tail_lp": pr.at(ref)[0],
                       "tail_inf": pr.at(ref)[1]} for pr in fit.profiles]}


def partition_suite(alpha, rho, h, n=128, samples=1000, seed=0) -> dict:
    """Invariant checks of the partition at one (alpha, rho, h)."""
    from .partition import (Partition, PartitionSpec, adapted_spec,
                            gradient_constant, lp_recovery_check)
    from .lattice import WaveFunction
    rng = np.random.default_rng(seed)
    spec = PartitionSpec(alpha, rho, h)
    part = Partition(spec)
    X, Y = rng.uniform(-1, 1, (2, samples))
    D = gradient_constant(alpha, rho)
    sq_err = float(np.max(np.abs(part.sum_squares(X, Y) - 1)))
    budget = float(np.max(part.grad_budget(X, Y)) * h ** (2 * alpha))
    # support: every cutoff vanishes at sup-distance >= outer from its centre
    sup_ok = True
    for cell in spec.cells[:16]:
        c = spec.center(cell)
        ang = rng.uniform(0, 2 * np.pi, 200)
        rad = spec.outer * (1 + rng.uniform(0, 0.5, 200))
        pts = c[:, None] + rad * np.array([np.sign(np.cos(ang)),
                                           np.sin(ang)])
        chi = part.cutoff(cell, pts[0], pts[1])[0]
        sup_ok &= bool(np.all(chi == 0))
    dom = LatticeDomain.square(1.0, n)
    Xg, Yg = dom.meshgrid()
    psi = WaveFunction(dom, np.exp(-((Xg - 0.13) ** 2 + (Yg + 0.21) ** 2) / 0.2)
                       * (1 + 0.3 * np.cos(3 * Xg + 1j * Yg)))
    adapted, frac = adapted_spec(spec, psi, 4)
    rec = lp_recovery_check(adapted, psi, 4)
    checks = [
        {"check": "sum of squares = 1", "value": sq_err, "pass": sq_err <= 1e-12},
        {"check": "support exactness", "value": float(sup_ok), "pass": sup_ok},
        {"check": "gradient budget <= D h^-2alpha", "value": budget,
         "pass": budget <= D * (1 + 1e-9)},
        {"check": "L^p recovery lower slack", "value": rec.s_low,
         "pass": rec.s_low >= -1e-12},
        {"check": "L^p recovery upper slack", "value": rec.s_up,
         "pass": rec.s_up >= -1e-12},
    ]
    return {"alpha": alpha, "rho": rho, "h": h, "D": D,
            "C_empirical": rec.c_empirical, "layer_fraction": frac,
            "checks": checks, "pass": all(c["pass"] for c in checks)}


def _run_partition(cfg, out):
    m = cfg.params
    rep = partition_suite(m["alpha"], m["rho"], m["h"], m["n"], m["samples"],
                          cfg.seed)
    width = max(len(c["check"]) for c in rep["checks"])
    for c in rep["checks"]:
        print(f"{c['check']:<{width}}  {'PASS' if c['pass'] else 'FAIL'}  "
              f"{c['value']:.6g}")
    print(f"{'D (measured)':<{width}}  {rep['D']:.6g}")
    print(f"{'C (empirical)':<{width}}  {rep['C_empirical']:.6g}")
    return rep


RUNNERS = {"montgomery": _run_montgomery, "model": _run_model,
           "solve": _run_solve, "sweep": _run_sweep,
           "partition-test": _run_partition, "localize": _run_localize}


def _numeric_errors():
    from .montgomery import BandSolverError, WindowError
    from .partition import InvariantViolation, TranslationBoundError
    from .solver import InnerSolverError
    return (BandSolverError, WindowError, InnerSolverError,
            TranslationBoundError, InvariantViolation, FloatingPointError,
            np.linalg.LinAlgError, RuntimeError, ArithmeticError)


def run(cfg: RunConfig) -> int:
    """Execute a validated configuration; writes ``<subcommand>.json`` to out."""
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    name = cfg.subcommand.replace("-", "_")
    report = {"version": __version__, "config": cfg.resolved()}
    status = EXIT_OK
    try:
        report["result"] = RUNNERS[cfg.subcommand](cfg, out)
    except _numeric_errors() as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        status = EXIT_NUMERIC
    except (ValueError, FieldConfigError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        status = EXIT_CONFIG
    report["status"] = status
    write_json(out / f"{name}.json", report)
    return status


def build_parser():
    ap = argparse.ArgumentParser(prog="magsob", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--threads", type=int)
    common.add_argument("-v", "--verbose", action="store_true")
    p = sub.add_parser("montgomery", parents=[common])
    p.add_argument("--k", type=int)
    p = sub.add_parser("model", parents=[common])
    p.add_argument("--k", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--truncation", type=float)
    p.add_argument("--resolution", type=float)
    p = sub.add_parser("solve", parents=[common])
    p.add_argument("--p", type=float)
    p.add_argument("--h", type=float)
    p = sub.add_parser("sweep", parents=[common])
    p.add_argument("--scenario", choices=("constant", "well", "vanishing"))
    p.add_argument("--p", type=float)
    p.add_argument("--hmin", type=float)
    p.add_argument("--hmax", type=float)
    p.add_argument("--n", type=int)
    p = sub.add_parser("partition-test", parents=[common])
    p.add_argument("--alpha", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--h", type=float)
    p = sub.add_parser("localize", parents=[common])
    p.add_argument("--p", type=float)
    p.add_argument("--hmin", type=float)
    p.add_argument("--hmax", type=float)
    p.add_argument("--n", type=int)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    sub = args.subcommand
    overrides = {("run", "seed"): args.seed, ("run", "out"): args.out,
                 ("run", "threads"): args.threads}
    for key in ("k", "p", "h", "truncation", "resolution", "scenario", "hmin",
                "hmax", "n", "alpha", "rho"):
        if hasattr(args, key):
            overrides[(sub, key)] = getattr(args, key)
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(text, sub, overrides)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    status = run(cfg)
    if status:
        print(f"{sub} failed (exit {status}); see the JSON report in {cfg.out}",
              file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
