"""Command-line front end: ``qtau eval | verify | degenerate``.

Exit codes: 0 success, 1 a proved identity failed, 2 configuration error,
3 numerical error (pole or vanishing denominator).
"""

from __future__ import annotations

import argparse
import copy
import csv
import fnmatch
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import fields

from . import nekrasov, qcore
from .degeneration import STEPS, TARGET_FAMILY, convergence_sweep
from .painleve import (
    PROVED,
    ResidualReport,
    a7prime_form_residual,
    backlund_iii1_check,
    bilinear_residuals,
    equation_residual,
    five_term_residual,
    g_reduction,
    make_report,
    yz,
)
from .qcore import QContext
from .tau import FAMILIES, PARAM_TYPES, ParamsIII3, TruncationSpec, tau, tau_shifted

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3

# config symbol -> dataclass field
SYMBOLS = {
    "theta1": "theta1",
    "theta_t": "theta_t",
    "theta_inf": "theta_inf",
    "theta0": "theta0",
    "theta_star": "theta_star",
    "theta_star2": "theta_star2",
    "sigma": "sigma",
    "s": "s",
}

GENERIC_POINTS = {
    "VI": {"theta1": 0.11, "theta_t": 0.23, "theta_inf": 0.31, "theta0": 0.17, "sigma": 0.41, "s": 0.9},
    "V": {"theta_star": 0.37, "theta_t": 0.23, "theta0": 0.17, "sigma": 0.29, "s": 0.9},
    "III1": {"theta_star": 0.37, "theta_star2": 0.21, "sigma": 0.29, "s": 0.9},
    "III2": {"theta_star": 0.37, "sigma": 0.29, "s": 0.9},
    "III3A": {"sigma": 0.27, "s": 0.8},
    "III3B": {"sigma": 0.27, "s": 0.8},
}

DEFAULTS = {
    "eval": {
        "family": "III3A",
        "q": 0.5,
        "t": [0.01, 0.02, 0.03],
        "truncation": {"n_max": 10, "w": 4},
        "indices": [1, 2],
        "yz": True,
    },
    "verify": {
        "family": "all",
        "q": 0.5,
        "t": 0.03,
        "truncation": {"n_max": 10, "w": 4},
        "tolerance": 1e-6,
        "filter": [],
        "seed": 0,
    },
    "degenerate": {
        "step": "III2_to_III3A",
        "q": 0.5,
        "t1": 0.02,
        "lambdas": [6, 9, 12],
        "truncation": {"n_max": 8, "w": 3},
    },
}
_ALLOWED = {
    "eval": {"family", "params", "q", "t", "truncation", "indices", "yz", "format"},
    "verify": {"family", "params", "q", "t", "truncation", "tolerance", "filter", "seed", "format"},
    "degenerate": {"step", "params", "q", "t1", "lambdas", "truncation", "format"},
}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------


def _number(v, what: str) -> complex | float:
    if isinstance(v, bool):
        raise ConfigError(f"{what}: expected a number")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return complex(_number(v["re"], what), _number(v["im"], what))
    raise ConfigError(f"{what}: expected a number or {{'re', 'im'}}")


def _real(v, what: str) -> float:
    x = _number(v, what)
    if isinstance(x, complex):
        raise ConfigError(f"{what}: expected a real number")
    return x


def _resolve_params(family: str, raw: dict | None) -> dict:
    if raw is None:
        return dict(GENERIC_POINTS[family])
    if not isinstance(raw, dict):
        raise ConfigError("params must be an object")
    needed = set(GENERIC_POINTS[family])
    unknown = set(raw) - needed
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {family}: {sorted(unknown)}")
    missing = needed - set(raw)
    if missing:
        raise ConfigError(f"missing parameter(s) for {family}: {sorted(missing)}")
    return {k: raw[k] for k in GENERIC_POINTS[family]}


def build_params(family: str, values: dict):
    kw = {SYMBOLS[k]: _number(v, k) for k, v in values.items()}
    if family in ("III3A", "III3B"):
        return ParamsIII3(variant="A7prime" if family == "III3A" else "A7", **kw)
    cls = PARAM_TYPES[family]
    names = [f.name for f in fields(cls) if f.init]
    return cls(**{n: kw[n] for n in names})


def _truncation(raw) -> dict:
    if not isinstance(raw, dict) or set(raw) - {"n_max", "w"}:
        raise ConfigError("truncation must be an object with keys n_max, w")
    out = dict(raw)
    for k in ("n_max", "w"):
        if not isinstance(out.get(k), int) or isinstance(out.get(k), bool):
            raise ConfigError(f"truncation.{k} must be an integer")
    try:
        TruncationSpec(out["n_max"], out["w"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return out


def resolve_config(command: str, raw: dict | None) -> dict:
    """Validate ``raw`` against the command's schema and fill in defaults."""
    raw = {} if raw is None else raw
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _ALLOWED[command]
    if unknown:
        raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
    cfg = copy.deepcopy(DEFAULTS[command])
    cfg.update({k: v for k, v in raw.items() if k != "format"})
    q = _real(cfg["q"], "q")
    if not 0 < q < 1:
        raise ConfigError("q must lie in (0, 1)")
    cfg["truncation"] = _truncation(cfg["truncation"])

    if command == "degenerate":
        if cfg["step"] not in STEPS:
            raise ConfigError(f"unknown step {cfg['step']!r}; expected one of {list(STEPS)}")
        cfg["params"] = _resolve_params(TARGET_FAMILY[cfg["step"]], raw.get("params"))
        _number(cfg["t1"], "t1")
        lams = cfg["lambdas"]
        if not isinstance(lams, list) or not lams:
            raise ConfigError("lambdas must be a non-empty list")
        vals = [_real(x, "lambdas") for x in lams]
        if any(b <= a for a, b in zip(vals, vals[1:])) or vals[0] <= 0:
            raise ConfigError("lambdas must be positive and strictly increasing")
        return cfg

    fam = cfg["family"]
    valid = FAMILIES + (("all",) if command == "verify" else ())
    if fam not in valid:
        raise ConfigError(f"unknown family {fam!r}; expected one of {list(valid)}")
    if fam == "all":
        if "params" in raw:
            raise ConfigError("params cannot be given with family 'all'")
        cfg["params"] = {f: dict(p) for f, p in GENERIC_POINTS.items()}
    else:
        cfg["params"] = _resolve_params(fam, raw.get("params"))
        for k, v in cfg["params"].items():
            _number(v, k)
    ts = cfg["t"] if isinstance(cfg["t"], list) else [cfg["t"]]
    if not ts:
        raise ConfigError("t must be a number or a non-empty list")
    for x in ts:
        _number(x, "t")
    if command == "eval":
        idx = cfg["indices"]
        if not isinstance(idx, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
            raise ConfigError("indices must be a list of integers")
        if not isinstance(cfg["yz"], bool):
            raise ConfigError("yz must be a boolean")
    else:
        tol = _real(cfg["tolerance"], "tolerance")
        if tol <= 0:
            raise ConfigError("tolerance must be positive")
        if not isinstance(cfg["filter"], list) or not all(isinstance(f, str) for f in cfg["filter"]):
            raise ConfigError("filter must be a list of glob strings")
        if not isinstance(cfg["seed"], int) or isinstance(cfg["seed"], bool):
            raise ConfigError("seed must be an integer")
    return cfg


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def to_json(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return to_json({"re": obj.real, "im": obj.imag})
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return to_json(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if math.isnan(v) else _fmt_float(v)
    if hasattr(v, "item"):
        return _csv_cell(v.item())
    return str(v)


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _flatten(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if isinstance(v, complex):
            out[f"{k}_re"], out[f"{k}_im"] = v.real, v.imag
        else:
            out[k] = v
    return out


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report) + "\n"
    rows = [_flatten(r) for r in report["rows"]]
    header: list[str] = []
    for r in rows:
        header += [k for k in r if k not in header]
    config = to_json(report["config"])
    return to_csv(header + ["config"], [[r.get(k) for k in header] + [config] for r in rows])


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _ctx(cfg: dict) -> QContext:
    return QContext.from_env(float(cfg["q"]))


def _trunc(cfg: dict) -> TruncationSpec:
    return TruncationSpec(cfg["truncation"]["n_max"], cfg["truncation"]["w"])


def _t_list(cfg: dict) -> list:
    raw = cfg["t"] if isinstance(cfg["t"], list) else [cfg["t"]]
    return [_number(x, "t") for x in raw]


def cmd_eval(cfg: dict) -> tuple[dict, int]:
    ctx, trunc = _ctx(cfg), _trunc(cfg)
    family = cfg["family"]
    params = build_params(family, cfg["params"])
    rows = []
    for t in _t_list(cfg):
        row = {"t": t, "tau": complex(tau(ctx, params, t, trunc))}
        for i in cfg["indices"]:
            row[f"tau{i}"] = complex(tau_shifted(ctx, params, i, t, trunc))
        if cfg["yz"] and t != 0:
            y, z = yz(ctx, params, t, trunc)
            row["y"], row["z"] = complex(y), complex(z)
        rows.append(row)
    return {"command": "eval", "config": cfg, "rows": rows}, EXIT_OK


def family_reports(ctx: QContext, family: str, params, t, trunc, tol: float) -> list[ResidualReport]:
    """Every residual report available for one family at one ``t``."""
    out = list(equation_residual(ctx, params, t, trunc, tol))
    if family in ("VI", "V"):
        out += equation_residual(ctx, params, t, trunc, tol, form="conjecture")
    out += bilinear_residuals(ctx, params, t, trunc, tol)
    if family == "III1":
        out += backlund_iii1_check(ctx, params, t, trunc, tol)
    elif family == "III3A":
        out += a7prime_form_residual(ctx, params, t, trunc, tol)
    elif family == "III3B":
        out.append(five_term_residual(ctx, params, t, trunc, tol))
        out.append(g_reduction(ctx, params, t, trunc, tol)[1])
    return out


def suite_reports(q: float, seed: int, trunc: TruncationSpec, tol: float) -> list[ResidualReport]:
    # special-function and Nekrasov identities are exact up to rounding
    rows = []
    for name, err in qcore.identity_suite(q, seed=seed).items():
        rows.append(make_report(f"QCORE.{name}", [1.0 + err, -1.0], trunc, 0.0, tol, PROVED))
    for name, err in nekrasov.identity_suite(q, seed=seed).items():
        rows.append(make_report(f"NEK.{name}", [1.0 + err, -1.0], trunc, 0.0, tol, PROVED))
    return rows


def _report_row(family: str, r: ResidualReport) -> dict:
    return {
        "id": r.identity_id,
        "family": family,
        "status": r.status,
        "t": r.t,
        "residual": r.residual,
        "relative": r.relative,
        "lhs_scale": r.lhs_scale,
        "pass": r.passed,
        "n_max": r.trunc.n_max,
        "w": r.trunc.w,
    }


def _selected(identity_id: str, patterns: list[str]) -> bool:
    return not patterns or any(fnmatch.fnmatchcase(identity_id, p) for p in patterns)


def cmd_verify(cfg: dict, single_thread: bool = True) -> tuple[dict, int]:
    ctx, trunc = _ctx(cfg), _trunc(cfg)
    tol = float(cfg["tolerance"])
    families = FAMILIES if cfg["family"] == "all" else (cfg["family"],)
    pfor = cfg["params"] if cfg["family"] == "all" else {cfg["family"]: cfg["params"]}
    jobs = [(fam, t) for fam in families for t in _t_list(cfg)]

    def run(job):
        fam, t = job
        return fam, family_reports(ctx, fam, build_params(fam, pfor[fam]), t, trunc, tol)

    if single_thread:
        results = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(run, jobs))  # map keeps job order
    rows = [
        _report_row("special", r)
        for r in suite_reports(ctx.q, cfg["seed"], trunc, tol)
        if _selected(r.identity_id, cfg["filter"])
    ]
    for fam, reps in results:
        rows += [_report_row(fam, r) for r in reps if _selected(r.identity_id, cfg["filter"])]
    failed = any(r["status"] == PROVED and not r["pass"] for r in rows)
    return {"command": "verify", "config": cfg, "rows": rows}, EXIT_FAILED if failed else EXIT_OK


def cmd_degenerate(cfg: dict) -> tuple[dict, int]:
    ctx, trunc = _ctx(cfg), _trunc(cfg)
    step = cfg["step"]
    params = build_params(TARGET_FAMILY[step], cfg["params"])
    lams = [_real(x, "lambdas") for x in cfg["lambdas"]]
    sweep = convergence_sweep(ctx, step, params, _number(cfg["t1"], "t1"), lams, trunc)
    rows = []
    for r in sweep.rows:
        if r.skipped is not None:
            rows.append({"lambda": r.lam, "source": None, "target": None, "error": None,
                         "max_error": None, "skipped": r.skipped})
            continue
        for (src, tgt), err in r.errors:
            rows.append({"lambda": r.lam, "source": src, "target": tgt, "error": err,
                         "max_error": r.max_error, "skipped": None})
    report = {
        "command": "degenerate",
        "config": cfg,
        "rows": rows,
        "fitted_ratio": sweep.fitted_ratio,
        "convergent": sweep.convergent,
    }
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtau", description="q-Painleve tau functions from q-Nekrasov series.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("eval", "evaluate tau functions and (y, z)"),
        ("verify", "residuals of equations and bilinear identities"),
        ("degenerate", "finite-Lambda degeneration sweep"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="JSON config file (defaults used if omitted)")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default=None)
        sp.add_argument("--single-thread", action="store_true", help="deterministic serial evaluation")
        if name == "verify":
            sp.add_argument("--tolerance", type=float)
            sp.add_argument("--filter", action="append", help="glob on identity ids (repeatable)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        raw = None
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        fmt = args.format or (raw or {}).get("format", "json")
        if fmt not in ("json", "csv"):
            raise ConfigError(f"unknown format {fmt!r}")
        cfg = resolve_config(args.command, raw)
        if args.command == "verify":
            if args.tolerance is not None:
                if not args.tolerance > 0:
                    raise ConfigError("tolerance must be positive")
                cfg["tolerance"] = args.tolerance
            if args.filter:
                cfg["filter"] = list(args.filter)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "eval":
            report, code = cmd_eval(cfg)
        elif args.command == "verify":
            report, code = cmd_verify(cfg, single_thread=args.single_thread)
        else:
            report, code = cmd_degenerate(cfg)
    except ArithmeticError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    text = render(report, fmt)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
