"""Command-line front end: ``hardysharp <subcommand> [options]``.

Exit codes: 0 every check passed, 1 a check failed, 2 invalid parameters,
regime or cone, 3 divergence or numerical failure (and output I/O errors).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__, catalog, lorentz
from .errors import DivergenceError, HardyError, NumericalFailure, ParameterError
from .funcspace import Exponents, parse_func
from .hardyops import LogVariant
from .report import DEFAULT_TOL, REPORT_FIELDS
from .special import ConstantId, sharp_constant

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_NUMERIC = 0, 1, 2, 3

# RunConfig keys accepted from a JSON config file (flags take precedence)
CONFIG_KEYS = (
    "case", "p", "q", "alpha", "beta", "a", "ell", "f", "tol", "log_weight", "pq_constant",
    "seed", "format", "out", "c", "grid", "which", "id", "workers",
)
DEFAULTS = {"tol": DEFAULT_TOL, "log_weight": "corrected", "pq_constant": "corrected", "seed": 0,
            "format": "json", "c": 0.5, "workers": 1}


def _num(text):
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _common(parser):
    g = parser.add_argument_group("run configuration")
    g.add_argument("--config", help="JSON file with run settings; flags override it")
    g.add_argument("--case", help="catalog id (see `list`)")
    for name in ("p", "q", "alpha", "beta", "a"):
        g.add_argument(f"--{name}", type=_num)
    g.add_argument("--ell", type=_num, help="interval endpoint l; `inf` for infinity")
    g.add_argument("--f", help="function spec, e.g. 'ind:0,0.5,1' or 'step:[1:3;2:1]'")
    g.add_argument("--tol", type=_num)
    g.add_argument("--log-weight", dest="log_weight", choices=[v.value for v in LogVariant])
    g.add_argument("--pq-constant", dest="pq_constant", choices=["corrected", "as-printed"])
    g.add_argument("--seed", type=int)
    g.add_argument("--format", choices=["json", "csv"])
    g.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardysharp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hardysharp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="catalog ids with their equation labels")
    _common(p)
    p = sub.add_parser("verify", help="check one inequality for one function")
    _common(p)
    p = sub.add_parser("equality", help="run the equality family at c")
    _common(p)
    p.add_argument("--c", type=_num, help="family parameter c (default 0.5)")
    p = sub.add_parser("probe", help="sharpness probe over the case's family")
    _common(p)
    p = sub.add_parser("scan", help="verify over a parameter grid")
    _common(p)
    p.add_argument("--grid", help="e.g. 'p=0.5,2;alpha=1' (Cartesian product)")
    p.add_argument("--workers", type=int)
    p = sub.add_parser("constants", help="evaluate a sharp constant by id")
    _common(p)
    p.add_argument("--id", choices=[c.value for c in ConstantId])
    p = sub.add_parser("lorentz", help="Lorentz quasi-norm comparison of a step function")
    _common(p)
    p.add_argument("--which", choices=["eq43", "eq44", "eq45"])
    p = sub.add_parser("equiv", help="substitution identities between inequalities")
    _common(p)
    p.add_argument("--which", choices=["obs21", "thm23fg", "dual53"])
    return parser


def _resolve(args) -> dict:
    cfg = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ParameterError("config file must hold a JSON object")
        unknown = set(data) - set(CONFIG_KEYS)
        if unknown:
            raise ParameterError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.update(data)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    # `list` and `constants` print plain text unless a format is asked for
    cfg["plain"] = "format" not in cfg
    for key, value in DEFAULTS.items():
        cfg.setdefault(key, value)
    for key in ("p", "q", "alpha", "beta", "a", "ell", "tol", "c"):
        if cfg.get(key) is not None:
            cfg[key] = float(cfg[key])
    return cfg


def _exponents(cfg) -> Exponents:
    if cfg.get("p") is None:
        raise ParameterError("--p is required")
    return Exponents(cfg["p"], q=cfg.get("q"), alpha=cfg.get("alpha"), beta=cfg.get("beta"),
                     a=cfg.get("a") or 0.0)


def _case(cfg):
    if not cfg.get("case"):
        raise ParameterError("--case is required")
    return catalog.get_case(cfg["case"])


def _function(cfg, case=None):
    spec = cfg.get("f")
    if not spec:
        raise ParameterError("--f is required")
    base = Path(cfg["config"]).parent if cfg.get("config") else None
    if spec.strip().startswith("step:"):
        return lorentz.parse_step(spec)
    ell = cfg.get("ell")
    return parse_func(spec, ell=ell if ell and 0 < ell < math.inf else 1.0, base_dir=base)


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _rows(reports, seed):
    for rep in reports:
        row = rep.as_dict()
        row["version"] = __version__
        row["seed"] = seed
        yield _jsonable(row)


def emit_report(reports, fmt="json", seed=0) -> bytes:
    """Serialise reports: a JSON array (stable key order) or CSV with a header."""
    reports = list(reports)
    if not reports:
        raise ParameterError("no reports to emit")
    rows = list(_rows(reports, seed))
    if fmt == "json":
        return (json.dumps(rows, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt != "csv":
        raise ParameterError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    fields = list(REPORT_FIELDS) + ["version", "seed"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([json.dumps(row[k], sort_keys=False, ensure_ascii=False)
                         if isinstance(row[k], dict) else ("" if row[k] is None else row[k])
                         for k in fields])
    return buf.getvalue().encode()


def _write(data: bytes, cfg, stdout):
    if cfg.get("out"):
        Path(cfg["out"]).write_bytes(data)
    else:
        stdout.write(data.decode())


def _status(reports):
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _parse_grid(text):
    """``'p=0.5,2;alpha=1'`` -> ``{'p': [0.5, 2.0], 'alpha': [1.0]}``."""
    grid = {}
    for item in (s.strip() for s in text.split(";")):
        if not item:
            continue
        key, sep, values = item.partition("=")
        if not sep:
            raise ParameterError(f"malformed grid item {item!r}")
        try:
            grid[key.strip()] = [float(v) for v in values.split(",") if v.strip()]
        except ValueError:
            raise ParameterError(f"malformed grid values in {item!r}") from None
    return grid


def _cmd_list(cfg, stdout):
    if not cfg["plain"] and cfg["format"] == "json":
        rows = [{"id": c.id, "paper_eq": c.paper_eq, "cone": c.cone.value,
                 "domain": c.kind.value, "parameters": ["p", *c.uses],
                 "equality_family": c.family_text, "probe": c.probe}
                for c in catalog.CASES.values()]
        _write((json.dumps(rows, indent=2, ensure_ascii=False) + "\n").encode(), cfg, stdout)
    else:
        lines = "".join(f"{c.id}\t{c.paper_eq}\n" for c in catalog.CASES.values())
        _write(lines.encode(), cfg, stdout)
    return EXIT_OK


def _cmd_verify(cfg, stdout):
    case = _case(cfg)
    params = _exponents(cfg)
    f = _function(cfg, case)
    rep = catalog.verify(case, f, params, case.domain(cfg.get("ell")), cfg["tol"],
                         log_variant=cfg["log_weight"], pq_constant=cfg["pq_constant"])
    _write(emit_report([rep], cfg["format"], cfg["seed"]), cfg, stdout)
    return _status([rep])


def _cmd_equality(cfg, stdout):
    case = _case(cfg)
    rep = catalog.equality_check(case, _exponents(cfg), case.domain(cfg.get("ell")), cfg["c"],
                                 tol=cfg["tol"] if cfg["tol"] != DEFAULT_TOL else None)
    _write(emit_report([rep], cfg["format"], cfg["seed"]), cfg, stdout)
    return _status([rep])


def _cmd_probe(cfg, stdout):
    case = _case(cfg)
    res = catalog.sharpness_probe(case, _exponents(cfg), case.domain(cfg.get("ell")))
    doc = {**res.as_dict(), "version": __version__, "seed": cfg["seed"]}
    _write((json.dumps(_jsonable(doc), indent=2, ensure_ascii=False) + "\n").encode(), cfg, stdout)
    return EXIT_OK if res.sup_ratio <= 1.0 + 1e-4 else EXIT_FAIL


def _cmd_scan(cfg, stdout):
    case = _case(cfg)
    grid = cfg.get("grid")
    if grid is None:
        raise ParameterError("--grid is required")
    if isinstance(grid, str):
        grid = _parse_grid(grid)
    template = cfg.get("f")
    if not template:
        raise ParameterError("--f is required (a template such as 'pow:1,{alpha}')")
    reports = catalog.scan(case, grid, template, ell=cfg.get("ell"), tol=cfg["tol"],
                           workers=int(cfg["workers"]), log_variant=cfg["log_weight"])
    _write(emit_report(reports, cfg["format"], cfg["seed"]), cfg, stdout)
    return _status(reports)


def _cmd_constants(cfg, stdout):
    if not cfg.get("id"):
        raise ParameterError("--id is required")
    value = sharp_constant(cfg["id"], _exponents(cfg))
    if not cfg["plain"] and cfg["format"] == "json":
        doc = {"id": cfg["id"], "value": list(value) if isinstance(value, tuple) else value,
               "version": __version__}
        _write((json.dumps(_jsonable(doc)) + "\n").encode(), cfg, stdout)
    else:
        text = " ".join(repr(v) for v in value) if isinstance(value, tuple) else repr(value)
        _write((text + "\n").encode(), cfg, stdout)
    return EXIT_OK


def _cmd_lorentz(cfg, stdout):
    which = cfg.get("which")
    if not which:
        raise ParameterError("--which is required")
    spec = cfg.get("f")
    if not spec:
        raise ParameterError("--f is required (step:[m1:v1;...])")
    step = lorentz.parse_step(spec)
    ell = cfg.get("ell")
    rep = lorentz.compare(step, _exponents(cfg), which, ell=math.inf if ell is None else ell,
                          tol=cfg["tol"])
    _write(emit_report([rep], cfg["format"], cfg["seed"]), cfg, stdout)
    return _status([rep])


def _cmd_equiv(cfg, stdout):
    which = cfg.get("which")
    if not which:
        raise ParameterError("--which is required")
    f = _function(cfg)
    tol = cfg["tol"] if cfg["tol"] != DEFAULT_TOL else catalog.EQUALITY_TOL_QUAD
    reports = catalog.equivalence_check(which, f, _exponents(cfg), ell=cfg.get("ell"), tol=tol,
                                        log_variant=cfg["log_weight"])
    _write(emit_report(reports, cfg["format"], cfg["seed"]), cfg, stdout)
    return _status(reports)


COMMANDS = {
    "list": _cmd_list, "verify": _cmd_verify, "equality": _cmd_equality, "probe": _cmd_probe,
    "scan": _cmd_scan, "constants": _cmd_constants, "lorentz": _cmd_lorentz, "equiv": _cmd_equiv,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args)
        cfg["config"] = args.config
        return COMMANDS[args.command](cfg, stdout)
    except (DivergenceError, NumericalFailure) as exc:
        stderr.write(f"hardysharp: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC
    except HardyError as exc:
        stderr.write(f"hardysharp: {type(exc).__name__}: {exc}\n")
        return EXIT_PARAM
    except OSError as exc:
        stderr.write(f"hardysharp: I/O error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
