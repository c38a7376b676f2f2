"""Command line entry point: ``nlsblowup {run,sweep,predict,compare,catalog}``."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

from . import catalog
from .config import dump_config, load_config, parse_text
from .diagnostics import write_diag_csv
from .harness import (AXES, ConfigError, RefineSpec, compare_schemes, report_lines, run_single,
                      run_sweep, write_report, write_sweep_csv)
from .theory import predict_conformal

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


def _values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value list {text!r}") from None


def _common(p: argparse.ArgumentParser, config_required=False):
    p.add_argument("-c", "--config", required=config_required, help="config file")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config entry, e.g. grid.Np=4096 (repeatable)")
    p.add_argument("--no-refine", action="store_true", help="single run per point, no dt halving")
    p.add_argument("-o", "--out", default=".", help="output directory (default: .)")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nlsblowup", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="integrate one configuration, write diag.csv")
    _common(p, config_required=True)

    p = sub.add_parser("sweep", help="sweep one parameter, write sweep.csv and report.txt")
    _common(p, config_required=True)
    p.add_argument("--axis", choices=AXES)
    p.add_argument("--values", type=_values)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("predict", help="conformal-law blow-up times aT/(a+T)")
    p.add_argument("--T", type=float, required=True, help="blow-up time without chirp")
    p.add_argument("--a", type=_values, required=True, help="chirp scales")
    p.add_argument("-o", "--out", help="also write predict.csv to this directory")

    p = sub.add_parser("compare", help="run TSSP and RS on the same configuration")
    _common(p, config_required=True)

    p = sub.add_parser("catalog", help="run a named experiment from the catalog")
    p.add_argument("name", nargs="?", help="entry name, e.g. test4; omit with --list")
    p.add_argument("--list", action="store_true", help="list entries and exit")
    p.add_argument("--values", type=_values, help="replace the entry's parameter values")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("-o", "--out", default=".")
    return ap


def _outdir(path) -> Path:
    d = Path(path)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _maybe_unrefined(cfg, args):
    if args.no_refine:
        cfg = replace(cfg, refine=RefineSpec(enabled=False))
    return cfg


def _verdict_line(label, v) -> str:
    if not v.blew_up:
        return f"{label}: no blow-up"
    flag = "" if v.detection == "threshold" else f" [{v.detection}]"
    return (f"{label}: T* = {v.t_star!r}, humps = {v.humps_at_blowup}, "
            f"converged = {str(v.resolution_converged).lower()}{flag}")


def _cmd_run(args) -> int:
    cfg, _ = load_config(args.config, args.overrides)
    cfg = _maybe_unrefined(cfg, args)
    res = run_single(cfg)
    out = _outdir(args.out)
    write_diag_csv(out / "diag.csv", res.records)
    print(_verdict_line("run", res.verdict))
    return EXIT_SOLVER if res.verdict.detection == "solver_failure" else EXIT_OK


def _finish_sweep(result, cfg, out) -> int:
    write_sweep_csv(out / "sweep.csv", result)
    write_report(out / "report.txt", result, cfg.model.n, cfg.model.sigma)
    for r in result.rows:
        print(_verdict_line(f"{result.axis} = {r.param!r}", r.verdict))
    print("\n".join(report_lines(result)))
    if any(r.verdict.detection == "solver_failure" for r in result.rows):
        return EXIT_SOLVER
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg, spec = load_config(args.config, args.overrides)
    cfg = _maybe_unrefined(cfg, args)
    axis = args.axis or (spec and spec.axis)
    values = args.values or (spec and list(spec.values))
    workers = args.workers or (spec.workers if spec else 1)
    if not axis or not values:
        raise ConfigError("a sweep needs an axis and values ([sweep] section or --axis/--values)")
    result = run_sweep(cfg, axis, values, workers)
    return _finish_sweep(result, cfg, _outdir(args.out))


def _cmd_predict(args) -> int:
    rows = []
    for a in args.a:
        o = predict_conformal(args.T, a)
        rows.append([repr(a), "" if o.t is None else repr(o.t), str(o.blows_up).lower()])
        print(f"a = {a!r}: " + (f"T_a = {o.t!r}" if o.blows_up else "global existence"))
    if args.out:
        with open(_outdir(args.out) / "predict.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["a", "predicted_t_star", "blows_up"])
            w.writerows(rows)
    return EXIT_OK


def _cmd_compare(args) -> int:
    cfg, _ = load_config(args.config, args.overrides)
    cfg = _maybe_unrefined(cfg, args)
    cmp = compare_schemes(cfg)
    print(_verdict_line("tssp", cmp.tssp))
    print(_verdict_line("rs", cmp.rs))
    print("gap = " + ("n/a" if cmp.gap is None else repr(cmp.gap)))
    with open(_outdir(args.out) / "compare.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["scheme", "t_star", "blew_up", "humps", "converged"])
        for name, v in (("tssp", cmp.tssp), ("rs", cmp.rs)):
            w.writerow([name, "" if v.t_star is None else repr(v.t_star), str(v.blew_up).lower(),
                        "" if v.humps_at_blowup is None else v.humps_at_blowup,
                        str(v.resolution_converged).lower()])
    failed = "solver_failure" in (cmp.tssp.detection, cmp.rs.detection)
    return EXIT_SOLVER if failed else EXIT_OK


def _cmd_catalog(args) -> int:
    if args.list or not args.name:
        for e in catalog.CATALOG.values():
            print(f"{e.name:9s} {e.axis:12s} {e.title}")
        return EXIT_OK
    entry = catalog.get(args.name)
    cfg = entry.base
    if args.overrides:
        cfg, _ = parse_text(dump_config(cfg), args.overrides)
    cfg = _maybe_unrefined(cfg, args)
    values = args.values or list(entry.values)
    result = run_sweep(cfg, entry.axis, values, args.workers)
    out = _outdir(args.out)
    (out / "config.ini").write_text(dump_config(cfg))
    return _finish_sweep(result, cfg, out)


_COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "predict": _cmd_predict,
             "compare": _cmd_compare, "catalog": _cmd_catalog}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.cmd](args)
    except ValueError as exc:  # ConfigError and validation errors from the model types
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
