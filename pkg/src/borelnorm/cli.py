"""Command line interface.

    borelnorm domain-info CONFIG
    borelnorm norm {pbeta,galpha} CONFIG
    borelnorm verify {CHECK,all} CONFIG [--out DIR] [--jobs N]
    borelnorm report DIR

Exit codes: 0 everything passed, 1 a check failed (or a norm diverged),
2 configuration or input error.
"""

import argparse
import sys

from . import constants as cst
from .config import ConfigError, load_config
from .expsum import standard_family
from .norms import NormDivergent, galpha_norm, pbeta_norm
from .report import read_records, summarize, write_reports
from .verify import CHECK_IDS, adapt, describe, run_all

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _err(msg):
    print(f"borelnorm: {msg}", file=sys.stderr)


def cmd_domain_info(args, config):
    for dom in config.domains:
        met = dom.metrics
        print(describe(dom))
        print(f"  sigma     {met.sigma:.15g}")
        print(f"  diam      {met.diam:.15g}")
        print(f"  R         {met.R:.15g}")
        print(f"  area      {met.area:.15g}")
        print(f"  perimeter {met.perimeter:.15g}")
        print(f"  segments  {len(dom.atoms)}")
        eps = config.eps if config.eps is not None else 0.5 * met.sigma
        for beta in config.betas or (0.0,):
            cb = cst.constant_bundle(beta, dom, eps, config.a_abs, config.A_abs)
            print(f"  beta={beta:g}: c={cb.c:.6e} C={cb.C:.6e} m={cb.m:.6e} "
                  f"M={cb.M:.6e} M0={cb.M0:.6e}")
    return EXIT_OK


def cmd_norm(args, config):
    status = EXIT_OK
    funcs = config.functions or tuple(standard_family())
    print("domain,func_id,param,value,error_estimate")
    if args.kind == "pbeta":
        params, name = config.betas or (0.0,), "beta"
    else:
        params, name = config.alphas or (1.0,), "alpha"
    for dom in config.domains:
        for p in params:
            for f in funcs:
                g = adapt(f, p) if name == "beta" else f
                try:
                    if name == "beta":
                        val = pbeta_norm(dom, g, p, config.spec)
                    else:
                        val = galpha_norm(dom, g, p, config.eps, config.spec)
                except (NormDivergent, ValueError) as exc:
                    print(f"{describe(dom)},{g.name},{name}={p:g},divergent,{exc}")
                    status = EXIT_FAIL
                    continue
                print(f"{describe(dom)},{g.name},{name}={p:g},{val.value!r},"
                      f"{val.error_estimate!r}")
    return status


def cmd_verify(args, config):
    checks = CHECK_IDS if args.check == "all" else (args.check,)
    records = run_all(config, checks, jobs=args.jobs)
    out = args.out or config.output_dir
    try:
        paths = write_reports(records, out, config.formats)
    except OSError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    summary = summarize(records)
    for cid in checks:
        s = summary.get(cid, {"pass": 0, "fail": 0})
        flag = "PASS" if s["fail"] == 0 else "FAIL"
        print(f"{flag} {cid}: {s['pass']} passed, {s['fail']} failed")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


def cmd_report(args):
    try:
        records = read_records(args.dir)
    except (OSError, ValueError, KeyError) as exc:
        _err(f"cannot read report in {args.dir}: {exc}")
        return EXIT_CONFIG
    for cid, s in summarize(records).items():
        flag = "PASS" if s["fail"] == 0 else "FAIL"
        print(f"{flag} {cid}: {s['pass']} passed, {s['fail']} failed")
    failed = [r for r in records if not r.passed]
    for r in failed:
        print(f"  failed: {r.check_id} {r.domain} beta={r.beta} {r.func_id} "
              f"lhs={r.lhs:.6g} rhs={r.rhs:.6g} margin={r.margin:.3g} {r.note}")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="borelnorm",
        description="Weighted norms of entire functions and of their Borel transforms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("domain-info", help="print geometric metrics and constants")
    p.add_argument("config")

    p = sub.add_parser("norm", help="compute P_beta or G^alpha norms")
    p.add_argument("kind", choices=("pbeta", "galpha"))
    p.add_argument("config")

    p = sub.add_parser("verify", help="run verification checks and write reports")
    p.add_argument("check", choices=CHECK_IDS + ("all",))
    p.add_argument("config")
    p.add_argument("--out", help="report directory (overrides [output] dir)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("report", help="summarise reports written by 'verify'")
    p.add_argument("dir")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.command == "report":
        return cmd_report(args)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        _err(f"configuration error: {exc}")
        return EXIT_CONFIG
    if args.command == "domain-info":
        return cmd_domain_info(args, config)
    if args.command == "norm":
        return cmd_norm(args, config)
    if args.jobs < 1:
        _err("--jobs must be at least 1")
        return EXIT_CONFIG
    return cmd_verify(args, config)


if __name__ == "__main__":
    sys.exit(main())
