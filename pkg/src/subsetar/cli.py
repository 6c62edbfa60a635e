"""Command-line driver: ``subsetar <command> ...``.

Input series are files with one value per line (an optional header line
is skipped) or ``@name`` for a bundled dataset.  Human-readable tables go
to stdout with 6 significant digits; ``--out`` writes full-precision
machine output.  Errors print ``subsetar: E###: message`` on stderr and
exit nonzero (2 for usage errors, 1 otherwise).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, datasets
from .core import (
    InvalidConfig,
    IoError,
    NegativeBase,
    SubsetARError,
    ZetaVector,
    center,
    validate_subset,
)
from .diagnostics import diagnose
from .forecast import forecast, holdout_eval, simulate
from .io import dumps, file_digest, read_series_file, write_series_file
from .likelihood import fit_mle
from .pacf import estimate_pacf
from .selection import CRITERIA, SelectionConfig, rescore_exact, select_models

PROG = "subsetar"
USAGE_CODE = "E502"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{PROG}: {USAGE_CODE}: {message}\n")


def _g(x) -> str:
    return "nan" if x is None or not np.isfinite(x) else f"{x:.6g}"


def _lag_list(text: str) -> tuple:
    parts = text.split(",")
    try:
        lags = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed lag list {text!r}") from None
    if any(k < 1 for k in lags):
        raise argparse.ArgumentTypeError(f"lags must be positive: {text!r}")
    return validate_subset(lags).lags


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number list {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _alpha(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {v}")
    return v


# input / output ---------------------------------------------------------------

def _load_input(args):
    """Raw values (after the optional power transform) and an input record."""
    src = args.input
    path = datasets.dataset_path(src[1:]) if src.startswith("@") else Path(src)
    if not path.is_file():
        raise IoError(f"cannot read input file {src!r}")
    values = read_series_file(path)
    if args.power != 1.0:
        if np.any(values < 0) and not float(args.power).is_integer():
            raise NegativeBase(f"fractional power {args.power} of negative data")
        values = np.power(values, args.power)
    record = {"source": src, "digest": file_digest(path), "n": int(values.size),
              "power": args.power}
    return values, record


def _config(args) -> dict:
    skip = {"func", "input", "power"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _report(args, record=None, **sections) -> dict:
    doc = {"tool": PROG, "version": __version__, "command": args.command,
           "config": _config(args)}
    if record is not None:
        doc["input"] = record
    doc.update(sections)
    return doc


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _model_doc(fit) -> dict:
    return {
        "spec": list(fit.spec.lags),
        "label": str(fit.spec),
        "zeta": fit.zeta.values,
        "stderr": fit.stderr,
        "phi": fit.phi.values,
        "mean": fit.mean,
        "sigma2": fit.sigma2,
        "loglik": fit.loglik,
        "aic": fit.aic,
        "bic": fit.bic,
        "n": fit.n,
        "info": fit.info,
        "converged": fit.converged,
        "iterations": fit.n_iter,
    }


def _print_model(fit, out=None):
    out = out or sys.stdout
    print(f"{fit.spec}  n={fit.n}  mean={_g(fit.mean)}", file=out)
    print(f"{'lag':>5} {'zeta':>12} {'stderr':>12}", file=out)
    for k, z, s in zip(fit.spec.lags, fit.zeta.values, fit.stderr):
        print(f"{k:>5} {_g(z):>12} {_g(s):>12}", file=out)
    print(f"sigma2={_g(fit.sigma2)}  loglik={_g(fit.loglik)}  "
          f"aic={_g(fit.aic)}  bic={_g(fit.bic)}", file=out)


# commands ---------------------------------------------------------------------

def cmd_pacf(args):
    values, _ = _load_input(args)
    tab = estimate_pacf(values, args.lags, args.method)
    lo, hi = tab.bands(1.96)
    lines = ["lag\tvalue\tlo\thi\n"]
    lines += [f"{k}\t{v!r}\t{a!r}\t{b!r}\n"
              for k, v, a, b in zip(tab.lags.tolist(), tab.values.tolist(),
                                    lo.tolist(), hi.tolist())]
    _write(args.out, "".join(lines))


def cmd_select(args):
    values, record = _load_input(args)
    cfg = SelectionConfig(args.max_order, args.max_params, args.top,
                          args.criterion, args.exhaustive)
    cands = select_models(values, cfg)
    if args.exact:
        cands = rescore_exact(values, cands, args.criterion)
    head = f"{'rank':>4} {'model':<40} {'m':>3} "
    if args.exact:
        head += f"{'loglik':>12} {args.criterion:>12}"
    else:
        head += f"{args.criterion + '_zeta':>12}"
    print(head)
    rows = []
    for i, c in enumerate(cands, 1):
        line = f"{i:>4} {str(c.spec):<40} {c.m:>3} "
        if args.exact:
            line += f"{_g(c.loglik):>12} {_g(c.score):>12}"
        else:
            line += f"{_g(c.score):>12}"
        if c.error:
            line += f"  [{c.error}]"
        print(line)
        rows.append({"rank": i, "spec": list(c.spec.lags), "order": list(c.order),
                     "m": c.m, "score": c.score, "approximate": c.approximate,
                     "loglik": c.loglik, "aic": c.aic, "bic": c.bic, "error": c.error})
    if args.out:
        _write(args.out, dumps(_report(args, record, candidates=rows)))


def cmd_fit(args):
    values, record = _load_input(args)
    fit = fit_mle(values, args.lags)
    _print_model(fit)
    if args.out:
        _write(args.out, dumps(_report(args, record, model=_model_doc(fit))))


def _q_lags(m: int, L: int) -> list:
    picks = [k for k in range(5, L + 1, 5) if k > m]
    if L > m and L not in picks:
        picks.append(L)
    return picks


def cmd_diagnose(args):
    values, record = _load_input(args)
    ts = center(values)
    fit = fit_mle(ts, args.lags)
    rep = diagnose(ts, fit, args.acf_lags, args.alpha)
    _print_model(fit)
    print(f"\nresidual autocorrelations, Bonferroni multiplier {_g(rep.multiplier)}")
    print(f"{'lag':>5} {'r':>12} {'band':>12}")
    for k in range(rep.lag_max):
        flag = "  *" if abs(rep.racf[k]) > rep.half_width[k] else ""
        print(f"{k + 1:>5} {_g(rep.racf[k]):>12} {_g(rep.half_width[k]):>12}{flag}")
    table = rep.portmanteau_table(_q_lags(rep.m, rep.lag_max))
    print(f"\n{'L':>5} {'Q':>12} {'df':>5} {'p-value':>12}")
    for L, Q, df, pv in table:
        print(f"{L:>5} {_g(Q):>12} {df:>5} {_g(pv):>12}")
    if args.plot:
        lines = ["lag\tvalue\tlo\thi\n"]
        lines += [f"{k + 1}\t{r!r}\t{-h!r}\t{h!r}\n"
                  for k, (r, h) in enumerate(zip(rep.racf.tolist(), rep.half_width.tolist()))]
        _write(args.plot, "".join(lines))
    if args.out:
        diag = {
            "lag_max": rep.lag_max, "racf": rep.racf, "stderr": rep.stderr,
            "multiplier": rep.multiplier, "half_width": rep.half_width,
            "violations": rep.violations, "alpha": rep.alpha,
            "portmanteau": [{"L": L, "Q": Q, "df": df, "pvalue": pv}
                            for L, Q, df, pv in table],
        }
        _write(args.out, dumps(_report(args, record, model=_model_doc(fit),
                                       diagnostics=diag)))


def cmd_forecast(args):
    values, record = _load_input(args)
    if args.split is not None:
        if not 1 <= args.split < values.size:
            raise InvalidConfig(f"--split must lie in [1, n) with n={values.size}")
        rep = holdout_eval(values, args.split, [args.lags], phi_lags=args.phi_lags)
        print(f"train={rep.train} test={rep.test}")
        print(f"{'model':<32} {'m':>3} {'loglik':>12} {'bic':>12} {'sigma':>12} {'rmse':>12}")
        rows = []
        for r in rep.rows:
            print(f"{r.label:<32} {r.m:>3} {_g(r.loglik):>12} {_g(r.bic):>12} "
                  f"{_g(r.sigma):>12} {_g(r.rmse):>12}" + (f"  [{r.error}]" if r.error else ""))
            rows.append({"label": r.label, "m": r.m, "loglik": r.loglik, "bic": r.bic,
                         "sigma": r.sigma, "rmse": r.rmse, "error": r.error})
        section = {"holdout": {"train": rep.train, "test": rep.test, "rows": rows}}
    else:
        fit = fit_mle(values, args.lags)
        fc = forecast(fit, values, args.horizon)
        lo, hi = fc.interval(1.96)
        print(f"{'h':>4} {'forecast':>12} {'stderr':>12} {'lo95':>12} {'hi95':>12}")
        for h in range(fc.horizon):
            print(f"{h + 1:>4} {_g(fc.mean[h]):>12} {_g(fc.stderr[h]):>12} "
                  f"{_g(lo[h]):>12} {_g(hi[h]):>12}")
        section = {"model": _model_doc(fit),
                   "forecast": {"origin": fc.origin, "mean": fc.mean,
                                "stderr": fc.stderr, "lo95": lo, "hi95": hi}}
    if args.out:
        _write(args.out, dumps(_report(args, record, **section)))


def cmd_simulate(args):
    spec = validate_subset(args.lags)
    if len(args.zeta) != spec.m:
        raise InvalidConfig(f"--zeta needs {spec.m} values for {spec}, got {len(args.zeta)}")
    zeta = ZetaVector(spec, np.array(args.zeta))
    ts = simulate(zeta, args.n, seed=args.seed, mean=args.mean, sigma2=args.sigma2,
                  burn_in=args.burn_in)
    if args.out in (None, "-"):
        sys.stdout.write("".join(repr(float(v)) + "\n" for v in ts.raw))
    else:
        write_series_file(args.out, ts.raw)


# parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Subset autoregression in partial "
                     "autocorrelation form.")
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(p):
        p.add_argument("input", help="series file, or @name for a bundled dataset "
                       f"({', '.join(sorted(datasets.FILES))})")
        p.add_argument("--power", type=float, default=1.0,
                       help="analyse z**power (e.g. 0.5 for square roots)")
        return p

    p = with_input(sub.add_parser("pacf", help="partial autocorrelation plot data"))
    p.add_argument("--lags", type=_positive_int, default=None, metavar="K")
    p.add_argument("--method", choices=("burg", "yw"), default="burg")
    p.add_argument("--out", default=None, help="TSV output (default stdout)")
    p.set_defaults(func=cmd_pacf)

    p = with_input(sub.add_parser("select", help="rank subsets by information criteria"))
    p.add_argument("--max-order", type=_positive_int, required=True, metavar="L")
    p.add_argument("--max-params", type=_positive_int, required=True, metavar="M")
    p.add_argument("--top", type=_positive_int, default=5, metavar="k")
    p.add_argument("--criterion", choices=CRITERIA, default="bic")
    p.add_argument("--exact", action="store_true", help="refit by exact likelihood")
    p.add_argument("--exhaustive", action="store_true", help="all subsets (L <= 15)")
    p.add_argument("--out", default=None, help="JSON report")
    p.set_defaults(func=cmd_select)

    p = with_input(sub.add_parser("fit", help="exact maximum likelihood fit"))
    p.add_argument("--lags", type=_lag_list, required=True, metavar="i1,i2,..")
    p.add_argument("--out", default=None, help="JSON report")
    p.set_defaults(func=cmd_fit)

    p = with_input(sub.add_parser("diagnose", help="residual autocorrelation checks"))
    p.add_argument("--lags", type=_lag_list, required=True, metavar="i1,i2,..")
    p.add_argument("--acf-lags", type=_positive_int, default=None, metavar="L")
    p.add_argument("--alpha", type=_alpha, default=0.05)
    p.add_argument("--plot", default=None, help="TSV plot data (lag, r, lo, hi)")
    p.add_argument("--out", default=None, help="JSON report")
    p.set_defaults(func=cmd_diagnose)

    p = with_input(sub.add_parser("forecast", help="holdout evaluation or forecasts"))
    p.add_argument("--lags", type=_lag_list, required=True, metavar="i1,i2,..")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--split", type=int, metavar="t0", help="fit on the first t0 values")
    g.add_argument("--horizon", type=_positive_int, metavar="h")
    p.add_argument("--phi-lags", type=_lag_list, action="append", default=[],
                   metavar="i1,i2,..", help="classical subset AR comparator (repeatable)")
    p.add_argument("--out", default=None, help="JSON report")
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("simulate", help="simulate an ARzeta series")
    p.add_argument("--lags", type=_lag_list, required=True, metavar="i1,i2,..")
    p.add_argument("--zeta", type=_float_list, required=True, metavar="z1,z2,..")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mean", type=float, default=0.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--out", default=None, help="series file (default stdout)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except InvalidConfig as exc:
        print(f"{PROG}: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except SubsetARError as exc:
        print(f"{PROG}: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{PROG}: {IoError.code}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
