"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 numerical failure (a tolerance
was not met).  Every artifact embeds the tool version and the full
parameter set; JSON is written with sorted keys so identical requests give
identical bytes.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from . import __version__
from .abscissa import absolute_abscissa, bohr_cahen_pointwise, bohr_cahen_uniform
from .catalog import catalog_list, get_entry
from .errors import NumericalFailure, ParseError, ToleranceFailure, ValidationError
from .series import DirichletSeries, RieszSpec, riesz_limit, summatory
from .spaces import EvalGrid, NormSpec, far_left_profile, limit_function, norm_inf_ell
from .transforms import QuadratureConfig, perron_summatory, recover_coefficients

def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` (also ``a``, ``bi``, ``a-bi``; ``j`` accepted for ``i``)."""
    t = text.strip().replace(" ", "")
    try:
        return complex(t.replace("i", "j").replace("I", "j"))
    except ValueError:
        raise ParseError(f"cannot parse complex number {text!r}; use the form a+bi") from None


def parse_range(text: str, what: str) -> np.ndarray:
    """``lo:hi:n`` (log spacing for sigma grids) or a comma list."""
    try:
        if ":" in text:
            lo, hi, n = text.split(":")
            return np.geomspace(float(lo), float(hi), int(n)) if what == "sigma" \
                else np.linspace(float(lo), float(hi), int(n))
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ParseError(f"cannot parse {what} grid {text!r}") from None


def parse_t_grid(text: str) -> np.ndarray:
    """``T:n`` gives ``n`` points on ``[-T, T]``; a comma list is used as is."""
    try:
        if ":" in text:
            T, n = text.split(":")
            return np.linspace(-float(T), float(T), int(n))
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ParseError(f"cannot parse t grid {text!r}") from None


def _num(v):
    if isinstance(v, complex):
        return [_num(v.real), _num(v.imag)]
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _load(args):
    """Resolve ``--catalog`` / ``--series`` into (series, oracle or None)."""
    if args.catalog and args.series:
        raise ValidationError("give either --catalog or --series, not both")
    if args.catalog:
        e = get_entry(args.catalog)
        return e.series, e.oracle
    if args.series:
        try:
            with open(args.series) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read series JSON: {exc}") from exc
        return DirichletSeries.from_dict(data), None
    raise ValidationError("an input is required: --catalog NAME or --series FILE")


def _default_xmax(D: DirichletSeries) -> float:
    label = D.frequency.kind
    if label == "log":
        return math.log(1e6)
    if label == "power":
        return 1000.0
    return 200.0


def _cfg(args, **over) -> QuadratureConfig:
    kw = dict(truncation_T=args.truncation_T, contour_c=args.contour_c)
    if args.tolerance is not None:
        kw["tolerance"] = args.tolerance
    kw.update(over)
    return QuadratureConfig(**kw)


def _params(args) -> dict:
    d = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    return {k: _num(v) for k, v in d.items()}


def _cmd_eval(args):
    D, _ = _load(args)
    s = parse_complex(args.s)
    x_max = args.x_max or _default_xmax(D)
    x_min = args.x_min or x_max / 10
    schedule = np.linspace(x_min, x_max, args.samples)
    tol = args.tolerance if args.tolerance is not None else 1e-2
    rep = riesz_limit(D, RieszSpec(args.k, args.kind), s, schedule, tol, args.estimator)
    result = rep.to_dict()
    rows = [(x, v.real, v.imag) for x, v in rep.samples]
    failure = None if rep.converged else f"tail_delta {rep.tail_delta:.3g} >= tolerance {tol:.3g}"
    return result, (["x", "re", "im"], rows), failure


def _cmd_abscissa(args):
    D, _ = _load(args)
    x_max = args.x_max or _default_xmax(D)
    xs = np.linspace(x_max / 100, x_max, args.samples)
    out = {
        "pointwise": bohr_cahen_pointwise(D, args.k, xs, args.kind).to_dict(),
        "absolute": absolute_abscissa(D, xs).to_dict(),
    }
    if args.grid_t:
        out["uniform"] = bohr_cahen_uniform(D, args.k, xs, parse_t_grid(args.grid_t), args.kind).to_dict()
    rows = [(x, v) for x, v in bohr_cahen_pointwise(D, args.k, xs, args.kind).slope_trace]
    return out, (["x", "slope"], rows), None


def _cmd_perron(args):
    D, oracle = _load(args)
    f = oracle or limit_function(D)
    x = args.x if args.x is not None else (args.x_max or 3.0)
    # k=1 tails decay like 1/T; 1e-6 would need millions of panels
    cfg = _cfg(args) if args.tolerance is not None else _cfg(args, tolerance=2e-4)
    res = perron_summatory(f, args.k, x, cfg)
    direct = summatory(D, args.k, 0.0, x)
    out = {"perron": res.to_dict(), "direct": _num(complex(direct)), "x": x,
           "abs_error": abs(res.value - direct)}
    return out, None, None


def _cmd_recover(args):
    D, oracle = _load(args)
    f = oracle or limit_function(D)
    cfg = _cfg(args) if args.tolerance is not None else _cfg(args, tolerance=1e-3)
    coeffs = recover_coefficients(f, D.frequency, args.k, args.n_max, cfg)
    actual = D.coefficients_upto(args.n_max)
    out = {"recovered": [_num(complex(c)) for c in coeffs],
           "series_coefficients": [_num(complex(c)) for c in actual],
           "max_abs_error": float(np.max(np.abs(np.array(coeffs) - actual)))}
    rows = [(n + 1, c.real, c.imag) for n, c in enumerate(coeffs)]
    return out, (["n", "re", "im"], rows), None


def _cmd_norm(args):
    D, oracle = _load(args)
    f = oracle or limit_function(D)
    sig = parse_range(args.grid_sigma, "sigma")
    t = parse_t_grid(args.grid_t or "50:1001")
    grid = EvalGrid(sig, t)
    est = norm_inf_ell(f, NormSpec(args.ell, grid))
    prof = far_left_profile(f, args.ell, sig[::-1], t)
    out = {"norm": est.to_dict(), "far_left_profile": [[a, b] for a, b in prof]}
    return out, (["sigma", "value"], prof), None


def _cmd_catalog(args):
    return {"entries": [e.to_dict() for e in catalog_list()]}, None, None


def _cmd_verify(args):
    from .verify import run_suite

    rows = run_suite()
    width = max(len(r["check"]) for r in rows)
    for r in rows:
        print(f"{r['check']:<{width}}  {'PASS' if r['passed'] else 'FAIL'}  {r['detail']}")
    failed = [r["check"] for r in rows if not r["passed"]]
    return {"rows": rows}, None, (f"failed checks: {', '.join(failed)}" if failed else None)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="riesz-lab", description="Riesz summation of general Dirichlet series")
    p.add_argument("--version", action="version", version=f"riesz-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, k_default=1.0):
        sp.add_argument("--catalog", help="catalog entry name")
        sp.add_argument("--series", help="series JSON file")
        sp.add_argument("--k", type=float, default=k_default, help="Riesz order")
        sp.add_argument("--kind", choices=("first", "second"), default="first")
        sp.add_argument("--out", help="artifact path (.json, or .csv for traces)")
        sp.add_argument("--tolerance", type=float)
        sp.add_argument("--contour-c", dest="contour_c", type=float)
        sp.add_argument("--truncation-T", dest="truncation_T", type=float)
        sp.add_argument("--x-max", dest="x_max", type=float)
        sp.add_argument("--ell", type=float, default=0.0)
        sp.add_argument("--s", default="0")
        sp.add_argument("--grid-sigma", dest="grid_sigma", default="0.001:20:40")
        sp.add_argument("--grid-t", dest="grid_t")

    sp = sub.add_parser("eval", help="Riesz limit along a schedule")
    common(sp)
    sp.add_argument("--x-min", dest="x_min", type=float)
    sp.add_argument("--samples", type=int, default=40)
    sp.add_argument("--estimator", choices=("last", "tail-average", "richardson"), default="last")
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("abscissa", help="Bohr-Cahen abscissa estimates")
    common(sp, 0.0)
    sp.add_argument("--samples", type=int, default=200)
    sp.set_defaults(func=_cmd_abscissa)

    sp = sub.add_parser("perron", help="summatory function by contour inversion")
    common(sp)
    sp.add_argument("--x", type=float)
    sp.set_defaults(func=_cmd_perron)

    sp = sub.add_parser("recover", help="coefficients from the limit function")
    common(sp, 2.0)
    sp.add_argument("--n-max", dest="n_max", type=int, default=5)
    sp.set_defaults(func=_cmd_recover)

    sp = sub.add_parser("norm", help="weighted sup-norm and far-left profile")
    common(sp)
    sp.set_defaults(func=_cmd_norm)

    sp = sub.add_parser("catalog", help="list catalog entries")
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_catalog)

    sp = sub.add_parser("verify", help="run the invariant suite over the catalog")
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_verify)
    return p


def _write(args, result: dict, table, stream) -> None:
    if args.out and args.out.endswith(".csv"):
        if table is None:
            raise ValidationError("this command has no tabular output; use a .json path")
        header, rows = table
        with open(args.out, "w", newline="") as fh:
            fh.write(f"# riesz-lab {__version__} {args.command} "
                     f"{json.dumps(_params(args), sort_keys=True)}\n")
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
        return
    artifact = {"tool": "riesz-lab", "version": __version__, "command": args.command,
                "parameters": _params(args), "result": result}
    text = json.dumps(artifact, sort_keys=True, indent=2, default=_num)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        stream.write(text + "\n")


@contextlib.contextmanager
def _thread_cap():
    n = os.environ.get("RIESZ_LAB_THREADS")
    if not n:
        yield
        return
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        yield
        return
    with threadpool_limits(limits=int(n)):
        yield


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        with _thread_cap():
            result, table, failure = args.func(args)
            # verify prints its own table; its JSON goes to --out only
            if args.command != "verify" or args.out:
                _write(args, result, table, sys.stdout)
        if failure:
            raise ToleranceFailure(failure)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
