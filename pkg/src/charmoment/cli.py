"""``charmoment`` command-line interface.

Exit status: 0 on success, 2 on usage errors, 3 when a computation did not
converge (or a ``verify`` check failed).  ``CHARMOMENT_LOG`` selects the log
level: ``quiet`` (default), ``info`` or ``debug``.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import moments as mom
from .constants import c_direct_quadrature, c_plus_gn
from .distributions import DistributionModel, exponential, normal, parse_distribution
from .errors import CapabilityError, ConvergenceError, DomainError, ParameterError
from .quadrature import QuadratureConfig
from .risk import p_alpha, q_alpha

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

HEADER = ("command", "dist", "params", "value_re", "value_im", "err_estimate", "method", "converged")

LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


@dataclass(frozen=True)
class Record:
    command: str
    dist: str
    params: str
    value: complex
    err_estimate: float
    method: str
    converged: bool

    def fields(self) -> tuple[str, ...]:
        return (
            self.command,
            self.dist,
            self.params,
            _num(self.value.real),
            _num(self.value.imag),
            _num(self.err_estimate),
            self.method,
            "true" if self.converged else "false",
        )


def _num(x: float) -> str:
    out = "%.12g" % x
    return "0" if out == "-0" else out


def _fmt_complex(z: complex, digits: int = 8) -> str:
    z = complex(z.real + 0.0, z.imag + 0.0)
    if z.imag == 0:
        return f"{z.real:.{digits}g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.{digits}g} {sign} {abs(z.imag):.{digits}g}i"


def _params(**kw) -> str:
    return ";".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in kw.items() if v is not None)


def emit_records(records: Sequence[Record], stream=None) -> None:
    """Tab-separated records preceded by a fixed header line."""
    stream = stream or sys.stdout
    stream.write("\t".join(HEADER) + "\n")
    for rec in records:
        stream.write("\t".join(rec.fields()) + "\n")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _dist_arg(text: str) -> DistributionModel:
    try:
        return parse_distribution(text)
    except ParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    quad = argparse.ArgumentParser(add_help=False)
    g = quad.add_argument_group("quadrature")
    g.add_argument("--rel-tol", type=float, default=1e-8)
    g.add_argument("--abs-tol", type=float, default=1e-12)
    g.add_argument("--split-b", type=float, default=1.0, help="split point of the t-integrals")
    g.add_argument("--tail-terms", type=int, default=200, help="maximum accelerated tail panels")
    g.add_argument("--output", choices=("text", "records"), default="text")

    dist = argparse.ArgumentParser(add_help=False)
    dist.add_argument("--dist", type=_dist_arg, required=True,
                      help='e.g. "exp(rate=1)", "normal(mean=0, sd=1)", "shift(point(x=1), c=2)"')

    parser = _Parser(prog="charmoment", description="Moments from characteristic functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("moment", parents=[dist, quad], help="E w(X) e^{iuX} for a power weight w")
    p.add_argument("--s", type=float, help="total moment order")
    p.add_argument("--p", type=float, help="order above the derivative order --r")
    p.add_argument("--r", type=float, help="derivative order (use with --p, positive part only)")
    p.add_argument("--u", type=float, default=0.0)
    p.add_argument("--part", choices=("pos", "neg", "abs", "signed"), default="pos")
    p.add_argument("--method", default="auto",
                   choices=("auto", "unsplit", "stabilized", "symdiff", "frac_closed", "zolotarev", "vonbahr", "u0"))
    p.add_argument("--b", type=float, help="split point for the stabilized method")
    p.add_argument("--m", type=int, help="Taylor index (stabilized) or even difference order (symdiff)")
    p.add_argument("--n", type=int, help="odd difference order (symdiff)")

    p = sub.add_parser("cf-pos", parents=[dist, quad], help="characteristic function of X_+")
    p.add_argument("--u", type=float, required=True)

    p = sub.add_parser("cdf", parents=[dist, quad], help="P(X < x) + P(X = x)/2")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--m", type=int, default=0, help="difference order 2m+1 of the inversion")

    p = sub.add_parser("truncated", parents=[dist, quad], help="E conj(X^r) on one side of x")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--side", choices=("below", "above"), default="below")

    p = sub.add_parser("risk", parents=[dist, quad], help="quantile bound (--q) or tail bound (--x)")
    p.add_argument("--alpha", type=float, required=True)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--q", type=float)
    which.add_argument("--x", type=float)
    p.add_argument("--lo", type=float, help="lower end of the search bracket in t")
    p.add_argument("--hi", type=float, help="upper end of the search bracket in t")
    p.add_argument("--grid", type=int, default=64)

    p = sub.add_parser("constants", parents=[quad], help="c+(g_n) closed form against quadrature")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)

    sub.add_parser("verify", parents=[quad], help="run the built-in oracle checks")
    return parser


def _config(ns) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=ns.rel_tol, abs_tol=ns.abs_tol, split_b=ns.split_b,
                            max_tail_terms=ns.tail_terms)


def _method_kwargs(ns) -> dict:
    if ns.method == "symdiff":
        pairs = (("n", ns.n), ("m_even", ns.m))
    elif ns.method in ("stabilized", "auto"):
        pairs = (("b", ns.b), ("m", ns.m))
    else:
        pairs = ()
    return {k: v for k, v in pairs if v is not None}


def _run_moment(ns, cfg, out):
    model = ns.dist
    if ns.r is not None:
        if ns.p is None or ns.s is not None:
            raise _UsageError("--r needs --p (and no --s)")
        if ns.part not in ("pos", "neg"):
            raise _UsageError("--r supports --part pos or neg only")
        kw = _method_kwargs(ns)
        fn = mom.pos_part if ns.part == "pos" else mom.neg_part
        rep = fn(model, ns.p, ns.r, ns.u, ns.method, cfg, **kw)
        params = _params(p=ns.p, r=ns.r, u=ns.u, part=ns.part)
    else:
        s = ns.s if ns.s is not None else ns.p
        if s is None:
            raise _UsageError("give the moment order with --s")
        kw = _method_kwargs(ns)
        rep = mom.moment(model, s, ns.part, ns.u, ns.method, cfg, **kw)
        params = _params(s=s, u=ns.u, part=ns.part)
    rec = Record("moment", model.to_spec(), params, complex(rep.value), rep.err_estimate, rep.method, rep.converged)
    if ns.output == "text":
        weight = {"pos": "X_+", "neg": "X_-", "abs": "|X|", "signed": "X^<s>"}[ns.part]
        order = ns.s if ns.s is not None else (ns.p + (ns.r or 0.0))
        phase = f" e^(i {ns.u:g} X)" if ns.u else ""
        out.write(f"E {weight}^{order:g}{phase} = {_fmt_complex(rec.value)} +/- {rec.err_estimate:.2g}"
                  f"  [{rec.method}{'' if rec.converged else ', NOT converged'}]\n")
    return [rec]


def _run_simple(ns, cfg, out, label: str, params: str, rep) -> list[Record]:
    rec = Record(ns.command, ns.dist.to_spec(), params, complex(rep.value), rep.err_estimate,
                 rep.method, rep.converged)
    if ns.output == "text":
        out.write(f"{label} = {_fmt_complex(rec.value)} +/- {rec.err_estimate:.2g}"
                  f"  [{rec.method}{'' if rec.converged else ', NOT converged'}]\n")
    return [rec]


def _run_cdf(ns, cfg, out):
    res = mom.cdf_halfequal(ns.dist, ns.x, ns.m, cfg)
    rep = mom.MomentReport(res.prob, res.err_estimate, f"halfequal(m={ns.m})", res.converged)
    return _run_simple(ns, cfg, out, f"P(X <. {ns.x:g})", _params(x=ns.x, m=ns.m), rep)


def _run_truncated(ns, cfg, out):
    rep = mom.truncated_moment(ns.dist, ns.r, ns.x, ns.m, ns.side, cfg)
    rel = "<." if ns.side == "below" else ">."
    return _run_simple(ns, cfg, out, f"E X^{ns.r:g} 1(X {rel} {ns.x:g})",
                       _params(r=ns.r, x=ns.x, m=ns.m, side=ns.side), rep)


def _run_cf_pos(ns, cfg, out):
    rep = mom.cf_pos_part(ns.dist, ns.u, cfg)
    return _run_simple(ns, cfg, out, f"E exp(i {ns.u:g} X_+)", _params(u=ns.u), rep)


def _run_risk(ns, cfg, out):
    bracket = None
    if (ns.lo is None) != (ns.hi is None):
        raise _UsageError("give both --lo and --hi or neither")
    if ns.lo is not None:
        bracket = (ns.lo, ns.hi)
    if ns.q is not None:
        res = q_alpha(ns.dist, ns.alpha, ns.q, cfg, bracket, ns.grid)
        label, params, method = f"Q_{ns.alpha:g}(X; {ns.q:g})", _params(alpha=ns.alpha, q=ns.q), "q_alpha"
    else:
        res = p_alpha(ns.dist, ns.alpha, ns.x, cfg, bracket, ns.grid)
        label, params, method = f"P_{ns.alpha:g}(X; {ns.x:g})", _params(alpha=ns.alpha, x=ns.x), "p_alpha"
    params += f";t_star={res.t_star:.12g}"
    if res.flags or res.at_bracket_edge:
        params += ";flags=" + ",".join(res.flags + (("at_bracket_edge",) if res.at_bracket_edge else ()))
    rec = Record("risk", ns.dist.to_spec(), params, complex(res.value), 0.0, method, True)
    if ns.output == "text":
        note = f"  flags: {', '.join(res.flags)}" if res.flags else ""
        edge = "  (minimum at bracket edge)" if res.at_bracket_edge else ""
        out.write(f"{label} = {res.value:.8g} at t = {res.t_star:.8g}{edge}{note}\n")
    return [rec]


def _run_constants(ns, cfg, out):
    closed = c_plus_gn(ns.n, ns.p)
    quad = c_direct_quadrature(ns.n, ns.p, cfg)
    delta = abs(closed.c_plus - quad)
    rec = Record("constants", "-", _params(n=ns.n, p=ns.p), complex(closed.c_plus), delta,
                 closed.branch.value, True)
    if ns.output == "text":
        out.write(f"c+(g_{ns.n}; p={ns.p:g}) = {_fmt_complex(closed.c_plus)}  [{closed.branch.value}]\n")
        out.write(f"quadrature           = {_fmt_complex(quad)}\n")
        out.write(f"|delta|              = {delta:.3g}\n")
    return [rec]


def _verify_checks(cfg):
    """Yield ``(name, got, expected, tolerance, relative)``."""
    for n, p in ((1, 0.5), (2, 1.5), (3, 2.5), (4, 0.7), (5, 3.3), (6, 4.0)):
        yield (f"c+(g_{n}) p={p:g} vs quadrature", c_plus_gn(n, p).c_plus,
               c_direct_quadrature(n, p, cfg), 1e-6, True)
    e = exponential(1.0)
    for meth in ("unsplit", "stabilized", "symdiff", "frac_closed"):
        yield (f"exp(1) E X_+^2.5 {meth}", mom.moment(e, 2.5, "pos", 0.0, meth, cfg).value,
               math.gamma(3.5), 1e-6, True)
    z = normal()
    ref = math.sqrt(2 / math.pi)
    for meth in ("zolotarev", "vonbahr", "symdiff"):
        yield (f"normal E|Z| {meth}", mom.moment(z, 1.0, "abs", 0.0, meth, cfg).value, ref, 1e-6, True)
    for x in (-1.0, 0.0, 1.0):
        yield (f"normal cdf x={x:g} vs erf", mom.cdf_halfequal(z, x, 0, cfg).prob,
               0.5 * (1 + math.erf(x / math.sqrt(2))), 1e-6, False)


def _run_verify(ns, cfg, out):
    records = []
    rows = []
    for name, got, exp, tol, relative in _verify_checks(cfg):
        err = abs(got - exp) / (abs(exp) if relative else 1.0)
        ok = err <= tol
        rows.append((name, got, exp, err, ok))
        records.append(Record("verify", "-", name.replace(" ", "_"), complex(got), err, "oracle", ok))
    if ns.output == "text":
        width = max(len(r[0]) for r in rows)
        for name, got, exp, err, ok in rows:
            out.write(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {_fmt_complex(complex(got), 10):>24}"
                      f"  {_fmt_complex(complex(exp), 10):>24}  {err:.1e}\n")
        passed = sum(r[4] for r in rows)
        out.write(f"{passed}/{len(rows)} checks passed\n")
    return records


_COMMANDS = {
    "moment": _run_moment,
    "cf-pos": _run_cf_pos,
    "cdf": _run_cdf,
    "truncated": _run_truncated,
    "risk": _run_risk,
    "constants": _run_constants,
    "verify": _run_verify,
}


def _setup_logging() -> None:
    level = os.environ.get("CHARMOMENT_LOG", "quiet").strip().lower()
    logging.basicConfig(level=LOG_LEVELS.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    _setup_logging()
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = _config(ns)
        records = _COMMANDS[ns.command](ns, cfg, out)
    except _UsageError as exc:
        sys.stderr.write(f"charmoment: error: {exc}\n")
        return EXIT_USAGE
    except (ParameterError, DomainError, CapabilityError) as exc:
        sys.stderr.write(f"charmoment: error: {exc}\n")
        return EXIT_USAGE
    except (ConvergenceError, FloatingPointError) as exc:
        sys.stderr.write(f"charmoment: did not converge: {exc}\n")
        return EXIT_NUMERIC
    if ns.output == "records":
        emit_records(records, out)
    return EXIT_OK if all(r.converged for r in records) else EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
