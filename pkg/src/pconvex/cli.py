"""Command-line front end.

JSON descriptors in, CSV/JSON/SVG reports out; no interactive mode.  Every
run is seeded (--seed, default 42) and identical inputs plus seed produce
byte-identical artifacts, so reports are diff-able in CI.

Exit codes: 0 for success (a certification run that *reports* verdict=fail
is still a successful run), 2 when a bound is invoked with a certificate
that fails (scripts can pipeline certification before bounding), and 1 for
malformed input or numeric failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from . import convexity, hermite, jensen, mgf, risk
from .distributions import (
    distribution_from_descriptor,
    distribution_to_descriptor,
)
from .errors import CertificateError, InputFormatError, PconvexError
from .functions import (
    FunctionSpec,
    function_from_descriptor,
)
from .numerics import DEFAULT_TOLERANCES, ToleranceProfile
from .svgplot import render_gap_plot

__all__ = ["main", "run_problem"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CERT_FAILED = 2

PROBLEM_VERSION = 1
_TASKS = ("certify", "bound", "risk-measure", "risk-compare", "mgf", "amgm",
          "em-demo", "hh", "hh-fractional", "rl", "sweep")


def _fmt(x: Any) -> str:
    """17-significant-digit decimal rendering for CSV cells."""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _write_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # RFC-4180: CRLF line endings, '.' decimals
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputFormatError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise InputFormatError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")


def _tolerances_from(raw: Mapping[str, Any] | None) -> ToleranceProfile:
    if not raw:
        return DEFAULT_TOLERANCES
    allowed = {"eq_abs", "eq_rel", "certify_slack", "fd_step"}
    unknown = set(raw) - allowed
    if unknown:
        raise InputFormatError(f"tolerance profile: unknown fields {sorted(unknown)}")
    return ToleranceProfile(**{k: float(v) for k, v in raw.items()})


@dataclass
class Problem:
    """Canonical in-memory form of one task invocation."""

    task: str
    function: Mapping[str, Any] | None = None
    distribution: Mapping[str, Any] | None = None
    params: dict[str, Any] = field(default_factory=dict)
    tolerances: Mapping[str, Any] | None = None

    def canonical(self) -> dict:
        out: dict[str, Any] = {"version": PROBLEM_VERSION, "task": self.task,
                               "params": dict(self.params)}
        if self.function is not None:
            out["function"] = dict(self.function)
        if self.distribution is not None:
            out["distribution"] = dict(self.distribution)
        if self.tolerances is not None:
            out["tolerances"] = dict(self.tolerances)
        return out

    def dump(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.canonical(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def load(raw: Mapping[str, Any]) -> "Problem":
        if not isinstance(raw, Mapping):
            raise InputFormatError("problem file must be a JSON object")
        if raw.get("version") != PROBLEM_VERSION:
            raise InputFormatError(
                f"problem file: field 'version' must be {PROBLEM_VERSION}")
        task = raw.get("task")
        if task not in _TASKS:
            raise InputFormatError(f"problem file: unknown task {task!r}")
        return Problem(task=task, function=raw.get("function"),
                       distribution=raw.get("distribution"),
                       params=dict(raw.get("params", {})),
                       tolerances=raw.get("tolerances"))

    # -- lazy accessors -----------------------------------------------------

    def function_spec(self) -> FunctionSpec:
        if self.function is None:
            raise InputFormatError(f"task {self.task}: missing function descriptor (-f)")
        return function_from_descriptor(self.function)

    def rv(self):
        if self.distribution is None:
            raise InputFormatError(f"task {self.task}: missing distribution (-d)")
        return distribution_from_descriptor(self.distribution)

    def need(self, key: str) -> Any:
        if key not in self.params or self.params[key] is None:
            raise InputFormatError(f"task {self.task}: missing parameter {key!r}")
        return self.params[key]


def _interval(problem: Problem, f: FunctionSpec) -> tuple[float, float]:
    a = problem.params.get("a")
    b = problem.params.get("b")
    a = f.domain[0] if a is None else float(a)
    b = f.upper_cap if b is None else float(b)
    return a, b


# ---------------------------------------------------------------------------
# Task handlers
# ---------------------------------------------------------------------------


def _run_certify(problem: Problem, out: str | None) -> int:
    f = problem.function_spec()
    klass = problem.need("class")
    p = int(problem.need("p"))
    grid = int(problem.params.get("grid", convexity.DEFAULT_GRID))
    tol = _tolerances_from(problem.tolerances)
    if klass == "I":
        a, b = _interval(problem, f)
        cert = convexity.certify_p_convex(f, p, a, b, grid, tol)
    elif klass == "D":
        a, b = _interval(problem, f)
        cert = convexity.certify_p_concave(f, p, a, b, grid, tol)
    elif klass == "Lp":
        horizon = float(problem.params.get("horizon")
                        or problem.params.get("b") or 10.0)
        cert = convexity.certify_loss_class(f, p, horizon, grid, tol)
    else:
        raise InputFormatError(f"--class must be I, D or Lp, got {klass!r}")
    _emit(json.dumps(convexity.certificate_to_dict(cert), indent=2, sort_keys=True)
          + "\n", out)
    return EXIT_OK


_BOUND_HEADER = ("kind", "p", "a", "b", "value", "oracle", "classical",
                 "gap_to_oracle", "gap_to_classical")


def _bound_row(rep: jensen.BoundReport) -> tuple:
    return (rep.kind, rep.p, rep.interval[0], rep.interval[1], rep.value,
            rep.oracle, rep.classical, rep.gap_to_oracle, rep.gap_to_classical)


def _run_bound(problem: Problem, out: str | None) -> int:
    f = problem.function_spec()
    X = problem.rv()
    p = int(problem.need("p"))
    kind = problem.params.get("kind", "lower")
    grid = int(problem.params.get("grid", convexity.DEFAULT_GRID))
    tol = _tolerances_from(problem.tolerances)
    a, b = _interval(problem, f)
    if kind in ("lower", "upper"):
        cert = convexity.certify_p_convex(f, p, a, b, grid, tol)
    elif kind == "lower-decreasing":
        cert = convexity.certify_p_concave(f, p, a, b, grid, tol)
    else:
        raise InputFormatError(f"--kind must be lower, upper or lower-decreasing, got {kind!r}")
    try:
        if kind == "lower":
            rep = jensen.jensen_lower(f, cert, X, tolerances=tol)
        elif kind == "upper":
            rep = jensen.jensen_upper(f, cert, X, tolerances=tol)
        else:
            rep = jensen.jensen_lower_decreasing(f, cert, X, tolerances=tol)
    except CertificateError as exc:
        sys.stderr.write(f"certificate failed: {exc}\n")
        return EXIT_CERT_FAILED
    _emit(_write_csv(_BOUND_HEADER, [_bound_row(rep)]), out)
    return EXIT_OK


def _run_risk_measure(problem: Problem, out: str | None) -> int:
    X = problem.rv()
    p = int(problem.need("p"))
    tol = _tolerances_from(problem.tolerances)
    rep = risk.risk_measure(X, p, tolerances=tol)
    payload = {"task": "risk-measure", "p": rep.p,
               "distribution": rep.distribution,
               "closed_form": rep.closed_form,
               "sweep_infimum": rep.sweep_infimum,
               "achiever": rep.achiever,
               "candidates": list(rep.candidates)}
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", out)
    return EXIT_OK


def _run_risk_compare(problem: Problem, out: str | None) -> int:
    l = problem.function_spec()
    baseline_desc = problem.params.get("baseline")
    if baseline_desc is None:
        raise InputFormatError("risk-compare: missing baseline function (--baseline)")
    f = function_from_descriptor(baseline_desc)
    p = int(problem.need("p"))
    horizon = float(problem.params.get("horizon", 10.0))
    trials = int(problem.params.get("trials", 10_000))
    seed = int(problem.params.get("seed", 42))
    tol = _tolerances_from(problem.tolerances)
    comp = risk.certify_p_more_risk_averse(l, f, p, horizon, tolerances=tol)
    directed = comp.certificate.witness.point if comp.certificate.witness else None
    hit = risk.falsify_p_more_risk_averse(l, f, p, trials, seed, horizon,
                                          directed_from=directed, tolerances=tol)
    payload: dict[str, Any] = {
        "task": "risk-compare", "p": p,
        "loss": l.label, "baseline": f.label,
        "holds": comp.holds,
        "certificate": convexity.certificate_to_dict(comp.certificate),
    }
    if hit is not None:
        payload["falsifier"] = {
            "lottery": distribution_to_descriptor(hit.lottery),
            "threshold": hit.threshold,
            "margin": hit.margin,
        }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", out)
    return EXIT_OK


def _run_mgf(problem: Problem, out: str | None) -> int:
    X = problem.rv()
    s = float(problem.need("s"))
    p = int(problem.need("p"))
    kind = problem.params.get("kind", "both")
    tol = _tolerances_from(problem.tolerances)
    rows = []
    if kind in ("lower", "both"):
        rep = mgf.mgf_lower(X, s, p, tol)
        rows.append(("lower", s, p, rep.lower, rep.exact, rep.exact - rep.lower))
    if kind in ("upper", "both"):
        rep = mgf.mgf_upper(X, s, p, tol)
        rows.append(("upper", s, p, rep.upper, rep.exact, rep.upper - rep.exact))
    if not rows:
        raise InputFormatError(f"mgf: --kind must be lower, upper or both, got {kind!r}")
    _emit(_write_csv(("kind", "s", "p", "value", "exact", "gap"), rows), out)
    return EXIT_OK


def _run_amgm(problem: Problem, out: str | None) -> int:
    X = problem.rv()
    p = int(problem.need("p"))
    tol = _tolerances_from(problem.tolerances)
    value = mgf.am_gm_lower(X, p, tol)
    mean = X.mean()
    _emit(_write_csv(("p", "value", "mean", "gap"),
                     [(p, value, mean, mean - value)]), out)
    return EXIT_OK


def _run_em_demo(problem: Problem, out: str | None) -> int:
    samples = int(problem.params.get("samples", 60))
    dims = int(problem.params.get("dims", 6))
    iters = int(problem.params.get("iters", 15))
    seed = int(problem.params.get("seed", 42))
    data = mgf.generate_mixture_data(samples, dims, seed)
    trace = mgf.em_demo(data, iters, seed)
    _emit(_write_csv(("iter", "loglik", "elbo_classical", "elbo_tight"),
                     list(trace.rows)), out)
    return EXIT_OK


_HH_HEADER = ("p", "alpha", "a", "b", "lower", "mid", "upper",
              "classical_lower", "classical_upper", "lower_gap", "upper_gap")


def _hh_row(rep: hermite.HHReport) -> tuple:
    return (rep.p, "" if rep.alpha is None else rep.alpha,
            rep.interval[0], rep.interval[1], rep.lower, rep.mid, rep.upper,
            rep.classical_lower, rep.classical_upper,
            rep.mid - rep.lower, rep.upper - rep.mid)


def _run_hh(problem: Problem, out: str | None) -> int:
    f = problem.function_spec()
    p = int(problem.need("p"))
    grid = int(problem.params.get("grid", convexity.DEFAULT_GRID))
    tol = _tolerances_from(problem.tolerances)
    a, b = _interval(problem, f)
    cert = convexity.certify_p_convex(f, p - 1, a, b, grid, tol)
    try:
        rep = hermite.hh_bounds(f, cert, p)
    except CertificateError as exc:
        sys.stderr.write(f"certificate failed: {exc}\n")
        return EXIT_CERT_FAILED
    _emit(_write_csv(_HH_HEADER, [_hh_row(rep)]), out)
    return EXIT_OK


def _run_hh_fractional(problem: Problem, out: str | None) -> int:
    f = problem.function_spec()
    p = int(problem.need("p"))
    alpha = float(problem.need("alpha"))
    grid = int(problem.params.get("grid", convexity.DEFAULT_GRID))
    tol = _tolerances_from(problem.tolerances)
    a, b = _interval(problem, f)
    cert = convexity.certify_p_convex(f, p - 1, a, b, grid, tol)
    try:
        rep = hermite.fractional_hh_bounds(f, cert, p, alpha)
    except CertificateError as exc:
        sys.stderr.write(f"certificate failed: {exc}\n")
        return EXIT_CERT_FAILED
    _emit(_write_csv(_HH_HEADER, [_hh_row(rep)]), out)
    return EXIT_OK


def _run_rl(problem: Problem, out: str | None) -> int:
    f = problem.function_spec()
    alpha = float(problem.need("alpha"))
    side = problem.params.get("side", "left")
    x = float(problem.need("x"))
    a = problem.params.get("a")
    b = problem.params.get("b")
    interval = None
    if a is not None and b is not None:
        interval = (float(a), float(b))
    value = hermite.rl_integral(f, alpha, side, x, interval)
    _emit(_write_csv(("alpha", "side", "x", "value"), [(alpha, side, x, value)]), out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def _max_workers() -> int:
    raw = os.environ.get("PCONVEX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputFormatError(f"PCONVEX_THREADS must be an integer, got {raw!r}")


def _map_cells(fn, cells):
    workers = _max_workers()
    if workers == 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cells))  # ordering fixed by input order


def _sweep_hh(problem: Problem) -> tuple[tuple[str, ...], list[tuple]]:
    desc = problem.function or {"family": "shifted-power",
                                "params": {"q": 8.0, "a": 0.0}, "domain": [0.0, 1.0]}
    f = function_from_descriptor(desc)
    tol = _tolerances_from(problem.tolerances)
    a, b = _interval(problem, f)
    ps = range(1, int(problem.params.get("p_max", 6)) + 1)

    def cell(p: int) -> tuple:
        cert = convexity.certify_p_convex(f, p - 1, a, b, 512, tol)
        rep = hermite.hh_bounds(f, cert, p)
        return (p, rep.mid - rep.lower, rep.upper - rep.mid)

    return ("p", "lower_gap", "upper_gap"), _map_cells(cell, list(ps))


def _sweep_jensen(problem: Problem) -> tuple[tuple[str, ...], list[tuple]]:
    desc = problem.function or {"family": "shifted-power",
                                "params": {"q": 6.0, "a": 0.0}, "domain": [0.0, 1.0]}
    f = function_from_descriptor(desc)
    dist = problem.distribution or {"kind": "discrete", "atoms": [0.0, 0.5, 1.0],
                                    "probs": [0.25, 0.5, 0.25]}
    X = distribution_from_descriptor(dist)
    tol = _tolerances_from(problem.tolerances)
    a, b = _interval(problem, f)
    ps = range(1, int(problem.params.get("p_max", 4)) + 1)

    def cell(p: int) -> tuple:
        cert = convexity.certify_p_convex(f, p, a, b, 512, tol)
        lo = jensen.jensen_lower(f, cert, X, tolerances=tol)
        hi = jensen.jensen_upper(f, cert, X, tolerances=tol)
        return (p, lo.gap_to_oracle, hi.gap_to_oracle)

    return ("p", "lower_gap", "upper_gap"), _map_cells(cell, list(ps))


def _sweep_mgf(problem: Problem) -> tuple[tuple[str, ...], list[tuple]]:
    dist = problem.distribution or {"kind": "discrete", "atoms": [0.0, 1.0],
                                    "probs": [0.5, 0.5]}
    X = distribution_from_descriptor(dist)
    p = int(problem.params.get("p", 2))
    tol = _tolerances_from(problem.tolerances)
    ss = [0.25 * k for k in range(13)]

    def cell(s: float) -> tuple:
        lo = mgf.mgf_lower(X, s, p, tol)
        hi = mgf.mgf_upper(X, s, p, tol)
        return (s, lo.exact - lo.lower, hi.upper - hi.exact)

    return ("s", "lower_gap", "upper_gap"), _map_cells(cell, ss)


_SUITES = {"hh": _sweep_hh, "jensen": _sweep_jensen, "mgf": _sweep_mgf}


def _run_sweep(problem: Problem, out: str | None) -> int:
    suite = problem.params.get("suite", "hh")
    if suite not in _SUITES:
        raise InputFormatError(f"--suite must be one of {sorted(_SUITES)}, got {suite!r}")
    header, rows = _SUITES[suite](problem)
    csv_text = _write_csv(header, rows)
    _emit(csv_text, out)
    plot = problem.params.get("plot")
    if plot:
        svg = render_gap_plot(csv_text, title=f"{suite} sweep")
        with open(plot, "w", newline="") as fh:
            fh.write(svg)
    return EXIT_OK


_HANDLERS = {
    "certify": _run_certify,
    "bound": _run_bound,
    "risk-measure": _run_risk_measure,
    "risk-compare": _run_risk_compare,
    "mgf": _run_mgf,
    "amgm": _run_amgm,
    "em-demo": _run_em_demo,
    "hh": _run_hh,
    "hh-fractional": _run_hh_fractional,
    "rl": _run_rl,
    "sweep": _run_sweep,
}


def run_problem(problem: Problem, out: str | None = None) -> int:
    return _HANDLERS[problem.task](problem, out)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, *, function: bool = False,
                distribution: bool = False) -> None:
    if function:
        sub.add_argument("-f", "--function", metavar="FILE",
                         help="JSON function descriptor")
    if distribution:
        sub.add_argument("-d", "--distribution", metavar="FILE",
                         help="JSON distribution descriptor")
    sub.add_argument("--out", metavar="FILE", help="write the report here (default stdout)")
    sub.add_argument("--tolerance-profile", metavar="FILE",
                     help="JSON tolerance overrides (eq_abs, eq_rel, certify_slack, fd_step)")
    sub.add_argument("--dump-canonical", metavar="FILE",
                     help="also write the canonical problem file for this invocation")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pconvex",
        description="Certify membership in higher-order convexity classes and "
                    "compute the tightened Jensen, risk, MGF, log-likelihood "
                    "and integral-average bounds they induce.")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("certify", help="numerically certify class membership "
                                        "(left-anchored I, right-anchored D, loss class Lp)")
    _add_common(s, function=True)
    s.add_argument("--class", dest="klass", required=True, choices=("I", "D", "Lp"))
    s.add_argument("-p", type=int, required=True, help="certification order")
    s.add_argument("-a", type=float, help="interval start (default: domain)")
    s.add_argument("-b", type=float, help="interval end (default: domain)")
    s.add_argument("--horizon", type=float, help="loss-class horizon (Lp only)")
    s.add_argument("--grid", type=int, default=convexity.DEFAULT_GRID)

    s = subs.add_parser("bound", help="tightened Jensen bound on E f(X): the "
                                      "norm-shifted lower bound, the moment-weighted "
                                      "endpoint upper bound, or the concave-direction variant")
    _add_common(s, function=True, distribution=True)
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--kind", choices=("lower", "upper", "lower-decreasing"),
                   default="lower")
    s.add_argument("-a", type=float)
    s.add_argument("-b", type=float)
    s.add_argument("--grid", type=int, default=convexity.DEFAULT_GRID)

    s = subs.add_parser("risk", help="worst-case certainty equivalent over the "
                                     "loss class, or graded more-risk-averse comparison")
    risk_subs = s.add_subparsers(dest="risk_command", required=True)
    sm = risk_subs.add_parser("measure", help="worst-case certainty equivalent: "
                                              "the (p+1)-norm with a certified sweep")
    _add_common(sm, distribution=True)
    sm.add_argument("-p", type=int, required=True)
    sc = risk_subs.add_parser("compare", help="certify/falsify that one loss function "
                                              "is p-more risk averse than another")
    _add_common(sc, function=True)
    sc.add_argument("--baseline", metavar="FILE", required=True,
                    help="JSON descriptor of the less risk-averse loss function")
    sc.add_argument("-p", type=int, required=True)
    sc.add_argument("--horizon", type=float, default=10.0)
    sc.add_argument("--trials", type=int, default=10_000)
    sc.add_argument("--seed", type=int, default=42)

    s = subs.add_parser("mgf", help="moment-based lower/upper bounds on the "
                                    "moment generating function E exp(sX)")
    _add_common(s, distribution=True)
    s.add_argument("-s", type=float, required=True)
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--kind", choices=("lower", "upper", "both"), default="both")

    s = subs.add_parser("amgm", help="generalized arithmetic-geometric-mean lower "
                                     "bound on E X from moments of ln X")
    _add_common(s, distribution=True)
    s.add_argument("-p", type=int, required=True)

    s = subs.add_parser("em-demo", help="Bernoulli-mixture EM logging the exact "
                                        "log-likelihood, the classical ELBO and the "
                                        "tightened minorant per iteration")
    _add_common(s)
    s.add_argument("--samples", type=int, default=60)
    s.add_argument("--dims", type=int, default=6)
    s.add_argument("--iters", type=int, default=15)
    s.add_argument("--seed", type=int, default=42)

    s = subs.add_parser("hh", help="generalized integral-average (Hermite-Hadamard "
                                   "type) sandwich for certified functions")
    _add_common(s, function=True)
    s.add_argument("-p", type=int, required=True)
    s.add_argument("-a", type=float)
    s.add_argument("-b", type=float)
    s.add_argument("--grid", type=int, default=convexity.DEFAULT_GRID)

    s = subs.add_parser("hh-fractional", help="fractional-integral version of the "
                                              "integral-average sandwich with the "
                                              "gamma-ratio endpoint weight")
    _add_common(s, function=True)
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("-a", type=float)
    s.add_argument("-b", type=float)
    s.add_argument("--grid", type=int, default=convexity.DEFAULT_GRID)

    s = subs.add_parser("rl", help="Riemann-Liouville fractional integral of a "
                                   "catalog function at a point")
    _add_common(s, function=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--side", choices=("left", "right"), default="left")
    s.add_argument("-x", type=float, required=True)
    s.add_argument("-a", type=float)
    s.add_argument("-b", type=float)

    s = subs.add_parser("sweep", help="run a bound suite over its parameter grid "
                                      "and emit gap curves (CSV, optional SVG)")
    _add_common(s, function=True, distribution=True)
    s.add_argument("--suite", choices=sorted(_SUITES), default="hh")
    s.add_argument("-p", type=int, help="fixed order for the mgf suite")
    s.add_argument("--p-max", type=int, help="top order for hh/jensen suites")
    s.add_argument("--plot", metavar="FILE", help="also render the gap curves to SVG")
    s.add_argument("--seed", type=int, default=42)

    s = subs.add_parser("run", help="execute a canonical problem file")
    s.add_argument("problem", metavar="PROBLEM.json")
    s.add_argument("--out", metavar="FILE")
    s.add_argument("--plot", metavar="FILE")

    return parser


def _problem_from_args(args: argparse.Namespace) -> Problem:
    command = args.command
    task = command
    params: dict[str, Any] = {}
    if command == "risk":
        task = f"risk-{args.risk_command}"

    for key in ("p", "a", "b", "s", "alpha", "x", "grid", "horizon", "trials",
                "seed", "iters", "samples", "dims", "suite", "plot"):
        if hasattr(args, key) and getattr(args, key) is not None:
            params[key] = getattr(args, key)
    if hasattr(args, "klass"):
        params["class"] = args.klass
    if hasattr(args, "kind") and args.kind is not None:
        params["kind"] = args.kind
    if hasattr(args, "side") and args.side is not None:
        params["side"] = args.side
    if getattr(args, "p_max", None) is not None:
        params["p_max"] = args.p_max
    if getattr(args, "baseline", None):
        params["baseline"] = _load_json(args.baseline)

    function = _load_json(args.function) if getattr(args, "function", None) else None
    distribution = (_load_json(args.distribution)
                    if getattr(args, "distribution", None) else None)
    tolerances = (_load_json(args.tolerance_profile)
                  if getattr(args, "tolerance_profile", None) else None)
    return Problem(task=task, function=function, distribution=distribution,
                   params=params, tolerances=tolerances)


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            problem = Problem.load(_load_json(args.problem))
            if getattr(args, "plot", None):
                problem.params["plot"] = args.plot
            return run_problem(problem, args.out)
        problem = _problem_from_args(args)
        if getattr(args, "dump_canonical", None):
            problem.dump(args.dump_canonical)
        return run_problem(problem, getattr(args, "out", None))
    except InputFormatError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_ERROR
    except PconvexError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
