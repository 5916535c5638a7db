"""Numerical certification of higher-order convexity classes.

Three classes are certified on evaluation grids:

  "I"  - p-convex anchored at the left endpoint: f^(p) convex and increasing
         with f^(k)(a) = 0 for k = 1..p (plain convexity when p = 0).
  "D"  - the companion concave-increasing class anchored at the right
         endpoint: f^(k)(b) = 0 for k = 1..p and alternating derivative
         signs f' >= 0, f'' <= 0, f''' >= 0, ... up to order p+2.
  "Lp" - loss functions with relative curvature l''(x) x >= p l'(x) and
         positive derivatives to order p+2 away from the origin.

A certificate is a numerical verdict over a finite grid with explicit slack,
not a proof; failures always carry a witness (point, condition, margin).
Certificates for functions without analytic derivatives widen the slack by
1e3 and record the provenance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import DomainError
from .functions import FunctionSpec
from .numerics import DEFAULT_TOLERANCES, ToleranceProfile

__all__ = [
    "ConvexityCertificate",
    "Witness",
    "NUMERIC_SLACK_FACTOR",
    "certificate_to_dict",
    "certify_loss_class",
    "certify_p_concave",
    "certify_p_convex",
    "check_power_transform_convex",
    "check_ratio_monotone",
]

NUMERIC_SLACK_FACTOR = 1e3
DEFAULT_GRID = 1024


@dataclass(frozen=True)
class Witness:
    point: float
    condition: str
    margin: float


@dataclass(frozen=True)
class ConvexityCertificate:
    """Verdict plus evidence for membership in one of the three classes.

    margins maps each checked condition to its minimum margin; a condition
    holds when its margin >= -slack_used.  verdict == "fail" implies the
    witness records the worst violation.
    """

    klass: str  # "I" | "D" | "Lp"
    p: int
    interval: tuple[float, float]
    grid_size: int
    verdict: str  # "pass" | "fail"
    witness: Witness | None
    derivative_provenance: str
    slack_used: float
    margins: Mapping[str, float]
    label: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def certificate_to_dict(cert: ConvexityCertificate) -> dict:
    out = {
        "class": cert.klass,
        "p": cert.p,
        "interval": list(cert.interval),
        "grid_size": cert.grid_size,
        "verdict": cert.verdict,
        "derivative_provenance": cert.derivative_provenance,
        "slack_used": cert.slack_used,
        "margins": dict(cert.margins),
        "label": cert.label,
    }
    if cert.witness is not None:
        out["witness"] = {"point": cert.witness.point,
                          "condition": cert.witness.condition,
                          "margin": cert.witness.margin}
    return out


class _Evidence:
    """Accumulates per-condition margins and the worst violation."""

    def __init__(self, slack: float):
        self.slack = slack
        self.margins: dict[str, float] = {}
        self.worst: Witness | None = None

    def record(self, condition: str, margin: float, point: float) -> None:
        margin = float(margin)
        if condition not in self.margins or margin < self.margins[condition]:
            self.margins[condition] = margin
        if margin < -self.slack and (self.worst is None or margin < self.worst.margin):
            self.worst = Witness(point=float(point), condition=condition, margin=margin)

    def record_grid(self, condition: str, values: np.ndarray, points: np.ndarray) -> None:
        idx = int(np.argmin(values))
        self.record(condition, float(values[idx]), float(points[idx]))

    def verdict(self) -> str:
        return "fail" if self.worst is not None else "pass"


def _slack_for(f: FunctionSpec, tolerances: ToleranceProfile) -> tuple[float, str]:
    if f.provenance == "analytic":
        return tolerances.certify_slack, "analytic"
    return tolerances.certify_slack * NUMERIC_SLACK_FACTOR, f.provenance


def _second_differences(values: np.ndarray, h: float) -> np.ndarray:
    return (values[2:] - 2.0 * values[1:-1] + values[:-2]) / (h * h)


def _first_differences(values: np.ndarray, h: float) -> np.ndarray:
    return (values[1:] - values[:-1]) / h


def certify_p_convex(f: FunctionSpec, p: int, a: float, b: float,
                     grid_size: int = DEFAULT_GRID,
                     tolerances: ToleranceProfile = DEFAULT_TOLERANCES) -> ConvexityCertificate:
    """Certify membership in the left-anchored class at order p on [a, b].

    Conditions checked (each to within the slack):
      1. f^(k)(a) = 0 for k = 1..p,
      2. f^(p+1) >= 0 on the grid (f^(p) increasing); when the analytic
         stack is too shallow, first differences of f^(p) stand in,
      3. f^(p+2) >= 0 on the grid (f^(p) convex); fallback: second
         differences of f^(p), normalized by the squared step.

    For p = 0 only plain convexity is checked.
    """
    p = int(p)
    if p < 0:
        raise DomainError(f"order p must be >= 0, got {p}")
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    slack, provenance = _slack_for(f, tolerances)
    ev = _Evidence(slack)
    xs = np.linspace(a, b, grid_size + 1)
    h = (b - a) / grid_size

    analytic = f.analytic_depth

    for k in range(1, p + 1):
        val = float(f.derivative(k)(a))
        ev.record(f"boundary f^({k})(a)=0", -abs(val), a)

    if p == 0:
        if analytic >= 2:
            ev.record_grid("convexity f^(2)>=0", f.eval_on(xs, 2), xs)
        else:
            d2 = _second_differences(f.eval_on(xs, 0), h)
            ev.record_grid("convexity d2f>=0", d2, xs[1:-1])
    else:
        if analytic >= p + 1:
            ev.record_grid(f"increasing f^({p + 1})>=0", f.eval_on(xs, p + 1), xs)
        else:
            d1 = _first_differences(f.eval_on(xs, p), h)
            ev.record_grid(f"increasing df^({p})>=0", d1, xs[:-1])
        if analytic >= p + 2 or (f.provenance != "analytic" and f.max_order >= p + 2
                                 and p + 2 <= analytic + 2):
            ev.record_grid(f"convexity f^({p + 2})>=0", f.eval_on(xs, p + 2), xs)
        else:
            d2 = _second_differences(f.eval_on(xs, p), h)
            ev.record_grid(f"convexity d2f^({p})>=0", d2, xs[1:-1])

    return ConvexityCertificate(
        klass="I", p=p, interval=(a, b), grid_size=grid_size,
        verdict=ev.verdict(), witness=ev.worst,
        derivative_provenance=provenance, slack_used=slack,
        margins=ev.margins, label=f.label)


def certify_p_concave(f: FunctionSpec, p: int, a: float, b: float,
                      grid_size: int = DEFAULT_GRID,
                      tolerances: ToleranceProfile = DEFAULT_TOLERANCES) -> ConvexityCertificate:
    """Certify the right-anchored concave-increasing class at order p.

    Checked: f^(k)(b) = 0 for k = 1..p, and the alternating sign pattern
    f^(1) >= 0, f^(2) <= 0, f^(3) >= 0, ... through order p+2 on the grid.
    This is the sign convention the downstream likelihood bound actually
    uses; the mirrored all-decreasing convention is not implemented.
    """
    p = int(p)
    if p < 1:
        raise DomainError(f"order p must be >= 1, got {p}")
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    slack, provenance = _slack_for(f, tolerances)
    ev = _Evidence(slack)
    xs = np.linspace(a, b, grid_size + 1)
    h = (b - a) / grid_size

    for k in range(1, p + 1):
        val = float(f.derivative(k)(b))
        ev.record(f"boundary f^({k})(b)=0", -abs(val), b)

    for k in range(1, p + 3):
        sign = 1.0 if k % 2 == 1 else -1.0
        cond = f"sign (-1)^({k}+1) f^({k})>=0"
        if k <= f.analytic_depth:
            ev.record_grid(cond, sign * f.eval_on(xs, k), xs)
        elif k - 1 <= f.analytic_depth:
            d1 = sign * _first_differences(f.eval_on(xs, k - 1), h)
            ev.record_grid(cond + " (differenced)", d1, xs[:-1])
        else:
            base = min(k - 2, f.analytic_depth)
            diffs = f.eval_on(xs, base)
            step = k - base
            for _ in range(step - 1):
                diffs = _first_differences(diffs, h)
            d1 = sign * _first_differences(diffs, h)
            ev.record_grid(cond + f" ({step}x differenced)", d1, xs[: len(d1)])

    return ConvexityCertificate(
        klass="D", p=p, interval=(a, b), grid_size=grid_size,
        verdict=ev.verdict(), witness=ev.worst,
        derivative_provenance=provenance, slack_used=slack,
        margins=ev.margins, label=f.label)


def certify_loss_class(l: FunctionSpec, p: int, horizon: float,
                       grid_size: int = DEFAULT_GRID,
                       tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                       strictness: float = 0.0) -> ConvexityCertificate:
    """Certify the relative-curvature loss class at order p on [0, horizon].

    Conditions: l''(x) x - p l'(x) >= 0 on the grid, and l^(k)(x) >= strictness
    for k = 1..p+2 at grid points x > 1e-6.  The literal class uses strict
    positivity; the default strictness 0 admits pure powers whose top
    derivatives vanish identically, which the closed-form achiever needs.
    """
    p = int(p)
    if p < 1:
        raise DomainError(f"order p must be >= 1, got {p}")
    horizon = float(horizon)
    lo = max(l.domain[0], 0.0)
    if not horizon > lo:
        raise DomainError(f"horizon {horizon} must exceed domain start {lo}")
    slack, provenance = _slack_for(l, tolerances)
    ev = _Evidence(slack)
    xs = np.linspace(lo, horizon, grid_size + 1)

    d1 = l.eval_on(xs, 1)
    d2 = l.eval_on(xs, 2)
    ev.record_grid("curvature l''(x)x - p l'(x)>=0", d2 * xs - p * d1, xs)

    interior = xs > 1e-6
    xi = xs[interior]
    for k in range(1, p + 3):
        vals = l.eval_on(xi, k) if k > 2 else (d1[interior] if k == 1 else d2[interior])
        ev.record_grid(f"positivity l^({k})>={strictness:g}", vals - strictness, xi)

    return ConvexityCertificate(
        klass="Lp", p=p, interval=(lo, horizon), grid_size=grid_size,
        verdict=ev.verdict(), witness=ev.worst,
        derivative_provenance=provenance, slack_used=slack,
        margins=ev.margins, label=l.label)


def _require_passing_i(cert: ConvexityCertificate, where: str) -> None:
    if cert.klass != "I" or not cert.passed:
        raise DomainError(f"{where} needs a passing left-anchored certificate")


def check_power_transform_convex(f: FunctionSpec, cert: ConvexityCertificate,
                                 grid_size: int = DEFAULT_GRID,
                                 tolerances: ToleranceProfile = DEFAULT_TOLERANCES
                                 ) -> ConvexityCertificate:
    """Corroborate a certificate by checking convexity of the power transform
    y -> f(a + y^(1/(p+1))) on [0, (b-a)^(p+1)] through second differences.

    This is the substitution that turns the tightened bound into plain
    Jensen, so its discrete convexity is an independent consistency check
    on the certified membership.
    """
    _require_passing_i(cert, "check_power_transform_convex")
    a, b = cert.interval
    p = cert.p
    slack, provenance = _slack_for(f, tolerances)
    y_hi = (b - a) ** (p + 1)
    ys = np.linspace(0.0, y_hi, grid_size + 1)
    xs = a + ys ** (1.0 / (p + 1))
    vals = f.eval_on(xs, 0)
    h = y_hi / grid_size
    d2 = _second_differences(vals, h)
    scale = max(1.0, float(np.max(np.abs(vals))))
    ev = _Evidence(slack * scale)
    ev.record_grid("power-transform convexity d2>=0", d2, ys[1:-1])
    return ConvexityCertificate(
        klass="I", p=p, interval=(a, b), grid_size=grid_size,
        verdict=ev.verdict(), witness=ev.worst,
        derivative_provenance=provenance, slack_used=slack * scale,
        margins=ev.margins, label=f"power-transform[{f.label}]")


def check_ratio_monotone(f: FunctionSpec, cert: ConvexityCertificate,
                         grid_size: int = DEFAULT_GRID,
                         tolerances: ToleranceProfile = DEFAULT_TOLERANCES
                         ) -> ConvexityCertificate:
    """Check that g(x) = f(x) / (x - a)^(p+1) is nondecreasing on (a, b).

    Requires f(a) = 0 (within slack).  Near the anchor the raw quotient is
    0/0 noise; when analytic derivatives reach order p+2 the quotient is
    evaluated through its Taylor expansion there, otherwise the first grid
    cell is skipped.
    """
    _require_passing_i(cert, "check_ratio_monotone")
    a, b = cert.interval
    p = cert.p
    slack, provenance = _slack_for(f, tolerances)
    fa = float(f(a))
    if abs(fa) > slack:
        raise DomainError(f"ratio check needs f(a)=0, got f({a}) = {fa}")

    xs = np.linspace(a, b, grid_size + 1)[1:]
    near = (xs - a) < 1e-4 * (b - a)
    g = np.empty_like(xs)

    far = ~near
    g[far] = f.eval_on(xs[far], 0) / (xs[far] - a) ** (p + 1)
    if np.any(near):
        if f.analytic_depth >= p + 2:
            c1 = float(f.derivative(p + 1)(a)) / math.factorial(p + 1)
            c2 = float(f.derivative(p + 2)(a)) / math.factorial(p + 2)
            g[near] = c1 + c2 * (xs[near] - a)
        else:
            g = g[far]
            xs = xs[far]

    ev = _Evidence(slack)
    diffs = np.diff(g) / np.maximum(1.0, np.abs(g[:-1]))
    if diffs.size:
        ev.record_grid("ratio nondecreasing", diffs, xs[:-1])
    return ConvexityCertificate(
        klass="I", p=p, interval=(a, b), grid_size=grid_size,
        verdict=ev.verdict(), witness=ev.worst,
        derivative_provenance=provenance, slack_used=slack,
        margins=ev.margins, label=f"ratio[{f.label}]")
