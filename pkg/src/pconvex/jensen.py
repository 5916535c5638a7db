"""Tightened Jensen-type bounds driven by convexity certificates.

The lower bound replaces E X with the shifted norm a + ||X - a||_{p+1},
which dominates the mean, so for certified increasing members the result
always sits between the classical Jensen bound f(E X) and the true E f(X).
The upper bound interpolates the endpoints with the normalized (p+1)-th
moment in place of the first, tightening the classical secant.

Every bound *requires* a passing certificate; invoking one with a failing
or mismatched certificate raises CertificateError rather than silently
producing a number without its hypothesis.

Direction note: for the right-anchored concave class the analogous
evaluation f(b - ||b - X||_{p+1}) dominates E f(X) (it tightens the
classical concave-side bound f(E X) from below E X), so that report is
marked direction="upper" even though its historical kind string says
"lower".  The report invariants are stated against `direction`.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

from .convexity import ConvexityCertificate
from .distributions import RandomVariable, expect, reflected, shifted_moment
from .errors import CertificateError, UnboundedSupportError
from .functions import FunctionSpec
from .numerics import DEFAULT_TOLERANCES, ToleranceProfile

__all__ = [
    "BoundReport",
    "jensen_lower",
    "jensen_lower_decreasing",
    "jensen_upper",
]

_KINDS = ("jensen-lower-I", "jensen-upper-I", "jensen-lower-D",
          "classical-jensen-lower", "classical-secant-upper")


@dataclass(frozen=True)
class BoundReport:
    """A computed bound, its classical comparator, and the oracle.

    gap_to_oracle is oriented so that a valid bound makes it nonnegative:
    oracle - value for direction="lower", value - oracle for "upper".
    gap_to_classical is oriented the same way (how much the bound improves
    on its classical comparator).
    """

    kind: str
    direction: str
    p: int
    interval: tuple[float, float]
    value: float
    oracle: float | None
    oracle_error: float
    classical: float
    gap_to_oracle: float | None
    gap_to_classical: float
    inputs_digest: str
    # moment quadrature/truncation error propagated through f to the value
    value_error: float = 0.0


def _value_error(f: FunctionSpec, point: float, moment_error: float) -> float:
    """First-order propagation of the moment error through f at the
    evaluation point (zero for exact discrete moments)."""
    if moment_error == 0.0:
        return 0.0
    try:
        slope = abs(float(f.derivative(1)(point)))
    except Exception:
        slope = 1.0
    return slope * moment_error


def _digest(f: FunctionSpec, X: RandomVariable, p: int, kind: str) -> str:
    payload = json.dumps({"f": f.label, "X": X.digest(), "p": p, "kind": kind},
                         sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _require(cert: ConvexityCertificate, klass: str, where: str) -> None:
    if cert.klass != klass:
        raise CertificateError(
            f"{where} needs a class-{klass} certificate, got class {cert.klass}")
    if not cert.passed:
        w = cert.witness
        detail = f" (witness: {w.condition} at x={w.point:.6g})" if w else ""
        raise CertificateError(f"{where} invoked with a failing certificate{detail}")


def _check_support(X: RandomVariable, a: float, b: float, f: FunctionSpec,
                   tolerances: ToleranceProfile, where: str,
                   require_bounded: bool = False) -> None:
    eps = tolerances.eq_abs + tolerances.eq_rel * max(1.0, abs(a), abs(b))
    if X.inf < a - eps:
        raise UnboundedSupportError(
            f"{where}: mass below the certified interval ({X.inf} < {a})")
    if not require_bounded and math.isinf(f.domain[1]):
        return  # [a, inf) case: only the moment needs to exist
    if X.sup > b + eps:
        raise UnboundedSupportError(
            f"{where}: mass above the certified interval ({X.sup} > {b})")


def jensen_lower(f: FunctionSpec, cert: ConvexityCertificate, X: RandomVariable,
                 compute_oracle: bool = True,
                 tolerances: ToleranceProfile = DEFAULT_TOLERANCES) -> BoundReport:
    """Lower bound E f(X) >= f(a + ||X - a||_{p+1}) for certified members.

    Works for X on the certified [a, b], or on [a, inf) when f's domain is
    unbounded and the order-(p+1) moment exists; any moment quadrature or
    truncation error is propagated into the report's value_error.
    """
    _require(cert, "I", "jensen_lower")
    if cert.p < 1:
        raise CertificateError("jensen_lower needs certification order p >= 1")
    a, b = cert.interval
    _check_support(X, a, b, f, tolerances, "jensen_lower")
    p = cert.p
    moment = shifted_moment(X, a, p + 1, tolerances)
    point = a + moment.norm
    value = float(f(point))
    mean = expect(X, lambda x: x)[0]
    classical = float(f(mean))
    oracle = oracle_err = None
    gap = None
    if compute_oracle:
        oracle, oracle_err = expect(X, f)
        gap = oracle - value
    return BoundReport(
        kind="jensen-lower-I", direction="lower", p=p, interval=(a, b),
        value=value, oracle=oracle, oracle_error=oracle_err or 0.0,
        classical=classical, gap_to_oracle=gap,
        gap_to_classical=value - classical,
        inputs_digest=_digest(f, X, p, "jensen-lower-I"),
        value_error=_value_error(f, point, moment.error_estimate))


def jensen_upper(f: FunctionSpec, cert: ConvexityCertificate, X: RandomVariable,
                 compute_oracle: bool = True,
                 tolerances: ToleranceProfile = DEFAULT_TOLERANCES) -> BoundReport:
    """Upper bound E f(X) <= (1 - m) f(a) + m f(b) with the moment weight
    m = E (X-a)^{p+1} / (b-a)^{p+1}; tightens the classical secant, whose
    weight is the normalized first moment.
    """
    _require(cert, "I", "jensen_upper")
    if cert.p < 1:
        raise CertificateError("jensen_upper needs certification order p >= 1")
    a, b = cert.interval
    if not (math.isfinite(b) and X.bounded):
        raise UnboundedSupportError("jensen_upper needs a bounded interval and support")
    _check_support(X, a, b, f, tolerances, "jensen_upper", require_bounded=True)
    p = cert.p
    moment = shifted_moment(X, a, p + 1, tolerances)
    m = (moment.norm / (b - a)) ** (p + 1)
    fa, fb = float(f(a)), float(f(b))
    value = (1.0 - m) * fa + m * fb
    mean = expect(X, lambda x: x)[0]
    m1 = min(max((mean - a) / (b - a), 0.0), 1.0)
    classical = (1.0 - m1) * fa + m1 * fb
    oracle = oracle_err = None
    gap = None
    if compute_oracle:
        oracle, oracle_err = expect(X, f)
        gap = value - oracle
    return BoundReport(
        kind="jensen-upper-I", direction="upper", p=p, interval=(a, b),
        value=value, oracle=oracle, oracle_error=oracle_err or 0.0,
        classical=classical, gap_to_oracle=gap,
        gap_to_classical=classical - value,
        inputs_digest=_digest(f, X, p, "jensen-upper-I"),
        value_error=abs(fb - fa) * moment.error_estimate / max((b - a) ** (p + 1), 1e-300))


def jensen_lower_decreasing(f: FunctionSpec, cert: ConvexityCertificate,
                            X: RandomVariable, compute_oracle: bool = True,
                            tolerances: ToleranceProfile = DEFAULT_TOLERANCES) -> BoundReport:
    """Evaluate f(b - ||b - X||_{p+1}) for the right-anchored concave class.

    Under the implemented (concave increasing) sign convention this value
    dominates E f(X): b - ||b - X||_{p+1} <= E X and f increases, so
    oracle <= value <= f(E X).  It is the concave-direction analogue of the
    tightened bound and the engine behind the likelihood minorant; the
    report carries direction="upper" accordingly.
    """
    _require(cert, "D", "jensen_lower_decreasing")
    a, b = cert.interval
    if not X.bounded:
        raise UnboundedSupportError("the right-anchored bound needs bounded support")
    _check_support(X, a, b, f, tolerances, "jensen_lower_decreasing", require_bounded=True)
    p = cert.p
    moment = shifted_moment(reflected(X, b), 0.0, p + 1, tolerances)
    point = b - moment.norm
    value = float(f(point))
    mean = expect(X, lambda x: x)[0]
    classical = float(f(mean))
    oracle = oracle_err = None
    gap = None
    if compute_oracle:
        oracle, oracle_err = expect(X, f)
        gap = value - oracle
    return BoundReport(
        kind="jensen-lower-D", direction="upper", p=p, interval=(a, b),
        value=value, oracle=oracle, oracle_error=oracle_err or 0.0,
        classical=classical, gap_to_oracle=gap,
        gap_to_classical=classical - value,
        inputs_digest=_digest(f, X, p, "jensen-lower-D"),
        value_error=_value_error(f, point, moment.error_estimate))
