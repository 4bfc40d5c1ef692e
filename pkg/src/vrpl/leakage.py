"""Viewpoint-leakage model for the two upload policies.

An adversarial server tries to locate the user's actual viewpoint within
an angular protection radius ``epsilon``.  What it can infer depends on
what the client uploads after each segment:

* error upload: the client reports the scalar prediction error ``e``.
  The viewpoint is then confined to the circle of points at distance
  ``e`` from the predicted viewpoint, and a uniform guess on that circle
  succeeds with probability ``min(epsilon / (pi * sin e), 1)``.

* QoE upload: the client reports the covered fraction ``q``.  The server
  inverts the QoE model: in the four constant cases only an interval of
  errors is learned and the viewpoint is confined to a cap, while in the
  partial-overlap case ``q`` pins the error down exactly (monotone
  bisection) and the error-upload analysis applies.

Probabilities are clamped to [0, 1].  Degenerate inputs (zero error,
antipodal error, empty or full streamed cap) collapse the zone to a single
point or expand it to the full sphere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .qoe import OverlapCase, _validate_error, _validate_fov, qoe
from .sphere import SPHERE_AREA, TWO_PI, CapRadius, _radius

#: Absolute tolerance for matching a reported QoE to a constant-case value.
QOE_MATCH_TOL = 1e-9

#: Absolute tolerance (in radians of error) for the bisection inversion.
BISECT_TOL = 1e-9

_BISECT_MAX_ITER = 64


class QoeInconsistencyError(ValueError):
    """Raised when a reported QoE is impossible for the given geometry."""


class ZoneKind(enum.Enum):
    """Shape of the region the adversary narrows the viewpoint down to."""

    CIRCLE = "circle"
    CAP = "cap"
    FULL_SPHERE = "full_sphere"
    SINGLE_POINT = "single_point"


@dataclass(frozen=True)
class LeakageResult:
    """Outcome of one leakage analysis.

    ``zone_measure`` is the circumference for a circle zone (the viewpoint
    is confined to a curve) and the area for cap / full-sphere zones; a
    single-point zone has measure zero and probability one.
    """

    probability: float
    zone_kind: ZoneKind
    zone_measure: float
    case: OverlapCase | None = None


@dataclass(frozen=True)
class PrivacyRequirement:
    """Protection radius and the highest acceptable leakage probability."""

    epsilon: float
    max_leak_prob: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.epsilon) and 0.0 <= self.epsilon <= math.pi / 2):
            raise ValueError(f"epsilon {self.epsilon!r} outside [0, pi/2]")
        if not (math.isfinite(self.max_leak_prob) and 0.0 <= self.max_leak_prob <= 1.0):
            raise ValueError(f"max_leak_prob {self.max_leak_prob!r} outside [0, 1]")


class RangeKind(enum.Enum):
    FULL = "full"
    INTERVAL = "interval"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class ErrorRange:
    """Set of prediction errors compatible with a privacy requirement."""

    kind: RangeKind
    lo: float | None = None
    hi: float | None = None


class InferenceKind(enum.Enum):
    EXACT = "exact"
    RANGE = "range"


@dataclass(frozen=True)
class ErrorInference:
    """What a reported QoE reveals about the prediction error.

    ``ambiguous`` is set when the report matched a constant-case value
    within tolerance but the value also lies strictly inside the band the
    partial-overlap case can produce, so an interval answer was chosen
    over a nearby exact solution (the interval reveals less).
    """

    kind: InferenceKind
    case: OverlapCase
    value: float | None = None
    lo: float | None = None
    hi: float | None = None
    ambiguous: bool = False


def _validate_epsilon(eps: float, upper: float) -> float:
    v = float(eps)
    if not (math.isfinite(v) and 0.0 <= v <= upper):
        raise ValueError(f"protection radius {eps!r} outside [0, {upper}]")
    return v


def leak_prob_from_error(e: float, eps: float) -> LeakageResult:
    """Leakage probability when the client uploads the prediction error.

    The viewpoint is uniformly likely over the circle at distance ``e``
    from the predicted viewpoint (circumference ``2*pi*sin(e)``); an
    adversarial guess covers an arc of length ``2*epsilon``, giving
    success probability ``min(eps / (pi * sin e), 1)``.  Zero or antipodal
    error collapses the circle to a single point, which leaks outright.
    """
    err = _validate_error(e)
    ep = _validate_epsilon(eps, math.pi / 2)
    if err == 0.0 or err == math.pi:
        return LeakageResult(1.0, ZoneKind.SINGLE_POINT, 0.0)
    sin_e = math.sin(err)
    return LeakageResult(min(ep / (math.pi * sin_e), 1.0), ZoneKind.CIRCLE, TWO_PI * sin_e)


def min_leak_prob_error(eps: float) -> float:
    """Lowest error-upload leakage over all errors: eps / pi, at e = pi/2."""
    return _validate_epsilon(eps, math.pi / 2) / math.pi


def min_leak_prob_qoe(eps: float) -> float:
    """Lowest QoE-upload leakage over all configurations: (1 - cos eps) / 2.

    Attained when the streamed cap degenerates (radius 0 or pi) and the
    report confines the viewpoint to nothing smaller than the full sphere.
    """
    return (1.0 - math.cos(_validate_epsilon(eps, math.pi / 2))) / 2.0


def error_range_for_requirement(req: PrivacyRequirement) -> ErrorRange:
    """Errors whose error-upload leakage stays within the requirement.

    A cap on the leakage probability at ``max_leak_prob`` is met by: every
    error when the cap is 1; the symmetric interval
    ``[arcsin(eps / (p*pi)), pi - arcsin(eps / (p*pi))]`` when the cap is
    at least the global minimum ``eps / pi``; no error otherwise.
    """
    if req.max_leak_prob >= 1.0:
        return ErrorRange(RangeKind.FULL, 0.0, math.pi)
    if req.epsilon == 0.0:
        return ErrorRange(RangeKind.INTERVAL, 0.0, math.pi)
    if req.max_leak_prob < req.epsilon / math.pi:
        return ErrorRange(RangeKind.INFEASIBLE)
    lo = math.asin(min(req.epsilon / (req.max_leak_prob * math.pi), 1.0))
    return ErrorRange(RangeKind.INTERVAL, lo, math.pi - lo)


def full_leak_error_range(eps: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """The two error intervals where error-upload leakage equals 1.

    Returns ``([0, arcsin(eps/pi)], [pi - arcsin(eps/pi), pi])``; both
    collapse to single points when ``eps`` is zero.
    """
    ep = _validate_epsilon(eps, math.pi / 2)
    edge = math.asin(ep / math.pi)
    return (0.0, edge), (math.pi - edge, math.pi)


def _bisect_error(q: float, fov: float, sv: float) -> float:
    """Invert the partial-overlap QoE for the error by monotone bisection.

    The QoE is continuous and strictly decreasing in the error across the
    partial-overlap interval, so plain interval halving converges; the
    bracket is pulled marginally inside the interval to keep every
    evaluation in the regime where the overlap formula is defined.
    """
    lo = max(1e-12, abs(fov - sv))
    hi = min(fov + sv, TWO_PI - (fov + sv)) - 1e-12
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if qoe(fov, sv, mid) > q:
            lo = mid
        else:
            hi = mid
        if hi - lo <= BISECT_TOL:
            break
    return 0.5 * (lo + hi)


def infer_error_from_qoe(
    q: float, r_fov: CapRadius | float, r_sv: CapRadius | float, tol: float = QOE_MATCH_TOL
) -> ErrorInference:
    """Infer the prediction error from a reported QoE.

    The four constant cases are matched first (within ``tol``), each
    yielding the full error interval that produces that constant;
    otherwise the report is inverted exactly by bisection inside the
    partial-overlap interval.

    Args:
        q: reported covered fraction, in [0, 1].
        r_fov: field-of-view radius, in (0, pi/2].
        r_sv: streamed-cap radius, strictly inside (0, pi).
        tol: absolute tolerance for constant-case matching.

    Raises:
        QoeInconsistencyError: if ``q`` lies outside the band of values the
            geometry can produce (beyond ``tol``).
    """
    fov = _validate_fov(r_fov)
    sv = _radius(r_sv)
    if not 0.0 < sv < math.pi:
        raise ValueError(f"streamed-cap radius {sv!r} outside (0, pi)")
    qv = float(q)
    if not (math.isfinite(qv) and 0.0 <= qv <= 1.0):
        raise ValueError(f"QoE {q!r} outside [0, 1]")

    denom = 1.0 - math.cos(fov)
    q_high = 1.0 if sv >= fov else (1.0 - math.cos(sv)) / denom
    q_low = 0.0 if fov + sv <= math.pi else (-math.cos(sv) - math.cos(fov)) / denom
    if qv > q_high + tol or qv < q_low - tol:
        raise QoeInconsistencyError(
            f"QoE {qv!r} unreachable for r_fov={fov!r}, r_sv={sv!r}: "
            f"attainable band is [{q_low!r}, {q_high!r}]"
        )
    # Strictly inside the band the partial-overlap case could explain the
    # report too; constant-case matches there are flagged as ambiguous.
    interior = q_low < qv < q_high

    if sv >= fov and abs(qv - 1.0) <= tol:
        return ErrorInference(
            InferenceKind.RANGE, OverlapCase.FOV_IN_SFOV, lo=0.0, hi=sv - fov, ambiguous=interior
        )
    if fov >= sv and abs(qv - (1.0 - math.cos(sv)) / denom) <= tol:
        return ErrorInference(
            InferenceKind.RANGE, OverlapCase.SFOV_IN_FOV, lo=0.0, hi=fov - sv, ambiguous=interior
        )
    if fov + sv <= math.pi and qv <= tol:
        return ErrorInference(
            InferenceKind.RANGE, OverlapCase.DISJOINT, lo=fov + sv, hi=math.pi, ambiguous=interior
        )
    if fov + sv >= math.pi and abs(qv - q_low) <= tol:
        return ErrorInference(
            InferenceKind.RANGE,
            OverlapCase.SFOV_COMPLEMENT_IN_FOV,
            lo=TWO_PI - fov - sv,
            hi=math.pi,
            ambiguous=interior,
        )
    return ErrorInference(InferenceKind.EXACT, OverlapCase.REMAINING, value=_bisect_error(qv, fov, sv))


def leak_prob_from_qoe(
    q: float, r_fov: CapRadius | float, r_sv: CapRadius | float, eps: float
) -> LeakageResult:
    """Leakage probability when the client uploads the QoE.

    Constant-case reports confine the viewpoint to a cap of radius
    ``|r_sv - r_fov|`` (one cap inside the other) or ``|pi - r_sv - r_fov|``
    (disjoint caps or complement containment); the adversary's cap guess
    succeeds with probability ``min((1 - cos eps) / (1 - cos r_z), 1)``.
    A partial-overlap report reveals the exact error and reduces to the
    error-upload analysis.  A degenerate streamed cap reveals nothing: the
    zone is the full sphere and the probability reaches the global minimum
    ``(1 - cos eps) / 2``.
    """
    fov = _validate_fov(r_fov)
    sv = _radius(r_sv)
    ep = _validate_epsilon(eps, fov)
    if sv == 0.0 or sv == math.pi:
        case = OverlapCase.DEGENERATE_EMPTY if sv == 0.0 else OverlapCase.DEGENERATE_FULL
        return LeakageResult((1.0 - math.cos(ep)) / 2.0, ZoneKind.FULL_SPHERE, SPHERE_AREA, case)
    inferred = infer_error_from_qoe(q, fov, sv)
    if inferred.kind == InferenceKind.EXACT:
        base = leak_prob_from_error(inferred.value, ep)
        return LeakageResult(base.probability, base.zone_kind, base.zone_measure, inferred.case)
    if inferred.case in (OverlapCase.FOV_IN_SFOV, OverlapCase.SFOV_IN_FOV):
        r_z = abs(sv - fov)
    else:
        r_z = abs(math.pi - sv - fov)
    if r_z <= ep:
        prob = 1.0
    else:
        prob = (1.0 - math.cos(ep)) / (1.0 - math.cos(r_z))
    return LeakageResult(prob, ZoneKind.CAP, TWO_PI * (1.0 - math.cos(r_z)), inferred.case)


class Monotonicity(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass(frozen=True)
class CaseLeakageProfile:
    """How QoE-upload leakage behaves within one constant case.

    ``is_max``: the probability equals 1 at the given streamed-cap radius.
    ``monotonicity``: direction of the probability in the streamed-cap
    radius on the sub-region where it is below 1.
    ``infimum``: the limiting value as the radius approaches the end of
    the case's range (pi for the containment-of-FoV and complement cases,
    0 for the containment-of-SFoV and disjoint cases).
    """

    is_max: bool
    monotonicity: Monotonicity
    infimum: float


def case_leakage_profile(
    r_fov: CapRadius | float, eps: float, r_sv: CapRadius | float, case: OverlapCase
) -> CaseLeakageProfile:
    """Summarize QoE-upload leakage behaviour for one constant case.

    Only the four constant cases have a cap zone whose radius depends on
    the streamed-cap radius; the partial-overlap case is rejected because
    its leakage depends on the error alone.
    """
    fov = _validate_fov(r_fov)
    sv = _radius(r_sv)
    ep = _validate_epsilon(eps, fov)
    if case in (OverlapCase.FOV_IN_SFOV, OverlapCase.SFOV_IN_FOV):
        r_z = abs(sv - fov)
    elif case in (OverlapCase.DISJOINT, OverlapCase.SFOV_COMPLEMENT_IN_FOV):
        r_z = abs(math.pi - sv - fov)
    else:
        raise ValueError(f"no per-case leakage profile for {case!r}")
    if case in (OverlapCase.FOV_IN_SFOV, OverlapCase.SFOV_COMPLEMENT_IN_FOV):
        # zone radius grows with the streamed cap, so leakage falls
        mono = Monotonicity.DECREASING
    else:
        mono = Monotonicity.INCREASING
    if case in (OverlapCase.FOV_IN_SFOV, OverlapCase.DISJOINT):
        infimum = (1.0 - math.cos(ep)) / (1.0 + math.cos(fov))
    else:
        infimum = (1.0 - math.cos(ep)) / (1.0 - math.cos(fov))
    return CaseLeakageProfile(is_max=r_z <= ep, monotonicity=mono, infimum=infimum)


@dataclass(frozen=True)
class MinProbComparison:
    """Global leakage minima of the two upload policies, compared."""

    qoe_upload_min: float
    error_upload_min: float
    qoe_upload_smaller: bool


def min_prob_comparison(eps: float, r_fov: CapRadius | float) -> MinProbComparison:
    """Compare the best-case leakage of QoE upload against error upload.

    For any protection radius in (0, r_fov] with r_fov at most pi/2 the
    QoE-upload minimum ``(1 - cos eps) / 2`` is strictly below the
    error-upload minimum ``eps / pi``; the two meet only at the closure
    corner eps = pi/2.
    """
    fov = _validate_fov(r_fov)
    ep = _validate_epsilon(eps, fov)
    q_min = (1.0 - math.cos(ep)) / 2.0
    e_min = ep / math.pi
    return MinProbComparison(q_min, e_min, q_min < e_min)
