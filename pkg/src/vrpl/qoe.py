"""QoE model: the fraction of the user's field of view covered by the
streamed cap.

Given the field-of-view radius ``r_fov``, the streamed-cap radius ``r_sv``
and the prediction error ``e`` (the orthodromic distance between the true
and predicted viewpoints), the covered fraction decomposes into five
geometric cases plus two degenerate streamed-cap radii.  Case boundaries
are closed: a configuration lying on a boundary belongs to the first
matching case in the order below.
"""

from __future__ import annotations

import enum
import math

from .sphere import TWO_PI, CapRadius, _radius, cap_area, cap_overlap_area


class OverlapCase(enum.Enum):
    """Geometric relation between the field of view and the streamed cap."""

    FOV_IN_SFOV = "fov_in_sfov"
    SFOV_IN_FOV = "sfov_in_fov"
    DISJOINT = "disjoint"
    SFOV_COMPLEMENT_IN_FOV = "sfov_complement_in_fov"
    REMAINING = "remaining"
    DEGENERATE_EMPTY = "degenerate_empty"
    DEGENERATE_FULL = "degenerate_full"


# The five non-degenerate cases, in boundary-tie precedence order.
PARTITION_CASES = (
    OverlapCase.FOV_IN_SFOV,
    OverlapCase.SFOV_IN_FOV,
    OverlapCase.DISJOINT,
    OverlapCase.SFOV_COMPLEMENT_IN_FOV,
    OverlapCase.REMAINING,
)


def _validate_fov(r_fov: CapRadius | float) -> float:
    v = _radius(r_fov)
    if not 0.0 < v <= math.pi / 2:
        raise ValueError(f"field-of-view radius {v!r} outside (0, pi/2]")
    return v


def _validate_error(e: float) -> float:
    v = float(e)
    if not (math.isfinite(v) and 0.0 <= v <= math.pi):
        raise ValueError(f"viewpoint error {e!r} outside [0, pi]")
    return v


def classify(r_fov: CapRadius | float, r_sv: CapRadius | float, e: float) -> OverlapCase:
    """Classify the field-of-view / streamed-cap configuration.

    Args:
        r_fov: field-of-view radius, in (0, pi/2].
        r_sv: streamed-cap radius, in [0, pi].
        e: viewpoint prediction error, in [0, pi].

    Returns:
        The matching `OverlapCase`.  Degenerate streamed caps (radius 0 or
        pi) are reported as such before the five-way split; ties between
        the closed cases resolve in the listed order.
    """
    fov = _validate_fov(r_fov)
    sv = _radius(r_sv)
    err = _validate_error(e)
    if sv == 0.0:
        return OverlapCase.DEGENERATE_EMPTY
    if sv == math.pi:
        return OverlapCase.DEGENERATE_FULL
    if sv >= fov + err:
        return OverlapCase.FOV_IN_SFOV
    if fov >= sv + err:
        return OverlapCase.SFOV_IN_FOV
    if err >= fov + sv:
        return OverlapCase.DISJOINT
    if fov + sv + err >= TWO_PI:
        return OverlapCase.SFOV_COMPLEMENT_IN_FOV
    return OverlapCase.REMAINING


def qoe(r_fov: CapRadius | float, r_sv: CapRadius | float, e: float) -> float:
    """Fraction of the field of view covered by the streamed cap, in [0, 1].

    Constant in ``e`` inside the four closed cases; in the partial-overlap
    case it is the cap-overlap area divided by the field-of-view area,
    strictly decreasing in ``e`` and strictly increasing in ``r_sv``.
    """
    fov = _validate_fov(r_fov)
    sv = _radius(r_sv)
    err = _validate_error(e)
    case = classify(fov, sv, err)
    if case in (OverlapCase.FOV_IN_SFOV, OverlapCase.DEGENERATE_FULL):
        return 1.0
    if case == OverlapCase.SFOV_IN_FOV:
        return (1.0 - math.cos(sv)) / (1.0 - math.cos(fov))
    if case in (OverlapCase.DISJOINT, OverlapCase.DEGENERATE_EMPTY):
        return 0.0
    if case == OverlapCase.SFOV_COMPLEMENT_IN_FOV:
        return (-math.cos(sv) - math.cos(fov)) / (1.0 - math.cos(fov))
    value = cap_overlap_area(fov, sv, err) / cap_area(fov)
    return min(max(value, 0.0), 1.0)
