"""Server resource model: how communication and computing budgets bound the
radius of the streamed field of view.

A streaming server must deliver, within the configured duration, every tile
of every frame of the upcoming segment.  The fraction of the full panoramic
sphere it can cover is the capability ``C``; the streamed cap radius follows
from inverting the cap-area ratio, ``r_sv = arccos(1 - 2*C)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sphere import CapRadius


@dataclass(frozen=True)
class TileSpec:
    """Pixel geometry and coding parameters of one tile.

    Tile sizes are kept as exact integers until ratios are formed, so the
    communication/computing loads are reproducible bit counts.
    """

    px_w: int
    px_h: int
    bits_per_pixel: int
    compression_ratio: float

    def __post_init__(self) -> None:
        for name in ("px_w", "px_h", "bits_per_pixel"):
            v = getattr(self, name)
            if not isinstance(v, int) or v <= 0:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if not (math.isfinite(self.compression_ratio) and self.compression_ratio >= 1.0):
            raise ValueError(
                f"compression_ratio must be >= 1, got {self.compression_ratio!r}"
            )

    @property
    def compute_bits(self) -> int:
        """Bits to render per tile (uncompressed)."""
        return self.px_w * self.px_h * self.bits_per_pixel

    @property
    def transmit_bits(self) -> float:
        """Bits to transmit per tile (after compression)."""
        return self.compute_bits / self.compression_ratio


@dataclass(frozen=True)
class ResourceConfig:
    """Per-user share of the server budget and the streaming workload.

    ``cc_duration`` is the time available for computing and communicating
    one segment; it may be zero (no budget, capability zero).  All rates
    are strictly positive.
    """

    compute_flops: float
    users: int
    flops_per_bit: float
    avg_data_rate: float
    cc_duration: float
    frames_per_segment: int
    tiles_per_frame: int

    def __post_init__(self) -> None:
        for name in ("compute_flops", "flops_per_bit", "avg_data_rate"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be > 0, got {v!r}")
        if not isinstance(self.users, int) or self.users < 1:
            raise ValueError(f"users must be a positive integer, got {self.users!r}")
        for name in ("frames_per_segment", "tiles_per_frame"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if not (math.isfinite(self.cc_duration) and self.cc_duration >= 0.0):
            raise ValueError(f"cc_duration must be >= 0, got {self.cc_duration!r}")

    @property
    def compute_rate(self) -> float:
        """Per-user rendering throughput in bit/s."""
        return self.compute_flops / (self.users * self.flops_per_bit)


def capability(cfg: ResourceConfig, tile: TileSpec) -> float:
    """Fraction of the panoramic sphere the server can stream in time.

    The per-tile cost is transmit time plus render time; the capability is
    the ratio of the available duration to the cost of the full sphere's
    ``frames_per_segment * tiles_per_frame`` tiles, clamped to 1.

    Returns:
        Capability in [0, 1]; 1 means the whole sphere fits in the budget.
    """
    per_tile = tile.transmit_bits / cfg.avg_data_rate + tile.compute_bits / cfg.compute_rate
    full_sphere = cfg.frames_per_segment * cfg.tiles_per_frame * per_tile
    return min(cfg.cc_duration / full_sphere, 1.0)


def sfov_radius(c: float) -> CapRadius:
    """Streamed-cap radius for capability ``c``: arccos(1 - 2*c).

    Capability 0 gives radius 0 (nothing streamed); capability 1 gives
    radius pi (the complete panoramic sphere is streamed).
    """
    if not (math.isfinite(c) and 0.0 <= c <= 1.0):
        raise ValueError(f"capability {c!r} outside [0, 1]")
    return CapRadius(math.acos(1.0 - 2.0 * c))


def capability_from_radius(r: CapRadius | float) -> float:
    """Inverse of `sfov_radius`: the cap-area fraction (1 - cos r) / 2."""
    r = float(r) if not isinstance(r, CapRadius) else r.value
    if not (math.isfinite(r) and 0.0 <= r <= math.pi):
        raise ValueError(f"radius {r!r} outside [0, pi]")
    return (1.0 - math.cos(r)) / 2.0


@dataclass(frozen=True)
class ChannelConfig:
    """Downlink described by a zero-forcing multi-antenna model.

    With ``antennas`` transmit antennas serving ``users`` single-antenna
    receivers under zero-forcing precoding, the per-user effective channel
    gain is Gamma-distributed with shape ``antennas - users + 1`` and unit
    scale (equivalently chi-squared with 2*(antennas - users + 1) degrees
    of freedom at scale 1/2).
    """

    bandwidth: float
    tx_power: float
    distance: float
    pathloss_exp: float
    noise_power: float
    antennas: int
    users: int

    def __post_init__(self) -> None:
        for name in ("bandwidth", "distance", "noise_power"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be > 0, got {v!r}")
        if not (math.isfinite(self.tx_power) and self.tx_power >= 0.0):
            raise ValueError(f"tx_power must be >= 0, got {self.tx_power!r}")
        if not (math.isfinite(self.pathloss_exp) and self.pathloss_exp >= 0.0):
            raise ValueError(f"pathloss_exp must be >= 0, got {self.pathloss_exp!r}")
        for name in ("antennas", "users"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if self.users > self.antennas:
            raise ValueError(
                f"users ({self.users}) cannot exceed antennas ({self.antennas}) "
                "under zero-forcing"
            )


def mc_avg_rate(ch: ChannelConfig, n: int, seed: int) -> float:
    """Monte-Carlo estimate of the ensemble-average downlink rate, bit/s.

    Samples the zero-forcing effective gain and averages
    ``bandwidth * log2(1 + snr * gain)`` where
    ``snr = tx_power * distance**(-pathloss_exp) / noise_power``.
    Deterministic per seed.  This estimates the ensemble average; the
    capability model consumes it directly as the average data rate.
    """
    if n < 1:
        raise ValueError(f"sample count {n!r} must be >= 1")
    rng = np.random.default_rng(seed)
    gain = rng.gamma(shape=ch.antennas - ch.users + 1, scale=1.0, size=n)
    snr = ch.tx_power * ch.distance ** (-ch.pathloss_exp) / ch.noise_power
    return float(np.mean(ch.bandwidth * np.log2(1.0 + snr * gain)))
