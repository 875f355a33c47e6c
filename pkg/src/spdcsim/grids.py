"""Sampling axes and the joint-amplitude container."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridError, UsageError


def _check_n(n: int) -> int:
    n = int(n)
    if n < 64 or n & (n - 1):
        raise GridError(f"grid size must be a power of two >= 64, got {n}")
    return n


@dataclass(frozen=True)
class FrequencyGrid:
    """Centered detuning axis: nu_k = (k - n//2) * span / n.

    ``center`` records the carrier (degenerate) frequency the detunings are
    measured from; it does not shift the samples.
    """

    n: int
    span: float
    center: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))
        if not (self.span > 0 and math.isfinite(self.span)):
            raise GridError("grid span must be positive and finite")

    @property
    def step(self) -> float:
        return self.span / self.n

    @property
    def samples(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.step

    def conjugate(self) -> "TimeGrid":
        return TimeGrid(self.n, 2 * math.pi / self.step, 0.0)


@dataclass(frozen=True)
class TimeGrid:
    """Centered time axis conjugate to a FrequencyGrid (dt = 2 pi / (n dnu))."""

    n: int
    span: float
    center: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))
        if not (self.span > 0 and math.isfinite(self.span)):
            raise GridError("grid span must be positive and finite")

    @property
    def step(self) -> float:
        return self.span / self.n

    @property
    def samples(self) -> np.ndarray:
        return self.center + (np.arange(self.n) - self.n // 2) * self.step

    def conjugate(self) -> FrequencyGrid:
        return FrequencyGrid(self.n, 2 * math.pi / self.step)


Axis = FrequencyGrid | TimeGrid


@dataclass(frozen=True, eq=False)
class JointAmplitudeGrid:
    """Complex two-photon amplitude sampled as ``values[idler, signal]``."""

    values: np.ndarray
    idler_axis: Axis
    signal_axis: Axis
    domain: str = "spectral"
    normalized: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.domain not in ("spectral", "temporal"):
            raise UsageError("domain must be 'spectral' or 'temporal'")
        want = FrequencyGrid if self.domain == "spectral" else TimeGrid
        if not (isinstance(self.idler_axis, want) and isinstance(self.signal_axis, want)):
            raise UsageError(f"{self.domain} grid needs {want.__name__} axes")
        if self.values.shape != (self.idler_axis.n, self.signal_axis.n):
            raise UsageError("values shape does not match the axes")
        self.values.setflags(write=False)

    @property
    def cell(self) -> float:
        return self.idler_axis.step * self.signal_axis.step

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm2(self) -> float:
        return float(np.sum(self.intensity) * self.cell)

    def replace_values(self, values: np.ndarray, **kw) -> "JointAmplitudeGrid":
        return JointAmplitudeGrid(np.asarray(values), kw.pop("idler_axis", self.idler_axis),
                                  kw.pop("signal_axis", self.signal_axis),
                                  kw.pop("domain", self.domain), kw.pop("normalized", self.normalized),
                                  kw.pop("meta", dict(self.meta)))

    def normalize(self) -> "JointAmplitudeGrid":
        nrm = self.norm2()
        if not (nrm > 0 and math.isfinite(nrm)):
            raise GridError("amplitude has zero or non-finite norm on this grid")
        return self.replace_values(self.values / math.sqrt(nrm), normalized=True)

    def same_axes(self, other: "JointAmplitudeGrid") -> bool:
        return (self.domain == other.domain and self.idler_axis == other.idler_axis
                and self.signal_axis == other.signal_axis)


def edge_fraction(intensity: np.ndarray, width: int = 2) -> float:
    """Fraction of the total weight sitting in the outermost ``width``-pixel frame."""
    total = float(intensity.sum())
    inner = float(intensity[width:-width, width:-width].sum())
    return (total - inner) / total if total > 0 else 1.0


def next_pow2(x: float) -> int:
    return 1 << max(0, math.ceil(math.log2(max(x, 1.0))))
