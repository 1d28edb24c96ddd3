"""Frequency-band projections on periodized grids.

The band projection for an interval I keeps exactly the discrete frequencies
q / L (L = grid span) lying in [lo, hi), treating the grid as one period.
Because the mask is 0/1 on the discrete spectrum, projections are idempotent
and compose by interval intersection up to floating-point rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .errors import OverlappingIntervals
from .grids import Exponent, Grid, SampledFunction, lp_ell2_norm


@dataclass(frozen=True)
class FrequencyInterval:
    """Half-open frequency band [lo, hi)."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi})")

    def overlaps(self, other: "FrequencyInterval") -> bool:
        return self.lo < other.hi and other.lo < self.hi


def grid_frequencies(grid: Grid) -> np.ndarray:
    """The discrete frequencies q / span carried by the periodized grid."""
    span = grid.count * grid.step
    q = np.fft.fftfreq(grid.count, d=1.0 / grid.count)  # integers -N/2..N/2-1
    return q / span


def partial_sum(f: SampledFunction, interval: FrequencyInterval) -> SampledFunction:
    """Band projection: inverse transform of the spectrum restricted to [lo, hi)."""
    freqs = grid_frequencies(f.grid)
    spectrum = np.fft.fft(f.values)
    mask = (freqs >= interval.lo) & (freqs < interval.hi)
    return SampledFunction(f.grid, np.fft.ifft(spectrum * mask))


def square_function_norm(
    f: SampledFunction, intervals: Sequence[FrequencyInterval], p: Exponent
) -> float:
    """|| (sum_k |D_{I_k} f|^2)^(1/2) ||_p for pairwise disjoint bands, p >= 2."""
    if p.p < 2.0:
        raise ValueError("the square-function bound is formed for p >= 2")
    for i, a in enumerate(intervals):
        for b in intervals[i + 1 :]:
            if a.overlaps(b):
                raise OverlappingIntervals(f"{a} overlaps {b}")
    parts = [partial_sum(f, iv) for iv in intervals]
    return lp_ell2_norm(parts, p)


def split_into_disjoint_families(
    intervals: Sequence[FrequencyInterval],
) -> List[List[FrequencyInterval]]:
    """Greedy first-fit partition of an interval family into disjoint subfamilies."""
    families: List[List[FrequencyInterval]] = []
    for iv in sorted(intervals, key=lambda i: (i.lo, i.hi)):
        for fam in families:
            if not fam[-1].overlaps(iv):
                fam.append(iv)
                break
        else:
            families.append([iv])
    return families
