"""Step functions on dyadic grids and their L^p computations.

Functions are represented as complex-valued step functions: constant on each
cell [origin + i*step, origin + (i+1)*step) of a uniform grid whose step is an
exact power of two.  The function *is* the step function, so every L^p norm is
an exact integral (up to floating-point rounding), not a quadrature estimate.

Modulation is realized by midpoint sampling of the exponential, which keeps the
pointwise modulus exact (the sampled factor is unimodular); integrals of a
modulated step function against another function carry a quadrature error of
order step * frequency, which callers are expected to record in reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import (
    AliasedFrequency,
    GridMismatch,
    GridTooSmall,
    NonAlignedGrid,
    NonAlignedShift,
)

ALIGNMENT_TOL = 1e-12


def _as_fraction(x, what: str = "value") -> Fraction:
    """Convert ints, Fractions and binary floats to an exact Fraction."""
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        if not np.isfinite(x):
            raise ValueError(f"{what} must be finite, got {x!r}")
        return Fraction(x)
    raise TypeError(f"{what} must be a real number, got {type(x).__name__}")


@dataclass(frozen=True)
class Exponent:
    """An L^p exponent p > 1 together with its conjugate p' = p/(p-1)."""

    p: float

    def __post_init__(self):
        if not (self.p > 1.0):
            raise ValueError(f"exponent must satisfy p > 1, got {self.p}")

    @property
    def conjugate(self) -> float:
        return self.p / (self.p - 1.0)

    def dual(self) -> "Exponent":
        return Exponent(self.conjugate)


@dataclass(frozen=True)
class Grid:
    """Uniform dyadic grid: cells [origin + i*step, origin + (i+1)*step).

    ``step = 2**step_log2`` with ``step_log2 <= 0``, and the origin is an exact
    integer multiple of the step (stored as that integer).  This makes every
    integer in the span a cell boundary and keeps shift alignment checks exact.
    """

    origin_index: int
    step_log2: int
    count: int

    def __post_init__(self):
        if self.step_log2 > 0:
            raise ValueError("grid step must be 2**(-m) with m >= 0")
        if self.count <= 0:
            raise ValueError("grid must contain at least one cell")

    @classmethod
    def over(cls, lo, hi, step_log2: int) -> "Grid":
        """Grid of step 2**step_log2 covering [lo, hi); endpoints must be grid-aligned."""
        step = Fraction(1, 2 ** (-step_log2))
        lo_f, hi_f = _as_fraction(lo, "lo"), _as_fraction(hi, "hi")
        oi = lo_f / step
        n = (hi_f - lo_f) / step
        if oi.denominator != 1 or n.denominator != 1:
            raise NonAlignedGrid(f"[{lo}, {hi}) is not aligned to step 2^{step_log2}")
        return cls(int(oi), step_log2, int(n))

    @property
    def step(self) -> float:
        return 2.0 ** self.step_log2

    @property
    def step_fraction(self) -> Fraction:
        return Fraction(1, 2 ** (-self.step_log2))

    @property
    def origin(self) -> Fraction:
        return self.origin_index * self.step_fraction

    @property
    def upper(self) -> Fraction:
        return (self.origin_index + self.count) * self.step_fraction

    def midpoints(self) -> np.ndarray:
        return (float(self.origin) + (np.arange(self.count) + 0.5) * self.step)

    def index_of(self, x) -> int:
        """Cell index of a grid-aligned point x (the cell starting at x)."""
        q = _as_fraction(x, "x") / self.step_fraction
        if q.denominator != 1:
            raise NonAlignedGrid(f"{x} is not a cell boundary of {self}")
        return int(q) - self.origin_index

    def shifted(self, cells: int) -> "Grid":
        return Grid(self.origin_index + cells, self.step_log2, self.count)


@dataclass(frozen=True)
class SampledFunction:
    """A complex step function on a Grid; values[i] is the constant on cell i."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.count,):
            raise ValueError(
                f"values shape {v.shape} does not match grid count {self.grid.count}"
            )
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, grid: Grid) -> "SampledFunction":
        return cls(grid, np.zeros(grid.count, dtype=np.complex128))

    @classmethod
    def indicator(cls, lo, hi, grid: Grid) -> "SampledFunction":
        """Indicator of [lo, hi); endpoints must be grid-aligned and inside the span."""
        i = grid.index_of(lo)
        j = grid.index_of(hi)
        if not (0 <= i <= j <= grid.count):
            raise GridTooSmall(f"[{lo}, {hi}) not contained in the grid span")
        v = np.zeros(grid.count, dtype=np.complex128)
        v[i:j] = 1.0
        return cls(grid, v)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        _require_same_grid(self, other)
        return SampledFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        _require_same_grid(self, other)
        return SampledFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar: complex) -> "SampledFunction":
        return SampledFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def pointwise(self, other: "SampledFunction") -> "SampledFunction":
        _require_same_grid(self, other)
        return SampledFunction(self.grid, self.values * other.values)

    def abs(self) -> "SampledFunction":
        return SampledFunction(self.grid, np.abs(self.values).astype(np.complex128))

    def to_json(self) -> dict:
        return {
            "origin": float(self.grid.origin),
            "step_log2": self.grid.step_log2,
            "values": [[float(z.real), float(z.imag)] for z in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SampledFunction":
        origin = Fraction(obj["origin"])
        step = Fraction(1, 2 ** (-obj["step_log2"]))
        grid = Grid.over(
            origin, origin + len(obj["values"]) * step, obj["step_log2"]
        )
        vals = np.array([complex(re, im) for re, im in obj["values"]])
        return cls(grid, vals)


def _require_same_grid(f: SampledFunction, g: SampledFunction) -> None:
    if f.grid != g.grid:
        raise GridMismatch(f"grids differ: {f.grid} vs {g.grid}")


def embed(f: SampledFunction, grid: Grid) -> SampledFunction:
    """Zero-extend f onto a larger grid with the same step."""
    if grid.step_log2 != f.grid.step_log2:
        raise GridMismatch("embedding requires equal steps")
    off = f.grid.origin_index - grid.origin_index
    if off < 0 or off + f.grid.count > grid.count:
        raise GridTooSmall("target grid does not contain the source span")
    v = np.zeros(grid.count, dtype=np.complex128)
    v[off : off + f.grid.count] = f.values
    return SampledFunction(grid, v)


def common_grid(fs: Sequence[SampledFunction]) -> Grid:
    """Smallest grid (at the common step) containing the spans of all inputs."""
    if not fs:
        raise ValueError("need at least one function")
    steps = {f.grid.step_log2 for f in fs}
    if len(steps) > 1:
        raise GridMismatch("functions live at different steps")
    lo = min(f.grid.origin_index for f in fs)
    hi = max(f.grid.origin_index + f.grid.count for f in fs)
    return Grid(lo, steps.pop(), hi - lo)


def lp_norm(f: SampledFunction, p: Exponent) -> float:
    """Exact L^p(R) norm of the step function: (sum |v_i|^p * step)**(1/p)."""
    a = np.abs(f.values)
    return float((a**p.p).sum() * f.grid.step) ** (1.0 / p.p)


def lp_norm_pth(f: SampledFunction, p: Exponent) -> float:
    """The p-th power of lp_norm, computed directly."""
    a = np.abs(f.values)
    return float((a**p.p).sum() * f.grid.step)


def translate(f: SampledFunction, t) -> SampledFunction:
    """Shift f by t: result(x) = f(x - t).  t must be a multiple of the step.

    The shift is realized by moving the grid origin; values are untouched, so
    translation is an exact isometry for every norm computed here.
    """
    step = f.grid.step_fraction
    if isinstance(t, float):
        q = t / float(step)
        if abs(q - round(q)) > ALIGNMENT_TOL:
            raise NonAlignedShift(f"shift {t} is not a multiple of step {float(step)}")
        cells = int(round(q))
    else:
        q = _as_fraction(t, "t") / step
        if q.denominator != 1:
            raise NonAlignedShift(f"shift {t} is not a multiple of step {step}")
        cells = int(q)
    return SampledFunction(f.grid.shifted(cells), f.values)


def _phase_base(s: Fraction, origin: Fraction) -> float:
    # reduce s*origin mod 1 exactly; keeps the phase accurate for huge origins
    return float((s * origin) % 1)


def modulation_values(grid: Grid, s) -> np.ndarray:
    """Midpoint samples of exp(2*pi*i*s*x) on the grid cells."""
    s_f = _as_fraction(s, "s")
    base = _phase_base(s_f, grid.origin)
    incr = float(s_f) * grid.step
    phases = base + incr * (np.arange(grid.count) + 0.5)
    return np.exp(2j * np.pi * phases)


def modulate(f: SampledFunction, s) -> SampledFunction:
    """Multiply f by exp(2*pi*i*s*x) sampled at cell midpoints.

    Requires |s| < 1/(2*step); beyond that bound the sampled exponential
    aliases onto a lower frequency.
    """
    s_f = _as_fraction(s, "s")
    if 2 * abs(s_f) * f.grid.step_fraction >= 1:
        raise AliasedFrequency(
            f"|s|={float(abs(s_f))} at or beyond Nyquist {0.5 / f.grid.step}"
        )
    return SampledFunction(f.grid, f.values * modulation_values(f.grid, s_f))


def time_freq_shift(g: SampledFunction, t, s) -> SampledFunction:
    """The Gabor atom x -> g(x - t) * exp(2*pi*i*s*x)."""
    return modulate(translate(g, t), s)


def lp_ell2_norm(fs: Sequence[SampledFunction], p: Exponent) -> float:
    """Mixed norm || (sum_j |f_j|^2)^(1/2) ||_p of functions on one grid."""
    if not fs:
        raise ValueError("need at least one function")
    g = fs[0].grid
    for f in fs[1:]:
        if f.grid != g:
            raise GridMismatch("all functions must share one grid")
    sq = np.zeros(g.count)
    for f in fs:
        sq += np.abs(f.values) ** 2
    return float((sq ** (p.p / 2.0)).sum() * g.step) ** (1.0 / p.p)


def wiener_norm(f: SampledFunction) -> float:
    """Amalgam norm: sum over integer cells [k, k+1) of sup |f| on the cell.

    Integer cut points are always cell boundaries here (the step divides 1 and
    the origin is a multiple of the step), so no resampling is ever needed.
    """
    g = f.grid
    cells_per_unit = 2 ** (-g.step_log2)
    total = 0.0
    a = np.abs(f.values)
    # first integer boundary at or before the origin
    start = (g.origin_index // cells_per_unit) * cells_per_unit
    i = start - g.origin_index
    while i < g.count:
        lo = max(i, 0)
        hi = min(i + cells_per_unit, g.count)
        if hi > lo:
            total += float(a[lo:hi].max())
        i += cells_per_unit
    return total


def restrict(f: SampledFunction, lo, hi) -> SampledFunction:
    """Restriction of f to [lo, hi) as a function on the sub-grid."""
    i = f.grid.index_of(lo)
    j = f.grid.index_of(hi)
    if not (0 <= i <= j <= f.grid.count):
        raise GridTooSmall(f"[{lo}, {hi}) not contained in the grid span")
    sub = Grid(f.grid.origin_index + i, f.grid.step_log2, j - i)
    return SampledFunction(sub, f.values[i:j])
