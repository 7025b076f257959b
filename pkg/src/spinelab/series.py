"""Rational generating functions and truncated dimension sequences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


def _trim(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    return tuple(coeffs)


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_add(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


@dataclass(frozen=True)
class GradedDims:
    """Dimension per degree, indices 0..bound."""

    bound: int
    dims: tuple

    def __post_init__(self):
        if len(self.dims) != self.bound + 1:
            raise ValueError("dims must have bound+1 entries")
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be nonnegative")

    def __getitem__(self, d: int) -> int:
        return self.dims[d]

    def truncate(self, bound: int) -> "GradedDims":
        if bound > self.bound:
            raise ValueError("cannot extend a dimension sequence")
        return GradedDims(bound, self.dims[: bound + 1])

    def add(self, other: "GradedDims") -> "GradedDims":
        bound = min(self.bound, other.bound)
        return GradedDims(bound, tuple(self[d] + other[d] for d in range(bound + 1)))

    @classmethod
    def from_list(cls, dims: Iterable) -> "GradedDims":
        dims = tuple(dims)
        return cls(len(dims) - 1, dims)


@dataclass(frozen=True)
class PowerSeriesRat:
    """Quotient of integer polynomials, stored low-degree first.

    The expansion is integral whenever the denominator has constant term
    +-1, which is the only case `expand` accepts.
    """

    numerator: tuple
    denominator: tuple

    @classmethod
    def make(cls, numerator: Iterable, denominator: Iterable = (1,)) -> "PowerSeriesRat":
        num, den = _trim(list(numerator)), _trim(list(denominator))
        if not den:
            raise ZeroDivisionError("zero denominator")
        return cls(num, den)

    @classmethod
    def monomial_pair(cls, c0: int, exp: int, c1: int) -> "PowerSeriesRat":
        """The polynomial c0 + c1 * t^exp."""
        coeffs = [0] * (exp + 1)
        coeffs[0] = c0
        coeffs[exp] += c1
        return cls.make(coeffs)

    def __add__(self, other: "PowerSeriesRat") -> "PowerSeriesRat":
        num = _poly_add(
            _poly_mul(self.numerator, other.denominator),
            _poly_mul(other.numerator, self.denominator),
        )
        return PowerSeriesRat.make(num, _poly_mul(self.denominator, other.denominator))

    def __mul__(self, other) -> "PowerSeriesRat":
        if isinstance(other, int):
            other = PowerSeriesRat.make([other])
        return PowerSeriesRat.make(
            _poly_mul(self.numerator, other.numerator),
            _poly_mul(self.denominator, other.denominator),
        )

    __rmul__ = __mul__

    def same_function(self, other: "PowerSeriesRat") -> bool:
        """Equality as rational functions (cross multiplication)."""
        return _poly_mul(self.numerator, other.denominator) == _poly_mul(
            other.numerator, self.denominator
        )

    def coefficients(self, bound: int) -> tuple:
        """Raw expansion coefficients; requires a unit constant term."""
        den = self.denominator
        if not den or den[0] not in (1, -1):
            raise ValueError("denominator constant term must be a unit")
        lead = den[0]
        coeffs = []
        for d in range(bound + 1):
            acc = self.numerator[d] if d < len(self.numerator) else 0
            for k in range(1, min(d, len(den) - 1) + 1):
                acc -= den[k] * coeffs[d - k]
            coeffs.append(acc // lead)
        return tuple(coeffs)

    def expand(self, bound: int) -> GradedDims:
        """Truncated expansion as a dimension sequence."""
        return GradedDims(bound, self.coefficients(bound))


def expand(series: PowerSeriesRat, bound: int) -> GradedDims:
    return series.expand(bound)


def series_equal(a: PowerSeriesRat, b: PowerSeriesRat, bound: int) -> bool:
    """Coefficient-wise equality of the truncated expansions."""
    return a.coefficients(bound) == b.coefficients(bound)


def geometric(exp: int) -> PowerSeriesRat:
    """1 / (1 - t^exp), the series of a polynomial generator."""
    den = [0] * (exp + 1)
    den[0], den[exp] = 1, -1
    return PowerSeriesRat.make([1], den)


def one_plus(exp: int) -> PowerSeriesRat:
    """1 + t^exp, the series of an exterior generator."""
    return PowerSeriesRat.monomial_pair(1, exp, 1)
