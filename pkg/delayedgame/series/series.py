"""Truncated bivariate power series.

A :class:`BivariateSeries` holds the coefficients c_ij of x**i * y**j for
i <= max_deg_x and j <= max_deg_y in a dense complex array. Coefficients of
higher order are unknown, not zero: combining two series keeps the smaller
truncation order in each variable, and every retained coefficient of a sum,
product or reciprocal is the exact coefficient of the exact result.

    >>> s = BivariateSeries.linear(1.0, -1.0, 0.0, max_deg_x=3, max_deg_y=0)
    >>> s.reciprocal().coeffs[:, 0]       # 1 / (1 - x)
    array([1.+0.j, 1.+0.j, 1.+0.j, 1.+0.j])

Rows of the coefficient array are univariate series in y, which is how the
product and the reciprocal are organised.
"""

import logging
from numbers import Number
from typing_extensions import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.signal import convolve2d

from delayedgame.const import SINGULAR_TOLERANCE

from .exceptions import SingularConstantTerm, TruncationTooSmall

logger = logging.getLogger(__name__)


def _univariate_reciprocal(c: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Reciprocal of a univariate series by the forward recurrence."""
    order = len(c) - 1
    ans = np.zeros(order + 1, dtype=np.complex128)
    ans[0] = 1.0 / c[0]
    for n in range(1, order + 1):
        ans[n] = -np.dot(c[n:0:-1], ans[:n]) / c[0]
    return ans


class BivariateSeries:
    """Truncated power series in (x, y) with complex coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: ArrayLike):
        array = np.array(coeffs, dtype=np.complex128, copy=True, ndmin=2)
        if array.ndim != 2:
            raise ValueError(f"Coefficients must be a 2-D grid, got shape {array.shape}.")
        array.setflags(write=False)
        self._coeffs = array

    # Construction

    @classmethod
    def zeros(cls, max_deg_x: int, max_deg_y: int) -> Self:
        """Zero series of the given orders."""
        return cls(np.zeros((max_deg_x + 1, max_deg_y + 1)))

    @classmethod
    def constant(cls, value: complex, max_deg_x: int, max_deg_y: int) -> Self:
        """Constant series."""
        coeffs = np.zeros((max_deg_x + 1, max_deg_y + 1), dtype=np.complex128)
        coeffs[0, 0] = value
        return cls(coeffs)

    @classmethod
    def linear(
        cls, c00: complex, c10: complex, c01: complex, max_deg_x: int, max_deg_y: int
    ) -> Self:
        """The series c00 + c10 * x + c01 * y."""
        coeffs = np.zeros((max_deg_x + 1, max_deg_y + 1), dtype=np.complex128)
        coeffs[0, 0] = c00
        if max_deg_x >= 1:
            coeffs[1, 0] = c10
        if max_deg_y >= 1:
            coeffs[0, 1] = c01
        return cls(coeffs)

    # Accessors

    @property
    def coeffs(self) -> NDArray[np.complex128]:
        """Read-only coefficient grid, indexed [i, j] for x**i * y**j."""
        return self._coeffs

    @property
    def max_deg_x(self) -> int:
        """Truncation order in x."""
        return self._coeffs.shape[0] - 1

    @property
    def max_deg_y(self) -> int:
        """Truncation order in y."""
        return self._coeffs.shape[1] - 1

    def coefficient(self, i: int, j: int) -> complex:
        """Coefficient of x**i * y**j."""
        if i < 0 or j < 0:
            return 0j
        if i > self.max_deg_x or j > self.max_deg_y:
            raise TruncationTooSmall(
                f"Coefficient ({i}, {j}) requested from a series of orders "
                f"({self.max_deg_x}, {self.max_deg_y})."
            )
        return complex(self._coeffs[i, j])

    def __call__(self, x: complex, y: complex) -> complex:
        """Evaluate the truncated polynomial at (x, y)."""
        inner = np.polynomial.polynomial.polyval(y, self._coeffs.T)
        return complex(np.polynomial.polynomial.polyval(x, inner))

    def __repr__(self) -> str:
        return f"BivariateSeries(max_deg_x={self.max_deg_x}, max_deg_y={self.max_deg_y})"

    # Arithmetic

    def _common(self, other: "BivariateSeries") -> tuple[NDArray, NDArray]:
        kx = min(self.max_deg_x, other.max_deg_x) + 1
        ky = min(self.max_deg_y, other.max_deg_y) + 1
        return self._coeffs[:kx, :ky], other._coeffs[:kx, :ky]

    def __add__(self, other: "BivariateSeries | Number") -> Self:
        if isinstance(other, BivariateSeries):
            a, b = self._common(other)
            return type(self)(a + b)
        if isinstance(other, Number):
            coeffs = self._coeffs.copy()
            coeffs[0, 0] += other
            return type(self)(coeffs)
        return NotImplemented

    def __radd__(self, other: Number) -> Self:
        return self + other

    def __neg__(self) -> Self:
        return type(self)(-self._coeffs)

    def __sub__(self, other: "BivariateSeries | Number") -> Self:
        if isinstance(other, (BivariateSeries, Number)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: Number) -> Self:
        return (-self) + other

    def __mul__(self, other: "BivariateSeries | Number") -> Self:
        if isinstance(other, BivariateSeries):
            a, b = self._common(other)
            kx, ky = a.shape
            return type(self)(convolve2d(a, b, mode="full")[:kx, :ky])
        if isinstance(other, Number):
            return type(self)(self._coeffs * other)
        return NotImplemented

    def __rmul__(self, other: Number) -> Self:
        return self * other

    def __truediv__(self, other: "BivariateSeries | Number") -> Self:
        if isinstance(other, BivariateSeries):
            return self * other.reciprocal()
        if isinstance(other, Number):
            return type(self)(self._coeffs / other)
        return NotImplemented

    def __rtruediv__(self, other: Number) -> Self:
        return self.reciprocal() * other

    def __pow__(self, exponent: int) -> Self:
        if not isinstance(exponent, (int, np.integer)) or exponent < 0:
            raise ValueError("Only non-negative integer powers are supported.")
        result = type(self).constant(1.0, self.max_deg_x, self.max_deg_y)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def shift_x(self, power: int) -> Self:
        """Multiply by x**power, keeping the truncation order."""
        coeffs = np.zeros_like(self._coeffs)
        if power <= self.max_deg_x:
            coeffs[power:, :] = self._coeffs[: self.max_deg_x + 1 - power, :]
        return type(self)(coeffs)

    def reciprocal(self) -> Self:
        """1 / self on the retained grid.

        Row i of the result is the y-series R_i = S_0^{-1} (delta_i0 - sum_{k=1..i} S_k R_{i-k}).
        """
        c = self._coeffs
        if abs(c[0, 0]) <= SINGULAR_TOLERANCE:
            raise SingularConstantTerm(f"Constant term {c[0, 0]} is too close to zero.")
        kx, ky = c.shape
        inverse_row0 = _univariate_reciprocal(c[0])
        rows = np.zeros_like(c)
        rows[0] = inverse_row0
        for i in range(1, kx):
            acc = np.zeros(ky, dtype=np.complex128)
            for k in range(1, i + 1):
                acc += np.convolve(c[k], rows[i - k])[:ky]
            rows[i] = -np.convolve(inverse_row0, acc)[:ky]
        logger.debug("Reciprocal of a series of orders (%d, %d)", kx - 1, ky - 1)
        return type(self)(rows)
