"""Closed-form solutions of the cell equation, carried with all their derivatives.

A solution knows how to evaluate psi and its derivatives of any order at
arbitrary points.  Derivatives are produced symbolically (Leibniz rule and
polynomials in tanh), never by finite differences.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

POSITIVE = "positive-energy"
NEGATIVE = "negative-energy"
ZERO = "zero-energy"
NUMERIC = "numeric"


@dataclass(frozen=True)
class CellSolution:
    """One solution psi of -psi''/2 + V psi = E psi with V the l_eff well.

    ``derivs(x, n)`` returns ``[psi, psi', ..., psi^(n)]`` evaluated at x.
    """

    derivs: Callable
    energy: float
    k: float
    branch: str
    coefficients: tuple = (1.0, 0.0)
    l_eff: int = 0
    alpha: float = 0.0
    parity: Optional[int] = None
    max_order: Optional[int] = None
    provenance: tuple = field(default=())

    def value(self, x):
        return self.derivs(x, 0)[0]

    def derivative(self, x):
        return self.derivs(x, 1)[1]

    def second_derivative(self, x):
        if self.max_order is not None and self.max_order < 2:
            raise ValueError("second derivative not available for this solution")
        return self.derivs(x, 2)[2]

    def state(self, x):
        """(psi, psi') at x."""
        d = self.derivs(x, 1)
        return d[0], d[1]


@lru_cache(maxsize=None)
def _tanh_derivative_polys(order):
    # d/dx p(t) = alpha (1 - t^2) p'(t) with t = tanh(alpha x); alpha factored out
    one_minus_t2 = Polynomial([1.0, 0.0, -1.0])
    polys = [Polynomial([0.0, 1.0])]
    for _ in range(order):
        polys.append(one_minus_t2 * polys[-1].deriv())
    return tuple(polys)


def tanh_derivatives(alpha, x, order):
    """[T, T', ..., T^(order)] for T(x) = tanh(alpha x)."""
    t = np.tanh(alpha * np.asarray(x, dtype=float))
    polys = _tanh_derivative_polys(order)
    return [alpha ** m * polys[m](t) for m in range(order + 1)]


def _binom_row(m):
    row = [1]
    for i in range(m):
        row.append(row[-1] * (m - i) // (i + 1))
    return row
