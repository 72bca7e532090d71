"""Physical parameters and the (periodized) Poschl-Teller potential.

Units are fixed to hbar = m = 1, so energies are measured in hbar^2/m.
A lattice cell is [-a, a) and the period is 2a.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    l: int
    alpha: float
    a: float = 1.0

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 1:
            raise ValueError(f"l must be a positive integer, got {self.l!r}")
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be a finite positive number, got {self.alpha!r}")
        if not (np.isfinite(self.a) and self.a > 0):
            raise ValueError(f"a must be a finite positive number, got {self.a!r}")
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "a", float(self.a))

    @property
    def period(self):
        return 2.0 * self.a

    @property
    def depth(self):
        """Depth of the well bottom, l(l+1) alpha^2 / 2."""
        return 0.5 * self.l * (self.l + 1) * self.alpha ** 2


def sech2(z):
    # 1/cosh^2 without overflow warnings for large |z|
    z = np.abs(np.asarray(z, dtype=float))
    e = np.exp(-2.0 * z)
    return 4.0 * e / (1.0 + e) ** 2


def eval_potential_single(params, x):
    """Single Poschl-Teller well, -(alpha^2/2) l(l+1) / cosh^2(alpha x)."""
    out = -params.depth * sech2(params.alpha * np.asarray(x, dtype=float))
    return out if np.ndim(out) else float(out)


def reduce_to_cell(x, a):
    """Map x onto the cell [-a, a) by subtracting the nearest multiple of 2a."""
    x = np.asarray(x, dtype=float)
    period = 2.0 * a
    r = x - period * np.floor((x + a) / period)
    # rounding in floor can leave r a hair outside [-a, a)
    r = np.where(r >= a, r - period, r)
    r = np.where(r < -a, r + period, r)
    r = np.clip(r, -a, np.nextafter(a, -np.inf))
    return r if np.ndim(r) else float(r)


def eval_potential_periodic(params, x):
    """Potential repeated with period 2a, each copy centred on a lattice site."""
    return eval_potential_single(params, reduce_to_cell(x, params.a))
