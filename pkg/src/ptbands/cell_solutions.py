"""Closed-form solution spaces of the cell equation for any energy.

Free solutions at energy E are pushed through the raising operators
A^dag(l_eff = 1), ..., A^dag(l_eff = l); each image solves the next well in
the chain at the same energy, so the last one solves the l-well.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np

from .errors import DegenerateBasisRepaired
from .model import eval_potential_single
from .solution import NEGATIVE, POSITIVE, ZERO, CellSolution
from .susy import apply_raising

ZERO_ENERGY_WINDOW = 1e-9
DEGENERACY_THRESHOLD = 1e-8


@dataclass(frozen=True)
class SolutionBasis:
    u: CellSolution
    v: CellSolution
    wronskian_value: float
    degenerate: bool = False
    mixed_provenance: bool = False

    def wronskian(self, x):
        u0, u1 = self.u.state(x)
        v0, v1 = self.v.state(x)
        return u0 * v1 - u1 * v0

    def wronskian_drift(self, xs):
        """Spread of W over ``xs`` relative to max(|W|, |u v'| + |u' v|).

        The second scale is what rounding acts on: for growing solutions the
        two products are far larger than their difference.
        """
        w, scale = [], abs(self.wronskian_value)
        for x in xs:
            u0, u1 = self.u.state(x)
            v0, v1 = self.v.state(x)
            w.append(u0 * v1 - u1 * v0)
            scale = max(scale, abs(u0 * v1) + abs(u1 * v0))
        return float(np.ptp(w) / scale)

    def fundamental_matrix(self, x):
        u0, u1 = self.u.state(x)
        v0, v1 = self.v.state(x)
        return np.array([[u0, v0], [u1, v1]], dtype=float)


def wavenumber(energy):
    """k = sqrt(2|E|) (hbar = m = 1)."""
    return math.sqrt(2.0 * abs(energy))


def free_solution(energy, b=1.0, c=0.0):
    """b*even + c*odd free solution: cos/sin for E > 0, cosh/sinh for E < 0, 1/x at E = 0."""
    energy = float(energy)
    if abs(energy) < ZERO_ENERGY_WINDOW:
        branch, k = ZERO, 0.0
    elif energy > 0:
        branch, k = POSITIVE, wavenumber(energy)
    else:
        branch, k = NEGATIVE, wavenumber(energy)

    def derivs(x, order):
        x = np.asarray(x, dtype=float)
        out = []
        if branch == ZERO:
            for m in range(order + 1):
                if m == 0:
                    out.append(b + c * x)
                elif m == 1:
                    out.append(c + 0.0 * x)
                else:
                    out.append(0.0 * x)
            return out
        kx = k * x
        if branch == POSITIVE:
            cs, sn = np.cos(kx), np.sin(kx)
            # d/dx cycles cos -> -sin -> -cos -> sin
            cycle = [(cs, sn), (-sn, cs), (-cs, -sn), (sn, -cs)]
        else:
            ch, sh = np.cosh(kx), np.sinh(kx)
            cycle = [(ch, sh), (sh, ch)]
        for m in range(order + 1):
            ev, od = cycle[m % len(cycle)]
            out.append(k ** m * (b * ev + c * od))
        return out

    if c == 0.0:
        parity = 1
    elif b == 0.0:
        parity = -1
    else:
        parity = None
    return CellSolution(derivs, energy, k, branch, (float(b), float(c)), l_eff=0, parity=parity,
                        provenance=("free",))


def free_solutions(energy):
    """(even, odd) pair of free-particle solutions at energy E."""
    return free_solution(energy, 1.0, 0.0), free_solution(energy, 0.0, 1.0)


def intertwine(l, alpha, phi):
    """Raise a free solution up the chain l_eff = 1, ..., l."""
    psi = phi
    for l_eff in range(1, l + 1):
        psi = apply_raising(l_eff, alpha, psi)
    return psi


def _state_norm(sol, points):
    return max(math.hypot(*map(float, sol.state(x))) for x in points)


def intertwined_basis(params, energy):
    """Two independent closed-form solutions of the l-well at energy E.

    At a factorization energy -(alpha^2/2) j^2 one raised member collapses;
    it is then replaced by a Numerov solution of the same parity and a
    DegenerateBasisRepaired warning is issued.
    """
    phi_even, phi_odd = free_solutions(energy)
    u = intertwine(params.l, params.alpha, phi_even)
    v = intertwine(params.l, params.alpha, phi_odd)
    probe = (0.0, params.a)
    nu, nv = _state_norm(u, probe), _state_norm(v, probe)
    w = float(u.state(0.0)[0] * v.state(0.0)[1] - u.state(0.0)[1] * v.state(0.0)[0])
    scale = max(nu, nv) ** 2
    if scale > 0 and abs(w) >= DEGENERACY_THRESHOLD * scale:
        return SolutionBasis(u, v, w)

    from .oracle import numeric_solution

    if nu <= nv:
        u = numeric_solution(params, energy, u.parity if u.parity is not None else 1)
    else:
        v = numeric_solution(params, energy, v.parity if v.parity is not None else -1)
    warnings.warn(
        f"closed-form basis degenerate at E={energy!r} (l={params.l}, alpha={params.alpha}); "
        "replaced one member with a numerically integrated solution",
        DegenerateBasisRepaired, stacklevel=2)
    u0, u1 = u.state(0.0)
    v0, v1 = v.state(0.0)
    return SolutionBasis(u, v, float(u0 * v1 - u1 * v0), degenerate=True, mixed_provenance=True)


def schrodinger_residual(params, sol, x_grid, potential=None):
    """max |-psi''/2 + V psi - E psi| / max(max|psi|, 1) over the grid.

    ``potential`` defaults to the single l-well of ``params``.
    """
    x = np.asarray(x_grid, dtype=float)
    d = sol.derivs(x, 2)
    v = eval_potential_single(params, x) if potential is None else potential(x)
    res = -0.5 * d[2] + (v - sol.energy) * d[0]
    return float(np.max(np.abs(res)) / max(float(np.max(np.abs(d[0]))), 1.0))
