"""Supersymmetric factorization of the Poschl-Teller family.

With hbar = m = 1 the ladder operators are

    A      =  (1/sqrt2) d/dx + W(x)
    A^dag  = -(1/sqrt2) d/dx + W(x)

and W(x) = l (alpha/sqrt2) tanh(alpha x), so that A^dag A = -1/2 d^2/dx^2 + V1
with V1 = W^2 - W'/sqrt2 and the partner A A^dag carries V2 = W^2 + W'/sqrt2.
"""
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .model import ModelParams, sech2
from .solution import NEGATIVE, CellSolution, _binom_row, tanh_derivatives

SQRT2 = sqrt(2.0)


@dataclass(frozen=True)
class SuperpotentialSpec:
    l_eff: int
    alpha: float

    def __post_init__(self):
        if int(self.l_eff) != self.l_eff or self.l_eff < 0:
            raise ValueError(f"l_eff must be a non-negative integer, got {self.l_eff!r}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")


@dataclass(frozen=True)
class HierarchyLevel:
    index: int
    l_at_level: int
    cumulative_shift: float


def superpotential(spec, x):
    return spec.l_eff * spec.alpha / SQRT2 * np.tanh(spec.alpha * np.asarray(x, dtype=float))


def superpotential_derivative(spec, x):
    return spec.l_eff * spec.alpha ** 2 / SQRT2 * sech2(spec.alpha * np.asarray(x, dtype=float))


def partner_potentials(spec):
    """Return evaluators (V1, V2) for the partner pair generated by ``spec``."""
    l, alpha = spec.l_eff, spec.alpha
    scale = 0.5 * alpha ** 2

    def v1(x):
        return scale * (l ** 2 - l * (l + 1) * sech2(alpha * np.asarray(x, dtype=float)))

    def v2(x):
        return scale * (l ** 2 - (l - 1) * l * sech2(alpha * np.asarray(x, dtype=float)))

    return v1, v2


def shape_invariance_shift(l, alpha):
    """g(l) = (alpha^2/2)(2l - 1), the constant separating V2(l) from V1(l-1)."""
    return 0.5 * alpha ** 2 * (2 * l - 1)


def shape_invariance_residual(l, alpha, x_samples):
    if l < 1:
        raise ValueError("l must be >= 1")
    x = np.asarray(x_samples, dtype=float)
    _, v2 = partner_potentials(SuperpotentialSpec(l, alpha))
    v1_lower, _ = partner_potentials(SuperpotentialSpec(l - 1, alpha))
    return float(np.max(np.abs(v2(x) - v1_lower(x) - shape_invariance_shift(l, alpha))))


def hierarchy(params):
    """Chain H_1, ..., H_{l+1} with parameters a_k = l - (k - 1).

    The last level has l_at_level == 0: its potential is constant and the
    chain stops there.
    """
    levels = []
    shift = 0.0
    for n in range(1, params.l + 2):
        levels.append(HierarchyLevel(n, params.l - n + 1, shift))
        if n <= params.l:
            shift += shape_invariance_shift(params.l - n + 1, params.alpha)
    return levels


def bound_spectrum(params):
    """Bound energies of the single well, ascending.

    Ground energies of the hierarchy measured from the bottom of V1 and
    shifted down by the constant (alpha^2/2) l^2 that separates V1 from V.
    """
    offset = 0.5 * params.alpha ** 2 * params.l ** 2
    return [lev.cumulative_shift - offset for lev in hierarchy(params)[:params.l]]


def _sech_power_solution(l_power, alpha, energy, sign):
    """sech^(sign*l)(alpha x) written as sech^p P(tanh); derivatives keep that form."""
    from numpy.polynomial import Polynomial

    p = sign * l_power  # exponent of sech

    def derivs(x, order):
        x = np.asarray(x, dtype=float)
        t = np.tanh(alpha * x)
        # log cosh without overflow
        logcosh = np.abs(alpha * x) + np.log1p(np.exp(-2 * np.abs(alpha * x))) - np.log(2.0)
        base = np.exp(-p * logcosh)
        poly = Polynomial([1.0])
        out = []
        one_minus_t2 = Polynomial([1.0, 0.0, -1.0])
        t_poly = Polynomial([0.0, 1.0])
        for m in range(order + 1):
            out.append(base * poly(t))
            poly = alpha * (-p * t_poly * poly + one_minus_t2 * poly.deriv())
        return out

    return CellSolution(derivs, energy, abs(alpha) * l_power, NEGATIVE, (1.0, 0.0),
                        l_eff=l_power, alpha=alpha, parity=1,
                        provenance=("zero-mode", "sech" if sign > 0 else "cosh"))


def ground_state_single_well(params):
    """Unnormalized ground state exp(-sqrt2 int_0^x W) = sech^l(alpha x) at E = -(alpha^2/2) l^2."""
    energy = -0.5 * params.alpha ** 2 * params.l ** 2
    return _sech_power_solution(params.l, params.alpha, energy, +1)


def partner_zero_mode(params):
    """exp(+sqrt2 int_0^x W) = cosh^l(alpha x); never normalizable."""
    energy = -0.5 * params.alpha ** 2 * params.l ** 2
    return _sech_power_solution(params.l, params.alpha, energy, -1)


def is_normalizable(sol, alpha, reach=40.0, tol=1e-8):
    """True when |psi| decays to below tol relative to psi(0) at |x| = reach/alpha."""
    x_far = reach / alpha
    edge = max(abs(float(sol.value(x_far))), abs(float(sol.value(-x_far))))
    return bool(np.isfinite(edge) and edge <= tol * max(abs(float(sol.value(0.0))), 1e-300))


def apply_raising(l_eff, alpha, phi):
    """psi = A^dag phi = (1/sqrt2)(-phi' + l_eff alpha tanh(alpha x) phi).

    Derivatives of the image follow from Leibniz's rule on the tanh factor,
    so psi carries exact derivatives of every order that phi does (minus one).
    """
    c = l_eff * alpha

    def derivs(x, order):
        d_phi = phi.derivs(x, order + 1)
        d_t = tanh_derivatives(alpha, x, order)
        out = []
        for m in range(order + 1):
            acc = -d_phi[m + 1]
            row = _binom_row(m)
            for i in range(m + 1):
                acc = acc + c * row[i] * d_t[i] * d_phi[m - i]
            out.append(acc / SQRT2)
        return out

    parity = -phi.parity if phi.parity is not None else None
    max_order = None if phi.max_order is None else phi.max_order - 1
    return CellSolution(derivs, phi.energy, phi.k, phi.branch, phi.coefficients,
                        l_eff=l_eff, alpha=alpha, parity=parity, max_order=max_order,
                        provenance=phi.provenance + (f"raise(l={l_eff})",))


def apply_lowering(l_eff, alpha, psi):
    """A psi = (1/sqrt2) psi' + W psi, returned as an array-valued evaluator."""
    spec = SuperpotentialSpec(l_eff, alpha)

    def evaluate(x):
        d = psi.derivs(x, 1)
        return d[1] / SQRT2 + superpotential(spec, x) * d[0]

    return evaluate
