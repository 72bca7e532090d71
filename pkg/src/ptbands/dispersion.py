"""Bloch discriminant from the exact cell basis, plus two closed-form reference formulas.

D(E) = trace(M)/2 with M the monodromy over one full period 2a; allowed
energies satisfy |D| <= 1 and then D = cos(2 a gamma).
"""
from dataclasses import dataclass, field
import math
from typing import Optional

import numpy as np

from .cell_solutions import intertwined_basis, wavenumber
from .errors import PoleProximity
from .model import ModelParams

POLE_THRESHOLD = 1e-7


@dataclass(frozen=True)
class Monodromy:
    m11: float
    m12: float
    m21: float
    m22: float
    energy: float

    @property
    def matrix(self):
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def half_trace(self):
        return 0.5 * (self.m11 + self.m22)


@dataclass(frozen=True)
class DiscriminantSample:
    E: float
    D: float
    f_paper: Optional[float] = None

    @property
    def in_band(self):
        return abs(self.D) <= 1.0


def _monodromy_from(phi_left, phi_right, wronskian, energy):
    # Phi(-a)^-1 = adj(Phi(-a)) / W; W is taken where it is well conditioned,
    # since at |x| = a it is a difference of exponentially large products
    (p, q), (r, s) = phi_left
    adj = np.array([[s, -q], [-r, p]])
    m = phi_right @ adj / wronskian
    return Monodromy(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]), float(energy))


def monodromy(params, energy, swap=False):
    """Transfer matrix of (psi, psi') from -a to a, M = Phi(a) Phi(-a)^-1."""
    basis = intertwined_basis(params, energy)
    u, v = (basis.v, basis.u) if swap else (basis.u, basis.v)
    w = -basis.wronskian_value if swap else basis.wronskian_value

    def phi(x):
        u0, u1 = u.state(x)
        v0, v1 = v.state(x)
        return np.array([[u0, v0], [u1, v1]], dtype=float)

    return _monodromy_from(phi(-params.a), phi(params.a), w, energy)


def discriminant(params, energy):
    return DiscriminantSample(float(energy), monodromy(params, energy).half_trace)


def bloch_phase(D, a):
    """gamma in [0, pi/(2a)] with cos(2 a gamma) = D; None outside the bands."""
    if abs(D) > 1.0:
        return None
    return math.acos(D) / (2.0 * a)


def paper_f_l1(k, alpha):
    """Closed-form cos(gamma) for one bound level, trigonometric branch.

    Arguments are dimensionless (k and alpha in units of the inverse lattice
    length).
    """
    k = float(k)
    alpha = float(alpha)
    if k <= 0:
        raise ValueError("k must be positive")
    ch = math.cosh(alpha)
    th2 = math.tanh(alpha / 2)
    sh2 = math.sinh(alpha / 2)
    chh = math.cosh(alpha / 2)
    csch3 = 1.0 / math.sinh(alpha) ** 3
    ck, sk = math.cos(k), math.sin(k)
    cross = 16.0 * sh2 ** 4 * chh ** 2 * csch3
    num = (k ** 3 * ch * ck
           + k ** 3 * ck
           - 2 * alpha * k ** 2 * ch * th2 * sk
           - alpha * k ** 2 * cross * sk
           - alpha ** 3 * cross * sk
           + 3 * alpha ** 2 * k * ck
           - alpha ** 2 * k * ch * ck)
    return num / (k * (ch + 1) * (alpha ** 2 + k ** 2))


def paper_f_l2(k, alpha, pole_threshold=POLE_THRESHOLD):
    """Closed-form band function for two bound levels, hyperbolic branch.

    The denominator k (k^2 - alpha^2)(k^2 - 4 alpha^2) vanishes at k = alpha
    and k = 2 alpha; PoleProximity is raised near those points.
    """
    k = float(k)
    a = float(alpha)
    if k <= 0:
        raise ValueError("k must be positive")
    for pole in (a, 2 * a):
        if abs(k - pole) < pole_threshold * max(1.0, pole):
            raise PoleProximity(f"k={k} within {pole_threshold:g} of pole {pole}")
    q = (2 * a ** 2 + k ** 2 + 3 * a * k) ** 2
    inner = (k - 2 * a) * (
        2 * (-30 * a ** 3 + 5 * k ** 3 + 14 * a * k ** 2 - 7 * a ** 2 * k) * math.cosh(a / 2 + k)
        + (k - a) ** 2 * ((12 * a + 5 * k) * math.cosh(3 * a / 2 + k) + k * math.cosh(5 * a / 2 + k)))
    middle = (k - 2 * a) * (
        2 * (-15 * a ** 2 + 5 * k ** 2 - 4 * a * k) * (2 * a + k) ** 2 * math.cosh(k - a / 2)
        + inner)
    total = (k * q * math.cosh(k - 5 * a / 2)
             + (5 * k - 12 * a) * q * math.cosh(k - 3 * a / 2)
             + middle)
    denom = 32 * (k ** 5 - 5 * a ** 2 * k ** 3 + 4 * a ** 4 * k)
    return total / math.cosh(a / 2) ** 5 / denom


def paper_f_l2_symmetric(k, alpha, offset=1e-5):
    """Average of paper_f_l2 at k -/+ offset; usable at the removable poles."""
    return 0.5 * (paper_f_l2(k - offset, alpha, 0.0) + paper_f_l2(k + offset, alpha, 0.0))


# Ways of reading the reference closed forms against D.  "period": k and alpha
# measured in units of the inverse period 2a and f compared to D directly.
# "half-period": units of 1/a with f = cos(gamma a), so D = 2 f^2 - 1.
PERIOD = "period"
HALF_PERIOD = "half-period"
CONVENTIONS = (PERIOD, HALF_PERIOD)


@dataclass
class CrosscheckRecord:
    E: float
    convention: str
    k_hat: float
    alpha_hat: float
    D: float
    f: Optional[float]
    predicted_D: Optional[float]
    identity_residual: Optional[float]
    band_agree: Optional[bool]
    note: str = ""


def _length_unit(params, convention):
    if convention == PERIOD:
        return 2.0 * params.a
    if convention == HALF_PERIOD:
        return params.a
    raise ValueError(f"unknown convention {convention!r}")


def paper_formula(params, energy, convention=PERIOD):
    """(k_hat, alpha_hat, f) for the reference closed form covering this energy.

    l=1 has a trigonometric formula (E > 0), l=2 a hyperbolic one (E < 0).
    f is None when no reference formula applies to (l, sign of E).
    """
    unit = _length_unit(params, convention)
    k_hat = wavenumber(energy) * unit
    alpha_hat = params.alpha * unit
    if k_hat == 0.0:
        return k_hat, alpha_hat, None
    if params.l == 1 and energy > 0:
        return k_hat, alpha_hat, paper_f_l1(k_hat, alpha_hat)
    if params.l == 2 and energy < 0:
        try:
            return k_hat, alpha_hat, paper_f_l2(k_hat, alpha_hat)
        except PoleProximity:
            return k_hat, alpha_hat, paper_f_l2_symmetric(k_hat, alpha_hat)
    return k_hat, alpha_hat, None


def crosscheck_paper_formula(params, energy, convention=HALF_PERIOD, D=None):
    """Compare D(E) with the reference f under one unit convention.

    Disagreement is returned as data; nothing is raised.
    """
    if D is None:
        D = discriminant(params, energy).D
    k_hat, alpha_hat, f = paper_formula(params, energy, convention)
    if f is None:
        return CrosscheckRecord(float(energy), convention, k_hat, alpha_hat, D, None, None, None, None,
                                note=f"no reference formula for l={params.l} at this energy sign")
    predicted = f if convention == PERIOD else 2.0 * f * f - 1.0
    return CrosscheckRecord(float(energy), convention, k_hat, alpha_hat, D, f, predicted, predicted - D,
                            (abs(predicted) <= 1.0) == (abs(D) <= 1.0))


def crosscheck_report(params, energies, edge_margin=1e-3):
    """Run the crosscheck on an energy grid for every convention.

    Points with ||D| - 1| < edge_margin are counted as edge points and left out
    of the agreement fraction; every disagreement is listed with both values.
    """
    report = {}
    Ds = [discriminant(params, e).D for e in energies]
    for convention in CONVENTIONS:
        records = [crosscheck_paper_formula(params, e, convention, D=d) for e, d in zip(energies, Ds)]
        usable = [r for r in records if r.f is not None]
        non_edge = [r for r in usable if abs(abs(r.D) - 1.0) >= edge_margin
                    and abs(abs(r.predicted_D) - 1.0) >= edge_margin]
        mismatches = [r for r in usable if not r.band_agree]
        agree = sum(r.band_agree for r in non_edge)
        report[convention] = {
            "points": len(usable),
            "non_edge_points": len(non_edge),
            "agreement_fraction": agree / len(non_edge) if non_edge else None,
            "max_abs_identity_residual": max((abs(r.identity_residual) for r in usable), default=None),
            "mismatches": [{"E": r.E, "k_hat": r.k_hat, "D": r.D, "f": r.f, "predicted_D": r.predicted_D}
                           for r in mismatches],
        }
    return report
