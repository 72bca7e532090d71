"""Independent numerical route: direct integration of the cell equation.

Nothing here uses the closed-form solutions; the only shared input is the
potential itself.  Numerov is the default integrator, classical RK4 is kept
as a dissimilar second scheme.
"""
from dataclasses import dataclass
import math

import numpy as np
from numba import njit
from scipy.optimize import brentq

from .errors import NoConvergence, StepCountTooSmall
from .model import ModelParams

NUMEROV = "numerov"
RK4 = "rk4"


@dataclass(frozen=True)
class IntegratorConfig:
    steps: int = 100_000
    scheme: str = NUMEROV
    x0: float = -1.0
    x1: float = 1.0
    check_tol: float = None  # step-halving tolerance; None disables the check

    def __post_init__(self):
        if self.steps < 100:
            raise ValueError("steps must be >= 100")
        if self.scheme not in (NUMEROV, RK4):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    @property
    def h(self):
        return (self.x1 - self.x0) / self.steps


@njit(cache=True)
def _sech2(z):
    z = abs(z)
    e = math.exp(-2.0 * z)
    return 4.0 * e / ((1.0 + e) * (1.0 + e))


@njit(cache=True)
def _f(depth, alpha, energy, x):
    # psi'' = f psi with f = 2 (V - E)
    return 2.0 * (-depth * _sech2(alpha * x) - energy)


@njit(cache=True)
def _numerov(depth, alpha, energy, x0, h, n, y0, dy0):
    ax = alpha * x0
    s = _sech2(ax)
    t = math.tanh(ax)
    f0 = _f(depth, alpha, energy, x0)
    # f' and f'' from V = -depth sech^2(alpha x)
    df0 = 4.0 * depth * alpha * s * t
    ddf0 = 4.0 * depth * alpha * alpha * s * (1.0 - 3.0 * t * t)
    d2 = f0 * y0
    d3 = df0 * y0 + f0 * dy0
    d4 = ddf0 * y0 + 2.0 * df0 * dy0 + f0 * d2
    y1 = y0 + h * dy0 + h * h / 2.0 * d2 + h ** 3 / 6.0 * d3 + h ** 4 / 24.0 * d4

    h2 = h * h
    c = h2 / 12.0
    f_cur = _f(depth, alpha, energy, x0 + h)
    w_cur = (1.0 - c * f_cur) * y1
    # summed form: carry the first difference of w, with compensated sums
    diff = w_cur - (1.0 - c * f0) * y0
    diff_err = 0.0
    w_err = 0.0
    y_cur = y1
    y_prev = y0
    f_prev = f0
    # one step past the end so the derivative can use a centred formula
    for j in range(1, n + 1):
        inc = h2 * f_cur * y_cur - diff_err
        tmp = diff + inc
        diff_err = (tmp - diff) - inc
        diff = tmp
        inc = diff - w_err
        tmp = w_cur + inc
        w_err = (tmp - w_cur) - inc
        w_cur = tmp
        f_next = _f(depth, alpha, energy, x0 + (j + 1) * h)
        y_next = w_cur / (1.0 - c * f_next)
        y_prev = y_cur
        y_cur = y_next
        f_prev = f_cur
        f_cur = f_next
        if j == n - 1:
            y_before = y_prev
            f_before = f_prev
    # y_prev = y_n, y_cur = y_{n+1}; y_before = y_{n-1}
    dyn = ((1.0 - h2 * f_cur / 6.0) * y_cur - (1.0 - h2 * f_before / 6.0) * y_before) / (2.0 * h)
    return y_prev, dyn


@njit(cache=True)
def _rk4(depth, alpha, energy, x0, h, n, y0, dy0):
    y = y0
    p = dy0
    for j in range(n):
        x = x0 + j * h
        fa = _f(depth, alpha, energy, x)
        fm = _f(depth, alpha, energy, x + 0.5 * h)
        fb = _f(depth, alpha, energy, x + h)
        k1y = p
        k1p = fa * y
        k2y = p + 0.5 * h * k1p
        k2p = fm * (y + 0.5 * h * k1y)
        k3y = p + 0.5 * h * k2p
        k3p = fm * (y + 0.5 * h * k2y)
        k4y = p + h * k3p
        k4p = fb * (y + h * k3y)
        y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        p = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    return y, p


def _run(depth, alpha, energy, config, y0, dy0, steps):
    kernel = _numerov if config.scheme == NUMEROV else _rk4
    h = (config.x1 - config.x0) / steps
    return kernel(float(depth), float(alpha), float(energy), float(config.x0), h, int(steps),
                  float(y0), float(dy0))


def integrate_cell(params, energy, initial, config):
    """Carry (psi, psi') from config.x0 to config.x1 through the single well."""
    y0, dy0 = initial
    out = _run(params.depth, params.alpha, energy, config, y0, dy0, config.steps)
    if config.check_tol is not None:
        coarse = _run(params.depth, params.alpha, energy, config, y0, dy0, config.steps // 2)
        scale = max(1.0, abs(out[0]), abs(out[1]))
        diff = max(abs(out[0] - coarse[0]), abs(out[1] - coarse[1]))
        if diff > config.check_tol * scale:
            raise StepCountTooSmall(
                f"step halving changed the result by {diff:.3e} (scaled tol {config.check_tol * scale:.3e})")
    return float(out[0]), float(out[1])


def transfer_matrix(params, energy, steps=100_000, scheme=NUMEROV):
    """Numerical monodromy over one period [-a, a]."""
    config = IntegratorConfig(steps=steps, scheme=scheme, x0=-params.a, x1=params.a)
    u = integrate_cell(params, energy, (1.0, 0.0), config)
    v = integrate_cell(params, energy, (0.0, 1.0), config)
    return np.array([[u[0], v[0]], [u[1], v[1]]])


def numeric_discriminant(params, energy, config=None):
    """Half-trace of the numerically integrated transfer matrix."""
    steps = config.steps if config is not None else 100_000
    scheme = config.scheme if config is not None else NUMEROV
    m = transfer_matrix(params, energy, steps, scheme)
    return 0.5 * float(m[0, 0] + m[1, 1])


def numeric_solution(params, energy, parity, steps_per_unit=50_000):
    """Even (parity=+1) or odd (parity=-1) solution integrated outward from x = 0.

    Returned as a CellSolution carrying value and first derivative only.
    """
    from .solution import NUMERIC, CellSolution

    initial = (1.0, 0.0) if parity > 0 else (0.0, 1.0)
    cache = {}

    def state_at(x):
        x = float(x)
        if x not in cache:
            if x == 0.0:
                cache[x] = initial
            else:
                steps = max(200, int(math.ceil(abs(x) * steps_per_unit)))
                cfg = IntegratorConfig(steps=steps, x0=0.0, x1=x)
                cache[x] = integrate_cell(params, energy, initial, cfg)
        return cache[x]

    def derivs(x, order):
        if order > 1:
            raise ValueError("numeric solutions carry only psi and psi'")
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        states = np.array([state_at(xi) for xi in xs])
        vals = [states[:, 0], states[:, 1]][:order + 1]
        if np.ndim(x) == 0:
            vals = [float(v[0]) for v in vals]
        return vals

    k = math.sqrt(2.0 * abs(energy))
    return CellSolution(derivs, float(energy), k, NUMERIC, initial, l_eff=params.l,
                        alpha=params.alpha, parity=parity, max_order=1,
                        provenance=("numerov",))


def _shoot(params, energy, parity, half_width, steps):
    # decaying tail at x = half_width, integrated inward to the origin
    kappa = math.sqrt(-2.0 * energy)
    cfg = IntegratorConfig(steps=steps, x0=half_width, x1=0.0)
    y, dy = integrate_cell(params, energy, (1.0, -kappa), cfg)
    norm = math.hypot(y, dy)
    return (dy if parity > 0 else y) / norm


def single_well_bound_states(params, half_width=None, tol=1e-9, steps=40_000, n_grid=400):
    """Bound energies of one isolated well by shooting from the tail to x = 0.

    Even states satisfy psi'(0) = 0, odd states psi(0) = 0.
    """
    if half_width is None:
        half_width = 25.0 / params.alpha
    if half_width < 10.0 / params.alpha:
        raise ValueError("half_width must be at least 10/alpha")
    e_bottom = -params.depth
    e_top = -1e-6 * params.alpha ** 2
    grid = np.linspace(e_bottom * (1 - 1e-9), e_top, n_grid)
    found = []
    for parity in (+1, -1):
        vals = [_shoot(params, e, parity, half_width, steps) for e in grid]
        for e_a, e_b, g_a, g_b in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if g_a == 0.0:
                found.append(e_a)
            elif g_a * g_b < 0:
                try:
                    root = brentq(lambda e: _shoot(params, e, parity, half_width, steps),
                                  e_a, e_b, xtol=tol, rtol=4 * np.finfo(float).eps)
                except (RuntimeError, ValueError) as exc:
                    raise NoConvergence(f"shooting root in [{e_a}, {e_b}] failed: {exc}") from exc
                found.append(root)
    return sorted(found)
