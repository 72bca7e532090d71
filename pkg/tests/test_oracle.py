import math

import numpy as np
import pytest

from ptbands.dispersion import discriminant
from ptbands.errors import StepCountTooSmall
from ptbands.model import ModelParams
from ptbands.oracle import (
    RK4, IntegratorConfig, integrate_cell, numeric_discriminant, single_well_bound_states,
    transfer_matrix,
)
from ptbands.cell_solutions import intertwined_basis


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(steps=10)
    with pytest.raises(ValueError):
        IntegratorConfig(scheme="euler")
    assert IntegratorConfig(steps=1000).h == pytest.approx(2e-3)


@pytest.mark.parametrize("energy", [0.5, 3.0, 12.5])
def test_nearly_free_cell_rotates(energy):
    p = ModelParams(1, 1e-7, 1.0)
    k = math.sqrt(2 * energy)
    assert numeric_discriminant(p, energy) == pytest.approx(math.cos(2 * k), abs=1e-9)


@pytest.mark.parametrize("l,alpha,energy", [(1, 1.0, 2.0), (2, 2.3, -1.0), (3, 0.7, 0.3)])
def test_integration_follows_closed_form(l, alpha, energy):
    p = ModelParams(l, alpha, 1.0)
    sol = intertwined_basis(p, energy).u
    y0, dy0 = sol.state(-1.0)
    cfg = IntegratorConfig(steps=100_000, x0=-1.0, x1=1.0)
    y1, dy1 = integrate_cell(p, energy, (y0, dy0), cfg)
    scale = max(1.0, abs(y0), abs(dy0))
    y_ref, dy_ref = sol.state(1.0)
    assert abs(y1 - y_ref) <= 1e-9 * scale
    assert abs(dy1 - dy_ref) <= 1e-9 * scale


def test_step_halving_check():
    p = ModelParams(2, 2.3, 1.0)
    cfg = IntegratorConfig(steps=100_000, x0=-1.0, x1=1.0, check_tol=1e-8)
    integrate_cell(p, 3.0, (1.0, 0.0), cfg)
    with pytest.raises(StepCountTooSmall):
        integrate_cell(p, 3.0, (1.0, 0.0), IntegratorConfig(steps=120, x0=-1.0, x1=1.0, check_tol=1e-10))


@pytest.mark.parametrize("l,alpha,a,energy", [(1, 1.0, 1.0, 0.2), (2, 2.3, 0.5, 4.0), (1, 2.0, 2.0, -1.9)])
def test_transfer_matrix_unimodular(l, alpha, a, energy):
    m = transfer_matrix(ModelParams(l, alpha, a), energy)
    assert np.linalg.det(m) == pytest.approx(1.0, abs=1e-9 * max(1.0, np.abs(m).max() ** 2))


@pytest.mark.parametrize("alpha", [1e-7, 1.5])
def test_numerov_fourth_order(alpha):
    p = ModelParams(1, alpha, 1.0)
    energy = 2.2
    ref = math.cos(2 * math.sqrt(2 * energy)) if alpha < 1e-6 else discriminant(p, energy).D
    errs = [abs(numeric_discriminant(p, energy, IntegratorConfig(steps=n)) - ref) for n in (200, 400, 800)]
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert all(3.6 < o < 4.4 for o in orders), orders


@pytest.mark.parametrize("energy", [-1.2, 0.7, 5.0])
def test_rk4_agrees_with_numerov(energy):
    p = ModelParams(2, 1.0, 1.0)
    d_num = numeric_discriminant(p, energy)
    d_rk = numeric_discriminant(p, energy, IntegratorConfig(steps=20_000, scheme=RK4))
    assert d_rk == pytest.approx(d_num, abs=1e-9)


@pytest.mark.parametrize("l,alpha,expected", [
    (1, 1.0, [-0.5]),
    (2, 1.0, [-2.0, -0.5]),
    (3, 0.5, [-1.125, -0.5, -0.125]),
    (2, 2.0, [-8.0, -2.0]),
])
def test_shooting_finds_bound_levels(l, alpha, expected):
    found = single_well_bound_states(ModelParams(l, alpha))
    np.testing.assert_allclose(found, expected, atol=1e-7)


def test_shooting_rejects_short_domain():
    with pytest.raises(ValueError):
        single_well_bound_states(ModelParams(1, 1.0), half_width=5.0)
