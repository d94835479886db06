import math

import numpy as np
import pytest

from collide_qfi.fisher import thermal_fi_nbar
from collide_qfi.zz_analytic import (appendix_f, appendix_g, zz_delta, zz_f1,
                                     zz_fn, zz_probs)


def test_zz_probs_values():
    p = zz_probs(1.0, 0.5)
    assert abs(p.p_g - 2.0 / 3.0) < 1e-15
    assert abs(p.p_e - 1.0 / 3.0) < 1e-15
    assert abs(p.big_gamma - 1.5) < 1e-15
    decay = 1.0 - math.exp(-1.5)
    assert abs(p.p_gg - (1.0 - decay / 3.0)) < 1e-15
    assert abs(p.p_eg - decay * 2.0 / 3.0) < 1e-15


def test_zz_probs_limits():
    # no bath window: no transitions
    p = zz_probs(1.0, 0.0)
    assert p.p_gg == 1.0 and p.p_eg == 0.0
    # long window: transitions relax to the Gibbs populations
    p = zz_probs(1.0, 100.0)
    assert abs(p.p_gg - p.p_g) < 1e-12
    assert abs(p.p_eg - p.p_g) < 1e-12


def test_zz_probs_validation():
    with pytest.raises(ValueError):
        zz_probs(-1.0, 0.5)


def test_zz_f1_angle_dependence():
    fth = thermal_fi_nbar(1.0)
    assert abs(zz_f1(1.0, 0.0)) < 1e-15
    assert abs(zz_f1(1.0, math.pi / 4) - 0.5 * fth) < 1e-15
    assert abs(zz_f1(1.0, math.pi / 2) - fth) < 1e-15


def test_zz_delta_matches_finite_difference():
    # rebuild Delta from numerically differentiated transition probabilities
    h = 1e-7
    for nbar in (0.3, 1.0, 5.0):
        for gt in (0.1, 0.8, 2.0):
            p = zz_probs(nbar, gt)
            pp = zz_probs(nbar + h, gt)
            pm = zz_probs(nbar - h, gt)
            dp_gg = (pp.p_gg - pm.p_gg) / (2 * h)
            dp_eg = (pp.p_eg - pm.p_eg) / (2 * h)
            expect = (p.p_g / (p.p_gg * (1 - p.p_gg)) * dp_gg ** 2
                      + p.p_e / (p.p_eg * (1 - p.p_eg)) * dp_eg ** 2)
            got = zz_delta(nbar, gt)
            assert abs(got - expect) < 1e-6 * expect


def test_zz_delta_validation():
    with pytest.raises(ValueError):
        zz_delta(0.0, 0.5)
    with pytest.raises(ValueError):
        zz_delta(1.0, 0.0)


def test_zz_fn_progression_is_arithmetic():
    f1 = zz_fn(1.0, 0.5, 1)
    d = zz_delta(1.0, 0.5)
    for n in range(2, 6):
        assert abs(zz_fn(1.0, 0.5, n) - (f1 + (n - 1) * d)) < 1e-15
    assert abs(f1 - zz_f1(1.0, math.pi / 2)) < 1e-15
    with pytest.raises(ValueError):
        zz_fn(1.0, 0.5, 0)


def test_appendix_f():
    assert abs(appendix_f(0.25, 0.5) - 1.0) < 1e-15
    with pytest.raises(ValueError):
        appendix_f(0.0, 0.1)
    with pytest.raises(ValueError):
        appendix_f(1.0, 0.1)


def test_appendix_g_identity():
    # g(x, y) = f(x) + (x / (y(1-y))) dy^2
    rng = np.random.default_rng(0)
    for _ in range(20):
        x, y = rng.uniform(0.05, 0.95, size=2)
        dx, dy = rng.normal(size=2)
        lhs = appendix_g(x, dx, y, dy)
        rhs = appendix_f(x, dx) + x / (y * (1 - y)) * dy * dy
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


def test_appendix_g_validation():
    with pytest.raises(ValueError):
        appendix_g(0.5, 0.1, 1.0, 0.1)
