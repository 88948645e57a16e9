from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from arrange.errors import DomainError, NoEpsilonFound
from arrange.symplectic import (
    Grid,
    StrandFunction,
    area_form_value,
    constant_strand,
    find_epsilon,
    format_float,
    steep_strand,
    strand_epsilon,
    strand_from_csv,
    strand_from_expression,
)

# measured once on POLY over Grid(21, 81) for eps in [1e-3, 1]; max ratio 0.77
FROZEN_C = 0.8
POLY = "t + 0.5*r*t**2 - 0.25*t**3"


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(1e-6, 10), st.floats(-5, 5))
def test_constant_strand_is_one(r, t, eps, c):
    v = area_form_value(constant_strand(c), r, t, eps)
    assert abs(float(v) - 1.0) <= 1e-12


@given(st.floats(-1, 1), st.floats(1e-3, 2))
def test_real_slice_value(t, eps):
    s = strand_from_expression(POLY)
    q_t = s.derivatives(0.0, t)["q_t"]
    expected = np.sqrt(1 + (eps * q_t) ** 2)
    assert float(area_form_value(s, 0.0, t, eps)) == pytest.approx(float(expected), rel=1e-12)


@given(st.floats(0, 1), st.floats(-1, 1), st.floats(1e-3, 1))
def test_r_symmetry(r, t, eps):
    s = steep_strand(4)
    q_t = s.derivatives(r, t)["q_t"]
    total = area_form_value(s, r, t, eps) + area_form_value(s, -r, t, eps)
    assert float(total) == pytest.approx(float(2 * np.sqrt(1 + (eps * q_t) ** 2)), rel=1e-9)


def test_q_is_even_in_r():
    s = strand_from_expression(POLY)
    assert float(s.q(-0.4, 0.3)) == float(s.q(0.4, 0.3))


@pytest.mark.parametrize("eps", [1.0, 0.5, 0.1, 0.01, 1e-3])
def test_value_tends_to_one(eps):
    s = strand_from_expression(POLY)
    R, T = Grid(21, 81).points(s)
    v = area_form_value(s, R, T, eps)
    assert np.abs(v - 1).max() <= FROZEN_C * eps


def test_polynomial_derivatives():
    s = strand_from_expression("r**2*t**3 + 2*r*t - t**2", h=1e-3)
    R, T = Grid(9, 17).points(s)
    S = np.abs(R)
    d = s.derivatives(R, T)
    exact = {
        "q_t": 3 * S ** 2 * T ** 2 + 2 * S - 2 * T,
        "q_r": 2 * S * T ** 3 + 2 * T,
        "q_tt": 6 * S ** 2 * T - 2,
        "q_tr": 6 * S * T ** 2 + 2,
    }
    for k, v in exact.items():
        assert np.abs(d[k] - v).max() <= 1e-8, k


def test_steep_strand_needs_stretch():
    s = steep_strand()
    R, T = Grid().points(s)
    assert area_form_value(s, R, T, 1.0).min() < 0
    assert area_form_value(s, R, T, 1e-2).min() > 0
    res = find_epsilon([s])
    assert 0 < res.epsilon < 1
    assert area_form_value(s, R, T, res.epsilon).min() > 1e-6


def test_min_rule():
    res = find_epsilon([constant_strand(), steep_strand()])
    per = [x.epsilon for x in res.strands]
    assert per[0] == 1.0 and res.epsilon == min(per) == per[1]
    assert find_epsilon([constant_strand(1), constant_strand(3)]).epsilon == 1.0


def test_two_strand_quarter():
    quarter = steep_strand(4)
    assert strand_epsilon(quarter).epsilon == 0.25
    res = find_epsilon([constant_strand(), quarter])
    assert [x.epsilon for x in res.strands] == [1.0, 0.25] and res.epsilon == 0.25


@given(st.floats(2, 10))
def test_refinement_is_monotone(k):
    s = steep_strand(k)
    g = Grid(5, 21)
    eps = [find_epsilon([s], g).epsilon]
    for _ in range(2):
        g = g.refine()
        eps.append(find_epsilon([s], g).epsilon)
    assert eps[0] >= eps[1] >= eps[2]


def test_no_epsilon_found():
    bad = StrandFunction(lambda s, t: 0 * s + 0 * t, name="zero")
    # a large margin cannot be met since the pairing tends to 1
    with pytest.raises(NoEpsilonFound):
        find_epsilon([bad], margin=2.0, floor=1e-3)


def test_domain_errors():
    s = constant_strand()
    with pytest.raises(DomainError):
        area_form_value(s, 1.5, 0.0, 1.0)
    with pytest.raises(DomainError):
        area_form_value(s, 0.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        StrandFunction(lambda s, t: t, (1.0, 0.0))
    with pytest.raises(DomainError):
        strand_from_expression("x*t")
    with pytest.raises(DomainError):
        strand_from_expression("t +* 2")
    with pytest.raises(DomainError):
        Grid(0, 3)


def test_csv_strand(tmp_path):
    rs = np.linspace(0, 1, 11)
    ts = np.linspace(-1, 1, 41)
    path = tmp_path / "strand.csv"
    with open(path, "w") as fh:
        fh.write("r,t,q\n")
        for r in rs:
            for t in ts:
                fh.write(f"{r},{t},{0.5 * r * t + t ** 2}\n")
    s = strand_from_csv(path)
    assert float(s.q(0.35, 0.2)) == pytest.approx(0.5 * 0.35 * 0.2 + 0.04, abs=1e-9)
    d = s.derivatives(0.5, 0.1)
    assert float(d["q_t"]) == pytest.approx(0.25 + 0.2, abs=1e-5)
    assert find_epsilon([s], Grid(11, 41)).epsilon > 0


def test_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("r,t,q\n0,0,1\n0,1,1\n1,0,1\n")
    with pytest.raises(DomainError):
        strand_from_csv(path)


def test_format_float():
    assert format_float(1 / 3) == "0.333333333333"
    assert format_float(0.125) == "0.125"
