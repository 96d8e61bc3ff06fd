import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fisherquartic.errors import DomainError, NumericPrecisionError
from fisherquartic.fisher_core import (
    MomentOrderSet,
    MomentVector,
    MultiplierVector,
    ReferenceWeights,
    ScenarioPoint,
    alpha_closed_form,
    alpha_gradient,
    conjugacy_residuals,
    conjugate_moments,
    conjugate_multipliers,
    fim_closed_form,
    fim_from_multipliers,
    fim_gradient,
    legendre_residual,
    pde_residual_alpha,
    pde_residual_i,
    reciprocity_residuals,
    self_consistent_point,
    virial_residuals,
)

weight = st.floats(0.05, 3.0)
multiplier = st.floats(1e-2, 1e3).map(lambda v: -v)
moment = st.floats(1e-2, 10.0)
orders = st.lists(st.integers(1, 8), min_size=1, max_size=4, unique=True).map(sorted)


@st.composite
def configurations(draw, even_only=False):
    ks = draw(orders)
    if even_only:
        ks = sorted({2 * k for k in ks})
    w = ReferenceWeights({k: draw(weight) for k in ks})
    lam = MultiplierVector({k: draw(multiplier) for k in ks})
    return w, lam


def test_order_set_validation():
    assert MomentOrderSet((2, 4)).orders == (2, 4)
    for bad in [(), (0, 2), (4, 2), (2, 2), (1.5,)]:
        with pytest.raises(DomainError):
            MomentOrderSet(bad)


def test_vectors_are_sorted_and_validated():
    assert MultiplierVector({4: -1, 2: -3}).orders == (2, 4)
    with pytest.raises(DomainError):
        MomentVector({2: -0.5})
    with pytest.raises(DomainError):
        ReferenceWeights({2: 0.0})
    assert MomentVector({1: -0.5, 2: 1.0})[1] == -0.5


def test_derived_constants():
    w = ReferenceWeights({2: 1.0, 4: 1.0})
    assert w.c_values == {2: 1.0, 4: 2.0}
    assert w.d_values == {2: 2.0, 4: 3.0}
    w = ReferenceWeights({3: 0.3, 6: 1.7})
    for k, f in w.items():
        cbar = w.c_values[k] / (k / 2)
        dbar = w.d_values[k] / ((k + 2) / 2)
        assert cbar**k == pytest.approx(f * f, rel=1e-13)
        assert dbar ** (k + 2) == pytest.approx(f * f, rel=1e-13)


@pytest.mark.parametrize(
    "x2, expected",
    [(1.0, 1.0), (2.0, 0.5)],
)
def test_fim_single_order(x2, expected):
    assert fim_closed_form(ReferenceWeights({2: 1.0}), MomentVector({2: x2})) == pytest.approx(expected, rel=1e-15)


def test_fim_two_orders_matches_multiplier_form():
    w = ReferenceWeights({2: 0.7271, 4: 0.074474})
    lam = MultiplierVector({2: -16.0, 4: -32.0})
    moments = conjugate_moments(w, lam)
    # mpmath reference: sqrt(16 F2) + 2 (32 F4)^(1/3)
    assert fim_closed_form(w, moments) == pytest.approx(6.0822635230643378, abs=1e-12)
    assert fim_closed_form(w, moments) == pytest.approx(fim_from_multipliers(w, lam), abs=1e-10)


def test_fim_zero_moment_is_a_domain_error():
    with pytest.raises(DomainError):
        fim_closed_form(ReferenceWeights({1: 1.0, 2: 1.0}), MomentVector({1: 0.0, 2: 1.0}))


def test_fim_uses_absolute_value_for_odd_moments():
    w = ReferenceWeights({1: 0.5})
    assert fim_closed_form(w, MomentVector({1: -0.25})) == fim_closed_form(w, MomentVector({1: 0.25}))


@pytest.mark.parametrize(
    "k, lam, expected",
    [(2, -16.0, 8.0), (4, -8.0, 6.0)],
)
def test_alpha_single_order(k, lam, expected):
    assert alpha_closed_form(ReferenceWeights({k: 1.0}), MultiplierVector({k: lam})) == pytest.approx(expected, rel=1e-14)


def test_alpha_at_rounded_table_weights():
    w = ReferenceWeights({2: 0.7271, 4: 0.074474})
    alpha = alpha_closed_form(w, MultiplierVector({2: -16.0, 4: -32.0}))
    # weights are rounded to 4 digits; exact value from mpmath
    assert alpha == pytest.approx(10.82879846, abs=1e-8)
    assert alpha / 8 == pytest.approx(1.353533, abs=1e-4)


def test_conjugate_multipliers_examples():
    assert conjugate_multipliers(ReferenceWeights({2: 1.0}), MomentVector({2: 1.0}))[2] == pytest.approx(-1.0)
    assert conjugate_multipliers(ReferenceWeights({4: 1.0}), MomentVector({4: 1.0}))[4] == pytest.approx(-1.0)
    with pytest.raises(DomainError):
        conjugate_multipliers(ReferenceWeights({1: 1.0}), MomentVector({1: -1.0}))


def test_conjugate_moments_examples():
    w = ReferenceWeights({2: 1.0})
    assert conjugate_moments(w, MultiplierVector({2: -1.0}))[2] == pytest.approx(1.0)
    assert conjugate_moments(w, MultiplierVector({2: -16.0}))[2] == pytest.approx(0.25, rel=1e-15)
    with pytest.raises(DomainError):
        conjugate_moments(w, MultiplierVector({2: 0.0}))


def test_mismatched_orders_rejected():
    with pytest.raises(DomainError):
        alpha_closed_form(ReferenceWeights({2: 1.0}), MultiplierVector({4: -1.0}))
    with pytest.raises(DomainError):
        ScenarioPoint(MultiplierVector({2: -1.0}), MomentVector({4: 1.0}), 1.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(configurations())
def test_conjugacy_identity(cfg):
    w, lam = cfg
    moments = conjugate_moments(w, lam)
    for k, f in w.items():
        direct = abs(lam[k]) ** k * abs(moments[k]) ** (2 + k)
        assert direct == pytest.approx(f * f, rel=1e-10)
    assert max(map(abs, conjugacy_residuals(w, lam, moments).values())) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(configurations())
def test_round_trip(cfg):
    w, lam = cfg
    back = conjugate_multipliers(w, conjugate_moments(w, lam))
    for k in lam:
        assert back[k] == pytest.approx(lam[k], rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(orders.flatmap(lambda ks: st.tuples(
    st.fixed_dictionaries({k: weight for k in ks}),
    st.fixed_dictionaries({k: moment for k in ks}),
)))
def test_round_trip_from_moments(data):
    w, m = ReferenceWeights(data[0]), MomentVector(data[1])
    again = conjugate_moments(w, conjugate_multipliers(w, m))
    for k in m:
        assert again[k] == pytest.approx(m[k], rel=1e-10)


def test_legendre_residual_examples():
    w = ReferenceWeights({2: 1.0})
    point = self_consistent_point(w, MultiplierVector({2: -16.0}))
    assert abs(legendre_residual(point)) <= 1e-12
    shifted = ScenarioPoint(
        point.multipliers, MomentVector({2: point.moments[2] + 0.1}), point.fisher_info, point.alpha
    )
    assert legendre_residual(shifted) == pytest.approx(1.6, abs=1e-12)


def test_virial_residuals_on_harmonic_point():
    point = self_consistent_point(ReferenceWeights({2: 1.0}), MultiplierVector({2: -16.0}))
    r_i, r_a = virial_residuals(point)
    assert abs(r_i) <= 1e-12 and abs(r_a) <= 1e-12
    assert point.fisher_info == pytest.approx(4.0) and point.alpha == pytest.approx(8.0)


@settings(max_examples=100, deadline=None)
@given(configurations())
def test_legendre_and_virial_hold_at_self_consistent_points(cfg):
    point = self_consistent_point(*cfg)
    scale = max(point.fisher_info, point.alpha)
    assert abs(legendre_residual(point)) <= 1e-10 * scale
    assert max(map(abs, virial_residuals(point))) <= 1e-10 * scale


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.5, 5.0))
def test_pde_residual_i_single_order(f2, x2):
    w = ReferenceWeights({2: f2})
    assert abs(pde_residual_i(w, MomentVector({2: x2}))) <= 1e-6


@settings(max_examples=100, deadline=None)
@given(configurations())
def test_pde_residuals_vanish_for_closed_forms(cfg):
    w, lam = cfg
    moments = conjugate_moments(w, lam)
    assert abs(pde_residual_alpha(w, lam)) <= 1e-6 * alpha_closed_form(w, lam)
    assert abs(pde_residual_i(w, moments)) <= 1e-6 * fim_closed_form(w, moments)


def test_pde_residual_detects_non_solution():
    w = ReferenceWeights({2: 1.0, 4: 1.0})
    m = MomentVector({2: 1.0, 4: 2.0})
    assert pde_residual_i(w, m, fisher=lambda _w, _m: 3.5) == pytest.approx(3.5)
    lam = MultiplierVector({2: -1.0, 4: -2.0})
    assert pde_residual_alpha(w, lam, alpha=lambda _w, _l: -2.0) == pytest.approx(-2.0)
    # a power law with the wrong exponent fails too
    wrong = lambda _w, mm: sum(abs(v) ** -1.0 for v in mm.values.values())
    assert abs(pde_residual_i(w, m, fisher=wrong)) > 1e-2


def test_pde_residual_step_underflow():
    w = ReferenceWeights({1: 1.0})
    with pytest.raises(NumericPrecisionError):
        pde_residual_i(w, MomentVector({1: 1e-320}))
    with pytest.raises(NumericPrecisionError):
        pde_residual_i(w, MomentVector({1: 1.0}), rel_step=1.5)


@settings(max_examples=100, deadline=None)
@given(configurations())
def test_reciprocity_by_finite_differences(cfg):
    res = reciprocity_residuals(*cfg)
    assert res["alpha_lambda"] <= 1e-5
    assert res["fisher_moment"] <= 1e-5
    assert res["euler"] <= 1e-4


def test_gradients_match_conjugates_directly():
    w = ReferenceWeights({2: 0.6, 4: 0.16})
    lam = MultiplierVector({2: -3.0, 4: -7.0})
    m = conjugate_moments(w, lam)
    da = alpha_gradient(w, lam)
    di = fim_gradient(w, m)
    for k in (2, 4):
        assert da[k] == pytest.approx(-m[k], rel=1e-8)
        assert di[k] == pytest.approx(lam[k], rel=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.05, 3.0), st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_monotonicity_and_curvature(f2, f4, x, a):
    w = ReferenceWeights({2: f2, 4: f4})
    h = 1e-3
    for k in (2, 4):
        base = {2: x, 4: x * x * 1.5}
        grid = [{**base, k: base[k] * (1 + d)} for d in (-h, 0.0, h)]
        vals = [fim_closed_form(w, MomentVector(g)) for g in grid]
        assert vals[0] > vals[1] > vals[2]
        assert vals[0] - 2 * vals[1] + vals[2] >= 0

        lbase = {2: -a, 4: -2 * a}
        lgrid = [{**lbase, k: lbase[k] * (1 + d)} for d in (-h, 0.0, h)]
        avals = [alpha_closed_form(w, MultiplierVector(g)) for g in lgrid]
        # lgrid runs from less negative to more negative: alpha increases
        assert avals[0] < avals[1] < avals[2]
        assert avals[0] - 2 * avals[1] + avals[2] <= 1e-12 * avals[1]


def test_pure_functions_are_thread_safe():
    from concurrent.futures import ThreadPoolExecutor

    w = ReferenceWeights({2: 0.5, 4: 0.25})
    lams = [MultiplierVector({2: -float(i + 1), 4: -2.0 * (i + 1)}) for i in range(64)]
    serial = [alpha_closed_form(w, l) for l in lams]
    with ThreadPoolExecutor(8) as pool:
        assert list(pool.map(lambda l: alpha_closed_form(w, l), lams)) == serial
