import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ch3lab.kernels import (
    WeightSpec,
    kernel_product_exact,
    kernel_product_quadrature,
    weighted_kernel_scan,
    limit_sup,
    printed_bounds,
    weight_eval,
)

import oracles

alphas = st.floats(0.02, 0.98)
Ns = st.integers(1, 32)


def test_weight_spec_validation():
    for bad in ((0.0, 2), (1.0, 2), (1.5, 2), (0.5, 0), (0.5, 1.5)):
        with pytest.raises(ValueError):
            WeightSpec("J", *bad)
    with pytest.raises(ValueError):
        WeightSpec("K", 0.5, 2)


def test_weight_eval_examples():
    assert weight_eval(WeightSpec("J", 0.5, 2), -2.0) == pytest.approx(math.e, rel=1e-15)
    assert weight_eval(WeightSpec("J", 0.3, 7), 1.0) == 1.0
    assert weight_eval(WeightSpec("phi", 0.5, 2), 3.0) == pytest.approx(math.e, rel=1e-15)


@given(alphas, Ns, st.sampled_from(["J", "phi"]))
def test_weight_continuity_at_junctions(a, N, form):
    spec = WeightSpec(form, a, N)
    for j in spec.junctions:
        lo, hi = weight_eval(spec, [j - 1e-12, j + 1e-12])
        assert abs(lo - hi) < 1e-10 * hi


def test_limit_at_minus_infinity():
    spec = WeightSpec("J", 0.5, 2)
    assert kernel_product_exact(spec, -200.0) == pytest.approx(2.0, abs=1e-14)
    assert kernel_product_exact(spec, -200.0) <= printed_bounds(0.5, 2)["case1"]
    assert oracles.kernel_product_mp("J", 0.5, 2, -60.0) == pytest.approx(2.0, abs=1e-14)


@given(alphas, Ns, st.sampled_from(["J", "phi"]), st.booleans())
def test_kernel_continuity_at_junctions(a, N, form, der):
    spec = WeightSpec(form, a, N)
    for j in spec.junctions:
        side = np.array([np.nextafter(j, -np.inf), np.nextafter(j, np.inf)])
        lo, hi = kernel_product_exact(spec, side, der)
        assert abs(lo - hi) < 1e-12


def test_exact_matches_mpmath_at_random_points():
    rng = np.random.default_rng(7)
    for _ in range(100):
        form = ("J", "phi")[rng.integers(2)]
        a = float(rng.uniform(0.05, 0.95))
        N = int(rng.integers(1, 17))
        x = float(rng.uniform(-N - 8, N + 8))
        der = bool(rng.integers(2))
        spec = WeightSpec(form, a, N)
        ref = oracles.kernel_product_mp(form, a, N, x, der)
        assert abs(float(kernel_product_exact(spec, x, der)) - ref) < 1e-9
        assert abs(kernel_product_quadrature(spec, x, der) - ref) < 1e-9


@given(alphas, Ns, st.sampled_from(["J", "phi"]), st.floats(-60, 60))
def test_derivative_dominated(a, N, form, x):
    spec = WeightSpec(form, a, N)
    assert abs(kernel_product_exact(spec, x, True)) <= kernel_product_exact(spec, x) + 1e-15


@given(alphas, Ns, st.booleans())
def test_mirror_symmetry(a, N, der):
    xs = np.linspace(-N - 10, N + 10, 301)
    J = kernel_product_exact(WeightSpec("J", a, N), xs, der)
    P = kernel_product_exact(WeightSpec("phi", a, N), -xs, der)
    sign = -1.0 if der else 1.0
    assert np.max(np.abs(J - sign * P)) < 1e-12


@pytest.mark.parametrize("der", [False, True])
def test_mirror_symmetry_of_scans(der):
    Nl = [1, 2, 4, 8]
    J = weighted_kernel_scan(0.4, Nl, "J", der, points=2000)
    P = weighted_kernel_scan(0.4, Nl, "phi", der, points=2000)
    for a, b in zip(J, P):
        assert abs(a.sup_value - b.sup_value) < 1e-12
        # a smooth interior maximum fixes its location only to ~sqrt(eps)
        assert abs(a.arg_sup + b.arg_sup) < 1e-6
        assert a.per_case_sups == pytest.approx(b.per_case_sups[::-1], abs=1e-12)


def test_scan_invariants_and_closed_form_sup():
    res = weighted_kernel_scan(0.5, [1, 2, 4, 8, 16, 32])
    for r in res:
        assert r.sup_value == max(r.per_case_sups) and math.isfinite(r.sup_value)
        # for alpha = 1/2 the supremum sits at x = -N with value 3 - exp(-N/2)
        assert r.sup_value == pytest.approx(3.0 - math.exp(-0.5 * r.spec.N), abs=1e-12)
        assert r.arg_sup == pytest.approx(-r.spec.N, abs=1e-9)
        assert r.uniform_bound_used == 0.5 * limit_sup(0.5)


@pytest.mark.parametrize("a", [0.1, 0.3, 0.5, 0.7, 0.9])
@pytest.mark.parametrize("der", [False, True])
def test_sup_bounded_uniformly_in_n(a, der):
    res = weighted_kernel_scan(a, [1, 2, 4, 8, 16, 32], derivative=der, points=3000)
    sups = [r.sup_value for r in res]
    assert all(s <= limit_sup(a, der) + 1e-9 for s in sups)
    assert all(b >= a_ - 1e-12 for a_, b in zip(sups, sups[1:]))
    assert sups[-1] > 0.94 * limit_sup(a, der)


def test_sup_depends_on_n():
    # the supremum approaches its limit from below; it is not constant in N
    sups = [r.sup_value for r in weighted_kernel_scan(0.5, [2, 4])]
    assert sups[1] - sups[0] > 0.2


def test_left_region_has_no_interior_maximum():
    for a in (0.1, 0.5, 0.9):
        for N in (1, 4):
            spec = WeightSpec("J", a, N)
            r = weighted_kernel_scan(a, [N])[0]
            ends = max(2.0, float(kernel_product_exact(spec, -N)))
            assert r.per_case_sups[0] <= ends + 1e-12
            xs = np.linspace(-N - 40, -N, 4001)
            assert np.all(np.diff(kernel_product_exact(spec, xs)) >= -1e-13)


def test_constant_grows_with_alpha():
    c = {a: weighted_kernel_scan(a, [16])[0].sup_value for a in (0.1, 0.9)}
    assert c[0.9] > c[0.1]
    big = weighted_kernel_scan(0.99, [1, 4, 16])
    assert all(math.isfinite(r.sup_value) and r.sup_value <= limit_sup(0.99) + 1e-9 for r in big)


def test_printed_bounds_reported_not_asserted():
    r = weighted_kernel_scan(0.5, [2])[0]
    assert set(r.printed_hold) == {"case1", "case2", "case3"}
    assert weighted_kernel_scan(0.5, [2], derivative=True)[0].printed_hold == {}
