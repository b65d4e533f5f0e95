import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ch3lab.diagnostics import (
    DiagnosticsRecord,
    blowup_threshold,
    decay_fit,
    holder_check,
    lifespan_bound,
    potential_weighted_norm,
    q_functional,
    quartic_functional,
    record,
    resolved_until,
    riccati_monitor,
    weighted_sup,
)
from ch3lab.dynamics import StepControl, run
from ch3lab.grid import make_grid
from ch3lab.state import PotentialTriple, StateTriple, energy
from ch3lab.waves import gaussian_triple, random_smooth_state, steep_front_data

import oracles


def test_record_invariants():
    with pytest.raises(ValueError):
        DiagnosticsRecord(0.0, -1.0, 0.0, (0, 0, 0), 0.0)
    with pytest.raises(ValueError):
        DiagnosticsRecord(0.0, 1.0, 0.0, (0, 0, 0), -1.0)
    g = make_grid(256, 20.0)
    r = record(gaussian_triple(g))
    assert r.E > 0 and r.sup_sq_sum > 0 and len(r.min_slopes) == 3


def test_q_functional_examples():
    g = make_grid(64, math.pi)
    assert q_functional(StateTriple.zeros(g)) == 0.0
    assert abs(q_functional(StateTriple.from_array(g, [np.sin(g.x), 0 * g.x, 0 * g.x]))) < 1e-14
    g = make_grid(512, 20.0)
    s = np.tanh(g.x) * np.exp(-(g.x / 4) ** 2)
    one = StateTriple.from_array(g, [s, 0 * s, 0 * s])
    three = StateTriple.from_array(g, [s, s, s])
    assert q_functional(three) == pytest.approx(27 * q_functional(one), rel=1e-12)


def test_blowup_threshold_examples():
    assert blowup_threshold(2.0) == pytest.approx(-36.0, abs=1e-13)
    assert blowup_threshold(0.5) == pytest.approx(-4.5, abs=1e-14)
    assert abs(blowup_threshold(1e-12)) < 1e-16
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            blowup_threshold(bad)


def test_lifespan_examples():
    assert lifespan_bound(-40.0, 2.0) == pytest.approx(math.log(19) / 3, rel=1e-14)
    assert lifespan_bound(-40.0, 2.0) == pytest.approx(0.9815, abs=1e-4)
    assert lifespan_bound(-36.0, 2.0) is None
    assert lifespan_bound(-10.0, 2.0) is None
    assert lifespan_bound(-1e12, 2.0) < 1e-9
    with pytest.raises(ValueError):
        lifespan_bound(-40.0, 0.0)


@given(st.floats(0.05, 50.0), st.floats(1.001, 1e4))
def test_lifespan_vs_riccati_ode(E0, factor):
    # the closed form is exactly twice the blow-up time of the comparison ODE
    Q0 = factor * blowup_threshold(E0)
    T = lifespan_bound(Q0, E0)
    assert T == pytest.approx(2.0 * oracles.riccati_blowup_time(Q0, E0), rel=1e-6)


@given(st.floats(0.1, 10.0))
def test_lifespan_monotone_in_q0(E0):
    thr = blowup_threshold(E0)
    qs = thr * np.geomspace(1e4, 1.0001, 200)
    T = [lifespan_bound(q, E0) for q in qs]
    assert all(b > a for a, b in zip(T, T[1:]))


@given(st.integers(0, 2 ** 32 - 1), st.floats(0.05, 20.0))
def test_threshold_verdict_is_scale_invariant(seed, s):
    g = make_grid(256, 20.0)
    base = random_smooth_state(g, np.random.default_rng(seed))
    scaled = StateTriple.from_array(g, s * base.array())
    E0, E1 = energy(base), energy(scaled)
    Q0, Q1 = q_functional(base), q_functional(scaled)
    assert Q1 == pytest.approx(s ** 3 * Q0, rel=1e-9, abs=1e-300)
    assert blowup_threshold(E1) == pytest.approx(s ** 3 * blowup_threshold(E0), rel=1e-9)
    assert (Q0 < blowup_threshold(E0)) == (Q1 < blowup_threshold(E1))


def test_steep_front_verdict_is_scale_invariant():
    g = make_grid(4096, 8.0)
    for delta in (0.5, 0.04):
        s, info = steep_front_data(g, 1.0, delta, 1.0)
        for amp in (0.1, 7.0):
            _, other = steep_front_data(g, amp, delta, 1.0)
            assert other.hypothesis == info.hypothesis
            assert other.margin == pytest.approx(info.margin, rel=1e-10)


@given(st.integers(0, 2 ** 32 - 1))
def test_holder_on_random_states(seed):
    g = make_grid(256, 20.0)
    s = random_smooth_state(g, np.random.default_rng(seed))
    E0 = energy(s)
    assert holder_check(q_functional(s), quartic_functional(s), E0)


def test_holder_check_detects_violation():
    assert not holder_check(10.0, 1.0, 1.0)
    assert holder_check(0.0, 0.0, 1.0)


def test_riccati_zero_and_insufficient():
    t = np.linspace(0, 1, 11)
    rep = riccati_monitor(t, np.zeros(11), 1.0, quartic=np.zeros(11))
    assert rep.ok and rep.checked == 9
    assert riccati_monitor(t[:2], np.zeros(2), 1.0).inconclusive
    assert riccati_monitor(t, np.zeros(11), 0.0).inconclusive
    assert not riccati_monitor(t[:2], np.zeros(2), 1.0).ok


def test_riccati_smooth_run_and_corruption():
    g = make_grid(512, 40.0)
    traj, rep = run(gaussian_triple(g), StepControl(dt=0.01, dt_min=1e-5), 1.0, 0.05)
    h = traj.history
    good = riccati_monitor(h["t"], h["Q"], traj.E0, quartic=h["quartic"])
    assert good.ok and good.checked == h["t"].size - 2
    # a trajectory whose Q falls faster than the bound allows is flagged
    t = np.linspace(0, 1, 21)
    E0 = 1.0
    fake = 100.0 * t ** 2
    bad = riccati_monitor(t, fake, E0)
    assert bad.violations and {v.form for v in bad.violations} == {"riccati"}
    neg = riccati_monitor(h["t"], -h["Q"] + 1e3 * h["t"], traj.E0, quartic=h["quartic"])
    assert neg.violations


def test_riccati_upto_cuts_history():
    t = np.linspace(0, 1, 21)
    q = np.where(t > 0.5, 1e3 * (t - 0.5) ** 2, 0.0)
    assert not riccati_monitor(t, q, 1.0).ok
    assert riccati_monitor(t, q, 1.0, upto=0.5).ok


def test_resolved_until():
    h = {"t": np.array([0.0, 0.1, 0.2, 0.3]), "tail": np.array([1e-9, 1e-8, 1e-3, 1e-2])}
    assert resolved_until(h) == 0.1
    assert resolved_until(h, tail=0.1) == 0.3
    h["tail"][0] = 1.0
    assert resolved_until(h) == 0.0


@pytest.mark.parametrize("rate", [0.5, 1.0])
def test_decay_fit_exact_exponential(rate):
    g = make_grid(4096, 60.0)
    f = g.field(np.exp(-rate * np.abs(g.x)))
    for side in ("left", "right"):
        fit = decay_fit(f, side)
        assert fit.reliable and abs(fit.alpha_hat - rate) < 1e-6 and fit.r_squared > 0.999999
        lo, hi = fit.window
        assert -0.9 * g.L <= lo and hi <= 0.9 * g.L
        assert min(abs(lo), abs(hi)) >= 5.0


@given(st.floats(0.3, 2.0), st.floats(2.0, 10.0), st.floats(1e-9, 1e-4))
def test_decay_fit_exact_on_any_admissible_window(rate, margin, stop):
    g = make_grid(2048, 60.0)
    f = g.field(np.exp(-rate * np.abs(g.x)))
    fit = decay_fit(f, "right", margin=margin, stop_level=stop)
    if fit.points >= 20:
        assert abs(fit.alpha_hat - rate) < 1e-6
        assert 0.0 <= fit.r_squared <= 1.0


def test_decay_fit_gaussian_flagged():
    g = make_grid(2048, 40.0)
    fit = decay_fit(g.field(np.exp(-(g.x / 4) ** 2)), "right")
    assert not fit.reliable and "non-exponential" in fit.note


def test_decay_fit_edge_cases():
    g = make_grid(256, 20.0)
    assert decay_fit(g.field(np.zeros(256)), "left").note == "zero field"
    short = decay_fit(g.field(np.exp(-5 * np.abs(g.x))), "left")
    assert not short.reliable and short.note.startswith("inconclusive")
    with pytest.raises(ValueError):
        decay_fit(g.field(np.ones(256)), "up")
    g = make_grid(4096, 60.0)
    osc = g.field(np.exp(-0.5 * np.abs(g.x)) * np.cos(3 * g.x))
    fit = decay_fit(osc, "right")
    assert "local maxima" in fit.note and abs(fit.alpha_hat - 0.5) < 0.02


def test_weighted_sup_examples():
    g = make_grid(4096, 40.0)
    f = g.field(np.exp(-np.abs(g.x)))
    for a in (0.1, 0.5, 0.9):
        for N in (1, 4, 16):
            assert weighted_sup(f, "J", a, N) == pytest.approx(1.0, abs=1e-15)
    assert weighted_sup(g.field(np.zeros(4096)), "J", 0.5, 4) == 0.0
    assert weighted_sup(g.field(np.ones(4096)), "J", 0.5, 4) == pytest.approx(math.exp(2.0), rel=1e-14)
    assert weighted_sup(g.field(np.ones(4096)), "phi", 0.5, 4) == pytest.approx(math.exp(2.0), rel=1e-14)
    for a in (0.0, 1.0, -0.2):
        with pytest.raises(ValueError):
            weighted_sup(f, "J", a, 4)
    with pytest.raises(ValueError):
        weighted_sup(f, "J", 0.5, 37)


def test_potential_weighted_norm_examples():
    g = make_grid(4096, 40.0)
    z = g.field(np.zeros(4096))
    assert potential_weighted_norm(PotentialTriple(z, z, z), 0.5, math.inf).value == 0.0
    m = g.field(np.exp(-2 * np.abs(g.x)))
    r = potential_weighted_norm(PotentialTriple(m, z, z), 0.5, math.inf)
    # at L = 40 the weighted sup is still 1e-8 at 0.9 L, so the flag is raised
    assert r.value == pytest.approx(1.0, abs=1e-12) and r.truncated
    g80 = make_grid(8192, 80.0)
    z80 = g80.field(np.zeros(8192))
    r = potential_weighted_norm(PotentialTriple(g80.field(np.exp(-2 * np.abs(g80.x))), z80, z80), 0.5, math.inf)
    assert r.value == pytest.approx(1.0, abs=1e-12) and not r.truncated
    # e^{-0.5|x|} in L^2: (2/(2*0.5))^{1/2} = sqrt(2)
    r = potential_weighted_norm(PotentialTriple(m, z, z), 0.5, 1)
    assert r.value == pytest.approx(math.sqrt(2.0), rel=1e-3)
    assert potential_weighted_norm(PotentialTriple(m, z, z), 1.5, math.inf).truncated
    with pytest.raises(ValueError):
        potential_weighted_norm(PotentialTriple(m, z, z), -0.1, 1)
    with pytest.raises(ValueError):
        potential_weighted_norm(PotentialTriple(m, z, z), 0.5, 1.5)
