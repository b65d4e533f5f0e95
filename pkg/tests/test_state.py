import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ch3lab.grid import helmholtz_inverse, make_grid
from ch3lab.state import (
    StateTriple,
    energy,
    h1_norm_sq,
    potentials,
    read_state,
    sup_norm_bound_check,
    write_state,
    write_state_csv,
)
from ch3lab.waves import PeakonAnsatz, gaussian_triple, mollify_state, peakon_field

import oracles


def _random_state(seed, n=256, L=10.0):
    rng = np.random.default_rng(seed)
    g = make_grid(n, L)
    return StateTriple.from_array(g, [oracles.band_limited(n, L, rng, modes=20) for _ in range(3)])


def _peakon(n, eps):
    g = make_grid(n, 40.0)
    st_ = peakon_field(PeakonAnsatz((0.0,), (1.0,), (0.0,), (0.0,)), g)
    return mollify_state(st_, eps)


def test_state_rejects_mixed_grids_and_negative_time():
    a, b = make_grid(16, 1.0), make_grid(32, 1.0)
    with pytest.raises(ValueError):
        StateTriple(a.field(np.zeros(16)), b.field(np.zeros(32)), a.field(np.zeros(16)))
    with pytest.raises(ValueError):
        StateTriple.zeros(a, t=-1.0)


def test_potentials_examples():
    g = make_grid(64, math.pi)
    s = StateTriple.from_array(g, [np.cos(3 * g.x), np.full(64, 0.7), np.zeros(64)])
    p = potentials(s)
    assert np.max(np.abs(p.m.values - 10 * np.cos(3 * g.x))) < 1e-12
    assert np.max(np.abs(p.n.values - 0.7)) < 1e-14
    assert np.max(np.abs(p.l.values)) == 0.0


@given(st.integers(0, 2 ** 32 - 1))
def test_potentials_round_trip(seed):
    s = _random_state(seed)
    for f, m in zip(s.fields, potentials(s).fields):
        assert np.max(np.abs(helmholtz_inverse(m).values - f.values)) < 1e-12


def test_energy_examples():
    g = make_grid(128, 10.0)
    assert energy(StateTriple.zeros(g)) == 0.0
    s = gaussian_triple(make_grid(1024, 40.0), (0.5, 0.0, 0.0), (0.0, 0.0, 0.0), (1.5, 1.0, 1.0))
    assert energy(s) == pytest.approx(oracles.gaussian_h1_sq(0.5, 1.5), rel=1e-13)
    f = s.u
    same = StateTriple(f, f, f)
    assert energy(same) == pytest.approx(3 * h1_norm_sq(f), rel=1e-15)


def test_energy_of_mollified_peakon_approaches_two():
    gaps = [2.0 - energy(_peakon(n, eps)) for n, eps in ((2048, 0.2), (4096, 0.1), (8192, 0.05))]
    assert 0 < gaps[-1] < gaps[1] < gaps[0]
    assert gaps[1] < 0.05


def test_sup_norm_check_examples():
    g = make_grid(64, 5.0)
    r = sup_norm_bound_check(StateTriple.zeros(g), 1.0)
    assert r.value == 0.0 and r.bound == 0.5 and r.passed
    s = _peakon(4096, 0.1)
    E = energy(s)
    r = sup_norm_bound_check(s, E)
    assert r.passed and 0.95 < r.value <= 1.0 and r.bound == pytest.approx(0.5 * E)
    # a state violating the bound is caught
    assert not sup_norm_bound_check(s, 1.0).passed


@given(st.integers(0, 2 ** 32 - 1), st.permutations([0, 1, 2]))
def test_permutation_symmetry(seed, order):
    s = _random_state(seed)
    p = s.permuted(order)
    assert energy(p) == pytest.approx(energy(s), rel=1e-14)
    pot, ppot = potentials(s).fields, potentials(p).fields
    for i, j in enumerate(order):
        assert np.array_equal(ppot[i].values, pot[j].values)


def test_state_snapshot_round_trip(tmp_path):
    s = _random_state(3, n=32, L=2.0)
    s = StateTriple(*s.fields, t=1.25)
    path = tmp_path / "s.c3s"
    write_state(path, s)
    raw = path.read_bytes()
    assert raw[:4] == b"C3S1" and raw[12:16] == b"C3F1"
    back = read_state(path)
    assert back.t == 1.25 and np.array_equal(back.array(), s.array())
    path.write_bytes(b"NOPE" + raw[4:])
    with pytest.raises(ValueError):
        read_state(path)


def test_state_csv(tmp_path):
    s = _random_state(4, n=16, L=1.0)
    write_state_csv(tmp_path / "s.csv", s)
    rows = (tmp_path / "s.csv").read_text().splitlines()
    assert rows[0] == "x,u,v,w" and len(rows) == 17
    vals = [float(v) for v in rows[5].split(",")]
    assert vals[1:] == [s.u.values[4], s.v.values[4], s.w.values[4]]
