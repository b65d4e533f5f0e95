"""Nonlocal evolution of the three-component system, RK4 stepping, breaking detector.

The evolved form is

    u_t = -(u+v+w) u_x - G*(u v_x + u w_x) - dG/dx * f

with cyclic analogues for v (source g) and w (source h).  All quadratic products
are truncated with the 2/3 rule and the state is kept in the retained band, so
the semi-discrete system is a Galerkin truncation and conserves the H1 energy
exactly; only the time integrator drifts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
import scipy.fft as sfft

from .grid import Field, Grid, quadrature_convolve
from .state import PotentialTriple, StateTriple

Convolution = Literal["spectral", "quadrature"]


@dataclass(frozen=True, eq=False)
class SourceTriple:
    f: Field
    g: Field
    h: Field

    @property
    def fields(self):
        return (self.f, self.g, self.h)


@dataclass(frozen=True)
class StepControl:
    """Time-step policy.

    ``dt`` is the fixed step of :func:`step` and the largest step :func:`run`
    takes.  ``run`` also enforces dt <= cfl_target*dx/max|u+v+w| and
    dt <= slope_cfl/max(-u_x, -v_x, -w_x).  ``slope_threshold=None`` means
    50*sqrt(E0).  With ``max_tail`` set, ``run`` stops with
    ``resolution_lost`` once the fraction of H1 spectral power in the upper
    half of the retained band exceeds it.
    """

    dt: float = 1e-2
    cfl_target: float = 0.5
    dt_min: float = 1e-7
    slope_threshold: float | None = None
    slope_cfl: float = 0.02
    plunge_window: int = 5
    max_tail: float | None = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not 0 < self.dt_min < self.dt:
            raise ValueError("need 0 < dt_min < dt")
        if not 0 < self.cfl_target <= 1:
            raise ValueError("cfl_target must lie in (0, 1]")
        if not self.slope_cfl > 0:
            raise ValueError("slope_cfl must be positive")
        if self.slope_threshold is not None and not self.slope_threshold > 0:
            raise ValueError("slope_threshold must be positive")
        if self.plunge_window < 2:
            raise ValueError("plunge_window must be >= 2")
        if self.max_tail is not None and not 0 < self.max_tail < 1:
            raise ValueError("max_tail must lie in (0, 1)")

    def threshold_for(self, E0: float) -> float:
        if self.slope_threshold is not None:
            return self.slope_threshold
        return 50.0 * math.sqrt(max(E0, 0.0))


REASONS = ("reached_t_end", "wave_breaking", "nonfinite", "dt_underflow", "resolution_lost")


@dataclass
class TerminationReport:
    reason: str
    t_final: float
    min_slope_history: list[tuple[float, float]]
    steps: int = 0
    slope_threshold: float = math.nan
    E0: float = math.nan

    def as_dict(self) -> dict:
        return {
            "reason": self.reason,
            "t_final": self.t_final,
            "steps": self.steps,
            "slope_threshold": self.slope_threshold,
            "E0": self.E0,
            "min_slope_tail": self.min_slope_history[-10:],
        }


# ---------------------------------------------------------------------------
# pointwise pieces


def _slopes(Y: np.ndarray, grid: Grid) -> np.ndarray:
    return np.fft.irfft(grid.ik * np.fft.rfft(Y, axis=-1), n=grid.n, axis=-1)


def _sources(Y: np.ndarray, Yx: np.ndarray) -> np.ndarray:
    # f_i = y_i^2 + y_ix^2/2 + y_ix*(sum_{j!=i} y_jx) + sum_{j!=i} (y_j^2 - y_jx^2)/2
    Sx = Yx.sum(axis=0)
    P = 0.5 * (Y ** 2 - Yx ** 2).sum(axis=0)
    return 0.5 * Y ** 2 + Yx * Sx + P


def nonlocal_sources(state: StateTriple) -> SourceTriple:
    g = state.grid
    Y = state.array()
    F = _sources(Y, _slopes(Y, g))
    return SourceTriple(*(Field(g, row) for row in F))


class _Ops:
    """Cached spectral multipliers for one grid."""

    def __init__(self, grid: Grid):
        self.grid = grid
        self.n = grid.n
        self.ik = grid.ik
        self.mask = grid.mask.astype(float)
        self.green = self.mask / (1.0 + grid.kr ** 2)
        self.dgreen = self.green * self.ik
        self.both = np.concatenate([np.ones_like(self.ik), self.ik])

    def fields(self, Yh: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # Y and Y_x from one batched inverse transform
        Z = sfft.irfft(np.concatenate([Yh, self.ik * Yh]), n=self.n, axis=-1)
        return Z[:3], Z[3:]

    def tendency_hat(self, Y: np.ndarray, Yx: np.ndarray) -> np.ndarray:
        S = Y.sum(axis=0)
        Sx = Yx.sum(axis=0)
        P = np.concatenate([S * Yx, Y * (Sx - Yx), _sources(Y, Yx)])
        Ph = sfft.rfft(P, axis=-1)
        return -(self.mask * Ph[:3] + self.green * Ph[3:6] + self.dgreen * Ph[6:])


def _tendency(Y: np.ndarray, grid: Grid) -> np.ndarray:
    ops = _Ops(grid)
    Y, Yx = ops.fields(sfft.rfft(Y, axis=-1))
    return sfft.irfft(ops.tendency_hat(Y, Yx), n=grid.n, axis=-1)


def _tendency_quadrature(Y: np.ndarray, grid: Grid) -> np.ndarray:
    Yx = _slopes(Y, grid)
    S = Y.sum(axis=0)
    Sx = Yx.sum(axis=0)

    def trunc(a):
        return np.fft.irfft(grid.mask * np.fft.rfft(a, axis=-1), n=grid.n, axis=-1)

    transport = trunc(S * Yx)
    cross = trunc(Y * (Sx - Yx))
    src = trunc(_sources(Y, Yx))
    out = np.empty_like(Y)
    for i in range(3):
        gc = quadrature_convolve(Field(grid, cross[i])).values
        dgf = quadrature_convolve(Field(grid, src[i]), derivative=True).values
        out[i] = -(transport[i] + gc + dgf)
    return out


def rhs(state: StateTriple, convolution: Convolution = "spectral") -> tuple[Field, Field, Field]:
    """Tendencies (u_t, v_t, w_t) of the nonlocal form.

    ``convolution="quadrature"`` replaces the Helmholtz multiplier by the
    direct-sum oracle; products are truncated identically on both routes.
    """
    g = state.grid
    Y = state.array()
    if convolution == "spectral":
        T = _tendency(Y, g)
    elif convolution == "quadrature":
        T = _tendency_quadrature(Y, g)
    else:
        raise ValueError(f"unknown convolution route {convolution!r}")
    if not np.all(np.isfinite(T)):
        raise FloatingPointError("non-finite tendency")
    return tuple(Field(g, row) for row in T)


def rhs_potential_form(potential: PotentialTriple, state: StateTriple) -> tuple[Field, Field, Field]:
    """Tendencies (m_t, n_t, l_t) from the local form of the system.

    For u:  m_t = -[u m_x + 2 m u_x + (m(v+w))_x + n v_x + l w_x], cyclic for n, l.
    """
    g = state.grid
    Y = state.array()
    M = np.stack([f.values for f in potential.fields])
    Yx = _slopes(Y, g)
    Mx = _slopes(M, g)
    S = Y.sum(axis=0)
    out = np.empty_like(Y)
    mYx = M * Yx
    for i in range(3):
        others = S - Y[i]
        flux = _slopes(M[i] * others, g)
        out[i] = -(Y[i] * Mx[i] + 2.0 * mYx[i] + flux + mYx.sum(axis=0) - mYx[i])
    out = np.fft.irfft(g.mask * np.fft.rfft(out, axis=-1), n=g.n, axis=-1)
    return tuple(Field(g, row) for row in out)


# ---------------------------------------------------------------------------
# time stepping


def project(Y: np.ndarray, grid: Grid) -> np.ndarray:
    """Drop the modes removed by the 2/3 rule."""
    return np.fft.irfft(grid.mask * np.fft.rfft(Y, axis=-1), n=grid.n, axis=-1)


def _rk4_hat(Yh: np.ndarray, ops: _Ops, dt: float, first=None) -> np.ndarray:
    """Classical RK4 on the retained rfft coefficients."""
    k1 = ops.tendency_hat(*(first if first is not None else ops.fields(Yh)))
    k2 = ops.tendency_hat(*ops.fields(Yh + 0.5 * dt * k1))
    k3 = ops.tendency_hat(*ops.fields(Yh + 0.5 * dt * k2))
    k4 = ops.tendency_hat(*ops.fields(Yh + dt * k3))
    return Yh + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step(state: StateTriple, control: StepControl, dt: float | None = None) -> StateTriple:
    """One classical RK4 step of size ``dt`` (default ``control.dt``).

    The state is projected onto the retained band first.  A non-finite result
    is returned as is; check ``state.is_finite()``.
    """
    dt = control.dt if dt is None else dt
    g = state.grid
    ops = _Ops(g)
    with np.errstate(all="ignore"):
        Yh = ops.mask * sfft.rfft(state.array(), axis=-1)
        Y = sfft.irfft(_rk4_hat(Yh, ops, dt), n=g.n, axis=-1)
    return StateTriple.from_array(g, Y, state.t + dt)


# ---------------------------------------------------------------------------
# driver


@dataclass
class Sample:
    t: float
    state: StateTriple
    record: "object"


@dataclass
class Trajectory:
    samples: list[Sample] = field(default_factory=list)
    history: dict[str, np.ndarray] = field(default_factory=dict)
    E0: float = math.nan

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def states(self) -> list[StateTriple]:
        return [s.state for s in self.samples]


def _plunging(hist: list[float], window: int) -> bool:
    if len(hist) < window:
        return False
    tail = hist[-window:]
    return all(b < a for a, b in zip(tail, tail[1:]))


def run(
    initial: StateTriple,
    control: StepControl,
    t_end: float,
    cadence: float,
    *,
    keep_states: bool = True,
    on_sample: Callable[[Sample], None] | None = None,
    max_steps: int = 10_000_000,
) -> tuple[Trajectory, TerminationReport]:
    """Integrate from ``initial`` to ``t_end`` with adaptive RK4.

    Samples (state + diagnostics record) are emitted every ``cadence`` time
    units and at termination.  Per-step scalars are kept in
    ``trajectory.history``.  The initial data are first projected onto the
    retained (2/3-rule) band.
    """
    from .diagnostics import array_scalars, record_from_scalars

    if not cadence > 0:
        raise ValueError("cadence must be positive")
    if t_end < initial.t:
        raise ValueError("t_end precedes the initial time")
    g = initial.grid
    ops = _Ops(g)
    Yh = ops.mask * sfft.rfft(initial.array(), axis=-1)
    t = initial.t
    traj = Trajectory()
    rows: list[dict] = []
    slope_hist: list[float] = []
    minhist: list[tuple[float, float]] = []

    def emit(Y, t, row):
        rec = record_from_scalars(row, t)
        st = StateTriple.from_array(g, Y, t) if keep_states or on_sample is not None else None
        traj.samples.append(Sample(t, st if keep_states else None, rec))
        if on_sample is not None:
            on_sample(Sample(t, st, rec))

    next_out = t
    reason = "reached_t_end"
    steps = 0
    dt = 0.0
    eps = 1e-12 * max(1.0, abs(t_end))
    threshold = math.nan

    while True:
        Y, Yx = ops.fields(Yh)
        row = array_scalars(Y, g, Yx=Yx, Yh=Yh)
        row.update(t=t, dt=dt)
        rows.append(row)
        if steps == 0:
            traj.E0 = row["E"]
            threshold = control.threshold_for(row["E"])
        slope_hist.append(row["min_slope"])
        minhist.append((t, row["min_slope"]))
        if t >= next_out - eps:
            emit(Y, t, row)
            next_out += cadence
        if t >= t_end - eps:
            break
        if steps >= max_steps:
            reason = "dt_underflow"
            break
        if control.max_tail is not None and row["tail"] > control.max_tail:
            reason = "resolution_lost"
            break
        dt = control.dt
        if row["max_speed"] > 0:
            dt = min(dt, control.cfl_target * g.dx / row["max_speed"])
        if row["min_slope"] < 0:
            dt = min(dt, control.slope_cfl / -row["min_slope"])
        if dt < control.dt_min:
            steep = row["min_slope"] < -threshold
            if steep and _plunging(slope_hist, control.plunge_window):
                reason = "wave_breaking"
            else:
                reason = "dt_underflow"
            break
        target = min(next_out, t_end)
        if t + dt > target - eps:
            dt = target - t
        with np.errstate(all="ignore"):
            new = _rk4_hat(Yh, ops, dt, first=(Y, Yx))
        if not np.all(np.isfinite(new)):
            reason = "nonfinite"
            break
        Yh = new
        t = target if abs(t + dt - target) <= eps else t + dt
        steps += 1

    if traj.samples[-1].t != t:
        emit(Y, t, row)
    traj.history = {key: np.array([r[key] for r in rows]) for key in rows[0]}
    report = TerminationReport(
        reason=reason,
        t_final=t,
        min_slope_history=minhist,
        steps=steps,
        slope_threshold=threshold,
        E0=traj.E0,
    )
    return traj, report
