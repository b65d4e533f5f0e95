"""Blow-up functionals, the Riccati monitor, tail fits and weighted norms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Field, Grid
from .kernels import WeightSpec, weight_eval
from .state import PotentialTriple, StateTriple


@dataclass
class DiagnosticsRecord:
    t: float
    E: float
    Q: float
    min_slopes: tuple[float, float, float]
    sup_sq_sum: float
    quartic: float = math.nan
    weighted: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.E < 0 or self.sup_sq_sum < 0:
            raise ValueError("E and sup_sq_sum are non-negative")


def array_scalars(Y: np.ndarray, grid: Grid, Yx=None, Yh=None) -> dict:
    """Per-step scalars of a (3, n) state array.

    ``Yx`` and ``Yh`` (slopes and rfft coefficients) may be passed in when the
    caller already has them.
    """
    if Yh is None:
        Yh = np.fft.rfft(Y, axis=-1)
    if Yx is None:
        Yx = np.fft.irfft(grid.ik * Yh, n=grid.n, axis=-1)
    S = Yx.sum(axis=0)
    dx = grid.dx
    mins = Yx.min(axis=1)
    # spectral energy in the upper half of the retained band, relative
    kept = int(np.count_nonzero(grid.mask))
    power = np.abs(Yh[:, :kept]) ** 2 * (1.0 + grid.kr[:kept] ** 2)
    total = power.sum()
    tail = float(power[:, kept // 2 :].sum() / total) if total > 0 else 0.0
    return {
        "E": float(np.sum(Y ** 2 + Yx ** 2) * dx),
        "Q": float(np.sum(S ** 3) * dx),
        "quartic": float(np.sum(S ** 4) * dx),
        "slope_sq": float(np.sum(S ** 2) * dx),
        "min_ux": float(mins[0]),
        "min_vx": float(mins[1]),
        "min_wx": float(mins[2]),
        "min_slope": float(mins.min()),
        "sup_sq_sum": float(np.sum(np.max(np.abs(Y), axis=1) ** 2)),
        "max_speed": float(np.max(np.abs(Y.sum(axis=0)))),
        "tail": tail,
    }


def record_from_scalars(s: dict, t: float) -> DiagnosticsRecord:
    return DiagnosticsRecord(
        t=t,
        E=s["E"],
        Q=s["Q"],
        min_slopes=(s["min_ux"], s["min_vx"], s["min_wx"]),
        sup_sq_sum=s["sup_sq_sum"],
        quartic=s["quartic"],
    )


def record_from_array(Y: np.ndarray, grid: Grid, t: float) -> DiagnosticsRecord:
    return record_from_scalars(array_scalars(Y, grid), t)


def record(state: StateTriple) -> DiagnosticsRecord:
    return record_from_array(state.array(), state.grid, state.t)


def q_functional(state: StateTriple) -> float:
    """Integral of (u_x + v_x + w_x)^3."""
    return array_scalars(state.array(), state.grid)["Q"]


def quartic_functional(state: StateTriple) -> float:
    return array_scalars(state.array(), state.grid)["quartic"]


def blowup_threshold(E0: float) -> float:
    """-9 E0 sqrt(2 E0): Q(0) below this forces breaking."""
    if not E0 > 0:
        raise ValueError(f"E0 must be positive, got {E0}")
    return -9.0 * E0 * math.sqrt(2.0 * E0)


def lifespan_bound(Q0: float, E0: float) -> float | None:
    """Upper bound on the breaking time, or None when Q0 >= threshold.

    T <= sqrt(2)/(3 sqrt(E0)) * ln((Q0 - 9E0 sqrt(2E0)) / (Q0 + 9E0 sqrt(2E0))).
    """
    thr = blowup_threshold(E0)
    if not Q0 < thr:
        return None
    c = -thr
    return math.sqrt(2.0) / (3.0 * math.sqrt(E0)) * math.log((Q0 - c) / (Q0 + c))


# spectral tail fraction above which a state no longer counts as resolved
RESOLVED_TAIL = 1e-6


def resolved_until(history: dict, tail: float = RESOLVED_TAIL) -> float:
    """Time of the last step before the tail fraction first exceeds ``tail``."""
    t = np.asarray(history["t"])
    bad = np.nonzero(np.asarray(history["tail"]) > tail)[0]
    return float(t[-1] if bad.size == 0 else t[max(bad[0] - 1, 0)])


def holder_check(Q: float, quartic: float, E0: float, rtol: float = 1e-8) -> bool:
    """Q^2 <= 3 E0 * integral (slope sum)^4, with relative tolerance."""
    rhs = 3.0 * E0 * quartic
    return Q * Q <= rhs * (1.0 + rtol) + rtol


@dataclass
class RiccatiViolation:
    t: float
    dQdt: float
    bound: float
    form: str


@dataclass
class RiccatiReport:
    checked: int
    violations: list[RiccatiViolation]
    inconclusive: bool = False

    @property
    def ok(self) -> bool:
        return not self.inconclusive and not self.violations


def _centered_rate(t: np.ndarray, q: np.ndarray) -> np.ndarray:
    h1 = t[1:-1] - t[:-2]
    h2 = t[2:] - t[1:-1]
    return (h1 ** 2 * q[2:] - h2 ** 2 * q[:-2] + (h2 ** 2 - h1 ** 2) * q[1:-1]) / (h1 * h2 * (h1 + h2))


def riccati_monitor(times, Q, E0: float, quartic=None, upto: float | None = None) -> RiccatiReport:
    """Check dQ/dt <= -Q^2/(6 E0) + 27 E0^2 at interior samples.

    dQ/dt is the three-point (non-uniform) centered difference.  The tolerance
    is 1e-3 (1 + Q^2/(6 E0)).  With ``quartic`` the sharper bound
    -quartic/2 + 27 E0^2 is checked too (tolerance 1e-3 (1 + quartic/2)).
    Samples after ``upto`` are ignored.
    """
    t = np.asarray(times, dtype=float)
    q = np.asarray(Q, dtype=float)
    if upto is not None:
        keep = t <= upto
        t, q = t[keep], q[keep]
        if quartic is not None:
            quartic = np.asarray(quartic, dtype=float)[keep]
    if t.size < 3 or not E0 > 0:
        return RiccatiReport(0, [], inconclusive=True)
    rate = _centered_rate(t, q)
    qi = q[1:-1]
    ti = t[1:-1]
    viol = []
    bound = -qi ** 2 / (6.0 * E0) + 27.0 * E0 ** 2
    tol = 1e-3 * (1.0 + qi ** 2 / (6.0 * E0))
    for j in np.nonzero(rate > bound + tol)[0]:
        viol.append(RiccatiViolation(float(ti[j]), float(rate[j]), float(bound[j]), "riccati"))
    if quartic is not None:
        q4 = np.asarray(quartic, dtype=float)[1:-1]
        strong = -0.5 * q4 + 27.0 * E0 ** 2
        tol4 = 1e-3 * (1.0 + 0.5 * q4)
        for j in np.nonzero(rate > strong + tol4)[0]:
            viol.append(RiccatiViolation(float(ti[j]), float(rate[j]), float(strong[j]), "quartic"))
    return RiccatiReport(int(rate.size), viol)


# ---------------------------------------------------------------------------
# tail fits


@dataclass
class DecayFit:
    alpha_hat: float
    window: tuple[float, float]
    r_squared: float
    side: str
    reliable: bool = True
    points: int = 0
    note: str = ""


def decay_fit(
    field_: Field,
    side: str,
    margin: float = 5.0,
    start_level: float = 1e-3,
    stop_level: float = 1e-10,
    min_points: int = 20,
) -> DecayFit:
    """Fit |f| ~ exp(-alpha |x|) on one tail.

    The window opens ``margin`` length units beyond the last point where |f|
    is at least ``start_level`` * max|f| and closes where |f| stays below
    ``stop_level`` * max|f| from there on, never beyond 0.9 L or within
    ``margin`` of the box edge.  Fewer than ``min_points`` grid points in the
    window is inconclusive.  Sign-changing tails are fitted through the local maxima of |f|.
    A quadratic term that bends the log-profile by more than 1% of its drop
    marks the fit unreliable (non-exponential tail).
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    g = field_.grid
    x = g.x
    a = np.abs(field_.values)
    peak = float(a.max())
    if peak == 0.0:
        return DecayFit(math.nan, (math.nan, math.nan), 0.0, side, False, 0, "zero field")
    i0 = int(np.argmax(a))
    # walk outward from the peak
    order = np.arange(i0, g.n) if side == "right" else np.arange(i0, -1, -1)
    xs, vals = x[order], a[order]
    dist = np.abs(xs - x[i0])
    # last point above start_level, so zero crossings near the core are skipped
    above = np.nonzero(vals >= start_level * peak)[0]
    if above[-1] == vals.size - 1:
        return DecayFit(math.nan, (math.nan, math.nan), 0.0, side, False, 0, "no tail")
    x_start = dist[above[-1]] + margin
    # outer envelope, so zero crossings do not end the window early
    env = np.maximum.accumulate(vals[::-1])[::-1]
    ends = np.nonzero((env <= stop_level * peak) & (dist >= x_start))[0]
    x_stop = dist[ends[0]] if ends.size else dist[-1]
    edge_limit = min(0.9 * g.L, g.L - margin)
    sel = (dist >= x_start) & (dist <= x_stop) & (np.abs(xs) <= edge_limit) & (vals > 1e-300)
    xw, yw = xs[sel], vals[sel]
    note = ""
    window = (float(xw.min()), float(xw.max())) if xw.size else (math.nan, math.nan)
    if xw.size < min_points:
        return DecayFit(math.nan, window, 0.0, side, False, int(xw.size), "inconclusive: window too short")
    sign = np.sign(field_.values[order][sel])
    if np.any(sign != sign[0]):
        inner = (yw[1:-1] >= yw[:-2]) & (yw[1:-1] >= yw[2:])
        idx = np.nonzero(inner)[0] + 1
        xw, yw = xw[idx], yw[idx]
        note = "envelope of local maxima"
        if xw.size < 3:
            return DecayFit(math.nan, window, 0.0, side, False, int(xw.size), "inconclusive: too few maxima")
    s = np.abs(xw)
    ly = np.log(yw)
    slope, icept = np.polyfit(s, ly, 1)
    resid = ly - (slope * s + icept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 0.0
    r2 = min(max(r2, 0.0), 1.0)
    c2 = np.polyfit(s - s.mean(), ly, 2)[0]
    width = s.max() - s.min()
    drop = abs(slope) * width
    reliable = True
    if drop == 0 or abs(c2) * width ** 2 > 1e-2 * drop:
        reliable = False
        note = (note + "; " if note else "") + "non-exponential (curved log-profile)"
    return DecayFit(float(-slope), window, r2, side, reliable, int(xw.size), note)


# ---------------------------------------------------------------------------
# weighted norms


def weighted_sup(field_: Field, form: str, alpha: float, N: int) -> float:
    """max_i weight(x_i) |f(x_i)| for the J_N or phi_N weight."""
    spec = WeightSpec(form, alpha, N)
    if not N < 0.9 * field_.grid.L:
        raise ValueError(f"N={N} must be below 0.9 L = {0.9 * field_.grid.L}")
    return float(np.max(weight_eval(spec, field_.grid.x) * np.abs(field_.values)))


@dataclass
class WeightedNorm:
    value: float
    truncated: bool


def potential_weighted_norm(potential: PotentialTriple, lam: float, p: float) -> WeightedNorm:
    """Sum over m, n, l of || c exp((1+lam)|x|) ||_{L^{2p}} (p = inf: sup norm).

    ``truncated`` is set when the weighted integrand near x = +-0.9 L is not
    below 1e-12 of its maximum, i.e. the box cannot represent the norm.
    """
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    if not (p == math.inf or (p >= 1 and int(p) == p)):
        raise ValueError("p must be a positive integer or inf")
    g = potential.m.grid
    x = g.x
    logw = (1.0 + lam) * np.abs(x)
    edge = np.abs(x) >= 0.9 * g.L
    total = 0.0
    truncated = False
    for f in potential.fields:
        with np.errstate(divide="ignore"):
            lg = np.log(np.abs(f.values)) + logw
        top = lg.max()
        if not np.isfinite(top):
            continue
        q = math.inf if p == math.inf else 2.0 * p
        power = 1.0 if q == math.inf else q
        # integrand ratio at the edge versus its peak
        if np.any(edge) and power * (lg[edge].max() - top) > math.log(1e-12):
            truncated = True
        if q == math.inf:
            total += math.exp(top)
        else:
            integrand = np.exp(q * (lg - top))
            total += math.exp(top) * (np.sum(integrand) * g.dx) ** (1.0 / q)
    return WeightedNorm(float(total), truncated)
