"""Initial data, the CH n-peakon ODE, traveling-wave residuals and axis tracking."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq
from scipy.special import bernoulli

from .diagnostics import array_scalars, blowup_threshold, lifespan_bound
from .grid import Field, Grid, diff, helmholtz_inverse
from .state import StateTriple


class ResolutionWarning(UserWarning):
    """A feature is too narrow for the grid."""


# ---------------------------------------------------------------------------
# peakons


@dataclass(frozen=True)
class PeakonAnsatz:
    positions: tuple[float, ...]
    p: tuple[float, ...]
    r: tuple[float, ...]
    s: tuple[float, ...]

    def __post_init__(self):
        lens = {len(self.positions), len(self.p), len(self.r), len(self.s)}
        if len(lens) != 1:
            raise ValueError("positions and amplitude lists must have equal length")
        if any(b < a for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError("positions must be sorted ascending")


def peakon_field(ansatz: PeakonAnsatz, grid: Grid, t: float = 0.0) -> StateTriple:
    """u = sum p_i exp(-|x - q_i|), likewise v with r_i and w with s_i."""
    x = grid.x
    rows = np.zeros((3, grid.n))
    for q, a, b, c in zip(ansatz.positions, ansatz.p, ansatz.r, ansatz.s):
        e = np.exp(-np.abs(x - q))
        rows += np.outer([a, b, c], e)
    return StateTriple.from_array(grid, rows, t)


def bump_kernel(grid: Grid, epsilon: float) -> np.ndarray:
    """Discrete unit-mass C-infinity bump of diameter ``epsilon``, centred at index 0."""
    if not epsilon >= 2.0 * grid.dx:
        raise ValueError(f"epsilon={epsilon} must be at least 2 dx = {2 * grid.dx}")
    j = np.arange(grid.n)
    off = np.minimum(j, grid.n - j) * grid.dx
    y = 2.0 * off / epsilon
    k = np.zeros(grid.n)
    inside = y < 1.0
    k[inside] = np.exp(-1.0 / (1.0 - y[inside] ** 2))
    return k / k.sum()


def mollify(field_: Field, epsilon: float) -> Field:
    """Circular convolution with a unit-mass bump supported on |x| < epsilon/2."""
    k = bump_kernel(field_.grid, epsilon)
    out = np.fft.irfft(np.fft.rfft(field_.values) * np.fft.rfft(k), n=field_.grid.n)
    return field_.like(out)


def mollify_state(state: StateTriple, epsilon: float) -> StateTriple:
    return StateTriple(*(mollify(f, epsilon) for f in state.fields), t=state.t)


def ch_npeakon_rhs(positions, amplitudes) -> tuple[np.ndarray, np.ndarray]:
    """q_j' = sum_k p_k e^{-|q_j-q_k|},  p_j' = p_j sum_k p_k sgn(q_j-q_k) e^{-|q_j-q_k|}."""
    q = np.asarray(positions, dtype=float)
    p = np.asarray(amplitudes, dtype=float)
    if q.shape != p.shape:
        raise ValueError("positions and amplitudes must have equal length")
    d = q[:, None] - q[None, :]
    e = np.exp(-np.abs(d))
    qdot = e @ p
    pdot = p * ((np.sign(d) * e) @ p)
    return qdot, pdot


def integrate_npeakon(positions, amplitudes, t_eval, rtol: float = 1e-12, atol: float = 1e-12):
    """Integrate the n-peakon ODE; returns (q(t), p(t)) arrays of shape (len(t_eval), n)."""
    q0 = np.asarray(positions, dtype=float)
    p0 = np.asarray(amplitudes, dtype=float)
    n = q0.size
    t_eval = np.asarray(t_eval, dtype=float)

    def f(_t, y):
        qd, pd = ch_npeakon_rhs(y[:n], y[n:])
        return np.concatenate([qd, pd])

    sol = solve_ivp(f, (t_eval[0], t_eval[-1]), np.concatenate([q0, p0]), method="DOP853",
                    t_eval=t_eval, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(sol.message)
    return sol.y[:n].T, sol.y[n:].T


# ---------------------------------------------------------------------------
# initial data


@dataclass(frozen=True)
class FrontInfo:
    E0: float
    Q0: float
    threshold: float
    margin: float
    lifespan: float | None

    @property
    def hypothesis(self) -> bool:
        return self.Q0 < self.threshold


def front_info(state: StateTriple) -> FrontInfo:
    s = array_scalars(state.array(), state.grid)
    E0, Q0 = s["E"], s["Q"]
    if E0 == 0.0:
        return FrontInfo(0.0, Q0, 0.0, -math.inf, None)
    thr = blowup_threshold(E0)
    return FrontInfo(E0, Q0, thr, (thr - Q0) / abs(thr), lifespan_bound(Q0, E0))


def steep_front_data(grid: Grid, amplitude: float, delta: float, sigma: float) -> tuple[StateTriple, FrontInfo]:
    """u = v = w = -A tanh(x/delta) exp(-x^2/sigma^2).

    ``margin`` is (threshold - Q0)/|threshold|; positive means Q0 lies below
    the blow-up threshold.
    """
    if not delta > 0 or not sigma > 0:
        raise ValueError("delta and sigma must be positive")
    if delta <= 4.0 * grid.dx:
        warnings.warn(f"front width {delta} <= 4 dx = {4 * grid.dx}", ResolutionWarning, stacklevel=2)
    x = grid.x
    u = -amplitude * np.tanh(x / delta) * np.exp(-(x / sigma) ** 2)
    state = StateTriple.from_array(grid, np.stack([u, u, u]))
    return state, front_info(state)


def gaussian_triple(grid: Grid, amplitudes=(0.3, 0.2, -0.15), centers=(-4.0, 0.0, 4.0), widths=(4.0, 4.0, 4.0)) -> StateTriple:
    x = grid.x
    rows = [a * np.exp(-((x - c) / w) ** 2) for a, c, w in zip(amplitudes, centers, widths)]
    return StateTriple.from_array(grid, np.stack(rows))


def sech_data(grid: Grid, amplitudes=(0.3, 0.2, 0.1), rate: float = 0.5, centers=(0.0, 0.0, 0.0)) -> StateTriple:
    """u = a sech(rate (x - c)), tails ~ 2a exp(-rate |x|)."""
    x = grid.x
    rows = [a / np.cosh(rate * (x - c)) for a, c in zip(amplitudes, centers)]
    return StateTriple.from_array(grid, np.stack(rows))


def potential_sech_data(grid: Grid, amplitudes=(0.3, 0.2, 0.1), rate: float = 1.5, centers=(0.0, 0.0, 0.0)) -> StateTriple:
    """Velocities whose potentials are m = a sech(rate (x - c))."""
    pots = sech_data(grid, amplitudes, rate, centers)
    return StateTriple(*(helmholtz_inverse(f) for f in pots.fields))


def random_smooth_state(grid: Grid, rng: np.random.Generator, bumps: int = 4, min_width: float = 1.0,
                        spread: float = 6.0) -> StateTriple:
    """Sums of Gaussians with random amplitude, centre and width."""
    x = grid.x
    rows = np.zeros((3, grid.n))
    for i in range(3):
        for _ in range(bumps):
            a = rng.uniform(-0.5, 0.5)
            c = rng.uniform(-spread, spread)
            w = rng.uniform(min_width, 2.0 * min_width)
            rows[i] += a * np.exp(-((x - c) / w) ** 2)
    return StateTriple.from_array(grid, rows)


def translate(state: StateTriple, a: float) -> StateTriple:
    """Spectral shift z(x) -> z(x - a)."""
    g = state.grid
    phase = np.exp(-1j * g.kr * a)
    phase[-1] = np.cos(g.kr[-1] * a)
    rows = np.fft.irfft(np.fft.rfft(state.array(), axis=-1) * phase, n=g.n, axis=-1)
    return StateTriple.from_array(g, rows, state.t)


# ---------------------------------------------------------------------------
# symmetry axis


@dataclass(frozen=True)
class SymmetryFit:
    b: float
    mismatch: float
    degenerate: bool = False


@dataclass
class SymmetryTrace:
    times: list[float] = field(default_factory=list)
    b: list[float] = field(default_factory=list)
    mismatch: list[float] = field(default_factory=list)


def _golden(fun, a, b, tol):
    """Maximize ``fun`` on [a, b]."""
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def _centroid(Y: np.ndarray, grid: Grid) -> float:
    Yx = np.fft.irfft(grid.ik * np.fft.rfft(Y, axis=-1), n=grid.n, axis=-1)
    dens = (Y ** 2 + Yx ** 2).sum(axis=0)
    tot = dens.sum()
    return float((grid.x * dens).sum() / tot) if tot > 0 else 0.0


def symmetry_axis(state: StateTriple) -> SymmetryFit:
    """Axis b minimizing sum ||z(x) - z(2b - x)||_{L2} over the components.

    The reflection is the trigonometric interpolant (Nyquist mode dropped),
    so the overlap is a trigonometric polynomial in b.  It is scanned on a
    grid of spacing dx/4, the maximum nearest the energy centroid (modulo the
    box period L of reflections) is refined by golden section.
    """
    g = state.grid
    Y = state.array()
    C = np.fft.rfft(Y, axis=-1)
    C[:, -1] = 0.0
    centroid = _centroid(Y, g)
    weights = np.full(C.shape[1], 2.0)
    weights[0] = 1.0
    weights[-1] = 0.0
    a = (weights * (C ** 2)).sum(axis=0)
    if not np.any(np.abs(a[1:]) > 1e-300 * max(1.0, abs(a[0]))):
        return SymmetryFit(centroid, 0.0, True)
    x0 = -g.L
    kr = g.kr

    def overlap(b):
        return float(np.real(np.sum(a * np.exp(2j * kr * (b - x0)))))

    def slope(b):
        return float(np.real(np.sum(2j * kr * a * np.exp(2j * kr * (b - x0)))))

    # scan b in [x0, x0 + L) at spacing L/M
    M = 4 * g.n // 2
    full = np.zeros(M, dtype=complex)
    full[: a.size] = a
    scan = np.real(np.fft.ifft(full) * M)
    step = g.L / M
    top = scan.max()
    cand = np.nonzero(scan >= top - 1e-9 * abs(top))[0]
    grid_b = x0 + step * cand

    def wrapdist(b):
        d = (b - centroid) % g.L
        return min(d, g.L - d)

    best = min(grid_b, key=wrapdist)
    b = _golden(overlap, best - step, best + step, 1e-9 * g.L)
    # the maximum is flat to rounding; polish on the derivative
    lo, hi = b - step, b + step
    if slope(lo) > 0.0 > slope(hi):
        b = brentq(slope, lo, hi, xtol=1e-15)
    # representative closest to the centroid
    b = centroid + ((b - centroid + 0.5 * g.L) % g.L) - 0.5 * g.L
    return SymmetryFit(float(b), reflection_mismatch(state, b), False)


def reflection_mismatch(state: StateTriple, b: float) -> float:
    """||z - z(2b - .)||_{L2} summed over components, computed spectrally."""
    g = state.grid
    C = np.fft.rfft(state.array(), axis=-1)
    C[:, -1] = 0.0
    R = np.conj(C) * np.exp(-2j * g.kr * (b + g.L))
    D = np.abs(C - R) ** 2
    D[:, 1:-1] *= 2.0
    return float(np.sqrt(D.sum(axis=1) * g.dx / g.n).sum())


# ---------------------------------------------------------------------------
# weak residual


@dataclass(frozen=True, eq=False)
class WaveProfile:
    U: Field
    V: Field
    W: Field
    c: float
    kinks: tuple[float, ...] = ()

    def __post_init__(self):
        g = self.U.grid
        if not (g.same_as(self.V.grid) and g.same_as(self.W.grid)):
            raise ValueError("profile fields must share one grid")

    @property
    def grid(self) -> Grid:
        return self.U.grid


def peakon_profile(grid: Grid, c: float = 1.0, x0: float = 0.0) -> WaveProfile:
    """U = c exp(-|x - x0|), V = W = 0 with the crest snapped to a node."""
    i = int(round((x0 + grid.L) / grid.dx)) % grid.n
    xc = float(grid.x[i])
    U = grid.field(c * np.exp(-np.abs(grid.x - xc)))
    Z = grid.field(np.zeros(grid.n))
    return WaveProfile(U, Z, Z, c, kinks=(xc,))


def _bump(y):
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - y[inside] ** 2))
    return out


@dataclass(frozen=True, eq=False)
class TestFunction:
    phi: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    @classmethod
    def from_samples(cls, grid: Grid, values) -> "TestFunction":
        f = grid.field(values)
        return cls(f.values, diff(f, 1).values, diff(f, 2).values, diff(f, 3).values)

    @property
    def scale(self) -> float:
        return float(sum(np.sum(np.abs(d)) for d in (self.d1, self.d2, self.d3)))


def default_test_functions(grid: Grid) -> list[TestFunction]:
    """Twelve Gaussians times monomials (degree i mod 4) with a smooth cutoff.

    Centres -5.5, -4.5, ..., 5.5, width 1 and cutoff radius 4; the pattern is
    shrunk on boxes with 0.8 L < 9.5 so every support stays inside +-0.8 L.
    """
    scale = min(1.0, 0.8 * grid.L / 9.5)
    x = grid.x
    tests = []
    for i in range(12):
        c = (-5.5 + i) * scale
        y = (x - c) / scale
        vals = y ** (i % 4) * np.exp(-y ** 2) * _bump(y / 4.0)
        tests.append(TestFunction.from_samples(grid, vals))
    return tests


def _gregory_weights(m: int = 8) -> np.ndarray:
    """Weights (in units of h) of the first m nodes of a Gregory rule.

    Corrections c_j = w_j - 1 cancel the Euler-Maclaurin end terms for
    polynomials of degree < m:  sum_j c_j j^d = -1/2 (d = 0),
    B_{d+1}/(d+1) (d odd), 0 (d even > 0).
    """
    B = bernoulli(m + 1)
    j = np.arange(m, dtype=float)
    A = np.vander(j, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[0] = -0.5
    for d in range(1, m, 2):
        rhs[d] = B[d + 1] / (d + 1)
    return 1.0 + np.linalg.solve(A, rhs)


_GREGORY = _gregory_weights()


def _piece_integral(vals: np.ndarray, h: float) -> float:
    n = vals.size
    m = _GREGORY.size
    if n < 2 * m:
        return float(np.trapezoid(vals, dx=h))
    w = np.ones(n)
    w[:m] = _GREGORY
    w[-m:] = _GREGORY[::-1]
    return float(h * (w @ vals))


def _fd_derivative(vals: np.ndarray, h: float, order: int = 8) -> np.ndarray:
    """Derivative of samples of a smooth piece by local polynomial fits (one-sided at ends)."""
    n = vals.size
    p = min(order + 1, n)
    out = np.empty(n)
    half = p // 2
    cache: dict[int, np.ndarray] = {}
    for i in range(n):
        start = min(max(i - half, 0), n - p)
        sh = i - start
        if sh not in cache:
            off = np.arange(p) - sh
            V = np.vander(off.astype(float), p, increasing=True).T
            e = np.zeros(p)
            e[1] = 1.0
            cache[sh] = np.linalg.solve(V, e)
        out[i] = cache[sh] @ vals[start : start + p]
    return out / h


def _pieces(profile: WaveProfile):
    """Index paths of the smooth pieces between kinks, wrapping periodically."""
    g = profile.grid
    if not profile.kinks:
        return None
    idx = sorted({int(round((k + g.L) / g.dx)) % g.n for k in profile.kinks})
    paths = []
    for a, b in zip(idx, idx[1:] + [idx[0] + g.n]):
        paths.append(np.arange(a, b + 1) % g.n)
    return paths


def _integrands(Y, Yx, phi: TestFunction, sl, c: float):
    out = []
    for i in range(3):
        o = [j for j in range(3) if j != i]
        y, yx = Y[i], Yx[i]
        so = Y[o[0]] + Y[o[1]]
        sox = Yx[o[0]] + Yx[o[1]]
        rest = 0.5 * (Y[o[0]] ** 2 + Y[o[1]] ** 2 - Yx[o[0]] ** 2 - Yx[o[1]] ** 2)
        f1, f2, f3 = phi.d1[sl], phi.d2[sl], phi.d3[sl]
        val = (
            -c * y * (f1 - f3)
            + yx * so * f2
            - 0.5 * y ** 2 * f3
            + (1.5 * y ** 2 + 0.5 * yx ** 2 + y * so + yx * sox + rest) * f1
        )
        out.append(val)
    return out


def weak_residual_values(profile: WaveProfile, tests) -> np.ndarray:
    """Signed pairings, shape (3, len(tests)), unnormalized.

    Smooth profiles use spectral slopes and the periodic trapezoid rule.
    Profiles with kinks are split at the kink nodes; each smooth piece gets
    one-sided polynomial slopes and a Gregory-corrected trapezoid rule.
    """
    g = profile.grid
    Y = np.stack([profile.U.values, profile.V.values, profile.W.values])
    pieces = _pieces(profile)
    out = np.zeros((3, len(tests)))
    if pieces is None:
        Yx = np.fft.irfft(g.ik * np.fft.rfft(Y, axis=-1), n=g.n, axis=-1)
        for j, phi in enumerate(tests):
            for i, val in enumerate(_integrands(Y, Yx, phi, slice(None), profile.c)):
                out[i, j] = np.sum(val) * g.dx
        return out
    for path in pieces:
        Yp = Y[:, path]
        Yxp = np.stack([_fd_derivative(row, g.dx) for row in Yp])
        for j, phi in enumerate(tests):
            for i, val in enumerate(_integrands(Yp, Yxp, phi, path, profile.c)):
                out[i, j] += _piece_integral(val, g.dx)
    return out


def weak_residual(profile: WaveProfile, tests=None) -> tuple[float, float, float]:
    """Max over the test set of |pairing| / sum_{j=1..3} ||d^j phi||_{L1}, per equation."""
    if tests is None:
        tests = default_test_functions(profile.grid)
    vals = weak_residual_values(profile, tests)
    scales = np.array([phi.scale * profile.grid.dx for phi in tests])
    norm = np.abs(vals) / scales
    return tuple(float(v) for v in norm.max(axis=1))


# ---------------------------------------------------------------------------
# traveling check


@dataclass
class TravelingReport:
    times: np.ndarray
    b: np.ndarray
    mismatch: np.ndarray
    shape_error: np.ndarray
    speed: float
    r_squared: float
    degenerate: bool

    def rows(self):
        for t, b, e in zip(self.times, self.b, self.shape_error):
            yield float(t), float(b), self.speed, float(e)


def _shift_error(z0: np.ndarray, zt: np.ndarray, grid: Grid, guess: float) -> float:
    """min_s ||zt - z0(. - s)|| / ||z0||, refined around ``guess``."""
    C0 = np.fft.rfft(z0, axis=-1)
    Ct = np.fft.rfft(zt, axis=-1)
    C0[:, -1] = 0.0
    Ct[:, -1] = 0.0
    kr = grid.kr

    def dist2(s):
        D = np.abs(Ct - C0 * np.exp(-1j * kr * s)) ** 2
        D[:, 1:] *= 2.0
        return float(D.sum())

    s = _golden(lambda s: -dist2(s), guess - 2 * grid.dx, guess + 2 * grid.dx, 1e-12 * grid.L)
    ref = np.abs(C0) ** 2
    ref[:, 1:] *= 2.0
    return math.sqrt(dist2(s) / ref.sum())


def traveling_check(samples) -> TravelingReport:
    """Fit axis b(t), speed c = db/dt and shape error against the first sample.

    ``samples`` are StateTriple objects (their ``t`` is used).
    """
    states = list(samples)
    if len(states) < 5:
        raise ValueError("traveling_check needs at least 5 samples")
    g = states[0].grid
    times = np.array([s.t for s in states])
    fits = [symmetry_axis(s) for s in states]
    degenerate = any(f.degenerate for f in fits)
    b = np.array([f.b for f in fits])
    # axes are defined modulo L; unwrap along the series
    b = b[0] + np.unwrap((b - b[0]) * (2 * np.pi / g.L)) * (g.L / (2 * np.pi))
    mism = np.array([f.mismatch for f in fits])
    if degenerate:
        nan = np.full(times.size, math.nan)
        return TravelingReport(times, b, mism, nan, math.nan, 0.0, True)
    A = np.vstack([times, np.ones_like(times)]).T
    (speed, icept), *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = b - (speed * times + icept)
    ss = float(np.sum((b - b.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss if ss > 0 else 0.0
    z0 = states[0].array()
    err = np.array([_shift_error(z0, s.array(), g, bi - b[0]) for s, bi in zip(states, b)])
    return TravelingReport(times, b, mism, err, float(speed), r2, False)
