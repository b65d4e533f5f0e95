"""Independent reference values used by the tests.

Nothing here calls into ch3lab; every value comes from a closed form, an ODE
solve or high-precision quadrature.
"""

import math

import mpmath
import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import erfc, erfcx

_C = math.exp(0.25) * math.sqrt(math.pi) / 2.0


def _halves(x):
    # e^{-x} erfc(1/2 - x) and e^{x} erfc(1/2 + x), via erfcx on the side where they underflow
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        left = np.where(x < 0.5, erfcx(0.5 - x) * np.exp(-x * x - 0.25), np.exp(-x) * erfc(0.5 - x))
        right = np.where(x > -0.5, erfcx(0.5 + x) * np.exp(-x * x - 0.25), np.exp(x) * erfc(0.5 + x))
    return left, right


def green_gaussian(x):
    """(G * e^{-y^2})(x) with G = exp(-|x|)/2 on the line."""
    a, b = _halves(x)
    return 0.5 * _C * (a + b)


def green_gaussian_dx(x):
    """d/dx of green_gaussian."""
    a, b = _halves(x)
    return 0.5 * _C * (b - a)


def gaussian_h1_sq(a, w):
    """||a exp(-((x-c)/w)^2)||_{H1}^2 on the line."""
    return a * a * math.sqrt(math.pi / 2.0) * (w + 1.0 / w)


def riccati_blowup_time(Q0, E0):
    """Time at which dQ/dt = -Q^2/(6 E0) + 27 E0^2 reaches -infinity, by ODE solve."""
    # integrate in s = 1/Q, which stays finite through the blow-up
    def f(_t, y):
        s = y[0]
        return [1.0 / (6.0 * E0) - 27.0 * E0 ** 2 * s * s]

    def hit(_t, y):
        return y[0]

    hit.terminal = True
    sol = solve_ivp(f, (0.0, 1e3), [1.0 / Q0], events=hit, rtol=1e-12, atol=1e-15, method="DOP853")
    return float(sol.t_events[0][0])


def kernel_product_mp(form, alpha, N, x, derivative=False, dps=30):
    """Defining integral of the weighted Green product, by mpmath quadrature."""
    mpmath.mp.dps = dps
    a, N, x = mpmath.mpf(alpha), mpmath.mpf(N), mpmath.mpf(x)

    def logw(y):
        if form == "J":
            return -a * min(max(y, -N), 0)
        return a * min(max(y, 0), N)

    lx = logw(x)
    pts = sorted({-N, mpmath.mpf(0), x} if form == "J" else {mpmath.mpf(0), N, x})
    edges = [-mpmath.inf, *pts, mpmath.inf]
    total = mpmath.mpf(0)
    for lo, hi in zip(edges, edges[1:]):
        if hi <= lo:
            continue
        sgn = 1
        if derivative:
            sgn = 1 if lo >= x else -1
        total += sgn * mpmath.quad(lambda y: mpmath.exp(lx - abs(x - y) - logw(y)), [lo, hi])
    return float(total)


def band_limited(n, L, rng, modes=None):
    """Random real trigonometric polynomial using the lowest ``modes`` wavenumbers."""
    modes = modes or n // 4
    x = -L + (2.0 * L / n) * np.arange(n)
    out = np.full(n, rng.normal())
    for j in range(1, modes):
        k = math.pi * j / L
        out += rng.normal() / j * np.cos(k * x) + rng.normal() / j * np.sin(k * x)
    return out
