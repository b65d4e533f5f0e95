"""Periodic grid, spectral operators and the Green-kernel convolutions.

The real line is emulated by the periodic box [-L, L).  Two independent routes
compute convolutions with the kernel G(x) = exp(-|x|)/2:

* ``green_convolve`` uses the Fourier multiplier 1/(1+k^2) (production path);
* ``quadrature_convolve`` sums the kernel directly against a local polynomial
  interpolant of the data on the truncated line (O(n^2) oracle, no FFT).
"""

from __future__ import annotations

import csv
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "TruncationWarning",
    "make_grid",
    "diff",
    "helmholtz",
    "helmholtz_inverse",
    "green_convolve",
    "quadrature_convolve",
    "dealias",
    "write_field",
    "read_field",
    "write_field_csv",
]

FIELD_MAGIC = b"C3F1"


class TruncationWarning(UserWarning):
    """Data does not decay inside the box; periodic images are not negligible."""


@dataclass(frozen=True, eq=False)
class Grid:
    n: int
    L: float
    dx: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    k: np.ndarray = field(init=False, repr=False)
    kr: np.ndarray = field(init=False, repr=False)
    mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n, L = self.n, self.L
        if not isinstance(n, (int, np.integer)) or n < 16 or n & (n - 1):
            raise ValueError(f"n must be a power of two >= 16, got {n!r}")
        if not L > 0:
            raise ValueError(f"L must be positive, got {L!r}")
        dx = 2.0 * L / n
        x = -L + dx * np.arange(n)
        k = np.pi * np.fft.fftfreq(n, d=1.0 / n) / L
        kr = np.pi * np.arange(n // 2 + 1) / L
        # 2/3 rule: keep |j| < n/3 so quadratic products are alias free there
        mask = np.arange(n // 2 + 1) < n / 3.0
        for arr in (x, k, kr, mask):
            arr.flags.writeable = False
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "L", float(L))
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "kr", kr)
        object.__setattr__(self, "mask", mask)

    @property
    def ik(self) -> np.ndarray:
        """Derivative multiplier for rfft coefficients (Nyquist mode zeroed)."""
        ik = 1j * self.kr
        ik[-1] = 0.0
        return ik

    def same_as(self, other: "Grid") -> bool:
        return self.n == other.n and self.L == other.L

    def field(self, values) -> "Field":
        return Field(self, values)

    def integrate(self, values) -> float:
        """Trapezoid rule on the periodic grid (spectrally accurate)."""
        return float(np.sum(values, axis=-1) * self.dx)


@dataclass(frozen=True, eq=False)
class Field:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {v.shape}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def like(self, values) -> "Field":
        return Field(self.grid, values)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def __add__(self, other):
        if isinstance(other, Field):
            return self.like(self.values + other.values)
        return self.like(self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Field):
            return self.like(self.values - other.values)
        return self.like(self.values - other)

    def __mul__(self, other):
        if isinstance(other, Field):
            return self.like(self.values * other.values)
        return self.like(self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.like(-self.values)


def make_grid(n: int, L: float) -> Grid:
    return Grid(n, L)


def _multiply(field_: Field, multiplier: np.ndarray) -> Field:
    g = field_.grid
    return field_.like(np.fft.irfft(multiplier * np.fft.rfft(field_.values), n=g.n))


def diff(field_: Field, order: int = 1) -> Field:
    """Spectral derivative of the given order."""
    return _multiply(field_, field_.grid.ik ** order)


def helmholtz(field_: Field) -> Field:
    """Apply (1 - d^2/dx^2)."""
    return _multiply(field_, 1.0 + field_.grid.kr ** 2)


def helmholtz_inverse(field_: Field) -> Field:
    """Solve (1 - d^2/dx^2) g = field on the periodic grid."""
    return _multiply(field_, 1.0 / (1.0 + field_.grid.kr ** 2))


def dealias(field_: Field) -> Field:
    return _multiply(field_, field_.grid.mask.astype(float))


def _check_truncation(field_: Field, tol: float) -> None:
    v = np.abs(field_.values)
    edge = max(v[0], v[-1])
    if edge > tol:
        warnings.warn(
            f"field is {edge:.3e} at the box edge (tolerance {tol:.1e}); "
            "periodic images contaminate the line convolution",
            TruncationWarning,
            stacklevel=3,
        )


def green_convolve(field_: Field, derivative: bool = False, tol: float = 1e-12) -> Field:
    """G*f (or dG/dx * f) via the Helmholtz multiplier.

    Equals the line convolution up to periodization error, which is negligible
    once the data have decayed to ``tol`` at the box edge.
    """
    _check_truncation(field_, tol)
    g = field_.grid
    mult = 1.0 / (1.0 + g.kr ** 2)
    if derivative:
        mult = mult * g.ik
    return _multiply(field_, mult)


# ---------------------------------------------------------------------------
# quadrature oracle


def _lagrange_matrix(offsets: np.ndarray, s: np.ndarray) -> np.ndarray:
    """B[q, m] = value at s[q] of the Lagrange basis polynomial on ``offsets``."""
    B = np.ones((s.size, offsets.size))
    for m, om in enumerate(offsets):
        for j, oj in enumerate(offsets):
            if j != m:
                B[:, m] *= (s - oj) / (om - oj)
    return B


def _cell_moments(values: np.ndarray, h: float, points: int, nodes: int = 12):
    """Per-cell integrals of exp(-s) p(s) and exp(-(h-s)) p(s), s in [0, h].

    p is the degree ``points-1`` interpolant through the nearest ``points``
    samples (stencils are clamped at the ends of the line).
    """
    n = values.size
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    s = 0.5 * h * (xg + 1.0)
    w = 0.5 * h * wg
    right_w = w * np.exp(-s)
    left_w = w * np.exp(-(h - s))
    half = points // 2
    ip = np.zeros(n - 1)
    im = np.zeros(n - 1)
    cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for j in range(n - 1):
        start = min(max(j - half + 1, 0), n - points)
        shift = j - start
        if shift not in cache:
            offsets = np.arange(points) - shift
            B = _lagrange_matrix(offsets.astype(float), s / h)
            cache[shift] = (right_w @ B, left_w @ B)
        cr, cl = cache[shift]
        seg = values[start : start + points]
        ip[j] = cr @ seg
        im[j] = cl @ seg
    return ip, im


def quadrature_convolve(field_: Field, derivative: bool = False, points: int = 12) -> Field:
    """Direct O(n^2) evaluation of the line convolution with exp(-|x-y|)/2.

    The data are integrated on [x_0, x_{n-1}] only (no periodization); the
    kernel is integrated exactly against a piecewise polynomial interpolant, so
    the kink of the kernel at y = x costs no accuracy.
    """
    g = field_.grid
    n, h = g.n, g.dx
    ip, im = _cell_moments(field_.values, h, points)
    idx = np.arange(n)
    # right: cells j >= i weighted exp(-(x_j - x_i)); left: cells j < i weighted exp(-(x_i - x_{j+1}))
    gap_r = idx[None, : n - 1] - idx[:, None]
    gap_l = idx[:, None] - (idx[None, : n - 1] + 1)
    right = np.where(gap_r >= 0, np.exp(-h * np.clip(gap_r, 0, None)), 0.0) @ ip
    left = np.where(gap_l >= 0, np.exp(-h * np.clip(gap_l, 0, None)), 0.0) @ im
    out = 0.5 * (right - left) if derivative else 0.5 * (right + left)
    return field_.like(out)


# ---------------------------------------------------------------------------
# serialization


def _pack_field(f: Field) -> bytes:
    return FIELD_MAGIC + struct.pack("<qd", f.grid.n, f.grid.L) + np.asarray(f.values, "<f8").tobytes()


def _unpack_field(buf: bytes, offset: int = 0) -> tuple[Field, int]:
    if buf[offset : offset + 4] != FIELD_MAGIC:
        raise ValueError("not a C3F1 field block")
    n, L = struct.unpack_from("<qd", buf, offset + 4)
    start = offset + 20
    end = start + 8 * n
    if len(buf) < end:
        raise ValueError("truncated field block")
    values = np.frombuffer(buf[start:end], dtype="<f8").astype(float)
    return Field(make_grid(int(n), L), values), end


def write_field(path, f: Field) -> None:
    Path(path).write_bytes(_pack_field(f))


def read_field(path) -> Field:
    f, _ = _unpack_field(Path(path).read_bytes())
    return f


def write_field_csv(path, f: Field) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "value"])
        for xi, vi in zip(f.grid.x, f.values):
            w.writerow([repr(float(xi)), repr(float(vi))])
