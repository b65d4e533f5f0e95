"""Field triples, potentials, and the conserved H1 energy."""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import Field, Grid, _pack_field, _unpack_field, diff, helmholtz

STATE_MAGIC = b"C3S1"


@dataclass(frozen=True, eq=False)
class StateTriple:
    u: Field
    v: Field
    w: Field
    t: float = 0.0

    def __post_init__(self):
        g = self.u.grid
        if not (g.same_as(self.v.grid) and g.same_as(self.w.grid)):
            raise ValueError("u, v, w must share one grid")
        if self.t < 0:
            raise ValueError("t must be non-negative")

    @property
    def grid(self) -> Grid:
        return self.u.grid

    @property
    def fields(self) -> tuple[Field, Field, Field]:
        return (self.u, self.v, self.w)

    def array(self) -> np.ndarray:
        """Stacked (3, n) copy of the samples."""
        return np.stack([f.values for f in self.fields])

    @classmethod
    def from_array(cls, grid: Grid, arr, t: float = 0.0) -> "StateTriple":
        arr = np.asarray(arr, dtype=float)
        return cls(Field(grid, arr[0]), Field(grid, arr[1]), Field(grid, arr[2]), t)

    @classmethod
    def zeros(cls, grid: Grid, t: float = 0.0) -> "StateTriple":
        return cls.from_array(grid, np.zeros((3, grid.n)), t)

    def is_finite(self) -> bool:
        return all(f.is_finite() for f in self.fields)

    def permuted(self, order) -> "StateTriple":
        fs = self.fields
        return StateTriple(*(fs[i] for i in order), t=self.t)


@dataclass(frozen=True, eq=False)
class PotentialTriple:
    m: Field
    n: Field
    l: Field
    t: float = 0.0

    @property
    def fields(self) -> tuple[Field, Field, Field]:
        return (self.m, self.n, self.l)


def potentials(state: StateTriple) -> PotentialTriple:
    """(m, n, l) = (1 - d^2/dx^2)(u, v, w)."""
    return PotentialTriple(*(helmholtz(f) for f in state.fields), t=state.t)


def h1_norm_sq(f: Field) -> float:
    fx = diff(f).values
    return f.grid.integrate(f.values ** 2 + fx ** 2)


def energy(state: StateTriple) -> float:
    """E = sum of the squared H1 norms of u, v, w."""
    return sum(h1_norm_sq(f) for f in state.fields)


@dataclass(frozen=True)
class SupNormCheck:
    value: float
    bound: float
    passed: bool


def sup_norm_bound_check(state: StateTriple, E0: float) -> SupNormCheck:
    """Check |u|_inf^2 + |v|_inf^2 + |w|_inf^2 <= E0/2 (tolerance 1e-8 E0)."""
    value = float(sum(np.max(np.abs(f.values)) ** 2 for f in state.fields))
    bound = 0.5 * E0
    return SupNormCheck(value, bound, value <= bound + 1e-8 * E0)


# ---------------------------------------------------------------------------
# snapshots


def write_state(path, state: StateTriple) -> None:
    """Binary snapshot: b"C3S1", t (<f8), then three C3F1 field blocks."""
    blob = STATE_MAGIC + struct.pack("<d", state.t) + b"".join(_pack_field(f) for f in state.fields)
    Path(path).write_bytes(blob)


def read_state(path) -> StateTriple:
    buf = Path(path).read_bytes()
    if buf[:4] != STATE_MAGIC:
        raise ValueError(f"{path}: not a C3S1 state snapshot")
    (t,) = struct.unpack_from("<d", buf, 4)
    off = 12
    fields = []
    for _ in range(3):
        f, off = _unpack_field(buf, off)
        fields.append(f)
    return StateTriple(*fields, t=t)


def write_state_csv(path, state: StateTriple) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "u", "v", "w"])
        for row in zip(state.grid.x, *(f.values for f in state.fields)):
            w.writerow([repr(float(r)) for r in row])
