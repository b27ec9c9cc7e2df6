"""Discrete abelian groups, dual characters, and the unitary Fourier calculus.

Two group models are supported:

* ``FiniteAbelian`` -- a direct product of cyclic groups.  The dual group is
  enumerated completely (exact mode); the transform is the unitary DFT with
  1/sqrt(|G|) normalization so Parseval holds to machine precision.
* ``IntegerShift`` -- the shift group Z.  The dual torus is sampled at the
  ``grid_size``-th roots of unity (sampled mode); transforms are exact
  trigonometric-polynomial evaluations at the grid points, with no
  quadrature error.

Group elements are canonical integer tuples (finite case) or plain integers
(shift case); there is no abstract element interface, which keeps
serialization bit-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import ExactModeRequired, SupportExceedsGrid

__all__ = [
    "FiniteAbelian",
    "IntegerShift",
    "GroupSpec",
    "SystemSpace",
    "GroupVector",
    "CoefficientArray",
    "DualPoint",
    "DualSampling",
    "FiberSamples",
    "character_table",
    "delta",
    "from_dense",
    "dual_sampling",
    "fourier",
    "inverse_fourier",
    "translate",
    "modulate",
    "convolve",
]


@dataclass(frozen=True)
class FiniteAbelian:
    """Direct product of cyclic groups Z_{n_1} x ... x Z_{n_k}."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders:
            raise ValueError("need at least one cyclic factor")
        if any(n < 1 for n in orders):
            raise ValueError("cyclic factor orders must all be >= 1")
        object.__setattr__(self, "orders", orders)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.orders)

    def canonical(self, g) -> tuple[int, ...]:
        if isinstance(g, (int, np.integer)):
            g = (g,)
        g = tuple(int(x) for x in g)
        if len(g) != len(self.orders):
            raise ValueError(f"element rank {len(g)} != group rank {len(self.orders)}")
        return tuple(x % n for x, n in zip(g, self.orders))

    def compose(self, g, h) -> tuple[int, ...]:
        g, h = self.canonical(g), self.canonical(h)
        return tuple((a + b) % n for a, b, n in zip(g, h, self.orders))

    def inverse(self, g) -> tuple[int, ...]:
        return tuple((-a) % n for a, n in zip(self.canonical(g), self.orders))

    def elements(self) -> list[tuple[int, ...]]:
        """All elements in lexicographic multi-index order."""
        return [tuple(int(i) for i in idx) for idx in np.ndindex(*self.orders)]

    def index_of(self, g) -> int:
        g = self.canonical(g)
        idx = 0
        for x, n in zip(g, self.orders):
            idx = idx * n + x
        return idx


@dataclass(frozen=True)
class IntegerShift:
    """The shift group Z, fiberized on a ``grid_size``-point torus grid.

    The grid must stay at least twice as wide as any vector support in play;
    fiber evaluation for wider supports is rejected as alias-prone.
    """

    grid_size: int

    def __post_init__(self):
        n = int(self.grid_size)
        if n < 2:
            raise ValueError("grid_size must be >= 2")
        object.__setattr__(self, "grid_size", n)

    # the identity element of Z
    identity = 0

    def canonical(self, g) -> int:
        return int(g)

    def compose(self, g, h) -> int:
        return int(g) + int(h)

    def inverse(self, g) -> int:
        return -int(g)


GroupSpec = Union[FiniteAbelian, IntegerShift]


@dataclass(frozen=True)
class SystemSpace:
    """Ambient model: sequences over the group with ``channels`` components."""

    group: GroupSpec
    channels: int

    def __post_init__(self):
        if int(self.channels) < 1:
            raise ValueError("channels must be >= 1")
        object.__setattr__(self, "channels", int(self.channels))

    @property
    def exact(self) -> bool:
        return isinstance(self.group, FiniteAbelian)


class GroupVector:
    """Finitely supported coefficients over (group element, channel).

    Channels are 0-based indices below ``space.channels``.  Instances are
    value objects; arithmetic returns new vectors.
    """

    __slots__ = ("space", "coeffs")

    def __init__(self, space: SystemSpace, coeffs: Mapping | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict = {}
        for (g, c), value in items:
            c = int(c)
            if not 0 <= c < space.channels:
                raise ValueError(f"channel {c} outside 0..{space.channels - 1}")
            key = (space.group.canonical(g), c)
            merged[key] = merged.get(key, 0j) + complex(value)
        self.space = space
        self.coeffs = merged

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.coeffs.values()))

    def inner(self, other: "GroupVector") -> complex:
        """<self, other>, conjugate-linear in ``other``."""
        a, b = self.coeffs, other.coeffs
        if len(a) <= len(b):
            return sum((v * b[k].conjugate() for k, v in a.items() if k in b), 0j)
        return sum((a[k] * v.conjugate() for k, v in b.items() if k in a), 0j)

    def support_window(self) -> tuple[int, int] | None:
        """(min, max) support indices for shift-mode vectors; None when empty."""
        if not isinstance(self.space.group, IntegerShift):
            raise ValueError("support_window is a shift-mode notion")
        if not self.coeffs:
            return None
        positions = [g for g, _ in self.coeffs]
        return min(positions), max(positions)

    def dense(self) -> np.ndarray:
        """Dense (|G|, channels) coefficient array; exact mode only."""
        group = self.space.group
        if not isinstance(group, FiniteAbelian):
            raise ExactModeRequired("dense coefficients exist only for finite groups")
        out = np.zeros((group.order, self.space.channels), dtype=np.complex128)
        for (g, c), v in self.coeffs.items():
            out[group.index_of(g), c] = v
        return out

    def __add__(self, other: "GroupVector") -> "GroupVector":
        if other.space != self.space:
            raise ValueError("mismatched system spaces")
        merged = dict(self.coeffs)
        for k, v in other.coeffs.items():
            merged[k] = merged.get(k, 0j) + v
        return GroupVector(self.space, merged)

    def __sub__(self, other: "GroupVector") -> "GroupVector":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "GroupVector":
        s = complex(scalar)
        return GroupVector(self.space, {k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupVector)
            and other.space == self.space
            and other.coeffs == self.coeffs
        )

    def __repr__(self) -> str:
        return f"GroupVector({len(self.coeffs)} coeffs over {self.space.group})"


def delta(space: SystemSpace, element, channel: int = 0, value=1.0) -> GroupVector:
    """The coefficient delta at (element, channel)."""
    return GroupVector(space, {(element, channel): value})


def from_dense(space: SystemSpace, dense: np.ndarray) -> GroupVector:
    """Build a vector from a dense (|G|, channels) array; exact mode only."""
    group = space.group
    if not isinstance(group, FiniteAbelian):
        raise ExactModeRequired("dense coefficients exist only for finite groups")
    dense = np.asarray(dense, dtype=np.complex128)
    if dense.shape != (group.order, space.channels):
        raise ValueError(f"expected shape {(group.order, space.channels)}, got {dense.shape}")
    elements = group.elements()
    coeffs = {
        (elements[e], c): dense[e, c]
        for e in range(group.order)
        for c in range(space.channels)
    }
    return GroupVector(space, coeffs)


@dataclass
class CoefficientArray:
    """Finitely supported synthesis coefficients over (group element, family index)."""

    entries: dict

    def norm_sq(self) -> float:
        return float(sum(abs(v) ** 2 for v in self.entries.values()))


@dataclass(frozen=True)
class DualPoint:
    """One sampled character of the group; ``evaluate`` gives its unit-modulus value."""

    group: GroupSpec
    index: tuple[int, ...] | int

    def evaluate(self, g) -> complex:
        group = self.group
        if isinstance(group, FiniteAbelian):
            g = group.canonical(g)
            phase = sum(k * x / n for k, x, n in zip(self.index, g, group.orders))
            return complex(np.exp(2j * np.pi * phase))
        angle = 2.0 * np.pi * int(self.index) / group.grid_size
        return complex(np.exp(1j * angle * int(g)))

    @property
    def angle(self) -> float:
        """Torus angle in [0, 2*pi); sampled mode only."""
        if not isinstance(self.group, IntegerShift):
            raise ValueError("angle is a shift-mode notion")
        return 2.0 * np.pi * int(self.index) / self.group.grid_size


@dataclass(frozen=True)
class DualSampling:
    """The ordered dual points computations are fibered over.

    ``exact`` is True iff the points enumerate the whole dual group (finite
    abelian case); shift-mode grids are honest samples, never exhaustive.
    """

    points: tuple[DualPoint, ...]
    exact: bool

    def __len__(self) -> int:
        return len(self.points)


def dual_sampling(space: SystemSpace) -> DualSampling:
    """Enumerate characters (exact mode) or grid the torus (shift mode)."""
    group = space.group
    if isinstance(group, FiniteAbelian):
        points = tuple(DualPoint(group, idx) for idx in group.elements())
        return DualSampling(points=points, exact=True)
    points = tuple(DualPoint(group, t) for t in range(group.grid_size))
    return DualSampling(points=points, exact=False)


@lru_cache(maxsize=None)
def character_table(group: FiniteAbelian) -> np.ndarray:
    """chars[p, e] = value of the p-th character at the e-th element.

    Both axes use the lexicographic element enumeration, so the table is
    symmetric and chars[p, e] = exp(2*pi*i * sum_j p_j e_j / n_j).
    """
    els = np.array(group.elements(), dtype=np.float64)
    scale = 1.0 / np.array(group.orders, dtype=np.float64)
    phase = (els * scale) @ els.T
    return np.exp(2j * np.pi * phase)


@dataclass
class FiberSamples:
    """Per-dual-point value rows of a transformed vector, shape (points, channels)."""

    sampling: DualSampling
    values: np.ndarray


def _check_grid_support(v: GroupVector) -> None:
    group = v.space.group
    window = v.support_window()
    if window is None:
        return
    width = window[1] - window[0] + 1
    if 2 * width > group.grid_size:
        raise SupportExceedsGrid(
            f"support width {width} needs a grid of at least {2 * width} points, "
            f"got {group.grid_size}"
        )


def fourier(v: GroupVector) -> FiberSamples:
    """Transform a vector to the dual sampling.

    Exact mode: vhat(gamma) = |G|^{-1/2} sum_g v(g) conj(gamma(g)) per
    channel (unitary).  Shift mode: vhat(omega) = sum_n v(n) omega^{-n},
    evaluated exactly at the grid points (no normalization).
    """
    space = v.space
    sampling = dual_sampling(space)
    group = space.group
    if isinstance(group, FiniteAbelian):
        values = character_table(group).conj() @ v.dense() / math.sqrt(group.order)
        return FiberSamples(sampling, values)
    _check_grid_support(v)
    values = np.zeros((group.grid_size, space.channels), dtype=np.complex128)
    if v.coeffs:
        supports = sorted({g for g, _ in v.coeffs})
        coeff = np.zeros((len(supports), space.channels), dtype=np.complex128)
        pos = {g: i for i, g in enumerate(supports)}
        for (g, c), val in v.coeffs.items():
            coeff[pos[g], c] = val
        t = np.arange(group.grid_size)
        phases = np.exp(-2j * np.pi * np.outer(t, supports) / group.grid_size)
        values = phases @ coeff
    return FiberSamples(sampling, values)


def inverse_fourier(f: FiberSamples, space: SystemSpace) -> GroupVector:
    """Invert the unitary transform; exact mode only."""
    group = space.group
    if not isinstance(group, FiniteAbelian):
        raise ExactModeRequired("sampled fibers have no exact inverse transform")
    dense = character_table(group).T @ np.asarray(f.values) / math.sqrt(group.order)
    return from_dense(space, dense)


def translate(g, v: GroupVector) -> GroupVector:
    """Left translation: the coefficient at h moves to g*h (unitary)."""
    group = v.space.group
    return GroupVector(
        v.space,
        {(group.compose(g, e), c): val for (e, c), val in v.coeffs.items()},
    )


def modulate(g, f: FiberSamples) -> FiberSamples:
    """Transform-side action of translation: multiply each fiber by gamma(g^-1).

    With the forward transform summing v(h) conj(gamma(h)), translating by g
    multiplies the fiber at gamma by conj(gamma(g)), i.e. by the character
    value at the inverse element.
    """
    weights = np.array([p.evaluate(g) for p in f.sampling.points]).conj()
    return FiberSamples(f.sampling, np.asarray(f.values) * weights[:, None])


def convolve(group: GroupSpec, a: Mapping, b: Mapping) -> dict:
    """(a * b)(g) = sum_m a(m) b(g m^{-1}) for finitely supported sequences."""
    out: dict = {}
    for ga, va in a.items():
        for gb, vb in b.items():
            key = group.compose(ga, gb)
            out[key] = out.get(key, 0j) + complex(va) * complex(vb)
    return out
