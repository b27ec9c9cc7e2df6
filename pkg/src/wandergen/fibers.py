"""Fiberization of orbit families: Gram fibers, bounds, and certificates.

An orbit family is reduced, through the group Fourier transform, to one
small matrix per dual sampling point.  Riesz and frame bounds,
biorthogonality, containment, and orthonormalization all become pointwise
matrix statements on those fibers.

The Gram normalization constant is pinned so that an orbit-orthonormal
family yields the identity fiber at every point (|G| in exact mode, 1 in
shift mode); "is this family wandering?" is then a single matrix
comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _linalg
from .defaults import TOL_BIO_EXACT, TOL_BIO_SAMPLED, TOL_RANK_REL
from .errors import EmptyFamily, ExactModeRequired, NotRiesz, RankJump, SizeMismatch
from .groups import (
    CoefficientArray,
    DualSampling,
    FiberSamples,
    FiniteAbelian,
    GroupVector,
    SystemSpace,
    character_table,
    dual_sampling,
    fourier,
    inverse_fourier,
    translate,
)

__all__ = [
    "Family",
    "SampledFamily",
    "FiberField",
    "Bounds",
    "fiber_tensor",
    "gram_normalization",
    "gram_fibers",
    "mixed_gramian",
    "riesz_bounds",
    "frame_bounds",
    "is_biorthogonal",
    "is_contained",
    "orthonormalize",
    "synthesize",
    "default_bio_tol",
    "fiber_span_angle",
    "dense_fourier_matrix",
]


@dataclass(frozen=True)
class Family:
    """Ordered finite list of generators sharing one system space."""

    space: SystemSpace
    members: tuple[GroupVector, ...]

    def __post_init__(self):
        members = tuple(self.members)
        for v in members:
            if v.space != self.space:
                raise SizeMismatch("family members must share the system space")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def joined(self, other: "Family") -> "Family":
        if other.space != self.space:
            raise SizeMismatch("cannot join families over different spaces")
        return Family(self.space, self.members + other.members)


@dataclass(frozen=True)
class SampledFamily:
    """Fiber-sampled stand-in for a family when no coefficient realization exists.

    Shift-mode constructions return these: the fibers are trustworthy at the
    sampled dual points, but recovering coefficient sequences would require
    interpolation, which is deliberately not offered.
    """

    space: SystemSpace
    sampling: DualSampling
    fibers: np.ndarray  # (points, channels, members)
    note: str = "fiber-sampled; coefficient-domain realization requires interpolation"

    def __len__(self) -> int:
        return int(self.fibers.shape[2])


@dataclass(frozen=True)
class FiberField:
    """One complex matrix per dual sampling point."""

    sampling: DualSampling
    matrices: np.ndarray  # (points, rows, cols)

    def identity_deviation(self) -> float:
        """Max absolute entry of (matrix - I) over all points."""
        mats = self.matrices
        if mats.shape[1] != mats.shape[2]:
            raise ValueError("identity deviation needs square fibers")
        if mats.shape[2] == 0:
            return 0.0
        eye = np.eye(mats.shape[1], dtype=np.complex128)
        return float(np.max(np.abs(mats - eye)))

    def hermitian_deviation(self) -> float:
        return float(np.max(np.abs(self.matrices - self.matrices.conj().transpose(0, 2, 1))))


@dataclass(frozen=True)
class Bounds:
    """Two-sided bound pair 0 < lower <= upper.

    ``exact`` is False when the bounds are grid infima/suprema over a torus
    sampling rather than certified extrema over the whole dual group.
    """

    lower: float
    upper: float
    exact: bool = True

    def __post_init__(self):
        if not (self.lower > 0.0 and self.lower <= self.upper):
            raise ValueError(f"bounds must satisfy 0 < lower <= upper, got {self}")


def fiber_tensor(X) -> tuple[DualSampling, np.ndarray]:
    """Stack member fibers into values[point, channel, member].

    Accepts a Family (members are transformed), a SampledFamily (stored
    fibers are returned), or any object exposing per-point bases through a
    ``bases`` attribute.
    """
    if isinstance(X, SampledFamily):
        return X.sampling, X.fibers
    if hasattr(X, "bases"):
        return X.sampling, X.bases
    if len(X.members) == 0:
        sampling = dual_sampling(X.space)
        return sampling, np.zeros((len(sampling), X.space.channels, 0), dtype=np.complex128)
    transformed = [fourier(v) for v in X.members]
    sampling = transformed[0].sampling
    values = np.stack([f.values for f in transformed], axis=2)
    return sampling, values


def gram_normalization(space: SystemSpace) -> float:
    return float(space.group.order) if space.exact else 1.0


def default_bio_tol(space: SystemSpace) -> float:
    return TOL_BIO_EXACT if space.exact else TOL_BIO_SAMPLED


def _gram_tensor(F: np.ndarray, Ft: np.ndarray, normalization: float) -> np.ndarray:
    # G[p]_{ij} = N * sum_c F[p,c,i] * conj(Ft[p,c,j])
    return normalization * np.einsum("pci,pcj->pij", F, Ft.conj())


def gram_fibers(X) -> FiberField:
    """Pointwise Gram matrices of the orbit family.

    G(gamma)_{ij} = N sum_c xhat_{i,c}(gamma) conj(xhat_{j,c}(gamma)) with N
    chosen so orbit-orthonormal families give G = I everywhere.
    """
    if len(X) == 0:
        raise EmptyFamily("gram_fibers needs at least one generator")
    sampling, F = fiber_tensor(X)
    mats = _gram_tensor(F, F, gram_normalization(X.space))
    return FiberField(sampling, mats)


def mixed_gramian(X, Xt) -> FiberField:
    """Cross-Gram fibers of two same-sized families (rows index X)."""
    if X.space != Xt.space:
        raise SizeMismatch("mixed Gramian needs a shared system space")
    if len(X) != len(Xt):
        raise SizeMismatch(f"family sizes differ: {len(X)} vs {len(Xt)}")
    sampling, F = fiber_tensor(X)
    _, Ft = fiber_tensor(Xt)
    mats = _gram_tensor(F, Ft, gram_normalization(X.space))
    return FiberField(sampling, mats)


def _gram_eigenvalues(X) -> tuple[DualSampling, np.ndarray]:
    G = gram_fibers(X)
    return G.sampling, np.linalg.eigvalsh(G.matrices)  # ascending per point


def riesz_bounds(X, tol_rank: float = TOL_RANK_REL) -> Bounds:
    """Extremal Gram-fiber eigenvalues over the sampling.

    Raises NotRiesz when some fiber is singular beyond the relative rank
    tolerance: the two-sided synthesis inequality then has no positive
    lower constant.
    """
    sampling, evs = _gram_eigenvalues(X)
    per_point_tol = tol_rank * np.maximum(evs[:, -1], 1.0)
    if np.any(evs[:, 0] <= per_point_tol):
        worst = int(np.argmin(evs[:, 0] - per_point_tol))
        raise NotRiesz(
            f"Gram fiber at dual point {worst} is singular "
            f"(min eigenvalue {evs[worst, 0]:.3e})"
        )
    return Bounds(float(evs[:, 0].min()), float(evs[:, -1].max()), sampling.exact)


def frame_bounds(X, tol_rank: float = TOL_RANK_REL) -> Bounds:
    """Extremal nonzero Gram-fiber eigenvalues, requiring constant fiber rank.

    A rank that varies across sampled points means the span is not
    well-defined on this sampling (RankJump).  The lower bound is the
    smallest eigenvalue exceeding the rank tolerance anywhere.
    """
    sampling, evs = _gram_eigenvalues(X)
    tol = tol_rank * np.maximum(evs[:, -1], 1.0)[:, None]
    keep = evs > tol
    ranks = keep.sum(axis=1)
    if int(ranks.min()) != int(ranks.max()):
        raise RankJump(f"fiber rank varies across sampling: {int(ranks.min())}..{int(ranks.max())}")
    if int(ranks[0]) == 0:
        raise EmptyFamily("family spans only the zero subspace")
    lower = float(np.where(keep, evs, np.inf).min())
    upper = float(evs[:, -1].max())
    return Bounds(lower, upper, sampling.exact)


class BiorthogonalityCheck(NamedTuple):
    ok: bool
    residual: float


def is_biorthogonal(X, Xt, tol_bio: float | None = None) -> BiorthogonalityCheck:
    """Whether the cross-Gram fibers equal the identity within tolerance."""
    if tol_bio is None:
        tol_bio = default_bio_tol(X.space)
    residual = mixed_gramian(X, Xt).identity_deviation()
    return BiorthogonalityCheck(residual <= tol_bio, residual)


def is_contained(X, Y, tol_rank: float = TOL_RANK_REL) -> bool:
    """Pointwise column-space containment of X's fibers in Y's."""
    if X.space != Y.space:
        raise SizeMismatch("containment needs a shared system space")
    _, FX = fiber_tensor(X)
    _, FY = fiber_tensor(Y)
    for p in range(FX.shape[0]):
        ry = _linalg.matrix_rank(FY[p], tol_rank)
        joint = _linalg.matrix_rank(np.hstack([FY[p], FX[p]]), tol_rank)
        if joint != ry:
            return False
    return True


def fiber_span_angle(X, Y, tol_rank: float = TOL_RANK_REL) -> float:
    """Max over dual points of the largest principal angle between fiber spans."""
    _, FX = fiber_tensor(X)
    _, FY = fiber_tensor(Y)
    return max(
        _linalg.max_principal_angle(FX[p], FY[p], tol_rank) for p in range(FX.shape[0])
    )


def family_from_fibers(space: SystemSpace, sampling: DualSampling, F: np.ndarray):
    """Materialize fibers as a Family (exact mode) or SampledFamily (shift mode)."""
    if space.exact:
        members = tuple(
            inverse_fourier(FiberSamples(sampling, F[:, :, j]), space)
            for j in range(F.shape[2])
        )
        return Family(space, members)
    return SampledFamily(space, sampling, np.asarray(F, dtype=np.complex128))


def orthonormalize(X, tol_rank: float = TOL_RANK_REL):
    """Whiten the family so its orbit Gram is the identity at every point.

    Fibers are multiplied by the inverse square root of the (conjugated)
    Gram fiber; the output spans the same fiber column space everywhere and
    its orbit is orthonormal.
    """
    riesz_bounds(X, tol_rank)  # raises NotRiesz on singular fibers
    sampling, F = fiber_tensor(X)
    G = _gram_tensor(F, F, gram_normalization(X.space))
    w, U = np.linalg.eigh(G)
    inv_sqrt = (U * (w[:, None, :] ** -0.5)) @ U.conj().transpose(0, 2, 1)
    # with G_ij = N sum_c xhat_i conj(xhat_j), whitening uses conj(G)^{-1/2}
    FZ = F @ inv_sqrt.conj()
    return family_from_fibers(X.space, sampling, FZ)


def synthesize(X, a) -> GroupVector:
    """sum over entries a[(g, j)] * translate(g, x_j)."""
    entries = a.entries if isinstance(a, CoefficientArray) else a
    total: dict = {}
    for (g, j), weight in entries.items():
        j = int(j)
        if not 0 <= j < len(X):
            raise IndexError(f"family index {j} outside 0..{len(X) - 1}")
        shifted = translate(g, X.members[j])
        w = complex(weight)
        for key, val in shifted.coeffs.items():
            total[key] = total.get(key, 0j) + w * val
    return GroupVector(X.space, total)


def dense_fourier_matrix(space: SystemSpace) -> np.ndarray:
    """Unitary map from dense coefficients to stacked fiber coordinates.

    Row (p * channels + c) holds the transform of channel c at dual point p;
    exact mode only.
    """
    group = space.group
    if not isinstance(group, FiniteAbelian):
        raise ExactModeRequired("dense transform matrices exist only in exact mode")
    C = character_table(group).conj() / math.sqrt(group.order)
    return np.kron(C, np.eye(space.channels))
