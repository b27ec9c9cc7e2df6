"""Oblique projection calculus and the multiwavelet constructions.

Subspaces enter in one of three presentations: an orbit generator family
(invariance holds by construction), a dense basis of the exact-mode
ambient space (accepted so the non-invariant branch is exercisable), or a
precomputed per-point fiber basis field.  All projectors and generator
outputs are produced point by point over the dual sampling.

The Riesz construction follows the proof shape: orthonormal generators of
the orthogonal complement V of the coarse space inside the fine one, then
the oblique projector onto the target space along the coarse space applied
to those generators.  The frame construction first projects the fine
generators orthogonally onto V, then obliquely into the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _linalg
from .defaults import TOL_RANK_REL
from .errors import (
    ExactModeRequired,
    HypothesisFailure,
    NotContained,
    NotDirectSum,
    NotInvariant,
    SingularPairing,
    SizeMismatch,
    SizesEqual,
)
from .fibers import (
    Family,
    FiberField,
    SampledFamily,
    default_bio_tol,
    dense_fourier_matrix,
    family_from_fibers,
    fiber_tensor,
    frame_bounds,
    gram_normalization,
    is_biorthogonal,
    is_contained,
    riesz_bounds,
)
from .groups import DualSampling, FiniteAbelian, SystemSpace, dual_sampling
from .oracle import dense_translation_matrix

__all__ = [
    "DenseBasis",
    "FiberBasisField",
    "ObliqueSplit",
    "OperatorField",
    "ProjectionPair",
    "BiorthogonalPair",
    "orth_complement_in",
    "is_invariant",
    "oblique_projector",
    "restricted_projection_pair",
    "oblique_riesz_wavelets",
    "oblique_frame_wavelets",
    "dual_family",
    "direct_sum_check",
    "biorthogonal_wavelets",
]


@dataclass(frozen=True)
class DenseBasis:
    """Dense coefficient columns spanning a subspace of the exact ambient space."""

    space: SystemSpace
    columns: np.ndarray  # (|G| * channels, d)

    def __post_init__(self):
        if not self.space.exact:
            raise ExactModeRequired("dense bases exist only in exact mode")
        cols = np.asarray(self.columns, dtype=np.complex128)
        rows = self.space.group.order * self.space.channels
        if cols.ndim != 2 or cols.shape[0] != rows:
            raise ValueError(f"expected ({rows}, d) columns, got {cols.shape}")
        object.__setattr__(self, "columns", cols)


@dataclass(frozen=True)
class FiberBasisField:
    """Per-dual-point orthonormal bases of a fiber subspace field."""

    space: SystemSpace
    sampling: DualSampling
    bases: np.ndarray  # (points, channels, dim)

    def __len__(self) -> int:
        return int(self.bases.shape[2])


@dataclass(frozen=True)
class ObliqueSplit:
    """Direct-sum presentation V0 (+) W0 = V1, all fiberwise."""

    v0: Family
    w0: Family | DenseBasis | FiberBasisField
    within: Family


@dataclass(frozen=True)
class OperatorField:
    """Fiberwise linear maps on channel coordinates.

    Projector instances act as the oblique projector on the split's joint
    fiber span and annihilate its orthogonal complement, so the matrices
    are idempotent at every point.
    """

    sampling: DualSampling
    matrices: np.ndarray  # (points, channels, channels)

    def idempotency_residual(self) -> float:
        PP = self.matrices @ self.matrices
        return float(np.max(np.abs(PP - self.matrices)))

    def apply(self, fibers: np.ndarray) -> np.ndarray:
        """Apply pointwise to stacked fiber columns (points, channels, k)."""
        return self.matrices @ fibers

    def dense(self, space: SystemSpace) -> np.ndarray:
        """Exact-mode dense realization: conjugate the block diagonal by the
        dense transform."""
        import scipy.linalg

        PHI = dense_fourier_matrix(space)
        blocks = scipy.linalg.block_diag(*self.matrices)
        return PHI.conj().T @ blocks @ PHI


def _group_generators(group: FiniteAbelian) -> list[tuple[int, ...]]:
    gens = []
    for j, n in enumerate(group.orders):
        if n > 1:
            g = [0] * len(group.orders)
            g[j] = 1
            gens.append(tuple(g))
    return gens


def is_invariant(W, tol_rank: float = TOL_RANK_REL) -> bool:
    """Whether the subspace is closed under the group action.

    Orbit families and fiber basis fields are invariant by construction and
    return True immediately.  Dense bases get the generator translation
    test: translating every basis column by each group generator must stay
    inside the span.
    """
    if isinstance(W, (Family, SampledFamily, FiberBasisField)):
        return True
    if not isinstance(W, DenseBasis):
        raise TypeError(f"unsupported subspace presentation: {type(W).__name__}")
    B = W.columns
    r = _linalg.matrix_rank(B, tol_rank)
    for g in _group_generators(W.space.group):
        L = dense_translation_matrix(W.space, g)
        if _linalg.matrix_rank(np.hstack([B, L @ B]), tol_rank) != r:
            return False
    return True


def _fiberize_dense(W: DenseBasis, tol_rank: float) -> FiberBasisField:
    """Fiber bases of an invariant dense subspace (invariance checked first)."""
    if not is_invariant(W, tol_rank):
        raise NotInvariant("dense subspace is not closed under the group action")
    space = W.space
    sampling = dual_sampling(space)
    PHI = dense_fourier_matrix(space)
    m = space.channels
    stacked = (PHI @ W.columns).reshape(len(sampling), m, W.columns.shape[1])
    per_point = [_linalg.orth_columns(stacked[p], tol_rank) for p in range(len(sampling))]
    dims = {b.shape[1] for b in per_point}
    if len(dims) != 1:
        raise NotDirectSum("invariant subspace has varying fiber dimension on this sampling")
    return FiberBasisField(space, sampling, np.stack(per_point, axis=0))


def _fiber_basis(W, tol_rank: float) -> FiberBasisField:
    """Resolve a subspace presentation to per-point orthonormal fiber bases."""
    if isinstance(W, FiberBasisField):
        return W
    if isinstance(W, DenseBasis):
        return _fiberize_dense(W, tol_rank)
    sampling, F = fiber_tensor(W)
    per_point = [_linalg.orth_columns(F[p], tol_rank) for p in range(len(sampling))]
    dims = {b.shape[1] for b in per_point}
    if len(dims) != 1:
        raise NotDirectSum("family has varying fiber rank on this sampling")
    return FiberBasisField(W.space, sampling, np.stack(per_point, axis=0))


def direct_sum_check(A, B, tol_rank: float = TOL_RANK_REL, require_ambient: bool = False) -> bool:
    """Pointwise rank additivity of the stacked fibers.

    With ``require_ambient`` the joint span must also fill all channels,
    i.e. the fiberwise sum reconstructs the whole space.
    """
    _, FA = fiber_tensor(A)
    _, FB = fiber_tensor(B)
    m = FA.shape[1]
    for p in range(FA.shape[0]):
        ra = _linalg.matrix_rank(FA[p], tol_rank)
        rb = _linalg.matrix_rank(FB[p], tol_rank)
        joint = _linalg.matrix_rank(np.hstack([FA[p], FB[p]]), tol_rank)
        if joint != ra + rb:
            return False
        if require_ambient and joint != m:
            return False
    return True


def orth_complement_in(Y: Family, X, tol_rank: float = TOL_RANK_REL):
    """Orthonormal generators of the orthogonal complement of X's span inside Y's.

    The output family's orbit is an orthonormal basis of V1 intersect
    V0-perp; the basis choice per point is the deterministic pivoted one.
    """
    riesz_bounds(Y, tol_rank)
    if len(X):
        riesz_bounds(X, tol_rank)
        if not is_contained(X, Y, tol_rank):
            raise NotContained("X's orbit span must sit inside Y's")
    space = Y.space
    sampling, FY = fiber_tensor(Y)
    _, FX = fiber_tensor(X) if len(X) else (sampling, FY[:, :, :0])
    d = len(Y) - len(X)
    if d <= 0:
        return family_from_fibers(space, sampling, FY[:, :, :0])
    bases = np.empty((len(sampling), space.channels, d), dtype=np.complex128)
    for p in range(len(sampling)):
        bases[p] = _linalg.phase_normalize_columns(
            _linalg.complement_in_span(FX[p], FY[p], d, tol_rank)
        )
    scale = 1.0 / math.sqrt(gram_normalization(space))
    return family_from_fibers(space, sampling, bases * scale)


def _validated_split_bases(
    split: ObliqueSplit, tol_rank: float
) -> tuple[DualSampling, FiberBasisField, FiberBasisField]:
    """Resolve and validate the split: containments, trivial intersection,
    and joint spanning of the fine space's fibers."""
    v1 = split.within
    if not is_contained(split.v0, v1, tol_rank):
        raise NotContained("V0 generators leave the fine space fiberwise")
    BV0 = _fiber_basis(split.v0, tol_rank)
    BW0 = _fiber_basis(split.w0, tol_rank)
    sampling, F1 = fiber_tensor(v1)
    for p in range(len(sampling)):
        r1 = _linalg.matrix_rank(F1[p], tol_rank)
        a, b = BV0.bases[p].shape[1], BW0.bases[p].shape[1]
        joint = _linalg.matrix_rank(np.hstack([BV0.bases[p], BW0.bases[p]]), tol_rank)
        if joint != a + b:
            raise NotDirectSum(f"V0 and W0 fibers overlap at dual point {p}")
        if joint != r1:
            raise NotDirectSum(
                f"V0 (+) W0 spans a {joint}-dimensional fiber at dual point {p}, "
                f"the fine space has {r1}"
            )
        if _linalg.matrix_rank(np.hstack([F1[p], BW0.bases[p]]), tol_rank) != r1:
            raise NotDirectSum(f"W0 fibers leave the fine space at dual point {p}")
    return sampling, BV0, BW0


def oblique_projector(split: ObliqueSplit, tol_rank: float = TOL_RANK_REL) -> OperatorField:
    """Fiberwise projector onto W0's span along V0's span inside V1."""
    sampling, BV0, BW0 = _validated_split_bases(split, tol_rank)
    m = split.within.space.channels
    mats = np.empty((len(sampling), m, m), dtype=np.complex128)
    for p in range(len(sampling)):
        mats[p] = _linalg.oblique_projector_matrix(BW0.bases[p], BV0.bases[p], tol_rank)
    return OperatorField(sampling, mats)


@dataclass(frozen=True)
class ProjectionPair:
    """Oblique-projection restrictions between two complements of N.

    ``p1`` maps M'-coordinates to M-coordinates (projection onto M along N
    restricted to M'), ``q1`` the reverse; they are mutually inverse.
    """

    p1: FiberField
    q1: FiberField
    inverse_residual: float


def restricted_projection_pair(
    M: Family, Mp: Family, N: Family, tol_rank: float = TOL_RANK_REL
) -> ProjectionPair:
    """Lemma-style inverse pair for X = M (+) N = M' (+) N, fiber by fiber."""
    if len(M) != len(Mp):
        raise SizeMismatch(f"complement sizes differ: {len(M)} vs {len(Mp)}")
    sampling, FM = fiber_tensor(M)
    _, FMp = fiber_tensor(Mp)
    _, FN = fiber_tensor(N)
    k = len(M)
    p1 = np.empty((len(sampling), k, k), dtype=np.complex128)
    q1 = np.empty((len(sampling), k, k), dtype=np.complex128)
    for p in range(len(sampling)):
        BN = _linalg.orth_columns(FN[p], tol_rank)
        rm = _linalg.matrix_rank(FM[p], tol_rank)
        rmp = _linalg.matrix_rank(FMp[p], tol_rank)
        if rm != k or rmp != k:
            raise NotDirectSum(f"generator fibers are dependent at dual point {p}")
        rn = BN.shape[1]
        joint_m = _linalg.matrix_rank(np.hstack([FM[p], BN]), tol_rank)
        joint_mp = _linalg.matrix_rank(np.hstack([FMp[p], BN]), tol_rank)
        if joint_m != k + rn or joint_mp != k + rn:
            raise NotDirectSum(f"complements meet N at dual point {p}")
        both = _linalg.matrix_rank(np.hstack([FM[p], FMp[p], BN]), tol_rank)
        if both != k + rn:
            raise NotDirectSum(f"M (+) N and M' (+) N differ at dual point {p}")
        BM = _linalg.orth_columns(FM[p], tol_rank)
        BMp = _linalg.orth_columns(FMp[p], tol_rank)
        P = _linalg.oblique_projector_matrix(BM, BN, tol_rank)
        Q = _linalg.oblique_projector_matrix(BMp, BN, tol_rank)
        p1[p] = np.linalg.lstsq(FM[p], P @ FMp[p], rcond=None)[0]
        q1[p] = np.linalg.lstsq(FMp[p], Q @ FM[p], rcond=None)[0]
    eye = np.eye(k)
    residual = float(np.max(np.abs(p1 @ q1 - eye))) if k else 0.0
    return ProjectionPair(FiberField(sampling, p1), FiberField(sampling, q1), residual)


def oblique_riesz_wavelets(
    X: Family,
    Y: Family,
    w0,
    tol_rank: float = TOL_RANK_REL,
):
    """Riesz generators of W0: obliquely project the orthogonal-complement ones.

    Requires the fine and coarse orbit families to be Riesz, the coarse span
    contained in the fine one with strictly fewer generators, W0 invariant
    (automatic for orbit presentations, tested for dense bases), and
    V0 (+) W0 = V1 fiberwise.  The output has exactly |Y| - |X| members.
    """
    riesz_bounds(X, tol_rank)
    riesz_bounds(Y, tol_rank)
    if not is_contained(X, Y, tol_rank):
        raise NotContained("X's orbit span must sit inside Y's")
    r, s = len(X), len(Y)
    if r >= s:
        raise SizesEqual(f"need |X| < |Y|, got {r} >= {s}")
    if isinstance(w0, DenseBasis) and not is_invariant(w0, tol_rank):
        raise NotInvariant("W0 is not closed under the group action")
    BW0 = _fiber_basis(w0, tol_rank)
    Z = orth_complement_in(Y, X, tol_rank)
    P = oblique_projector(ObliqueSplit(X, BW0, Y), tol_rank)
    sampling, FZ = fiber_tensor(Z)
    return family_from_fibers(X.space, sampling, P.apply(FZ))


def oblique_frame_wavelets(
    X: Family,
    Y: Family,
    w0,
    tol_rank: float = TOL_RANK_REL,
):
    """Frame generators of W0: project all fine generators orthogonally onto
    the complement V, then obliquely into W0.

    The output keeps |Y| members (possibly redundant); fine and coarse orbit
    families only need to be frames, so their fiber ranks may fall below the
    generator counts.
    """
    frame_bounds(X, tol_rank)
    frame_bounds(Y, tol_rank)
    if not is_contained(X, Y, tol_rank):
        raise NotContained("X's orbit span must sit inside Y's")
    if isinstance(w0, DenseBasis) and not is_invariant(w0, tol_rank):
        raise NotInvariant("W0 is not closed under the group action")
    BW0 = _fiber_basis(w0, tol_rank)
    BV0 = _fiber_basis(X, tol_rank)
    sampling, FY = fiber_tensor(Y)
    m = Y.space.channels
    # validate the split at fiber-rank level
    for p in range(len(sampling)):
        r1 = _linalg.matrix_rank(FY[p], tol_rank)
        a, b = BV0.bases[p].shape[1], BW0.bases[p].shape[1]
        joint = _linalg.matrix_rank(np.hstack([BV0.bases[p], BW0.bases[p]]), tol_rank)
        if joint != a + b or joint != r1:
            raise NotDirectSum(f"V0 (+) W0 != V1 at dual point {p}")
        if _linalg.matrix_rank(np.hstack([FY[p], BW0.bases[p]]), tol_rank) != r1:
            raise NotDirectSum(f"W0 fibers leave the fine space at dual point {p}")
    gamma_fibers = np.empty_like(FY)
    for p in range(len(sampling)):
        BV = _linalg.complement_in_span(
            BV0.bases[p], _linalg.orth_columns(FY[p], tol_rank),
            _linalg.matrix_rank(FY[p], tol_rank) - BV0.bases[p].shape[1], tol_rank,
        )
        P_orth = _linalg.projector(BV)
        P = _linalg.oblique_projector_matrix(BW0.bases[p], BV0.bases[p], tol_rank)
        gamma_fibers[p] = P @ (P_orth @ FY[p])
    return family_from_fibers(X.space, sampling, gamma_fibers)


def dual_family(gamma, w0_tilde, tol_rank: float = TOL_RANK_REL):
    """The unique generators inside the dual subspace pairing biorthogonally
    with gamma's orbit.

    Requires the dual subspace to complement the orthogonal complement of
    gamma's span in the whole space, which pins dimensions and makes the
    fiberwise pairing matrices square; a singular pairing means no dual
    exists in that subspace.
    """
    riesz_bounds(gamma, tol_rank)
    BWt = _fiber_basis(w0_tilde, tol_rank)
    sampling, FG = fiber_tensor(gamma)
    k = len(gamma)
    N = gram_normalization(gamma.space)
    out = np.empty((len(sampling), gamma.space.channels, k), dtype=np.complex128)
    for p in range(len(sampling)):
        Bt = BWt.bases[p]
        if Bt.shape[1] != k:
            raise NotDirectSum(
                f"dual subspace has fiber dimension {Bt.shape[1]} != {k} at dual point {p}"
            )
        pairing = N * FG[p].T @ Bt.conj()
        s = np.linalg.svd(pairing, compute_uv=False)
        if s.size == 0 or s[-1] <= tol_rank * max(s[0], 1.0):
            raise SingularPairing(f"fiber pairing singular at dual point {p}")
        out[p] = Bt @ np.linalg.inv(pairing).conj()
    return family_from_fibers(gamma.space, sampling, out)


def _perp_intersection_field(
    space: SystemSpace,
    sampling: DualSampling,
    F_big: np.ndarray,
    F_perp_of: np.ndarray,
    expected_dim: int,
    tol_rank: float,
) -> FiberBasisField:
    """Fiber bases of (span F_big) intersect (span F_perp_of)^perp."""
    bases = []
    for p in range(len(sampling)):
        B = _linalg.orth_columns(F_big[p], tol_rank)
        A = _linalg.orth_columns(F_perp_of[p], tol_rank)
        K = _linalg.null_space_columns(A.conj().T @ B, tol_rank)
        if K.shape[1] != expected_dim:
            raise NotDirectSum(
                f"intersection dimension {K.shape[1]} != expected {expected_dim} "
                f"at dual point {p}"
            )
        bases.append(B @ K)
    return FiberBasisField(space, sampling, np.stack(bases, axis=0))


@dataclass(frozen=True)
class BiorthogonalPair:
    """Output of the biorthogonal pipeline with its certification residuals."""

    gamma: Family | SampledFamily
    gamma_tilde: Family | SampledFamily
    pair_residual: float
    union_residual: float


def biorthogonal_wavelets(
    X: Family,
    Xt: Family,
    Y: Family,
    Yt: Family,
    tol_rank: float = TOL_RANK_REL,
    tol_bio: float | None = None,
) -> BiorthogonalPair:
    """Dual multiwavelet pair from biorthogonal refinable family pairs.

    W0 = V1 intersect Vt0-perp and Wt0 = Vt1 intersect V0-perp are computed
    fiberwise; the wavelets come from the oblique Riesz construction, their
    duals from the fiberwise pairing solve.  The union systems (X with the
    wavelets against their tilde mates) are certified Riesz and
    biorthogonal before returning.
    """
    if tol_bio is None:
        tol_bio = default_bio_tol(X.space)
    for fam in (X, Xt, Y, Yt):
        riesz_bounds(fam, tol_rank)
    ok, res = is_biorthogonal(X, Xt, tol_bio)
    if not ok:
        raise HypothesisFailure(f"X and Xt are not biorthogonal (residual {res:.3e})")
    ok, res = is_biorthogonal(Y, Yt, tol_bio)
    if not ok:
        raise HypothesisFailure(f"Y and Yt are not biorthogonal (residual {res:.3e})")
    if not is_contained(X, Y, tol_rank):
        raise NotContained("X's orbit span must sit inside Y's")
    if not is_contained(Xt, Yt, tol_rank):
        raise NotContained("Xt's orbit span must sit inside Yt's")
    r, s = len(X), len(Y)
    if r >= s:
        raise SizesEqual(f"need |X| < |Y|, got {r} >= {s}")
    space = X.space
    sampling, FY = fiber_tensor(Y)
    _, FYt = fiber_tensor(Yt)
    _, FX = fiber_tensor(X)
    _, FXt = fiber_tensor(Xt)
    W0 = _perp_intersection_field(space, sampling, FY, FXt, s - r, tol_rank)
    Wt0 = _perp_intersection_field(space, sampling, FYt, FX, s - r, tol_rank)
    gamma = oblique_riesz_wavelets(X, Y, W0, tol_rank)
    gamma_t = dual_family(gamma, Wt0, tol_rank)
    ok, pair_res = is_biorthogonal(gamma, gamma_t, tol_bio)
    if not ok:
        raise SingularPairing(f"constructed pair residual {pair_res:.3e} exceeds {tol_bio:.1e}")
    # union certification: Riesz for the fine spaces, jointly biorthogonal
    _, FG = fiber_tensor(gamma)
    _, FGt = fiber_tensor(gamma_t)
    union = _stack_families(space, sampling, FX, FG)
    union_t = _stack_families(space, sampling, FXt, FGt)
    riesz_bounds(union, tol_rank)
    riesz_bounds(union_t, tol_rank)
    _, union_res = is_biorthogonal(union, union_t, tol_bio)
    return BiorthogonalPair(gamma, gamma_t, pair_res, float(union_res))


def _stack_families(space, sampling, FA, FB):
    stacked = np.concatenate([FA, FB], axis=2)
    if space.exact:
        return family_from_fibers(space, sampling, stacked)
    return SampledFamily(space, sampling, stacked)
