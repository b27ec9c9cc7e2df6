"""Small dense linear-algebra helpers shared by the fiberwise constructions."""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .defaults import TOL_RANK_REL
from .errors import NotContained, SelectionObstruction


def matrix_rank(M: np.ndarray, rel: float = TOL_RANK_REL) -> int:
    """Rank with singular values below rel * max(sigma_max, 1) counted as zero."""
    M = np.asarray(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > rel * max(s[0], 1.0)))


def orth_columns(M: np.ndarray, rel: float = TOL_RANK_REL) -> np.ndarray:
    """Orthonormal basis of the column space via SVD (deterministic)."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    if M.shape[1] == 0:
        return np.zeros((M.shape[0], 0), dtype=np.complex128)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > rel * max(s[0], 1.0))) if s.size else 0
    return U[:, :r]


def projector(B: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the span of orthonormal columns B."""
    return B @ B.conj().T


def phase_normalize_columns(Q: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive.

    Ties break to the lowest index, which pins the phase convention.
    """
    out = np.array(Q, dtype=np.complex128, copy=True)
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        pivot = col[i]
        if abs(pivot) > 0:
            out[:, j] = col * (abs(pivot) / pivot)
    return out


def null_space_columns(M: np.ndarray, rel: float = TOL_RANK_REL) -> np.ndarray:
    """Orthonormal basis of the kernel via SVD rows beyond the rank."""
    M = np.asarray(M, dtype=np.complex128)
    cols = M.shape[1]
    if cols == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.complex128)
    _, s, Vh = np.linalg.svd(M)
    r = int(np.sum(s > rel * max(s[0], 1.0))) if s.size else 0
    return Vh[r:].conj().T


def complement_in_span(
    F_small: np.ndarray,
    F_big: np.ndarray,
    dim: int,
    rel: float = TOL_RANK_REL,
) -> np.ndarray:
    """Orthonormal basis of (span F_big) minus (span F_small), dimension ``dim``.

    The difference of the two orthogonal projectors is (numerically) the
    projector onto the complement; its range is extracted with a
    column-pivoted QR so the basis choice is deterministic.
    """
    n = F_big.shape[0]
    B_small = orth_columns(F_small, rel)
    B_big = orth_columns(F_big, rel)
    if B_big.shape[1] - B_small.shape[1] != dim:
        raise NotContained(
            f"fiber complement dimension {B_big.shape[1] - B_small.shape[1]} != expected {dim}"
        )
    if dim == 0:
        return np.zeros((n, 0), dtype=np.complex128)
    D = projector(B_big) - projector(B_small)
    Q, R, _ = scipy.linalg.qr(D, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    # D is a difference of nested projectors, so its spectrum sits near {0, 1}
    detected = int(np.sum(diag > 0.5 * max(diag[0], 1e-300)))
    if detected != dim:
        raise NotContained(
            f"complement projector rank {detected} != expected {dim}; "
            "containment is numerically inconsistent on this sampling"
        )
    return Q[:, :dim]


def procrustes_align(bases: np.ndarray, max_drift: float = 0.5) -> np.ndarray:
    """Rotate each basis onto its predecessor (orthogonal Procrustes).

    ``bases`` stacks per-grid-point orthonormal bases, shape (points, n, d).
    Raises SelectionObstruction when the best rotation still moves some
    column farther (in l2) than ``max_drift``: the sampled bundle is then
    too twisted for a trustworthy continuous selection.
    """
    out = np.array(bases, dtype=np.complex128, copy=True)
    if out.shape[0] <= 1 or out.shape[2] == 0:
        return out
    for t in range(1, out.shape[0]):
        overlap = out[t].conj().T @ out[t - 1]
        U, _, Vh = np.linalg.svd(overlap)
        out[t] = out[t] @ (U @ Vh)
        drift = float(np.linalg.norm(out[t] - out[t - 1], axis=0).max())
        if drift > max_drift:
            raise SelectionObstruction(
                f"basis drift {drift:.3g} exceeds {max_drift} between grid points "
                f"{t - 1} and {t}"
            )
    return out


def max_principal_angle(A: np.ndarray, B: np.ndarray, rel: float = TOL_RANK_REL) -> float:
    """Largest canonical angle between the column spans.

    Spans of unequal dimension report pi/2 (maximally apart); two empty
    spans agree at angle 0.
    """
    BA = orth_columns(A, rel)
    BB = orth_columns(B, rel)
    if BA.shape[1] != BB.shape[1]:
        return math.pi / 2
    if BA.shape[1] == 0:
        return 0.0
    angles = scipy.linalg.subspace_angles(BA, BB)
    return float(angles.max()) if angles.size else 0.0


def oblique_projector_matrix(
    B_onto: np.ndarray, B_along: np.ndarray, rel: float = TOL_RANK_REL
) -> np.ndarray:
    """Projector onto span(B_onto) along span(B_along), zero on the joint
    span's orthogonal complement."""
    n = B_onto.shape[0]
    S = np.hstack([B_along, B_onto])
    if S.shape[1] == 0:
        return np.zeros((n, n), dtype=np.complex128)
    coords = np.linalg.pinv(S, rcond=rel)
    return B_onto @ coords[B_along.shape[1]:, :]
