"""k-frames and k-planes in spin-s space: Pluecker embedding, inner products,
spin expectation values, coherent planes.

A k-frame is a k x (2s+1) matrix of row spin states spanning a k-plane.  The
Pluecker vector collects the k x k minors over lexicographically ordered
column multi-indices; a k-plane is stored through its reduced-echelon
("standard form") representative whose pivot minor is the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.linalg import null_space

from .spin_rep import (
    RotationSpec,
    SpinLabel,
    SpinState,
    build_generators,
    geodesic_rotation,
    wigner_d,
)

#: Relative singular-value / minor threshold for rank and pivot decisions.
RANK_TOL = 1e-10


@lru_cache(maxsize=None)
def multi_indices(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All size-k subsets of range(n) in lexicographic order."""
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def multi_index_positions(n: int, k: int) -> dict:
    """Map from multi-index tuple to its lexicographic position."""
    return {I: p for p, I in enumerate(multi_indices(n, k))}


@dataclass(frozen=True)
class KFrame:
    """k linearly independent spin-s row states (a k x (2s+1) matrix)."""

    s: SpinLabel
    k: int
    rows: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.s.dim:
            raise ValueError(f"k must lie in 1..{self.s.dim}")
        r = np.array(self.rows, dtype=complex)
        if r.shape != (self.k, self.s.dim):
            raise ValueError(
                f"rows must have shape ({self.k}, {self.s.dim}), got {r.shape}"
            )
        if not np.all(np.isfinite(r)):
            raise ValueError("rows must be finite")
        sv = np.linalg.svd(r, compute_uv=False)
        if sv[-1] <= RANK_TOL * sv[0]:
            raise ValueError("rows are rank deficient: not a k-frame")
        r.setflags(write=False)
        object.__setattr__(self, "rows", r)

    @property
    def k_perp(self) -> int:
        """Codimension 2s + 1 - k."""
        return self.s.dim - self.k


@dataclass(frozen=True)
class KPlane:
    """A point of the Grassmannian, held by its standard-form frame."""

    frame: KFrame
    pivot_columns: tuple[int, ...]


@dataclass(frozen=True)
class PluckerVector:
    """k x k minors over lexicographic column multi-indices."""

    s: SpinLabel
    k: int
    comps: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.comps, dtype=complex)
        want = math.comb(self.s.dim, self.k)
        if c.shape != (want,):
            raise ValueError(f"expected {want} components, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "comps", c)

    def index_map(self) -> tuple[tuple[int, ...], ...]:
        return multi_indices(self.s.dim, self.k)

    @property
    def is_degenerate(self) -> bool:
        return not np.any(self.comps)


def plucker(frame: KFrame) -> PluckerVector:
    """All k x k minors of the frame, lexicographically ordered."""
    idxs = multi_indices(frame.s.dim, frame.k)
    mats = np.stack([frame.rows[:, I] for I in idxs])
    return PluckerVector(frame.s, frame.k, np.linalg.det(mats))


def standard_form(frame: KFrame) -> KPlane:
    """Reduced representative: identity on the pivot columns.

    Pivots are the lexicographically first column multi-index whose minor has
    modulus at least RANK_TOL times the largest minor.
    """
    P = plucker(frame).comps
    mags = np.abs(P)
    top = mags.max()
    if top == 0.0:
        raise ValueError("frame is degenerate: all minors vanish")
    pos = int(np.nonzero(mags >= RANK_TOL * top)[0][0])
    pivots = multi_indices(frame.s.dim, frame.k)[pos]
    A = frame.rows[:, pivots]
    rep = np.linalg.solve(A, frame.rows)
    rep[:, pivots] = np.eye(frame.k)  # exact identity on the pivot block
    return KPlane(KFrame(frame.s, frame.k, rep), pivots)


def frame_inner(v: KFrame, w: KFrame) -> complex:
    """det(conj(V) W^T): the frame inner product (Cauchy-Binet pairs it with
    the Pluecker dot product)."""
    if v.s != w.s or v.k != w.k:
        raise ValueError("frames must share (s, k)")
    return complex(np.linalg.det(v.rows.conj() @ w.rows.T))


def plane_inner(p1: KPlane, p2: KPlane) -> float:
    """Normalized squared overlap |<V|W>|^2 / (<V|V> <W|W>) in [0, 1]."""
    g11 = frame_inner(p1.frame, p1.frame).real
    g22 = frame_inner(p2.frame, p2.frame).real
    g12 = frame_inner(p1.frame, p2.frame)
    if g11 <= 0 or g22 <= 0:
        raise ValueError("degenerate plane in inner product")
    val = (abs(g12) ** 2) / (g11 * g22)
    return float(min(1.0, max(0.0, val)))


def plucker_residual(P: PluckerVector) -> float:
    """Largest normalized violation of the quadratic Pluecker relations.

    Zero (to tolerance) iff P is a wedge of k vectors; the zero vector
    returns 0.0 and is reported through P.is_degenerate instead.
    """
    c = P.comps
    norm2 = float(np.vdot(c, c).real)
    if norm2 == 0.0:
        return 0.0
    n = P.s.dim
    k = P.k
    pos_k = multi_index_positions(n, k)
    worst = 0.0
    for I in multi_indices(n, k - 1):
        in_I = set(I)
        for J in multi_indices(n, k + 1):
            acc = 0j
            for t, j in enumerate(J):
                if j in in_I:
                    continue
                # insert j into sorted I; moving it from the end costs a sign
                insert_at = sum(1 for i in I if i < j)
                sign_ins = (-1) ** (k - 1 - insert_at)
                sign_rem = (-1) ** t
                left = pos_k[tuple(sorted(I + (j,)))]
                right = pos_k[J[:t] + J[t + 1 :]]
                acc += sign_ins * sign_rem * c[left] * c[right]
            worst = max(worst, abs(acc) / norm2)
    return worst


def sev(plane: KPlane) -> np.ndarray:
    """Total spin expectation sum_i <v_i|S|v_i> over an orthonormal basis."""
    rows = _orthonormalized(plane.frame.rows)
    ops = build_generators(plane.frame.s)
    out = np.empty(3)
    for a, S in enumerate((ops.Sx, ops.Sy, ops.Sz)):
        out[a] = sum((r.conj() @ S @ r).real for r in rows)
    return out


def _orthonormalized(rows: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the rows."""
    q = np.array(rows, dtype=complex)
    for i in range(q.shape[0]):
        for j in range(i):
            q[i] -= (q[j].conj() @ q[i]) * q[j]
        nrm = np.linalg.norm(q[i])
        if nrm <= 1e-14:
            raise ValueError("rows are numerically dependent")
        q[i] /= nrm
    return q


def coherent_plane(s: SpinLabel, k: int, n) -> KPlane:
    """Span of the k highest-weight states along the direction n.

    Rows are the rotated |s,s>, ..., |s,s-k+1> with the geodesic rotation
    carrying +z to n, so every member state has at least 2s+1-k stars at n.
    """
    D = wigner_d(s, geodesic_rotation(n))
    rows = D[:, :k].T
    return standard_form(KFrame(s, k, rows))


def rotate_frame(frame: KFrame, r: RotationSpec) -> KFrame:
    """Row states rotated by D(r); no re-reduction, so phases are coherent."""
    D = wigner_d(frame.s, r)
    return KFrame(frame.s, frame.k, frame.rows @ D.T)


def rotate_plane(plane: KPlane, r: RotationSpec) -> KPlane:
    return standard_form(rotate_frame(plane.frame, r))


def orthogonal_complement(plane: KPlane) -> KPlane:
    """The (2s+1-k)-plane of states orthogonal to every state of the plane."""
    rows = plane.frame.rows
    comp = null_space(rows.conj()).T
    return standard_form(KFrame(plane.frame.s, rows.shape[1] - rows.shape[0], comp))


def row_states(frame: KFrame) -> list[SpinState]:
    return [SpinState(frame.s, r) for r in frame.rows]
