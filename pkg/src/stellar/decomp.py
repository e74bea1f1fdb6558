"""SU(2) structure of the k-th wedge power of the spin-s space.

The Pluecker image of a (s, k) plane lives in the wedge space of dimension
C(2s+1, k), which splits into spin-j blocks with multiplicities m_j.  This
module computes those multiplicities by three independent routes (character
inner products, a generating-function quotient, and explicit highest-weight
construction), and builds the unitary change of basis to the block-diagonal
form, with a canonical, rotation-independent choice inside degenerate
j-sectors.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh, null_space

from .grassmann import KFrame, KPlane, multi_indices, plucker
from .spin_rep import RotationSpec, SpinLabel, SpinState, wigner_d

#: Singular values below this (relative) are treated as zero.
RANK_TOL = 1e-10

#: Eigenvalue clusters tighter than this count as ties during refinement.
DEGENERACY_TOL = 1e-9

#: Wedge dimension above which block-diagonalizing bases are not cached.
BD_CACHE_DIM_LIMIT = 120


def two_s_max(s: SpinLabel, k: int) -> int:
    """Twice the largest spin in the wedge decomposition, k(2s+1-k)."""
    return k * (s.dim - k)


# ---------------------------------------------------------------------------
# wedge-space generators


@dataclass(frozen=True)
class WedgeGenerators:
    """Spin generators acting on the k-th wedge power (dense matrices)."""

    s: SpinLabel
    k: int
    Sz: np.ndarray
    Splus: np.ndarray
    Sminus: np.ndarray


@lru_cache(maxsize=None)
def _wedge_lowering_terms(two_s: int, k: int):
    """(dst, src, coeff) triples of the lowering operator on wedge indices.

    Lowering sends the single index i to i + 1 (m decreases by one) with the
    usual ladder coefficient, summed over the k slots; terms that would
    duplicate an index vanish, and sorted order is preserved, so no
    antisymmetrization signs appear.
    """
    n = two_s + 1
    s = two_s / 2
    idxs = multi_indices(n, k)
    pos = {I: p for p, I in enumerate(idxs)}
    dst, src, cf = [], [], []
    for p, I in enumerate(idxs):
        occupied = set(I)
        for t, i in enumerate(I):
            if i + 1 < n and (i + 1) not in occupied:
                m = s - i
                dst.append(pos[I[:t] + (i + 1,) + I[t + 1 :]])
                src.append(p)
                cf.append(math.sqrt(s * (s + 1) - m * (m - 1)))
    return np.array(dst), np.array(src), np.array(cf)


def _wedge_two_m(two_s: int, k: int) -> np.ndarray:
    """Twice the S_z eigenvalue of each wedge basis vector."""
    idxs = multi_indices(two_s + 1, k)
    return np.array([sum(two_s - 2 * i for i in I) for I in idxs])


def wedge_generators(s: SpinLabel, k: int) -> WedgeGenerators:
    dst, src, cf = _wedge_lowering_terms(s.two_s, k)
    dim = math.comb(s.dim, k)
    Sminus = np.zeros((dim, dim), dtype=complex)
    if len(dst):
        np.add.at(Sminus, (dst, src), cf)
    Splus = Sminus.conj().T.copy()
    Sz = np.diag(_wedge_two_m(s.two_s, k) / 2).astype(complex)
    for M in (Sz, Splus, Sminus):
        M.setflags(write=False)
    return WedgeGenerators(s, k, Sz, Splus, Sminus)


def wedge_rep(s: SpinLabel, k: int, r: RotationSpec) -> np.ndarray:
    """The rotation on the wedge space: the k-th compound of wigner_d."""
    D = wigner_d(s, r)
    sel = np.array(multi_indices(s.dim, k))
    sub = D[sel[:, None, :, None], sel[None, :, None, :]]
    return np.linalg.det(sub)


# ---------------------------------------------------------------------------
# characters


def char_spin(two_j: int, alpha: float) -> float:
    """Character of the spin-j irrep at rotation angle alpha.

    Computed as the cosine sum over the weights, which is exact at angles
    where the sin((j+1/2)a)/sin(a/2) form loses all its digits.
    """
    return float(sum(math.cos(tm * alpha / 2) for tm in range(-two_j, two_j + 1, 2)))


@lru_cache(maxsize=None)
def partition_multiplicities(k: int) -> tuple[tuple[int, ...], ...]:
    """All (m_1, ..., m_k) with sum(r * m_r) = k, lexicographic order."""
    out: list[tuple[int, ...]] = []

    def rec(r: int, remaining: int, cur: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(cur + [0] * (k - len(cur))))
            return
        if r > k:
            return
        for c in range(remaining // r + 1):
            rec(r + 1, remaining - c * r, cur + [c])

    rec(1, k, [])
    return tuple(out)


def char_sk(s: SpinLabel, k: int, alpha: float, method: str = "recursion") -> float:
    """Character of the wedge-power representation at angle alpha."""
    if not 0 <= k <= s.dim:
        raise ValueError("k out of range")
    if method == "recursion":
        memo: dict[int, float] = {0: 1.0}

        def rec(kk: int) -> float:
            if kk in memo:
                return memo[kk]
            acc = 0.0
            for m in range(1, kk + 1):
                acc += (-1) ** (m - 1) * char_spin(s.two_s, m * alpha) * rec(kk - m)
            memo[kk] = acc / kk
            return memo[kk]

        return rec(k)
    if method == "newton":
        total = 0.0
        for M in partition_multiplicities(k):
            weight = sum(M)
            z = 1.0
            prod = 1.0
            for r, mr in enumerate(M, start=1):
                if mr:
                    z *= math.factorial(mr) * r**mr
                    prod *= char_spin(s.two_s, r * alpha) ** mr
            total += (-1) ** (k - weight) * prod / z
        return total
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# multiplicity tables


@dataclass(frozen=True)
class MultiplicityTable:
    """Multiplicities m_j of spin-j blocks, keyed by two_j descending to 0."""

    s: SpinLabel
    k: int
    entries: tuple[tuple[int, int], ...]

    def multiplicity(self, two_j: int) -> int:
        for tj, m in self.entries:
            if tj == two_j:
                return m
        return 0

    def nonzero(self) -> tuple[tuple[int, int], ...]:
        return tuple((tj, m) for tj, m in self.entries if m)

    def as_dict(self) -> dict:
        return dict(self.entries)

    def total_dimension(self) -> int:
        return sum((tj + 1) * m for tj, m in self.entries)


def _table_from_map(s: SpinLabel, k: int, mmap: dict) -> MultiplicityTable:
    tsm = two_s_max(s, k)
    entries = tuple((tj, int(mmap.get(tj, 0))) for tj in range(tsm, -1, -1))
    return MultiplicityTable(s, k, entries)


def _poly_mul_int(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_div_exact(a: list, b: list) -> list:
    """Quotient of integer polynomials (b monic); the division must be exact."""
    a = list(a)
    dq = len(a) - len(b)
    if dq < 0:
        raise ArithmeticError("inexact polynomial division")
    q = [0] * (dq + 1)
    for i in range(dq, -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return q


def multiplicities_genfun(s: SpinLabel, k: int) -> MultiplicityTable:
    """Multiplicities as coefficients of a closed-form rational function.

    In the variable x the table is the non-negative part of

        (1 - x^{-1}) prod_{r=1}^{k} (x^{s+1} - x^{r-s-1}) / (x^r - 1),

    read off at exponents j = s_max, ..., 0.  Everything is carried out in
    y = x^{1/2} with exact integer coefficients, so half-integer spins and
    arbitrary sizes need no floating point at all.
    """
    if not 1 <= k <= s.dim:
        raise ValueError("k out of range")
    two_s = s.two_s
    num_off, num = 0, [1]
    den = [1]
    for r in range(1, k + 1):
        e1 = two_s + 2
        e2 = 2 * r - two_s - 2
        lo, hi = min(e1, e2), max(e1, e2)
        f = [0] * (hi - lo + 1)
        f[e1 - lo] += 1
        f[e2 - lo] -= 1
        num = _poly_mul_int(num, f)
        num_off += lo
        g = [0] * (2 * r + 1)
        g[0] = -1
        g[2 * r] = 1
        den = _poly_mul_int(den, g)
    num = _poly_mul_int(num, [-1, 0, 1])  # times (1 - y^{-2})
    num_off -= 2
    q = _poly_div_exact(num, den)
    mmap = {}
    for tj in range(two_s_max(s, k), -1, -1):
        idx = tj - num_off
        if 0 <= idx < len(q):
            mmap[tj] = q[idx]
    return _table_from_map(s, k, mmap)


def multiplicities_char(s: SpinLabel, k: int) -> MultiplicityTable:
    """Multiplicities from exact character inner products.

    The wedge character is the elementary symmetric polynomial e_k of the
    weights q^{2m}, built by an integer dynamic program; pairing with the
    spin-j character reduces to two window sums over its coefficients.
    """
    if not 1 <= k <= s.dim:
        raise ValueError("k out of range")
    two_s = s.two_s
    n = s.dim
    # intermediate e_j can reach exponents beyond the final +-two_s_max grid
    j_star = min(k, n // 2)
    j_star2 = min(k, (n + 1) // 2)
    reach = max(j_star * (n - j_star), j_star2 * (n - j_star2))
    width = 2 * reach + 1
    E = np.zeros((k + 1, width), dtype=np.int64)
    E[0, reach] = 1
    for i in range(n):
        tm = two_s - 2 * i
        for j in range(min(k, i + 1), 0, -1):
            if tm >= 0:
                E[j, tm:] += E[j - 1, : width - tm]
            else:
                E[j, :tm] += E[j - 1, -tm:]
    chi = E[k]
    tsm = two_s_max(s, k)

    def window(lo: int, hi: int, parity: int) -> int:
        lo = max(lo, -reach)
        hi = min(hi, reach)
        total = 0
        for e in range(lo, hi + 1):
            if (e - parity) % 2 == 0:
                total += int(chi[e + reach])
        return total

    mmap = {}
    for tj in range(tsm, -1, -1):
        c0 = window(-tj, tj, tj % 2)
        c2 = window(2 - tj, 2 + tj, tj % 2)
        mmap[tj] = c0 - c2
    return _table_from_map(s, k, mmap)


def multiplicities_from_basis(s: SpinLabel, k: int) -> MultiplicityTable:
    """Multiplicities counted off the explicit highest-weight construction."""
    basis = bd_basis(s, k)
    mmap: dict[int, int] = {}
    for mult in basis.layout:
        mmap[mult.two_j] = mmap.get(mult.two_j, 0) + 1
    return _table_from_map(s, k, mmap)


# ---------------------------------------------------------------------------
# block-diagonalizing basis


@dataclass(frozen=True)
class Multiplet:
    """One spin-j block: which rows of U hold its 2j+1 components."""

    two_j: int
    copy_index: int
    row_range: tuple[int, int]


@dataclass(frozen=True)
class BDBasis:
    """Unitary U block-diagonalizing the wedge representation.

    Rows are grouped per multiplet (two_j descending, copies ascending); for
    every rotation r, U @ wedge_rep(r) @ U^dagger is block diagonal with
    spin-j rotation matrices on the diagonal.  degenerate_two_j lists
    j-sectors where the canonical refinement still hit a residual tie and
    fell back to a deterministic coordinate rule.
    """

    s: SpinLabel
    k: int
    U: np.ndarray
    layout: tuple[Multiplet, ...]
    degenerate_two_j: tuple[int, ...]

    def multiplicity_table(self) -> MultiplicityTable:
        mmap: dict[int, int] = {}
        for mult in self.layout:
            mmap[mult.two_j] = mmap.get(mult.two_j, 0) + 1
        return _table_from_map(self.s, self.k, mmap)


@lru_cache(maxsize=None)
def _qpower_diagonals(two_s: int, k: int, max_power: int) -> np.ndarray:
    """Diagonals of sum_r (S_z of slot r)^n in the wedge basis, n = 2..max."""
    idxs = multi_indices(two_s + 1, k)
    out = np.zeros((max_power + 1, len(idxs)))
    for p, I in enumerate(idxs):
        ms = [(two_s - 2 * i) / 2 for i in I]
        for n_pow in range(2, max_power + 1):
            out[n_pow, p] = sum(m**n_pow for m in ms)
    return out


def _phase_fixed(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first nonzero entry is real positive."""
    mags = np.abs(v)
    top = mags.max()
    nz = np.nonzero(mags > 1e-12 * top)[0]
    lead = v[nz[0]]
    return v * (lead.conjugate() / abs(lead))


def canonical_degenerate_basis(
    s: SpinLabel, k: int, two_j: int, vectors
) -> tuple[list, bool]:
    """Rotation-independent ordered basis of a degenerate j-sector.

    Successively maximizes the expectation of Q^(2) = sum_r (S_z^(r))^2
    (diagonal in the wedge basis), breaking eigenvalue ties with higher
    powers Q^(3), ..., Q^(k); any residual tie is resolved by a deterministic
    coordinate rule and reported through the returned flag.
    """
    V = np.array(vectors, dtype=complex).T
    if V.ndim != 2 or V.shape[1] == 0:
        raise ValueError("need at least one vector")
    # make sure the working columns are orthonormal
    q, _ = np.linalg.qr(V)
    work = q[:, : V.shape[1]]
    max_power = max(2, k)
    diags = _qpower_diagonals(s.two_s, k, max_power)
    out = []
    flagged = False
    while work.shape[1] > 0:
        if work.shape[1] == 1:
            v = work[:, 0]
        else:
            cand = work
            for n_pow in range(2, max_power + 1):
                A = cand.conj().T @ (diags[n_pow][:, None] * cand)
                A = (A + A.conj().T) / 2
                evals, evecs = eigh(A)
                top = evals[-1]
                tol = DEGENERACY_TOL * max(1.0, abs(top))
                sel = evals >= top - tol
                cand = cand @ evecs[:, sel]
                if cand.shape[1] == 1:
                    break
            if cand.shape[1] > 1:
                flagged = True
                # fall back: first coordinate with nonzero projection wins
                B, _ = np.linalg.qr(cand)
                B = B[:, : cand.shape[1]]
                v = None
                for c in range(B.shape[0]):
                    p = B @ B[c, :].conj()
                    nrm = np.linalg.norm(p)
                    if nrm > 1e-6:
                        v = p / nrm
                        break
                if v is None:
                    raise ArithmeticError("degenerate sector has no usable basis")
            else:
                v = cand[:, 0]
        v = _phase_fixed(v / np.linalg.norm(v))
        out.append(v)
        coords = work.conj().T @ v
        if work.shape[1] == 1:
            break
        keep = null_space(coords[None, :].conj(), rcond=RANK_TOL)
        work = work @ keep
    return out, flagged


_BD_CACHE: dict = {}
_BD_LOCK = threading.Lock()


def bd_basis(s: SpinLabel, k: int) -> BDBasis:
    """Block-diagonalizing basis, cached for small wedge dimensions."""
    key = (s.two_s, k)
    with _BD_LOCK:
        hit = _BD_CACHE.get(key)
    if hit is not None:
        return hit
    basis = _build_bd(s, k)
    if math.comb(s.dim, k) <= BD_CACHE_DIM_LIMIT:
        with _BD_LOCK:
            _BD_CACHE[key] = basis
    return basis


def _build_bd(s: SpinLabel, k: int) -> BDBasis:
    if not 1 <= k <= s.dim:
        raise ValueError("k out of range")
    n = s.dim
    dim = math.comb(n, k)
    two_m = _wedge_two_m(s.two_s, k)
    tsm = two_s_max(s, k)
    level_pos = {
        tm: np.nonzero(two_m == tm)[0] for tm in range(tsm, -tsm - 1, -2)
    }
    dst, src, cf = _wedge_lowering_terms(s.two_s, k)

    def lower(v: np.ndarray) -> np.ndarray:
        w = np.zeros(dim, dtype=complex)
        if len(dst):
            np.add.at(w, dst, cf * v[src])
        return w

    # each multiplet: [two_j, list of vectors for m = j, j-1, ...]
    multiplets: list[list] = []
    flagged: list[int] = []
    for two_mu in range(tsm, -tsm - 1, -2):
        pos = level_pos[two_mu]
        lowered = []
        for rec in multiplets:
            two_j = rec[0]
            if two_j >= two_mu + 2 >= -two_j + 2:
                jj = two_j / 2
                mm = (two_mu + 2) / 2  # the m being lowered from
                coeff = math.sqrt(jj * (jj + 1) - mm * (mm - 1))
                w = lower(rec[1][-1]) / coeff
                rec[1].append(w)
                lowered.append(w)
        if two_mu < 0:
            continue
        n_new = len(pos) - len(lowered)
        if n_new < 0:
            raise ArithmeticError("level dimension bookkeeping failed")
        if n_new == 0:
            continue
        if lowered:
            L = np.array([w[pos] for w in lowered])
            ns = null_space(L.conj(), rcond=RANK_TOL)
        else:
            ns = np.eye(len(pos), dtype=complex)
        if ns.shape[1] != n_new:
            raise ArithmeticError(
                f"highest-weight space at 2m={two_mu} has numerical rank "
                f"{ns.shape[1]}, expected {n_new}"
            )
        new_full = []
        for t in range(n_new):
            v = np.zeros(dim, dtype=complex)
            v[pos] = ns[:, t]
            new_full.append(v)
        if n_new > 1:
            new_full, flag = canonical_degenerate_basis(s, k, two_mu, new_full)
            if flag:
                flagged.append(two_mu)
        new_full = [_phase_fixed(v / np.linalg.norm(v)) for v in new_full]
        for v in new_full:
            multiplets.append([two_mu, [v]])
    # multiplets were created in descending two_j order; copies keep their
    # canonical order within each level
    U = np.zeros((dim, dim), dtype=complex)
    layout = []
    row = 0
    copy_counter: dict[int, int] = {}
    for rec in multiplets:
        two_j = rec[0]
        vecs = rec[1]
        if len(vecs) != two_j + 1:
            raise ArithmeticError("incomplete multiplet ladder")
        copy = copy_counter.get(two_j, 0)
        copy_counter[two_j] = copy + 1
        for v in vecs:
            U[row] = v.conj()
            row += 1
        layout.append(Multiplet(two_j, copy, (row - len(vecs), row)))
    if row != dim:
        raise ArithmeticError("block layout does not exhaust the wedge space")
    U.setflags(write=False)
    return BDBasis(s, k, U, tuple(layout), tuple(sorted(set(flagged))))


# ---------------------------------------------------------------------------
# plane decomposition


@dataclass(frozen=True)
class ComponentState:
    """One spin-j component of a decomposed Pluecker vector."""

    two_j: int
    copy_index: int
    state: SpinState


def decompose_plane(plane) -> list[ComponentState]:
    """Spin-j components of the normalized Pluecker vector of a plane.

    Accepts a KPlane or a bare KFrame; the frame's own overall scale and
    phase fix the (gauge-dependent) phases of the components, so rotating
    the rows coherently transforms every block by its spin-j rotation.
    """
    frame = plane.frame if isinstance(plane, KPlane) else plane
    if not isinstance(frame, KFrame):
        raise TypeError("expected a KPlane or KFrame")
    basis = bd_basis(frame.s, frame.k)
    P = plucker(frame).comps
    P = P / np.linalg.norm(P)
    psi = basis.U @ P
    out = []
    for mult in basis.layout:
        lo, hi = mult.row_range
        out.append(
            ComponentState(
                mult.two_j,
                mult.copy_index,
                SpinState(SpinLabel(mult.two_j), psi[lo:hi]),
            )
        )
    return out
