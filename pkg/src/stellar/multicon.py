"""Multiconstellation of a plane: per-block Majorana constellations plus the
gauge-fixed complex amplitudes tying the blocks together.

Each spin-j component of the decomposed Pluecker vector carries a
constellation (2j stars) and, after a canonical alignment procedure, a single
complex number z; the vector Z of all z's behaves as one extra "spectator"
spin state whose own constellation completes a faithful, rotation-covariant
picture of the plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .decomp import decompose_plane
from .grassmann import KFrame, KPlane
from .majorana import Constellation, constellation_of_state
from .spin_rep import (
    SpinLabel,
    SpinState,
    build_generators,
    geodesic_rotation,
    wigner_d,
)

#: Relative threshold for treating amplitudes/expectations as zero.
GAUGE_TOL = 1e-9


def _twice(x, name: str) -> int:
    t = 2 * x
    r = round(t)
    if abs(t - r) > 1e-9:
        raise ValueError(f"{name} must be integer or half-integer, got {x}")
    return int(r)


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """<j1 m1; j2 m2 | J M> in the Condon-Shortley convention (exact sum).

    Returns 0.0 whenever a selection rule fails (M != m1 + m2, triangle
    inequality, out-of-range m, or parity mismatch).
    """
    tj1, tm1 = _twice(j1, "j1"), _twice(m1, "m1")
    tj2, tm2 = _twice(j2, "j2"), _twice(m2, "m2")
    tJ, tM = _twice(J, "J"), _twice(M, "M")
    if tm1 + tm2 != tM:
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tM) > tJ:
        return 0.0
    if (tj1 + tm1) % 2 or (tj2 + tm2) % 2 or (tJ + tM) % 2:
        return 0.0
    if tJ < abs(tj1 - tj2) or tJ > tj1 + tj2 or (tj1 + tj2 + tJ) % 2:
        return 0.0

    def f(two_x: int) -> int:
        if two_x % 2:
            raise ValueError("internal parity error in factorial argument")
        return math.factorial(two_x // 2)

    norm = Fraction(tJ + 1)
    norm *= Fraction(
        f(tj1 + tj2 - tJ) * f(tj1 - tj2 + tJ) * f(-tj1 + tj2 + tJ),
        f(tj1 + tj2 + tJ + 2),
    )
    norm *= Fraction(
        f(tJ + tM) * f(tJ - tM) * f(tj1 - tm1) * f(tj1 + tm1)
        * f(tj2 - tm2) * f(tj2 + tm2)
    )
    t_lo = max(0, (tj2 - tJ - tm1) // 2, (tj1 + tm2 - tJ) // 2)
    t_hi = min(
        (tj1 + tj2 - tJ) // 2, (tj1 - tm1) // 2, (tj2 + tm2) // 2
    )
    total = Fraction(0)
    for t in range(t_lo, t_hi + 1):
        den = (
            math.factorial(t)
            * f(tj1 + tj2 - tJ - 2 * t)
            * f(tj1 - tm1 - 2 * t)
            * f(tj2 + tm2 - 2 * t)
            * f(tJ - tj2 + tm1 + 2 * t)
            * f(tJ - tj1 - tm2 + 2 * t)
        )
        total += Fraction((-1) ** t, den)
    return float(total) * math.sqrt(norm)


@lru_cache(maxsize=None)
def _tensor_op(two_j: int, ell: int, m: int) -> np.ndarray:
    """Polarization operator T_{lm} on the spin-j space (unit Frobenius norm).

    T_{lm} = sqrt((2l+1)/(2j+1)) sum_m' <j m'; l m | j m' + m>-type matrix
    elements, so Tr(T_{lm} T_{l'm'}^dagger) = delta delta.
    """
    dim = two_j + 1
    j = two_j / 2
    T = np.zeros((dim, dim), dtype=complex)
    factor = math.sqrt((2 * ell + 1) / dim)
    for col in range(dim):
        mm = j - col  # S_z eigenvalue of the column state
        mp = mm + m
        if abs(mp) > j + 1e-9:
            continue
        row = round(j - mp)
        T[row, col] = factor * clebsch_gordan(j, mm, ell, m, j, mp)
    T.setflags(write=False)
    return T


@dataclass(frozen=True)
class PolarizationComponents:
    """rho_{lm} = Tr(rho T_{lm}^dagger), l ascending, m descending l..-l."""

    two_j: int
    values: tuple  # of (ell, m, complex)

    def get(self, ell: int, m: int) -> complex:
        for l2, m2, v in self.values:
            if l2 == ell and m2 == m:
                return v
        raise KeyError((ell, m))


def polarization_components(rho: np.ndarray, s: SpinLabel) -> PolarizationComponents:
    """Expand a (not necessarily normalized) density matrix over T_{lm}."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (s.dim, s.dim):
        raise ValueError(f"rho must be {s.dim} x {s.dim}")
    vals = []
    for ell in range(0, s.two_s + 1):
        for m in range(ell, -ell - 1, -1):
            T = _tensor_op(s.two_s, ell, m)
            vals.append((ell, m, complex(np.vdot(T, r))))
    return PolarizationComponents(s.two_s, tuple(vals))


@dataclass(frozen=True)
class GaugeFixed:
    """Outcome of the alignment procedure on one spin-j component.

    z is None when the procedure does not apply (vanishing spin expectation
    or exact axial symmetry); the constellation of the original state is
    reported regardless.  For j = 1 the warning notes that a constellation
    plus one complex number cannot distinguish every state.
    """

    two_j: int
    z: complex | None
    constellation: Constellation
    applicable: bool
    reason: str | None
    spin1_warning: bool
    sev: np.ndarray
    selected_lm: tuple | None
    alpha: float | None
    beta: float | None
    aligned_polarization: PolarizationComponents | None


def gauge_fix_component(psi: SpinState) -> GaugeFixed:
    """Canonical complex amplitude of a spin-j component (j > 0).

    Rotate the spin expectation to +z, cancel the phase of the first
    non-axial polarization component by a diagonal S_z twist, and read off
    z = ||psi|| e^{i beta} from the first nonzero coefficient.
    """
    two_j = psi.s.two_s
    if two_j == 0:
        raise ValueError("gauge fixing applies to spin j > 0 components")
    nrm = psi.norm
    if nrm <= 1e-12:
        raise ValueError("cannot gauge-fix a zero component")
    constellation = constellation_of_state(psi)
    spin1_warning = two_j == 2
    ops = build_generators(psi.s)
    c = psi.coeffs
    sev = np.array(
        [(c.conj() @ S @ c).real for S in (ops.Sx, ops.Sy, ops.Sz)]
    )
    j = two_j / 2
    if np.linalg.norm(sev) <= GAUGE_TOL * j * nrm * nrm:
        return GaugeFixed(
            two_j, None, constellation, False, "vanishing spin expectation",
            spin1_warning, sev, None, None, None, None,
        )
    n = sev / np.linalg.norm(sev)
    D = wigner_d(psi.s, geodesic_rotation(n))
    psi1 = D.conj().T @ c  # inverse rotation: expectation now along +z
    rho1 = np.outer(psi1, psi1.conj())
    pol = polarization_components(rho1, psi.s)
    selected = None
    # Scan ell ascending, m descending within each ell, matching the storage
    # order of PolarizationComponents.  The residual-orbit quotient below
    # makes the final amplitude independent of this direction.
    for ell in range(1, two_j + 1):
        for m in range(ell, -ell - 1, -1):
            if m == 0:
                continue
            v = pol.get(ell, m)
            if abs(v) > GAUGE_TOL * nrm * nrm:
                selected = (ell, m, v)
                break
        if selected:
            break
    if selected is None:
        return GaugeFixed(
            two_j, None, constellation, False, "axial symmetry",
            spin1_warning, sev, None, None, None, pol,
        )
    ell0, m0, v0 = selected
    # alpha lives on [0, 2*pi) so the branch cut sits on the positive real
    # axis, away from negative-real selected components; noise that lands
    # just below the cut is folded back to 0, because a twist by 2*pi/m is
    # not the identity and would flip the phase of z.
    alpha = math.atan2(v0.imag, v0.real) % (2.0 * math.pi)
    if 2.0 * math.pi - alpha < 1e-9:
        alpha = 0.0
    m_values = psi.s.m_values()
    psi2 = np.exp(-1j * alpha * m_values / m0) * psi1
    mags = np.abs(psi2)
    lead_idx = int(np.nonzero(mags > 1e-12 * mags.max())[0][0])
    lead = psi2[lead_idx]
    beta0 = math.atan2(lead.imag, lead.real) % (2 * math.pi)
    # Making the selected polarization component real positive only fixes
    # the z-twist modulo 2*pi/|m0| (modulo 4*pi/|m0| for half-integer j,
    # where a 2*pi rotation contributes a global sign).  Frames that are
    # rotations of each other can land on different members of that residual
    # orbit, so quotient it out: of all residual twists, keep the one that
    # minimizes beta.  This leaves the amplitude invariant under rotations
    # of the input while reproducing the same value on symmetric states
    # whose leading coefficient is already real positive.
    m_lead = m_values[lead_idx]
    t_count = abs(m0) if two_j % 2 == 0 else 2 * abs(m0)
    beta = None
    for t in range(t_count):
        cand = (beta0 - 2.0 * math.pi * t * m_lead / m0) % (2.0 * math.pi)
        if 2 * math.pi - cand < 1e-9:
            cand = 0.0
        if beta is None or cand < beta:
            beta = cand
    z = nrm * complex(math.cos(beta), math.sin(beta))
    return GaugeFixed(
        two_j, z, constellation, True, None, spin1_warning,
        sev, (ell0, m0), alpha, beta, pol,
    )


def spectator_constellation(z_values) -> Constellation:
    """Constellation of the spectator state built from the amplitudes Z.

    Z with L entries is read as a spin-(L-1)/2 ket (entries ordered like
    m = s_Z, ..., -s_Z); a single entry has spin 0 and no stars.
    """
    Z = np.asarray(z_values, dtype=complex)
    if Z.ndim != 1 or len(Z) == 0:
        raise ValueError("Z must be a nonempty vector")
    if len(Z) == 1:
        return Constellation((), 0)
    return constellation_of_state(SpinState(SpinLabel(len(Z) - 1), Z))


@dataclass(frozen=True)
class ComponentReport:
    """One spin-j block of a multiconstellation."""

    two_j: int
    copy_index: int
    amplitude: complex | None
    absent: bool
    constellation: Constellation | None
    gauge: GaugeFixed | None
    flags: tuple


@dataclass(frozen=True)
class Multiconstellation:
    """All block constellations plus the spectator data of a plane.

    z_values (ordered two_j descending, copies ascending) and the spectator
    constellation are None when any block's gauge fixing was not applicable;
    partial data is never silently invented.
    """

    s: SpinLabel
    k: int
    components: tuple
    z_values: tuple | None
    spectator: Constellation | None
    flags: tuple


def multiconstellation(plane) -> Multiconstellation:
    """Decompose a plane and gauge-fix every spin block.

    Accepts a KPlane or KFrame; the representative's overall phase is part
    of the gauge, so rotating the rows coherently rotates every piece of the
    answer without re-fixing phases.
    """
    frame = plane.frame if isinstance(plane, KPlane) else plane
    if not isinstance(frame, KFrame):
        raise TypeError("expected a KPlane or KFrame")
    comps = decompose_plane(frame)
    reports = []
    z_ok = True
    all_flags = []
    for comp in comps:
        nrm = comp.state.norm
        if nrm <= GAUGE_TOL:
            reports.append(
                ComponentReport(
                    comp.two_j, comp.copy_index, 0.0, True, None, None,
                    ("absent",),
                )
            )
            continue
        if comp.two_j == 0:
            reports.append(
                ComponentReport(
                    comp.two_j, comp.copy_index, complex(comp.state.coeffs[0]),
                    False, Constellation((), 0), None, (),
                )
            )
            continue
        g = gauge_fix_component(comp.state)
        flags = []
        if not g.applicable:
            flags.append(f"gauge not applicable: {g.reason}")
            z_ok = False
        if g.spin1_warning:
            flags.append("spin-1 block: z and constellation underdetermine it")
        reports.append(
            ComponentReport(
                comp.two_j, comp.copy_index, g.z, False, g.constellation,
                g, tuple(flags),
            )
        )
        all_flags.extend(flags)
    if z_ok:
        z_values = tuple(
            r.amplitude if r.amplitude is not None else 0.0 for r in reports
        )
        spectator = (
            spectator_constellation(z_values) if len(z_values) >= 1 else None
        )
    else:
        z_values = None
        spectator = None
    return Multiconstellation(
        frame.s, frame.k, tuple(reports), z_values, spectator, tuple(all_flags)
    )
