"""Principal polynomial and principal constellation of a spin-s k-plane.

Three independent routes compute the same degree-k(2s+1-k) polynomial (up to
scale): the Wronskian determinant of the row polynomials, coherent-state
overlap sampling with interpolation, and the Majorana polynomial of the
plane's top spin block.  Its roots projected to the sphere are the plane's
principal constellation: exactly the directions n whose antipodal coherent
plane fails to be transversal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decomp import decompose_plane, two_s_max
from .grassmann import KFrame, KPlane, standard_form
from .majorana import (
    ComplexPolynomial,
    Constellation,
    constellation_of_polynomial,
    majorana_polynomial,
    stereo_to_sphere,
)
from .spin_rep import SpinLabel, SpinState, geodesic_rotation, wigner_d

#: Relative size below which trailing Wronskian coefficients must cancel.
TRUNCATION_TOL = 1e-6


@dataclass(frozen=True)
class PrincipalResult:
    """Principal polynomial and its constellation, tagged with the route."""

    route: str
    polynomial: ComplexPolynomial
    constellation: Constellation


def _frame_of(plane) -> KFrame:
    if isinstance(plane, KPlane):
        return plane.frame
    if isinstance(plane, KFrame):
        return plane
    raise TypeError("expected a KPlane or KFrame")


def _poly_derivative(c: np.ndarray) -> np.ndarray:
    if len(c) == 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, len(c))


def _det_poly(entries: list) -> np.ndarray:
    """Determinant of a k x k matrix of coefficient arrays.

    Laplace expansion over column subsets with memoization: exact in the
    coefficients, no polynomial division needed.
    """
    k = len(entries)
    memo: dict = {}

    def minor(cols: tuple) -> np.ndarray:
        if not cols:
            return np.ones(1, dtype=complex)
        if cols in memo:
            return memo[cols]
        row = k - len(cols)
        acc = None
        for t, ccol in enumerate(cols):
            term = np.convolve(entries[row][ccol], minor(cols[:t] + cols[t + 1 :]))
            if t % 2:
                term = -term
            acc = term if acc is None else _padded_add(acc, term)
        memo[cols] = acc
        return acc

    return minor(tuple(range(k)))


def _padded_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] += b
    return out


def principal_wronskian(plane) -> PrincipalResult:
    """Principal polynomial as the Wronskian of the row polynomials.

    W(zeta) = det [ d^r P_i / d zeta^r ], rows i = 1..k, columns r = 0..k-1;
    coefficients above the nominal degree cancel identically and are
    truncated after a cancellation check.
    """
    frame = _frame_of(plane)
    k = frame.k
    d_nom = two_s_max(frame.s, k)
    polys = []
    for r in frame.rows:
        base = majorana_polynomial(SpinState(frame.s, r)).coeffs
        derivs = [np.array(base)]
        for _ in range(k - 1):
            derivs.append(_poly_derivative(derivs[-1]))
        polys.append(derivs)
    det = _det_poly(polys)
    top = float(np.max(np.abs(det)))
    if len(det) > d_nom + 1:
        tail = float(np.max(np.abs(det[d_nom + 1 :])))
        if tail > TRUNCATION_TOL * top:
            raise ArithmeticError(
                "Wronskian coefficients above the nominal degree failed to cancel"
            )
        det = det[: d_nom + 1]
    if len(det) < d_nom + 1:
        det = np.concatenate([det, np.zeros(d_nom + 1 - len(det), dtype=complex)])
    poly = ComplexPolynomial(det, d_nom)
    return PrincipalResult("wronskian", poly, constellation_of_polynomial(poly))


def principal_top_component(plane) -> PrincipalResult:
    """Majorana polynomial of the plane's highest-spin block."""
    frame = _frame_of(plane)
    comps = decompose_plane(frame)
    top = comps[0]
    if top.two_j != two_s_max(frame.s, frame.k):
        raise ArithmeticError("block layout is missing the top spin sector")
    if top.state.norm <= 1e-12:
        raise ArithmeticError(
            "top spin component vanishes; principal polynomial undefined "
            "through this route"
        )
    poly = majorana_polynomial(top.state)
    return PrincipalResult("top", poly, constellation_of_polynomial(poly))


def _coherent_chart_rows(s: SpinLabel, k: int, n) -> np.ndarray:
    """Rows of the coherent plane at n, reduced on the first k columns."""
    D = wigner_d(s, geodesic_rotation(n))
    rows = D[:, :k].T
    A = rows[:, :k]
    if abs(np.linalg.det(A)) < 1e-10:
        raise _ChartSingular()
    return np.linalg.solve(A, rows)


class _ChartSingular(Exception):
    pass


def principal_sampled(plane) -> PrincipalResult:
    """Principal polynomial from coherent-plane overlaps.

    zeta^{k k'} det( conj(V_{-n(zeta)}) W^T ), with V_{-n} the first-columns
    chart representative of the antipodal coherent plane, is a polynomial of
    the nominal degree; sample it at scaled roots of unity and solve the
    Vandermonde system.
    """
    frame = _frame_of(plane)
    s, k = frame.s, frame.k
    d_nom = two_s_max(s, k)
    W = frame.rows
    n_nodes = d_nom + 1
    radius = 1.3
    offset = 0.0
    for attempt in range(8):
        nodes = radius * np.exp(
            2j * np.pi * (np.arange(n_nodes) + offset) / n_nodes
        )
        vals = np.empty(n_nodes, dtype=complex)
        try:
            for a, zeta in enumerate(nodes):
                minus_n = -stereo_to_sphere(zeta)
                V = _coherent_chart_rows(s, k, minus_n)
                vals[a] = zeta**d_nom * np.linalg.det(V.conj() @ W.T)
        except _ChartSingular:
            radius *= 1.07
            offset += 0.37
            continue
        vander = nodes[:, None] ** np.arange(n_nodes)[None, :]
        coeffs = np.linalg.solve(vander, vals)
        poly = ComplexPolynomial(coeffs, d_nom)
        return PrincipalResult("sampled", poly, constellation_of_polynomial(poly))
    raise ArithmeticError("could not find nonsingular sampling nodes")


_ROUTES = {
    "wronskian": principal_wronskian,
    "sampled": principal_sampled,
    "top": principal_top_component,
}


def principal(plane, route: str = "wronskian") -> PrincipalResult:
    """Principal polynomial/constellation by the requested route."""
    try:
        fn = _ROUTES[route]
    except KeyError:
        raise ValueError(f"unknown route {route!r}; choose from {sorted(_ROUTES)}")
    return fn(plane)


def principal_all(plane) -> dict:
    """All three routes at once, keyed by route name."""
    return {name: fn(plane) for name, fn in _ROUTES.items()}


def schubert_count(s: SpinLabel, k: int) -> int:
    """Number of (s, k) planes sharing a generic principal constellation.

    The degree of the Grassmannian Gr(k, 2s+1) in its Pluecker embedding:
    (k k')! prod_{i=1}^{k-1} i! / prod_{i=k'}^{2s} i!, with k' = 2s+1-k.
    """
    if not 1 <= k <= s.dim:
        raise ValueError("k out of range")
    k_perp = s.dim - k
    num = math.factorial(k * k_perp)
    for i in range(1, k):
        num *= math.factorial(i)
    den = 1
    for i in range(k_perp, s.two_s + 1):
        den *= math.factorial(i)
    return num // den


def planes_from_quartic_32(p: ComplexPolynomial) -> list[KPlane]:
    """Both spin-3/2 2-planes with the given monic quartic as principal
    polynomial (closed form; the generic count here is 2).

    With the plane in standard form rows (1, 0, m11, m12), (0, 1, m21, m22),
    the principal polynomial is

        zeta^4 - 2 m21 zeta^3 + sqrt(3) (m22 - m11) zeta^2
              + 2 m12 zeta + det m,

    which inverts by a single quadratic.  A vanishing discriminant returns
    the same plane twice.
    """
    if p.d_nom != 4:
        raise ValueError("expected a quartic (d_nom = 4)")
    c = p.coeffs
    if abs(c[4]) <= 1e-12 * float(np.max(np.abs(c))):
        raise ValueError("quartic must have a nonzero leading coefficient")
    a0, a1, a2, a3 = (c[:4] / c[4]).tolist()
    m21 = -a3 / 2
    m12 = a1 / 2
    delta = a2 / math.sqrt(3)
    gamma = a0 - a3 * a1 / 4
    disc = delta * delta + 4 * gamma
    sq = np.sqrt(complex(disc))
    s = SpinLabel(3)
    out = []
    for m11 in ((-delta + sq) / 2, (-delta - sq) / 2):
        m22 = m11 + delta
        rows = np.array([[1, 0, m11, m12], [0, 1, m21, m22]], dtype=complex)
        out.append(standard_form(KFrame(s, 2, rows)))
    return out
