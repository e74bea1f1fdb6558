import math

import numpy as np
import pytest

from stellar import (
    INF,
    ComplexPolynomial,
    SpinLabel,
    SpinState,
    antipodal_constellation,
    coherent_state,
    constellation_match_angle,
    constellation_of_polynomial,
    constellation_of_state,
    majorana_polynomial,
    poly_roots,
    projective_distance,
    projective_normalize,
    rotate_constellation,
    wigner_d,
)
from stellar.majorana import (
    antipode,
    constellation_from_roots,
    stereo_from_sphere,
    stereo_to_sphere,
)

from conftest import random_rotation, random_state


def test_majorana_polynomial_spin1_oracle():
    # For coefficients (a, b, c) in the m = (1, 0, -1) basis the polynomial
    # is a z^2 - sqrt(2) b z + c; stored ascending.
    psi = SpinState(SpinLabel(2), np.array([1.0, 2.0, 3.0]))
    p = majorana_polynomial(psi)
    assert p.d_nom == 2
    assert np.allclose(p.coeffs, [3.0, -2.0 * math.sqrt(2.0), 1.0])


def test_majorana_polynomial_rejects_zero_state():
    with pytest.raises(ValueError):
        majorana_polynomial(SpinState(SpinLabel(2), np.zeros(3)))


def test_tetrahedron_constellation_exact():
    psi = SpinState(
        SpinLabel(4), np.array([1.0, 0.0, 0.0, math.sqrt(2.0), 0.0]) / math.sqrt(3.0)
    )
    p = majorana_polynomial(psi)
    # z^4 - 2 sqrt(2) z, up to the overall 1/sqrt(3)
    assert np.allclose(
        p.coeffs * math.sqrt(3.0), [0.0, -2.0 * math.sqrt(2.0), 0.0, 0.0, 1.0]
    )
    c = constellation_of_state(psi)
    assert c.total == 4
    want = {
        (0.0, 0.0, 1.0),
        (2.0 * math.sqrt(2.0) / 3.0, 0.0, -1.0 / 3.0),
        (-math.sqrt(2.0) / 3.0, math.sqrt(2.0 / 3.0), -1.0 / 3.0),
        (-math.sqrt(2.0) / 3.0, -math.sqrt(2.0 / 3.0), -1.0 / 3.0),
    }
    got = sorted(tuple(s.direction) for s in c.stars)
    for g, w in zip(got, sorted(want)):
        assert np.abs(np.array(g) - np.array(w)).max() < 1e-9


def test_poly_roots_against_numpy():
    rng = np.random.default_rng(21)
    c = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    p = ComplexPolynomial(c, 8)
    got = sorted(poly_roots(p), key=lambda z: (z.real, z.imag))
    want = sorted(np.roots(c[::-1]), key=lambda z: (z.real, z.imag))
    assert np.abs(np.array(got) - np.array(want)).max() < 1e-8


def test_leading_zero_coefficients_give_infinite_roots():
    # nominal degree 3, actual degree 1: two stars at the south pole
    p = ComplexPolynomial(np.array([1.0, 1.0, 0.0, 0.0]), 3)
    roots = poly_roots(p)
    assert sum(1 for r in roots if r is INF) == 2
    finite = [r for r in roots if r is not INF]
    assert len(finite) == 1
    assert abs(finite[0] - (-1.0)) < 1e-12
    c = constellation_of_polynomial(p)
    assert c.total == 3
    south = [s for s in c.stars if s.direction[2] < -0.99]
    assert south and south[0].multiplicity == 2


def test_stereo_round_trip():
    rng = np.random.default_rng(22)
    for _ in range(20):
        n = rng.standard_normal(3)
        n /= np.linalg.norm(n)
        back = stereo_to_sphere(stereo_from_sphere(n))
        assert np.abs(back - n).max() < 1e-12
    assert np.allclose(stereo_to_sphere(0.0), [0.0, 0.0, 1.0])
    assert np.allclose(stereo_to_sphere(INF), [0.0, 0.0, -1.0])
    assert stereo_from_sphere(np.array([0.0, 0.0, -1.0])) is INF


def test_antipode():
    rng = np.random.default_rng(23)
    for _ in range(10):
        z = complex(rng.standard_normal(), rng.standard_normal())
        assert np.abs(stereo_to_sphere(antipode(z)) + stereo_to_sphere(z)).max() < 1e-12
    assert antipode(0.0) is INF
    assert antipode(INF) == 0.0


def test_coherent_state_stars_sit_at_its_direction():
    rng = np.random.default_rng(24)
    s = SpinLabel(5)
    z = complex(rng.standard_normal(), rng.standard_normal())
    c = constellation_of_state(coherent_state(s, z))
    n = stereo_to_sphere(z)
    assert c.total == 5
    # a quintuple root splits by roughly eps^(1/5) ~ 1e-3, so only a loose
    # per-star bound is meaningful; their mean is much better
    mean = np.zeros(3)
    for star in c.stars:
        assert np.abs(star.direction - n).max() < 1e-2
        mean += star.multiplicity * star.direction
    mean /= c.total
    assert np.abs(mean / np.linalg.norm(mean) - n).max() < 1e-4


def test_rotation_covariance_of_state_constellation():
    rng = np.random.default_rng(25)
    for two_s in (2, 3, 5):
        psi = random_state(rng, two_s)
        r = random_rotation(rng)
        rotated = SpinState(
            psi.s, wigner_d(psi.s, r) @ psi.coeffs
        )
        got = constellation_of_state(rotated)
        want = rotate_constellation(constellation_of_state(psi), r)
        assert constellation_match_angle(got, want) < 1e-7


def test_antipodal_constellation_negates_directions():
    rng = np.random.default_rng(26)
    psi = random_state(rng, 4)
    c = constellation_of_state(psi)
    anti = antipodal_constellation(c)
    assert anti.total == c.total
    got = sorted(map(tuple, -np.array([s.direction for s in c.stars]).round(9)))
    want = sorted(map(tuple, np.array([s.direction for s in anti.stars]).round(9)))
    assert np.abs(np.array(got) - np.array(want)).max() < 1e-9
    twice = antipodal_constellation(anti)
    assert constellation_match_angle(twice, c) < 1e-12


def test_projective_normalize_and_distance():
    rng = np.random.default_rng(27)
    c = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    p = ComplexPolynomial(c, 4)
    q = ComplexPolynomial(c * (2.3 - 0.7j), 4)
    assert projective_distance(p, q) < 1e-12
    top = projective_normalize(p).coeffs
    assert abs(np.abs(top).max() - 1.0) < 1e-12
    other = ComplexPolynomial(c + 0.5, 4)
    assert projective_distance(p, other) > 1e-3


def test_double_root_clustering():
    # (z - 1)^2 (z + 2) = z^3 - 3 z + 2
    p = ComplexPolynomial(np.array([2.0, -3.0, 0.0, 1.0]), 3)
    c = constellation_of_polynomial(p)
    mults = sorted(s.multiplicity for s in c.stars)
    assert mults == [1, 2]
    doubled = [s for s in c.stars if s.multiplicity == 2][0]
    assert np.abs(doubled.direction - stereo_to_sphere(1.0)).max() < 1e-6


def test_constellation_match_angle_detects_rotation():
    rng = np.random.default_rng(28)
    psi = random_state(rng, 3)
    c = constellation_of_state(psi)
    r = random_rotation(rng)
    rotated = rotate_constellation(c, r)
    assert constellation_match_angle(c, c) < 1e-12
    # mismatched constellations are flagged by a sizable angle
    if constellation_match_angle(c, rotated) < 1e-7:
        # the rotation happened to be a symmetry; extremely unlikely
        assert False, "random rotation should move a generic constellation"


def test_star_angles_ranges():
    rng = np.random.default_rng(29)
    c = constellation_of_state(random_state(rng, 6))
    for star in c.stars:
        theta, phi = star.angles()
        assert 0.0 <= theta <= math.pi
        assert 0.0 <= phi < 2.0 * math.pi


def test_constellation_from_roots_total_override():
    c = constellation_from_roots([0.0, INF], total=2)
    assert c.total == 2
    zs = sorted(s.direction[2] for s in c.stars)
    assert zs == pytest.approx([-1.0, 1.0])
