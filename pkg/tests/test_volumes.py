import math

import numpy as np
import pytest
from scipy.special import ellipe

from intgeo import bodies as bd
from intgeo.volumes import (QuadratureError, batch_ellipsoid_intrinsic_volumes,
                            closed_intrinsic_volumes, euler_characteristic,
                            euler_valuation, intrinsic_volume_ball,
                            intrinsic_volume_cube, intrinsic_volume_ellipsoid,
                            kappa, steiner_fit, valuation_norm_estimate,
                            volume_exact, volume_mc, volume_valuation)


def box2(x0, x1, y0, y1):
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    return bd.HPolytope(A, np.array([x1, -x0, y1, -y0]))


def test_kappa_small_dimensions():
    np.testing.assert_allclose(
        [kappa(j) for j in range(5)],
        [1.0, 2.0, math.pi, 4.0 * math.pi / 3.0, math.pi**2 / 2.0],
        rtol=1e-15)


def test_ball_values_satisfy_steiner_identity():
    # sum_j kappa_{n-j} eps^{n-j} V_j(B^n) must equal (1 + eps)^n kappa_n
    for n in range(1, 7):
        for eps in (0.5, 1.0, 2.0):
            total = sum(kappa(n - j) * eps ** (n - j) * intrinsic_volume_ball(n, j)
                        for j in range(n + 1))
            assert abs(total - (1.0 + eps) ** n * kappa(n)) < 1e-11


def test_ball_known_values():
    assert abs(intrinsic_volume_ball(2, 1) - math.pi) < 1e-15
    assert abs(intrinsic_volume_ball(2, 2) - math.pi) < 1e-15
    assert abs(intrinsic_volume_ball(3, 1) - 4.0) < 1e-14
    assert abs(intrinsic_volume_ball(3, 2) - 2.0 * math.pi) < 1e-14
    assert abs(intrinsic_volume_ball(3, 3) - 4.0 * math.pi / 3.0) < 1e-14
    # radius scaling is j-homogeneous
    assert abs(intrinsic_volume_ball(3, 2, radius=2.0) - 8.0 * math.pi) < 1e-13


def test_cube_values():
    for n in (1, 2, 3, 4):
        for j in range(n + 1):
            want = math.comb(n, j) * 0.7**j
            assert abs(intrinsic_volume_cube(n, j, side=0.7) - want) < 1e-14


def test_ellipsoid_equal_axes_matches_ball():
    for n in (2, 3, 4):
        for r in (0.5, 1.0, 2.0):
            for j in range(n + 1):
                got = intrinsic_volume_ellipsoid([r] * n, j)
                want = intrinsic_volume_ball(n, j, radius=r)
                assert abs(got - want) <= 1e-8 * max(1.0, abs(want))


def test_ellipse_first_intrinsic_volume_elliptic_integral():
    # V_1 = half perimeter = 2 a E(1 - b^2/a^2) for a >= b
    for a, b in ((2.0, 1.0), (5.0, 0.5), (1.3, 1.2)):
        want = 2.0 * a * ellipe(1.0 - (b / a) ** 2)
        got = intrinsic_volume_ellipsoid([a, b], 1)
        assert abs(got - want) < 1e-8 * want


def test_ellipse_area():
    got = intrinsic_volume_ellipsoid([2.0, 0.7], 2)
    assert abs(got - math.pi * 1.4) < 1e-10


def test_spheroid_surface_area():
    # V_2 is half the surface area; spheroids have classical closed forms
    a, c = 2.0, 1.0
    e = math.sqrt(1.0 - (c / a) ** 2)
    prolate = 2.0 * math.pi * c**2 * (1.0 + (a / (c * e)) * math.asin(e))
    got = intrinsic_volume_ellipsoid([a, c, c], 2)
    assert abs(got - prolate / 2.0) < 1e-8 * prolate
    oblate = 2.0 * math.pi * a**2 * (1.0 + ((1.0 - e**2) / e) * math.atanh(e))
    got = intrinsic_volume_ellipsoid([a, a, c], 2)
    assert abs(got - oblate / 2.0) < 1e-8 * oblate


def test_ellipsoid_permutation_and_homogeneity():
    axes = [1.7, 0.4, 2.5]
    for j in range(4):
        v1 = intrinsic_volume_ellipsoid(axes, j)
        v2 = intrinsic_volume_ellipsoid(axes[::-1], j)
        assert abs(v1 - v2) < 1e-9 * max(1.0, v1)
        v3 = intrinsic_volume_ellipsoid([3.0 * a for a in axes], j)
        assert abs(v3 - 3.0**j * v1) < 1e-8 * max(1.0, v3)


def test_ellipsoid_input_validation():
    with pytest.raises(ValueError):
        intrinsic_volume_ellipsoid([1.0, -1.0], 1)
    with pytest.raises(ValueError):
        intrinsic_volume_ellipsoid([1.0, 1.0], 3)
    with pytest.raises(QuadratureError):
        intrinsic_volume_ellipsoid([1.0, 1e-30], 1)


def test_batch_matches_quadrature_across_spreads():
    # the fixed-grid fast path must track the adaptive reference closely on
    # log-spreads well beyond what Gaussian spectra produce
    cases = {
        2: [[1.0, 1.0], [2.0, 0.5], [np.exp(3.0), np.exp(-3.0)],
            [np.exp(6.0), 1.0], [np.exp(-6.0), np.exp(-2.0)]],
        3: [[1.0, 1.0, 1.0], [np.exp(2.0), 1.0, np.exp(-2.0)],
            [5.0, 1.0, 0.2], [np.exp(6.0), np.exp(3.0), 1.0]],
        4: [[1.0, 1.0, 1.0, 1.0],
            [np.exp(3.0), np.exp(1.0), np.exp(-1.0), np.exp(-3.0)]],
    }
    for n, rows in cases.items():
        A = np.array(rows)
        js = list(range(n + 1))
        got = batch_ellipsoid_intrinsic_volumes(A, js)
        for j in js:
            for i, axes in enumerate(rows):
                ref = intrinsic_volume_ellipsoid(axes, j)
                assert abs(got[j][i] - ref) <= 1e-8 * max(1.0, abs(ref))


def test_closed_intrinsic_volumes_bodies():
    np.testing.assert_allclose(closed_intrinsic_volumes(bd.unit_ball(2)),
                               [1.0, math.pi, math.pi], atol=1e-12)
    np.testing.assert_allclose(closed_intrinsic_volumes(box2(0.0, 2.0, 0.0, 1.0)),
                               [1.0, 3.0, 2.0], atol=1e-12)
    sq = bd.VPolytope([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    np.testing.assert_allclose(closed_intrinsic_volumes(sq),
                               [1.0, 2.0, 1.0], atol=1e-12)
    tri = bd.VPolytope([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    np.testing.assert_allclose(closed_intrinsic_volumes(tri),
                               [1.0, 1.0 + math.sqrt(2.0) / 2.0, 0.5], atol=1e-12)
    with pytest.raises(ValueError):
        closed_intrinsic_volumes(bd.VPolytope(np.zeros((4, 3))))


def test_intrinsic_volumes_are_additive_on_box_union():
    # valuation property: V_j(A) + V_j(B) - V_j(A cap B) equals the union's
    # hand-computed values (chi 1, half-perimeter 4.5, area 3.5)
    A = box2(0.0, 2.0, 0.0, 1.0)
    B = box2(1.0, 3.0, 0.5, 1.5)
    I = box2(1.0, 2.0, 0.5, 1.0)
    total = (closed_intrinsic_volumes(A) + closed_intrinsic_volumes(B)
             - closed_intrinsic_volumes(I))
    np.testing.assert_allclose(total, [1.0, 4.5, 3.5], atol=1e-12)


def test_euler_and_volume_exact():
    assert euler_characteristic(bd.unit_ball(3)) == 1
    assert euler_characteristic(bd.EMPTY) == 0
    assert abs(volume_exact(bd.Ball(np.zeros(2), 2.0)) - 4.0 * math.pi) < 1e-12
    ell = bd.Ellipsoid(np.zeros(3), np.eye(3), [1.0, 2.0, 3.0])
    assert abs(volume_exact(ell) - kappa(3) * 6.0) < 1e-12
    assert abs(volume_exact(bd.cube(3, side=2.0)) - 8.0) < 1e-9
    seg = bd.VPolytope([[0.0, 0.0], [1.0, 0.0]])  # flat: zero area
    assert volume_exact(seg) == 0.0
    assert volume_exact(bd.EMPTY) == 0.0


def test_volume_mc_exact_on_box():
    # the sampling box equals the body, so every draw hits: zero variance
    res = volume_mc(bd.cube(2, side=1.5, centered=True), 2000, 0)
    assert abs(res.mean - 2.25) < 1e-12
    assert res.std_error == 0.0
    assert res.samples == 2000


def test_volume_mc_ball():
    res = volume_mc(bd.unit_ball(2), 200000, 42)
    assert abs(res.mean - math.pi) < 4.0 * res.std_error
    assert res.seed == 42
    assert abs(res.importance_volume - 4.0) < 1e-12


def test_steiner_fit_square():
    sq = bd.VPolytope([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    fit = steiner_fit(sq, [0.25, 0.5, 0.75, 1.0], 200000, 3)
    for j, want in enumerate([1.0, 2.0, 1.0]):
        assert abs(fit.values[j] - want) < 4.0 * max(fit.std_errors[j], 1e-6)
    d = fit.to_dict()
    assert set(d) >= {"values", "std_errors", "radii", "measured"}


def test_steiner_fit_needs_enough_radii():
    with pytest.raises(ValueError):
        steiner_fit(bd.unit_ball(2), [0.5, 1.0], 1000, 0)
    with pytest.raises(ValueError):
        steiner_fit(bd.unit_ball(2), [0.5, -1.0, 1.0], 1000, 0)


def test_valuations():
    chi = euler_valuation()
    vol = volume_valuation(2)
    assert chi(bd.unit_ball(2)) == 1.0
    assert chi(bd.EMPTY) == 0.0
    assert abs(vol(bd.unit_ball(2)) - math.pi) < 1e-12
    assert vol.degree == 2.0
    norm = valuation_norm_estimate(chi, 2, 5)
    assert abs(norm - 1.0) < 1e-12
