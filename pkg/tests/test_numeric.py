"""Numeric certification: sampling, retraction, scans, degrees, linking."""

import numpy as np
import pytest

from quadrep.coefficients import SuspensionTriple
from quadrep.exact import Polynomial
from quadrep.maps import (
    PolyMap,
    PreconditionError,
    SuspensionNode,
    blend_homotopy,
    catalog,
    certify_order,
    circle_pair,
    compose_maps,
    hopf_pair,
    suspend,
)
from quadrep.numeric import (
    NumericError,
    QuadricPoint,
    even_order_nullhomotopy_residual,
    gauss_linking,
    hemisphere_check,
    hopf_invariant,
    quadric_residual,
    quadric_residual_scan,
    retraction_homotopy_residual,
    sample_quadric,
    sample_sphere,
    sphere_degree,
    sphere_retraction,
    tangent_lift,
    tangent_unlift,
    winding_degree,
)


def identity_map(m):
    comps = [Polynomial.variable(m, i) for i in range(m)]
    pm = PolyMap.explicit(comps, f"id({m})", order=1)
    pm.certificate = certify_order(pm, 1)
    return pm


# ----------------------------------------------------------------- sampling


def test_sample_sphere_unit_norm():
    pts = sample_sphere(1, 4, seed=5)
    assert pts.shape == (4, 2)
    assert np.abs(np.linalg.norm(pts, axis=1) - 1).max() < 1e-14


def test_sample_sphere_mean_near_zero():
    pts = sample_sphere(3, 1000, seed=1)
    assert np.abs(pts.mean(axis=0)).max() < 0.1


def test_sample_sphere_empty():
    assert sample_sphere(2, 0).shape == (0, 3)


def test_sample_sphere_deterministic():
    a = sample_sphere(2, 10, seed=9)
    b = sample_sphere(2, 10, seed=9)
    assert np.array_equal(a, b)


def test_sample_quadric_residuals():
    Z = sample_quadric(4, 500, seed=2)
    assert quadric_residual(Z).max() < 1e-12


# --------------------------------------------------------------- retraction


def test_retraction_fixes_real_sphere_points():
    pts = sample_sphere(2, 20, seed=3)
    for p in pts:
        out = sphere_retraction(p.astype(complex))
        assert np.allclose(out, p, atol=1e-14)


def test_retraction_hand_point():
    # p = (sqrt(2), i) lies on the quadric: 2 + (i)^2 = 1; H1 sends it to (1, 0)
    p = np.array([np.sqrt(2), 1j])
    assert quadric_residual(p)[0] < 1e-15
    out = sphere_retraction(p)
    assert np.allclose(out, [1.0, 0.0], atol=1e-15)


def test_retraction_unit_norm_on_samples():
    Z = sample_quadric(4, 1000, seed=4)
    for p in Z:
        assert abs(np.linalg.norm(sphere_retraction(p)) - 1) < 1e-9


def test_retraction_rejects_off_quadric_points():
    with pytest.raises(NumericError):
        sphere_retraction(np.array([2.0 + 0j, 0.0]))


def test_retraction_homotopy_residual_small():
    assert retraction_homotopy_residual(3, samples=100, tsteps=11, seed=0) < 1e-9


def test_tangent_lift_hand_point():
    p = np.array([np.sqrt(2), 1j])
    v, w = tangent_lift(p)
    assert np.allclose(v, [1.0, 0.0], atol=1e-15)
    assert np.allclose(w, [0.0, 1.0], atol=1e-15)
    assert abs(np.dot(v, w)) < 1e-15


def test_tangent_round_trip():
    Z = sample_quadric(3, 200, seed=6)
    for p in Z:
        v, w = tangent_lift(p)
        assert abs(np.linalg.norm(v) - 1) < 1e-9
        assert abs(np.dot(v, w)) < 1e-9
        back = tangent_unlift(v, w)
        assert quadric_residual(back)[0] < 1e-9


def test_tangent_zero_section():
    p = np.array([1.0 + 0j, 0.0, 0.0])
    v, w = tangent_lift(p)
    assert np.allclose(v, [1, 0, 0]) and np.allclose(w, 0)


def test_quadric_point_record():
    qp = QuadricPoint.of([1.0, 0.0])
    assert qp.residual < 1e-15


# -------------------------------------------------------------------- scans


def test_scan_identity_map():
    assert quadric_residual_scan(identity_map(3), samples=2000, seed=0) < 1e-12


def test_scan_hopf_tight():
    f, _ = hopf_pair()
    assert quadric_residual_scan(f, samples=10_000, seed=0) < 1e-12


def test_scan_suspension():
    f, g = hopf_pair()
    phi = suspend(f, g, 1)
    assert quadric_residual_scan(phi, samples=10_000, seed=0) < 1e-9


def test_scan_blends():
    f, g = hopf_pair()
    for t in (0.0, 0.25, 0.5, 0.75, 1.0):
        blend = blend_homotopy(f, g, t)
        assert quadric_residual_scan(blend, samples=2000, seed=0) < 1e-9


# --------------------------------------------------------------- hemisphere


def test_hemisphere_phi_passes():
    f, g = hopf_pair()
    phi = suspend(f, g, 1)
    res = hemisphere_check(phi, samples=1000, seed=0)
    assert res.passed
    assert res.equator_max == 0.0
    assert res.min_u_scale > 0


def test_hemisphere_needs_lineage():
    f, _ = hopf_pair()
    with pytest.raises(PreconditionError):
        hemisphere_check(f)


def test_hemisphere_negated_scale_fails():
    f, g = hopf_pair()
    phi = suspend(f, g, 1)
    triple = phi.node.triple
    flipped = SuspensionTriple(
        triple.order, -triple.u_coeff, triple.f_coeff, triple.g_coeff, triple.series, triple.cofactor
    )
    bad = PolyMap(phi.m, phi.r, node=SuspensionNode(f, g, flipped, 1), label="neg", order=3)
    res = hemisphere_check(bad, samples=500, seed=0)
    assert not res.passed
    assert res.min_u_scale < 0
    assert res.sign_violations > 0


# ------------------------------------------------------------------ degrees


@pytest.mark.parametrize("d", [-3, -2, -1, 1, 2, 3])
def test_winding_degree(d):
    f, _ = circle_pair(d)
    res = winding_degree(f)
    assert res.value == d
    assert res.defect < 0.01


def test_winding_identity():
    assert winding_degree(identity_map(2)).value == 1


def test_sphere_degree_identity():
    res = sphere_degree(identity_map(3), grid=(200, 100))
    assert res.value == 1 and res.defect < 0.05


@pytest.mark.parametrize("d", [-2, 1, 2])
def test_sphere_degree_suspended_circle(d):
    pm = catalog(f"pi_n:2,{d}")
    res = sphere_degree(pm, grid=(400, 200))
    assert res.value == d
    assert res.defect < 0.05


def test_degree_dimension_checks():
    f, _ = hopf_pair()
    from quadrep.maps import DimensionMismatch

    with pytest.raises(DimensionMismatch):
        winding_degree(f)
    with pytest.raises(DimensionMismatch):
        sphere_degree(f)


# ----------------------------------------------------------- hopf invariant


def test_gauss_linking_standard_circles():
    t = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    a = np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=1)
    b = np.stack([1 + np.cos(t), np.zeros_like(t), np.sin(t)], axis=1)
    assert abs(abs(gauss_linking(a, b)) - 1) < 1e-3
    far = b + np.array([10.0, 0, 0])
    assert abs(gauss_linking(a, far)) < 1e-3


def test_hopf_invariant_of_hopf_map():
    f, _ = hopf_pair()
    res = hopf_invariant(f, seed=0)
    assert abs(res.value) == 1
    assert res.defect < 0.05
    assert len(res.curves) == 2
    for curve in res.curves:
        assert curve.closed
        steps = np.linalg.norm(np.diff(curve.points, axis=0), axis=1)
        assert steps.max() < 2e-2  # consecutive points within step tolerance


def test_hopf_invariant_seed_and_value_independent():
    f, _ = hopf_pair()
    base = hopf_invariant(f, seed=0).value
    assert hopf_invariant(f, seed=3).value == base
    vv = (np.array([0.0, 1.0, 0.0]), np.array([0.0, -0.3, 0.9]))
    assert hopf_invariant(f, values=vv, seed=2).value == base


def test_hopf_invariant_constant_map_zero():
    from quadrep.maps import constant_map

    res = hopf_invariant(constant_map(4, 3), seed=0)
    assert res.value == 0 and not res.curves


def test_hopf_invariant_rotation_invariance():
    from fractions import Fraction

    f, _ = hopf_pair()
    base = hopf_invariant(f, seed=0).value
    c, s = Fraction(3, 5), Fraction(4, 5)
    zs = [Polynomial.variable(4, i) for i in range(4)]
    rot = PolyMap.explicit(
        [zs[0].scale(c) - zs[1].scale(s), zs[0].scale(s) + zs[1].scale(c), zs[2], zs[3]],
        "rotation",
        order=1,
    )
    rot.certificate = certify_order(rot, 1)
    fr = compose_maps(f, rot)
    assert hopf_invariant(fr, seed=1).value == base


def test_hopf_invariant_scales_with_degree():
    f, _ = hopf_pair()
    base = hopf_invariant(f, seed=0).value
    res = hopf_invariant(catalog("pi3_s2:-1"), seed=0)
    assert res.value == -base


# --------------------------------------------------------------- homotopies


def test_even_order_loop_residual_hopf():
    f, _ = hopf_pair()
    assert even_order_nullhomotopy_residual(f, tsteps=11, samples=200, seed=0) < 1e-9


def test_even_order_loop_endpoints():
    f, _ = hopf_pair()
    Z = sample_quadric(4, 50, seed=1)
    start = f.eval_batch(np.exp(1j * np.pi * 0.0) * Z) * np.exp(1j * np.pi * 0.0) ** (-2)
    assert np.allclose(start, f.eval_batch(Z), atol=1e-12)
    gamma = np.exp(1j * np.pi * 1.0)
    end = f.eval_batch(gamma * Z) * gamma ** (-2.0)
    assert np.allclose(end, f.eval_batch(-Z), atol=1e-12)


def test_even_order_loop_rejects_odd_orders():
    f, g = hopf_pair()
    phi = suspend(f, g, 1)  # order 3
    with pytest.raises(PreconditionError):
        even_order_nullhomotopy_residual(phi)
