"""Chart, conformal-motion, transport, and radial-profile checks.

Oracles used here:
  * finite-difference Gram determinants for both Jacobians (plane chart
    and sphere map), built from explicit tangent bases;
  * closed-form beta integrals for the radial quadrature and the
    Dirichlet energy of the standard decaying bubble profile;
  * the algebraic identity delta^2(1+t) + (1-t) = (delta^2+1)(1+rt) with
    r = (delta^2-1)/(delta^2+1), which pins the image of the constant
    under transport to an explicit member of the extremal family.
"""

import math

import numpy as np
import pytest

from _helpers import log_poly_values
from sphls import geometry as ge
from sphls import zonal as zn
from sphls.errors import DomainError, IntegrationError, UsageError
from sphls.specfun import sphere_area


def south_pole(n):
    coords = np.zeros(n + 1)
    coords[-1] = -1.0
    return ge.SpherePoint(coords=coords)


def smooth_profile(n, rng, cap=1.2):
    nodes = np.asarray(zn.zonal_constant(n).rule.nodes)
    return zn.zonal_from_values(n, log_poly_values(n, nodes, rng, cap=cap))


def tangent_basis(w):
    basis = []
    for k in range(w.size):
        e = np.zeros(w.size)
        e[k] = 1.0
        v = e - float(e @ w) * w
        for b in basis:
            v = v - float(v @ b) * b
        norm = float(np.linalg.norm(v))
        if norm > 1e-6:
            basis.append(v / norm)
        if len(basis) == w.size - 1:
            break
    return basis


def fd_sphere_jacobian(m, w, eps=1e-5):
    """Gram-determinant Jacobian from geodesic finite differences."""
    cols = []
    for v in tangent_basis(w):
        wp = math.cos(eps) * w + math.sin(eps) * v
        wm = math.cos(eps) * w - math.sin(eps) * v
        ip = np.asarray(ge.conformal_map_apply(m, wp).coords)
        im = np.asarray(ge.conformal_map_apply(m, wm).coords)
        cols.append((ip - im) / (2.0 * eps))
    mat = np.stack(cols, axis=1)
    return math.sqrt(float(np.linalg.det(mat.T @ mat)))


def fd_plane_jacobian(x, eps=1e-6):
    cols = []
    for k in range(x.size):
        dx = np.zeros(x.size)
        dx[k] = eps
        up = np.asarray(ge.stereo(x + dx).coords)
        dn = np.asarray(ge.stereo(x - dx).coords)
        cols.append((up - dn) / (2.0 * eps))
    mat = np.stack(cols, axis=1)
    return math.sqrt(float(np.linalg.det(mat.T @ mat)))


class TestSpherePoint:
    def test_unit_length_enforced(self):
        with pytest.raises(DomainError):
            ge.SpherePoint(coords=np.array([1.0, 1.0]))

    def test_shape_checks(self):
        with pytest.raises(UsageError):
            ge.sphere_point(np.zeros((2, 2)))
        with pytest.raises(UsageError):
            ge.sphere_point(np.array([1.0]))

    def test_normalize_option(self):
        p = ge.sphere_point([3.0, 4.0], normalize=True)
        np.testing.assert_allclose(p.coords, [0.6, 0.8], atol=1e-15)
        with pytest.raises(DomainError):
            ge.sphere_point([0.0, 0.0], normalize=True)

    def test_dim_and_immutability(self):
        p = ge.north_pole(3)
        assert p.dim == 3
        with pytest.raises(ValueError):
            p.coords[0] = 1.0


class TestStereo:
    def test_hand_value(self):
        w = ge.stereo(np.array([3.0, 4.0]))
        np.testing.assert_allclose(
            w.coords, [6.0 / 26.0, 8.0 / 26.0, -24.0 / 26.0], atol=1e-15
        )

    def test_origin_maps_to_north_pole(self):
        for n in (1, 2, 3, 5):
            np.testing.assert_array_equal(
                ge.stereo(np.zeros(n)).coords, ge.north_pole(n).coords
            )

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_roundtrip_both_ways(self, n):
        rng = np.random.default_rng(100 + n)
        for scale, tol in ((0.01, 1e-13), (1.0, 1e-13), (50.0, 1e-11)):
            # far from the origin the chart compresses toward the south
            # pole and the inverse loses digits to that conditioning
            x = scale * rng.standard_normal(n)
            np.testing.assert_allclose(ge.stereo_inv(ge.stereo(x)), x, rtol=tol, atol=1e-16)
        for _ in range(20):
            w = ge.sphere_point(rng.standard_normal(n + 1), normalize=True)
            if 1.0 + w.coords[-1] < 1e-3:
                continue
            back = ge.stereo(ge.stereo_inv(w))
            np.testing.assert_allclose(back.coords, w.coords, atol=1e-13)

    def test_south_pole_has_no_preimage(self):
        with pytest.raises(DomainError):
            ge.stereo_inv(south_pole(2))

    def test_jacobian_hand_values(self):
        assert ge.stereo_jacobian(np.zeros(3)) == 8.0
        assert ge.stereo_jacobian(np.array([1.0, 0.0])) == 1.0

    def test_jacobian_against_finite_differences(self):
        rng = np.random.default_rng(7)
        for n in (1, 2, 3):
            for _ in range(5):
                x = 1.5 * rng.standard_normal(n)
                want = fd_plane_jacobian(x)
                got = ge.stereo_jacobian(x)
                assert abs(got / want - 1.0) < 1e-7

    def test_chart_measure_reproduces_sphere_area(self):
        # pulling the constant through the chart must integrate to |S^N|
        for n in (2, 3):
            F = ge.radial_from_callable(
                n, lambda r: (2.0 / (1.0 + r * r)) ** n, decay=2.0 * n
            )
            assert abs(ge.radial_integral(F) / sphere_area(n) - 1.0) < 1e-9


class TestChordalFactorization:
    def test_hand_values(self):
        lhs, rhs = ge.chordal_factorization(np.zeros(2), np.array([1.0, 0.0]))
        assert abs(lhs - 2.0) < 1e-15 and abs(rhs - 2.0) < 1e-15
        lhs, rhs = ge.chordal_factorization(np.array([0.3, -0.2]), np.array([0.3, -0.2]))
        assert lhs == 0.0 and rhs == 0.0

    def test_random_pairs_agree(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            scale = 10.0 ** rng.uniform(-1.5, 1.5)
            x = scale * rng.standard_normal(3)
            y = scale * rng.standard_normal(3)
            lhs, rhs = ge.chordal_factorization(x, y)
            assert abs(lhs - rhs) <= 1e-14 * (abs(lhs) + abs(rhs) + 1e-30)


class TestConformalMap:
    def test_construction_guards(self):
        xi = ge.north_pole(2)
        for bad in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(DomainError):
                ge.ConformalMap(delta=bad, xi=xi)

    def test_dimension_mismatch(self):
        m = ge.ConformalMap(delta=2.0, xi=ge.north_pole(2))
        with pytest.raises(UsageError):
            ge.conformal_map_apply(m, ge.north_pole(3))
        with pytest.raises(UsageError):
            ge.conformal_jacobian(m, ge.north_pole(3))

    def test_hand_value(self):
        m = ge.ConformalMap(delta=2.0, xi=ge.north_pole(2))
        image = ge.conformal_map_apply(m, np.array([1.0, 0.0, 0.0]))
        np.testing.assert_allclose(image.coords, [0.8, 0.0, -0.6], atol=1e-15)

    def test_fixed_points(self):
        rng = np.random.default_rng(5)
        for n in (1, 2, 3):
            xi = ge.sphere_point(rng.standard_normal(n + 1), normalize=True)
            anti = ge.SpherePoint(coords=-np.asarray(xi.coords))
            for delta in (0.2, 1.0, 5.0):
                m = ge.ConformalMap(delta=delta, xi=xi)
                np.testing.assert_allclose(
                    ge.conformal_map_apply(m, xi).coords, xi.coords, atol=1e-14
                )
                np.testing.assert_allclose(
                    ge.conformal_map_apply(m, anti).coords, anti.coords, atol=1e-14
                )

    def test_identity_at_unit_dilation(self):
        rng = np.random.default_rng(6)
        for n in (2, 4):
            xi = ge.sphere_point(rng.standard_normal(n + 1), normalize=True)
            m = ge.ConformalMap(delta=1.0, xi=xi)
            for _ in range(10):
                w = ge.sphere_point(rng.standard_normal(n + 1), normalize=True)
                np.testing.assert_allclose(
                    ge.conformal_map_apply(m, w).coords, w.coords, atol=1e-15
                )

    def test_dilations_compose(self):
        rng = np.random.default_rng(8)
        for n in (1, 2, 3):
            xi = ge.sphere_point(rng.standard_normal(n + 1), normalize=True)
            m1 = ge.ConformalMap(delta=0.6, xi=xi)
            m2 = ge.ConformalMap(delta=3.1, xi=xi)
            m12 = ge.ConformalMap(delta=0.6 * 3.1, xi=xi)
            for _ in range(10):
                w = ge.sphere_point(rng.standard_normal(n + 1), normalize=True)
                two_step = ge.conformal_map_apply(m2, ge.conformal_map_apply(m1, w))
                one_step = ge.conformal_map_apply(m12, w)
                np.testing.assert_allclose(two_step.coords, one_step.coords, atol=1e-13)

    def test_inverse_composes_to_identity(self):
        rng = np.random.default_rng(9)
        m = ge.ConformalMap(delta=2.7, xi=ge.north_pole(3))
        for _ in range(10):
            w = ge.sphere_point(rng.standard_normal(4), normalize=True)
            back = ge.conformal_map_apply(m.inverse(), ge.conformal_map_apply(m, w))
            np.testing.assert_allclose(back.coords, w.coords, atol=1e-13)


class TestConformalJacobian:
    def test_unit_dilation_is_one(self):
        rng = np.random.default_rng(10)
        m = ge.ConformalMap(delta=1.0, xi=ge.north_pole(2))
        for _ in range(5):
            w = ge.sphere_point(rng.standard_normal(3), normalize=True)
            assert ge.conformal_jacobian(m, w) == 1.0

    def test_against_finite_differences(self):
        rng = np.random.default_rng(11)
        for n in (1, 2, 3):
            xi = ge.sphere_point(rng.standard_normal(n + 1), normalize=True)
            for delta in (0.5, 2.3):
                m = ge.ConformalMap(delta=delta, xi=xi)
                for _ in range(5):
                    w = np.asarray(
                        ge.sphere_point(rng.standard_normal(n + 1), normalize=True).coords
                    )
                    want = fd_sphere_jacobian(m, w)
                    got = ge.conformal_jacobian(m, ge.SpherePoint(coords=w))
                    assert abs(got / want - 1.0) < 5e-8

    def test_chain_rule_under_composition(self):
        rng = np.random.default_rng(12)
        for n in (2, 3):
            xi = ge.north_pole(n)
            m1 = ge.ConformalMap(delta=0.7, xi=xi)
            m2 = ge.ConformalMap(delta=2.4, xi=xi)
            m12 = ge.ConformalMap(delta=0.7 * 2.4, xi=xi)
            for _ in range(20):
                w = ge.sphere_point(rng.standard_normal(n + 1), normalize=True)
                lhs = ge.conformal_jacobian(
                    m2, ge.conformal_map_apply(m1, w)
                ) * ge.conformal_jacobian(m1, w)
                rhs = ge.conformal_jacobian(m12, w)
                assert abs(lhs / rhs - 1.0) < 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("delta", [0.3, 1.0, 2.0, 7.0])
    def test_integrates_to_sphere_area(self, n, delta):
        # with the pole on the axis the Jacobian is zonal in t = w . xi
        t = np.asarray(zn.zonal_constant(n).rule.nodes)
        jac = (2.0 * delta / ((1.0 + t) + delta * delta * (1.0 - t))) ** n
        total = sphere_area(n - 1) * float(
            np.sum(np.asarray(zn.zonal_constant(n).rule.weights) * jac)
        )
        assert abs(total / sphere_area(n) - 1.0) < 5e-13

    def test_change_of_variables_for_zonal_profiles(self):
        rng = np.random.default_rng(13)
        for n, delta in ((2, 1.6), (3, 0.6)):
            f = smooth_profile(n, rng)
            t = np.asarray(f.rule.nodes)
            w = np.asarray(f.rule.weights)
            pulled = zn.zonal_eval(f, ge.mobius_t(delta, t))
            jac = (2.0 * delta / ((1.0 + t) + delta * delta * (1.0 - t))) ** n
            moved = sphere_area(n - 1) * float(np.sum(w * pulled * jac))
            assert abs(moved / zn.zonal_integral(f) - 1.0) < 1e-11


class TestMobiusAction:
    def test_matches_full_map_on_embedded_points(self):
        rng = np.random.default_rng(14)
        for n in (2, 3):
            m = ge.ConformalMap(delta=1.8, xi=ge.north_pole(n))
            for _ in range(20):
                t = rng.uniform(-0.999, 0.999)
                w = np.zeros(n + 1)
                w[0] = math.sqrt(1.0 - t * t)
                w[-1] = t
                image = ge.conformal_map_apply(m, w)
                assert abs(float(image.coords[-1]) - ge.mobius_t(1.8, t)) < 1e-14

    def test_endpoints_are_fixed(self):
        for delta in (0.2, 1.0, 9.0):
            assert ge.mobius_t(delta, 1.0) == 1.0
            assert ge.mobius_t(delta, -1.0) == -1.0

    def test_unit_dilation_is_identity(self):
        t = np.linspace(-1.0, 1.0, 41)
        np.testing.assert_allclose(ge.mobius_t(1.0, t), t, atol=1e-15)

    def test_composes_multiplicatively(self):
        t = np.linspace(-0.99, 0.99, 57)
        lhs = ge.mobius_t(2.5, ge.mobius_t(0.7, t))
        np.testing.assert_allclose(lhs, ge.mobius_t(2.5 * 0.7, t), atol=1e-13)


class TestTransport:
    def test_argument_guards(self):
        m = ge.ConformalMap(delta=2.0, xi=ge.north_pole(3))
        with pytest.raises(UsageError):
            ge.transport(np.ones(8), m, 2.0)
        f = zn.zonal_constant(3)
        with pytest.raises(DomainError):
            ge.transport(f, m, 0.0)

    def test_off_axis_pole_rejected(self):
        xi = ge.sphere_point([1.0, 0.0, 0.0, 0.0])
        m = ge.ConformalMap(delta=2.0, xi=xi)
        with pytest.raises(UsageError):
            ge.transport(zn.zonal_constant(3), m, 2.0)

    def test_unit_dilation_is_identity(self):
        rng = np.random.default_rng(15)
        f = smooth_profile(3, rng)
        m = ge.ConformalMap(delta=1.0, xi=ge.north_pole(3))
        out = ge.transport(f, m, 1.5)
        assert np.max(np.abs(out.values - f.values)) <= 1e-13 * np.max(np.abs(f.values))

    @pytest.mark.parametrize("n,r", [(2, 2.0), (3, 1.2), (3, 6.0), (4, 2.5)])
    def test_norm_preserved(self, n, r):
        rng = np.random.default_rng(16 + n)
        f = smooth_profile(n, rng)
        for delta, sign in ((0.4, 1.0), (1.7, 1.0), (2.5, -1.0)):
            xi = ge.SpherePoint(coords=sign * np.asarray(ge.north_pole(n).coords))
            out = ge.transport(f, ge.ConformalMap(delta=delta, xi=xi), r)
            assert abs(zn.zonal_lp_norm(out, r) / zn.zonal_lp_norm(f, r) - 1.0) < 1e-10

    def test_inverse_transport_roundtrips(self):
        rng = np.random.default_rng(17)
        for n in (2, 3):
            f = smooth_profile(n, rng)
            m = ge.ConformalMap(delta=2.2, xi=ge.north_pole(n))
            back = ge.transport(ge.transport(f, m, 1.5), m.inverse(), 1.5)
            rel = np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values))
            assert rel < 1e-11

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("delta,sign", [(0.5, 1.0), (1.9, 1.0), (1.9, -1.0)])
    def test_constant_lands_in_extremal_family(self, n, delta, sign):
        # delta^2(1+t) + (1-t) = (delta^2+1)(1 + rt) for the axis pole,
        # so the transported constant is an explicit family member
        q = 2.0 * n / (n - 2.0)
        xi = ge.SpherePoint(coords=sign * np.asarray(ge.north_pole(n).coords))
        out = ge.transport(zn.zonal_constant(n), ge.ConformalMap(delta=delta, xi=xi), q)
        eff = delta if sign > 0 else 1.0 / delta
        r = (eff * eff - 1.0) / (eff * eff + 1.0)
        member = zn.sobolev_extremal_family(n, -r)
        ratio = out.values / member.values
        assert (np.max(ratio) - np.min(ratio)) / np.mean(ratio) < 1e-12
        amplitude = (2.0 * eff / (eff * eff + 1.0)) ** ((n - 2.0) / 2.0)
        assert abs(np.mean(ratio) / amplitude - 1.0) < 1e-13

    @pytest.mark.parametrize("n,lam", [(3, 1.0), (2, 1.0), (3, 2.0), (4, 2.5)])
    def test_family_is_closed_under_transport(self, n, lam):
        p = 2.0 * n / (2.0 * n - lam)
        for start in (0.0, 0.3, -0.5):
            base = math.sqrt((1.0 - start) / (1.0 + start))
            for delta in (0.5, 1.9):
                f = zn.hls_extremal_family(n, lam, start)
                out = ge.transport(
                    f, ge.ConformalMap(delta=delta, xi=ge.north_pole(n)), p
                )
                combined = delta * base
                target = -(combined**2 - 1.0) / (combined**2 + 1.0)
                member = zn.hls_extremal_family(n, lam, target)
                ratio = out.values / member.values
                assert (np.max(ratio) - np.min(ratio)) / np.mean(ratio) < 1e-11

    @pytest.mark.parametrize("n,lam", [(1, 0.5), (2, 1.0), (3, 1.0), (3, 2.0)])
    def test_inverse_distance_quotient_invariant(self, n, lam):
        p = 2.0 * n / (2.0 * n - lam)
        rng = np.random.default_rng(19 + n)
        f = smooth_profile(n, rng)
        base = zn.hls_quotient(f, lam)
        for delta, sign in ((0.4, 1.0), (1.7, -1.0), (2.5, 1.0)):
            xi = ge.SpherePoint(coords=sign * np.asarray(ge.north_pole(n).coords))
            out = ge.transport(f, ge.ConformalMap(delta=delta, xi=xi), p)
            assert abs(zn.hls_quotient(out, lam) / base - 1.0) < 1e-9

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_gradient_quotient_invariant(self, n):
        q = 2.0 * n / (n - 2.0)
        rng = np.random.default_rng(23 + n)
        f = smooth_profile(n, rng)
        base = zn.sobolev_quotient(f)
        for delta in (0.4, 1.7, 2.5):
            out = ge.transport(f, ge.ConformalMap(delta=delta, xi=ge.north_pole(n)), q)
            assert abs(zn.sobolev_quotient(out) / base - 1.0) < 1e-9


class TestRadialGridAndValidation:
    def test_grid_shape(self):
        r = ge.radial_grid()
        assert r.size == ge.RADIAL_NUM and r[0] == ge.RADIAL_RMIN and r[-1] == ge.RADIAL_RMAX
        ratios = r[1:] / r[:-1]
        np.testing.assert_allclose(ratios, ratios[0], rtol=1e-12)

    def test_grid_guards(self):
        with pytest.raises(DomainError):
            ge.radial_grid(num=4)
        with pytest.raises(DomainError):
            ge.radial_grid(rmin=2.0, rmax=1.0)
        with pytest.raises(DomainError):
            ge.radial_grid(rmin=0.0)

    def test_radial_fn_guards(self):
        good = np.geomspace(0.1, 10.0, 16)
        with pytest.raises(UsageError):
            ge.RadialFn(dim=3, radii=good, values=np.ones(15), decay=3.0)
        with pytest.raises(UsageError):
            ge.RadialFn(dim=3, radii=good[:4], values=np.ones(4), decay=3.0)
        with pytest.raises(DomainError):
            ge.RadialFn(dim=3, radii=good[::-1], values=np.ones(16), decay=3.0)
        with pytest.raises(DomainError):
            ge.RadialFn(dim=3, radii=good, values=np.full(16, np.nan), decay=3.0)
        F = ge.RadialFn(dim=3, radii=good, values=np.ones(16), decay=3.0)
        with pytest.raises(ValueError):
            F.values[0] = 2.0


class TestRadialIntegrals:
    def test_closed_form_values(self):
        # int (1+r^2)^(-5/2) over R^3 = 4 pi / 3; over R^2 with power 3 = pi/2
        F3 = ge.radial_from_callable(3, lambda r: (1.0 + r * r) ** -2.5, decay=5.0)
        assert abs(ge.radial_integral(F3) / (4.0 * math.pi / 3.0) - 1.0) < 1e-11
        F2 = ge.radial_from_callable(2, lambda r: (1.0 + r * r) ** -3.0, decay=6.0)
        assert abs(ge.radial_integral(F2) / (math.pi / 2.0) - 1.0) < 1e-11

    def test_slow_tail_rejected(self):
        F = ge.radial_from_callable(3, lambda r: (1.0 + r * r) ** -1.0, decay=2.0)
        with pytest.raises(IntegrationError):
            ge.radial_integral(F)

    def test_lp_norm_closed_form(self):
        F = ge.radial_from_callable(3, lambda r: (1.0 + r * r) ** -1.0, decay=2.0)
        assert abs(ge.radial_lp_norm(F, 2.0) / math.pi - 1.0) < 1e-9

    def test_lp_norm_guards(self):
        F = ge.radial_from_callable(3, lambda r: (1.0 + r * r) ** -1.0, decay=2.0)
        with pytest.raises(DomainError):
            ge.radial_lp_norm(F, 0.0)
        with pytest.raises(IntegrationError):
            ge.radial_lp_norm(F, 1.2)


class TestPushAndLift:
    def test_constant_pushes_to_standard_bubble(self):
        for n, p in ((3, 2.0), (4, 3.0)):
            F = ge.push_to_plane(zn.zonal_constant(n), p)
            want = 2.0 ** (n / p) * (1.0 + F.radii**2) ** (-n / p)
            np.testing.assert_allclose(F.values, want, rtol=1e-14)
            assert F.decay == 2.0 * n / p

    def test_p_norm_equality_linear_profile(self):
        f = zn.zonal_from_callable(3, lambda t: 1.0 + 0.5 * t)
        F = ge.push_to_plane(f, 1.5)
        assert abs(ge.radial_lp_norm(F, 1.5) / zn.zonal_lp_norm(f, 1.5) - 1.0) < 1e-10

    @pytest.mark.parametrize("n,p", [(2, 4.0), (3, 3.0), (4, 8.0 / 3.0)])
    def test_p_norm_equality_random_profiles(self, n, p):
        rng = np.random.default_rng(30 + n)
        f = smooth_profile(n, rng, cap=1.5)
        F = ge.push_to_plane(f, p)
        assert abs(ge.radial_lp_norm(F, p) / zn.zonal_lp_norm(f, p) - 1.0) < 1e-10

    @pytest.mark.parametrize("n,p", [(2, 4.0), (3, 3.0), (3, 1.5), (4, 8.0 / 3.0), (5, 2.0)])
    def test_roundtrip_is_identity(self, n, p):
        rng = np.random.default_rng(40 + n)
        for _ in range(3):
            f = smooth_profile(n, rng, cap=1.5)
            back = ge.lift_to_sphere(ge.push_to_plane(f, p), p)
            rel = np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values))
            assert rel < 1e-12

    def test_lift_outside_window_rejected(self):
        narrow = np.geomspace(0.1, 10.0, 64)
        F = ge.radial_from_callable(
            3, lambda r: (1.0 + r * r) ** -1.0, decay=2.0, grid=narrow
        )
        with pytest.raises(IntegrationError):
            ge.lift_to_sphere(F, 2.0)

    def test_argument_guards(self):
        f = zn.zonal_constant(3)
        with pytest.raises(DomainError):
            ge.push_to_plane(f, 0.0)
        with pytest.raises(UsageError):
            ge.push_to_plane(np.ones(8), 2.0)
        F = ge.push_to_plane(f, 2.0)
        with pytest.raises(DomainError):
            ge.lift_to_sphere(F, -1.0)
        with pytest.raises(UsageError):
            ge.lift_to_sphere(np.ones(8), 2.0)


class TestRadialDerivative:
    def test_power_law(self):
        F = ge.radial_from_callable(3, lambda r: r**-2.0, decay=2.0)
        got = ge.radial_derivative(F)
        want = -2.0 * F.radii**-3.0
        assert np.max(np.abs(got / want - 1.0)) < 1e-8

    def test_log_polynomial(self):
        # the five-point stencil differentiates a cubic in log r exactly
        F = ge.radial_from_callable(3, lambda r: np.log(r) ** 3, decay=3.0)
        got = ge.radial_derivative(F) * F.radii
        want = 3.0 * np.log(F.radii) ** 2
        assert np.max(np.abs(got - want)) < 1e-8


class TestDirichletEnergy:
    def test_standard_bubble_closed_form(self):
        # sqrt(2) (1+r^2)^(-1/2) in R^3 carries energy 3 pi^2 / 2
        F = ge.radial_from_callable(
            3, lambda r: math.sqrt(2.0) * (1.0 + r * r) ** -0.5, decay=1.0
        )
        assert abs(ge.radial_dirichlet_energy(F) / (1.5 * math.pi**2) - 1.0) < 1e-8

    def test_matches_conformal_energy_of_constant(self):
        n = 3
        q = 2.0 * n / (n - 2.0)
        F = ge.push_to_plane(zn.zonal_constant(n), q)
        plane = ge.radial_dirichlet_energy(F)
        curved = zn.conformal_energy(zn.zonal_constant(n))
        assert abs(plane / curved - 1.0) < 1e-8
        assert abs(curved / (1.5 * math.pi**2) - 1.0) < 1e-12

    def test_matches_conformal_energy_linear_profile(self):
        f = zn.zonal_from_callable(3, lambda t: 1.0 + t / 3.0)
        plane = ge.radial_dirichlet_energy(ge.push_to_plane(f, 6.0))
        assert abs(plane / zn.conformal_energy(f) - 1.0) < 1e-6

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_matches_conformal_energy_random(self, n):
        q = 2.0 * n / (n - 2.0)
        rng = np.random.default_rng(50 + n)
        f = smooth_profile(n, rng)
        plane = ge.radial_dirichlet_energy(ge.push_to_plane(f, q))
        assert abs(plane / zn.conformal_energy(f) - 1.0) < 1e-7

    def test_zero_profile(self):
        F = ge.radial_from_callable(3, lambda r: 0.0 * r, decay=1.0)
        assert ge.radial_dirichlet_energy(F) == 0.0

    def test_guards(self):
        F2 = ge.radial_from_callable(2, lambda r: (1.0 + r * r) ** -0.5, decay=1.0)
        with pytest.raises(DomainError):
            ge.radial_dirichlet_energy(F2)
        slow = ge.radial_from_callable(5, lambda r: (1.0 + r * r) ** -0.5, decay=1.0)
        with pytest.raises(IntegrationError):
            ge.radial_dirichlet_energy(slow)
