import math

import numpy as np
import pytest

from trifluid import (
    EnergyParams,
    Interface,
    NotStationary,
    PolyConfig,
    RegionLoop,
    SurfaceTensions,
    TangentialCrossing,
    TestField,
    compute_monotonicity_trace,
    config_from_json,
    config_to_json,
    conical_projection,
    energy_FS,
    energy_FSWP,
    first_variation_residual,
    fourth_power_integral,
    gamma_deviation,
    make_chord_config,
    sharp_monotonicity_check,
    stationarity_battery,
    weak_monotonicity_terms,
)
from trifluid.polyconfig import SEGMENT, _loop_arc_length, _loop_area, _loop_y_moment

from _oracles import (
    chord_gamma_closed_form,
    circular_segment_area,
    circular_segment_y_moment,
    upper_arc_length,
)

S345 = SurfaceTensions(3.0, 4.0, 5.0)
S_EQ = SurfaceTensions(1.0, 1.0, 1.0)


def unit(a):
    return np.array([math.cos(a), math.sin(a)])


def star_config(angles_pairs, R=1.5, s=S_EQ, length=None):
    """Rays from the origin at the given (pair, angle) list."""
    L = R if length is None else length
    ifaces = tuple(
        Interface(pair=p, points=np.array([[0.0, 0.0], (L * unit(a)).tolist()]))
        for p, a in angles_pairs
    )
    return PolyConfig(domain_radius=R, tensions=s, interfaces=ifaces)


def balanced_junction(s=S_EQ, R=1.5):
    # Angles between consecutive rays realize the Neumann angles:
    # each interface direction is opposite the resultant of the others.
    from trifluid import neumann_angles

    ang = neumann_angles(s)
    a01 = 0.0
    a02 = a01 + ang.opening_of_fluid(0)  # fluid 0 occupies (a01, a02)
    a12 = a02 + ang.opening_of_fluid(2)  # fluid 2 between a02 and a12
    return star_config(
        [((0, 1), a01), ((0, 2), a02), ((1, 2), a12)], R=R, s=s
    )


class TestEnergyFS:
    def test_diameter(self):
        c = make_chord_config(SurfaceTensions(2.0, 1.5, 1.2), d=0.0)
        assert energy_FS(c) == pytest.approx(4.0, rel=1e-14)

    def test_chord_closed_form(self):
        for d in (0.2, 0.4, 0.6, 0.8):
            c = make_chord_config(S345, d=d)
            assert energy_FS(c, 1.0) == pytest.approx(
                2.0 * 3.0 * math.sqrt(1.0 - d * d), rel=1e-13
            )

    def test_ball_excludes_chord(self):
        c = make_chord_config(S345, d=0.6)
        assert energy_FS(c, 0.5) == 0.0

    def test_offset_ball(self):
        c = make_chord_config(S345, d=0.0)
        # ball of radius 0.2 centered on the chord at (0.5, 0)
        assert energy_FS(c, (np.array([0.5, 0.0]), 0.2)) == pytest.approx(
            3.0 * 0.4, rel=1e-13
        )

    def test_ball_outside_domain_rejected(self):
        c = make_chord_config(S345, d=0.0)
        with pytest.raises(ValueError):
            energy_FS(c, (np.array([0.9, 0.0]), 0.5))

    def test_polyline_additivity(self):
        # splitting a segment into collinear pieces changes nothing
        pts = np.array([[-0.8, 0.1], [0.8, 0.1]])
        pts_split = np.array([[-0.8, 0.1], [-0.1, 0.1], [0.3, 0.1], [0.8, 0.1]])
        c1 = PolyConfig(1.0, S345, (Interface((0, 1), pts),))
        c2 = PolyConfig(1.0, S345, (Interface((0, 1), pts_split),))
        assert energy_FS(c1, 0.7) == pytest.approx(energy_FS(c2, 0.7), rel=1e-14)


class TestRegions:
    def test_area_validation(self):
        bad = RegionLoop(
            vertices=np.array([[-0.5, 0.0], [0.5, 0.0], [0.0, 0.5]]),
            kinds=(SEGMENT, SEGMENT, SEGMENT),
        )
        with pytest.raises(ValueError):
            PolyConfig(1.0, S345, (), regions=((bad,), (), ()))

    def test_loop_integrals_chord(self):
        R, d = 1.0, 0.35
        c = make_chord_config(S345, d=d, R=R)
        up, low = c.regions[0][0], c.regions[1][0]
        assert _loop_area(up, R) == pytest.approx(circular_segment_area(R, d), rel=1e-12)
        assert _loop_area(low, R) == pytest.approx(
            math.pi * R * R - circular_segment_area(R, d), rel=1e-12
        )
        assert _loop_y_moment(up, R) == pytest.approx(
            circular_segment_y_moment(R, d), rel=1e-12
        )
        # whole-disk first moment about y vanishes
        assert _loop_y_moment(up, R) + _loop_y_moment(low, R) == pytest.approx(
            0.0, abs=1e-12
        )
        assert _loop_arc_length(up, R) == pytest.approx(upper_arc_length(R, d), rel=1e-12)
        assert _loop_arc_length(up, R) + _loop_arc_length(low, R) == pytest.approx(
            2.0 * math.pi * R, rel=1e-12
        )

    def test_full_circle_loop(self):
        R = 2.0
        loop = RegionLoop(vertices=np.array([[R, 0.0]]), kinds=(1,))
        assert _loop_area(loop, R) == pytest.approx(math.pi * R * R, rel=1e-12)
        assert _loop_arc_length(loop, R) == pytest.approx(2.0 * math.pi * R, rel=1e-12)
        assert _loop_y_moment(loop, R) == pytest.approx(0.0, abs=1e-12)


class TestEnergyFSWP:
    def test_surface_only(self):
        c = make_chord_config(S345, d=0.3)
        p = EnergyParams(sigmas=S345, betas=(0, 0, 0), rhos=(0, 0, 0), g=0.0)
        b = energy_FSWP(c, p)
        assert b.total == b.surface == pytest.approx(energy_FS(c), rel=1e-14)
        assert b.wetting == b.gravity == 0.0

    def test_closed_forms(self):
        R, d = 1.0, 0.35
        c = make_chord_config(S345, d=d, R=R)
        p = EnergyParams(
            sigmas=S345, betas=(0.6, -0.4, 0.0), rhos=(1.0, 2.5, 0.0), g=9.8
        )
        b = energy_FSWP(c, p)
        arc_up = upper_arc_length(R, d)
        arc_low = 2.0 * math.pi * R - arc_up
        my_up = circular_segment_y_moment(R, d)
        assert b.wetting == pytest.approx(0.6 * arc_up - 0.4 * arc_low, rel=1e-12)
        assert b.gravity == pytest.approx(
            1.0 * 9.8 * my_up + 2.5 * 9.8 * (-my_up), rel=1e-12
        )
        assert b.total == pytest.approx(b.surface + b.wetting + b.gravity, rel=1e-14)

    def test_heavier_fluid_below_is_cheaper(self):
        R, d = 1.0, 0.0
        c_heavy_below = make_chord_config(S345, d=d, R=R)
        p = EnergyParams(sigmas=S345, betas=(0, 0, 0), rhos=(1.0, 3.0, 0.0), g=9.8)
        b = energy_FSWP(c_heavy_below, p)
        # flipped densities put the heavy fluid on top: more gravity energy
        p_flip = EnergyParams(sigmas=S345, betas=(0, 0, 0), rhos=(3.0, 1.0, 0.0), g=9.8)
        b_flip = energy_FSWP(c_heavy_below, p_flip)
        assert b.gravity < b_flip.gravity

    def test_missing_regions_raises(self):
        c = make_chord_config(S345, d=0.3, with_regions=False)
        p = EnergyParams(sigmas=S345, betas=(0.1, 0, 0), rhos=(0, 0, 0), g=0.0)
        with pytest.raises(ValueError):
            energy_FSWP(c, p)


class TestGamma:
    def test_chord_closed_form(self):
        for d in (0.2, 0.5, 0.6):
            c = make_chord_config(S345, d=d)
            for r in (0.7, 0.9, 1.0):
                assert gamma_deviation(c, r) == pytest.approx(
                    chord_gamma_closed_form(3.0, r, d), abs=1e-10
                )

    def test_zero_below_offset(self):
        c = make_chord_config(S345, d=0.6)
        assert gamma_deviation(c, 0.5) == 0.0

    def test_radial_rays_vanish(self):
        c = balanced_junction()
        assert gamma_deviation(c, 1.0) == 0.0

    def test_scipy_quad_oracle(self):
        from scipy.integrate import quad

        pts = np.array([[-0.9, -0.2], [0.1, 0.5], [0.8, 0.1]])
        c = PolyConfig(1.2, S345, (Interface((1, 2), pts),))
        r = 1.0
        total = 0.0
        for k in range(len(pts) - 1):
            p, q = pts[k], pts[k + 1]
            L = float(np.hypot(*(q - p)))
            tang = (q - p) / L
            nu = np.array([tang[1], -tang[0]])
            d = float(nu @ p)

            def f(s):
                x = p + (s / L) * (q - p)
                return d * d / float(np.hypot(*x)) ** 3

            from trifluid.geometry import segment_ball_interval

            sub = segment_ball_interval(p, q, r)
            if sub:
                val, _ = quad(f, sub[0] * L, sub[1] * L, epsabs=1e-13, epsrel=1e-13)
                total += val
        assert gamma_deviation(c, r) == pytest.approx(5.0 * total, abs=1e-9)


class TestMonotonicity:
    def test_weak_on_chords(self):
        for d in (0.0, 0.3, 0.6):
            c = make_chord_config(S345, d=d)
            for rho, r in [(0.65, 1.0), (0.7, 0.9), (0.8, 1.0)]:
                if rho <= d:
                    continue
                t = weak_monotonicity_terms(c, rho, r, C=0.0)
                assert t.lhs <= t.rhs + 1e-12

    def test_weak_on_junction(self):
        c = balanced_junction(S345, R=1.5)
        t = weak_monotonicity_terms(c, 0.5, 1.4, C=0.25)
        assert t.fourth_power == 0.0
        assert t.scaled_inner == pytest.approx(t.scaled_outer, rel=1e-14)
        assert t.lhs <= t.rhs + 1e-12

    def test_fourth_power_positive_off_radial(self):
        c = make_chord_config(S345, d=0.3)
        v = fourth_power_integral(c, 0.5, 1.0)
        assert v > 0.0

    def test_sharp_identity_chord(self):
        c = make_chord_config(S345, d=0.6)
        res = sharp_monotonicity_check(c, [0.7, 0.85, 1.0 - 1e-4])
        assert np.all(res < 1e-8)

    def test_sharp_identity_junction(self):
        c = balanced_junction(S345)
        res = sharp_monotonicity_check(c, [0.3, 0.7, 1.2])
        assert np.all(res < 1e-8)

    def test_not_stationary_raises(self):
        # unbalanced 90/135/135 equal-tension star
        c = star_config(
            [((0, 1), 0.0), ((1, 2), 0.5 * math.pi), ((0, 2), 1.25 * math.pi)]
        )
        with pytest.raises(NotStationary):
            sharp_monotonicity_check(c, [0.5])

    def test_trace_columns(self):
        c = make_chord_config(S345, d=0.3)
        radii = np.linspace(0.4, 1.0, 7)
        tr = compute_monotonicity_trace(c, radii, C=0.5)
        assert tr.fourth_power[0] == 0.0
        assert np.all(np.diff(tr.fourth_power) >= 0.0)
        assert tr.correction == pytest.approx(0.5 * radii**2)
        assert tr.scaled_energy[-1] == pytest.approx(energy_FS(c, 1.0), rel=1e-13)
        # for a single chord, gamma equals the scaled energy at every radius
        assert tr.gamma == pytest.approx(tr.scaled_energy, abs=1e-9)


class TestFirstVariation:
    def test_balanced_junction_battery(self):
        assert stationarity_battery(balanced_junction()) < 1e-10
        assert stationarity_battery(balanced_junction(S345)) < 1e-10

    def test_straight_line_stationary(self):
        c = make_chord_config(S345, d=0.2)
        assert stationarity_battery(c) < 1e-10

    def test_unbalanced_junction_offset_field(self):
        c = star_config(
            [((0, 1), 0.0), ((1, 2), 0.5 * math.pi), ((0, 2), 1.25 * math.pi)]
        )
        tau_sum = unit(0.0) + unit(0.5 * math.pi) + unit(1.25 * math.pi)
        r = 1.0
        center = 0.5 * r * tau_sum / np.hypot(*tau_sum)
        res = first_variation_residual(c, TestField(center=center, radius=r))
        # closed form: phi(1/2) * (J - c).(sum sigma tau) with J at the origin
        expected = 0.5 * r * np.hypot(*tau_sum)
        assert abs(res) == pytest.approx(expected, abs=1e-10)
        assert abs(res) > 0.05 * 1.0 * r

    def test_telescoping_closed_form(self):
        # For any star of long rays and any admissible radial field, the
        # residual telescopes to -phi(u(J)) (J-c).sum(sigma tau).
        rng = np.random.default_rng(5)
        for _ in range(10):
            angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, 3))
            if np.min(np.diff(angles)) < 0.3:
                continue
            pairs = [(0, 1), (1, 2), (0, 2)]
            c = star_config(list(zip(pairs, angles)), R=2.0, s=S345)
            center = rng.uniform(-0.2, 0.2, 2)
            radius = rng.uniform(0.6, 0.9)
            res = first_variation_residual(c, TestField(center=center, radius=radius))
            sigmas = [3.0, 5.0, 4.0]  # sigma01, sigma12, sigma02
            tau_sum = sum(s * unit(a) for s, a in zip(sigmas, angles))
            u = np.hypot(*center) / radius
            T = TestField(center=center, radius=radius)
            expected = -T.phi(u) * float(np.dot(-center, tau_sum))
            assert res == pytest.approx(expected, abs=1e-9)

    def test_field_containment_enforced(self):
        c = make_chord_config(S345, d=0.0)
        with pytest.raises(ValueError):
            first_variation_residual(
                c, TestField(center=np.array([0.8, 0.0]), radius=0.5)
            )

    def test_custom_profile(self):
        c = star_config(
            [((0, 1), 0.0), ((1, 2), 0.5 * math.pi), ((0, 2), 1.25 * math.pi)]
        )
        # quadratic bump profile, C^1 at the outer edge only
        phi = lambda u: (1.0 - u * u) ** 2 if u < 1.0 else 0.0
        dphi = lambda u: -4.0 * u * (1.0 - u * u) if u < 1.0 else 0.0
        center = np.array([0.3, 0.1])
        T = TestField(center=center, radius=0.8, profile=phi, profile_derivative=dphi)
        res = first_variation_residual(c, T)
        tau_sum = unit(0.0) + unit(0.5 * math.pi) + unit(1.25 * math.pi)
        u = np.hypot(*center) / 0.8
        expected = -phi(u) * float(np.dot(-center, tau_sum))
        assert res == pytest.approx(expected, abs=1e-9)


class TestConicalProjection:
    def test_example_inside_replaced(self):
        pts = np.array([[0.1, 0.0], [0.9, 0.0], [0.9, 0.9]])
        c = PolyConfig(1.5, S_EQ, (Interface((0, 1), pts),))
        pj = conical_projection(c, 0.5)
        assert len(pj.interfaces) == 1
        got = pj.interfaces[0].points
        assert got[0] == pytest.approx([0.0, 0.0])
        assert np.hypot(*got[1]) == pytest.approx(0.5, abs=1e-12)

    def test_idempotent(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = rng.integers(2, 6)
            pts = rng.uniform(-0.9, 0.9, size=(n, 2))
            try:
                c = PolyConfig(1.5, S_EQ, (Interface((0, 2), pts),))
                p1 = conical_projection(c, 0.55)
                p2 = conical_projection(p1, 0.55)
            except TangentialCrossing:
                continue
            assert len(p1.interfaces) == len(p2.interfaces)
            for a, b in zip(p1.interfaces, p2.interfaces):
                assert a.points == pytest.approx(b.points, abs=1e-12)

    def test_cone_unchanged(self):
        c = balanced_junction(S345, R=1.5)
        pj = conical_projection(c, 0.6)
        assert energy_FS(pj) == pytest.approx(energy_FS(c), rel=1e-12)
        assert energy_FS(pj, 0.6) == pytest.approx(energy_FS(c, 0.6), rel=1e-12)

    def test_interior_energy_identity(self):
        rng = np.random.default_rng(15)
        t = 0.5
        for _ in range(20):
            n = rng.integers(2, 6)
            pts = rng.uniform(-1.1, 1.1, size=(n, 2))
            try:
                c = PolyConfig(1.5, S345, (Interface((0, 1), pts),))
                pj = conical_projection(c, t)
            except TangentialCrossing:
                continue
            crossings = sum(
                int(np.hypot(*i.points[0]) < 1e-12) + int(np.hypot(*i.points[-1]) < 1e-12)
                for i in pj.interfaces
            )
            assert energy_FS(pj, t) == pytest.approx(
                t * 3.0 * crossings, rel=1e-12, abs=1e-12
            )

    def test_tangential_raises(self):
        pts = np.array([[-1.0, 0.5], [1.0, 0.5]])  # tangent to |x| = 0.5
        c = PolyConfig(1.5, S_EQ, (Interface((0, 1), pts),))
        with pytest.raises(TangentialCrossing):
            conical_projection(c, 0.5)

    def test_grazing_vertex_raises(self):
        pts = np.array([[-0.8, 0.0], [0.0, 0.5], [0.8, 0.0]])  # touches at apex
        c = PolyConfig(1.5, S_EQ, (Interface((0, 1), pts),))
        with pytest.raises(TangentialCrossing):
            conical_projection(c, 0.5)

    def test_fully_outside_kept(self):
        pts = np.array([[0.8, 0.0], [0.8, 0.8]])
        c = PolyConfig(1.5, S_EQ, (Interface((0, 1), pts),))
        pj = conical_projection(c, 0.5)
        assert pj.interfaces[0].points == pytest.approx(pts)

    def test_fully_inside_dropped(self):
        pts = np.array([[0.1, 0.0], [0.2, 0.1]])
        c = PolyConfig(1.5, S_EQ, (Interface((0, 1), pts),))
        pj = conical_projection(c, 0.5)
        assert len(pj.interfaces) == 0


class TestSerialization:
    def test_roundtrip(self):
        c = make_chord_config(S345, d=0.4, with_regions=False)
        text = config_to_json(c)
        c2 = config_from_json(text, S345)
        assert c2.domain_radius == c.domain_radius
        assert len(c2.interfaces) == 1
        assert c2.interfaces[0].pair == (0, 1)
        assert c2.interfaces[0].points == pytest.approx(c.interfaces[0].points)

    def test_deterministic(self):
        c = balanced_junction(S345)
        assert config_to_json(c) == config_to_json(c)


class TestValidation:
    def test_interface_outside_domain(self):
        with pytest.raises(ValueError):
            PolyConfig(
                0.5, S345, (Interface((0, 1), np.array([[0.0, 0.0], [1.0, 0.0]])),)
            )

    def test_bad_pair(self):
        with pytest.raises(ValueError):
            Interface((1, 0), np.array([[0.0, 0.0], [1.0, 0.0]]))
        with pytest.raises(ValueError):
            Interface((0, 3), np.array([[0.0, 0.0], [1.0, 0.0]]))

    def test_degenerate_segment(self):
        with pytest.raises(ValueError):
            Interface((0, 1), np.array([[0.1, 0.1], [0.1, 0.1]]))

    def test_field_validation(self):
        with pytest.raises(ValueError):
            TestField(center=np.array([0.0, 0.0]), radius=-1.0)
        with pytest.raises(ValueError):
            TestField(center=np.array([0.0, 0.0]), radius=1.0, profile=lambda u: 1.0)
