import logging
import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from core import line_space_flat as flat
from core import tensor_core
from core.errors import ChartError, ConvexityError, DomainError
from core.models import OrientedLineCoords, SupportSurface
from core.surfaces import ellipsoid_support, round_sphere_support


def line_through(P, d) -> OrientedLineCoords:
    xi = flat.direction_to_xi(d)
    return OrientedLineCoords(xi=xi, eta=flat.incidence_eta(xi, P))


def random_states(rng, n, radius=0.8):
    out = []
    while len(out) < n:
        x, y = rng.uniform(-radius, radius, size=2)
        if math.hypot(x, y) < radius:
            out.append((complex(x, y), rng.uniform(0, 2 * math.pi)))
    return out


# ── Lines ─────────────────────────────────────────────────────────────────────

def test_vertical_line():
    line = line_through([1.0, 2.0, 3.0], [0.0, 0.0, 1.0])
    assert line.xi == 0
    assert flat.perpendicular_distance(line) == pytest.approx(math.sqrt(5))
    assert flat.line_to_points(line, 0.0) == pytest.approx([1.0, 2.0, 0.0])
    assert flat.line_to_points(line, 2.5) == pytest.approx([1.0, 2.0, 2.5])


def test_points_lie_on_the_line(rng):
    for _ in range(50):
        P = rng.normal(size=3)
        d = rng.normal(size=3)
        if d[2] < -0.5 * np.linalg.norm(d):
            d = -d
        line = line_through(P, d)
        unit = d / np.linalg.norm(d)
        assert flat.line_direction(line) == pytest.approx(unit, abs=1e-12)
        for r in (-2.0, 0.0, 3.0):
            offset = flat.line_to_points(line, r) - P
            assert np.linalg.norm(np.cross(offset, unit)) <= 1e-10
        foot = flat.line_to_points(line, 0.0)
        assert np.linalg.norm(foot) == pytest.approx(flat.perpendicular_distance(line), abs=1e-10)


def test_south_pole_is_outside_the_chart():
    with pytest.raises(ChartError):
        flat.direction_to_xi([0.0, 0.0, -1.0])


def test_flip_orientation(rng):
    for _ in range(20):
        line = OrientedLineCoords(xi=complex(*rng.normal(size=2)), eta=complex(*rng.normal(size=2)))
        flipped = flat.flip_orientation(line)
        assert flat.line_direction(flipped) == pytest.approx(-flat.line_direction(line), abs=1e-12)
        assert flat.line_to_points(flipped, 0.0) == pytest.approx(flat.line_to_points(line, 0.0), abs=1e-10)
        back = flat.flip_orientation(flipped)
        assert back.as_real() == pytest.approx(line.as_real(), abs=1e-12)


def test_flip_of_vertical_line_leaves_the_chart():
    with pytest.raises(ChartError):
        flat.flip_orientation(OrientedLineCoords(xi=0j, eta=1 + 0j))


def test_neutral_metric_and_symplectic_form(rng):
    for _ in range(20):
        line = OrientedLineCoords(xi=complex(*rng.normal(size=2)), eta=complex(*rng.normal(size=2)))
        G = flat.neutral_metric_L(line)
        W = flat.symplectic_form_L(line)
        assert np.max(np.abs(G - G.T)) == 0.0
        assert np.max(np.abs(W + W.T)) == 0.0
        assert tensor_core.signature(G) == (2, 2, 0)
        assert abs(np.linalg.det(W)) > 0


def line_family(R: np.ndarray, T: np.ndarray):
    """Lines through R(p0, p1, 0) + T with direction R(p2, p3, 1)/|·|, as real chart coordinates."""
    def chart(p: np.ndarray) -> np.ndarray:
        d = np.array([p[2], p[3], 1.0])
        return line_through(R @ np.array([p[0], p[1], 0.0]) + T, R @ (d / np.linalg.norm(d))).as_real()
    return chart


def test_neutral_metric_is_invariant_under_euclidean_motions(rng):
    ambient = flat.line_space_metric_field()
    for _ in range(5):
        R = Rotation.from_rotvec(rng.normal(scale=0.4, size=3)).as_matrix()
        T = rng.normal(size=3)
        p = np.append(rng.normal(size=2), rng.normal(scale=0.3, size=2))
        before = tensor_core.pullback_metric(line_family(np.eye(3), np.zeros(3)), ambient, p)
        after = tensor_core.pullback_metric(line_family(R, T), ambient, p)
        assert after == pytest.approx(before, abs=1e-6)


def test_fibre_directions_are_null(rng):
    for _ in range(20):
        line = OrientedLineCoords(xi=complex(*rng.normal(size=2)), eta=complex(*rng.normal(size=2)))
        G = flat.neutral_metric_L(line)
        assert np.array_equal(G[2:, 2:], np.zeros((2, 2)))
        v = np.array([0.0, 0.0, *rng.normal(size=2)])
        assert v @ G @ v == 0.0


def test_normal_congruence_is_lagrangian(ellipsoid, rng):
    def section(z):
        return flat.surface_jet(ellipsoid, z).eta0

    for nu, _ in random_states(rng, 10):
        assert abs(flat.lagrangian_defect(section, nu)) <= 1e-6


def test_conjugate_section_is_not_lagrangian():
    assert flat.lagrangian_defect(lambda nu: nu.conjugate(), complex(0.3, 0.4)) == pytest.approx(0.384, abs=1e-6)


# ── Support functions ─────────────────────────────────────────────────────────

def test_round_sphere_jet():
    jet = flat.surface_jet(round_sphere_support(2.0), complex(0.3, -0.2))
    assert jet.r0 == pytest.approx(2.0)
    assert abs(jet.eta0) <= 1e-12
    assert jet.psi0 == pytest.approx(2.0, abs=1e-12)
    assert abs(jet.sigma0) <= 1e-12
    assert jet.curvature_radii == pytest.approx((2.0, 2.0), abs=1e-12)


def test_ellipsoid_radii_at_the_pole(ellipsoid):
    jet = flat.surface_jet(ellipsoid, 0j)
    assert jet.curvature_radii == pytest.approx((1.125, 0.5), abs=1e-10)


def test_support_points_lie_on_the_ellipsoid(ellipsoid, rng):
    axes = np.array([1.0, 1.5, 2.0])
    for nu, _ in random_states(rng, 20, radius=2.0):
        point = flat.support_point(flat.surface_jet(ellipsoid, nu))
        assert np.sum((point / axes) ** 2) == pytest.approx(1.0, abs=1e-10)


def test_normal_lines_of_a_sphere_meet_its_centre(rng):
    centre = np.array([0.5, -1.0, 2.0])
    S = round_sphere_support(1.5, centre)
    for nu, _ in random_states(rng, 10, radius=3.0):
        jet = flat.surface_jet(S, nu)
        assert flat.perpendicular_distance(flat.normal_line(jet), centre) <= 1e-10
        point = flat.support_point(jet)
        assert (point - centre) / 1.5 == pytest.approx(flat.xi_to_direction(nu), abs=1e-10)


def test_finite_difference_jet_matches_analytic(ellipsoid):
    bare = SupportSurface(name="ellipsoid_no_derivatives", r0=ellipsoid.r0)
    nu = complex(0.4, 0.2)
    analytic, numeric = flat.surface_jet(ellipsoid, nu), flat.surface_jet(bare, nu)
    assert numeric.psi0 == pytest.approx(analytic.psi0, abs=1e-4)
    assert abs(numeric.sigma0 - analytic.sigma0) <= 1e-4
    assert abs(numeric.eta0 - analytic.eta0) <= 1e-8


def test_jet_outside_the_domain():
    with pytest.raises(DomainError):
        flat.surface_jet(round_sphere_support(1.0), 2000j)


def test_non_convex_support_function():
    with pytest.raises(ConvexityError):
        flat.surface_jet(SupportSurface(name="negative", r0=lambda nu: -1.0), 0.1 + 0j)


# ── Tangent hypersurface ──────────────────────────────────────────────────────

def test_tangent_lines_touch_the_sphere(rng):
    centre = np.array([0.0, 1.0, -0.5])
    S = round_sphere_support(2.0, centre)
    for nu, A in random_states(rng, 20):
        jet = flat.surface_jet(S, nu)
        line = flat.tangent_hypersurface_point(jet, A)
        assert flat.perpendicular_distance(line, centre) == pytest.approx(2.0, abs=1e-10)
        assert flat.line_direction(line) @ flat.xi_to_direction(nu) == pytest.approx(0.0, abs=1e-12)
        assert flat.tangent_angle(nu, flat.line_direction(line)) == pytest.approx(A, abs=1e-10)


def test_tangent_lines_touch_the_ellipsoid(ellipsoid, rng):
    Q_inv = np.diag([1.0, 1.5, 2.0]) ** -2.0
    for nu, A in random_states(rng, 20, radius=2.0):
        line = flat.tangent_hypersurface_point(flat.surface_jet(ellipsoid, nu), A)
        p, d = flat.line_to_points(line, 0.0), flat.line_direction(line)
        # minimum of xᵀQ⁻¹x along the line: 1 exactly when the line touches the surface
        closest = p @ Q_inv @ p - (p @ Q_inv @ d) ** 2 / (d @ Q_inv @ d)
        assert closest == pytest.approx(1.0, abs=1e-9)


def test_hypersurface_sample_wraps_the_angle(unit_sphere):
    sample = flat.hypersurface_sample(flat.surface_jet(unit_sphere, 0.2j), 7.0)
    assert sample.A == pytest.approx(7.0 - 2 * math.pi)


def test_tangent_line_leaving_the_chart(unit_sphere):
    with pytest.raises(ChartError):
        flat.tangent_hypersurface_point(flat.surface_jet(unit_sphere, 1 + 0j), 0.0)


def test_induced_metric_matches_pullback(ellipsoid, rng):
    chart = flat.hypersurface_chart_map(ellipsoid)
    metric = flat.line_space_metric_field()
    for nu, A in random_states(rng, 20):
        jet = flat.surface_jet(ellipsoid, nu)
        closed = flat.induced_metric_H(jet, A)
        numeric = tensor_core.pullback_metric(chart, metric, [nu.real, nu.imag, A])
        assert np.max(np.abs(numeric - closed)) <= 1e-6 * max(1.0, np.max(np.abs(closed)))
        assert np.linalg.det(closed) == 0.0
        assert abs(np.linalg.det(numeric)) <= 1e-8
        assert np.all(closed[2] == 0.0)


def test_null_directions(ellipsoid, rng):
    for nu, A in random_states(rng, 20):
        jet = flat.surface_jet(ellipsoid, nu)
        M = flat.induced_metric_H(jet, A)[:2, :2]
        angles = flat.null_direction_angles(jet, A)
        for B in angles:
            v = np.array([math.cos(B), math.sin(B)])
            assert abs(v @ M @ v) <= 1e-12
        roots = flat.null_direction_scan(jet, A)
        assert len(roots) == 2
        expected = sorted(B % math.pi for B in angles)
        gaps = [min(abs(r - e) % math.pi, math.pi - abs(r - e) % math.pi) for r, e in zip(roots, expected)]
        swapped = [min(abs(r - e) % math.pi, math.pi - abs(r - e) % math.pi)
                   for r, e in zip(roots, expected[::-1])]
        assert min(max(gaps), max(swapped)) <= 1e-8


def test_beta_null_direction_is_perpendicular_to_the_line(ellipsoid):
    jet = flat.surface_jet(ellipsoid, complex(0.2, 0.1))
    _, b_beta = flat.null_direction_angles(jet, 0.4)
    assert b_beta == pytest.approx(0.4 + math.pi / 2)


# ── Contact structures ────────────────────────────────────────────────────────

def test_contact_defects(ellipsoid, rng):
    for nu, A in random_states(rng, 10):
        jet = flat.surface_jet(ellipsoid, nu)
        forms = flat.contact_forms_H(jet, A)
        assert forms.defect_minus == -2.0
        assert forms.defect_plus == pytest.approx(-2 * jet.delta / jet.D ** 2)
        assert forms.defect_plus < 0
        plus = flat.contact_defect_numeric(ellipsoid, nu, A, "plus")
        assert abs(plus - forms.defect_plus) <= 1e-6 * abs(forms.defect_plus)
        assert flat.contact_defect_numeric(ellipsoid, nu, A, "minus") == pytest.approx(-2.0, abs=1e-6)


def test_contact_forms_annihilate_the_vertical_direction(ellipsoid):
    forms = flat.contact_forms_H(flat.surface_jet(ellipsoid, complex(0.3, 0.3)), 1.0)
    assert forms.omega_plus[2] == 0.0
    assert forms.omega_minus[2] == 0.0


def test_constant_angle_nullity_matches_pullback(ellipsoid, rng):
    eps = 0.5
    for nu, A in random_states(rng, 10):
        jet = flat.surface_jet(ellipsoid, nu)
        pulled = flat.constant_angle_pullback(ellipsoid, nu, A, eps)
        assert abs(np.linalg.det(pulled) - flat.constant_angle_nullity(jet, A, eps)) <= 1e-6


def test_constant_angle_hypersurface_of_a_sphere_is_null(unit_sphere):
    jet = flat.surface_jet(unit_sphere, complex(0.1, 0.5))
    assert flat.constant_angle_nullity(jet, 0.9, 0.3) == 0.0


@pytest.mark.parametrize("eps", [0.0, 1.0, 1.5])
def test_constant_angle_parameter_range(unit_sphere, eps):
    with pytest.raises(DomainError):
        flat.constant_angle_nullity(flat.surface_jet(unit_sphere, 0j), 0.0, eps)


# ── Reeb and geodesic flows ───────────────────────────────────────────────────

def test_reeb_field_normalization_and_kernel(ellipsoid, rng):
    for nu, A in random_states(rng, 10):
        w, dw = flat.reeb_contract_residual(ellipsoid, nu, A)
        assert abs(w) <= 1e-7
        assert dw <= 1e-7


def test_reeb_field_is_the_rotated_geodesic_field(ellipsoid, rng):
    for nu, A in random_states(rng, 10):
        jet = flat.surface_jet(ellipsoid, nu)
        assert flat.reeb_field_flat(jet, A) == pytest.approx(flat.geodesic_field_flat(jet, A - math.pi / 2), abs=1e-12)


def test_meridian_geodesic(unit_sphere):
    traj = flat.geodesic_flow(unit_sphere, (0j, 0.0), 0.01, 200)
    assert traj.t[-1] == pytest.approx(2.0)
    assert abs(traj.nu[-1] - math.tan(1.0)) <= 1e-6
    assert np.max(np.abs(traj.nu.imag)) <= 1e-12
    points = flat.trajectory_points(unit_sphere, traj)
    assert np.linalg.norm(points, axis=1) == pytest.approx(np.ones(len(points)), abs=1e-10)


def test_equator_geodesic(unit_sphere):
    traj = flat.geodesic_flow(unit_sphere, (1 + 0j, math.pi / 2), 0.01, 1000)
    assert np.max(np.abs(traj.nu - np.exp(1j * traj.t))) <= 1e-6
    assert np.max(np.abs(traj.A - traj.t - math.pi / 2)) <= 1e-6


def test_reeb_flow_is_geodesic_flow_rotated(unit_sphere):
    geo = flat.geodesic_flow(unit_sphere, (0.3 + 0.1j, 0.5), 0.01, 300)
    reeb = flat.reeb_flow(unit_sphere, (0.3 + 0.1j, 0.5 + math.pi / 2), 0.01, 300)
    assert np.max(np.abs(reeb.nu - geo.nu)) <= 1e-9
    assert np.max(np.abs(reeb.A - geo.A - math.pi / 2)) <= 1e-9


def test_flow_aborts_when_convexity_is_lost(caplog):
    cap = SupportSurface(
        name="flattening_cap",
        r0=lambda nu: 2.0 - 0.5 * abs(nu) ** 2,
        gradient=lambda nu: np.array([-nu.real, -nu.imag]),
        hessian=lambda nu: np.array([-1.0, 0.0, -1.0]),
    )
    with caplog.at_level(logging.WARNING, logger="core.line_space_flat"):
        with pytest.raises(ConvexityError):
            flat.geodesic_flow(cap, (0j, 0.0), 0.05, 200)
    assert "lost strict convexity" in caplog.text


def joachimsthal(nu: complex, tangent: np.ndarray, axes=(1.0, 1.5, 2.0)) -> float:
    Q = np.diag(np.asarray(axes) ** 2)
    n = flat.xi_to_direction(nu)
    return math.sqrt((n @ Q @ n) / (tangent @ np.linalg.inv(Q) @ tangent))


def test_ellipsoid_geodesic_keeps_its_first_integral(ellipsoid):
    traj = flat.geodesic_flow(ellipsoid, (0.3 + 0.1j, 0.5), 0.01, 200)
    lines = [flat.tangent_hypersurface_point(flat.surface_jet(ellipsoid, nu), A) for nu, A in zip(traj.nu, traj.A)]
    values = [joachimsthal(nu, flat.line_direction(line)) for nu, line in zip(traj.nu, lines)]
    assert np.max(np.abs(np.array(values) - values[0])) <= 2e-6
    points = flat.trajectory_points(ellipsoid, traj)
    assert np.sum((points / np.array([1.0, 1.5, 2.0])) ** 2, axis=1) == pytest.approx(np.ones(201), abs=1e-10)


def test_ellipsoid_reeb_flow_refines_a_coarse_step(ellipsoid, caplog):
    with caplog.at_level(logging.INFO, logger="core.flows"):
        traj = flat.reeb_flow(ellipsoid, (0.2 - 0.3j, 1.0), 0.4, 5)
    assert "refined" in caplog.text
    assert traj.t == pytest.approx(0.4 * np.arange(6))
    values = [ellipsoid.geodesic_integral(nu, flat.line_direction(
        flat.tangent_hypersurface_point(flat.surface_jet(ellipsoid, nu), A - math.pi / 2)))
        for nu, A in zip(traj.nu, traj.A)]
    assert np.max(np.abs(np.array(values) - values[0])) <= 2e-6 * 1.01


def test_sphere_integral_is_the_squared_radius(unit_sphere, rng):
    for nu, _ in random_states(rng, 5):
        t = np.cross(flat.xi_to_direction(nu), rng.normal(size=3))
        assert unit_sphere.geodesic_integral(nu, t / np.linalg.norm(t)) == pytest.approx(1.0, abs=1e-12)
