import math

import numpy as np
import pytest

from core import line_space_flat as flat
from core import line_space_spaceform as sf
from core.errors import DomainError
from core.models import LineKnot
from core.surfaces import CliffordTorus, LatitudeSphere

FLAT = ("alpha", "beta", "tangent_to_c", "normal_to_c", "curvature_line_or_umbilic")
SPACEFORM = ("alpha", "beta", "normal_to_c", "curvature_line_or_umbilic")
N = 401


def names(flags, fields) -> set[str]:
    return {f for f in fields if getattr(flags, f)}


def principal_section(A: float) -> LineKnot:
    s = np.linspace(-0.5, 0.5, N)
    return LineKnot(u=s, nu=s, A=np.full(N, A))


@pytest.mark.parametrize("A, expected", [
    (math.pi / 2, {"beta", "normal_to_c", "curvature_line_or_umbilic"}),
    (0.0, {"alpha", "tangent_to_c", "curvature_line_or_umbilic"}),
    (math.pi / 4, {"curvature_line_or_umbilic"}),
])
def test_lines_along_a_principal_section(ellipsoid, A, expected):
    assert names(flat.legendrian_classify(principal_section(A), ellipsoid), FLAT) == expected


def test_lines_along_a_diagonal(ellipsoid):
    u = np.linspace(0.1, 0.5, N)
    nu = u * complex(math.cos(math.pi / 6), math.sin(math.pi / 6))
    fixed = LineKnot(u=u, nu=nu, A=np.full(N, 2 * math.pi / 3))
    assert names(flat.legendrian_classify(fixed, ellipsoid), FLAT) == {"beta"}
    normal = flat.knot_along_curve(ellipsoid, nu, u, "normal")
    assert names(flat.legendrian_classify(normal, ellipsoid), FLAT) == {"normal_to_c"}
    generic = LineKnot(u=u, nu=nu, A=np.zeros(N))
    assert names(flat.legendrian_classify(generic, ellipsoid), FLAT) == set()


@pytest.mark.parametrize("mode, expected", [
    ("tangent", {"alpha", "tangent_to_c", "curvature_line_or_umbilic"}),
    ("normal", {"beta", "normal_to_c", "curvature_line_or_umbilic"}),
])
def test_closed_knots_over_a_sphere_latitude(unit_sphere, mode, expected):
    u = 2 * math.pi * np.arange(N) / (N - 1)
    circle = 0.5 * np.exp(1j * u)
    circle[-1] = circle[0]
    knot = flat.knot_along_curve(unit_sphere, circle, u, mode, closed=True)
    assert knot.closed
    assert names(flat.legendrian_classify(knot, unit_sphere), FLAT) == expected


def test_knot_validation():
    with pytest.raises(ValueError):
        LineKnot(u=[0.0, 1.0, 2.0], nu=[0, 0, 0], A=[0, 0, 0])
    with pytest.raises(ValueError):
        LineKnot(u=np.arange(6.0), nu=np.arange(6.0), A=np.zeros(6), closed=True)
    with pytest.raises(ValueError):
        LineKnot(u=np.arange(6.0), nu=np.arange(5.0), A=np.zeros(6))


def test_knot_parameter_must_increase(ellipsoid):
    knot = principal_section(0.0)
    backwards = LineKnot(u=knot.u[::-1], nu=knot.nu, A=knot.A)
    with pytest.raises(DomainError):
        flat.legendrian_classify(backwards, ellipsoid)


def test_repeated_samples_are_rejected(ellipsoid):
    u = np.arange(6.0)
    nu = np.array([0.0, 0.1, 0.1, 0.2, 0.3, 0.4])
    with pytest.raises(DomainError):
        flat.legendrian_classify(LineKnot(u=u, nu=nu, A=np.zeros(6)), ellipsoid)


# ── Space forms ───────────────────────────────────────────────────────────────

def meridian(theta: float):
    sphere = LatitudeSphere(1.0)
    u = np.linspace(0.0, 1.0, N)
    return sphere, u, 0.8 + u / sphere.size, np.full(N, 0.4), np.full(N, theta)


@pytest.mark.parametrize("theta, expected", [
    (0.0, {"alpha", "curvature_line_or_umbilic"}),
    (math.pi / 2, {"beta", "normal_to_c", "curvature_line_or_umbilic"}),
    (math.pi / 4, {"curvature_line_or_umbilic"}),
])
def test_meridians_of_an_umbilic_sphere(theta, expected):
    sphere, u, a, b, th = meridian(theta)
    assert names(sf.legendrian_classify_spaceform(sphere, u, a, b, th), SPACEFORM) == expected


def test_clifford_torus_curves():
    r = 0.6
    torus = CliffordTorus(r)
    u = np.linspace(0.0, 1.0, N)
    circle = sf.legendrian_classify_spaceform(torus, u, 0.2 + u / math.cos(r), np.full(N, 0.4),
                                              np.full(N, math.pi / 2))
    assert names(circle, SPACEFORM) == {"beta", "normal_to_c", "curvature_line_or_umbilic"}
    helix_theta = math.atan2(math.cos(r), -math.sin(r))
    helix = sf.legendrian_classify_spaceform(torus, u, 0.2 + u, 0.4 + u, np.full(N, helix_theta))
    assert names(helix, SPACEFORM) == {"normal_to_c"}


def test_contact_curve_must_have_unit_speed():
    sphere, u, a, b, th = meridian(0.0)
    with pytest.raises(DomainError):
        sf.legendrian_classify_spaceform(sphere, u, 0.8 + 2 * u / sphere.size, b, th)
